#include "laxfactor/suites.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "laxfactor/dynamics.hpp"
#include "laxfactor/factorization.hpp"
#include "laxfactor/rmatrix.hpp"
#include "laxfactor/sampling.hpp"
#include "laxfactor/schlesinger.hpp"

namespace laxfactor {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::Identity: return "identity";
        case Provenance::Oracle: return "oracle";
        case Provenance::Control: return "control";
    }
    return "?";
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::ExpectedFail: return "expected-fail";
        case Outcome::UnexpectedPass: return "unexpected-pass";
    }
    return "?";
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "special-functions", "factorization", "rank-one",     "irf-vertex", "theorem1",
        "theorem2",          "zero-curvature", "root-systems", "dynamics",   "lax-equation"};
    return names;
}

void SuiteConfig::validate() const {
    require(!suites.empty(), ErrorKind::ConfigError, "no suites selected");
    const auto& known = suite_names();
    for (const auto& s : suites)
        require(std::find(known.begin(), known.end(), s) != known.end(), ErrorKind::ConfigError,
                "unknown suite '" + s + "'");
    require(!classes.empty(), ErrorKind::ConfigError, "no function classes selected");
    require(!taus.empty(), ErrorKind::ConfigError, "no moduli given");
    for (cplx t : taus) require(t.imag() > 0.0, ErrorKind::ConfigError, "tau must have positive imaginary part");
    require(tau.imag() > 0.0, ErrorKind::ConfigError, "tau must have positive imaginary part");
    if (N_range)
        require(N_range->first >= 2 && N_range->second >= N_range->first && N_range->second <= 8,
                ErrorKind::ConfigError, "N range must satisfy 2 <= lo <= hi <= 8");
    require(points >= 1 && special_points >= 1, ErrorKind::ConfigError, "point counts must be positive");
    for (const auto& [name, tol] : tolerance_overrides) {
        require(std::find(known.begin(), known.end(), name) != known.end(), ErrorKind::ConfigError,
                "tolerance override for unknown suite '" + name + "'");
        require(tol > 0.0, ErrorKind::ConfigError, "tolerance overrides must be positive");
    }
}

namespace {

using RunFn = std::function<double(Rng&)>;

class Builder {
public:
    Builder(std::string suite, std::vector<CaseSpec>& out) : suite_(std::move(suite)), out_(out) {}

    void add(const std::string& id, Provenance prov, double tol, RunFn fn,
             std::optional<double> control_threshold = std::nullopt) {
        CaseSpec c;
        c.suite = suite_;
        c.id = suite_ + "/" + id;
        c.provenance = prov;
        c.tolerance = tol;
        c.control_threshold = control_threshold;
        const std::string label = c.id;
        c.run = [label, fn = std::move(fn)](std::uint64_t seed) {
            Rng rng = make_rng(seed, label);
            return fn(rng);
        };
        out_.push_back(std::move(c));
    }

private:
    std::string suite_;
    std::vector<CaseSpec>& out_;
};

std::vector<int> sizes(const SuiteConfig& cfg, int lo, int hi) {
    if (cfg.N_range) lo = cfg.N_range->first, hi = cfg.N_range->second;
    std::vector<int> out;
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
}

bool has_class(const SuiteConfig& cfg, ClassKind k) {
    return std::find(cfg.classes.begin(), cfg.classes.end(), k) != cfg.classes.end();
}

FunctionClass make_class(ClassKind k, cplx tau) {
    switch (k) {
        case ClassKind::Elliptic: return FunctionClass::elliptic(tau);
        case ClassKind::Trigonometric: return FunctionClass::trigonometric();
        case ClassKind::Rational: return FunctionClass::rational();
    }
    return FunctionClass::rational();
}

std::string tag(const std::string& a, int N) { return a + "/N" + std::to_string(N); }

std::string tau_tag(cplx t) {
    std::ostringstream s;
    s << "tau=" << t.real() << (t.imag() < 0 ? "-" : "+") << std::abs(t.imag()) << "i";
    return s.str();
}

double rel_diff(const Matrix& a, const Matrix& b) { return max_abs(Matrix(a - b)) / (1.0 + max_abs(b)); }

double tf_diff(const Matrix& a, const Matrix& b) { return max_abs(Matrix(trace_free(a) - trace_free(b))); }

// max over `points` draws of fn
double worst(int points, const std::function<double()>& fn) {
    double w = 0.0;
    for (int i = 0; i < points; ++i) w = std::max(w, fn());
    return w;
}

ModelSpec model_spec(Model m, const FunctionClass& cls, bool spectral, int N, const SuiteConfig& cfg) {
    ModelSpec s;
    s.model = m;
    s.cls = cls;
    s.spectral = spectral;
    s.N = N;
    if (m == Model::CM) {
        s.nu = cfg.nu;
    } else {
        s.hbar = cfg.hbar;
        s.c = cfg.c;
    }
    return s;
}

PhaseSampler sampler_for(const ModelSpec& s) {
    PhaseSampler ps;
    if (s.relativistic()) ps.shifts = {s.hbar, -s.hbar};
    return ps;
}

std::string mode_tag(bool spectral) { return spectral ? "spectral" : "no-spectral"; }

// ------------------------------------------------------------- special functions

// draws a point until every listed combination keeps its distance from the lattice
cplx cell_point(Rng& rng, const FunctionClass& cls) {
    if (cls.is_elliptic()) return uniform(rng, -0.5, 0.5) + uniform(rng, -0.5, 0.5) * cls.tau();
    return cplx(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
}

template <std::size_t K>
std::array<cplx, K> draw(Rng& rng, const FunctionClass& cls, const std::function<std::vector<cplx>(const std::array<cplx, K>&)>& combos) {
    for (int tries = 0; tries < 100000; ++tries) {
        std::array<cplx, K> a;
        for (auto& v : a) v = cell_point(rng, cls);
        bool ok = true;
        for (cplx c : combos(a)) ok = ok && cls.pole_distance(c) > 0.1;
        if (ok) return a;
    }
    fail(ErrorKind::DegenerateConfiguration, "could not draw admissible sample points");
}

// sum over the lattice rows of pi^2 / sin^2(pi (z + n tau)); equals E2 exactly
cplx e2_lattice_sum(cplx z, cplx tau) {
    const int M = int(std::ceil(40.0 / (2.0 * pi * tau.imag()))) + 2;
    cplx s = 0.0;
    for (int n = -M; n <= M; ++n) {
        const cplx sn = std::sin(pi * (z + double(n) * tau));
        s += pi * pi / (sn * sn);
    }
    return s;
}

// constant Laurent term of the lattice sum at 0
cplx e2_lattice_constant(cplx tau) {
    const int M = int(std::ceil(40.0 / (2.0 * pi * tau.imag()))) + 2;
    cplx s = pi * pi / 3.0;
    for (int n = 1; n <= M; ++n) {
        const cplx sn = std::sin(pi * double(n) * tau);
        s += 2.0 * pi * pi / (sn * sn);
    }
    return s;
}

void special_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    Builder b("special-functions", out);
    const int P = cfg.special_points;
    using A2 = std::array<cplx, 2>;
    using A3 = std::array<cplx, 3>;
    using A4 = std::array<cplx, 4>;

    auto fay_cases = [&](const FunctionClass& cls, const std::string& where) {
        b.add(where + "/fay", Provenance::Identity, 1e-10, [cls, P](Rng& r) {
            return worst(P, [&] {
                const A4 a = draw<4>(r, cls, [](const A4& v) {
                    return std::vector<cplx>{v[0], v[1], v[2], v[3], v[0] - v[1], v[2] + v[3]};
                });
                const double scale = 1.0 + std::abs(cls.phi(a[2], a[0]) * cls.phi(a[3], a[1]));
                return fay_residual(a[0], a[1], a[2], a[3], cls) / scale;
            });
        });
        b.add(where + "/fay-degenerate", Provenance::Identity, 1e-10, [cls, P](Rng& r) {
            return worst(P, [&] {
                const A3 a = draw<3>(r, cls, [](const A3& v) {
                    return std::vector<cplx>{v[0], v[1], v[2], v[1] + v[2], v[0] + v[1] + v[2]};
                });
                const double scale = 1.0 + std::abs(cls.phi(a[1], a[0]) * cls.phi(a[2], a[0]));
                return fay_degenerate_residual(a[0], a[1], a[2], cls) / scale;
            });
        });
        b.add(where + "/fay-wp", Provenance::Identity, 1e-10, [cls, P](Rng& r) {
            return worst(P, [&] {
                const A2 a = draw<2>(r, cls, [](const A2& v) { return std::vector<cplx>{v[0], v[1], v[0] + v[1], v[0] - v[1]}; });
                const double scale = 1.0 + std::abs(cls.wp(a[0])) + std::abs(cls.wp(a[1]));
                return fay_wp_residual(a[0], a[1], cls) / scale;
            });
        });
        b.add(where + "/e1-square", Provenance::Identity, 1e-10, [cls, P](Rng& r) {
            return worst(P, [&] {
                const A2 a = draw<2>(r, cls, [](const A2& v) { return std::vector<cplx>{v[0], v[1], v[0] + v[1]}; });
                const double scale = 1.0 + std::abs(cls.wp(a[0])) + std::abs(cls.wp(a[1])) + std::abs(cls.wp(a[0] + a[1]));
                return e1_square_residual(a[0], a[1], cls) / scale;
            });
        });
    };

    if (has_class(cfg, ClassKind::Elliptic)) {
        for (cplx tau : cfg.taus) {
            const FunctionClass E = FunctionClass::elliptic(tau);
            const std::string w = "elliptic/" + tau_tag(tau);
            fay_cases(E, w);
            b.add(w + "/heat-theta", Provenance::Identity, 1e-10, [E, tau, P](Rng& r) {
                return worst(P, [&] {
                    const cplx z = cell_point(r, E);
                    return heat_residual(z, tau) / (1.0 + std::abs(theta(z, tau, 2)));
                });
            });
            b.add(w + "/heat-phi", Provenance::Identity, 1e-10, [E, tau, P](Rng& r) {
                return worst(P, [&] {
                    const A2 a = draw<2>(r, E, [](const A2& v) { return std::vector<cplx>{v[0], v[1]}; });
                    return heat_phi_residual(a[0], a[1], tau) / (1.0 + std::abs(E.f(a[0], a[1])));
                });
            });
            b.add(w + "/heat-log-theta", Provenance::Identity, 1e-10, [E, tau, P](Rng& r) {
                return worst(P, [&] {
                    const A2 a = draw<2>(r, E, [](const A2& v) { return std::vector<cplx>{v[0]}; });
                    return heat_log_residual(a[0], tau) / (1.0 + std::abs(E.e2(a[0])));
                });
            });
            b.add(w + "/quasi-periodicity", Provenance::Identity, 1e-10, [E, tau, P](Rng& r) {
                return worst(P, [&] {
                    const A2 a = draw<2>(r, E, [](const A2& v) { return std::vector<cplx>{v[0], v[1]}; });
                    const cplx z = a[0], q = a[1];
                    const cplx t0 = theta(z, tau), t1 = theta(z + 1.0, tau), tt = theta(z + tau, tau);
                    const cplx factor = std::exp(-I * pi * tau - 2.0 * I * pi * z);
                    double r1 = std::abs(t1 + t0) / std::max(1.0, std::abs(t0));
                    r1 = std::max(r1, std::abs(tt + factor * t0) / std::max(1.0, std::abs(tt)));
                    const cplx p0 = E.phi(z, q);
                    const double sp = 1.0 + std::abs(p0);
                    r1 = std::max(r1, std::abs(E.phi(z + 1.0, q) - p0) / sp);
                    r1 = std::max(r1, std::abs(E.phi(z + tau, q) - std::exp(-2.0 * pi * I * q) * p0) / sp);
                    const cplx e0 = E.e1(z);
                    r1 = std::max(r1, std::abs(E.e1(z + 1.0) - e0) / (1.0 + std::abs(e0)));
                    r1 = std::max(r1, std::abs(E.e1(z + tau) - e0 + 2.0 * pi * I) / (1.0 + std::abs(e0)));
                    return r1;
                });
            });
            b.add(w + "/e2-lattice-sum", Provenance::Oracle, 1e-10, [E, tau, P](Rng& r) {
                return worst(P, [&] {
                    const A2 a = draw<2>(r, E, [](const A2& v) { return std::vector<cplx>{v[0]}; });
                    const cplx ref = e2_lattice_sum(a[0], tau);
                    return std::abs(E.e2(a[0]) - ref) / (1.0 + std::abs(ref));
                });
            });
            // wp with zero constant Laurent term, so E2 - wp = -theta'''/(3 theta')
            b.add(w + "/wp-constant", Provenance::Oracle, 1e-10, [E, tau, P](Rng& r) {
                const cplx c0 = e2_lattice_constant(tau);
                double res = std::abs(E.th_third0() / (3.0 * E.th_prime0()) + c0) / (1.0 + std::abs(c0));
                return std::max(res, worst(P, [&] {
                    const A2 a = draw<2>(r, E, [](const A2& v) { return std::vector<cplx>{v[0]}; });
                    const cplx ref = e2_lattice_sum(a[0], tau) - c0;
                    return std::abs(E.wp(a[0]) - ref) / (1.0 + std::abs(ref));
                }));
            });
        }
    }
    for (ClassKind k : {ClassKind::Trigonometric, ClassKind::Rational})
        if (has_class(cfg, k)) fay_cases(make_class(k, cfg.tau), to_string(k));
}

// ------------------------------------------------------------- factorization

void factorization_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    Builder b("factorization", out);
    const int P = cfg.points;
    for (ClassKind k : cfg.classes) {
        const FunctionClass cls = make_class(k, cfg.tau);
        for (bool spectral : {true, false}) {
            if (cls.is_elliptic() && !spectral) continue;
            for (Model m : {Model::RS, Model::RSprime, Model::CM}) {
                const bool rel = m != Model::CM;
                std::vector<FactorForm> forms{FactorForm::Primary};
                if (has_alternative_form(cls, spectral, rel)) forms.push_back(FactorForm::Alternative);
                for (FactorForm form : forms)
                    for (int N : sizes(cfg, 2, 5)) {
                        const ModelSpec spec = model_spec(m, cls, spectral, N, cfg);
                        const std::string id = tag(std::string(to_string(k)) + "/" + mode_tag(spectral) + "/" +
                                                       to_string(m) +
                                                       (form == FactorForm::Primary ? "" : "/alternative"),
                                                   N);
                        b.add(id, Provenance::Identity, 1e-9, [spec, form, P](Rng& r) {
                            return worst(P, [&] {
                                const PhasePoint x = sample_phase(r, spec.cls, spec.N, sampler_for(spec));
                                const cplx z = sample_z(r);
                                const Matrix direct = lax_matrix(spec, x, z);
                                const Matrix fac =
                                    spec.model == Model::CM
                                        ? factorized_lax_cm(spec.cls, spec.spectral, x, z, spec.nu, form)
                                        : factorized_lax_rs(spec.cls, spec.spectral, x, z, spec.hbar, spec.c,
                                                            spec.model == Model::RSprime, form);
                                return rel_diff(fac, direct);
                            });
                        });
                    }
            }
        }
    }
    if (!has_class(cfg, ClassKind::Elliptic)) return;
    for (cplx tau : cfg.taus)
        for (int N : sizes(cfg, 2, 5)) {
            const FunctionClass E = FunctionClass::elliptic(tau);
            b.add(tag("elliptic/det-xi/" + tau_tag(tau), N), Provenance::Oracle, 1e-9, [E, tau, N, P](Rng& r) {
                const Intertwiner g(IntertwinerKind::EllipticXi, E, N);
                return worst(P, [&] {
                    const PhasePoint x = sample_phase(r, E, N);
                    const cplx z = sample_z(r);
                    const cplx ref = det_xi_closed_form(z, x.q, tau);
                    return std::abs(g.xi(z, x.q).determinant() - ref) / std::abs(ref);
                });
            });
            b.add(tag("elliptic/det-xi-sign/" + tau_tag(tau), N), Provenance::Identity, 1e-12,
                  [E, tau, N, P](Rng& r) {
                      const double sign = ((N * (N - 1) / 2) % 2) ? -1.0 : 1.0;
                      return worst(P, [&] {
                          const PhasePoint x = sample_phase(r, E, N);
                          const cplx z = sample_z(r);
                          const cplx a = det_xi_closed_form(z, x.q, tau, true);
                          const cplx c = det_xi_closed_form(z, x.q, tau);
                          return std::abs(a - sign * c) / std::abs(c);
                      });
                  });
        }
}

// ------------------------------------------------------------- rank one

void rank_one_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    if (!has_class(cfg, ClassKind::Elliptic)) return;
    Builder b("rank-one", out);
    const cplx tau = cfg.tau, h = cfg.hbar, c = cfg.c, nu = cfg.nu;
    const FunctionClass E = FunctionClass::elliptic(tau);
    const int P = std::min(cfg.points, 10);
    PhaseSampler ps;
    ps.shifts = {h, -h};
    for (int N : sizes(cfg, 2, 4)) {
        b.add(tag("sigma-ratio", N), Provenance::Identity, 1e-10, [=](Rng& r) {
            return worst(P, [&] {
                const PhasePoint x = sample_phase(r, E, N, ps);
                const Matrix S = spin_from_phase(x, h, c, true, 0.0, tau).S;
                const auto sv = singular_values(S);
                return sv(1) / sv(0);
            });
        });
        b.add(tag("psi-collinear", N), Provenance::Identity, 1e-9, [=](Rng& r) {
            return worst(P, [&] {
                const PhasePoint x = sample_phase(r, E, N, ps);
                const Vector a = spin_from_phase(x, h, c, true, 0.0, tau).psi;
                const Vector bb = psi_from_hbar(x.q, h, tau);
                return compare_up_to_scalar(a, bb) / (1.0 + max_abs(a));
            });
        });
        b.add(tag("gauge-equivalence", N), Provenance::Identity, 1e-9, [=](Rng& r) {
            return worst(P, [&] {
                const PhasePoint x = sample_phase(r, E, N, ps);
                const GaugeResidual g = gauge_equivalence_residual(x, sample_z(r), h, c, tau);
                return std::max(g.gauge, g.pole_cancel);
            });
        });
        b.add(tag("column-identity", N), Provenance::Identity, 1e-9, [=](Rng& r) {
            return worst(P, [&] {
                const PhasePoint x = sample_phase(r, E, N, ps);
                return column_identity_residual(x.q, sample_z(r), h, tau);
            });
        });
        // nu S^RS(hbar = nu/c) -> S^CM as c grows. The order is read off the last decade
        // c = 1e3 -> 1e4; at c = 1e2 the 1/c^2 term can still dominate when the 1/c
        // coefficient nearly cancels. residual is how far the order sits below 1
        b.add(tag("nonrelativistic-order", N), Provenance::Identity, 0.05, [=](Rng& r) {
            double shortfall = 0.0;
            for (int i = 0; i < 3; ++i) {
                const PhasePoint x = sample_phase(r, E, N, ps);
                const Matrix target = spin_from_phase(x, 0.0, 1.0, false, nu, tau).S;
                auto err = [&](double cc) {
                    return max_abs(Matrix(nu * spin_from_phase(x, nu / cc, cc, true, 0.0, tau).S - target));
                };
                shortfall = std::max(shortfall, 1.0 - std::log10(err(1e3) / err(1e4)));
            }
            return std::max(shortfall, 0.0);
        });
    }
}

// ------------------------------------------------------------- R-matrices

void irf_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    if (!has_class(cfg, ClassKind::Elliptic)) return;
    Builder b("irf-vertex", out);
    const cplx tau = cfg.tau, h = cfg.hbar;
    const FunctionClass E = FunctionClass::elliptic(tau);
    const int P = std::min(cfg.points, 10);
    PhaseSampler ps;
    ps.shifts = {h, -h};
    auto spectral_points = [](Rng& r) {
        return std::array<cplx, 3>{cplx(uniform(r, 0.1, 0.4), uniform(r, -0.2, 0.2)),
                                   cplx(uniform(r, -0.4, -0.1), uniform(r, -0.2, 0.2)),
                                   cplx(uniform(r, -0.1, 0.1), uniform(r, 0.25, 0.45))};
    };
    for (int N : sizes(cfg, 2, 3)) {
        for (RKind kind : {RKind::BaxterBelavin, RKind::Felder, RKind::ACF}) {
            b.add(tag(std::string("yang-baxter/") + to_string(kind), N), Provenance::Identity, 1e-9, [=](Rng& r) {
                return worst(P, [&] {
                    RMatrixSpec s{kind, N, h, tau, std::nullopt};
                    if (kind != RKind::BaxterBelavin) s.dynamical_q = sample_phase(r, E, N, ps).q;
                    const auto z = spectral_points(r);
                    return yang_baxter_residual(s, z[0], z[1], z[2]);
                });
            });
        }
        for (IrfVariant v : {IrfVariant::Felder_BB, IrfVariant::ACF_Felder, IrfVariant::ACF_BB, IrfVariant::Residue}) {
            b.add(tag(std::string("irf/") + to_string(v), N), Provenance::Identity, 1e-8, [=](Rng& r) {
                return worst(P, [&] {
                    const Vector q = sample_phase(r, E, N, ps).q;
                    const auto z = spectral_points(r);
                    return irf_vertex_residual(v, N, h, tau, q, z[0], z[1]);
                });
            });
        }
        // Res_{z=0} R^hbar(z) = N P_12
        b.add(tag("residue-permutation", N), Provenance::Identity, 1e-10, [=](Rng&) {
            const RMatrixSpec s{RKind::BaxterBelavin, N, h, tau, std::nullopt};
            const Matrix res = residue_at([&](cplx z) { return r_matrix(s, z, 0.0).matrix(); }, 0.0);
            return max_abs(Matrix(res - double(N) * permutation_operator(N).matrix()));
        });
        b.add(tag("acf-residue", N), Provenance::Identity, 1e-10, [=](Rng& r) {
            return worst(P, [&] {
                const Vector q = sample_phase(r, E, N, ps).q;
                return max_abs(Matrix(acf_residue(N, h, tau, q, sample_z(r)) - o_operator(N).matrix()));
            });
        });
    }
}

// ------------------------------------------------------------- theorem 1

void theorem1_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    Builder b("theorem1", out);
    const int P = cfg.points;
    for (ClassKind k : cfg.classes) {
        const FunctionClass cls = make_class(k, cfg.tau);
        for (bool spectral : {true, false}) {
            if (cls.is_elliptic() && !spectral) continue;
            for (int N : cls.is_elliptic() ? sizes(cfg, 2, 3) : sizes(cfg, 2, 4)) {
                const ModelSpec spec = model_spec(Model::RS, cls, spectral, N, cfg);
                const std::string base = std::string(to_string(k)) + "/" + mode_tag(spectral);
                b.add(tag(base + "/m-matrix", N), Provenance::Identity, 1e-8, [spec, P](Rng& r) {
                    return worst(P, [&] {
                        const PhasePoint x = sample_phase(r, spec.cls, spec.N, sampler_for(spec));
                        const cplx z = sample_z(r);
                        const Theorem1M t = m_rs_theorem1(spec.cls, spec.spectral, x, z, spec.hbar, spec.c);
                        return tf_diff(t.M, m_rs(spec, x, z));
                    });
                });
                if (!cls.is_elliptic()) continue;
                b.add(tag(base + "/g-is-total-velocity", N), Provenance::Identity, 1e-10, [spec, P](Rng& r) {
                    return worst(P, [&] {
                        const PhasePoint x = sample_phase(r, spec.cls, spec.N, sampler_for(spec));
                        const Theorem1M t = m_rs_theorem1(spec.cls, true, x, sample_z(r), spec.hbar, spec.c);
                        const cplx total = velocity_map(spec, x).sum();
                        return max_abs(Matrix(t.G - total * Matrix::Identity(spec.N, spec.N)));
                    });
                });
                b.add(tag(base + "/hbar-inverse-irf", N), Provenance::Identity, 1e-10, [spec, P](Rng& r) {
                    return worst(P, [&] {
                        const PhasePoint x = sample_phase(r, spec.cls, spec.N, sampler_for(spec));
                        return irf_hbar_inverse_residual(x.q, sample_z(r), spec.cls.tau());
                    });
                });
            }
        }
    }
}

// ------------------------------------------------------------- theorem 2

void theorem2_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    Builder b("theorem2", out);
    const int P = cfg.points;
    for (ClassKind k : cfg.classes) {
        const FunctionClass cls = make_class(k, cfg.tau);
        for (bool spectral : {true, false}) {
            if (cls.is_elliptic() && !spectral) continue;
            for (int N : sizes(cfg, 2, 4)) {
                const ModelSpec spec = model_spec(Model::CM, cls, spectral, N, cfg);
                const std::string base = std::string(to_string(k)) + "/" + mode_tag(spectral);
                b.add(tag(base + "/m-matrix", N), Provenance::Identity, 1e-8, [spec, P](Rng& r) {
                    return worst(P, [&] {
                        const PhasePoint x = sample_phase(r, spec.cls, spec.N);
                        const cplx z = sample_z(r);
                        return tf_diff(m_cm_theorem2(spec.cls, spec.spectral, x, z, spec.nu), m_cm(spec, x, z));
                    });
                });
                if (cls.is_elliptic()) {
                    b.add(tag(base + "/m-matrix-flow-form", N), Provenance::Identity, 1e-8, [spec, P](Rng& r) {
                        return worst(P, [&] {
                            const PhasePoint x = sample_phase(r, spec.cls, spec.N);
                            const cplx z = sample_z(r);
                            return tf_diff(m_cm_theorem2_full(x, z, spec.nu, spec.cls.tau()), m_cm(spec, x, z));
                        });
                    });
                    b.add(tag(base + "/proof-identities", N), Provenance::Identity, 1e-9, [spec, P](Rng& r) {
                        return worst(P, [&] {
                            const PhasePoint x = sample_phase(r, spec.cls, spec.N);
                            const ProofIdentities p = theorem2_proof_identities(x.q, sample_z(r), spec.cls.tau());
                            return std::max({p.l_diag, p.recursion, p.off_diag, p.delta_sum, p.diag_closed});
                        });
                    });
                }
                // the sinh gauge paired with Xi-tilde only closes for N = 2
                if (k == ClassKind::Trigonometric && spectral && N >= 3) {
                    b.add(tag(base + "/m-matrix-sinh-gauge", N), Provenance::Control, 1e-8, [spec, P](Rng& r) {
                        return worst(P, [&] {
                            const PhasePoint x = sample_phase(r, spec.cls, spec.N);
                            const cplx z = sample_z(r);
                            return tf_diff(m_cm_theorem2(spec.cls, true, x, z, spec.nu, Theorem2Gauge::TrigXiSinh),
                                           m_cm(spec, x, z));
                        });
                    });
                }
            }
        }
    }
}

// ------------------------------------------------------------- zero curvature and coupling shift

void zero_curvature_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    Builder b("zero-curvature", out);
    const int P = cfg.points;
    const cplx nu = cfg.nu;
    for (ClassKind k : cfg.classes) {
        if (k == ClassKind::Trigonometric) continue;
        const FunctionClass cls = make_class(k, cfg.tau);
        for (bool spectral : {true, false}) {
            if (cls.is_elliptic() && !spectral) continue;
            for (int N : sizes(cfg, 2, 4))
                b.add(tag(std::string("coupling-shift/") + to_string(k) + "/" + mode_tag(spectral), N),
                      Provenance::Identity, 1e-10, [cls, spectral, N, P](Rng& r) {
                          return worst(P, [&] {
                              const PhasePoint x = sample_phase(r, cls, N);
                              const cplx nu0(uniform(r, -1.0, 1.0), uniform(r, -0.3, 0.3));
                              return schlesinger_shift_residual(cls, spectral, x, sample_z(r), nu0);
                          });
                      });
        }
    }
    if (!has_class(cfg, ClassKind::Elliptic)) return;
    const cplx tau = cfg.tau;
    const FunctionClass E = FunctionClass::elliptic(tau);
    b.add("coupling-shift/scalar", Provenance::Identity, 1e-10, [tau, P](Rng& r) {
        return worst(P, [&] {
            const cplx nu0(uniform(r, -1.0, 1.0), uniform(r, -0.3, 0.3));
            return scalar_schlesinger_residual(nu0, sample_z(r), tau);
        });
    });
    const int Z = std::min(P, 5);
    for (int N : sizes(cfg, 2, 3)) {
        auto run = [E, tau, nu, N, Z](Rng& r, const std::function<double(const ZeroCurvature&)>& pick) {
            return worst(Z, [&] {
                const PhasePoint x = sample_phase(r, E, N);
                return pick(zero_curvature_residual(x.q, x.p, sample_z(r), nu, tau));
            });
        };
        b.add(tag("residual", N), Provenance::Identity, 1e-6,
              [run](Rng& r) { return run(r, [](const ZeroCurvature& z) { return z.residual; }); });
        // without the identity shift the defect is exactly nu 2 pi i d_tau E1(z) times 1
        b.add(tag("defect-is-identity", N), Provenance::Identity, 1e-6, [run](Rng& r) {
            return run(r, [](const ZeroCurvature& z) {
                return std::max(std::abs(z.unshifted - z.predicted_defect) / z.predicted_defect, z.defect_trace_free);
            });
        });
        b.add(tag("residual-unshifted", N), Provenance::Control, 1e-6,
              [run](Rng& r) { return run(r, [](const ZeroCurvature& z) { return z.unshifted; }); });
        b.add(tag("heat-corollary", N), Provenance::Identity, 1e-10, [E, tau, nu, N, P](Rng& r) {
            return worst(P, [&] {
                const PhasePoint x = sample_phase(r, E, N);
                return heat_corollary_residual(x.q, x.p, sample_z(r), nu, tau);
            });
        });
    }
}

// ------------------------------------------------------------- root systems

PhasePoint sample_bcn(Rng& r, int N) {
    Vector q(N), v(N);
    for (int i = 0; i < N; ++i) {
        bool ok = false;
        while (!ok) {
            q(i) = uniform(r, 0.5, 2.5);
            ok = true;
            for (int k = 0; k < i; ++k) ok = ok && std::abs(q(i) - q(k)) > 0.3;
        }
        v(i) = uniform(r, -0.4, 0.4);
    }
    return PhasePoint(q, v);
}

BCNSpec preset_spec(RootSystem root, int N) {
    const cplx m2(0.0, 0.7), m4(0.0, 0.4);
    switch (root) {
        case RootSystem::Bn: return BCNSpec::bn(N, m2);
        case RootSystem::Cn: return BCNSpec::cn(N, m2, m4);
        case RootSystem::Dn: return BCNSpec::dn(N, m2);
        case RootSystem::BCn: break;
    }
    fail(ErrorKind::InvalidArgument, "no preset for the generic BCn system");
}

double isospectral_drift(const BCNSpec& spec, const PhasePoint& qv) {
    return conservation_report(integrate(spec, qv, 1.0, 1e-11), 0.0).eigenvalue_drift;
}

void root_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    Builder b("root-systems", out);
    const int P = cfg.points;
    std::vector<RootSystem> presets{RootSystem::Bn, RootSystem::Cn, RootSystem::Dn};
    if (cfg.preset) presets = {*cfg.preset};
    for (RootSystem root : presets) {
        const std::string name = to_string(root);
        for (int N : sizes(cfg, 2, 4)) {
            const BCNSpec spec = preset_spec(root, N);
            b.add(tag(name + "/factorization", N), Provenance::Identity, 1e-10, [spec, P](Rng& r) {
                return worst(P, [&] {
                    const PhasePoint qv = sample_bcn(r, spec.N);
                    const PhasePoint x(qv.q, bcn_momentum_from_velocity(spec, qv.q, qv.p));
                    if (spec.root == RootSystem::Bn) return rel_diff(factorized_lax_b(spec, x), lax_bcn(spec, x));
                    return rel_diff(factorized_lax_dc(spec, x), lax_bcn_truncated(spec, x));
                });
            });
            b.add(tag(name + "/constraint", N), Provenance::Identity, 1e-12,
                  [spec](Rng&) { return std::abs(spec.constraint_value()); });
            b.add(tag(name + "/isospectral", N), Provenance::Identity, 1e-7,
                  [spec](Rng& r) { return isospectral_drift(spec, sample_bcn(r, spec.N)); });
        }
    }
    for (int N : sizes(cfg, 2, 4)) {
        b.add(tag("vandermonde-block", N), Provenance::Identity, 1e-10, [N, P](Rng& r) {
            return worst(P, [&] {
                const VandermondeBlockIdentities a = vandermonde_block_identities(sample_bcn(r, N).q);
                return std::max({a.j_block, a.even_sum, a.corners, a.b_diag, a.sign_flip});
            });
        });
        // generic m1 breaks the constraint; the spectrum must then move
        b.add(tag("isospectral-constraint-violated", N), Provenance::Control, 1e-7,
              [N](Rng& r) {
                  const BCNSpec spec = BCNSpec::bcn(N, cplx(0.0, 0.3), cplx(0.0, 0.7), cplx(0.0, 0.4));
                  return isospectral_drift(spec, sample_bcn(r, N));
              },
              1e-4);
    }
}

// ------------------------------------------------------------- Lax equation

struct LaxCell {
    Model model;
    ClassKind kind;
    bool spectral;
};

std::vector<LaxCell> lax_cells(const SuiteConfig& cfg) {
    std::vector<LaxCell> cells;
    for (ClassKind k : cfg.classes)
        for (bool spectral : {true, false}) {
            if (k == ClassKind::Elliptic && !spectral) continue;
            for (Model m : {Model::RS, Model::RSprime, Model::CM}) cells.push_back({m, k, spectral});
        }
    return cells;
}

std::string cell_tag(const LaxCell& c) {
    return std::string(to_string(c.kind)) + "/" + mode_tag(c.spectral) + "/" + to_string(c.model);
}

void add_profile_cases(Builder& b, const std::string& id, const std::function<ResidualProfile(Rng&)>& prof,
                       bool control) {
    const Provenance prov = control ? Provenance::Control : Provenance::Identity;
    // control: order below 0.5, i.e. at least 1.5 away from 2
    b.add(id + "/order", prov, 0.15, [prof](Rng& r) { return std::abs(prof(r).estimated_order - 2.0); },
          control ? std::optional<double>(1.5) : std::nullopt);
    b.add(id + "/min-residual", prov, 1e-6, [prof](Rng& r) { return prof(r).min_residual(); });
}

void lax_equation_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    Builder b("lax-equation", out);
    for (const LaxCell& cell : lax_cells(cfg)) {
        const FunctionClass cls = make_class(cell.kind, cfg.tau);
        for (int N : sizes(cfg, 2, 4)) {
            const ModelSpec spec = model_spec(cell.model, cls, cell.spectral, N, cfg);
            add_profile_cases(b, tag(cell_tag(cell), N),
                              [spec](Rng& r) {
                                  const PhasePoint x = sample_phase(r, spec.cls, spec.N, sampler_for(spec));
                                  return lax_equation_profile(spec, x, sample_z(r));
                              },
                              false);
        }
    }
    if (has_class(cfg, ClassKind::Elliptic)) {
        const cplx tau = cfg.tau, eta = cfg.hbar;
        for (bool rel : {false, true})
            for (int N : sizes(cfg, 2, 3))
                add_profile_cases(b, tag(rel ? "relativistic-top" : "elliptic-top", N),
                                  [=](Rng& r) {
                                      const Matrix S = sample_matrix(r, N, 0.5);
                                      const LaxSystem sys = top_lax_system(N, sample_z(r), tau, rel, eta);
                                      const Vector y = Eigen::Map<const Vector>(S.data(), N * N);
                                      return lax_equation_profile(sys, y, characteristic_time(sys, y));
                                  },
                                  false);
    }
    // M with its diagonal zeroed
    const ClassKind k = has_class(cfg, ClassKind::Elliptic) ? ClassKind::Elliptic : cfg.classes.front();
    const ModelSpec spec = model_spec(Model::RS, make_class(k, cfg.tau), true, 3, cfg);
    add_profile_cases(b, std::string("corrupted-m/") + to_string(k) + "/rs/N3",
                      [spec](Rng& r) {
                          const PhasePoint x = sample_phase(r, spec.cls, spec.N, sampler_for(spec));
                          LaxSystem sys = model_lax_system(spec, sample_z(r));
                          const auto M = sys.M;
                          sys.M = [M](const Vector& y) {
                              Matrix m = M(y);
                              m.diagonal().setZero();
                              return m;
                          };
                          return lax_equation_profile(sys, pack(x), characteristic_time(spec, x));
                      },
                      true);
}

// ------------------------------------------------------------- dynamics

void dynamics_suite(const SuiteConfig& cfg, std::vector<CaseSpec>& out) {
    Builder b("dynamics", out);
    for (const LaxCell& cell : lax_cells(cfg)) {
        const FunctionClass cls = make_class(cell.kind, cfg.tau);
        for (int N : sizes(cfg, 2, 4)) {
            const ModelSpec spec = model_spec(cell.model, cls, cell.spectral, N, cfg);
            b.add(tag("conservation/" + cell_tag(cell), N), Provenance::Identity, 1e-7, [spec](Rng& r) {
                const PhasePoint x = sample_phase(r, spec.cls, spec.N, sampler_for(spec));
                const ConservationReport rep = conservation_report(integrate(spec, x, 1.0, 1e-10), sample_z(r));
                double d = rep.eigenvalue_drift;
                for (const auto& row : rep.traces) d = std::max(d, row.drift);
                return d;
            });
        }
    }
    const cplx tau = cfg.tau;
    if (has_class(cfg, ClassKind::Elliptic)) {
        // c tr L / phi(z, hbar) is the Hamiltonian
        const ModelSpec rs = model_spec(Model::RS, FunctionClass::elliptic(tau), true, 3, cfg);
        b.add("rs-trace-hamiltonian/elliptic/N3", Provenance::Identity, 1e-9, [rs](Rng& r) {
            const PhasePoint x = sample_phase(r, rs.cls, rs.N, sampler_for(rs));
            const cplx z = sample_z(r);
            const Trajectory tr = integrate(rs, x, 1.0, 1e-10);
            const cplx h0 = hamiltonian(rs, tr.states.front());
            double d = 0.0;
            for (const auto& s : tr.states) d = std::max(d, std::abs(hamiltonian_from_trace(rs, s, z) - h0));
            return d / std::max(1.0, std::abs(h0));
        });
    }
    for (ClassKind k : cfg.classes) {
        // tr L^2 / 2 - H is constant along the flow (z dependent offset)
        const ModelSpec cm = model_spec(Model::CM, make_class(k, tau), true, 3, cfg);
        b.add(std::string("cm-trace-offset/") + to_string(k) + "/N3", Provenance::Identity, 1e-9, [cm](Rng& r) {
            const PhasePoint x = sample_phase(r, cm.cls, cm.N);
            const cplx z = sample_z(r);
            const Trajectory tr = integrate(cm, x, 1.0, 1e-10);
            auto offset = [&](const PhasePoint& s) {
                const Matrix L = lax_matrix(cm, s, z);
                return (L * L).trace() / 2.0 - hamiltonian(cm, s);
            };
            const cplx o0 = offset(tr.states.front());
            double d = 0.0;
            for (const auto& s : tr.states) d = std::max(d, std::abs(offset(s) - o0));
            return d / std::max(1.0, std::abs(o0));
        });
    }
    const ModelSpec free = [&] {
        ModelSpec s = model_spec(Model::CM, FunctionClass::rational(), true, 3, cfg);
        s.nu = 0.0;
        return s;
    }();
    b.add("free-flow-linear/N3", Provenance::Oracle, 1e-10, [free](Rng& r) {
        const PhasePoint x = sample_phase(r, free.cls, free.N);
        const Trajectory tr = integrate(free, x, 1.0, 1e-10);
        double d = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            d = std::max(d, max_abs(Vector(tr.states[i].q - x.q - tr.times[i] * x.p)));
        return d;
    });
    b.add("free-spectrum/N3", Provenance::Oracle, 1e-12, [free](Rng& r) {
        const PhasePoint x = sample_phase(r, free.cls, free.N);
        return eigenvalue_distance(eigenvalues(lax_matrix(free, x, sample_z(r))), x.p);
    });
    // imaginary coupling: nu^2 < 0 makes the rational potential repulsive, so real data never collide
    const ModelSpec cm2 = [&] {
        ModelSpec s = model_spec(Model::CM, FunctionClass::rational(), false, 2, cfg);
        s.nu = I * std::abs(cfg.nu);
        return s;
    }();
    b.add("center-of-mass/rational/N2", Provenance::Oracle, 1e-9, [cm2](Rng& r) {
        Vector q(2), p(2);
        const double a = uniform(r, 0.5, 1.0), u = uniform(r, 0.1, 0.5), drift = uniform(r, -0.3, 0.3);
        q << a, -a;
        p << drift - u, drift + u;
        const PhasePoint x(q, p);
        const Trajectory tr = integrate(cm2, x, 1.0, 1e-10);
        double d = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            d = std::max(d, std::abs(tr.states[i].q.sum() - 2.0 * drift * tr.times[i]));
        return d;
    });
    const ModelSpec cm3 = [&] {
        ModelSpec s = model_spec(Model::CM, FunctionClass::rational(), false, 3, cfg);
        s.nu = I * std::abs(cfg.nu);
        return s;
    }();
    b.add("energy-drift/rational/N3", Provenance::Identity, 1e-9, [cm3](Rng& r) {
        Vector q(3), p(3);
        q << -1.0 + uniform(r, -0.1, 0.1), uniform(r, -0.1, 0.1), 1.0 + uniform(r, -0.1, 0.1);
        p << uniform(r, -0.5, 0.5), uniform(r, -0.5, 0.5), uniform(r, -0.5, 0.5);
        const Trajectory tr = integrate(cm3, PhasePoint(q, p), 1.0, 1e-10);
        const cplx h0 = hamiltonian(cm3, tr.states.front());
        double d = 0.0;
        for (const auto& s : tr.states) d = std::max(d, std::abs(hamiltonian(cm3, s) - h0));
        return d;
    });
    // fixed-step RK4 on the harmonic oscillator against the exact solution; global error slope 4
    b.add("integrator-order", Provenance::Oracle, 0.2, [](Rng& r) {
        const double w = uniform(r, 1.0, 2.0);
        const FlowRhs f = [w](const Vector& y) {
            Vector d(2);
            d << y(1), -w * w * y(0);
            return d;
        };
        Vector y0(2);
        y0 << 1.0, 0.0;
        ResidualProfile prof;
        Vector exact(2);
        exact << std::cos(2.0 * w), -w * std::sin(2.0 * w);
        for (int n : {20, 40, 80, 160}) {
            const Vector y = integrate_fixed(f, y0, 2.0, n);
            prof.steps.push_back(2.0 / n);
            prof.residuals.push_back(max_abs(Vector(y - exact)));
        }
        fit_order(prof);
        return std::abs(prof.estimated_order - 4.0);
    });
}

}  // namespace

std::vector<CaseSpec> build_suite(const std::string& name, const SuiteConfig& cfg) {
    std::vector<CaseSpec> out;
    if (name == "special-functions") special_suite(cfg, out);
    else if (name == "factorization") factorization_suite(cfg, out), rank_one_suite(cfg, out);
    else if (name == "rank-one") rank_one_suite(cfg, out);
    else if (name == "irf-vertex") irf_suite(cfg, out);
    else if (name == "theorem1") theorem1_suite(cfg, out);
    else if (name == "theorem2") theorem2_suite(cfg, out);
    else if (name == "zero-curvature") zero_curvature_suite(cfg, out);
    else if (name == "root-systems") root_suite(cfg, out);
    else if (name == "dynamics") lax_equation_suite(cfg, out), dynamics_suite(cfg, out);
    else if (name == "lax-equation") lax_equation_suite(cfg, out);
    else fail(ErrorKind::ConfigError, "unknown suite '" + name + "'");
    return out;
}

std::vector<CaseSpec> build_cases(const SuiteConfig& cfg) {
    cfg.validate();
    std::vector<CaseSpec> all;
    std::set<std::string> seen;
    for (const auto& name : cfg.suites) {
        auto part = build_suite(name, cfg);
        auto ov = cfg.tolerance_overrides.find(name);
        for (auto& c : part) {
            if (!seen.insert(c.id).second) continue;  // a suite and its alias both selected
            if (ov != cfg.tolerance_overrides.end() && !c.expected_fail()) c.tolerance = ov->second;
            all.push_back(std::move(c));
        }
    }
    return all;
}

CaseResult run_case(const CaseSpec& c, std::uint64_t seed) {
    CaseResult r;
    r.suite = c.suite;
    r.case_id = c.id;
    r.tolerance = c.tolerance;
    r.provenance = c.provenance;
    r.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.residual = c.run(seed);
        if (!std::isfinite(r.residual)) r.residual = DBL_MAX, r.error = "non-finite residual";
    } catch (const std::exception& e) {
        r.residual = DBL_MAX;
        r.error = e.what();
    }
    r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    r.passed = r.residual < r.tolerance;
    if (!c.expected_fail()) {
        r.outcome = r.passed ? Outcome::Pass : Outcome::Fail;
    } else if (r.passed) {
        r.outcome = Outcome::UnexpectedPass;
    } else {
        const bool broke = r.error.empty() && r.residual >= c.control_threshold.value_or(c.tolerance);
        r.outcome = broke ? Outcome::ExpectedFail : Outcome::Fail;
    }
    return r;
}

std::vector<CaseResult> run_cases(const std::vector<CaseSpec>& cases, std::uint64_t seed, unsigned threads,
                                  const std::function<void(const CaseResult&)>& sink) {
    const std::size_t n = cases.size();
    std::vector<std::optional<CaseResult>> slots(n);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            CaseResult r = run_case(cases[i], seed);
            std::lock_guard<std::mutex> lock(mu);
            slots[i] = std::move(r);
            cv.notify_all();
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, unsigned(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    std::vector<CaseResult> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return slots[i].has_value(); });
        out.push_back(*slots[i]);
        lock.unlock();
        if (sink) sink(out.back());
    }
    for (auto& t : pool) t.join();
    return out;
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("LAXFACTOR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return unsigned(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace laxfactor
