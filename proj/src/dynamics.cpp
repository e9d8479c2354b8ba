#include "laxfactor/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace laxfactor {

Vector rk4_step(const FlowRhs& f, const Vector& y, double h) {
    const Vector k1 = f(y);
    const Vector k2 = f(y + 0.5 * h * k1);
    const Vector k3 = f(y + 0.5 * h * k2);
    const Vector k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

RawTrajectory integrate_adaptive(const FlowRhs& f, const Vector& y0, double t_end, const IntegratorOptions& opt,
                                 const StateGuard& guard) {
    require(t_end >= 0.0, ErrorKind::InvalidArgument, "t_end must be non-negative");
    require(opt.tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
    RawTrajectory out;
    double t = 0.0;
    Vector y = y0;
    if (guard) guard(y, t);
    out.times.push_back(t);
    out.states.push_back(y);
    double h = std::min(opt.h0, t_end);
    long steps = 0;
    while (t < t_end) {
        if (++steps > opt.max_steps) fail(ErrorKind::StepUnderflow, "step budget exhausted");
        h = std::min(h, t_end - t);
        const Vector full = rk4_step(f, y, h);
        const Vector half = rk4_step(f, rk4_step(f, y, 0.5 * h), 0.5 * h);
        const double err = max_abs(Vector(half - full)) / 15.0;
        if (!std::isfinite(err) || err > opt.tol) {
            h *= std::isfinite(err) ? std::max(0.1, 0.9 * std::pow(opt.tol / err, 0.2)) : 0.1;
            if (h < opt.h_min) {
                std::ostringstream msg;
                msg << "step size fell below " << opt.h_min << " at t = " << t;
                fail(ErrorKind::StepUnderflow, msg.str());
            }
            continue;
        }
        t = (t_end - t <= h) ? t_end : t + h;
        y = half + (half - full) / 15.0;
        if (guard) guard(y, t);
        out.times.push_back(t);
        out.states.push_back(y);
        const double grow = err > 0.0 ? 0.9 * std::pow(opt.tol / err, 0.2) : 4.0;
        h *= std::clamp(grow, 0.1, 4.0);
    }
    return out;
}

Vector integrate_fixed(const FlowRhs& f, const Vector& y0, double t_end, int steps) {
    require(steps >= 1, ErrorKind::InvalidArgument, "need at least one step");
    const double h = t_end / steps;
    Vector y = y0;
    for (int s = 0; s < steps; ++s) y = rk4_step(f, y, h);
    return y;
}

Vector pack(const PhasePoint& x) {
    Vector y(2 * x.size());
    y << x.q, x.p;
    return y;
}

PhasePoint unpack(const Vector& y) {
    const Eigen::Index n = y.size() / 2;
    return PhasePoint(y.head(n), y.tail(n));
}

namespace {

StateGuard collision_guard(std::function<double(cplx)> distance, int N) {
    return [distance, N](const Vector& y, double t) {
        for (int i = 0; i < N; ++i)
            for (int k = i + 1; k < N; ++k)
                if (distance(y(i) - y(k)) < kExclusionRadius) {
                    std::ostringstream msg;
                    msg << "particles " << i << " and " << k << " collided at t = " << t;
                    fail(ErrorKind::CollisionDetected, msg.str());
                }
    };
}

Trajectory wrap(const RawTrajectory& raw, std::variant<ModelSpec, BCNSpec> spec) {
    Trajectory tr;
    tr.times = raw.times;
    tr.spec = std::move(spec);
    tr.states.reserve(raw.states.size());
    for (const auto& y : raw.states) tr.states.push_back(unpack(y));
    return tr;
}

}  // namespace

Trajectory integrate(const ModelSpec& spec, const PhasePoint& initial, double t_end, double tol) {
    spec.validate();
    check_configuration(spec, initial.q);
    const FlowRhs f = [&spec](const Vector& y) {
        const PhaseVelocity v = eom_rhs(spec, unpack(y));
        Vector d(y.size());
        d << v.dq, v.dp;
        return d;
    };
    const auto& cls = spec.cls;
    IntegratorOptions opt;
    opt.tol = tol;
    const RawTrajectory raw =
        integrate_adaptive(f, pack(initial), t_end, opt, collision_guard([cls](cplx a) { return cls.pole_distance(a); }, spec.N));
    return wrap(raw, spec);
}

Trajectory integrate(const BCNSpec& spec, const PhasePoint& initial_qv, double t_end, double tol) {
    spec.validate();
    const int N = spec.N;
    const FlowRhs f = [&spec, N](const Vector& y) {
        Vector d(y.size());
        d << y.tail(N), bcn_acceleration(spec, Vector(y.head(N)));
        return d;
    };
    // reflections q_i = -q_k and q_i = 0 are collisions too
    const StateGuard guard = [N](const Vector& y, double t) {
        for (int i = 0; i < N; ++i) {
            bool bad = std::abs(y(i)) < kExclusionRadius;
            for (int k = i + 1; k < N && !bad; ++k)
                bad = std::abs(y(i) - y(k)) < kExclusionRadius || std::abs(y(i) + y(k)) < kExclusionRadius;
            if (bad) {
                std::ostringstream msg;
                msg << "particle " << i << " hit a wall or a reflected partner at t = " << t;
                fail(ErrorKind::CollisionDetected, msg.str());
            }
        }
    };
    IntegratorOptions opt;
    opt.tol = tol;
    return wrap(integrate_adaptive(f, pack(initial_qv), t_end, opt, guard), spec);
}

double ResidualProfile::min_residual() const {
    return residuals.empty() ? 0.0 : *std::min_element(residuals.begin(), residuals.end());
}

void fit_order(ResidualProfile& prof) {
    const std::size_t n = prof.steps.size();
    if (n < 2) return;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(prof.steps[i]);
        ys[i] = std::log(std::max(prof.residuals[i], 1e-300));
        sx += xs[i], sy += ys[i], sxx += xs[i] * xs[i], sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double icpt = (sy - slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) ss += std::pow(ys[i] - (icpt + slope * xs[i]), 2);
    prof.estimated_order = slope;
    prof.fit_residual = std::sqrt(ss / n);
}

std::vector<double> default_profile_steps() { return {8.0, 4.0, 2.0, 1.0}; }

namespace {

double lax_residual_at(const LaxSystem& sys, const Vector& state, const Matrix& comm, double h) {
    const Matrix fwd = sys.L(rk4_step(sys.rhs, state, h));
    const Matrix bwd = sys.L(rk4_step(sys.rhs, state, -h));
    return max_abs(Matrix((fwd - bwd) / (2.0 * h) - comm));
}

}  // namespace

// The central difference misses by C h^2 and roundoff adds eps |L| / h. One probe at
// 1e-3 T estimates C; the smallest step puts C h^2 near 2.5e-7, clamped to [1e-6 T, 1e-2 T],
// so the window sits in the h^2 regime whatever the size of L'''.
std::vector<double> profile_steps(const LaxSystem& sys, const Vector& state, double time_scale) {
    require(time_scale > 0.0 && std::isfinite(time_scale), ErrorKind::InvalidArgument, "time scale must be positive");
    const Matrix comm = commutator(sys.L(state), sys.M(state));
    const double h0 = 1e-3 * time_scale;
    const double C = std::max(lax_residual_at(sys, state, comm, h0) / (h0 * h0), 1e-300);
    const double h_min = std::clamp(std::sqrt(2.5e-7 / C), 1e-6 * time_scale, 1e-2 * time_scale);
    std::vector<double> out = default_profile_steps();
    for (double& h : out) h *= h_min;
    return out;
}

double characteristic_time(const ModelSpec& spec, const PhasePoint& x) {
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < x.size(); ++i)
        for (int k = i + 1; k < x.size(); ++k) dmin = std::min(dmin, spec.cls.pole_distance(x.q(i) - x.q(k)));
    if (!std::isfinite(dmin)) dmin = 1.0;
    const double speed = max_abs(eom_rhs(spec, x).dq);
    return std::min(1.0, dmin / std::max(speed, 1e-3));
}

double characteristic_time(const LaxSystem& sys, const Vector& y) {
    const double rate = max_abs(sys.rhs(y));
    return rate > 0.0 ? std::min(1.0, max_abs(y) / rate) : 1.0;
}

LaxSystem model_lax_system(const ModelSpec& spec, cplx z) {
    LaxSystem s;
    s.rhs = [spec](const Vector& y) {
        const PhaseVelocity v = eom_rhs(spec, unpack(y));
        Vector d(y.size());
        d << v.dq, v.dp;
        return d;
    };
    s.L = [spec, z](const Vector& y) { return lax_matrix(spec, unpack(y), z); };
    s.M = [spec, z](const Vector& y) { return m_matrix(spec, unpack(y), z); };
    return s;
}

LaxSystem top_lax_system(int N, cplx z, cplx tau, bool relativistic, cplx eta) {
    auto as_matrix = [N](const Vector& y) { return Matrix(Eigen::Map<const Matrix>(y.data(), N, N)); };
    LaxSystem s;
    s.rhs = [=](const Vector& y) {
        const Matrix S = as_matrix(y);
        const Matrix dS = commutator(S, top_inertia(S, tau, relativistic, eta));
        return Vector(Eigen::Map<const Vector>(dS.data(), N * N));
    };
    s.L = [=](const Vector& y) { return lax_top(as_matrix(y), z, tau, relativistic, eta).L; };
    s.M = [=](const Vector& y) { return lax_top(as_matrix(y), z, tau, relativistic, eta).M; };
    return s;
}

ResidualProfile lax_equation_profile(const LaxSystem& sys, const Vector& state, const std::vector<double>& steps) {
    require(!steps.empty(), ErrorKind::InvalidArgument, "no steps given");
    const Matrix comm = commutator(sys.L(state), sys.M(state));
    ResidualProfile prof;
    for (double h : steps) {
        prof.steps.push_back(h);
        prof.residuals.push_back(lax_residual_at(sys, state, comm, h));
    }
    fit_order(prof);
    return prof;
}

ResidualProfile lax_equation_profile(const LaxSystem& sys, const Vector& state, double time_scale) {
    return lax_equation_profile(sys, state, profile_steps(sys, state, time_scale));
}

ResidualProfile lax_equation_profile(const ModelSpec& spec, const PhasePoint& x, cplx z,
                                     const std::vector<double>& steps) {
    spec.validate();
    check_configuration(spec, x.q);
    return lax_equation_profile(model_lax_system(spec, z), pack(x), steps);
}

ResidualProfile lax_equation_profile(const ModelSpec& spec, const PhasePoint& x, cplx z) {
    spec.validate();
    check_configuration(spec, x.q);
    return lax_equation_profile(model_lax_system(spec, z), pack(x), characteristic_time(spec, x));
}

double eigenvalue_distance(const Vector& a, const Vector& b) {
    require(a.size() == b.size(), ErrorKind::DimensionMismatch, "spectra of different size");
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        Eigen::Index pick = -1;
        for (Eigen::Index j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(a(i) - b(j)) < best) best = std::abs(a(i) - b(j)), pick = j;
        used[pick] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

ConservationReport conservation_report(const Trajectory& traj, cplx z) {
    require(!traj.states.empty(), ErrorKind::InvalidArgument, "empty trajectory");
    std::function<Matrix(const PhasePoint&)> lax;
    std::function<cplx(const PhasePoint&)> energy;
    if (const auto* ms = std::get_if<ModelSpec>(&traj.spec)) {
        const ModelSpec spec = *ms;
        lax = [spec, z](const PhasePoint& x) { return lax_matrix(spec, x, z); };
        energy = [spec](const PhasePoint& x) { return hamiltonian(spec, x); };
    } else {
        const BCNSpec spec = std::get<BCNSpec>(traj.spec);
        lax = [spec](const PhasePoint& x) {
            return lax_bcn(spec, PhasePoint(x.q, bcn_momentum_from_velocity(spec, x.q, x.p)));
        };
        energy = [spec](const PhasePoint& x) { return bcn_hamiltonian(spec, x.q, x.p); };
    }
    const int N = traj.states.front().size();
    const Matrix L0 = lax(traj.states.front());
    const Vector ev0 = eigenvalues(L0);
    const cplx e0 = energy(traj.states.front());
    std::vector<cplx> tr0(N);
    {
        Matrix pw = Matrix::Identity(L0.rows(), L0.cols());
        for (int k = 1; k <= N; ++k) pw = pw * L0, tr0[k - 1] = pw.trace();
    }
    ConservationReport rep;
    rep.traces.resize(N);
    for (int k = 1; k <= N; ++k) rep.traces[k - 1].k = k;
    for (const auto& x : traj.states) {
        const Matrix L = lax(x);
        Matrix pw = Matrix::Identity(L.rows(), L.cols());
        for (int k = 1; k <= N; ++k) {
            pw = pw * L;
            const double d = std::abs(pw.trace() - tr0[k - 1]) / std::max(1.0, std::abs(tr0[k - 1]));
            rep.traces[k - 1].drift = std::max(rep.traces[k - 1].drift, d);
        }
        rep.eigenvalue_drift = std::max(rep.eigenvalue_drift, eigenvalue_distance(ev0, eigenvalues(L)));
        rep.energy_drift = std::max(rep.energy_drift, std::abs(energy(x) - e0));
    }
    return rep;
}

}  // namespace laxfactor
