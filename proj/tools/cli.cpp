#include "cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include "laxfactor/dynamics.hpp"
#include "laxfactor/elliptic.hpp"
#include "laxfactor/rmatrix.hpp"
#include "laxfactor/suites.hpp"

namespace laxfactor::cli {

using nlohmann::json;

namespace {

double parse_real(const std::string& s, const std::string& whole) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == s.size(), ErrorKind::ConfigError, "cannot parse complex number '" + whole + "'");
    return v;
}

// strips surrounding blanks and lowercases; inner blanks are kept so "1 2" stays an error
std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out;
    for (std::size_t k = b; k < e; ++k) out += char(std::tolower(static_cast<unsigned char>(s[k])));
    return out;
}

}  // namespace

cplx parse_complex(const std::string& text) {
    const std::string s = trim(text);
    require(!s.empty(), ErrorKind::ConfigError, "empty complex number");
    if (s.back() != 'i' && s.back() != 'j') return parse_real(s, text);
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e') {
            split = k;
            break;
        }
    if (split == std::string::npos) return cplx(0.0, parse_real(body, text));
    require(split > 0, ErrorKind::ConfigError, "cannot parse complex number '" + text + "'");
    return cplx(parse_real(body.substr(0, split), text), parse_real(body.substr(split), text));
}

cplx complex_from_json(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_string()) return parse_complex(j.get<std::string>());
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    fail(ErrorKind::ConfigError, "expected a complex number, got " + j.dump());
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string format_complex(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
    return buf;
}

std::vector<cplx> parse_complex_list(const std::string& text) {
    std::vector<cplx> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find(',', start);
        const std::string item = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        out.push_back(parse_complex(item));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

std::pair<int, int> parse_range(const std::string& text) {
    const std::string s = trim(text);
    const std::size_t dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            std::size_t used = 0;
            const int n = std::stoi(s, &used);
            if (used == s.size()) return {n, n};
            fail(ErrorKind::ConfigError, "cannot parse size range '" + text + "'");
        }
        std::size_t u1 = 0, u2 = 0;
        const std::string lo = s.substr(0, dots), hi = s.substr(dots + 2);
        const int a = std::stoi(lo, &u1), b = std::stoi(hi, &u2);
        if (u1 == lo.size() && u2 == hi.size() && a <= b) return {a, b};
    } catch (const std::exception&) {
    }
    fail(ErrorKind::ConfigError, "cannot parse size range '" + text + "'");
}

namespace {

Vector to_vector(const std::vector<cplx>& v) {
    Vector out(Eigen::Index(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(Eigen::Index(i)) = v[i];
    return out;
}

json vector_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
    return a;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_complex(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

ClassKind parse_class(const std::string& name) {
    const std::string s = trim(name);
    if (s == "elliptic") return ClassKind::Elliptic;
    if (s == "trig" || s == "trigonometric") return ClassKind::Trigonometric;
    if (s == "rational") return ClassKind::Rational;
    fail(ErrorKind::ConfigError, "unknown function class '" + name + "'");
}

Model parse_model(const std::string& name) {
    const std::string s = trim(name);
    if (s == "rs") return Model::RS;
    if (s == "rs-prime" || s == "rsprime") return Model::RSprime;
    if (s == "cm") return Model::CM;
    fail(ErrorKind::ConfigError, "unknown model '" + name + "'");
}

RootSystem parse_root(const std::string& name) {
    const std::string s = trim(name);
    if (s == "bn" || s == "b") return RootSystem::Bn;
    if (s == "cn" || s == "c") return RootSystem::Cn;
    if (s == "dn" || s == "d") return RootSystem::Dn;
    if (s == "bcn" || s == "bc") return RootSystem::BCn;
    fail(ErrorKind::ConfigError, "unknown root system '" + name + "'");
}

RKind parse_rkind(const std::string& name) {
    const std::string s = trim(name);
    if (s == "bb" || s == "baxter-belavin") return RKind::BaxterBelavin;
    if (s == "felder") return RKind::Felder;
    if (s == "acf") return RKind::ACF;
    fail(ErrorKind::ConfigError, "unknown R-matrix '" + name + "'");
}

// model options shared by evolve and eval
struct ModelArgs {
    std::string model = "cm";
    std::string cls = "rational";
    bool spectral = false;
    std::string hbar = "0.17+0.05j", c = "1.3", nu = "0.7", tau = "0.3+0.8j";
    std::string root = "dn", m1 = "0", m2 = "0.7j", m4 = "0";

    void attach(CLI::App* app) {
        app->add_option("--model", model, "rs, rs-prime, cm or bcn")->capture_default_str();
        app->add_option("--class", cls, "elliptic, trig or rational")->capture_default_str();
        app->add_flag("--spectral,!--no-spectral", spectral, "carry the spectral parameter")->capture_default_str();
        app->add_option("--hbar", hbar, "RS coupling")->capture_default_str();
        app->add_option("--c", c, "RS light speed")->capture_default_str();
        app->add_option("--nu", nu, "CM coupling")->capture_default_str();
        app->add_option("--tau", tau, "elliptic modulus")->capture_default_str();
        app->add_option("--root", root, "bcn only: Bn, Cn, Dn or BCn")->capture_default_str();
        app->add_option("--m1", m1, "bcn only, generic BCn")->capture_default_str();
        app->add_option("--m2", m2, "bcn only")->capture_default_str();
        app->add_option("--m4", m4, "bcn only, Cn and BCn")->capture_default_str();
    }

    bool is_bcn() const { return trim(model) == "bcn"; }

    ModelSpec spec(int N) const {
        ModelSpec s;
        s.model = parse_model(model);
        const ClassKind k = parse_class(cls);
        s.cls = k == ClassKind::Elliptic      ? FunctionClass::elliptic(parse_complex(tau))
                : k == ClassKind::Trigonometric ? FunctionClass::trigonometric()
                                                : FunctionClass::rational();
        s.spectral = spectral || k == ClassKind::Elliptic;
        s.N = N;
        s.hbar = parse_complex(hbar);
        s.c = parse_complex(c);
        s.nu = parse_complex(nu);
        s.validate();
        return s;
    }

    BCNSpec bcn(int N) const {
        switch (parse_root(root)) {
            case RootSystem::Bn: return BCNSpec::bn(N, parse_complex(m2));
            case RootSystem::Cn: return BCNSpec::cn(N, parse_complex(m2), parse_complex(m4));
            case RootSystem::Dn: return BCNSpec::dn(N, parse_complex(m2));
            case RootSystem::BCn: break;
        }
        return BCNSpec::bcn(N, parse_complex(m1), parse_complex(m2), parse_complex(m4));
    }
};

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    std::optional<std::vector<std::string>> suites;
    std::string N;
    std::vector<std::string> classes;
    std::uint64_t seed = 0;
    std::string tau;
    std::string preset;
    int points = 20;
    int special_points = 200;
    std::vector<std::string> tolerances;
    std::string output;
    std::string format = "json";
};

json record_json(const CaseResult& r) {
    json j{{"suite", r.suite},
           {"case-id", r.case_id},
           {"residual", r.residual},
           {"tolerance", r.tolerance},
           {"passed", r.passed},
           {"wall_time_ms", r.wall_time_ms},
           {"provenance", to_string(r.provenance)},
           {"seed", r.seed},
           {"expected_fail", r.provenance == Provenance::Control},
           {"outcome", to_string(r.outcome)}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

SuiteConfig make_config(const VerifyArgs& a) {
    SuiteConfig cfg;
    if (a.suites) {
        cfg.suites.clear();
        for (const auto& s : *a.suites)
            if (!trim(s).empty()) cfg.suites.push_back(trim(s));
    } else {
        cfg.suites = {"special-functions", "factorization", "irf-vertex", "theorem1",
                      "theorem2",          "zero-curvature", "root-systems", "dynamics"};
    }
    if (!a.N.empty()) cfg.N_range = parse_range(a.N);
    if (!a.classes.empty()) {
        cfg.classes.clear();
        for (const auto& c : a.classes) cfg.classes.push_back(parse_class(c));
    }
    cfg.seed = a.seed;
    if (!a.tau.empty()) {
        cfg.tau = parse_complex(a.tau);
        cfg.taus = {cfg.tau};
    }
    if (!a.preset.empty()) cfg.preset = parse_root(a.preset);
    require(!cfg.preset || *cfg.preset != RootSystem::BCn, ErrorKind::ConfigError,
            "the preset must be one of Bn, Cn, Dn");
    cfg.points = a.points;
    cfg.special_points = a.special_points;
    for (const auto& t : a.tolerances) {
        const std::size_t eq = t.find('=');
        require(eq != std::string::npos, ErrorKind::ConfigError, "tolerance override must read suite=value");
        try {
            cfg.tolerance_overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            fail(ErrorKind::ConfigError, "bad tolerance value in '" + t + "'");
        }
    }
    require(a.format == "json" || a.format == "text", ErrorKind::ConfigError, "format must be json or text");
    cfg.validate();
    return cfg;
}

int cmd_verify(const VerifyArgs& a) {
    const SuiteConfig cfg = make_config(a);
    const std::vector<CaseSpec> cases = build_cases(cfg);
    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output);
        require(bool(file), ErrorKind::ConfigError, "cannot open output file " + a.output);
    }
    std::ostream& out = a.output.empty() ? std::cout : file;
    std::map<Outcome, int> tally;
    const auto results = run_cases(cases, cfg.seed, default_thread_count(), [&](const CaseResult& r) {
        ++tally[r.outcome];
        if (a.format == "json") {
            out << record_json(r).dump() << '\n';
        } else {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%-16s %10.3e < %9.2e  ", to_string(r.outcome), r.residual, r.tolerance);
            out << buf << r.case_id;
            if (!r.error.empty()) out << "  [" << r.error << "]";
            out << '\n';
        }
        out.flush();
    });
    std::cerr << results.size() << " cases: " << tally[Outcome::Pass] << " pass, " << tally[Outcome::ExpectedFail]
              << " expected-fail, " << tally[Outcome::Fail] << " fail, " << tally[Outcome::UnexpectedPass]
              << " unexpected-pass\n";
    const bool all_ok = tally[Outcome::Fail] == 0 && tally[Outcome::UnexpectedPass] == 0;
    return all_ok ? kAllPass : kFailures;
}

// ------------------------------------------------------------------ evolve

struct EvolveArgs {
    ModelArgs model;
    std::string initial;
    double t_end = 1.0;
    double tol = 1e-10;
    std::string output;
    std::string report;
    std::string z = "0.25+0.1j";
};

// a JSON file, or the JSON text itself when it starts with '{'
PhasePoint read_initial(const std::string& source, bool bcn) {
    json j;
    const std::string t = trim(source);
    try {
        if (!t.empty() && t.front() == '{') {
            j = json::parse(source);
        } else {
            std::ifstream in(source);
            require(bool(in), ErrorKind::ConfigError, "cannot open initial condition file " + source);
            j = json::parse(in);
        }
    } catch (const json::exception& e) {
        fail(ErrorKind::ConfigError, "initial condition is not valid JSON: " + std::string(e.what()));
    }
    require(j.is_object() && j.contains("q") && j["q"].is_array(), ErrorKind::ConfigError,
            "initial condition needs an array 'q'");
    const char* mom = bcn && j.contains("v") ? "v" : "p";
    require(j.contains(mom) && j[mom].is_array(), ErrorKind::ConfigError,
            std::string("initial condition needs an array '") + mom + "'");
    std::vector<cplx> q, p;
    for (const auto& e : j["q"]) q.push_back(complex_from_json(e));
    for (const auto& e : j[mom]) p.push_back(complex_from_json(e));
    require(!q.empty() && q.size() == p.size(), ErrorKind::ConfigError, "q and p must have the same nonzero length");
    return PhasePoint(to_vector(q), to_vector(p));
}

void print_conservation(std::ostream& os, const ConservationReport& rep, double t_end, std::size_t n) {
    os << "conservation over t in [0, " << t_end << "], " << n << " states\n";
    os << "  k   max relative drift of tr L^k\n";
    char buf[96];
    for (const auto& row : rep.traces) {
        std::snprintf(buf, sizeof buf, "  %-3d %.3e\n", row.k, row.drift);
        os << buf;
    }
    std::snprintf(buf, sizeof buf, "  eigenvalue drift %.3e\n  energy drift     %.3e\n", rep.eigenvalue_drift,
                  rep.energy_drift);
    os << buf;
}

int cmd_evolve(const EvolveArgs& a) {
    const bool bcn = a.model.is_bcn();
    const PhasePoint x0 = read_initial(a.initial, bcn);
    require(a.t_end >= 0.0 && a.tol > 0.0, ErrorKind::ConfigError, "t_end must be >= 0 and tol > 0");
    const cplx z = parse_complex(a.z);
    std::optional<Trajectory> traj;
    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output);
        require(bool(file), ErrorKind::ConfigError, "cannot open output file " + a.output);
    }
    std::ostream& out = a.output.empty() ? std::cout : file;
    std::variant<ModelSpec, BCNSpec> spec;
    if (bcn) spec = a.model.bcn(x0.size());
    else spec = a.model.spec(x0.size());
    try {
        traj = std::visit([&](const auto& s) { return integrate(s, x0, a.t_end, a.tol); }, spec);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::CollisionDetected && e.kind() != ErrorKind::StepUnderflow &&
            e.kind() != ErrorKind::NearSingular)
            throw;
        const json rec{{"abort", to_string(e.kind())}, {"message", e.what()}};
        out << rec.dump() << '\n';
        std::cerr << rec.dump() << '\n';
        return kRuntimeAbort;
    }
    for (std::size_t i = 0; i < traj->times.size(); ++i) {
        const json rec{{"t", traj->times[i]},
                       {"q", vector_json(traj->states[i].q)},
                       {bcn ? "v" : "p", vector_json(traj->states[i].p)}};
        out << rec.dump() << '\n';
    }
    out.flush();
    const ConservationReport rep = conservation_report(*traj, z);
    if (!a.report.empty()) {
        std::ofstream rf(a.report);
        require(bool(rf), ErrorKind::ConfigError, "cannot open report file " + a.report);
        json rows = json::array();
        for (const auto& r : rep.traces) rows.push_back({{"k", r.k}, {"drift", r.drift}});
        rf << json{{"traces", rows}, {"eigenvalue_drift", rep.eigenvalue_drift}, {"energy_drift", rep.energy_drift}}
                  .dump()
           << '\n';
    } else {
        print_conservation(a.output.empty() ? std::cerr : std::cout, rep, a.t_end, traj->times.size());
    }
    return kAllPass;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
    ModelArgs model;
    std::string a = "0.5", b = "0.5", z = "0.3", eta = "1", tau = "0.3+0.8j";
    int dz = 0;
    std::string fn = "e1";
    int N = 2;
    std::string q, p;
    std::string what = "L";
    std::string rkind = "bb";
    std::string z1 = "0.3+0.1j", z2 = "0.0";
    std::optional<int> row, col;
};

FunctionClass eval_class(const std::string& cls, const std::string& tau) {
    switch (parse_class(cls)) {
        case ClassKind::Elliptic: return FunctionClass::elliptic(parse_complex(tau));
        case ClassKind::Trigonometric: return FunctionClass::trigonometric();
        case ClassKind::Rational: return FunctionClass::rational();
    }
    return FunctionClass::rational();
}

Vector list_or_zero(const std::string& text, int N) {
    if (text.empty()) return Vector::Zero(N);
    Vector v = to_vector(parse_complex_list(text));
    require(v.size() == N, ErrorKind::ConfigError, "expected " + std::to_string(N) + " entries");
    return v;
}

void print_matrix(const Matrix& m, const EvalArgs& a) {
    if (a.row || a.col) {
        require(a.row && a.col, ErrorKind::ConfigError, "--row and --col go together");
        require(*a.row >= 0 && *a.row < m.rows() && *a.col >= 0 && *a.col < m.cols(), ErrorKind::ConfigError,
                "entry index out of range");
        std::cout << format_complex(m(*a.row, *a.col)) << '\n';
        return;
    }
    std::cout << matrix_json(m).dump() << '\n';
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Factorized Lax pairs: verification suites, trajectories and evaluators"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run verification suites, one JSON line per case");
    verify->add_option("--suites", va.suites, "comma separated suite names (default: all)")->delimiter(',')->expected(0, -1);
    verify->add_option("--N", va.N, "size or range lo..hi overriding each suite's default");
    verify->add_option("--classes", va.classes, "elliptic, trig, rational")->delimiter(',');
    verify->add_option("--seed", va.seed, "base seed")->capture_default_str();
    verify->add_option("--tau", va.tau, "elliptic modulus for every suite");
    verify->add_option("--preset", va.preset, "root-systems: Bn, Cn or Dn only");
    verify->add_option("--points", va.points, "random points per case")->capture_default_str();
    verify->add_option("--special-points", va.special_points, "points per special-function identity")
        ->capture_default_str();
    verify->add_option("--tolerance", va.tolerances, "suite=value override, repeatable");
    verify->add_option("--output", va.output, "report file (default stdout)");
    verify->add_option("--format", va.format, "json or text")->capture_default_str();

    EvolveArgs ea;
    auto* evolve = app.add_subcommand("evolve", "integrate a trajectory and report conserved quantities");
    ea.model.attach(evolve);
    evolve->add_option("--initial", ea.initial, "JSON file, or inline JSON, with q and p (v for bcn)")->required();
    evolve->add_option("--t-end", ea.t_end, "final time")->capture_default_str();
    evolve->add_option("--tol", ea.tol, "local error tolerance")->capture_default_str();
    evolve->add_option("--output", ea.output, "trajectory JSON lines (default stdout)");
    evolve->add_option("--report", ea.report, "conservation report as JSON (default: table)");
    evolve->add_option("--z", ea.z, "spectral parameter of the Lax matrix")->capture_default_str();

    EvalArgs xa;
    auto* eval = app.add_subcommand("eval", "evaluate a single object");
    eval->require_subcommand(1);
    auto* ev_theta = eval->add_subcommand("theta", "theta[a;b](z|tau)");
    ev_theta->add_option("--a", xa.a)->capture_default_str();
    ev_theta->add_option("--b", xa.b)->capture_default_str();
    ev_theta->add_option("--z", xa.z)->capture_default_str();
    ev_theta->add_option("--tau", xa.tau)->capture_default_str();
    ev_theta->add_option("--dz", xa.dz, "z derivative order")->capture_default_str();
    auto* ev_phi = eval->add_subcommand("phi", "Kronecker function phi(z, eta)");
    ev_phi->add_option("--class", xa.model.cls)->capture_default_str();
    ev_phi->add_option("--eta", xa.eta)->capture_default_str();
    ev_phi->add_option("--z", xa.z)->capture_default_str();
    ev_phi->add_option("--tau", xa.tau)->capture_default_str();
    auto* ev_fn = eval->add_subcommand("function", "e1, e2, wp or th of a class");
    ev_fn->add_option("--fn", xa.fn)->capture_default_str();
    ev_fn->add_option("--class", xa.model.cls)->capture_default_str();
    ev_fn->add_option("--z", xa.z)->capture_default_str();
    ev_fn->add_option("--tau", xa.tau)->capture_default_str();
    auto* ev_lax = eval->add_subcommand("lax", "Lax matrix L (or M with --what M)");
    xa.model.attach(ev_lax);
    ev_lax->add_option("--N", xa.N)->capture_default_str();
    ev_lax->add_option("--q", xa.q, "comma separated coordinates");
    ev_lax->add_option("--p", xa.p, "comma separated momenta");
    ev_lax->add_option("--z", xa.z)->capture_default_str();
    ev_lax->add_option("--what", xa.what, "L or M")->capture_default_str();
    ev_lax->add_option("--row", xa.row);
    ev_lax->add_option("--col", xa.col);
    auto* ev_r = eval->add_subcommand("r-matrix", "R-matrix on C^N (x) C^N");
    ev_r->add_option("--kind", xa.rkind, "bb, felder or acf")->capture_default_str();
    ev_r->add_option("--N", xa.N)->capture_default_str();
    ev_r->add_option("--hbar", xa.model.hbar)->capture_default_str();
    ev_r->add_option("--tau", xa.tau)->capture_default_str();
    ev_r->add_option("--z1", xa.z1)->capture_default_str();
    ev_r->add_option("--z2", xa.z2)->capture_default_str();
    ev_r->add_option("--q", xa.q, "dynamical variables (felder, acf)");
    ev_r->add_option("--row", xa.row);
    ev_r->add_option("--col", xa.col);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }
    // CLI11 drops an empty value; an explicit empty list must still reach validation
    if (verify->count("--suites") > 0 && !va.suites) va.suites.emplace();

    try {
        if (verify->parsed()) return cmd_verify(va);
        if (evolve->parsed()) return cmd_evolve(ea);
        if (ev_theta->parsed()) {
            const cplx v = theta_char(parse_real(trim(xa.a), xa.a), parse_real(trim(xa.b), xa.b), parse_complex(xa.z),
                                      parse_complex(xa.tau), xa.dz);
            std::cout << format_complex(v) << '\n';
        } else if (ev_phi->parsed()) {
            const FunctionClass cls = eval_class(xa.model.cls, xa.tau);
            std::cout << format_complex(cls.phi(parse_complex(xa.z), parse_complex(xa.eta))) << '\n';
        } else if (ev_fn->parsed()) {
            const FunctionClass cls = eval_class(xa.model.cls, xa.tau);
            const cplx z = parse_complex(xa.z);
            const std::string f = trim(xa.fn);
            cplx v;
            if (f == "e1") v = cls.e1(z);
            else if (f == "e2") v = cls.e2(z);
            else if (f == "wp") v = cls.wp(z);
            else if (f == "th") v = cls.th(z);
            else fail(ErrorKind::ConfigError, "unknown function '" + xa.fn + "'");
            std::cout << format_complex(v) << '\n';
        } else if (ev_lax->parsed()) {
            const ModelSpec spec = xa.model.spec(xa.N);
            const PhasePoint x(list_or_zero(xa.q, xa.N), list_or_zero(xa.p, xa.N));
            const cplx z = parse_complex(xa.z);
            const std::string w = trim(xa.what);
            require(w == "l" || w == "m", ErrorKind::ConfigError, "--what must be L or M");
            print_matrix(w == "l" ? lax_matrix(spec, x, z) : m_matrix(spec, x, z), xa);
        } else if (ev_r->parsed()) {
            RMatrixSpec s{parse_rkind(xa.rkind), xa.N, parse_complex(xa.model.hbar), parse_complex(xa.tau),
                          std::nullopt};
            if (!xa.q.empty()) s.dynamical_q = list_or_zero(xa.q, xa.N);
            print_matrix(r_matrix(s, parse_complex(xa.z1), parse_complex(xa.z2)).matrix(), xa);
        }
        return kAllPass;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::ConfigError:
            case ErrorKind::InvalidArgument:
            case ErrorKind::DimensionMismatch:
            case ErrorKind::MissingDynamical: return kConfigError;
            default: return kRuntimeAbort;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeAbort;
    }
}

}  // namespace laxfactor::cli
