#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "laxfactor/dynamics.hpp"
#include "laxfactor/factorization.hpp"
#include "laxfactor/rmatrix.hpp"
#include "laxfactor/rootsys.hpp"
#include "laxfactor/suites.hpp"

namespace py = pybind11;
using namespace laxfactor;

namespace {

Model parse_model(const std::string& m) {
    if (m == "rs") return Model::RS;
    if (m == "rs-prime") return Model::RSprime;
    if (m == "cm") return Model::CM;
    fail(ErrorKind::ConfigError, "model must be rs, rs-prime or cm, got '" + m + "'");
}

FunctionClass make_class(const std::string& cls, cplx tau) {
    if (cls == "elliptic") return FunctionClass::elliptic(tau);
    if (cls == "trig") return FunctionClass::trigonometric();
    if (cls == "rational") return FunctionClass::rational();
    fail(ErrorKind::ConfigError, "class must be elliptic, trig or rational, got '" + cls + "'");
}

ModelSpec make_spec(const std::string& model, const std::string& cls, int N, bool spectral, cplx hbar, cplx c,
                    cplx nu, cplx tau) {
    ModelSpec s;
    s.model = parse_model(model);
    s.cls = make_class(cls, tau);
    s.spectral = spectral;
    s.hbar = hbar;
    s.c = c;
    s.nu = nu;
    s.N = N;
    s.validate();
    return s;
}

RKind parse_rkind(const std::string& k) {
    if (k == "bb") return RKind::BaxterBelavin;
    if (k == "felder") return RKind::Felder;
    if (k == "acf") return RKind::ACF;
    fail(ErrorKind::ConfigError, "kind must be bb, felder or acf, got '" + k + "'");
}

py::dict result_dict(const CaseResult& r) {
    py::dict d;
    d["suite"] = r.suite;
    d["case-id"] = r.case_id;
    d["residual"] = r.residual;
    d["tolerance"] = r.tolerance;
    d["passed"] = r.passed;
    d["wall_time_ms"] = r.wall_time_ms;
    d["provenance"] = to_string(r.provenance);
    d["seed"] = r.seed;
    d["outcome"] = to_string(r.outcome);
    if (!r.error.empty()) d["error"] = r.error;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Factorized Lax pairs of Calogero-Moser and Ruijsenaars-Schneider models";

    // messages start with the error kind, e.g. "NearSingular: ..."
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    m.def("error_kind", [](const std::string& message) { return message.substr(0, message.find(':')); },
          "kind prefix of an Error message");

    // special functions
    m.def("theta", [](cplx z, cplx tau, int dz, int dtau) { return theta(z, tau, dz, dtau); }, py::arg("z"),
          py::arg("tau"), py::arg("dz") = 0, py::arg("dtau") = 0);
    m.def("theta_char",
          [](double a, double b, cplx z, cplx tau, int dz) { return theta_char(a, b, z, tau, dz); }, py::arg("a"),
          py::arg("b"), py::arg("z"), py::arg("tau"), py::arg("dz") = 0);
    m.def("dedekind_eta", &dedekind_eta);

    py::class_<FunctionClass>(m, "FunctionClass")
        .def_static("elliptic", [](cplx tau) { return FunctionClass::elliptic(tau); }, py::arg("tau"))
        .def_static("trigonometric", [] { return FunctionClass::trigonometric(); })
        .def_static("rational", [] { return FunctionClass::rational(); })
        .def_property_readonly("kind", [](const FunctionClass& c) { return to_string(c.kind()); })
        .def("th", &FunctionClass::th)
        .def("e1", &FunctionClass::e1)
        .def("e2", &FunctionClass::e2)
        .def("wp", &FunctionClass::wp)
        .def("phi", &FunctionClass::phi, py::arg("z"), py::arg("q"))
        .def("f", &FunctionClass::f, py::arg("z"), py::arg("q"));

    // Lax matrices
    const auto model_args = [] {
        return std::make_tuple(py::arg("model"), py::arg("cls"), py::arg("q"), py::arg("p"), py::arg("z"),
                               py::arg("spectral") = true, py::arg("hbar") = cplx(0.17, 0.05),
                               py::arg("c") = cplx(1.3, 0.0), py::arg("nu") = cplx(0.7, 0.0),
                               py::arg("tau") = cplx(0.3, 0.8));
    };
    auto with_spec = [](auto fn) {
        return [fn](const std::string& model, const std::string& cls, const Vector& q, const Vector& p, cplx z,
                    bool spectral, cplx hbar, cplx c, cplx nu, cplx tau) {
            const ModelSpec s = make_spec(model, cls, int(q.size()), spectral, hbar, c, nu, tau);
            return fn(s, PhasePoint(q, p), z);
        };
    };
    std::apply([&](auto... a) { m.def("lax_matrix", with_spec([](const ModelSpec& s, const PhasePoint& x, cplx z) {
                                          return lax_matrix(s, x, z);
                                      }),
                                      a...); },
               model_args());
    std::apply([&](auto... a) { m.def("m_matrix", with_spec([](const ModelSpec& s, const PhasePoint& x, cplx z) {
                                          return m_matrix(s, x, z);
                                      }),
                                      a...); },
               model_args());
    std::apply([&](auto... a) {
        m.def("factorized_lax_matrix", with_spec([](const ModelSpec& s, const PhasePoint& x, cplx z) {
                  return s.model == Model::CM ? factorized_lax_cm(s.cls, s.spectral, x, z, s.nu)
                                              : factorized_lax_rs(s.cls, s.spectral, x, z, s.hbar, s.c,
                                                                  s.model == Model::RSprime);
              }),
              a...);
    }, model_args());
    std::apply([&](auto... a) {
        m.def("hamiltonian",
              with_spec([](const ModelSpec& s, const PhasePoint& x, cplx) { return hamiltonian(s, x); }), a...);
    }, model_args());

    // R-matrices
    m.def(
        "r_matrix",
        [](const std::string& kind, int N, cplx hbar, cplx tau, cplx z1, cplx z2, std::optional<Vector> q) {
            RMatrixSpec s{parse_rkind(kind), N, hbar, tau, std::move(q)};
            return r_matrix(s, z1, z2).matrix();
        },
        py::arg("kind"), py::arg("N"), py::arg("hbar"), py::arg("tau"), py::arg("z1"), py::arg("z2") = cplx(0.0),
        py::arg("q") = py::none());
    m.def(
        "yang_baxter_residual",
        [](const std::string& kind, int N, cplx hbar, cplx tau, cplx z1, cplx z2, cplx z3, std::optional<Vector> q) {
            return yang_baxter_residual(RMatrixSpec{parse_rkind(kind), N, hbar, tau, std::move(q)}, z1, z2, z3);
        },
        py::arg("kind"), py::arg("N"), py::arg("hbar"), py::arg("tau"), py::arg("z1"), py::arg("z2"), py::arg("z3"),
        py::arg("q") = py::none());

    // trajectories
    m.def(
        "evolve",
        [](const std::string& model, const std::string& cls, const Vector& q, const Vector& p, double t_end,
           double tol, bool spectral, cplx hbar, cplx c, cplx nu, cplx tau) {
            const ModelSpec s = make_spec(model, cls, int(q.size()), spectral, hbar, c, nu, tau);
            Trajectory traj;
            {
                py::gil_scoped_release release;
                traj = integrate(s, PhasePoint(q, p), t_end, tol);
            }
            const Eigen::Index n = Eigen::Index(traj.times.size());
            Eigen::MatrixXcd Q(n, q.size()), P(n, q.size());
            for (Eigen::Index i = 0; i < n; ++i) {
                Q.row(i) = traj.states[i].q.transpose();
                P.row(i) = traj.states[i].p.transpose();
            }
            return py::make_tuple(traj.times, Q, P);
        },
        py::arg("model"), py::arg("cls"), py::arg("q"), py::arg("p"), py::arg("t_end"), py::arg("tol") = 1e-10,
        py::arg("spectral") = true, py::arg("hbar") = cplx(0.17, 0.05), py::arg("c") = cplx(1.3, 0.0),
        py::arg("nu") = cplx(0.7, 0.0), py::arg("tau") = cplx(0.3, 0.8),
        "times, q and p along an adaptive RK4 trajectory");

    // verification suites
    m.def("suite_names", &suite_names);
    m.def(
        "verify",
        [](std::vector<std::string> suites, std::uint64_t seed, std::optional<std::pair<int, int>> N,
           unsigned threads) {
            SuiteConfig cfg;
            cfg.suites = std::move(suites);
            cfg.seed = seed;
            cfg.N_range = N;
            cfg.validate();
            std::vector<CaseResult> res;
            {
                py::gil_scoped_release release;
                res = run_cases(build_cases(cfg), seed, threads ? threads : default_thread_count());
            }
            py::list out;
            for (const auto& r : res) out.append(result_dict(r));
            return out;
        },
        py::arg("suites"), py::arg("seed") = 0, py::arg("N") = py::none(), py::arg("threads") = 0,
        "run suites and return one record per case");
}
