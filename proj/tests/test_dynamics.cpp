#include "laxfactor/dynamics.hpp"
#include "test_util.hpp"

using namespace lft;

namespace {

ModelSpec cm_rational(int N, cplx nu) {
    ModelSpec s;
    s.model = Model::CM;
    s.cls = FunctionClass::rational();
    s.spectral = false;
    s.nu = nu;
    s.N = N;
    return s;
}

FlowRhs oscillator() {
    return [](const Vector& y) {
        Vector d(2);
        d << y(1), -y(0);
        return d;
    };
}

}  // namespace

TEST(Integrator, FourthOrderOnOscillator) {
    const Vector y0 = vec({1.0, 0.0});
    const double T = 2.0;
    const Vector exact = vec({std::cos(T), -std::sin(T)});
    std::vector<double> errs;
    for (int n : {20, 40, 80}) errs.push_back(mabs(integrate_fixed(oscillator(), y0, T, n) - exact));
    for (size_t i = 1; i < errs.size(); ++i) EXPECT_NEAR(std::log2(errs[i - 1] / errs[i]), 4.0, 0.2);
}

TEST(Integrator, AdaptiveMeetsTolerance) {
    const auto traj = integrate_adaptive(oscillator(), vec({1.0, 0.0}), 10.0, {.tol = 1e-11});
    EXPECT_NEAR(traj.times.back(), 10.0, 1e-12);
    EXPECT_LT(mabs(traj.states.back() - vec({std::cos(10.0), -std::sin(10.0)})), 1e-8);
}

TEST(Integrator, BlowUpExhaustsSteps) {
    // y' = y^2 from y = 1 blows up at t = 1
    FlowRhs f = [](const Vector& y) { return Vector(y.array().square()); };
    EXPECT_THROW_KIND(integrate_adaptive(f, vec({1.0}), 2.0, {.tol = 1e-10, .h_min = 1e-9, .max_steps = 100000}),
                      ErrorKind::StepUnderflow);
}

TEST(Dynamics, FreeParticlesMoveLinearly) {
    const auto spec = cm_rational(3, 0.0);
    const PhasePoint x(vec({-1.0, 0.0, 1.5}), vec({-0.3, 0.2, 0.4}));
    const auto traj = integrate(spec, x, 2.0, 1e-11);
    const PhasePoint& end = traj.states.back();
    EXPECT_LT(mabs(end.q - (x.q + 2.0 * x.p)), 1e-10);
    EXPECT_LT(mabs(end.p - x.p), 1e-12);
}

TEST(Dynamics, AttractiveCollisionIsDetected) {
    // real coupling attracts; head-on particles collide
    const auto spec = cm_rational(2, 1.0);
    const PhasePoint x(vec({-0.5, 0.5}), vec({0.5, -0.5}));
    try {
        integrate(spec, x, 5.0, 1e-10);
        ADD_FAILURE() << "expected a collision";
    } catch (const Error& e) {
        EXPECT_TRUE(e.kind() == ErrorKind::CollisionDetected || e.kind() == ErrorKind::StepUnderflow) << e.what();
    }
}

TEST(Dynamics, ConservationOfTraces) {
    Rng rng = make_rng(1, "cons");
    ModelSpec spec;
    spec.model = Model::RS;
    spec.cls = FunctionClass::elliptic({0.3, 0.8});
    spec.hbar = {0.17, 0.05};
    spec.c = 1.3;
    spec.N = 3;
    const PhasePoint x = sample_phase(rng, spec.cls, 3, {.shifts = {spec.hbar, -spec.hbar}});
    const auto traj = integrate(spec, x, 1.0, 1e-10);
    const auto rep = conservation_report(traj, cplx(0.23, 0.11));
    for (const auto& row : rep.traces) EXPECT_LT(row.drift, 1e-7) << "k=" << row.k;
    EXPECT_LT(rep.energy_drift, 1e-7);
    EXPECT_LT(rep.eigenvalue_drift, 1e-6);
}

TEST(Dynamics, CenterOfMassMovesUniformly) {
    const auto spec = cm_rational(2, cplx(0.0, 0.7));
    const PhasePoint x(vec({-0.8, 0.9}), vec({0.4, 0.1}));
    const auto traj = integrate(spec, x, 1.0, 1e-11);
    const cplx P = x.p.sum();
    EXPECT_LT(std::abs(traj.states.back().p.sum() - P), 1e-10);
    EXPECT_LT(std::abs(traj.states.back().q.sum() - (x.q.sum() + P)), 1e-9);
}

TEST(LaxProfile, SecondOrderAndControl) {
    Rng rng = make_rng(2, "profile");
    ModelSpec spec;
    spec.model = Model::RS;
    spec.cls = FunctionClass::elliptic({0.3, 0.8});
    spec.hbar = {0.17, 0.05};
    spec.c = 1.3;
    spec.N = 3;
    const PhasePoint x = sample_phase(rng, spec.cls, 3, {.shifts = {spec.hbar, -spec.hbar}});
    const auto prof = lax_equation_profile(spec, x, cplx(0.23, 0.11));
    EXPECT_NEAR(prof.estimated_order, 2.0, 0.15);
    EXPECT_LT(prof.min_residual(), 1e-6);

    // replacing M by zero leaves an O(1) residual
    LaxSystem sys = model_lax_system(spec, cplx(0.23, 0.11));
    sys.M = [N = spec.N](const Vector&) { return Matrix(Matrix::Zero(N, N)); };
    const auto bad = lax_equation_profile(sys, pack(x), characteristic_time(spec, x));
    EXPECT_LT(bad.estimated_order, 0.5);
    EXPECT_GT(bad.min_residual(), 1e-3);
}

TEST(LaxProfile, FitOrderOnSyntheticData) {
    ResidualProfile p;
    p.steps = {0.8, 0.4, 0.2, 0.1};
    for (double h : p.steps) p.residuals.push_back(3.0 * h * h * h);
    fit_order(p);
    EXPECT_NEAR(p.estimated_order, 3.0, 1e-12);
    EXPECT_LT(p.fit_residual, 1e-12);
}

TEST(Spectra, EigenvalueDistanceIgnoresOrder) {
    EXPECT_LT(eigenvalue_distance(vec({1.0, 2.0, cplx(0, 1)}), vec({cplx(0, 1), 2.0, 1.0})), 1e-15);
    EXPECT_NEAR(eigenvalue_distance(vec({1.0, 2.0}), vec({1.0, 2.5})), 0.5, 1e-15);
}

TEST(Packing, RoundTrip) {
    const PhasePoint x(vec({1.0, cplx(2.0, 1.0)}), vec({-1.0, 0.5}));
    const PhasePoint y = unpack(pack(x));
    EXPECT_EQ(mabs(x.q - y.q) + mabs(x.p - y.p), 0.0);
}
