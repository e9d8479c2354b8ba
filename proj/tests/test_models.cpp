#include "laxfactor/models.hpp"
#include "test_util.hpp"

using namespace lft;

namespace {

ModelSpec make_spec(Model m, ClassKind k, int N, bool spectral = true) {
    ModelSpec s;
    s.model = m;
    s.cls = make_class(k);
    s.spectral = spectral || k == ClassKind::Elliptic;
    s.hbar = {0.17, 0.05};
    s.c = 1.3;
    s.nu = 0.7;
    s.N = N;
    return s;
}

// central differences of H give Hamilton's equations independently of the analytic gradient
PhaseVelocity numeric_rhs(const ModelSpec& spec, const PhasePoint& x) {
    const double h = 1e-5;
    const int N = spec.N;
    PhaseVelocity out{Vector(N), Vector(N)};
    for (int i = 0; i < N; ++i) {
        PhasePoint a = x, b = x;
        a.p(i) += h;
        b.p(i) -= h;
        out.dq(i) = (hamiltonian(spec, a) - hamiltonian(spec, b)) / (2 * h);
        a = x;
        b = x;
        a.q(i) += h;
        b.q(i) -= h;
        out.dp(i) = -(hamiltonian(spec, a) - hamiltonian(spec, b)) / (2 * h);
    }
    return out;
}

}  // namespace

TEST(Models, RationalCmExample) {
    auto spec = make_spec(Model::CM, ClassKind::Rational, 2, false);
    spec.nu = 1.0;
    const PhasePoint x(vec({1.0, -1.0}), vec({0.0, 0.0}));
    const Matrix L = lax_cm(spec, x, 0.0);
    Matrix expect(2, 2);
    expect << -0.5, 0.5, -0.5, 0.5;
    EXPECT_LT(mabs(L - expect), 1e-15) << L;
}

TEST(Models, HamiltonEquationsMatchFiniteDifferences) {
    Rng rng = make_rng(1, "eom");
    for (Model m : {Model::RS, Model::RSprime, Model::CM})
        for (ClassKind k : all_classes())
            for (int N : {2, 3, 4}) {
                const auto spec = make_spec(m, k, N);
                const PhasePoint x = sample_phase(rng, spec.cls, N, {.shifts = {spec.hbar, -spec.hbar}});
                const auto an = eom_rhs(spec, x);
                const auto fd = numeric_rhs(spec, x);
                const double scale = 1.0 + mabs(fd.dp) + mabs(fd.dq);
                EXPECT_LT(mabs(an.dq - fd.dq) / scale, 1e-7) << to_string(m) << " " << to_string(k) << " N=" << N;
                EXPECT_LT(mabs(an.dp - fd.dp) / scale, 1e-7) << to_string(m) << " " << to_string(k) << " N=" << N;
            }
}

TEST(Models, AccelerationIsTimeDerivativeOfVelocity) {
    Rng rng = make_rng(2, "acc");
    const double h = 1e-5;
    for (Model m : {Model::RS, Model::CM})
        for (ClassKind k : all_classes()) {
            const auto spec = make_spec(m, k, 3);
            const PhasePoint x = sample_phase(rng, spec.cls, 3, {.shifts = {spec.hbar, -spec.hbar}});
            const auto f = eom_rhs(spec, x);
            const PhasePoint a(x.q + h * f.dq, x.p + h * f.dp), b(x.q - h * f.dq, x.p - h * f.dp);
            const Vector fd = (velocity_map(spec, a) - velocity_map(spec, b)) / (2 * h);
            const Vector acc = acceleration(spec, x.q, velocity_map(spec, x));
            EXPECT_LT(mabs(acc - fd) / (1.0 + mabs(fd)), 1e-7) << to_string(m) << " " << to_string(k);
        }
}

TEST(Models, TraceHamiltonianIsSpectralIndependent) {
    Rng rng = make_rng(3, "trace-h");
    const auto spec = make_spec(Model::RS, ClassKind::Elliptic, 3);
    const PhasePoint x = sample_phase(rng, spec.cls, 3, {.shifts = {spec.hbar, -spec.hbar}});
    const cplx H = hamiltonian(spec, x);
    for (cplx z : {cplx(0.2, 0.1), cplx(-0.31, 0.22), cplx(0.05, -0.1)})
        EXPECT_LT(std::abs(hamiltonian_from_trace(spec, x, z) - H), 1e-10 * (1.0 + std::abs(H)));
}

TEST(Models, CanonicalMapKeepsVelocities) {
    Rng rng = make_rng(4, "rsprime");
    for (ClassKind k : all_classes()) {
        const auto spec = make_spec(Model::RS, k, 3);
        auto prime = spec;
        prime.model = Model::RSprime;
        const PhasePoint x = sample_phase(rng, spec.cls, 3, {.shifts = {spec.hbar, -spec.hbar}});
        const PhasePoint y = rs_to_rsprime(spec, x);
        EXPECT_LT(mabs(velocity_map(spec, x) - velocity_map(prime, y)), 1e-12) << to_string(k);
    }
}

TEST(Models, LaxResidueIsRankOne) {
    // every entry of L^CM has residue nu at z = 0
    Rng rng = make_rng(5, "res");
    const auto spec = make_spec(Model::CM, ClassKind::Elliptic, 4);
    const PhasePoint x = sample_phase(rng, spec.cls, 4);
    const Matrix R = residue_at([&](cplx z) { return lax_cm(spec, x, z); }, 0.0);
    EXPECT_LT(mabs(R - spec.nu * Matrix::Ones(4, 4)), 1e-10);
}

TEST(Models, CoincidentParticlesRaise) {
    const auto spec = make_spec(Model::CM, ClassKind::Rational, 2, false);
    const PhasePoint x(vec({0.5, 0.5}), vec({0.0, 0.0}));
    EXPECT_THROW_KIND(lax_cm(spec, x, 0.3), ErrorKind::NearSingular);
    EXPECT_THROW_KIND(hamiltonian(spec, x), ErrorKind::NearSingular);
}

TEST(Models, SpecValidation) {
    auto spec = make_spec(Model::RS, ClassKind::Elliptic, 2);
    spec.spectral = false;
    EXPECT_THROW_KIND(spec.validate(), ErrorKind::InvalidArgument);
    spec = make_spec(Model::RS, ClassKind::Rational, 2);
    spec.c = 0.0;
    EXPECT_THROW_KIND(spec.validate(), ErrorKind::InvalidArgument);
    spec = make_spec(Model::EllipticTop, ClassKind::Rational, 2);
    EXPECT_THROW_KIND(spec.validate(), ErrorKind::InvalidArgument);
    spec = make_spec(Model::CM, ClassKind::Rational, 3);
    EXPECT_THROW_KIND(lax_cm(spec, PhasePoint(vec({0.1, 0.2}), vec({0.0, 0.0})), 0.1), ErrorKind::DimensionMismatch);
}

TEST(Tops, SpinComponentsReconstruct) {
    Rng rng = make_rng(6, "spin");
    const int N = 3;
    const Matrix S = sample_matrix(rng, N);
    const Vector c = spin_components(S);
    const auto T = heisenberg_table(N);
    Matrix back = Matrix::Zero(N, N);
    for (int a = 0; a < N * N; ++a) back += c(a) * T[a];
    EXPECT_LT(mabs(back - S), 1e-13);
}

TEST(Tops, EulerArnoldEquationMatchesLax) {
    // Sdot = [S, J(S)] must reproduce Ldot = [L, M] at the level of the residue L ~ S/z
    Rng rng = make_rng(7, "top");
    const cplx tau(0.3, 0.8);
    for (bool rel : {false, true}) {
        const Matrix S = sample_matrix(rng, 2, 0.5);
        const Matrix J = top_inertia(S, tau, rel, cplx(0.11, 0.04));
        const Matrix Sdot = S * J - J * S;
        const cplx z(0.21, 0.13);
        const auto lm = lax_top(S, z, tau, rel, cplx(0.11, 0.04));
        // L is linear in S, so dL/dt = L(Sdot)
        const auto ldot = lax_top(Sdot, z, tau, rel, cplx(0.11, 0.04));
        EXPECT_LT(mabs(ldot.L - (lm.L * lm.M - lm.M * lm.L)) / (1.0 + mabs(ldot.L)), 1e-9) << rel;
    }
}
