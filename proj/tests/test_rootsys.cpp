#include "laxfactor/dynamics.hpp"
#include "laxfactor/rootsys.hpp"
#include "test_util.hpp"

using namespace lft;

namespace {

const cplx kM2{0.0, 0.7}, kM4{0.0, 0.4};

std::vector<BCNSpec> presets(int N) { return {BCNSpec::bn(N, kM2), BCNSpec::cn(N, kM2, kM4), BCNSpec::dn(N, kM2)}; }

PhasePoint sample_qv(Rng& rng, int N) {
    PhasePoint x{Vector(N), Vector(N)};
    for (int i = 0; i < N; ++i) {
        x.q(i) = 0.6 + 0.7 * i + uniform(rng, -0.1, 0.1);
        x.p(i) = uniform(rng, -0.4, 0.4);
    }
    return x;
}

Vector spectrum(const BCNSpec& spec, const PhasePoint& qv) {
    const PhasePoint x(qv.q, bcn_momentum_from_velocity(spec, qv.q, qv.p));
    return eigenvalues(lax_bcn(spec, x));
}

}  // namespace

TEST(RootSystems, PresetsSatisfyConstraint) {
    for (const auto& s : presets(3)) {
        EXPECT_TRUE(s.constraint_satisfied()) << to_string(s.root);
        EXPECT_NO_THROW(s.validate());
    }
    EXPECT_FALSE(BCNSpec::bcn(3, cplx(0.0, 0.3), kM2, kM4).constraint_satisfied());
    BCNSpec bad = BCNSpec::dn(3, kM2);
    bad.m4 = 0.2;
    EXPECT_THROW_KIND(bad.validate(), ErrorKind::InvalidArgument);
}

TEST(RootSystems, FactorizedEqualsDirect) {
    Rng rng = make_rng(1, "bcn-fact");
    for (int N : {2, 3, 4})
        for (const auto& s : presets(N)) {
            const PhasePoint qv = sample_qv(rng, N);
            const PhasePoint x(qv.q, bcn_momentum_from_velocity(s, qv.q, qv.p));
            if (s.root == RootSystem::Bn) {
                EXPECT_LT(rel_diff(factorized_lax_b(s, x), lax_bcn(s, x)), 1e-10) << N;
            } else {
                EXPECT_LT(rel_diff(factorized_lax_dc(s, x), lax_bcn_truncated(s, x)), 1e-10)
                    << to_string(s.root) << " N=" << N;
            }
        }
}

TEST(RootSystems, TruncationNeedsZeroM1) {
    Rng rng = make_rng(2, "trunc");
    const auto s = BCNSpec::bn(2, kM2);
    const PhasePoint qv = sample_qv(rng, 2);
    EXPECT_ANY_THROW(lax_bcn_truncated(s, PhasePoint(qv.q, bcn_momentum_from_velocity(s, qv.q, qv.p))));
}

TEST(RootSystems, VandermondeBlockIdentities) {
    Rng rng = make_rng(3, "vandermonde-block");
    for (int N : {2, 3, 4}) {
        const auto b = vandermonde_block_identities(sample_qv(rng, N).q);
        EXPECT_LT(b.j_block, 1e-10);
        EXPECT_LT(b.even_sum, 1e-10);
        EXPECT_LT(b.corners, 1e-10);
        EXPECT_LT(b.b_diag, 1e-10);
        EXPECT_LT(b.sign_flip, 1e-10);
    }
}

TEST(RootSystems, NewtonForceIsMinusGradient) {
    Rng rng = make_rng(4, "force");
    const auto s = BCNSpec::bcn(3, cplx(0.0, 0.3), kM2, kM4);
    const PhasePoint qv = sample_qv(rng, 3);
    const Vector acc = bcn_acceleration(s, qv.q);
    const double h = 1e-5;
    for (int i = 0; i < 3; ++i) {
        Vector a = qv.q, b = qv.q;
        a(i) += h;
        b(i) -= h;
        const cplx grad = (bcn_hamiltonian(s, a, qv.p) - bcn_hamiltonian(s, b, qv.p)) / (2 * h);
        EXPECT_LT(std::abs(acc(i) + grad), 1e-7 * (1.0 + std::abs(grad)));
    }
}

TEST(RootSystems, ReflectionSymmetry) {
    Rng rng = make_rng(5, "parity");
    const auto s = BCNSpec::bcn(3, cplx(0.0, 0.3), kM2, kM4);
    const PhasePoint qv = sample_qv(rng, 3);
    Vector q2 = qv.q;
    q2(1) = -q2(1);
    EXPECT_LT(std::abs(bcn_hamiltonian(s, qv.q, qv.p) - bcn_hamiltonian(s, q2, qv.p)), 1e-13);
}

TEST(RootSystems, IsospectralOnlyUnderConstraint) {
    Rng rng = make_rng(6, "iso");
    const PhasePoint qv = sample_qv(rng, 2);
    const auto good = BCNSpec::cn(2, kM2, kM4);
    const auto traj = integrate(good, qv, 1.0, 1e-11);
    EXPECT_LT(eigenvalue_distance(spectrum(good, traj.states.front()), spectrum(good, traj.states.back())), 1e-7);

    const auto bad = BCNSpec::bcn(2, cplx(0.0, 0.3), kM2, kM4);
    const auto traj2 = integrate(bad, qv, 1.0, 1e-11);
    EXPECT_GT(eigenvalue_distance(spectrum(bad, traj2.states.front()), spectrum(bad, traj2.states.back())), 1e-4);
}
