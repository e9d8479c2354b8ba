#include "laxfactor/rmatrix.hpp"
#include "test_util.hpp"

using namespace lft;

namespace {
const cplx kTau{0.3, 0.8}, kHbar{0.17, 0.05};
}

TEST(RMatrix, YangBaxterAllKinds) {
    Rng rng = make_rng(1, "ybe");
    for (int N : {2, 3})
        for (RKind k : {RKind::BaxterBelavin, RKind::Felder, RKind::ACF}) {
            RMatrixSpec s{k, N, kHbar, kTau, std::nullopt};
            if (k != RKind::BaxterBelavin)
                s.dynamical_q = sample_phase(rng, FunctionClass::elliptic(kTau), N, {.shifts = {kHbar, -kHbar}}).q;
            EXPECT_LT(yang_baxter_residual(s, sample_z(rng), -sample_z(rng), cplx(0.07, 0.31)), 1e-9)
                << to_string(k) << " N=" << N;
        }
}

TEST(RMatrix, UnitarityIsScalar) {
    // R_12(z) R_21(-z) is proportional to the identity
    for (int N : {2, 3}) {
        RMatrixSpec s{RKind::BaxterBelavin, N, kHbar, kTau, std::nullopt};
        const cplx z(0.23, 0.11);
        const Matrix P = permutation_operator(N).matrix();
        const Matrix prod = r_matrix(s, z, 0.0).matrix() * P * r_matrix(s, -z, 0.0).matrix() * P;
        const cplx c = prod(0, 0);
        EXPECT_LT(mabs(prod - c * Matrix::Identity(N * N, N * N)) / std::abs(c), 1e-11);
    }
}

TEST(RMatrix, ResidueIsPermutation) {
    for (int N : {2, 3}) {
        RMatrixSpec s{RKind::BaxterBelavin, N, kHbar, kTau, std::nullopt};
        const Matrix res = residue_at([&](cplx z) { return r_matrix(s, z, 0.0).matrix(); }, 0.0);
        EXPECT_LT(mabs(res - double(N) * permutation_operator(N).matrix()), 1e-10);
    }
}

TEST(RMatrix, ClassicalLimit) {
    // R^h(z) = 1/h + r(z) + O(h)
    const int N = 3;
    const cplx z(0.21, 0.09);
    const Matrix r = classical_r(z, kTau, N).matrix();
    double prev = 0.0;
    for (double h : {1e-3, 1e-4}) {
        RMatrixSpec s{RKind::BaxterBelavin, N, h, kTau, std::nullopt};
        const Matrix d = r_matrix(s, z, 0.0).matrix() - Matrix::Identity(N * N, N * N) / h - r;
        const double err = mabs(d);
        EXPECT_LT(err, 50.0 * h);
        if (prev > 0.0) EXPECT_NEAR(prev / err, 10.0, 1.0);
        prev = err;
    }
}

TEST(RMatrix, NormalizedForm) {
    const int N = 2;
    const cplx z1(0.3, 0.1), z2(-0.05, 0.02);
    RMatrixSpec s{RKind::BaxterBelavin, N, kHbar / 2.0, kTau, std::nullopt};
    EXPECT_LT(mabs(r_matrix_normalized(N, kHbar, kTau, z1, z2).matrix() - r_matrix(s, z1, z2).matrix() / 2.0),
              1e-14);
}

TEST(RMatrix, DynamicalNeedsCoordinates) {
    RMatrixSpec s{RKind::Felder, 2, kHbar, kTau, std::nullopt};
    EXPECT_THROW_KIND(r_matrix(s, 0.2, 0.0), ErrorKind::MissingDynamical);
    s.kind = RKind::BaxterBelavin;
    s.dynamical_q = vec({0.1, 0.2});
    EXPECT_THROW_KIND(r_matrix(s, 0.2, 0.0), ErrorKind::InvalidArgument);
    s.kind = RKind::ACF;
    s.dynamical_q = vec({0.1, 0.2, 0.3});
    EXPECT_THROW_KIND(r_matrix(s, 0.2, 0.0), ErrorKind::DimensionMismatch);
}

TEST(Irf, VertexRelationsHold) {
    Rng rng = make_rng(2, "irf");
    for (int N : {2, 3})
        for (IrfVariant v : {IrfVariant::Felder_BB, IrfVariant::ACF_Felder, IrfVariant::ACF_BB, IrfVariant::Residue}) {
            const Vector q = sample_phase(rng, FunctionClass::elliptic(kTau), N, {.shifts = {kHbar, -kHbar}}).q;
            EXPECT_LT(irf_vertex_residual(v, N, kHbar, kTau, q, sample_z(rng), -sample_z(rng)), 1e-8)
                << to_string(v) << " N=" << N;
        }
}

TEST(Irf, AcfResidueIsO) {
    Rng rng = make_rng(3, "acf-res");
    const int N = 3;
    const Vector q = sample_phase(rng, FunctionClass::elliptic(kTau), N).q;
    // Res_{z2=0} of the ACF R-matrix is the O_12 operator
    EXPECT_LT(mabs(acf_residue(N, kHbar, kTau, q, cplx(0.31, 0.07)) - o_operator(N).matrix()), 1e-10);
    EXPECT_LT(irf_hbar_inverse_residual(q, cplx(0.31, 0.07), kTau), 1e-10);
}

TEST(Tops, LaxFromRIsLinearInS) {
    Rng rng = make_rng(4, "lax-r");
    const Matrix a = sample_matrix(rng, 2), b = sample_matrix(rng, 2);
    const cplx z(0.2, 0.1);
    const Matrix lhs = lax_from_r(a + 2.0 * b, z, kHbar, kTau);
    const Matrix rhs = lax_from_r(a, z, kHbar, kTau) + 2.0 * lax_from_r(b, z, kHbar, kTau);
    EXPECT_LT(mabs(lhs - rhs), 1e-12);
}
