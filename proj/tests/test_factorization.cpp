#include "laxfactor/factorization.hpp"
#include "test_util.hpp"

using namespace lft;

namespace {

struct Cell {
    ClassKind k;
    bool spectral;
};

const std::vector<Cell> kCells{{ClassKind::Elliptic, true},      {ClassKind::Trigonometric, true},
                               {ClassKind::Trigonometric, false}, {ClassKind::Rational, true},
                               {ClassKind::Rational, false}};

const cplx kHbar{0.17, 0.05}, kC{1.3, 0.0}, kNu{0.7, 0.0};

}  // namespace

TEST(Factorization, RsProductEqualsDirect) {
    Rng rng = make_rng(1, "rs");
    for (const auto& cell : kCells)
        for (int N : {2, 3, 4, 5})
            for (bool prime : {false, true}) {
                const auto cls = make_class(cell.k);
                ModelSpec spec{prime ? Model::RSprime : Model::RS, cls, cell.spectral, kHbar, kNu, kC, N};
                const PhasePoint x = sample_phase(rng, cls, N, {.shifts = {kHbar, -kHbar}});
                const cplx z = sample_z(rng);
                const Matrix direct = lax_matrix(spec, x, z);
                EXPECT_LT(rel_diff(factorized_lax_rs(cls, cell.spectral, x, z, kHbar, kC, prime), direct), 1e-9)
                    << to_string(cell.k) << " spectral=" << cell.spectral << " N=" << N << " prime=" << prime;
                if (has_alternative_form(cls, cell.spectral, true))
                    EXPECT_LT(rel_diff(factorized_lax_rs(cls, cell.spectral, x, z, kHbar, kC, prime,
                                                         FactorForm::Alternative),
                                       direct),
                              1e-9);
            }
}

TEST(Factorization, CmProductEqualsDirect) {
    Rng rng = make_rng(2, "cm");
    for (const auto& cell : kCells)
        for (int N : {2, 3, 4, 5}) {
            const auto cls = make_class(cell.k);
            ModelSpec spec{Model::CM, cls, cell.spectral, kHbar, kNu, kC, N};
            const PhasePoint x = sample_phase(rng, cls, N);
            const cplx z = sample_z(rng);
            const Matrix direct = lax_cm(spec, x, z);
            EXPECT_LT(rel_diff(factorized_lax_cm(cls, cell.spectral, x, z, kNu), direct), 1e-9)
                << to_string(cell.k) << " spectral=" << cell.spectral << " N=" << N;
            if (has_alternative_form(cls, cell.spectral, false))
                EXPECT_LT(rel_diff(factorized_lax_cm(cls, cell.spectral, x, z, kNu, FactorForm::Alternative), direct),
                          1e-9);
        }
}

TEST(Intertwiner, InverseAndDeterminant) {
    Rng rng = make_rng(3, "g");
    for (int N : {2, 3, 4}) {
        const auto cls = FunctionClass::elliptic({0.3, 0.8});
        const Intertwiner g(cls, true, N);
        const PhasePoint x = sample_phase(rng, cls, N);
        const cplx z = sample_z(rng);
        EXPECT_LT(mabs(g.g(z, x.q) * g.g_inverse(z, x.q) - Matrix::Identity(N, N)), 1e-10);
        const cplx det = g.xi(z, x.q).determinant();
        const cplx closed = det_xi_closed_form(z, x.q, cls.tau());
        EXPECT_LT(std::abs(det - closed), 1e-9 * std::abs(closed)) << "N=" << N;
        // the reversed ordering differs by the sign of the Vandermonde product
        const double sign = (N * (N - 1) / 2) % 2 ? -1.0 : 1.0;
        EXPECT_LT(std::abs(det_xi_closed_form(z, x.q, cls.tau(), true) - sign * closed), 1e-12 * std::abs(closed));
    }
}

TEST(Intertwiner, DerivativesMatchFiniteDifferences) {
    Rng rng = make_rng(4, "gprime");
    for (const auto& cell : kCells) {
        const auto cls = make_class(cell.k);
        const Intertwiner g(cls, cell.spectral, 3);
        const PhasePoint x = sample_phase(rng, cls, 3);
        const cplx z = sample_z(rng);
        const double h = 1e-5;
        const Matrix fd = (g.xi(z + h, x.q) - g.xi(z - h, x.q)) / (2 * h);
        EXPECT_LT(rel_diff(g.xi(z, x.q, 1), fd), 1e-8) << to_string(cell.k);
        const Vector v = x.p;
        const Matrix gdot_fd = (g.g(z, x.q + h * v) - g.g(z, x.q - h * v)) / (2 * h);
        EXPECT_LT(rel_diff(g.g_dot(z, x.q, v), gdot_fd), 1e-8) << to_string(cell.k);
    }
}

TEST(Intertwiner, LaurentConstantTwoWays) {
    Rng rng = make_rng(5, "laurent");
    for (int N : {2, 3}) {
        const auto cls = FunctionClass::elliptic({0.3, 0.8});
        const Intertwiner g(cls, true, N);
        const PhasePoint x = sample_phase(rng, cls, N);
        const auto ld = laurent_data(g, x.q);
        const Matrix A = laurent_constant_richardson(g, x.q, ld.gbreve0);
        EXPECT_LT(rel_diff(ld.A, A), 1e-8);
        // the residue of g^{-1} at 0 has rank one
        const auto sv = singular_values(ld.gbreve0);
        EXPECT_LT(sv(1) / sv(0), 1e-10);
    }
}

TEST(Intertwiner, CoincidentCoordinatesRaise) {
    const auto cls = FunctionClass::rational();
    const Intertwiner g(cls, false, 2);
    EXPECT_THROW_KIND(g.g(0.3, vec({0.4, 0.4})), ErrorKind::DegenerateConfiguration);
}

TEST(Vandermonde, BinomialShiftMovesNodes) {
    // V(q) rows are powers of -q; C_lambda acts as the shift q -> q - lambda
    const Vector q = vec({0.3, -0.7, 1.1});
    const cplx lam(0.25, 0.1);
    const Matrix lhs = binomial_shift(3, lam) * vandermonde_q(q);
    const Matrix rhs = vandermonde_q((q.array() - lam).matrix());
    const Matrix rhs2 = vandermonde_q((q.array() + lam).matrix());
    EXPECT_TRUE(mabs(lhs - rhs) < 1e-13 || mabs(lhs - rhs2) < 1e-13) << lhs << "\n" << rhs;
}

TEST(RankOne, SpinHasRankOne) {
    Rng rng = make_rng(6, "spin");
    const cplx tau(0.3, 0.8);
    for (int N : {2, 3, 4}) {
        const auto cls = FunctionClass::elliptic(tau);
        const PhasePoint x = sample_phase(rng, cls, N, {.shifts = {kHbar, -kHbar}});
        const auto rel = spin_from_phase(x, kHbar, kC, true, kNu, tau);
        EXPECT_LT(rel.sigma_ratio, 1e-10);
        EXPECT_LT(compare_up_to_scalar(rel.psi, psi_from_hbar(x.q, kHbar, tau)) / mabs(rel.psi), 1e-9);
        const auto nonrel = spin_from_phase(x, kHbar, kC, false, kNu, tau);
        EXPECT_LT(nonrel.sigma_ratio, 1e-10);
        const cplx z = sample_z(rng);
        const auto gr = gauge_equivalence_residual(x, z, kHbar, kC, tau);
        EXPECT_LT(gr.gauge, 1e-9);
        EXPECT_LT(gr.pole_cancel, 1e-9);
        EXPECT_LT(column_identity_residual(x.q, z, kHbar, tau), 1e-9);
    }
}

TEST(RankOne, CompareUpToScalar) {
    Rng rng = make_rng(7, "scalar");
    const Matrix a = sample_matrix(rng, 3);
    EXPECT_LT(compare_up_to_scalar(cplx(2.0, -1.0) * a, a), 1e-13);
    EXPECT_GT(compare_up_to_scalar(a, sample_matrix(rng, 3)), 1e-2);
}
