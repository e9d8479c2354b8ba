#pragma once

#include <optional>

#include "laxfactor/factorization.hpp"

namespace laxfactor {

enum class RKind { BaxterBelavin, Felder, ACF };

const char* to_string(RKind k);

struct RMatrixSpec {
    RKind kind = RKind::BaxterBelavin;
    int N = 2;
    cplx hbar{0.0, 0.0};
    cplx tau{0.0, 1.0};
    std::optional<Vector> dynamical_q;  // Felder and ACF only

    void validate() const;
};

// BB: R^hbar(z1 - z2); Felder: R^F(hbar, z1 - z2, q); ACF: R(hbar, z1, z2, q)
TwoSiteOperator r_matrix(const RMatrixSpec& spec, cplx z1, cplx z2);
// (1/N) R^{hbar/N}(z1 - z2)
TwoSiteOperator r_matrix_normalized(int N, cplx hbar, cplx tau, cplx z1, cplx z2);

// 1 (x) 1 E1(z) + sum_{alpha != 0} T_alpha (x) T_{-alpha} phi_alpha(z, w_alpha)
TwoSiteOperator classical_r(cplx z, cplx tau, int N);

// max entry of the Yang-Baxter defect of the chosen R-matrix on the three-site space
double yang_baxter_residual(const RMatrixSpec& spec, cplx z1, cplx z2, cplx z3);

enum class IrfVariant { Felder_BB, ACF_Felder, ACF_BB, Residue };

const char* to_string(IrfVariant v);

double irf_vertex_residual(IrfVariant variant, int N, cplx hbar, cplx tau, const Vector& q, cplx z1, cplx z2);

// Res_{z2 = 0} of the ACF R-matrix, computed by contour
Matrix acf_residue(int N, cplx hbar, cplx tau, const Vector& q, cplx z1);
// gbreve_2(0) - g_1(z) O_12 g_1^{-1}(z) gbreve_2(0)
double irf_hbar_inverse_residual(const Vector& q, cplx z, cplx tau);

// (1/N) tr_2(R^hbar_12(z) S_2)
Matrix lax_from_r(const Matrix& S, cplx z, cplx hbar, cplx tau);

struct Theorem1M {
    Matrix M;
    Matrix G;
    Matrix F;
};

// elliptic: M = -g^{-1}g' G - F + g^{-1} gdot with G, F from partial traces against O_12;
// trig/rational: M = -g^{-1}g' diag(v) - F - diag(D0dot/D0), F_ii = sum_k v_k E1(q_ik + hbar)
Theorem1M m_rs_theorem1(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z, cplx hbar, cplx c);

}  // namespace laxfactor
