#pragma once

#include "laxfactor/models.hpp"

namespace laxfactor {

// which matrix plays the role of Xi in g = Xi D0^{-1}
enum class IntertwinerKind {
    EllipticXi,  // theta[1/2 - i/N; N/2](z - N q_j + sum q | N tau)
    TrigXi,      // x_j^{i-1}, last row x_j^{N-1} + (-1)^N / x_j, x_j = exp(2(z - q_j + qbar))
    TrigV,       // exp((2i - 1 - N)(z - q_j))
    RationalXi,  // (z - q_j + qbar)^{rho(i)}, rho = 0..N-2, N
    RationalV,   // (z - q_j + qbar)^{i-1}
};

const char* to_string(IntertwinerKind kind);

// Immutable after construction; shareable across threads.
class Intertwiner {
public:
    // the intertwiner used by the factorized Lax matrices of (class, spectral)
    Intertwiner(const FunctionClass& cls, bool spectral, int N);
    Intertwiner(IntertwinerKind kind, const FunctionClass& cls, int N);

    IntertwinerKind kind() const { return kind_; }
    const FunctionClass& cls() const { return cls_; }
    int N() const { return N_; }

    // z-derivative of order dz of Xi
    Matrix xi(cplx z, const Vector& q, int dz = 0) const;
    // diagonal of D0
    Vector d0(const Vector& q) const;
    // diagonal of D0dot D0^{-1} when qdot = v (formal substitution)
    Vector d0_rate(const Vector& q, const Vector& v) const;

    Matrix g(cplx z, const Vector& q, int dz = 0) const;
    Matrix g_inverse(cplx z, const Vector& q) const;
    // sum_i v_i dg/dq_i: g'(-kappa diag(v) + lambda sum v) - g D0dot D0^{-1}
    Matrix g_dot(cplx z, const Vector& q, const Vector& v, int dz = 0) const;

    // elliptic only: partial tau derivatives at fixed z, q
    Matrix xi_tau(cplx z, const Vector& q) const;
    Vector d0_tau(const Vector& q) const;  // d_tau log D0_j
    Matrix g_tau(cplx z, const Vector& q) const;

    // column j of Xi depends on z - kappa q_j + lambda sum q
    double kappa() const;
    double lambda() const;

private:
    IntertwinerKind kind_;
    FunctionClass cls_;
    int N_;

    void check_q(const Vector& q) const;
};

// D^eta_j = prod_{k != j} th(q_j - q_k + eta)
Vector d_eta(const FunctionClass& cls, const Vector& q, cplx eta);

Matrix vandermonde_q(const Vector& q);  // (-q_j)^{i-1}
Matrix binomial_shift(int N, cplx lambda);  // C_lambda
Matrix lowering_c0(int N);  // (C0)_{i,i-1} = i - 1 (1-based)
Matrix y_matrix(int N, cplx lambda);  // diag exp(-(N + 1 - 2i) lambda)

// det Xi for the elliptic intertwiner in closed form, C_N theta(z) prod theta(q_j - q_i) over i<j.
// reversed_order: product over theta(q_i - q_j) instead, which differs by (-1)^{N(N-1)/2}
cplx det_xi_closed_form(cplx z, const Vector& q, cplx tau, bool reversed_order = false);
cplx det_constant(int N, cplx tau);

struct LaurentData {
    Matrix gbreve0;  // Res_{z=0} g^{-1}
    Matrix A;        // constant term of g^{-1} at 0
};

LaurentData laurent_data(const Intertwiner& g, const Vector& q, const ResidueOptions& opt = {});
// A from (g^{-1}(e) - gbreve0/e) averaged over +-e, Richardson in e
Matrix laurent_constant_richardson(const Intertwiner& g, const Vector& q, const Matrix& gbreve0,
                                   double eps = 1e-3);

enum class FactorForm { Primary, Alternative };

// true when the cell has a second factorized form (Y, C_hbar, log Y, C0, explicit g^{-1}g')
bool has_alternative_form(const FunctionClass& cls, bool spectral, bool relativistic);

Matrix factorized_lax_rs(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z,
                         cplx hbar, cplx c, bool prime = false, FactorForm form = FactorForm::Primary);
Matrix factorized_lax_cm(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z,
                         cplx nu, FactorForm form = FactorForm::Primary);

// explicit entries of g^{-1} g' for the elliptic intertwiner
Matrix elliptic_log_derivative(const FunctionClass& cls, const Vector& q, cplx z);

struct SpinData {
    Matrix S;
    Vector psi;  // (1/N) rho^T gbreve0
    LaurentData laurent;
    double sigma_ratio = 0.0;  // sigma_2 / sigma_1 of S
};

// relativistic: S = (theta'(0)/theta(hbar)) g(N hbar) e^{P/c} gbreve0
// nonrelativistic: S = g(0) P gbreve0 + N nu g'(0) gbreve0
SpinData spin_from_phase(const PhasePoint& x, cplx hbar, cplx c, bool relativistic, cplx nu, cplx tau);
// alternative psi = (theta(hbar)/theta'(0)) rho^T D^{-hbar} D0^{-1} g^{-1}(N hbar)
Vector psi_from_hbar(const Vector& q, cplx hbar, cplx tau);

struct GaugeResidual {
    double gauge = 0.0;        // L^RS - g^{-1} L^hbar(S) g
    double pole_cancel = 0.0;  // g(0) Res L^RS gbreve0
};

GaugeResidual gauge_equivalence_residual(const PhasePoint& x, cplx z, cplx hbar, cplx c, cplx tau);

// (theta(h)/theta'(0)) sum_k g_ik(z) phi(z, q_kj + h) - g_ij(z + N h) prod_{m != j} theta(q_mj)/theta(q_mj + h)
double column_identity_residual(const Vector& q, cplx z, cplx hbar, cplx tau);

// min over scalars s of max|a - s b|, s from least squares
double compare_up_to_scalar(const Matrix& a, const Matrix& b);

}  // namespace laxfactor
