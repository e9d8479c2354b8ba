#pragma once

#include <functional>

#include "laxfactor/error.hpp"
#include "laxfactor/types.hpp"

namespace laxfactor {

// Operator on C^n (x) C^n. Row index of site1 (x) site2 is i1 * n + i2.
class TwoSiteOperator {
public:
    TwoSiteOperator() = default;
    TwoSiteOperator(int n, Matrix m);

    int n() const { return n_; }
    const Matrix& matrix() const { return m_; }
    Matrix& matrix() { return m_; }

private:
    int n_ = 0;
    Matrix m_;
};

void check_finite(const Matrix& m, const char* where);
double max_abs(const Matrix& m);
double max_abs(const Vector& v);
Matrix trace_free(const Matrix& m);
// E_ij, 0-based
Matrix unit_matrix(int n, int i, int j);

Matrix clock_matrix(int N);  // Q = diag(exp(2 pi i k/N)), k = 1..N
Matrix shift_matrix(int N);  // Lambda_kl = 1 iff k - l + 1 = 0 mod N
// T_a = exp(pi i a1 a2/N) Q^a1 Lambda^a2; negative powers allowed
Matrix heisenberg_basis(int a1, int a2, int N);
// index alpha = a1 * N + a2 of the N^2 basis matrices, a in {0..N-1}^2
std::vector<Matrix> heisenberg_table(int N);

Matrix kron(const Matrix& a, const Matrix& b);
TwoSiteOperator permutation_operator(int N);
// O_12 = sum_ij E_ii (x) E_ji
TwoSiteOperator o_operator(int N);

// tr_2(X (1 (x) S)) for site 2, tr_1(X (S (x) 1)) for site 1
Matrix trace_over_site(const TwoSiteOperator& op, int site, const Matrix& weight);

// embeddings of a two-site operator into the three-site space
Matrix on_sites_12(const Matrix& r, int n);
Matrix on_sites_23(const Matrix& r, int n);
Matrix on_sites_13(const Matrix& r, int n);

struct ResidueOptions {
    double radius = 1e-2;
    int nodes = 64;
    double tol = 1e-10;
};

using MatrixFunction = std::function<Matrix(cplx)>;

// c_k of the Laurent expansion around z0 by the trapezoid rule on a circle
Matrix laurent_coefficient(const MatrixFunction& f, cplx z0, int k, double radius, int nodes);
// Res_{z=z0} f for at most a first-order pole
Matrix residue_at(const MatrixFunction& f, cplx z0, const ResidueOptions& opt = {});

struct LUInverse {
    Matrix inverse;
    double rcond = 0.0;
};

LUInverse inverse_with_condition(const Matrix& m);
// throws NearSingular when the reciprocal condition estimate is below min_rcond
Matrix inverse(const Matrix& m, double min_rcond = 1e-15);
Matrix solve(const Matrix& a, const Matrix& b);

// eigenvalues sorted by real part, then imaginary part
Vector eigenvalues(const Matrix& m);
// singular values, descending
Eigen::VectorXd singular_values(const Matrix& m);

Matrix commutator(const Matrix& a, const Matrix& b);

}  // namespace laxfactor
