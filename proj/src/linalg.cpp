#include "laxfactor/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace laxfactor {

TwoSiteOperator::TwoSiteOperator(int n, Matrix m) : n_(n), m_(std::move(m)) {
    require(n >= 1, ErrorKind::DimensionMismatch, "site dimension must be positive");
    require(m_.rows() == n * n && m_.cols() == n * n, ErrorKind::DimensionMismatch,
            "two-site operator must be n^2 x n^2");
}

void check_finite(const Matrix& m, const char* where) {
    if (!m.allFinite()) fail(ErrorKind::InvalidArgument, std::string(where) + ": non-finite entry");
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Matrix trace_free(const Matrix& m) {
    const double n = double(m.rows());
    return m - (m.trace() / n) * Matrix::Identity(m.rows(), m.cols());
}

Matrix unit_matrix(int n, int i, int j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

Matrix clock_matrix(int N) {
    require(N >= 1, ErrorKind::DimensionMismatch, "N must be positive");
    Matrix q = Matrix::Zero(N, N);
    for (int k = 1; k <= N; ++k) q(k - 1, k - 1) = std::exp(2.0 * I * pi * double(k) / double(N));
    return q;
}

Matrix shift_matrix(int N) {
    require(N >= 1, ErrorKind::DimensionMismatch, "N must be positive");
    Matrix l = Matrix::Zero(N, N);
    for (int k = 1; k <= N; ++k)
        for (int j = 1; j <= N; ++j)
            if (((k - j + 1) % N + N) % N == 0) l(k - 1, j - 1) = 1.0;
    return l;
}

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

}  // namespace

Matrix heisenberg_basis(int a1, int a2, int N) {
    require(N >= 1, ErrorKind::DimensionMismatch, "N must be positive");
    // Q^a1 is diagonal with entries exp(2 pi i k a1/N); Lambda^a2 shifts columns
    Matrix t = Matrix::Zero(N, N);
    const cplx pref = std::exp(I * pi * double(a1) * double(a2) / double(N));
    const int s = mod(a2, N);
    for (int k = 1; k <= N; ++k) {
        // (Lambda^s)_{kl} = 1 iff l = k + s mod N
        const int l = mod(k - 1 + s, N);
        t(k - 1, l) = pref * std::exp(2.0 * I * pi * double(k) * double(mod(a1, N)) / double(N));
    }
    return t;
}

std::vector<Matrix> heisenberg_table(int N) {
    std::vector<Matrix> out;
    out.reserve(std::size_t(N) * N);
    for (int a1 = 0; a1 < N; ++a1)
        for (int a2 = 0; a2 < N; ++a2) out.push_back(heisenberg_basis(a1, a2, N));
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

TwoSiteOperator permutation_operator(int N) {
    require(N >= 1, ErrorKind::DimensionMismatch, "N must be positive");
    Matrix p = Matrix::Zero(N * N, N * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) p(i * N + j, j * N + i) = 1.0;

    Matrix alt = Matrix::Zero(N * N, N * N);
    for (int a1 = 0; a1 < N; ++a1)
        for (int a2 = 0; a2 < N; ++a2)
            alt += kron(heisenberg_basis(a1, a2, N), heisenberg_basis(-a1, -a2, N));
    alt /= double(N);
    if (max_abs(Matrix(p - alt)) >= 1e-12) {
        fail(ErrorKind::NonConverged, "permutation operator: basis forms disagree");
    }
    return TwoSiteOperator(N, p);
}

TwoSiteOperator o_operator(int N) {
    Matrix o = Matrix::Zero(N * N, N * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) o += kron(unit_matrix(N, i, i), unit_matrix(N, j, i));
    return TwoSiteOperator(N, o);
}

Matrix trace_over_site(const TwoSiteOperator& op, int site, const Matrix& weight) {
    const int n = op.n();
    require(weight.rows() == n && weight.cols() == n, ErrorKind::DimensionMismatch,
            "partial trace weight must be n x n");
    require(site == 1 || site == 2, ErrorKind::InvalidArgument, "site must be 1 or 2");
    const Matrix& x = op.matrix();
    Matrix out = Matrix::Zero(n, n);
    if (site == 2) {
        // [X (1 (x) S)]_{(i a),(j b)} = sum_c X_{(i a),(j c)} S_{c b}; trace a = b
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int c = 0; c < n; ++c) s += x(i * n + a, j * n + c) * weight(c, a);
                out(i, j) = s;
            }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx s = 0.0;
                for (int a = 0; a < n; ++a)
                    for (int c = 0; c < n; ++c) s += x(a * n + i, c * n + j) * weight(c, a);
                out(i, j) = s;
            }
    }
    return out;
}

Matrix on_sites_12(const Matrix& r, int n) { return kron(r, Matrix::Identity(n, n)); }

Matrix on_sites_23(const Matrix& r, int n) { return kron(Matrix::Identity(n, n), r); }

Matrix on_sites_13(const Matrix& r, int n) {
    // conjugate R_12 by the swap of sites 2 and 3
    const int d = n * n * n;
    Eigen::VectorXi perm(d);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) perm(a * n * n + b * n + c) = a * n * n + c * n + b;
    const Matrix r12 = on_sites_12(r, n);
    Matrix out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = r12(perm(i), perm(j));
    return out;
}

namespace {

std::vector<Matrix> sample_circle(const MatrixFunction& f, cplx z0, double radius, int nodes) {
    require(nodes >= 4 && radius > 0.0, ErrorKind::InvalidArgument, "bad contour parameters");
    std::vector<Matrix> out;
    out.reserve(nodes);
    for (int m = 0; m < nodes; ++m) out.push_back(f(z0 + radius * std::exp(2.0 * I * pi * double(m) / double(nodes))));
    return out;
}

// c_k from every stride-th sample of a ring of samples
Matrix coefficient(const std::vector<Matrix>& s, double radius, int k, int stride) {
    const int nodes = int(s.size());
    Matrix acc = Matrix::Zero(s[0].rows(), s[0].cols());
    int used = 0;
    for (int m = 0; m < nodes; m += stride, ++used) {
        const cplx w = radius * std::exp(2.0 * I * pi * double(m) / double(nodes));
        acc += s[m] * std::pow(w, -k);
    }
    return acc / double(used);
}

}  // namespace

Matrix laurent_coefficient(const MatrixFunction& f, cplx z0, int k, double radius, int nodes) {
    return coefficient(sample_circle(f, z0, radius, nodes), radius, k, 1);
}

Matrix residue_at(const MatrixFunction& f, cplx z0, const ResidueOptions& opt) {
    const auto ring = sample_circle(f, z0, opt.radius, 2 * opt.nodes);
    const Matrix res = coefficient(ring, opt.radius, -1, 2);
    const Matrix res2 = coefficient(ring, opt.radius, -1, 1);
    const double scale = std::max(1.0, max_abs(res));
    if (max_abs(Matrix(res - res2)) > opt.tol * scale) {
        std::ostringstream msg;
        msg << "residue changed by " << max_abs(Matrix(res - res2)) << " when doubling the nodes";
        fail(ErrorKind::NonConverged, msg.str());
    }
    // a first-order pole has no c_{-2}; a genuine one shows up far above roundoff
    const Matrix cm2 = coefficient(ring, opt.radius, -2, 1);
    if (max_abs(cm2) > 1e-6 * opt.radius * scale) {
        fail(ErrorKind::PoleOrderTooHigh, "pole of order two or higher at the residue point");
    }
    const Matrix half = laurent_coefficient(f, z0, -1, 0.5 * opt.radius, opt.nodes);
    if (max_abs(Matrix(half - res)) > 1e-8 * scale) {
        fail(ErrorKind::NonConverged, "residue differs between radius r and r/2");
    }
    return res2;
}

LUInverse inverse_with_condition(const Matrix& m) {
    require(m.rows() == m.cols(), ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
    Eigen::PartialPivLU<Matrix> lu(m);
    LUInverse out;
    out.rcond = lu.rcond();
    out.inverse = lu.inverse();
    return out;
}

Matrix inverse(const Matrix& m, double min_rcond) {
    auto r = inverse_with_condition(m);
    if (!(r.rcond >= min_rcond) || !r.inverse.allFinite()) {
        std::ostringstream msg;
        msg << "matrix is numerically singular (rcond " << r.rcond << ")";
        fail(ErrorKind::NearSingular, msg.str());
    }
    return r.inverse;
}

Matrix solve(const Matrix& a, const Matrix& b) {
    require(a.rows() == a.cols() && a.rows() == b.rows(), ErrorKind::DimensionMismatch,
            "solve: incompatible sizes");
    Eigen::PartialPivLU<Matrix> lu(a);
    if (!(lu.rcond() >= 1e-15)) fail(ErrorKind::NearSingular, "solve: matrix is numerically singular");
    return lu.solve(b);
}

Vector eigenvalues(const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> es(m, false);
    require(es.info() == Eigen::Success, ErrorKind::NonConverged, "eigenvalue iteration failed");
    Vector ev = es.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size(), [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

Eigen::VectorXd singular_values(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace laxfactor
