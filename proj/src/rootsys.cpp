#include "laxfactor/rootsys.hpp"

#include <cmath>
#include <sstream>

namespace laxfactor {

namespace {

const double sqrt2 = std::sqrt(2.0);

void check_bcn_q(const Vector& q) {
    const int N = int(q.size());
    for (int i = 0; i < N; ++i) {
        if (std::abs(q(i)) < 1e-8) fail(ErrorKind::NearSingular, "coordinate at the reflection plane q_i = 0");
        for (int k = i + 1; k < N; ++k)
            if (std::abs(q(i) - q(k)) < 1e-8 || std::abs(q(i) + q(k)) < 1e-8) {
                std::ostringstream msg;
                msg << "coordinates " << i << " and " << k << " collide up to reflection";
                fail(ErrorKind::NearSingular, msg.str());
            }
    }
}

// sum_{k != i} (1/(q_i - q_k) + 1/(q_i + q_k))
cplx pair_sum(const Vector& q, int i) {
    cplx s = 0.0;
    for (int k = 0; k < q.size(); ++k)
        if (k != i) s += 1.0 / (q(i) - q(k)) + 1.0 / (q(i) + q(k));
    return s;
}

Vector nodes(const Vector& q) {
    const int N = int(q.size());
    Vector x(2 * N);
    x.head(N) = q;
    x.tail(N) = -q;
    return x;
}

// rows scaled by s^{-i}, s = max |q|
Matrix vandermonde_bc(const Vector& q, bool extra_column) {
    Vector x = nodes(q);
    x /= x.cwiseAbs().maxCoeff();
    const int n = int(x.size()) + (extra_column ? 1 : 0);
    Matrix V = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < x.size(); ++j) V(i, j) = std::pow(x(j), i);
    if (extra_column) V(0, n - 1) = 1.0;
    return V;
}

// V^{-1} M V for a strictly lower one-step operator M; with the scaled rows
// the product picks up exactly 1/s
Matrix conjugate_lowering(const Matrix& M, const Vector& q, bool extra_column) {
    const Matrix V = vandermonde_bc(q, extra_column);
    return solve(V, M * V) / q.cwiseAbs().maxCoeff();
}

Vector d0_dc(const Vector& q) {
    const int N = int(q.size());
    Vector d(2 * N);
    for (int i = 0; i < 2 * N; ++i) {
        const int a = i % N;
        cplx p = (i < N) ? 2.0 * q(a) : -2.0 * q(a);
        for (int k = 0; k < N; ++k)
            if (k != a) p *= (q(a) - q(k)) * (q(a) + q(k));
        d(i) = p;
    }
    return d;
}

Vector d0_b(const Vector& q) {
    const int N = int(q.size());
    Vector d(2 * N + 1);
    cplx last = 1.0;
    for (int i = 0; i < 2 * N; ++i) {
        const int a = i % N;
        cplx p = sqrt2 * q(a) * q(a);
        for (int k = 0; k < N; ++k)
            if (k != a) p *= (q(a) - q(k)) * (q(a) + q(k));
        d(i) = p;
    }
    for (int k = 0; k < N; ++k) last *= -q(k) * q(k);
    d(2 * N) = last;
    return d;
}

Matrix lowering(int n) {
    Matrix c = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i) c(i, i - 1) = double(i);
    return c;
}

Matrix b_intertwined(const Vector& q) {
    const int n = 2 * int(q.size()) + 1;
    const Vector d = d0_b(q);
    const Matrix core = conjugate_lowering(Matrix(lowering(n) + c_tilde(n)), q, true);
    return d.asDiagonal() * core * d.cwiseInverse().asDiagonal();
}

}  // namespace

const char* to_string(RootSystem r) {
    switch (r) {
        case RootSystem::BCn: return "BCn";
        case RootSystem::Bn: return "Bn";
        case RootSystem::Cn: return "Cn";
        case RootSystem::Dn: return "Dn";
    }
    return "?";
}

BCNSpec BCNSpec::bcn(int N, cplx m1, cplx m2, cplx m4) { return BCNSpec{N, m1, m2, m4, RootSystem::BCn}; }
BCNSpec BCNSpec::dn(int N, cplx m2) { return BCNSpec{N, 0.0, m2, 0.0, RootSystem::Dn}; }
BCNSpec BCNSpec::cn(int N, cplx m2, cplx m4) { return BCNSpec{N, 0.0, m2, m4, RootSystem::Cn}; }
BCNSpec BCNSpec::bn(int N, cplx m2) { return BCNSpec{N, sqrt2 * m2, m2, 0.0, RootSystem::Bn}; }

cplx BCNSpec::constraint_value() const { return m1 * (m1 * m1 - 2.0 * m2 * m2 + sqrt2 * m2 * m4); }

bool BCNSpec::constraint_satisfied(double tol) const {
    const double scale = std::max(1.0, std::pow(std::abs(m1) + std::abs(m2) + std::abs(m4), 3));
    return std::abs(constraint_value()) <= tol * scale;
}

void BCNSpec::validate() const {
    require(N >= 1, ErrorKind::DimensionMismatch, "N must be positive");
    switch (root) {
        case RootSystem::Dn:
            require(m1 == 0.0 && m4 == 0.0, ErrorKind::InvalidArgument, "Dn needs m1 = m4 = 0");
            break;
        case RootSystem::Cn: require(m1 == 0.0, ErrorKind::InvalidArgument, "Cn needs m1 = 0"); break;
        case RootSystem::Bn:
            require(m4 == 0.0 && std::abs(m1 - sqrt2 * m2) < 1e-14 * std::max(1.0, std::abs(m2)),
                    ErrorKind::InvalidArgument, "Bn needs m4 = 0 and m1 = sqrt2 m2");
            break;
        case RootSystem::BCn: break;
    }
}

Matrix lax_bcn(const BCNSpec& spec, const PhasePoint& x) {
    spec.validate();
    const int N = spec.N;
    require(x.size() == N, ErrorKind::DimensionMismatch, "phase point has the wrong size");
    const Vector& q = x.q;
    check_bcn_q(q);
    Matrix A(N, N), B(N, N);
    Vector C(N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                A(i, i) = x.p(i) - sqrt2 * spec.m4 / (2.0 * q(i)) - sqrt2 * spec.m1 / q(i) - spec.m2 * pair_sum(q, i);
                B(i, i) = sqrt2 * spec.m4 / (2.0 * q(i));
            } else {
                A(i, j) = spec.m2 / (q(i) - q(j));
                B(i, j) = spec.m2 / (q(i) + q(j));
            }
        }
        C(i) = spec.m1 / q(i);
    }
    Matrix L = Matrix::Zero(2 * N + 1, 2 * N + 1);
    L.block(0, 0, N, N) = A;
    L.block(0, N, N, N) = B;
    L.block(N, 0, N, N) = -B;
    L.block(N, N, N, N) = -A;
    L.block(0, 2 * N, N, 1) = C;
    L.block(N, 2 * N, N, 1) = -C;
    L.block(2 * N, 0, 1, N) = -C.transpose();
    L.block(2 * N, N, 1, N) = C.transpose();
    return L;
}

Matrix lax_bcn_truncated(const BCNSpec& spec, const PhasePoint& x) {
    const Matrix L = lax_bcn(spec, x);
    const int n = 2 * spec.N;
    const double edge = std::max(L.row(n).cwiseAbs().maxCoeff(), L.col(n).cwiseAbs().maxCoeff());
    require(edge < 1e-12, ErrorKind::InvalidArgument, "last row/column is not zero; the 2N truncation needs m1 = 0");
    return L.topLeftCorner(n, n);
}

Vector bcn_momentum_from_velocity(const BCNSpec& spec, const Vector& q, const Vector& v) {
    Vector p = v;
    for (int i = 0; i < q.size(); ++i)
        p(i) += sqrt2 * spec.m4 / (2.0 * q(i)) + sqrt2 * spec.m1 / q(i) + spec.m2 * pair_sum(q, i);
    return p;
}

Matrix c_tilde(int n) {
    Matrix c = Matrix::Zero(n, n);
    // 1-based: (i, i-1) entries with i even
    for (int i = 2; i <= n; i += 2) c(i - 1, i - 2) = 1.0;
    return c;
}

Matrix factorized_lax_dc(const BCNSpec& spec, const PhasePoint& x) {
    spec.validate();
    require(spec.m1 == 0.0, ErrorKind::InvalidArgument, "the 2N factorization needs m1 = 0 (Cn or Dn)");
    const int N = spec.N;
    const int n = 2 * N;
    check_bcn_q(x.q);
    const Vector d = d0_dc(x.q);
    const Matrix M = spec.m2 * lowering(n) - (spec.m2 - sqrt2 * spec.m4) * c_tilde(n);
    const Matrix core = conjugate_lowering(M, x.q, false);
    Vector pd(n);
    pd.head(N) = x.p;
    pd.tail(N) = -x.p;
    return Matrix(pd.asDiagonal()) - d.asDiagonal() * core * d.cwiseInverse().asDiagonal();
}

Matrix factorized_lax_b(const BCNSpec& spec, const PhasePoint& x) {
    spec.validate();
    require(spec.m4 == 0.0, ErrorKind::InvalidArgument, "the 2N+1 factorization needs m4 = 0");
    const int N = spec.N;
    const int n = 2 * N + 1;
    check_bcn_q(x.q);
    Vector pd = Vector::Zero(n);
    pd.head(N) = x.p;
    pd.segment(N, N) = -x.p;
    return Matrix(pd.asDiagonal()) - spec.m2 * b_intertwined(x.q);
}

cplx bcn_hamiltonian(const BCNSpec& spec, const Vector& q, const Vector& v) {
    check_bcn_q(q);
    const int N = int(q.size());
    const cplx m2sq = spec.m2 * spec.m2;
    const cplx msq = spec.m4 * spec.m4 + 4.0 * spec.m1 * spec.m1;
    cplx u = 0.0;
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < i; ++j) {
            const cplx a = q(i) - q(j), b = q(i) + q(j);
            u += m2sq / (a * a) + m2sq / (b * b);
        }
        u += msq / (4.0 * q(i) * q(i));
    }
    return 0.5 * (v.array() * v.array()).sum() - u;
}

Vector bcn_acceleration(const BCNSpec& spec, const Vector& q) {
    check_bcn_q(q);
    const int N = int(q.size());
    const cplx m2sq = spec.m2 * spec.m2;
    const cplx msq = spec.m4 * spec.m4 + 4.0 * spec.m1 * spec.m1;
    Vector a = Vector::Zero(N);
    // H = T - U, qddot = dU/dq
    for (int i = 0; i < N; ++i) {
        for (int k = 0; k < N; ++k) {
            if (k == i) continue;
            const cplx d = q(i) - q(k), s = q(i) + q(k);
            a(i) += -2.0 * m2sq / (d * d * d) - 2.0 * m2sq / (s * s * s);
        }
        a(i) += -msq / (2.0 * q(i) * q(i) * q(i));
    }
    return a;
}

VandermondeBlockIdentities vandermonde_block_identities(const Vector& q) {
    const int N = int(q.size());
    const int n = 2 * N;
    check_bcn_q(q);
    VandermondeBlockIdentities r;

    const Vector d = d0_dc(q);
    const Matrix J = d.asDiagonal() * conjugate_lowering(c_tilde(n), q, false) * d.cwiseInverse().asDiagonal();
    const Matrix jd = q.cwiseInverse().asDiagonal() * 0.5;
    Matrix expect(n, n);
    expect << jd, -jd, jd, -jd;
    r.j_block = max_abs(Matrix(J - expect));

    // the even-gamma sum is unchanged by the row scaling
    const Matrix V = vandermonde_bc(q, false);
    const Matrix Vi = inverse(V);
    Matrix ev = Matrix::Zero(n, n);
    for (int g = 1; g < n; g += 2) ev += Vi.col(g) * V.row(g);
    r.even_sum = max_abs(Matrix(ev.topLeftCorner(N, N) - 0.5 * Matrix::Identity(N, N)));

    const Matrix G = b_intertwined(q);
    double c = std::abs(G(n, n));
    for (int i = 0; i < N; ++i) {
        c = std::max(c, std::abs(G(i, n) + sqrt2 / q(i)));
        c = std::max(c, std::abs(G(n, i) - sqrt2 / q(i)));
    }
    r.corners = c;

    const BCNSpec sd = BCNSpec::dn(N, 1.0), sb = BCNSpec::bn(N, 1.0);
    const PhasePoint x(q, Vector::Zero(N));
    const Matrix ab = factorized_lax_b(sb, x).topLeftCorner(N, N);
    const Matrix ad = factorized_lax_dc(sd, x).topLeftCorner(N, N);
    Matrix corr = Matrix::Zero(N, N);
    for (int i = 0; i < N; ++i) corr(i, i) = 2.0 / q(i);
    r.b_diag = max_abs(Matrix(ab - ad + corr));

    r.sign_flip = max_abs(Matrix(G.block(N, N, N, N) + G.block(0, 0, N, N)));
    return r;
}

}  // namespace laxfactor
