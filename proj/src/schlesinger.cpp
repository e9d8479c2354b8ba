#include "laxfactor/schlesinger.hpp"

#include <cmath>

namespace laxfactor {

namespace {

Vector d_vector(const FunctionClass& cls, const Vector& q) {
    const int N = int(q.size());
    Vector d = Vector::Zero(N);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k)
            if (k != i) d(i) += cls.e1(q(i) - q(k));
    return d;
}

Matrix dg(const Vector& v) { return v.asDiagonal(); }

}  // namespace

TimePair time_pair(const FunctionClass& cls, const PhasePoint& x) {
    TimePair t;
    t.d = d_vector(cls, x.q);
    t.dq_t = x.p;
    t.dq_tau = x.p - t.d / double(x.size());
    return t;
}

Matrix m_cm_theorem2(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z, cplx nu,
                     Theorem2Gauge gauge) {
    const int N = x.size();
    const double n = N;
    const Vector& q = x.q;
    Vector d = d_vector(cls, q);
    if (cls.is_elliptic()) {
        const Intertwiner g(cls, true, N);
        const Matrix gz = g.g(z, q);
        const Matrix m = (n / 2.0) * solve(gz, g.g(z, q, 2)) - 2.0 * pi * I * dg(g.d0_tau(q)) +
                         dg(g.d0_rate(q, d)) / n + solve(gz, g.g(z, q, 1)) * dg(d);
        return n * nu * m;
    }
    const Intertwiner g(cls, spectral, N);
    Matrix g0, g1, g2;
    Vector rate;
    if (cls.kind() == ClassKind::Trigonometric && spectral) {
        d.array() -= (n - 2.0);
        if (gauge == Theorem2Gauge::TrigXiSinh) {
            // Xi-tilde over the sinh products instead of the exponential gauge
            const Intertwiner sinh_gauge(IntertwinerKind::TrigV, cls, N);
            const Vector dinv = sinh_gauge.d0(q).cwiseInverse();
            g0 = g.xi(z, q) * dinv.asDiagonal();
            g1 = g.xi(z, q, 1) * dinv.asDiagonal();
            g2 = g.xi(z, q, 2) * dinv.asDiagonal();
            rate = sinh_gauge.d0_rate(q, d);
        }
    }
    if (g0.size() == 0) {
        g0 = g.g(z, q);
        g1 = g.g(z, q, 1);
        g2 = g.g(z, q, 2);
        rate = g.d0_rate(q, d);
    }
    return nu * (0.5 * solve(g0, g2) + solve(g0, g1) * dg(d) + dg(rate));
}

Matrix m_cm_theorem2_full(const PhasePoint& x, cplx z, cplx nu, cplx tau) {
    const int N = x.size();
    const auto cls = FunctionClass::elliptic(tau);
    const Intertwiner g(cls, true, N);
    const TimePair t = time_pair(cls, x);
    const Matrix gz = g.g(z, x.q);
    // dg/dtau - dg/dt: explicit tau part plus the chain rule along dq_tau - dq_t
    const Matrix diff = 2.0 * pi * I * g.g_tau(z, x.q) + g.g_dot(z, x.q, t.dq_tau - t.dq_t);
    return double(N) * nu * solve(gz, diff);
}

ProofIdentities theorem2_proof_identities(const Vector& q, cplx z, cplx tau) {
    const int N = int(q.size());
    const double n = N;
    const auto cls = FunctionClass::elliptic(tau);
    const Intertwiner g(cls, true, N);
    const Vector d = d_vector(cls, q);
    const Matrix gz = g.g(z, q);
    const Matrix l = n * solve(gz, g.g(z, q, 1));
    const Matrix g2 = solve(gz, g.g(z, q, 2));
    ProofIdentities r;

    r.l_diag = max_abs(Vector(l.diagonal() - (Vector::Constant(N, cls.e1(z)) - d)));

    // closed-form l and its z derivative
    const Matrix lc = n * elliptic_log_derivative(cls, q, z);
    Matrix lz(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                lz(i, i) = -cls.e2(z);
                continue;
            }
            const cplx a = q(i) - q(j);
            lz(i, j) = cls.phi(z, a) * (cls.e1(z + a) - cls.e1(z));
        }
    r.recursion = max_abs(Matrix(n * g2 - (lz + lc * lc / n)));

    const Matrix half = (n / 2.0) * g2;
    double off = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            const cplx ex = cls.f(z, q(i) - q(j)) / n - l(i, j) * d(j) / n;
            off = std::max(off, std::abs(half(i, j) - ex));
        }
    r.off_diag = off;

    double delta = 0.0;
    const cplx ratio = cls.th_third0() / cls.th_prime0();
    for (int i = 0; i < N; ++i) {
        cplx lhs = 0.0, e2i = 0.0, e2all = 0.0;
        for (int k = 0; k < N; ++k) {
            if (k == i) continue;
            e2i += cls.e2(q(i) - q(k));
            for (int m = 0; m < N; ++m) {
                if (m == i || m == k) continue;
                const cplx s = cls.e1(q(i) - q(k)) + cls.e1(q(k) - q(m)) + cls.e1(q(m) - q(i));
                lhs += s * s;
            }
        }
        for (int k = 0; k < N; ++k)
            for (int m = 0; m < N; ++m)
                if (k != m) e2all += cls.e2(q(k) - q(m));
        const cplx rhs = (n - 1.0) * (n - 2.0) * ratio + 2.0 * (n - 3.0) * e2i + e2all;
        delta = std::max(delta, std::abs(lhs - rhs));
    }
    r.delta_sum = delta;

    // diagonal of (1/(N nu)) M: E1 part from the z-heat term, identity constant, E2 part
    const Matrix m = m_cm_theorem2(cls, true, PhasePoint(q, Vector::Zero(N)), z, 1.0 / n);
    Vector closed(N);
    const cplx dlog = 2.0 * pi * I * cls.log_theta_tau(z);
    for (int i = 0; i < N; ++i) {
        cplx e2i = 0.0;
        for (int k = 0; k < N; ++k)
            if (k != i) e2i += cls.e2(q(i) - q(k));
        closed(i) = dlog / n - (n - 1.0) * (n - 2.0) / (4.0 * n) * ratio + e2i / n;
    }
    r.diag_closed = max_abs(Matrix(trace_free(dg(m.diagonal())) - trace_free(dg(closed))));
    return r;
}

double schlesinger_shift_residual(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z, cplx nu0) {
    require(cls.kind() != ClassKind::Trigonometric, ErrorKind::InvalidArgument,
            "the coupling shift is stated for the elliptic and rational classes");
    const int N = x.size();
    const bool spec_flag = cls.is_elliptic() ? true : spectral;
    const double unit = cls.is_elliptic() ? 1.0 / double(N) : 1.0;
    ModelSpec s;
    s.model = Model::CM;
    s.cls = cls;
    s.spectral = spec_flag;
    s.N = N;
    s.nu = nu0;
    const Matrix l0 = lax_cm(s, x, z);
    s.nu = nu0 + unit;
    const Matrix l1 = lax_cm(s, x, z);
    const Intertwiner g(cls, spec_flag, N);
    const Matrix step = solve(g.g(z, x.q), g.g(z, x.q, 1));
    return max_abs(Matrix(l0 + step - l1));
}

double scalar_schlesinger_residual(cplx nu0, cplx z, cplx tau) {
    const auto cls = FunctionClass::elliptic(tau);
    // h (d/dz + A) h^{-1} = d/dz + A - h'/h
    const cplx transformed = nu0 * cls.e1(z) - theta(z, tau, 1) / theta(z, tau);
    return std::abs(transformed - (nu0 - 1.0) * cls.e1(z));
}

namespace {

ModelSpec cm_spec(cplx tau, cplx nu, int N) {
    ModelSpec s;
    s.model = Model::CM;
    s.cls = FunctionClass::elliptic(tau);
    s.spectral = true;
    s.nu = nu;
    s.N = N;
    return s;
}

Matrix m_dz(const FunctionClass& cls, const Vector& q, cplx z, cplx nu) {
    const int N = int(q.size());
    Matrix m = Matrix::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (i != j) m(i, j) = nu * cls.f_dz(z, q(i) - q(j));
    return m;
}

}  // namespace

ZeroCurvature zero_curvature_residual(const Vector& q, const Vector& v, cplx z, cplx nu, cplx tau, double step) {
    const int N = int(q.size());
    require(v.size() == N, ErrorKind::DimensionMismatch, "velocity has the wrong length");
    const ModelSpec s0 = cm_spec(tau, nu, N);
    const Vector acc = acceleration(s0, q, v);
    const cplx tw = 2.0 * pi * I;
    auto along = [&](double sh) {
        const ModelSpec s = cm_spec(tau + sh, nu, N);
        return lax_cm_velocity(s, Vector(q + sh * v / tw), Vector(v + sh * acc / tw), z);
    };
    auto central = [&](double h) { return Matrix((along(h) - along(-h)) / (2.0 * h)); };
    const Matrix dh = central(step);
    const Matrix dh2 = central(0.5 * step);
    const Matrix dl = tw * (4.0 * dh2 - dh) / 3.0;

    const auto& cls = s0.cls;
    const Matrix L = lax_cm_velocity(s0, q, v, z);
    PhasePoint x(q, v);
    const Matrix M = m_cm(s0, x, z);
    const Matrix mz = m_dz(cls, q, z, nu);
    const Matrix shift = nu * tw * cls.e1_tau(z) * Matrix::Identity(N, N);
    const Matrix comm = commutator(L, M);

    ZeroCurvature r;
    r.richardson_gap = max_abs(Matrix(dh - dh2));
    if (r.richardson_gap > 1e-4 * std::max(1.0, max_abs(dh))) {
        fail(ErrorKind::NonConverged, "tau difference quotient is not converging");
    }
    const Matrix unshifted = dl - mz - comm;
    r.residual = max_abs(Matrix(unshifted - shift));
    r.unshifted = max_abs(unshifted);
    r.predicted_defect = std::abs(nu * tw * cls.e1_tau(z));
    r.defect_trace_free = max_abs(trace_free(unshifted));
    return r;
}

double heat_corollary_residual(const Vector& q, const Vector& v, cplx z, cplx nu, cplx tau) {
    const int N = int(q.size());
    require(v.size() == N, ErrorKind::DimensionMismatch, "velocity has the wrong length");
    const auto cls = FunctionClass::elliptic(tau);
    const cplx tw = 2.0 * pi * I;
    Matrix lt(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            lt(i, j) = (i == j) ? nu * tw * cls.e1_tau(z) : nu * tw * cls.phi_tau(z, q(i) - q(j));
    const Matrix mz = m_dz(cls, q, z, nu) + nu * tw * cls.e1_tau(z) * Matrix::Identity(N, N);
    return max_abs(Matrix(lt - mz));
}

}  // namespace laxfactor
