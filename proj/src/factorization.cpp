#include "laxfactor/factorization.hpp"

#include <cmath>
#include <sstream>

namespace laxfactor {

const char* to_string(IntertwinerKind kind) {
    switch (kind) {
        case IntertwinerKind::EllipticXi: return "elliptic-xi";
        case IntertwinerKind::TrigXi: return "trig-xi";
        case IntertwinerKind::TrigV: return "trig-v";
        case IntertwinerKind::RationalXi: return "rational-xi";
        case IntertwinerKind::RationalV: return "rational-v";
    }
    return "?";
}

namespace {

IntertwinerKind default_kind(const FunctionClass& cls, bool spectral) {
    switch (cls.kind()) {
        case ClassKind::Elliptic:
            require(spectral, ErrorKind::InvalidArgument, "elliptic intertwiner always has z");
            return IntertwinerKind::EllipticXi;
        case ClassKind::Trigonometric: return spectral ? IntertwinerKind::TrigXi : IntertwinerKind::TrigV;
        case ClassKind::Rational: return spectral ? IntertwinerKind::RationalXi : IntertwinerKind::RationalV;
    }
    return IntertwinerKind::RationalV;
}

ClassKind class_of(IntertwinerKind k) {
    switch (k) {
        case IntertwinerKind::EllipticXi: return ClassKind::Elliptic;
        case IntertwinerKind::TrigXi:
        case IntertwinerKind::TrigV: return ClassKind::Trigonometric;
        default: return ClassKind::Rational;
    }
}

// d^k/du^k u^e
cplx power_derivative(cplx u, int e, int k) {
    if (k > e) return 0.0;
    double c = 1.0;
    for (int m = 0; m < k; ++m) c *= double(e - m);
    return c * std::pow(u, e - k);
}

Matrix diag(const Vector& v) { return v.asDiagonal(); }

Vector inv(const Vector& v) { return v.cwiseInverse(); }

}  // namespace

Intertwiner::Intertwiner(const FunctionClass& cls, bool spectral, int N)
    : Intertwiner(default_kind(cls, spectral), cls, N) {}

Intertwiner::Intertwiner(IntertwinerKind kind, const FunctionClass& cls, int N)
    : kind_(kind), cls_(cls), N_(N) {
    require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
    require(cls.kind() == class_of(kind), ErrorKind::InvalidArgument,
            "intertwiner kind does not match the function class");
}

double Intertwiner::kappa() const { return kind_ == IntertwinerKind::EllipticXi ? double(N_) : 1.0; }

double Intertwiner::lambda() const {
    switch (kind_) {
        case IntertwinerKind::EllipticXi: return 1.0;
        case IntertwinerKind::TrigV: return 0.0;
        default: return 1.0 / double(N_);
    }
}

void Intertwiner::check_q(const Vector& q) const {
    require(q.size() == N_, ErrorKind::DimensionMismatch, "q has the wrong length");
    for (int j = 0; j < N_; ++j)
        for (int k = j + 1; k < N_; ++k) {
            if (cls_.pole_distance(q(j) - q(k)) < cls_.pole_radius()) {
                std::ostringstream msg;
                msg << "coincident coordinates q_" << j << " and q_" << k;
                fail(ErrorKind::DegenerateConfiguration, msg.str());
            }
        }
}

Matrix Intertwiner::xi(cplx z, const Vector& q, int dz) const {
    check_q(q);
    const int N = N_;
    const double n = N;
    const cplx qsum = q.sum();
    const cplx qbar = qsum / n;
    Matrix X(N, N);
    switch (kind_) {
        case IntertwinerKind::EllipticXi: {
            const cplx ntau = n * cls_.tau();
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    X(i, j) = theta_char(0.5 - double(i + 1) / n, 0.5 * n, z - n * q(j) + qsum, ntau, dz);
            break;
        }
        case IntertwinerKind::TrigXi:
            for (int j = 0; j < N; ++j) {
                const cplx x = std::exp(2.0 * (z - q(j) + qbar));
                for (int i = 0; i < N - 1; ++i) X(i, j) = std::pow(2.0 * i, dz) * std::pow(x, i);
                const double sgn = (N % 2 == 0) ? 1.0 : -1.0;
                X(N - 1, j) = std::pow(2.0 * (N - 1), dz) * std::pow(x, N - 1) + sgn * std::pow(-2.0, dz) / x;
            }
            break;
        case IntertwinerKind::TrigV:
            for (int i = 1; i <= N; ++i)
                for (int j = 0; j < N; ++j) {
                    const double m = 2.0 * i - 1.0 - n;
                    X(i - 1, j) = std::pow(m, dz) * std::exp(m * (z - q(j)));
                }
            break;
        case IntertwinerKind::RationalXi:
        case IntertwinerKind::RationalV:
            for (int i = 0; i < N; ++i) {
                const int e = (kind_ == IntertwinerKind::RationalXi && i == N - 1) ? N : i;
                for (int j = 0; j < N; ++j) X(i, j) = power_derivative(z - q(j) + qbar, e, dz);
            }
            break;
    }
    return X;
}

Vector Intertwiner::d0(const Vector& q) const {
    check_q(q);
    Vector d(N_);
    for (int j = 0; j < N_; ++j) {
        cplx p = 1.0;
        for (int k = 0; k < N_; ++k) {
            if (k == j) continue;
            switch (kind_) {
                case IntertwinerKind::EllipticXi: p *= cls_.th(q(j) - q(k)); break;
                case IntertwinerKind::TrigXi: p *= std::exp(-2.0 * q(j)) - std::exp(-2.0 * q(k)); break;
                case IntertwinerKind::TrigV: p *= std::sinh(q(j) - q(k)); break;
                default: p *= q(j) - q(k); break;
            }
        }
        d(j) = p;
    }
    return d;
}

Vector Intertwiner::d0_rate(const Vector& q, const Vector& v) const {
    check_q(q);
    require(v.size() == N_, ErrorKind::DimensionMismatch, "velocity has the wrong length");
    Vector r = Vector::Zero(N_);
    for (int j = 0; j < N_; ++j)
        for (int k = 0; k < N_; ++k) {
            if (k == j) continue;
            const cplx a = q(j) - q(k);
            switch (kind_) {
                case IntertwinerKind::EllipticXi: r(j) += (v(j) - v(k)) * cls_.e1(a); break;
                case IntertwinerKind::TrigXi: {
                    const cplx ej = std::exp(-2.0 * q(j)), ek = std::exp(-2.0 * q(k));
                    r(j) += (-2.0 * v(j) * ej + 2.0 * v(k) * ek) / (ej - ek);
                    break;
                }
                case IntertwinerKind::TrigV: r(j) += (v(j) - v(k)) / std::tanh(a); break;
                default: r(j) += (v(j) - v(k)) / a; break;
            }
        }
    return r;
}

Matrix Intertwiner::g(cplx z, const Vector& q, int dz) const { return xi(z, q, dz) * diag(inv(d0(q))); }

Matrix Intertwiner::g_inverse(cplx z, const Vector& q) const { return inverse(g(z, q)); }

Matrix Intertwiner::g_dot(cplx z, const Vector& q, const Vector& v, int dz) const {
    const Vector col = -kappa() * v + Vector::Constant(N_, lambda() * v.sum());
    const Vector dinv = inv(d0(q));
    return xi(z, q, dz + 1) * diag(col.cwiseProduct(dinv)) - g(z, q, dz) * diag(d0_rate(q, v));
}

Matrix Intertwiner::xi_tau(cplx z, const Vector& q) const {
    require(kind_ == IntertwinerKind::EllipticXi, ErrorKind::InvalidArgument, "tau derivative needs the elliptic class");
    check_q(q);
    const int N = N_;
    const double n = N;
    const cplx qsum = q.sum();
    const cplx ntau = n * cls_.tau();
    Matrix X(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            X(i, j) = n * theta_char(0.5 - double(i + 1) / n, 0.5 * n, z - n * q(j) + qsum, ntau, 0, 1);
    return X;
}

Vector Intertwiner::d0_tau(const Vector& q) const {
    require(kind_ == IntertwinerKind::EllipticXi, ErrorKind::InvalidArgument, "tau derivative needs the elliptic class");
    check_q(q);
    Vector r = Vector::Zero(N_);
    for (int j = 0; j < N_; ++j)
        for (int k = 0; k < N_; ++k)
            if (k != j) r(j) += cls_.log_theta_tau(q(j) - q(k));
    return r;
}

Matrix Intertwiner::g_tau(cplx z, const Vector& q) const {
    return xi_tau(z, q) * diag(inv(d0(q))) - g(z, q) * diag(d0_tau(q));
}

Vector d_eta(const FunctionClass& cls, const Vector& q, cplx eta) {
    const int N = int(q.size());
    Vector d(N);
    for (int j = 0; j < N; ++j) {
        cplx p = 1.0;
        for (int k = 0; k < N; ++k)
            if (k != j) p *= cls.th(q(j) - q(k) + eta);
        d(j) = p;
    }
    return d;
}

Matrix vandermonde_q(const Vector& q) {
    const int N = int(q.size());
    Matrix V(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) V(i, j) = std::pow(-q(j), i);
    return V;
}

Matrix binomial_shift(int N, cplx lambda) {
    Matrix C = Matrix::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j <= i; ++j)
            C(i, j) = std::exp(std::lgamma(i + 1.0) - std::lgamma(j + 1.0) - std::lgamma(i - j + 1.0)) *
                      std::pow(lambda, i - j);
    return C;
}

Matrix lowering_c0(int N) {
    Matrix C = Matrix::Zero(N, N);
    for (int i = 1; i < N; ++i) C(i, i - 1) = double(i);
    return C;
}

Matrix y_matrix(int N, cplx lambda) {
    Matrix Y = Matrix::Zero(N, N);
    for (int i = 1; i <= N; ++i) Y(i - 1, i - 1) = std::exp(-(double(N) + 1.0 - 2.0 * i) * lambda);
    return Y;
}

cplx det_constant(int N, cplx tau) {
    const double e = 0.5 * double(N - 1) * double(N - 2);
    const double sign = (N % 2 == 1) ? 1.0 : -1.0;  // (-1)^{N-1}
    return sign / std::pow(I * dedekind_eta(tau), e);
}

cplx det_xi_closed_form(cplx z, const Vector& q, cplx tau, bool reversed_order) {
    const int N = int(q.size());
    cplx p = det_constant(N, tau) * theta(z, tau);
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) p *= reversed_order ? theta(q(i) - q(j), tau) : theta(q(j) - q(i), tau);
    return p;
}

LaurentData laurent_data(const Intertwiner& g, const Vector& q, const ResidueOptions& opt) {
    auto ginv = [&](cplx w) { return g.g_inverse(w, q); };
    LaurentData out;
    out.gbreve0 = residue_at(ginv, 0.0, opt);
    out.A = laurent_coefficient(ginv, 0.0, 0, opt.radius, opt.nodes);
    return out;
}

Matrix laurent_constant_richardson(const Intertwiner& g, const Vector& q, const Matrix& gbreve0, double eps) {
    auto a_of = [&](double e) {
        const Matrix plus = g.g_inverse(e, q) - gbreve0 / e;
        const Matrix minus = g.g_inverse(-e, q) + gbreve0 / e;
        return Matrix(0.5 * (plus + minus));
    };
    return (4.0 * a_of(0.5 * eps) - a_of(eps)) / 3.0;
}

bool has_alternative_form(const FunctionClass& cls, bool spectral, bool relativistic) {
    if (cls.is_elliptic()) return !relativistic;
    return !spectral;
}

namespace {

// D0 Xi^{-1}(z) Xi(z + shift) D0^{-1} without e^{P/c}, times the class prefactor
Matrix rs_core(const FunctionClass& cls, bool spectral, const Vector& q, cplx z, cplx hbar, FactorForm form) {
    const int N = int(q.size());
    const Intertwiner g(cls, spectral, N);
    if (form == FactorForm::Alternative) {
        require(has_alternative_form(cls, spectral, true), ErrorKind::InvalidArgument,
                "this RS cell has no alternative factorization");
        const Vector d = g.d0(q);
        if (cls.kind() == ClassKind::Trigonometric) {
            const Matrix V = g.xi(z, q);
            return diag(d) * solve(V, y_matrix(N, hbar) * V) * diag(inv(d));
        }
        const Matrix V = vandermonde_q(q);
        return diag(d) * solve(V, binomial_shift(N, hbar) * V) * diag(inv(d));
    }
    if (cls.is_elliptic()) {
        const double n = N;
        return (cls.th_prime0() / cls.th(hbar)) * solve(g.g(z, q), g.g(z + n * hbar, q));
    }
    return solve(g.g(z, q), g.g(z + hbar, q));
}

}  // namespace

Matrix factorized_lax_rs(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z, cplx hbar,
                         cplx c, bool prime, FactorForm form) {
    const int N = x.size();
    const Vector eP = (x.p / c).array().exp().matrix();
    if (!prime) return rs_core(cls, spectral, x.q, z, hbar, form) * diag(eP);

    if (cls.is_elliptic() && form == FactorForm::Primary) {
        const Intertwiner g(cls, true, N);
        const double n = N;
        const Vector dh = d_eta(cls, x.q, hbar);
        const Vector mq = -x.q;
        const Matrix a = g.xi(z + n * hbar, mq).transpose();
        const Matrix b = g.xi(z, mq).transpose();
        // a b^{-1} = (b^{-T} a^T)^T
        const Matrix ab = solve(b.transpose(), a.transpose()).transpose();
        return (cls.th_prime0() / cls.th(hbar)) * diag(inv(dh)) * ab * diag(dh) * diag(eP);
    }
    // L' = Lambda^{-1} F(-q)^T Lambda e^{P/c}, Lambda = diag(D^hbar / D0)
    const Vector lam = d_eta(cls, x.q, hbar).cwiseQuotient(d_eta(cls, x.q, 0.0));
    const Matrix f = rs_core(cls, spectral, -x.q, z, hbar, form);
    return diag(inv(lam)) * f.transpose() * diag(lam) * diag(eP);
}

Matrix elliptic_log_derivative(const FunctionClass& cls, const Vector& q, cplx z) {
    const int N = int(q.size());
    const double n = N;
    Matrix l(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i != j) {
                l(i, j) = cls.phi(z, q(i) - q(j)) / n;
                continue;
            }
            cplx s = cls.e1(z);
            for (int k = 0; k < N; ++k)
                if (k != i) s -= cls.e1(q(i) - q(k));
            l(i, i) = s / n;
        }
    return l;
}

Matrix factorized_lax_cm(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z, cplx nu,
                         FactorForm form) {
    const int N = x.size();
    const Matrix P = diag(x.p);
    const Intertwiner g(cls, spectral, N);
    if (form == FactorForm::Alternative) {
        require(has_alternative_form(cls, spectral, false), ErrorKind::InvalidArgument,
                "this CM cell has no alternative factorization");
        if (cls.is_elliptic()) return P + double(N) * nu * elliptic_log_derivative(cls, x.q, z);
        const Vector d = g.d0(x.q);
        if (cls.kind() == ClassKind::Trigonometric) {
            Matrix logy = Matrix::Zero(N, N);
            for (int i = 1; i <= N; ++i) logy(i - 1, i - 1) = nu * (2.0 * i - 1.0 - double(N));
            const Matrix V = g.xi(z, x.q);
            return P + diag(d) * solve(V, logy * V) * diag(inv(d));
        }
        const Matrix V = vandermonde_q(x.q);
        return P + nu * diag(d) * solve(V, lowering_c0(N) * V) * diag(inv(d));
    }
    const double k = g.kappa() == double(N) && cls.is_elliptic() ? double(N) : 1.0;
    return P + k * nu * solve(g.g(z, x.q), g.g(z, x.q, 1));
}

SpinData spin_from_phase(const PhasePoint& x, cplx hbar, cplx c, bool relativistic, cplx nu, cplx tau) {
    const int N = x.size();
    const auto cls = FunctionClass::elliptic(tau);
    const Intertwiner g(cls, true, N);
    SpinData out;
    out.laurent = laurent_data(g, x.q);
    const Matrix& gb = out.laurent.gbreve0;
    if (relativistic) {
        const Vector eP = (x.p / c).array().exp().matrix();
        out.S = (cls.th_prime0() / cls.th(hbar)) * g.g(double(N) * hbar, x.q) * diag(eP) * gb;
    } else {
        out.S = g.g(0.0, x.q) * diag(x.p) * gb + double(N) * nu * g.g(0.0, x.q, 1) * gb;
    }
    out.psi = gb.colwise().sum().transpose() / double(N);
    const Eigen::VectorXd sv = singular_values(out.S);
    out.sigma_ratio = sv.size() > 1 && sv(0) > 0.0 ? sv(1) / sv(0) : 0.0;
    if (out.sigma_ratio >= 1e-8) {
        std::ostringstream msg;
        msg << "spin matrix is not rank one (sigma2/sigma1 = " << out.sigma_ratio << ")";
        fail(ErrorKind::RankDeficiencyViolation, msg.str());
    }
    return out;
}

Vector psi_from_hbar(const Vector& q, cplx hbar, cplx tau) {
    const int N = int(q.size());
    const auto cls = FunctionClass::elliptic(tau);
    const Intertwiner g(cls, true, N);
    const Vector w = d_eta(cls, q, -hbar).cwiseQuotient(g.d0(q));
    const Matrix gi = g.g_inverse(double(N) * hbar, q);
    return (cls.th(hbar) / cls.th_prime0()) * (w.transpose() * gi).transpose();
}

GaugeResidual gauge_equivalence_residual(const PhasePoint& x, cplx z, cplx hbar, cplx c, cplx tau) {
    const int N = x.size();
    ModelSpec spec;
    spec.model = Model::RS;
    spec.cls = FunctionClass::elliptic(tau);
    spec.hbar = hbar;
    spec.c = c;
    spec.N = N;
    const SpinData sd = spin_from_phase(x, hbar, c, true, 0.0, tau);
    const Intertwiner g(spec.cls, true, N);
    const Matrix lh = lax_top(sd.S, z, tau, true, hbar).L;
    const Matrix gz = g.g(z, x.q);
    GaugeResidual r;
    r.gauge = max_abs(Matrix(lax_rs(spec, x, z) - solve(gz, lh * gz)));
    const Matrix res = residue_at([&](cplx w) { return lax_rs(spec, x, w); }, 0.0);
    r.pole_cancel = max_abs(Matrix(g.g(0.0, x.q) * res * sd.laurent.gbreve0));
    return r;
}

double column_identity_residual(const Vector& q, cplx z, cplx hbar, cplx tau) {
    const int N = int(q.size());
    const auto cls = FunctionClass::elliptic(tau);
    const Intertwiner g(cls, true, N);
    const Matrix gz = g.g(z, q);
    const Matrix gs = g.g(z + double(N) * hbar, q);
    Matrix lhs(N, N), rhs(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < N; ++k) s += gz(i, k) * cls.phi(z, q(k) - q(j) + hbar);
            lhs(i, j) = cls.th(hbar) / cls.th_prime0() * s;
            cplx p = 1.0;
            for (int m = 0; m < N; ++m)
                if (m != j) p *= cls.th(q(m) - q(j)) / cls.th(q(m) - q(j) + hbar);
            rhs(i, j) = gs(i, j) * p;
        }
    return max_abs(Matrix(lhs - rhs));
}

double compare_up_to_scalar(const Matrix& a, const Matrix& b) {
    const cplx den = (b.array().conjugate() * b.array()).sum();
    const cplx s = std::abs(den) > 0.0 ? (b.array().conjugate() * a.array()).sum() / den : cplx(0.0);
    return max_abs(Matrix(a - s * b));
}

}  // namespace laxfactor
