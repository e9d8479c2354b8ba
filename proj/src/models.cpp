#include "laxfactor/models.hpp"

#include <cmath>
#include <sstream>

namespace laxfactor {

PhasePoint::PhasePoint(Vector q_, Vector p_) : q(std::move(q_)), p(std::move(p_)) {
    require(q.size() == p.size(), ErrorKind::DimensionMismatch, "q and p must have equal length");
}

const char* to_string(Model m) {
    switch (m) {
        case Model::RS: return "rs";
        case Model::RSprime: return "rs-prime";
        case Model::CM: return "cm";
        case Model::EllipticTop: return "top";
        case Model::RelativisticTop: return "rel-top";
    }
    return "?";
}

void ModelSpec::validate() const {
    require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
    if (cls.is_elliptic()) {
        require(spectral, ErrorKind::InvalidArgument, "the elliptic models always carry a spectral parameter");
    }
    if (relativistic()) {
        require(std::abs(c) > 0.0, ErrorKind::InvalidArgument, "RS needs a nonzero light speed c");
        require(std::abs(hbar) > 0.0, ErrorKind::InvalidArgument, "RS needs a nonzero hbar");
    }
    if (model == Model::EllipticTop || model == Model::RelativisticTop) {
        require(cls.is_elliptic(), ErrorKind::InvalidArgument, "tops need the elliptic class");
    }
}

namespace {

void check_size(const ModelSpec& spec, const PhasePoint& x) {
    spec.validate();
    require(x.size() == spec.N, ErrorKind::DimensionMismatch, "phase point size differs from N");
}

void check_pair(const FunctionClass& cls, cplx v, int i, int j, const char* what) {
    if (cls.pole_distance(v) < cls.pole_radius()) {
        std::ostringstream msg;
        msg << what << " for pair (" << i << "," << j << ") is within " << cls.pole_radius()
            << " of a pole";
        fail(ErrorKind::NearSingular, msg.str());
    }
}

// shift entering D^{s}: -hbar for RS, +hbar for RS'
cplx rs_shift(const ModelSpec& spec) { return spec.model == Model::RSprime ? spec.hbar : -spec.hbar; }

}  // namespace

void check_configuration(const ModelSpec& spec, const Vector& q) {
    const auto& cls = spec.cls;
    for (int i = 0; i < q.size(); ++i)
        for (int j = 0; j < q.size(); ++j) {
            if (i == j) continue;
            check_pair(cls, q(i) - q(j), i, j, "q_i - q_j");
            if (spec.relativistic()) check_pair(cls, q(i) - q(j) + spec.hbar, i, j, "q_i - q_j + hbar");
        }
}

cplx rs_trace_scalar(const ModelSpec& spec, cplx z) {
    const auto& cls = spec.cls;
    const double N = spec.N;
    const cplx h = spec.hbar;
    switch (cls.kind()) {
        case ClassKind::Elliptic: return cls.phi(z, h);
        case ClassKind::Trigonometric:
            if (!spec.spectral) return 1.0;
            return std::exp(h * (N - 2.0)) * std::sinh(h) * (1.0 / std::tanh(h) + 1.0 / std::tanh(N * z));
        case ClassKind::Rational:
            if (!spec.spectral) return 1.0;
            return h * (1.0 / h + 1.0 / (N * z));
    }
    return 1.0;
}

Vector velocity_map(const ModelSpec& spec, const PhasePoint& x) {
    check_size(spec, x);
    check_configuration(spec, x.q);
    const int N = spec.N;
    const auto& cls = spec.cls;
    Vector v(N);
    if (spec.relativistic()) {
        const cplx s = rs_shift(spec);
        for (int j = 0; j < N; ++j) {
            cplx w = std::exp(x.p(j) / spec.c);
            for (int k = 0; k < N; ++k)
                if (k != j) w *= cls.th(x.q(j) - x.q(k) + s) / cls.th(x.q(j) - x.q(k));
            v(j) = w;
        }
    } else {
        for (int i = 0; i < N; ++i) {
            cplx s = x.p(i);
            for (int k = 0; k < N; ++k)
                if (k != i) s -= spec.nu * cls.e1(x.q(i) - x.q(k));
            v(i) = s;
        }
    }
    return v;
}

Matrix lax_rs(const ModelSpec& spec, const PhasePoint& x, cplx z) {
    require(spec.relativistic(), ErrorKind::InvalidArgument, "lax_rs needs an RS model");
    const Vector v = velocity_map(spec, x);
    const int N = spec.N;
    const auto& cls = spec.cls;
    const cplx h = spec.hbar;
    if (spec.spectral) cls.check_pole(cls.is_elliptic() ? z : z * double(N), "spectral parameter");
    Matrix L(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cplx a = x.q(i) - x.q(j) + h;
            cplx e = 0.0;
            switch (cls.kind()) {
                case ClassKind::Elliptic: e = cls.phi(z, a); break;
                case ClassKind::Trigonometric:
                    e = spec.spectral ? std::exp(h * double(N - 2)) * std::sinh(h) *
                                            (1.0 / std::tanh(a) + 1.0 / std::tanh(double(N) * z))
                                      : std::sinh(h) / std::sinh(a);
                    break;
                case ClassKind::Rational:
                    e = spec.spectral ? h * (1.0 / a + 1.0 / (double(N) * z)) : h / a;
                    break;
            }
            L(i, j) = e * v(j);
        }
    return L;
}

Matrix m_rs(const ModelSpec& spec, const PhasePoint& x, cplx z) {
    require(spec.relativistic(), ErrorKind::InvalidArgument, "m_rs needs an RS model");
    const Vector v = velocity_map(spec, x);
    const int N = spec.N;
    const auto& cls = spec.cls;
    const cplx h = spec.hbar;
    const double n = N;
    // off-diagonal kernel and the z/hbar part of the diagonal
    auto off = [&](cplx a) -> cplx {
        switch (cls.kind()) {
            case ClassKind::Elliptic: return cls.phi(z, a);
            case ClassKind::Trigonometric:
                return spec.spectral ? 1.0 / std::tanh(a) + 1.0 / std::tanh(n * z) : 1.0 / std::sinh(a);
            case ClassKind::Rational: return spec.spectral ? 1.0 / a + 1.0 / (n * z) : 1.0 / a;
        }
        return 0.0;
    };
    cplx dz = 0.0;
    switch (cls.kind()) {
        case ClassKind::Elliptic: dz = cls.e1(z) + cls.e1(h); break;
        case ClassKind::Trigonometric:
            dz = (spec.spectral ? 1.0 / std::tanh(n * z) : 0.0) + 1.0 / std::tanh(h);
            break;
        case ClassKind::Rational: dz = (spec.spectral ? 1.0 / (n * z) : 0.0) + 1.0 / h; break;
    }
    Matrix M(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i != j) {
                M(i, j) = -off(x.q(i) - x.q(j)) * v(j);
                continue;
            }
            cplx s = v(i) * dz;
            for (int k = 0; k < N; ++k)
                if (k != i) s += v(k) * (cls.e1(x.q(i) - x.q(k) + h) - cls.e1(x.q(i) - x.q(k)));
            M(i, i) = -s;
        }
    return M;
}

Matrix lax_cm_velocity(const ModelSpec& spec, const Vector& q, const Vector& v, cplx z) {
    const int N = spec.N;
    const auto& cls = spec.cls;
    const cplx nu = spec.nu;
    const double n = N;
    Matrix L(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cplx a = q(i) - q(j);
            cplx e = 0.0;
            switch (cls.kind()) {
                case ClassKind::Elliptic: e = (i == j) ? v(i) + nu * cls.e1(z) : nu * cls.phi(z, a); break;
                case ClassKind::Trigonometric:
                    if (spec.spectral) {
                        const cplx cz = 1.0 / std::tanh(n * z);
                        e = (i == j) ? v(i) + nu * (n - 2.0) + nu * cz : nu * (1.0 / std::tanh(a) + cz);
                    } else {
                        e = (i == j) ? v(i) : nu / std::sinh(a);
                    }
                    break;
                case ClassKind::Rational:
                    e = (i == j) ? v(i) : nu / a;
                    if (spec.spectral) e += nu / (n * z);
                    break;
            }
            L(i, j) = e;
        }
    return L;
}

Matrix lax_cm(const ModelSpec& spec, const PhasePoint& x, cplx z) {
    require(spec.model == Model::CM, ErrorKind::InvalidArgument, "lax_cm needs the CM model");
    const Vector v = velocity_map(spec, x);
    if (spec.spectral) spec.cls.check_pole(spec.cls.is_elliptic() ? z : z * double(spec.N), "spectral parameter");
    return lax_cm_velocity(spec, x.q, v, z);
}

Matrix m_cm(const ModelSpec& spec, const PhasePoint& x, cplx z) {
    require(spec.model == Model::CM, ErrorKind::InvalidArgument, "m_cm needs the CM model");
    check_size(spec, x);
    check_configuration(spec, x.q);
    const int N = spec.N;
    const auto& cls = spec.cls;
    const cplx nu = spec.nu;
    Matrix M(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                cplx d = 0.0;
                for (int k = 0; k < N; ++k)
                    if (k != i) d += cls.e2(x.q(i) - x.q(k));
                M(i, i) = nu * d;
                continue;
            }
            const cplx a = x.q(i) - x.q(j);
            if (cls.kind() == ClassKind::Trigonometric && !spec.spectral) {
                const cplx s = std::sinh(a);
                M(i, j) = -nu * std::cosh(a) / (s * s);
            } else {
                M(i, j) = nu * cls.f(z, a);
            }
        }
    return M;
}

Matrix lax_matrix(const ModelSpec& spec, const PhasePoint& x, cplx z) {
    if (spec.relativistic()) return lax_rs(spec, x, z);
    require(spec.model == Model::CM, ErrorKind::InvalidArgument, "tops take a spin matrix, use lax_top");
    return lax_cm(spec, x, z);
}

Matrix m_matrix(const ModelSpec& spec, const PhasePoint& x, cplx z) {
    if (spec.relativistic()) return m_rs(spec, x, z);
    require(spec.model == Model::CM, ErrorKind::InvalidArgument, "tops take a spin matrix, use lax_top");
    return m_cm(spec, x, z);
}

cplx hamiltonian(const ModelSpec& spec, const PhasePoint& x) {
    const Vector v = velocity_map(spec, x);
    if (spec.relativistic()) return spec.c * v.sum();
    require(spec.model == Model::CM, ErrorKind::InvalidArgument, "hamiltonian: unsupported model");
    cplx h = 0.5 * (v.array() * v.array()).sum();
    for (int i = 0; i < spec.N; ++i)
        for (int j = 0; j < i; ++j) h -= spec.nu * spec.nu * spec.cls.wp(x.q(i) - x.q(j));
    return h;
}

cplx hamiltonian_from_trace(const ModelSpec& spec, const PhasePoint& x, cplx z) {
    require(spec.relativistic(), ErrorKind::InvalidArgument, "trace Hamiltonian is defined for RS");
    return spec.c * lax_rs(spec, x, z).trace() / rs_trace_scalar(spec, z);
}

PhaseVelocity eom_rhs(const ModelSpec& spec, const PhasePoint& x) {
    const Vector v = velocity_map(spec, x);
    const int N = spec.N;
    const auto& cls = spec.cls;
    PhaseVelocity out{v, Vector::Zero(N)};
    if (spec.relativistic()) {
        const cplx s = rs_shift(spec);
        // dH/dq_i = c sum_j qdot_j d(log w_j)/dq_i
        for (int i = 0; i < N; ++i) {
            cplx g = 0.0;
            for (int k = 0; k < N; ++k) {
                if (k == i) continue;
                const cplx a = x.q(i) - x.q(k);
                g += v(i) * (cls.e1(a + s) - cls.e1(a));
                g -= v(k) * (cls.e1(-a + s) - cls.e1(-a));
            }
            out.dp(i) = -spec.c * g;
        }
    } else {
        const cplx nu = spec.nu;
        for (int i = 0; i < N; ++i) {
            cplx g = 0.0;
            for (int k = 0; k < N; ++k) {
                if (k == i) continue;
                const cplx a = x.q(i) - x.q(k);
                g += nu * (v(i) - v(k)) * cls.e2(a) - nu * nu * cls.wp_prime(a);
            }
            out.dp(i) = -g;
        }
    }
    return out;
}

Vector acceleration(const ModelSpec& spec, const Vector& q, const Vector& qdot) {
    check_configuration(spec, q);
    const int N = int(q.size());
    const auto& cls = spec.cls;
    Vector a = Vector::Zero(N);
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) {
            if (k == i) continue;
            const cplx d = q(i) - q(k);
            if (spec.relativistic()) {
                a(i) += qdot(i) * qdot(k) *
                        (2.0 * cls.e1(d) - cls.e1(d + spec.hbar) - cls.e1(d - spec.hbar));
            } else {
                a(i) += spec.nu * spec.nu * cls.wp_prime(d);
            }
        }
    return a;
}

PhasePoint rs_to_rsprime(const ModelSpec& spec, const PhasePoint& x) {
    require(spec.model == Model::RS, ErrorKind::InvalidArgument, "canonical map starts from RS");
    check_size(spec, x);
    const auto& cls = spec.cls;
    PhasePoint y = x;
    for (int j = 0; j < spec.N; ++j)
        for (int k = 0; k < spec.N; ++k) {
            if (k == j) continue;
            const cplx a = x.q(j) - x.q(k);
            y.p(j) += spec.c * std::log(cls.th(a - spec.hbar) / cls.th(a + spec.hbar));
        }
    return y;
}

// ---------------------------------------------------------------- tops

Vector spin_components(const Matrix& S) {
    const int N = int(S.rows());
    require(S.cols() == N, ErrorKind::DimensionMismatch, "spin matrix must be square");
    Vector c(N * N);
    for (int a1 = 0; a1 < N; ++a1)
        for (int a2 = 0; a2 < N; ++a2)
            c(a1 * N + a2) = (S * heisenberg_basis(-a1, -a2, N)).trace() / double(N);
    return c;
}

TopLax lax_top(const Matrix& S, cplx z, cplx tau, bool relativistic, cplx eta) {
    const int N = int(S.rows());
    require(N >= 1 && S.cols() == N, ErrorKind::DimensionMismatch, "spin matrix must be square");
    const auto cls = FunctionClass::elliptic(tau);
    cls.check_pole(z, "top spectral parameter");
    const Vector s = spin_components(S);
    TopLax out{Matrix::Zero(N, N), Matrix::Zero(N, N), 0.0};
    for (int a1 = 0; a1 < N; ++a1)
        for (int a2 = 0; a2 < N; ++a2) {
            const bool zero = (a1 == 0 && a2 == 0);
            const Matrix t = heisenberg_basis(a1, a2, N) * s(a1 * N + a2);
            const cplx w = omega_alpha(a1, a2, tau, N);
            const cplx ex = std::exp(2.0 * I * pi * double(a2) * z / double(N));
            if (relativistic) {
                out.L += t * (ex * cls.phi(z, w + eta));
                if (!zero) out.M -= t * (ex * cls.phi(z, w));
            } else if (!zero) {
                out.L += t * (ex * cls.phi(z, w));
                out.M += t * (ex * cls.f(z, w));
            }
        }
    if (relativistic) {
        out.discarded_trace = out.M.trace() / double(N);
        out.M -= out.discarded_trace * Matrix::Identity(N, N);
    }
    return out;
}

Matrix top_inertia(const Matrix& S, cplx tau, bool relativistic, cplx eta) {
    const int N = int(S.rows());
    const auto cls = FunctionClass::elliptic(tau);
    const Vector s = spin_components(S);
    Matrix J = Matrix::Zero(N, N);
    for (int a1 = 0; a1 < N; ++a1)
        for (int a2 = 0; a2 < N; ++a2) {
            if (a1 == 0 && a2 == 0) continue;
            const cplx w = omega_alpha(a1, a2, tau, N);
            const cplx k = relativistic ? cls.e1(eta + w) - cls.e1(w) : -cls.e2(w);
            J += heisenberg_basis(a1, a2, N) * (s(a1 * N + a2) * k);
        }
    return J;
}

cplx top_hamiltonian(const Matrix& S, cplx tau, bool relativistic, cplx eta) {
    if (relativistic) return S.trace() / double(S.rows());
    return 0.5 * (S * top_inertia(S, tau, false, eta)).trace();
}

}  // namespace laxfactor
