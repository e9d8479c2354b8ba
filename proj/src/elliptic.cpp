#include "laxfactor/elliptic.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "theta_series.hpp"

namespace laxfactor {

const char* to_string(ClassKind kind) {
    switch (kind) {
        case ClassKind::Elliptic: return "elliptic";
        case ClassKind::Trigonometric: return "trig";
        case ClassKind::Rational: return "rational";
    }
    return "?";
}

EllipticModulus::EllipticModulus(cplx tau) : tau_(tau) {
    require(tau.imag() > 0.0, ErrorKind::NonConvergent, "Im(tau) must be positive");
}

namespace detail {

ThetaJet theta_jet(double a, double b, cplx z, cplx tau, int order, int dtau,
                   const SeriesOptions& opt) {
    require(tau.imag() > 0.0, ErrorKind::NonConvergent, "theta series needs Im(tau) > 0");
    require(order >= 0 && order < ThetaJet::size && dtau >= 0, ErrorKind::InvalidArgument,
            "theta derivative order out of range");

    // dominant index: maximizes -pi n^2 Im tau - 2 pi n Im z with n = j + a
    const double center = -z.imag() / tau.imag() - a;
    const long j0 = std::lround(center);
    auto exponent = [&](double n) { return I * pi * n * n * tau + 2.0 * I * pi * n * (z + b); };
    {
        const double peak = exponent(double(j0) + a).real();
        if (peak > 700.0) {
            std::ostringstream msg;
            msg << "dominant theta term exp(" << peak << ") overflows; shift z by a multiple of tau "
                << "(|Im z| = " << std::abs(z.imag()) << ") and use quasi-periodicity";
            fail(ErrorKind::Overflow, msg.str());
        }
    }

    ThetaJet out;
    double running_max = 0.0;
    auto add = [&](long j) {
        const double n = double(j) + a;
        const cplx base = std::exp(exponent(n));
        cplx w = base;
        for (int k = 0; k < dtau; ++k) w *= I * pi * n * n;
        const cplx step = 2.0 * I * pi * n;
        double mag = 0.0;
        for (int k = 0; k <= order; ++k) {
            out.d[k] += w;
            mag = std::max(mag, std::abs(w));
            w *= step;
        }
        // a term can vanish because of the derivative factor (n = 0); judge by the base size too
        mag = std::max(mag, std::abs(base) * std::pow(1.0 + std::abs(2.0 * pi * n), order + dtau));
        running_max = std::max(running_max, mag);
        return mag;
    };

    add(j0);
    int small_up = 0, small_down = 0;
    for (long k = 1;; ++k) {
        if (k > opt.max_index) {
            fail(ErrorKind::NonConvergent, "theta series did not converge within the index cap");
        }
        if (small_up < 2) {
            const double m = add(j0 + k);
            small_up = (m < opt.rel_tol * running_max) ? small_up + 1 : 0;
        }
        if (small_down < 2) {
            const double m = add(j0 - k);
            small_down = (m < opt.rel_tol * running_max) ? small_down + 1 : 0;
        }
        if (small_up >= 2 && small_down >= 2) break;
    }
    return out;
}

}  // namespace detail

cplx theta_char(double a, double b, cplx z, cplx tau, int dz, int dtau, const SeriesOptions& opt) {
    if (dz < detail::ThetaJet::size) return detail::theta_jet(a, b, z, tau, dz, dtau, opt).d[dz];
    // higher z derivatives: trade pairs of z derivatives for tau derivatives (heat equation)
    return theta_char(a, b, z, tau, dz - 2, dtau + 1, opt) * (4.0 * I * pi);
}

cplx theta_char(const ThetaChar& chr, cplx z, const EllipticModulus& tau, int dz, int dtau,
                const SeriesOptions& opt) {
    require(chr.den != 0, ErrorKind::InvalidArgument, "characteristic denominator is zero");
    return theta_char(chr.a(), chr.b(), z, tau.tau(), dz, dtau, opt);
}

cplx theta(cplx z, cplx tau, int dz, int dtau) { return theta_char(0.5, 0.5, z, tau, dz, dtau); }

cplx dedekind_eta(cplx tau) {
    require(tau.imag() > 0.0, ErrorKind::NonConvergent, "Im(tau) must be positive");
    const cplx q = std::exp(2.0 * I * pi * tau);
    cplx prod = std::exp(I * pi * tau / 12.0);
    cplx qk = q;
    for (int k = 1; k < 2000; ++k) {
        prod *= 1.0 - qk;
        qk *= q;
        if (std::abs(qk) < 1e-18) break;
    }
    return prod;
}

// ---------------------------------------------------------------- classes

FunctionClass FunctionClass::elliptic(cplx tau, double pole_radius) {
    EllipticModulus mod(tau);
    FunctionClass c;
    c.kind_ = ClassKind::Elliptic;
    c.tau_ = mod.tau();
    c.pole_radius_ = pole_radius;
    const auto jet = detail::theta_jet(0.5, 0.5, 0.0, tau, 3, 0, {});
    c.t1_ = jet.d[1];
    c.t3_ = jet.d[3];
    c.t1_tau_ = detail::theta_jet(0.5, 0.5, 0.0, tau, 1, 1, {}).d[1];
    return c;
}

FunctionClass FunctionClass::trigonometric(double pole_radius) {
    FunctionClass c;
    c.kind_ = ClassKind::Trigonometric;
    c.pole_radius_ = pole_radius;
    c.t3_ = 1.0;  // sinh'''(0)
    return c;
}

FunctionClass FunctionClass::rational(double pole_radius) {
    FunctionClass c;
    c.kind_ = ClassKind::Rational;
    c.pole_radius_ = pole_radius;
    return c;
}

cplx FunctionClass::tau() const {
    require_elliptic("tau");
    return tau_;
}

void FunctionClass::require_elliptic(const char* what) const {
    if (kind_ != ClassKind::Elliptic) {
        fail(ErrorKind::InvalidArgument, std::string(what) + " is defined for the elliptic class only");
    }
}

double FunctionClass::pole_distance(cplx z) const {
    switch (kind_) {
        case ClassKind::Rational: return std::abs(z);
        case ClassKind::Trigonometric: {
            const double k = std::round(z.imag() / pi);
            return std::abs(z - cplx(0.0, k * pi));
        }
        case ClassKind::Elliptic: {
            double best = std::abs(z);
            const double n0 = std::round(z.imag() / tau_.imag());
            for (double n = n0 - 1; n <= n0 + 1; n += 1.0) {
                const cplx w = z - n * tau_;
                const double m0 = std::round(w.real());
                for (double m = m0 - 1; m <= m0 + 1; m += 1.0) best = std::min(best, std::abs(w - m));
            }
            return best;
        }
    }
    return 0.0;
}

void FunctionClass::check_pole(cplx z, const char* what) const {
    if (pole_distance(z) < pole_radius_) {
        std::ostringstream msg;
        msg << what << " at " << z << " is within " << pole_radius_ << " of a pole";
        fail(ErrorKind::NearSingular, msg.str());
    }
}

cplx FunctionClass::th(cplx z) const {
    switch (kind_) {
        case ClassKind::Rational: return z;
        case ClassKind::Trigonometric: return std::sinh(z);
        case ClassKind::Elliptic: return theta(z, tau_);
    }
    return 0.0;
}

cplx FunctionClass::e1(cplx z) const {
    check_pole(z, "E1");
    switch (kind_) {
        case ClassKind::Rational: return 1.0 / z;
        case ClassKind::Trigonometric: return 1.0 / std::tanh(z);
        case ClassKind::Elliptic: {
            const auto j = detail::theta_jet(0.5, 0.5, z, tau_, 1, 0, {});
            return j.d[1] / j.d[0];
        }
    }
    return 0.0;
}

cplx FunctionClass::e2(cplx z) const {
    check_pole(z, "E2");
    switch (kind_) {
        case ClassKind::Rational: return 1.0 / (z * z);
        case ClassKind::Trigonometric: {
            const cplx s = std::sinh(z);
            return 1.0 / (s * s);
        }
        case ClassKind::Elliptic: {
            const auto j = detail::theta_jet(0.5, 0.5, z, tau_, 2, 0, {});
            const cplx e = j.d[1] / j.d[0];
            return e * e - j.d[2] / j.d[0];
        }
    }
    return 0.0;
}

cplx FunctionClass::e2_prime(cplx z) const {
    check_pole(z, "E2'");
    switch (kind_) {
        case ClassKind::Rational: return -2.0 / (z * z * z);
        case ClassKind::Trigonometric: {
            const cplx s = std::sinh(z);
            return -2.0 * std::cosh(z) / (s * s * s);
        }
        case ClassKind::Elliptic: {
            const auto j = detail::theta_jet(0.5, 0.5, z, tau_, 3, 0, {});
            const cplx e1 = j.d[1] / j.d[0];
            const cplx r2 = j.d[2] / j.d[0];
            const cplx r3 = j.d[3] / j.d[0];
            // E2 = e1^2 - r2, e1' = r2 - e1^2, r2' = r3 - r2 e1
            return 2.0 * e1 * (r2 - e1 * e1) - (r3 - r2 * e1);
        }
    }
    return 0.0;
}

cplx FunctionClass::wp(cplx z) const {
    // zero constant Laurent term: 1/sinh^2 + 1/3 in the trig class
    return e2(z) + t3_ / (3.0 * t1_);
}

cplx FunctionClass::wp_prime(cplx z) const { return e2_prime(z); }

cplx FunctionClass::phi(cplx z, cplx q) const {
    check_pole(z, "phi (first argument)");
    check_pole(q, "phi (second argument)");
    switch (kind_) {
        case ClassKind::Rational: return 1.0 / z + 1.0 / q;
        case ClassKind::Trigonometric: return 1.0 / std::tanh(z) + 1.0 / std::tanh(q);
        case ClassKind::Elliptic: return t1_ * theta(z + q, tau_) / (theta(z, tau_) * theta(q, tau_));
    }
    return 0.0;
}

cplx FunctionClass::f(cplx z, cplx q) const {
    switch (kind_) {
        case ClassKind::Rational:
            check_pole(q, "f");
            return -1.0 / (q * q);
        case ClassKind::Trigonometric: {
            check_pole(q, "f");
            const cplx s = std::sinh(q);
            return -1.0 / (s * s);
        }
        case ClassKind::Elliptic: {
            check_pole(z, "f (first argument)");
            check_pole(q, "f (second argument)");
            const auto jzq = detail::theta_jet(0.5, 0.5, z + q, tau_, 1, 0, {});
            const auto jz = detail::theta_jet(0.5, 0.5, z, tau_, 0, 0, {});
            const auto jq = detail::theta_jet(0.5, 0.5, q, tau_, 1, 0, {});
            const cplx ph = t1_ * jzq.d[0] / (jz.d[0] * jq.d[0]);
            return ph * (jzq.d[1] / jzq.d[0] - jq.d[1] / jq.d[0]);
        }
    }
    return 0.0;
}

cplx FunctionClass::f_dz(cplx z, cplx q) const {
    require_elliptic("d/dz f");
    check_pole(z, "f_z (first argument)");
    check_pole(q, "f_z (second argument)");
    const auto jzq = detail::theta_jet(0.5, 0.5, z + q, tau_, 2, 0, {});
    const auto jz = detail::theta_jet(0.5, 0.5, z, tau_, 1, 0, {});
    const auto jq = detail::theta_jet(0.5, 0.5, q, tau_, 1, 0, {});
    const cplx ph = t1_ * jzq.d[0] / (jz.d[0] * jq.d[0]);
    const cplx e_zq = jzq.d[1] / jzq.d[0];
    const cplx e2_zq = e_zq * e_zq - jzq.d[2] / jzq.d[0];
    const cplx e_z = jz.d[1] / jz.d[0];
    const cplx e_q = jq.d[1] / jq.d[0];
    return ph * (e_zq - e_z) * (e_zq - e_q) - ph * e2_zq;
}

cplx FunctionClass::e1_tau(cplx z) const {
    require_elliptic("d/dtau E1");
    check_pole(z, "E1_tau");
    const auto j = detail::theta_jet(0.5, 0.5, z, tau_, 1, 0, {});
    const auto jt = detail::theta_jet(0.5, 0.5, z, tau_, 1, 1, {});
    return (jt.d[1] * j.d[0] - j.d[1] * jt.d[0]) / (j.d[0] * j.d[0]);
}

cplx FunctionClass::log_theta_tau(cplx z) const {
    require_elliptic("d/dtau log theta");
    check_pole(z, "log theta");
    return theta(z, tau_, 0, 1) / theta(z, tau_);
}

cplx FunctionClass::phi_tau(cplx z, cplx q) const {
    require_elliptic("d/dtau phi");
    const cplx ph = phi(z, q);
    const cplx lt = t1_tau_ / t1_ + theta(z + q, tau_, 0, 1) / theta(z + q, tau_) -
                    log_theta_tau(z) - log_theta_tau(q);
    return ph * lt;
}

// ---------------------------------------------------------------- free functions

cplx eisenstein(int order, cplx z, const FunctionClass& cls) {
    require(order == 1 || order == 2, ErrorKind::InvalidArgument, "Eisenstein order must be 1 or 2");
    return order == 1 ? cls.e1(z) : cls.e2(z);
}

cplx kronecker_phi(cplx eta, cplx z, const FunctionClass& cls) { return cls.phi(z, eta); }

cplx phi_f_derivative(cplx eta, cplx z, const FunctionClass& cls) { return cls.f(z, eta); }

cplx omega_alpha(int a1, int a2, cplx tau, int N) {
    require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
    return (double(a1) + double(a2) * tau) / double(N);
}

cplx phi_alpha(int a1, int a2, cplx z, cplx w, const FunctionClass& cls, int N) {
    (void)a1;
    require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
    return std::exp(2.0 * I * pi * double(a2) * z / double(N)) * cls.phi(z, w);
}

double fay_degenerate_residual(cplx eta, cplx z, cplx w, const FunctionClass& cls) {
    const cplx lhs = cls.phi(eta, z) * cls.phi(eta, w);
    const cplx rhs = cls.phi(eta, z + w) * (cls.e1(eta) + cls.e1(z) + cls.e1(w) - cls.e1(z + w + eta));
    return std::abs(lhs - rhs);
}

double fay_residual(cplx hbar, cplx eta, cplx z, cplx w, const FunctionClass& cls) {
    if (std::abs(hbar - eta) < cls.pole_radius()) return fay_degenerate_residual(eta, z, w, cls);
    const cplx lhs = cls.phi(hbar, z) * cls.phi(eta, w);
    const cplx rhs = cls.phi(hbar - eta, z) * cls.phi(eta, z + w) +
                     cls.phi(eta - hbar, w) * cls.phi(hbar, z + w);
    return std::abs(lhs - rhs);
}

double fay_wp_residual(cplx hbar, cplx z, const FunctionClass& cls) {
    return std::abs(cls.phi(hbar, z) * cls.phi(hbar, -z) - (cls.wp(hbar) - cls.wp(z)));
}

double e1_square_residual(cplx x, cplx y, const FunctionClass& cls) {
    const cplx s = cls.e1(x) + cls.e1(y) + cls.e1(-x - y);
    return std::abs(s * s - (cls.wp(x) + cls.wp(y) + cls.wp(x + y)));
}

double heat_residual(cplx z, cplx tau) {
    const auto j = detail::theta_jet(0.5, 0.5, z, tau, 2, 0, {});
    const cplx dtau = theta(z, tau, 0, 1);
    return std::abs(4.0 * I * pi * dtau - j.d[2]);
}

double heat_phi_residual(cplx z, cplx q, cplx tau) {
    const auto cls = FunctionClass::elliptic(tau);
    return std::abs(2.0 * I * pi * cls.phi_tau(z, q) - cls.f_dz(z, q));
}

double heat_log_residual(cplx z, cplx tau) {
    const auto cls = FunctionClass::elliptic(tau);
    const cplx e1 = cls.e1(z);
    return std::abs(2.0 * I * pi * cls.log_theta_tau(z) - 0.5 * (e1 * e1 - cls.e2(z)));
}

}  // namespace laxfactor
