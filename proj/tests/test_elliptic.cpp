#include <boost/multiprecision/cpp_complex.hpp>

#include "test_util.hpp"

using namespace lft;
namespace mp = boost::multiprecision;
using qcplx = mp::cpp_complex_50;
using qreal = mp::cpp_bin_float_50;

namespace {

// theta[a;b] summed in 50-digit arithmetic over a fixed symmetric window
cplx theta_quad(double a, double b, cplx z, cplx tau, int dz = 0) {
    const qreal qpi = boost::math::constants::pi<qreal>();
    const qcplx qi(qreal(0), qreal(1));
    const qcplx qz(qreal(z.real()), qreal(z.imag()));
    const qcplx qt(qreal(tau.real()), qreal(tau.imag()));
    qcplx sum(0);
    for (int j = -40; j <= 40; ++j) {
        const qreal n = qreal(j) + qreal(a);
        qcplx term = mp::exp(qi * qpi * n * n * qt + qreal(2) * qi * qpi * n * (qz + qreal(b)));
        for (int k = 0; k < dz; ++k) term *= qreal(2) * qi * qpi * n;
        sum += term;
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

// E1 = pi cot(pi z) + 4 pi sum q^n/(1-q^n) sin(2 pi n z), q = exp(2 pi i tau)
cplx e1_qseries(cplx z, cplx tau) {
    const cplx q = std::exp(2.0 * I * pi * tau);
    cplx s = pi / std::tan(pi * z);
    cplx qn = q;
    for (int n = 1; n < 200 && std::abs(qn) > 1e-20; ++n, qn *= q) s += 4.0 * pi * qn / (1.0 - qn) * std::sin(2.0 * pi * n * z);
    return s;
}

// Kronecker double series, valid for |Im z|, |Im w| < Im tau
cplx phi_qseries(cplx z, cplx w, cplx tau) {
    const cplx q = std::exp(2.0 * I * pi * tau);
    cplx s = pi / std::tan(pi * z) + pi / std::tan(pi * w);
    for (int m = 1; m < 120; ++m)
        for (int n = 1; n < 120; ++n) {
            const cplx qmn = std::pow(q, double(m * n));
            if (std::abs(qmn) < 1e-22) break;
            s += 4.0 * pi * qmn * std::sin(2.0 * pi * (double(m) * z + double(n) * w));
        }
    return s;
}

const std::vector<cplx> kTaus{{0.0, 1.0}, {0.3, 0.8}, {0.0, 2.0}, {-0.4, 0.6}};

}  // namespace

TEST(Theta, MatchesExtendedPrecisionSeries) {
    Rng rng = make_rng(1, "theta-quad");
    for (cplx tau : kTaus)
        for (int i = 0; i < 20; ++i) {
            const cplx z(uniform(rng, -0.5, 0.5), uniform(rng, -0.4, 0.4) * tau.imag());
            for (auto [a, b] : {std::pair{0.5, 0.5}, {0.0, 0.0}, {0.5, 0.0}, {0.25, 1.5}})
                for (int dz = 0; dz <= 3; ++dz) {
                    const cplx ref = theta_quad(a, b, z, tau, dz);
                    EXPECT_LT(std::abs(theta_char(a, b, z, tau, dz) - ref), 1e-13 * (1.0 + std::abs(ref)))
                        << "tau=" << tau << " z=" << z << " a=" << a << " b=" << b << " dz=" << dz;
                }
        }
}

TEST(Theta, DerivativeAtZeroIsEtaCubed) {
    for (cplx tau : kTaus) {
        const cplx eta = dedekind_eta(tau);
        EXPECT_LT(std::abs(theta(0.0, tau, 1) + 2.0 * pi * eta * eta * eta), 1e-13);
    }
}

TEST(Theta, OddAndQuasiPeriodic) {
    const cplx tau(0.3, 0.8);
    for (cplx z : {cplx(0.1, 0.05), cplx(-0.33, 0.2), cplx(0.41, -0.3)}) {
        EXPECT_LT(std::abs(theta(-z, tau) + theta(z, tau)), 1e-14);
        EXPECT_LT(std::abs(theta(z + 1.0, tau) + theta(z, tau)), 1e-14);
        const cplx shifted = -std::exp(-I * pi * tau - 2.0 * I * pi * z) * theta(z, tau);
        EXPECT_LT(std::abs(theta(z + tau, tau) - shifted), 1e-13 * (1.0 + std::abs(shifted)));
    }
}

TEST(Theta, RejectsLowerHalfPlane) {
    EXPECT_THROW_KIND(EllipticModulus(cplx(0.2, -0.1)), ErrorKind::NonConvergent);
    EXPECT_THROW_KIND(theta(0.1, cplx(0.0, 0.0)), ErrorKind::NonConvergent);
    EXPECT_THROW_KIND(FunctionClass::elliptic(cplx(0.1, 0.0)), ErrorKind::NonConvergent);
}

TEST(Theta, OverflowIsReported) {
    EXPECT_THROW_KIND(theta(cplx(0.0, -400.0), cplx(0.0, 1.0)), ErrorKind::Overflow);
}

TEST(Eisenstein, E1MatchesQSeries) {
    Rng rng = make_rng(2, "e1");
    for (cplx tau : kTaus) {
        const auto cls = FunctionClass::elliptic(tau);
        for (int i = 0; i < 30; ++i) {
            const cplx z(uniform(rng, -0.5, 0.5), uniform(rng, -0.3, 0.3) * tau.imag());
            const cplx ref = e1_qseries(z, tau);
            EXPECT_LT(std::abs(cls.e1(z) - ref), 1e-11 * (1.0 + std::abs(ref))) << z;
        }
    }
}

TEST(Eisenstein, E2IsMinusE1Derivative) {
    const auto cls = FunctionClass::elliptic({0.3, 0.8});
    const double h = 1e-4;
    for (cplx z : {cplx(0.2, 0.1), cplx(-0.3, 0.25)}) {
        const cplx d = (e1_qseries(z + h, cls.tau()) - e1_qseries(z - h, cls.tau())) / (2 * h);
        EXPECT_LT(std::abs(cls.e2(z) + d), 1e-6 * std::abs(d));
    }
}

TEST(Eisenstein, WpHasNoConstantTerm) {
    // wp(z) - 1/z^2 -> 0 as z -> 0
    for (ClassKind k : all_classes()) {
        const auto cls = make_class(k);
        const cplx z(1e-3, 5e-4);
        EXPECT_LT(std::abs(cls.wp(z) - 1.0 / (z * z)), 1e-4) << to_string(k);
    }
}

TEST(Kronecker, MatchesDoubleSeries) {
    Rng rng = make_rng(3, "phi");
    for (cplx tau : kTaus) {
        const auto cls = FunctionClass::elliptic(tau);
        for (int i = 0; i < 20; ++i) {
            const cplx z(uniform(rng, -0.5, 0.5), uniform(rng, -0.2, 0.2) * tau.imag());
            const cplx w(uniform(rng, -0.5, 0.5), uniform(rng, -0.2, 0.2) * tau.imag());
            const cplx ref = phi_qseries(z, w, tau);
            EXPECT_LT(std::abs(cls.phi(z, w) - ref), 1e-10 * (1.0 + std::abs(ref))) << z << " " << w;
        }
    }
}

TEST(Kronecker, DegenerateClassesAreClosedForms) {
    const auto trig = FunctionClass::trigonometric();
    const auto rat = FunctionClass::rational();
    const cplx z(0.3, 0.1), q(-0.7, 0.2);
    EXPECT_LT(std::abs(trig.phi(z, q) - (1.0 / std::tanh(z) + 1.0 / std::tanh(q))), 1e-14);
    EXPECT_LT(std::abs(rat.phi(z, q) - (1.0 / z + 1.0 / q)), 1e-14);
    EXPECT_LT(std::abs(rat.phi(1.0, 1.0) - 2.0), 1e-15);
    EXPECT_LT(std::abs(trig.e1(z) - 1.0 / std::tanh(z)), 1e-14);
    EXPECT_LT(std::abs(trig.f(z, q) + 1.0 / (std::sinh(q) * std::sinh(q))), 1e-13);
    EXPECT_LT(std::abs(rat.f(z, q) + 1.0 / (q * q)), 1e-14);
}

TEST(Kronecker, TrigIsTheLargeImTauLimit) {
    // elliptic with z -> z/pi approaches pi coth-like forms: phi_ell(z/(pi i)) / (pi i) ... checked via E1
    const auto ell = FunctionClass::elliptic({0.0, 12.0});
    const cplx z(0.13, 0.07);
    EXPECT_LT(std::abs(ell.e1(z) - pi / std::tan(pi * z)), 1e-12);
}

TEST(Kronecker, PolesAreReported) {
    const auto cls = FunctionClass::elliptic({0.3, 0.8});
    EXPECT_THROW_KIND(cls.phi(0.0, 0.2), ErrorKind::NearSingular);
    EXPECT_THROW_KIND(cls.e1(cls.tau() + 1.0), ErrorKind::NearSingular);
}

TEST(Identities, FayFamilyAtRandomPoints) {
    Rng rng = make_rng(4, "fay");
    for (ClassKind k : all_classes()) {
        const auto cls = make_class(k);
        for (int i = 0; i < 50; ++i) {
            auto pt = [&] { return cplx(uniform(rng, -0.45, 0.45), uniform(rng, -0.2, 0.2)); };
            const cplx h = pt(), e = pt(), z = pt(), w = pt();
            auto scale = [&](cplx a, cplx b) { return 1.0 + std::abs(cls.phi(a, b)); };
            EXPECT_LT(fay_residual(h, e, z, w, cls) / (scale(h, z) * scale(e, w)), 1e-10);
            EXPECT_LT(fay_degenerate_residual(e, z, w, cls) / (scale(e, z) * scale(e, w)), 1e-10);
            EXPECT_LT(fay_wp_residual(h, z, cls) / (scale(h, z) * scale(h, -z)), 1e-10);
        }
    }
}

TEST(Identities, HeatEquations) {
    for (cplx tau : kTaus)
        for (cplx z : {cplx(0.2, 0.1), cplx(-0.35, 0.2)}) {
            EXPECT_LT(heat_residual(z, tau), 1e-10);
            EXPECT_LT(heat_phi_residual(z, cplx(0.17, -0.06), tau), 1e-9);
            EXPECT_LT(heat_log_residual(z, tau), 1e-9);
        }
}

TEST(HeisenbergPhases, PhiAlphaReducesToPhiForZeroIndex) {
    const auto cls = FunctionClass::elliptic({0.3, 0.8});
    const cplx z(0.2, 0.1), w(0.11, 0.03);
    EXPECT_LT(std::abs(phi_alpha(0, 0, z, w, cls, 3) - cls.phi(z, w)), 1e-14);
    EXPECT_LT(std::abs(omega_alpha(1, 2, cls.tau(), 3) - (1.0 + 2.0 * cls.tau()) / 3.0), 1e-15);
}
