#pragma once

#include "laxfactor/error.hpp"
#include "laxfactor/types.hpp"

namespace laxfactor {

// Modular parameter of the torus C/(Z + tau Z). Im tau > 0 is enforced.
class EllipticModulus {
public:
    explicit EllipticModulus(cplx tau);
    cplx tau() const { return tau_; }

private:
    cplx tau_;
};

// Characteristics a = num_a/den, b = num_b/den.
struct ThetaChar {
    int num_a = 1;
    int num_b = 1;
    int den = 2;

    double a() const { return double(num_a) / den; }
    double b() const { return double(num_b) / den; }
};

struct SeriesOptions {
    double rel_tol = 1e-16;  // stop after two consecutive terms below rel_tol * max term
    int max_index = 200;     // cap on |j - j0|
};

// theta[a;b](z|tau) and its derivatives: dz derivatives in z, dtau in tau.
// Derivatives are taken term by term in the series.
cplx theta_char(double a, double b, cplx z, cplx tau, int dz = 0, int dtau = 0,
                const SeriesOptions& opt = {});
cplx theta_char(const ThetaChar& chr, cplx z, const EllipticModulus& tau, int dz = 0,
                int dtau = 0, const SeriesOptions& opt = {});

// odd theta function theta[1/2;1/2]
cplx theta(cplx z, cplx tau, int dz = 0, int dtau = 0);

cplx dedekind_eta(cplx tau);

enum class ClassKind { Elliptic, Trigonometric, Rational };

const char* to_string(ClassKind kind);

// One of the three function classes. The elliptic one caches theta'(0), theta'''(0)
// and their tau derivatives; all members are immutable so objects can be shared.
//
// Trigonometric and rational classes are exactly the degenerate formulas
// (coth, 1/sinh^2, 1/z, ...); comparing them with elliptic values at large
// Im tau needs the rescaling z -> pi z done by the caller.
class FunctionClass {
public:
    FunctionClass() = default;  // rational
    static FunctionClass elliptic(cplx tau, double pole_radius = 1e-8);
    static FunctionClass trigonometric(double pole_radius = 1e-8);
    static FunctionClass rational(double pole_radius = 1e-8);

    ClassKind kind() const { return kind_; }
    bool is_elliptic() const { return kind_ == ClassKind::Elliptic; }
    cplx tau() const;
    double pole_radius() const { return pole_radius_; }

    // distance from z to the nearest zero of th()
    double pole_distance(cplx z) const;
    void check_pole(cplx z, const char* what) const;

    // the "theta" of the class: theta(z), sinh(z) or z
    cplx th(cplx z) const;
    cplx th_prime0() const { return t1_; }
    cplx th_third0() const { return t3_; }

    cplx e1(cplx z) const;
    cplx e2(cplx z) const;
    // d/dz E2
    cplx e2_prime(cplx z) const;
    cplx wp(cplx z) const;
    cplx wp_prime(cplx z) const;
    cplx phi(cplx z, cplx q) const;
    // f(z,q) = d/dq phi(z,q); trig/rational: -1/sinh^2 q, -1/q^2
    cplx f(cplx z, cplx q) const;
    // d/dz f(z,q), elliptic only
    cplx f_dz(cplx z, cplx q) const;

    // elliptic only: d/dtau at fixed arguments
    cplx e1_tau(cplx z) const;
    cplx log_theta_tau(cplx z) const;
    cplx phi_tau(cplx z, cplx q) const;

private:
    ClassKind kind_ = ClassKind::Rational;
    cplx tau_{0.0, 1.0};
    double pole_radius_ = 1e-8;
    cplx t1_{1.0, 0.0};
    cplx t3_{0.0, 0.0};
    cplx t1_tau_{0.0, 0.0};

    void require_elliptic(const char* what) const;
};

// E_1 for order 1, E_2 for order 2
cplx eisenstein(int order, cplx z, const FunctionClass& cls);
// phi(z, eta)
cplx kronecker_phi(cplx eta, cplx z, const FunctionClass& cls);
// f(z, eta) = d/deta phi(z, eta)
cplx phi_f_derivative(cplx eta, cplx z, const FunctionClass& cls);

cplx omega_alpha(int a1, int a2, cplx tau, int N);
// exp(2 pi i a2 z / N) phi(z, w)
cplx phi_alpha(int a1, int a2, cplx z, cplx w, const FunctionClass& cls, int N);

// |phi(h,z)phi(e,w) - phi(h-e,z)phi(e,z+w) - phi(e-h,w)phi(h,z+w)|.
// h == e (inside the pole radius) is routed to the first degeneration.
double fay_residual(cplx hbar, cplx eta, cplx z, cplx w, const FunctionClass& cls);
// phi(e,z)phi(e,w) - phi(e,z+w)(E1(e)+E1(z)+E1(w)-E1(z+w+e))
double fay_degenerate_residual(cplx eta, cplx z, cplx w, const FunctionClass& cls);
// phi(h,z)phi(h,-z) - (wp(h) - wp(z))
double fay_wp_residual(cplx hbar, cplx z, const FunctionClass& cls);
// (E1(x)+E1(y)+E1(-x-y))^2 - (wp(x)+wp(y)+wp(x+y))
double e1_square_residual(cplx x, cplx y, const FunctionClass& cls);

// |4 pi i d_tau theta - d_z^2 theta|
double heat_residual(cplx z, cplx tau);
// |2 pi i d_tau phi(z,q) - d_z d_q phi(z,q)|
double heat_phi_residual(cplx z, cplx q, cplx tau);
// |2 pi i d_tau log theta(z) - (E1^2 - E2)/2|
double heat_log_residual(cplx z, cplx tau);

}  // namespace laxfactor
