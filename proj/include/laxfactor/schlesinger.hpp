#pragma once

#include "laxfactor/factorization.hpp"

namespace laxfactor {

// d_i = sum_{k != i} E1(q_ik); t-flow moves q with p, tau-flow with p - d/N
struct TimePair {
    Vector d;
    Vector dq_t;
    Vector dq_tau;
};

TimePair time_pair(const FunctionClass& cls, const PhasePoint& x);

// Which intertwiner the trigonometric spectral example uses. The exponential
// gauge D0 = prod (e^{-2q_i} - e^{-2q_k}) goes with Xi-tilde; d is shifted by N - 2.
enum class Theorem2Gauge { Default, TrigXiSinh };

// elliptic: N nu ((N/2) g^{-1}g'' - 2 pi i D^{-1} d_tau D + D^{-1} Ddot|_{d}/N + g^{-1}g' diag(d));
// trig/rational: nu ((1/2) g^{-1}g'' + g^{-1}g' diag(d) + D^{-1} Ddot|_{d})
Matrix m_cm_theorem2(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z, cplx nu,
                     Theorem2Gauge gauge = Theorem2Gauge::Default);
// elliptic only: N nu (g^{-1} dg/dtau - g^{-1} dg/dt) with full derivatives along the two flows
Matrix m_cm_theorem2_full(const PhasePoint& x, cplx z, cplx nu, cplx tau);

struct ProofIdentities {
    double l_diag = 0.0;       // l_ii - (E1(z) - d_i), l = N g^{-1} g'
    double recursion = 0.0;    // N g^{-1}g'' - (l' + l^2/N), l and l' in closed form
    double off_diag = 0.0;     // ((N/2) g^{-1}g'')_ij - f(z,q_ij)/N + l_ij d_j/N
    double delta_sum = 0.0;    // Delta_i sum of squared E1 triangles against its closed form
    double diag_closed = 0.0;  // trace-free diagonal of the Theorem-2 M against its closed form
};

ProofIdentities theorem2_proof_identities(const Vector& q, cplx z, cplx tau);

// |(L(nu0) + g^{-1}g') - L(nu0 + unit)|, unit 1/N elliptic and 1 rational
double schlesinger_shift_residual(const FunctionClass& cls, bool spectral, const PhasePoint& x, cplx z, cplx nu0);
// h = theta(z) acting on d/dz + nu0 E1(z) as h (d/dz + A) h^{-1}: result against (nu0 - 1) E1(z)
double scalar_schlesinger_residual(cplx nu0, cplx z, cplx tau);

struct ZeroCurvature {
    double residual = 0.0;           // with M shifted by nu 2 pi i d_tau log theta(z) 1
    double unshifted = 0.0;          // same without the shift
    double predicted_defect = 0.0;   // |nu 2 pi i d_tau E1(z)|
    double defect_trace_free = 0.0;  // trace-free part of the unshifted defect
    double richardson_gap = 0.0;     // |D(h) - D(h/2)| of the tau difference
};

// 2 pi i dL/dtau - dM/dz - [L, M] for elliptic CM in velocity coordinates.
// The tau derivative is a central difference along (q + s v/2pi i, v + s qddot/2pi i, tau + s).
ZeroCurvature zero_curvature_residual(const Vector& q, const Vector& v, cplx z, cplx nu, cplx tau, double step = 1e-5);

// 2 pi i d_tau L - d_z M at fixed q, v (both analytic), M shifted
double heat_corollary_residual(const Vector& q, const Vector& v, cplx z, cplx nu, cplx tau);

}  // namespace laxfactor
