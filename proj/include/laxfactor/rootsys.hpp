#pragma once

#include "laxfactor/models.hpp"

namespace laxfactor {

enum class RootSystem { BCn, Bn, Cn, Dn };

const char* to_string(RootSystem r);

// Rational BC_N couplings. The presets fix the couplings of the root system;
// bcn() takes arbitrary couplings and only records whether the Lax constraint holds.
struct BCNSpec {
    int N = 2;
    cplx m1{0.0, 0.0};
    cplx m2{0.0, 0.0};
    cplx m4{0.0, 0.0};
    RootSystem root = RootSystem::BCn;

    static BCNSpec bcn(int N, cplx m1, cplx m2, cplx m4);
    static BCNSpec dn(int N, cplx m2);
    static BCNSpec cn(int N, cplx m2, cplx m4);
    // m1 = sqrt(2) m2, m4 = 0
    static BCNSpec bn(int N, cplx m2);

    // m1 (m1^2 - 2 m2^2 + sqrt2 m2 m4)
    cplx constraint_value() const;
    bool constraint_satisfied(double tol = 1e-12) const;
    void validate() const;
};

// phase.p are the momenta in the A-block diagonal p_i - (sqrt2 m4/2 + sqrt2 m1)/q_i - m2 sum(...)
Matrix lax_bcn(const BCNSpec& spec, const PhasePoint& x);
// 2N x 2N block for m1 = 0, after checking the last row and column vanish
Matrix lax_bcn_truncated(const BCNSpec& spec, const PhasePoint& x);

// momenta for which the A-block diagonal equals the velocities v
Vector bcn_momentum_from_velocity(const BCNSpec& spec, const Vector& q, const Vector& v);

// P - D0 V^{-1}(m2 C0 - (m2 - sqrt2 m4) Ctilde) V D0^{-1}, 2N x 2N
Matrix factorized_lax_dc(const BCNSpec& spec, const PhasePoint& x);
// P - m2 D0 V^{-1}(C0 + Ctilde) V D0^{-1}, 2N+1 x 2N+1
Matrix factorized_lax_b(const BCNSpec& spec, const PhasePoint& x);

// 1/2 sum v^2 - (sum_{i<j} m2^2/(q_i-q_j)^2 + m2^2/(q_i+q_j)^2 + sum m^2/(2q_i)^2), m^2 = m4^2 + 4 m1^2
cplx bcn_hamiltonian(const BCNSpec& spec, const Vector& q, const Vector& v);
// Newton equations qddot = -grad of the potential part of the Hamiltonian above
Vector bcn_acceleration(const BCNSpec& spec, const Vector& q);

struct VandermondeBlockIdentities {
    double j_block = 0.0;     // D0 V^{-1} Ctilde V D0^{-1} against the (J, -J; J, -J) block form
    double even_sum = 0.0;    // sum over even gamma of Vinv_{i gamma} V_{gamma j} against delta_ij / 2
    double corners = 0.0;     // G_{2N+1,2N+1} = 0, G_{i,2N+1} = -sqrt2/q_i, G_{2N+1,j} = sqrt2/q_j
    double b_diag = 0.0;      // A^B_ii - A^D_ii + 2 m2/q_i
    double sign_flip = 0.0;   // G_{i+N, j+N} + G_{ij} on the 2N block
};

VandermondeBlockIdentities vandermonde_block_identities(const Vector& q);

// C0 and Ctilde of size n
Matrix c_tilde(int n);

}  // namespace laxfactor
