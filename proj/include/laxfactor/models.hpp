#pragma once

#include <string>

#include "laxfactor/elliptic.hpp"
#include "laxfactor/linalg.hpp"

namespace laxfactor {

struct PhasePoint {
    Vector q;
    Vector p;

    PhasePoint() = default;
    PhasePoint(Vector q_, Vector p_);
    int size() const { return int(q.size()); }
};

enum class Model { RS, RSprime, CM, EllipticTop, RelativisticTop };

const char* to_string(Model m);

struct ModelSpec {
    Model model = Model::CM;
    FunctionClass cls;
    bool spectral = true;
    cplx hbar{0.0, 0.0};
    cplx nu{0.0, 0.0};
    cplx c{1.0, 0.0};
    int N = 2;

    void validate() const;
    bool relativistic() const { return model == Model::RS || model == Model::RSprime; }
};

// diagonal factor of the RS Lax matrix at i = j apart from the velocity: phi(z, hbar)
// and its trig/rational analogues; c * tr L / this is the Hamiltonian
cplx rs_trace_scalar(const ModelSpec& spec, cplx z);

// RS: qdot_j = e^{p_j/c} prod_{k != j} th(q_jk -+ hbar)/th(q_jk); CM: p_i - nu sum E1(q_ik)
Vector velocity_map(const ModelSpec& spec, const PhasePoint& x);

Matrix lax_rs(const ModelSpec& spec, const PhasePoint& x, cplx z);
Matrix m_rs(const ModelSpec& spec, const PhasePoint& x, cplx z);
Matrix lax_cm(const ModelSpec& spec, const PhasePoint& x, cplx z);
Matrix m_cm(const ModelSpec& spec, const PhasePoint& x, cplx z);
// dispatch on spec.model (RS, RSprime, CM)
Matrix lax_matrix(const ModelSpec& spec, const PhasePoint& x, cplx z);
Matrix m_matrix(const ModelSpec& spec, const PhasePoint& x, cplx z);

// Lax matrix in velocity coordinates for CM: diag(v + nu E1(z)) + off-diagonal part
Matrix lax_cm_velocity(const ModelSpec& spec, const Vector& q, const Vector& v, cplx z);

cplx hamiltonian(const ModelSpec& spec, const PhasePoint& x);
// RS only: c * tr L(z) / rs_trace_scalar(z), z independent
cplx hamiltonian_from_trace(const ModelSpec& spec, const PhasePoint& x, cplx z);

struct PhaseVelocity {
    Vector dq;
    Vector dp;
};

// Hamilton's equations from analytic gradients of the Hamiltonian
PhaseVelocity eom_rhs(const ModelSpec& spec, const PhasePoint& x);
// second-order equations: qddot_i in terms of q and qdot
Vector acceleration(const ModelSpec& spec, const Vector& q, const Vector& qdot);

// canonical map RS -> RS' keeping the velocities
PhasePoint rs_to_rsprime(const ModelSpec& spec, const PhasePoint& x);

// pairwise validation; throws NearSingular naming the pair
void check_configuration(const ModelSpec& spec, const Vector& q);

// ---------------------------------------------------------------- tops

// S_alpha = tr(S T_{-alpha})/N, alpha = a1 * N + a2
Vector spin_components(const Matrix& S);

struct TopLax {
    Matrix L;
    Matrix M;
    cplx discarded_trace{0.0, 0.0};  // trace part removed from M (relativistic)
};

// nonrelativistic: L = sum_{alpha != 0} T S phi_alpha(z, w_alpha), M with f_alpha;
// relativistic: L = sum_all T S phi_alpha(z, w_alpha + eta), M = -sum_{alpha != 0} T S phi_alpha(z, w_alpha)
TopLax lax_top(const Matrix& S, cplx z, cplx tau, bool relativistic, cplx eta);
// J(S) with Sdot = [S, J(S)]
Matrix top_inertia(const Matrix& S, cplx tau, bool relativistic, cplx eta);
cplx top_hamiltonian(const Matrix& S, cplx tau, bool relativistic, cplx eta);

// z -> L(z), z -> M(z) at a fixed phase point
class LaxEvaluator {
public:
    LaxEvaluator(ModelSpec spec, PhasePoint x) : spec_(std::move(spec)), x_(std::move(x)) {}
    Matrix L(cplx z) const { return lax_matrix(spec_, x_, z); }
    Matrix M(cplx z) const { return m_matrix(spec_, x_, z); }
    const ModelSpec& spec() const { return spec_; }
    const PhasePoint& phase() const { return x_; }

private:
    ModelSpec spec_;
    PhasePoint x_;
};

}  // namespace laxfactor
