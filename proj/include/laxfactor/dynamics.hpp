#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "laxfactor/models.hpp"
#include "laxfactor/rootsys.hpp"

namespace laxfactor {

// state packed as one vector; rhs returns its time derivative
using FlowRhs = std::function<Vector(const Vector&)>;
// throws CollisionDetected when the state leaves the admissible region
using StateGuard = std::function<void(const Vector&, double t)>;

struct IntegratorOptions {
    double tol = 1e-10;
    double h0 = 1e-2;
    double h_min = 1e-12;
    long max_steps = 1000000;
};

struct RawTrajectory {
    std::vector<double> times;
    std::vector<Vector> states;
};

Vector rk4_step(const FlowRhs& f, const Vector& y, double h);
// adaptive classical RK4; the local error of a step is estimated by comparing one
// step of size h with two of size h/2
RawTrajectory integrate_adaptive(const FlowRhs& f, const Vector& y0, double t_end, const IntegratorOptions& opt,
                                 const StateGuard& guard = {});
Vector integrate_fixed(const FlowRhs& f, const Vector& y0, double t_end, int steps);

Vector pack(const PhasePoint& x);
PhasePoint unpack(const Vector& y);

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> states;  // for BCn: q and velocities
    std::variant<ModelSpec, BCNSpec> spec;
};

// exclusion radius for the collision guard (pairwise pole distance)
inline constexpr double kExclusionRadius = 1e-3;

Trajectory integrate(const ModelSpec& spec, const PhasePoint& initial, double t_end, double tol);
// Newton flow of the BCn Hamiltonian in (q, v)
Trajectory integrate(const BCNSpec& spec, const PhasePoint& initial_qv, double t_end, double tol);

struct ResidualProfile {
    std::vector<double> steps;
    std::vector<double> residuals;
    double estimated_order = 0.0;
    double fit_residual = 0.0;  // rms of the log-log fit
    double min_residual() const;
};

// L, M and flow of a Lax system on a packed state
struct LaxSystem {
    FlowRhs rhs;
    std::function<Matrix(const Vector&)> L;
    std::function<Matrix(const Vector&)> M;
};

LaxSystem model_lax_system(const ModelSpec& spec, cplx z);
// state is the flattened spin matrix S (column major)
LaxSystem top_lax_system(int N, cplx z, cplx tau, bool relativistic, cplx eta);

// (L(phi_h x) - L(phi_{-h} x))/2h - [L(x), M(x)] for each h, phi_h one RK4 step
ResidualProfile lax_equation_profile(const LaxSystem& sys, const Vector& state, const std::vector<double>& steps);
ResidualProfile lax_equation_profile(const ModelSpec& spec, const PhasePoint& x, cplx z,
                                     const std::vector<double>& steps);
// steps from profile_steps with the given time scale
ResidualProfile lax_equation_profile(const LaxSystem& sys, const Vector& state, double time_scale);
ResidualProfile lax_equation_profile(const ModelSpec& spec, const PhasePoint& x, cplx z);
// least squares slope of log r against log h
void fit_order(ResidualProfile& prof);

// ratios of the profile steps to the smallest one
std::vector<double> default_profile_steps();
// h_min * {8, 4, 2, 1}, placed inside the h^2 regime of the central difference
std::vector<double> profile_steps(const LaxSystem& sys, const Vector& state, double time_scale);

// min pairwise pole distance over max speed, capped at 1
double characteristic_time(const ModelSpec& spec, const PhasePoint& x);
// |y| / |ydot| in the max norm, capped at 1
double characteristic_time(const LaxSystem& sys, const Vector& y);

struct ConservationRow {
    int k = 0;
    double drift = 0.0;  // max |tr L^k(t) - tr L^k(0)| / max(1, |tr L^k(0)|)
};

struct ConservationReport {
    std::vector<ConservationRow> traces;
    double eigenvalue_drift = 0.0;  // matched eigenvalues, max over the trajectory
    double energy_drift = 0.0;
};

ConservationReport conservation_report(const Trajectory& traj, cplx z);

// pairs eigenvalues of b to those of a greedily by distance; max mismatch
double eigenvalue_distance(const Vector& a, const Vector& b);

}  // namespace laxfactor
