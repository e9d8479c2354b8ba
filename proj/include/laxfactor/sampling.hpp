#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "laxfactor/models.hpp"

namespace laxfactor {

using Rng = std::mt19937_64;

// independent stream per (seed, label)
Rng make_rng(std::uint64_t seed, const std::string& label);

struct PhaseSampler {
    double separation = 0.3;      // min pole distance of q_j - q_k; elliptic caps it at 0.55/sqrt(N)
    double shifted_separation = 0.12;  // same, for the nonzero shifts
    double p_scale = 0.3;
    std::vector<cplx> shifts;     // e.g. {hbar, -hbar}
};

// Elliptic: q = a + b tau with |a| < 0.45, |b| < 0.3, inside the fundamental cell.
// Trig/rational: Re q in [-1.2, 1.2], Im q in [-0.15, 0.15]. Momenta real normal.
PhasePoint sample_phase(Rng& rng, const FunctionClass& cls, int N, const PhaseSampler& opt = {});

// spectral parameter away from zero: Re in [0.15, 0.35], Im in [0.05, 0.2]
cplx sample_z(Rng& rng);

// complex normal entries
Matrix sample_matrix(Rng& rng, int n, double scale = 1.0);

double uniform(Rng& rng, double a, double b);

}  // namespace laxfactor
