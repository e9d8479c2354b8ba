#include "laxfactor/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace laxfactor {

Rng make_rng(std::uint64_t seed, const std::string& label) {
    const std::uint64_t h = std::hash<std::string>{}(label);
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(h), std::uint32_t(h >> 32)};
    return Rng(seq);
}

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

namespace {

bool admissible(const FunctionClass& cls, const Vector& q, int upto, double separation, const PhaseSampler& opt) {
    for (int k = 0; k < upto; ++k) {
        const cplx d = q(upto) - q(k);
        if (cls.pole_distance(d) < separation) return false;
        for (cplx s : opt.shifts) {
            if (cls.pole_distance(d + s) < opt.shifted_separation) return false;
            if (cls.pole_distance(-d + s) < opt.shifted_separation) return false;
        }
    }
    return true;
}

}  // namespace

PhasePoint sample_phase(Rng& rng, const FunctionClass& cls, int N, const PhaseSampler& opt) {
    require(N >= 1, ErrorKind::InvalidArgument, "N must be positive");
    // the torus has room for about N discs of radius 0.55/sqrt(N)
    const double separation = cls.is_elliptic() ? std::min(opt.separation, 0.55 / std::sqrt(double(N))) : opt.separation;
    Vector q(N);
    for (int restart = 0;; ++restart) {
        require(restart < 1000, ErrorKind::DegenerateConfiguration, "could not place separated coordinates");
        bool placed = true;
        for (int j = 0; j < N && placed; ++j) {
            int tries = 0;
            do {
                if (++tries > 2000) {
                    placed = false;
                    break;
                }
                if (cls.is_elliptic()) {
                    q(j) = uniform(rng, -0.45, 0.45) + uniform(rng, -0.3, 0.3) * cls.tau();
                } else {
                    q(j) = cplx(uniform(rng, -1.2, 1.2), uniform(rng, -0.15, 0.15));
                }
            } while (!admissible(cls, q, j, separation, opt));
        }
        if (placed) break;
    }
    std::normal_distribution<double> nd(0.0, opt.p_scale);
    Vector p(N);
    for (int j = 0; j < N; ++j) p(j) = nd(rng);
    return PhasePoint(q, p);
}

cplx sample_z(Rng& rng) { return cplx(uniform(rng, 0.15, 0.35), uniform(rng, 0.05, 0.2)); }

Matrix sample_matrix(Rng& rng, int n, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
    return m;
}

}  // namespace laxfactor
