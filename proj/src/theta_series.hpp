#pragma once

#include <array>

#include "laxfactor/elliptic.hpp"

namespace laxfactor::detail {

// theta[a;b] and its first z derivatives from one pass over the series
struct ThetaJet {
    static constexpr int size = 4;
    std::array<cplx, size> d{};
};

ThetaJet theta_jet(double a, double b, cplx z, cplx tau, int order, int dtau,
                   const SeriesOptions& opt);

}  // namespace laxfactor::detail
