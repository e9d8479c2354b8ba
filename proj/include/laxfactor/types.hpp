#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace laxfactor {

using cplx = std::complex<double>;
// dense complex matrix; every Lax, M and R object is one of these
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

}  // namespace laxfactor
