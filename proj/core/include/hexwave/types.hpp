// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hexwave {

using cplx = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using CMat2 = Eigen::Matrix2cd;
using CVec2 = Eigen::Vector2cd;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using ComplexGrid = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

}  // namespace hexwave
