// SPDX-License-Identifier: Apache-2.0
#include "hexwave/lattice.hpp"

#include <cmath>
#include <limits>

#include "hexwave/error.hpp"

namespace hexwave {

namespace {

// Columns are the basis vectors.
Mat2 columns(const Vec2& a, const Vec2& b) {
  Mat2 m;
  m.col(0) = a;
  m.col(1) = b;
  return m;
}

}  // namespace

Vec2 LatticeSpec::dual_coords(const Vec2& q) const { return columns(k1, k2).inverse() * q; }

Vec2 LatticeSpec::lattice_coords(const Vec2& x) const { return columns(v1, v2).inverse() * x; }

double LatticeSpec::dual_cell_area() const { return std::abs(columns(k1, k2).determinant()); }

double LatticeSpec::dual_distance(const Vec2& q, const Vec2& p) const {
  const Vec2 d = dual_coords(q - p);
  const double r1 = std::round(d(0));
  const double r2 = std::round(d(1));
  double best = std::numeric_limits<double>::infinity();
  for (int s1 = -1; s1 <= 1; ++s1) {
    for (int s2 = -1; s2 <= 1; ++s2) {
      const Vec2 w = dual_point(d(0) - r1 + s1, d(1) - r2 + s2);
      best = std::min(best, w.norm());
    }
  }
  return best;
}

LatticeSpec make_triangular_lattice() {
  const double s3 = std::sqrt(3.0);
  LatticeSpec lat;
  lat.v1 = Vec2(s3 / 2.0, 0.5);
  lat.v2 = Vec2(s3 / 2.0, -0.5);

  // k_i . v_j = 2π δ_ij  <=>  [k1 k2]^T [v1 v2] = 2π I.
  const Mat2 duals = 2.0 * kPi * columns(lat.v1, lat.v2).inverse().transpose();
  lat.k1 = duals.col(0);
  lat.k2 = duals.col(1);
  lat.K = (lat.k1 - lat.k2) / 3.0;
  lat.Kp = -lat.K;
  lat.cell_area = std::abs(columns(lat.v1, lat.v2).determinant());

  const double theta = -2.0 * kPi / 3.0;  // clockwise
  lat.R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return lat;
}

PlaneWaveBasis::PlaneWaveBasis(LatticeSpec lattice, int truncation)
    : lattice_(std::move(lattice)), truncation_(truncation) {
  if (truncation < 0) throw InvalidArgument("plane-wave truncation must be non-negative");
  indices_.reserve(static_cast<std::size_t>((2 * truncation + 1) * (2 * truncation + 1)));
  for (int m1 = -truncation; m1 <= truncation; ++m1)
    for (int m2 = -truncation; m2 <= truncation; ++m2) indices_.push_back({m1, m2});
}

std::optional<std::size_t> PlaneWaveBasis::index_of(int m1, int m2) const {
  if (std::abs(m1) > truncation_ || std::abs(m2) > truncation_) return std::nullopt;
  const int side = 2 * truncation_ + 1;
  return static_cast<std::size_t>((m1 + truncation_) * side + (m2 + truncation_));
}

Vec2 PlaneWaveBasis::frequency(std::size_t i) const {
  return lattice_.dual_point(indices_[i].m1, indices_[i].m2);
}

std::size_t PlaneWaveBasis::negated(std::size_t i) const { return size() - 1 - i; }

RotationIndexMap rotate_index_map(const PlaneWaveBasis& basis, const Vec2& base_momentum) {
  const LatticeSpec& lat = basis.lattice();
  const Vec2 base_shift = lat.dual_coords(lat.R * base_momentum - base_momentum);
  const double r1 = std::round(base_shift(0));
  const double r2 = std::round(base_shift(1));
  if (std::abs(base_shift(0) - r1) > 1e-9 || std::abs(base_shift(1) - r2) > 1e-9)
    throw InvalidArgument("rotate_index_map: R*base - base is not a dual lattice vector");

  RotationIndexMap map;
  map.shift = {static_cast<int>(r1), static_cast<int>(r2)};
  map.target.resize(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    // base + G' = R (base + G)  =>  G' = R G + (R base - base).
    const Vec2 g = lat.dual_coords(lat.R * basis.frequency(i)) + base_shift;
    const int m1 = static_cast<int>(std::lround(g(0)));
    const int m2 = static_cast<int>(std::lround(g(1)));
    map.target[i] = basis.index_of(m1, m2);
    if (!map.target[i]) map.lost.push_back(i);
  }
  return map;
}

}  // namespace hexwave
