// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hexwave/types.hpp"

namespace hexwave {

// Triangular lattice Λ = Z v1 + Z v2 with dual Λ* = Z k1 + Z k2,
// k_i . v_j = 2π δ_ij. K and Kp = -K are the honeycomb high-symmetry points,
// R is the 2π/3 clockwise rotation.
struct LatticeSpec {
  Vec2 v1, v2;
  Vec2 k1, k2;
  Vec2 K, Kp;
  double cell_area = 0.0;
  Mat2 R;

  Vec2 point(double u1, double u2) const { return u1 * v1 + u2 * v2; }
  Vec2 dual_point(double m1, double m2) const { return m1 * k1 + m2 * k2; }
  // Coordinates of q in the (k1, k2) basis.
  Vec2 dual_coords(const Vec2& q) const;
  // Coordinates of x in the (v1, v2) basis.
  Vec2 lattice_coords(const Vec2& x) const;
  double dual_cell_area() const;
  // Distance from q to the nearest point of p + Λ*.
  double dual_distance(const Vec2& q, const Vec2& p) const;
};

LatticeSpec make_triangular_lattice();

struct MillerIndex {
  int m1 = 0;
  int m2 = 0;
  bool operator==(const MillerIndex&) const = default;
};

// Square truncation |m1|, |m2| <= M of the dual lattice, ordered
// lexicographically in (m1, m2).
class PlaneWaveBasis {
 public:
  PlaneWaveBasis(LatticeSpec lattice, int truncation);

  int truncation() const { return truncation_; }
  std::size_t size() const { return indices_.size(); }
  const MillerIndex& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<MillerIndex>& indices() const { return indices_; }
  const LatticeSpec& lattice() const { return lattice_; }

  std::optional<std::size_t> index_of(int m1, int m2) const;
  std::optional<std::size_t> index_of(MillerIndex m) const { return index_of(m.m1, m.m2); }
  Vec2 frequency(std::size_t i) const;
  // Position of -G for the entry at position i (always inside a square truncation).
  std::size_t negated(std::size_t i) const;

 private:
  LatticeSpec lattice_;
  int truncation_;
  std::vector<MillerIndex> indices_;
};

// Result of transporting a quasi-periodic coefficient vector through x -> R* x.
// target[i] is the position G' with base + G' = R (base + G), or nullopt when
// G' falls outside the truncation; lost lists those i.
struct RotationIndexMap {
  std::vector<std::optional<std::size_t>> target;
  std::vector<std::size_t> lost;
  MillerIndex shift;  // R base - base in dual coordinates
};

RotationIndexMap rotate_index_map(const PlaneWaveBasis& basis, const Vec2& base_momentum);

}  // namespace hexwave
