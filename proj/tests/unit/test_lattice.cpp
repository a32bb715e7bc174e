// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hexwave/lattice.hpp"

using namespace hexwave;

TEST_CASE("dual basis satisfies k_i . v_j = 2 pi delta_ij") {
  const LatticeSpec lat = make_triangular_lattice();
  CHECK(lat.k1.dot(lat.v1) == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(lat.k2.dot(lat.v2) == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(std::abs(lat.k1.dot(lat.v2)) < 1e-14);
  CHECK(std::abs(lat.k2.dot(lat.v1)) < 1e-14);
  CHECK(lat.cell_area == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
  CHECK(lat.k1.norm() == doctest::Approx(7.2552).epsilon(1e-4));
}

TEST_CASE("K is (k1 - k2)/3 and is mapped to itself modulo the dual lattice by R") {
  const LatticeSpec lat = make_triangular_lattice();
  CHECK((lat.K - Vec2(0.0, 4 * kPi / 3)).norm() < 1e-14);
  CHECK((lat.K - (lat.k1 - lat.k2) / 3.0).norm() < 1e-14);
  CHECK((lat.Kp + lat.K).norm() < 1e-14);
  CHECK(lat.dual_distance(lat.R * lat.K, lat.K) < 1e-12);
  CHECK(lat.dual_distance(lat.R * lat.Kp, lat.Kp) < 1e-12);
  // R is a rotation of order three
  const Mat2 r3 = lat.R * lat.R * lat.R;
  CHECK((r3 - Mat2::Identity()).norm() < 1e-14);
  CHECK(lat.R.determinant() == doctest::Approx(1.0));
}

TEST_CASE("coordinate maps invert the basis") {
  const LatticeSpec lat = make_triangular_lattice();
  const Vec2 x = lat.point(0.3, -1.7);
  CHECK((lat.lattice_coords(x) - Vec2(0.3, -1.7)).norm() < 1e-14);
  const Vec2 q = lat.dual_point(2.0, -5.0);
  CHECK((lat.dual_coords(q) - Vec2(2.0, -5.0)).norm() < 1e-13);
  CHECK(lat.dual_cell_area() * lat.cell_area == doctest::Approx(4 * kPi * kPi));
}

TEST_CASE("square plane-wave truncation") {
  const PlaneWaveBasis b(make_triangular_lattice(), 3);
  CHECK(b.size() == 49);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const auto j = b.index_of(b[i]);
    REQUIRE(j);
    CHECK(*j == i);
    const MillerIndex n = b[b.negated(i)];
    CHECK(n.m1 == -b[i].m1);
    CHECK(n.m2 == -b[i].m2);
  }
  CHECK_FALSE(b.index_of(4, 0));
}

TEST_CASE("rotation index map around K loses only truncation-boundary entries") {
  const LatticeSpec lat = make_triangular_lattice();
  const PlaneWaveBasis b(lat, 6);
  const RotationIndexMap map = rotate_index_map(b, lat.K);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!map.target[i]) continue;
    ++kept;
    const Vec2 lhs = lat.K + b.frequency(*map.target[i]);
    const Vec2 rhs = lat.R * (lat.K + b.frequency(i));
    CHECK((lhs - rhs).norm() < 1e-12);
  }
  CHECK(kept + map.lost.size() == b.size());
  for (std::size_t i : map.lost) CHECK(std::max(std::abs(b[i].m1), std::abs(b[i].m2)) >= 3);
  CHECK_THROWS(rotate_index_map(b, Vec2(0.1, 0.2)));
}
