// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <random>

#include "hexwave/bloch.hpp"
#include "hexwave/error.hpp"
#include "hexwave/linalg.hpp"

using namespace hexwave;

namespace {

std::vector<double> free_energies(const LatticeSpec& lat, const Vec2& k, int M) {
  std::vector<double> e;
  for (int m1 = -M; m1 <= M; ++m1)
    for (int m2 = -M; m2 <= M; ++m2) e.push_back((k + lat.dual_point(m1, m2)).squaredNorm());
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_CASE("free medium bands are |k + G|^2") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.0);
  const LatticeSpec& lat = A.lattice();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 4; ++trial) {
    const Vec2 k = lat.dual_point(u(rng), u(rng));
    const PlaneWaveBasis basis(lat, 6);
    const auto modes = solve_bands({A, k, basis}, 10);
    const auto exact = free_energies(lat, k, 6);
    for (int b = 0; b < 10; ++b) CHECK(std::abs(modes[b].energy - exact[b]) < 1e-10 * (1 + exact[b]));
  }
}

TEST_CASE("Bloch matrix is Hermitian and modes are normalized") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const BlochProblem p{A, A.lattice().K, PlaneWaveBasis(A.lattice(), 8)};
  const CMatrix h = assemble_bloch_matrix(p);
  CHECK(hermitian_defect(h) < 1e-15 * h.cwiseAbs().maxCoeff());
  const auto modes = solve_bands(p, 4);
  for (const auto& m : modes) {
    CHECK(A.lattice().cell_area * m.coeffs.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mode_residual(p, m) < 1e-9);
    CHECK(m.band >= 1);
  }
  for (std::size_t b = 1; b < modes.size(); ++b) CHECK(modes[b].energy >= modes[b - 1].energy);
  CHECK_THROWS_AS(solve_bands(p, 0), InvalidArgument);
}

TEST_CASE("zero is the ground state at k = 0 with a constant mode") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const PlaneWaveBasis basis(A.lattice(), 8);
  const auto modes = solve_bands({A, Vec2::Zero(), basis}, 2);
  CHECK(std::abs(modes[0].energy) < 1e-9);
  const std::size_t g0 = *basis.index_of(0, 0);
  double off = 0.0;
  for (std::size_t g = 0; g < basis.size(); ++g)
    if (g != g0) off = std::max(off, std::abs(modes[0].coeffs(static_cast<Eigen::Index>(g))));
  CHECK(off < 1e-6);
  CHECK(modes[1].energy > 1.0);
}

TEST_CASE("spectral convergence in the truncation") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const Vec2 K = A.lattice().K;
  const auto m8 = solve_bands({A, K, PlaneWaveBasis(A.lattice(), 8)}, 6);
  const auto m12 = solve_bands({A, K, PlaneWaveBasis(A.lattice(), 12)}, 6);
  for (int b = 0; b < 6; ++b) CHECK(std::abs(m8[b].energy - m12[b].energy) < 1e-8);
}

TEST_CASE("band path sweep is continuous") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const auto path = default_band_path(A.lattice(), 10);
  CHECK(path.size() == 31);
  CHECK(path.front().norm() == 0.0);
  CHECK((path[10] - A.lattice().K).norm() < 1e-12);
  const BandStructure serial = sweep_path(A, path, 4, 6, 1);
  const BandStructure parallel = sweep_path(A, path, 4, 6, 3);
  CHECK((serial.energies - parallel.energies).norm() == 0.0);
  const double step = (path[1] - path[0]).norm();
  for (Eigen::Index i = 1; i < serial.energies.rows(); ++i)
    CHECK(std::abs(serial.energies(i, 0) - serial.energies(i - 1, 0)) < 10 * step * 2 * A.lattice().K.norm());
}

TEST_CASE("Bloch decomposition round trip and Parseval identity") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const int P = 3, n = 6;
  const SpectralGrid grid = supercell_grid(A.lattice(), P, n);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  ComplexGrid f(grid.size());
  for (auto& z : f) z = cplx(nd(rng), nd(rng));
  // keep only frequencies inside the symmetric band so that every slot is represented
  Fft2d(grid).forward(f);
  const int N = P * n;
  for (int i2 = 0; i2 < N; ++i2)
    for (int i1 = 0; i1 < N; ++i1)
      if (i1 == N / 2 || i2 == N / 2) f[grid.index(i1, i2)] = 0.0;
  Fft2d(grid).backward(f);

  const BlochDecomposition d = bloch_decompose(f, A, P, n);
  const double l2 = l2_norm(grid, f);
  CHECK(d.parseval_sum() == doctest::Approx(l2 * l2).epsilon(1e-10));
  const ComplexGrid back = bloch_reconstruct(d);
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(back[i] - f[i]));
  CHECK(err < 1e-10);
  CHECK_THROWS_AS(bloch_decompose(ComplexGrid(10), A, P, n), InvalidArgument);
}

TEST_CASE("flat Sobolev norm of a plane wave") {
  const LatticeSpec lat = make_triangular_lattice();
  const SpectralGrid grid = supercell_grid(lat, 2, 8);
  const Vec2 q = lat.k1 / 2.0;
  ComplexGrid f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(kI * q.dot(grid.point(i)));
  const double a = std::sqrt(grid.area());
  CHECK(sobolev_norm(grid, f, 0) == doctest::Approx(a).epsilon(1e-12));
  CHECK(sobolev_norm(grid, f, 1) == doctest::Approx(a * std::sqrt(1 + q.squaredNorm())).epsilon(1e-12));
}
