// SPDX-License-Identifier: Apache-2.0
#include "hexwave/bloch.hpp"

#include <cmath>
#include <sstream>

#include "hexwave/error.hpp"
#include "hexwave/linalg.hpp"
#include "hexwave/parallel.hpp"

namespace hexwave {

namespace {

struct SupportEntry {
  MillerIndex m;
  CMat2 value;
};

std::vector<SupportEntry> support_of(const PeriodicMatrixField& field) {
  std::vector<SupportEntry> out;
  const auto& basis = field.basis();
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (!field.coeffs()[i].isZero(0.0)) out.push_back({basis[i], field.coeffs()[i]});
  return out;
}

void fix_phase(CVector& v) {
  Eigen::Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  const cplx c = v(best);
  if (std::abs(c) > 0.0) v *= std::conj(c) / std::abs(c);
}

std::string format_k(const Vec2& k) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << k(0) << ", " << k(1) << ")";
  return os.str();
}

}  // namespace

CMatrix assemble_form_matrix(const PeriodicMatrixField& field, const PlaneWaveBasis& basis, const Vec2& k) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMatrix h = CMatrix::Zero(n, n);
  const auto support = support_of(field);
  std::vector<Vec2> q(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) q[i] = k + basis.frequency(i);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const MillerIndex mi = basis[i];
    for (const auto& s : support) {
      const auto j = basis.index_of(mi.m1 - s.m.m1, mi.m2 - s.m.m2);
      if (!j) continue;
      const CVec2 right = s.value * q[*j].cast<cplx>();
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(*j)) += q[i].cast<cplx>().dot(right);
    }
  }
  return h;
}

CMatrix assemble_bloch_matrix(const BlochProblem& problem) {
  if (problem.basis.truncation() < 1) throw InvalidArgument("assemble_bloch_matrix: truncation M must be >= 1");
  return assemble_form_matrix(problem.A, problem.basis, problem.k);
}

std::vector<BlochMode> solve_bands(const BlochProblem& problem, int n_bands) {
  if (n_bands < 1 || static_cast<std::size_t>(n_bands) > problem.basis.size())
    throw InvalidArgument("solve_bands: n_bands must be in [1, basis size]");
  const CMatrix h = assemble_bloch_matrix(problem);
  HermitianEigenpairs eig;
  try {
    eig = hermitian_eigen_lowest(h, n_bands);
  } catch (const Error& e) {
    throw Error(std::string("Bloch eigensolve failed at k = ") + format_k(problem.k) + ": " + e.what());
  }
  const double scale = 1.0 / std::sqrt(problem.basis.lattice().cell_area);
  std::vector<BlochMode> modes;
  modes.reserve(static_cast<std::size_t>(n_bands));
  for (int b = 0; b < n_bands; ++b) {
    BlochMode m;
    m.band = b + 1;
    m.k = problem.k;
    m.energy = eig.values(b);
    m.coeffs = eig.vectors.col(b);
    fix_phase(m.coeffs);
    m.coeffs *= scale;
    modes.push_back(std::move(m));
  }
  return modes;
}

double mode_residual(const BlochProblem& problem, const BlochMode& mode) {
  const CMatrix h = assemble_bloch_matrix(problem);
  return (h * mode.coeffs - mode.energy * mode.coeffs).norm() * std::sqrt(problem.basis.lattice().cell_area);
}

BandStructure sweep_path(const PeriodicMatrixField& A, const std::vector<Vec2>& path, int n_bands,
                         int truncation, int workers, bool keep_modes) {
  if (path.empty()) throw InvalidArgument("sweep_path: path is empty");
  const PlaneWaveBasis basis(A.lattice(), truncation);
  BandStructure bs;
  bs.k_path = path;
  bs.energies.resize(static_cast<Eigen::Index>(path.size()), n_bands);
  std::vector<std::vector<BlochMode>> modes(path.size());
  parallel_for(path.size(), workers, [&](std::size_t i) {
    modes[i] = solve_bands(BlochProblem{A, path[i], basis}, n_bands);
  });
  for (std::size_t i = 0; i < path.size(); ++i)
    for (int b = 0; b < n_bands; ++b) bs.energies(static_cast<Eigen::Index>(i), b) = modes[i][b].energy;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double dk = (path[i] - path[i - 1]).norm();
    if (dk == 0.0) continue;
    for (int b = 0; b < n_bands; ++b) {
      const double jump = std::abs(bs.energies(static_cast<Eigen::Index>(i), b) -
                                   bs.energies(static_cast<Eigen::Index>(i - 1), b));
      bs.lipschitz_estimate = std::max(bs.lipschitz_estimate, jump / dk);
    }
  }
  if (keep_modes) bs.modes = std::move(modes);
  return bs;
}

std::vector<Vec2> default_band_path(const LatticeSpec& lattice, int points_per_segment) {
  if (points_per_segment < 1) throw InvalidArgument("default_band_path: need at least one point per segment");
  const Vec2 gamma = Vec2::Zero();
  const Vec2 m_point = 0.5 * lattice.k1;
  const std::array<Vec2, 4> corners = {gamma, lattice.K, m_point, gamma};
  std::vector<Vec2> path;
  for (std::size_t s = 0; s + 1 < corners.size(); ++s)
    for (int i = 0; i < points_per_segment; ++i)
      path.push_back(corners[s] + (static_cast<double>(i) / points_per_segment) * (corners[s + 1] - corners[s]));
  path.push_back(gamma);
  return path;
}

double BlochDecomposition::parseval_sum() const {
  return coefficients.squaredNorm() / (static_cast<double>(P) * P);
}

namespace {

// Signed supercell frequency of k + G, or nullopt when it lies outside the grid band.
std::optional<std::size_t> slot_for(const std::array<int, 2>& j0, const MillerIndex& m, int P, int N) {
  const int J1 = j0[0] + P * m.m1;
  const int J2 = j0[1] + P * m.m2;
  const int lo = -N / 2;
  const int hi = (N - 1) / 2;
  if (J1 < lo || J1 > hi || J2 < lo || J2 > hi) return std::nullopt;
  const int s1 = SpectralGrid::slot_of_frequency(J1, N);
  const int s2 = SpectralGrid::slot_of_frequency(J2, N);
  return static_cast<std::size_t>(s2) * static_cast<std::size_t>(N) + static_cast<std::size_t>(s1);
}

}  // namespace

BlochDecomposition bloch_decompose(std::span<const cplx> f, const PeriodicMatrixField& A, int P,
                                   int points_per_cell, int n_bands, int workers) {
  if (P < 1 || points_per_cell < 1) throw InvalidArgument("bloch_decompose: P and n must be positive");
  const int N = P * points_per_cell;
  if (f.size() != static_cast<std::size_t>(N) * static_cast<std::size_t>(N))
    throw InvalidArgument("bloch_decompose: field grid is not the (P n)^2 supercell grid");

  const LatticeSpec& lat = A.lattice();
  const SpectralGrid grid = supercell_grid(lat, P, points_per_cell);
  ComplexGrid fhat(f.begin(), f.end());
  Fft2d(grid).forward(fhat);

  BlochDecomposition d{P, points_per_cell, PlaneWaveBasis(lat, points_per_cell / 2 + 1), {}, {}, {}, {}};
  const int total_bands = static_cast<int>(d.basis.size());
  const int bands = n_bands <= 0 ? total_bands : std::min(n_bands, total_bands);
  for (int j2 = -P / 2; j2 < P - P / 2; ++j2) {
    for (int j1 = -P / 2; j1 < P - P / 2; ++j1) {
      d.k_indices.push_back({j1, j2});
      d.k_points.push_back(lat.dual_point(static_cast<double>(j1) / P, static_cast<double>(j2) / P));
    }
  }
  d.modes.resize(d.k_points.size());
  d.coefficients.resize(static_cast<Eigen::Index>(d.k_points.size()), bands);
  const double weight = static_cast<double>(P) * P * lat.cell_area;

  parallel_for(d.k_points.size(), workers, [&](std::size_t ik) {
    d.modes[ik] = solve_bands(BlochProblem{A, d.k_points[ik], d.basis}, bands);
    CVector local = CVector::Zero(static_cast<Eigen::Index>(d.basis.size()));
    for (std::size_t g = 0; g < d.basis.size(); ++g)
      if (const auto slot = slot_for(d.k_indices[ik], d.basis[g], P, N)) local(static_cast<Eigen::Index>(g)) = fhat[*slot];
    for (int b = 0; b < bands; ++b)
      d.coefficients(static_cast<Eigen::Index>(ik), b) = weight * d.modes[ik][b].coeffs.dot(local);
  });
  return d;
}

ComplexGrid bloch_reconstruct(const BlochDecomposition& d) {
  const int P = d.P;
  const int N = P * d.points_per_cell;
  ComplexGrid fhat(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), 0.0);
  const double inv = 1.0 / (static_cast<double>(P) * P);
  for (std::size_t ik = 0; ik < d.k_points.size(); ++ik) {
    CVector local = CVector::Zero(static_cast<Eigen::Index>(d.basis.size()));
    for (Eigen::Index b = 0; b < d.coefficients.cols(); ++b)
      local += d.coefficients(static_cast<Eigen::Index>(ik), b) * d.modes[ik][static_cast<std::size_t>(b)].coeffs;
    for (std::size_t g = 0; g < d.basis.size(); ++g)
      if (const auto slot = slot_for(d.k_indices[ik], d.basis[g], P, N)) fhat[*slot] += inv * local(static_cast<Eigen::Index>(g));
  }
  Fft2d(N, N).backward(fhat);
  return fhat;
}

double sobolev_norm(const SpectralGrid& grid, std::span<const cplx> f, int s) {
  if (s < 0) throw InvalidArgument("sobolev_norm: s must be non-negative");
  ComplexGrid fhat(f.begin(), f.end());
  Fft2d(grid).forward(fhat);
  double sum = 0.0;
  for (std::size_t idx = 0; idx < fhat.size(); ++idx) {
    const double q2 = grid.wavevector(idx).squaredNorm();
    sum += std::pow(1.0 + q2, s) * std::norm(fhat[idx]);
  }
  return std::sqrt(grid.area() * sum);
}

}  // namespace hexwave
