// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

#include "hexwave/grid.hpp"
#include "hexwave/lattice.hpp"
#include "hexwave/medium.hpp"
#include "hexwave/types.hpp"

namespace hexwave {

// Fourier convention used throughout: f(x) = Σ_G f̂(G) e^{i(k+G).x} and
// <f, g>_{L²(Ω)} = |Ω| Σ_G conj(f̂(G)) ĝ(G).

struct BlochProblem {
  PeriodicMatrixField A;
  Vec2 k;
  PlaneWaveBasis basis;
};

// H_{G,G'} = (k+G)^T Â(G-G') (k+G'): the Galerkin matrix of -(∇+ik).(A(∇+ik)).
CMatrix assemble_bloch_matrix(const BlochProblem& problem);
// Same sesquilinear form for an arbitrary field (used for L^B).
CMatrix assemble_form_matrix(const PeriodicMatrixField& field, const PlaneWaveBasis& basis, const Vec2& k);

struct BlochMode {
  int band = 0;  // 1-based
  Vec2 k;
  double energy = 0.0;
  CVector coeffs;  // |Ω| Σ|c|² = 1
};

// Lowest n_bands eigenpairs, ascending. Each eigenvector's largest-magnitude
// coefficient is made real positive.
std::vector<BlochMode> solve_bands(const BlochProblem& problem, int n_bands);

double mode_residual(const BlochProblem& problem, const BlochMode& mode);

struct BandStructure {
  std::vector<Vec2> k_path;
  Eigen::MatrixXd energies;  // (k index, band)
  std::vector<std::vector<BlochMode>> modes;  // empty unless requested
  // max over bands and adjacent k of |ΔE| / |Δk|
  double lipschitz_estimate = 0.0;
};

BandStructure sweep_path(const PeriodicMatrixField& A, const std::vector<Vec2>& path, int n_bands,
                         int truncation, int workers = 1, bool keep_modes = false);

// Γ -> K -> M -> Γ with `points_per_segment` samples per leg (endpoints shared).
std::vector<Vec2> default_band_path(const LatticeSpec& lattice, int points_per_segment);

// Bloch decomposition of a field on the P x P supercell grid (origin 0,
// P n points per side). Quasimomenta are k = (j1 k1 + j2 k2) / P with
// j in [-P/2, P/2)^2, i.e. the commensurate points of the parallelogram Ω*.
struct BlochDecomposition {
  int P = 0;
  int points_per_cell = 0;
  PlaneWaveBasis basis;
  std::vector<Vec2> k_points;
  std::vector<std::array<int, 2>> k_indices;
  std::vector<std::vector<BlochMode>> modes;  // per k
  CMatrix coefficients;                       // f̃_b(k): (k index, band index)

  // (1 / P²) Σ_k Σ_b |f̃_b(k)|², the discrete form of (1/|Ω*|) Σ_b ∫ |f̃_b|² dk.
  double parseval_sum() const;
};

// n_bands <= 0 keeps every band of the basis (exact completeness).
BlochDecomposition bloch_decompose(std::span<const cplx> f, const PeriodicMatrixField& A, int P,
                                   int points_per_cell, int n_bands = 0, int workers = 1);
ComplexGrid bloch_reconstruct(const BlochDecomposition& d);

// (|D| Σ_q (1 + |q|²)^s |f̂(q)|²)^{1/2} on the grid's periodic domain D. This flat
// Fourier norm is equivalent, not equal, to the Bloch-side <(1+L^A)^s f, f>^{1/2}.
double sobolev_norm(const SpectralGrid& grid, std::span<const cplx> f, int s);

}  // namespace hexwave
