// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "hexwave/dirac.hpp"
#include "hexwave/envelope.hpp"
#include "hexwave/grid.hpp"
#include "hexwave/medium.hpp"
#include "hexwave/types.hpp"

namespace hexwave {

// L ψ = -∇.(W∇ψ) with spectral gradient and divergence and pointwise products.
class WaveOperator {
 public:
  WaveOperator(SpectralGrid grid, GriddedWeight weight);

  const SpectralGrid& grid() const { return grid_; }
  const GriddedWeight& weight() const { return weight_; }
  void apply(std::span<const cplx> psi, std::span<cplx> out) const;
  // π / |q|max, the resolution length of the grid
  double h_min() const;
  // 0.5 h_min / √λmax(W)
  double dt_max() const;

 private:
  SpectralGrid grid_;
  GriddedWeight weight_;
  Fft2d fft_;
};

// Leapfrog state: ψ at the current and the previous time level.
struct WaveState {
  ComplexGrid psi, psi_prev;
  double t = 0.0;
  double dt = 0.0;
  long steps = 0;
  double energy = 0.0;          // discrete energy at the latest half step
  double initial_energy = 0.0;  // at t = dt/2
};

class Leapfrog {
 public:
  // Throws InvalidArgument if dt exceeds the operator's dt_max.
  Leapfrog(const WaveOperator& op, double dt);

  double dt() const { return dt_; }
  // ψ¹ from the second order Taylor expansion with ψ_tt = -Lψ.
  WaveState start(std::span<const cplx> psi0, std::span<const cplx> psi_t0) const;
  // Aborts with InvariantViolation if the relative energy drift exceeds `max_drift`.
  void advance(WaveState& s, long n_steps, double max_drift = 1e-6) const;

 private:
  const WaveOperator& op_;
  double dt_;
};

double relative_energy_drift(const WaveState& s);

// ε Σ_G Σ_ν c_G α̂(ν) e^{i(K + G + εν).x} on the supercell grid of P cells. The slow
// field lives on the box spanned by εP v1, εP v2 with at most P points per side.
// Requires P K to be a dual lattice point.
ComplexGrid synthesize_modulated(const SpectralGrid& fine, int P, const PlaneWaveBasis& basis, const Vec2& base,
                                 const CVector& c1, const ComplexGrid& alpha1, const CVector& c2,
                                 const ComplexGrid& alpha2, const SpectralGrid& slow, double epsilon);

SpectralGrid slow_grid_for(const LatticeSpec& lattice, int P, int n_slow, double epsilon);

// ψ(x, 0) = ε[α1(εx)Φ1 + α2(εx)Φ2], ∂_tψ = i√E_D ψ. Rejects envelopes with more than
// 1e-10 of their mass within `margin` slow units of the slow box boundary.
std::pair<ComplexGrid, ComplexGrid> make_wavepacket_initial(const DiracData& dirac, const EnvelopeField& alpha0,
                                                            double epsilon, const SpectralGrid& fine, int P,
                                                            double margin = 0.0);

// X[i][j] = -R ∂_{k_j}L^A(K) Φ_i, where R is the reduced resolvent of L^A(K) - E_D
// off the degenerate pair.
using CorrectorCoefficients = std::array<std::array<CVector, 2>, 2>;
CorrectorCoefficients first_order_correctors(const PeriodicMatrixField& A, const DiracData& dirac);

// ε Σ_ij ε(-i∂_j α_i)(εx) X_ij(x): the first-order corrector slaved to the envelope.
ComplexGrid synthesize_corrector(const CorrectorCoefficients& X, const DiracData& dirac, const EnvelopeField& alpha,
                                 double epsilon, const SpectralGrid& fine, int P);

struct ResidualNorms {
  ComplexGrid eta;
  double h0 = 0.0;
  double h1 = 0.0;
};

// η = ψ - e^{i√E_D t} ε[α1(εx, εt)Φ1 + α2(εx, εt)Φ2].
ResidualNorms extract_residual(std::span<const cplx> psi, double t, const EnvelopeField& alpha, const DiracData& dirac,
                               double epsilon, const SpectralGrid& fine, int P);

struct ScalingConfig {
  std::vector<double> epsilons{0.2, 0.1};
  double rho = 0.5;
  int s = 0;  // Sobolev index used for the fit (0 or 1)
  double nu = 0.0;
  int P0 = 36;  // slow box side; P = P0 / ε cells, rounded up to a multiple of 3
  int n = 8;  // grid points per cell side
  double dt_factor = 0.2;
  int checkpoints = 10;
  bool massless = false;
  SlowModulation kappa{ConstantKappa{1.0}};
  double envelope_width = 3.0;  // α10 = α20 = exp(-|X - Xc|² / width²)
  double slow_dT = 5e-3;        // upper bound on the envelope step
  // Adds the first-order corrector to ψ(0). η is still measured against the leading-order ansatz.
  bool well_prepared = false;
  double memory_budget_bytes = 4.0e9;
  int workers = 1;
};

struct ResidualSample {
  double t = 0.0;
  double h0 = 0.0;
  double h1 = 0.0;
  double energy = 0.0;
};

struct ScalingRow {
  double epsilon = 0.0;
  int P = 0;
  int N = 0;
  int N_slow = 0;
  double dt = 0.0;
  long steps = 0;
  double t_end = 0.0;
  double psi_norm = 0.0;
  double initial_residual = 0.0;
  double sup_h0 = 0.0;
  double sup_h1 = 0.0;
  double energy_drift = 0.0;
  std::vector<ResidualSample> series;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  bool has_fit = false;
  double slope_h0 = 0.0;
  double slope_h1 = 0.0;
  bool monotone = false;  // sup ||η||_{H^s} decreases with ε
};

// Supercell size for ε: ceil(P0 / ε) rounded up to a multiple of 3 (so that P K ∈ Λ*).
int supercell_size(int P0, double epsilon);
// Rough peak memory of one run, in bytes.
double estimated_run_bytes(int P, int n);

ScalingResult run_scaling_experiment(const PeriodicMatrixField& A, const PeriodicMatrixField& B, const DiracData& dirac,
                                     const ScalingConfig& config);

}  // namespace hexwave
