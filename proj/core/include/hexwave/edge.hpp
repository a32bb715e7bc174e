// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "hexwave/envelope.hpp"
#include "hexwave/types.hpp"

namespace hexwave {

// κ(ζ) across a straight wall: kappa_inf tanh(ζ), or a constant (no wall).
struct WallProfile {
  enum class Kind { Tanh, Constant };
  Kind kind = Kind::Tanh;
  double kappa_inf = 1.0;

  double operator()(double zeta) const;
  // ∫_0^ζ κ(s) ds
  double integral(double zeta) const;
};

struct EdgeProblem {
  Vec2 Kv;  // wall direction 𝕶, ζ = 𝕶.X
  double k_par = 0.0;
  double L_zeta = 300.0;  // domain [-L/2, L/2]
  int n_zeta = 3000;      // cells; one unknown per component per cell
  WallProfile kappa;
};

// Staggered grid: component 1 at -L/2 + (j + 1/4)h, component 2 at -L/2 + (j + 3/4)h,
// h = L / n. Unknowns are interleaved (2j, 2j + 1).
struct EdgeGrid {
  double h = 0.0;
  std::vector<double> zeta1, zeta2;
};

EdgeGrid edge_grid(const EdgeProblem& problem);

// Lower band storage (kd = 3) of the discretized 𝓓(k∥):
// c[[0, p], [q, 0]]∂_ζ - c k∥[[0, p], [conj p, 0]] - m κ(ζ)σ3 with p = i𝕶1 - 𝕶2, q = i𝕶1 + 𝕶2,
// fourth-order staggered differences and zero boundary values.
CMatrix edge_operator_band(const EdgeProblem& problem, double c, double m);
// Dense form of the same matrix, for tests and small problems.
CMatrix edge_operator(const EdgeProblem& problem, double c, double m);
// y = D x using the band form.
CVector apply_band(const CMatrix& band, const CVector& x);

// β(ζ; 0) sampled on the staggered grid, interleaved and unit-normalized in L².
CVector zero_mode_analytic(const EdgeProblem& problem, double c, double m);

struct EdgeMode {
  double k_par = 0.0;
  double mu = 0.0;
  CVector beta;  // interleaved, Σ|β|² h = 1
  bool in_gap = false;
  bool decays = false;  // |β| at both ends < 1e-6 max |β|
};

struct EdgeSpectrum {
  std::vector<double> k_par;
  std::vector<std::vector<EdgeMode>> modes;  // per k∥, sorted by |μ|
  double gap_edge = 0.0;                     // |m| κ∞
};

// `count` eigenpairs closest to μ = 0 per k∥ (taken from the middle of the spectrum).
EdgeSpectrum edge_dispersion_sweep(const EdgeProblem& problem, const std::vector<double>& k_par, double c, double m,
                                   int count = 6, int workers = 1);

// L² norm of a staggered-grid field (both components).
double edge_norm(const CVector& beta, double h);
// Fourth-order interpolation of one component of an interleaved mode at ζ (zero outside).
cplx interpolate_component(const CVector& beta, const EdgeGrid& grid, int component, double zeta);

struct EdgeEvolutionOptions {
  double L_xi = 1.0;      // period along ξ = 𝕶⊥.X (in ξ units)
  int n_xi = 4;
  double L_zeta = 150.0;  // ζ extent of the periodic box
  int n_zeta = 512;
  double dT = 1e-2;
  double T_end = 10.0;
  double window = 0.8;  // fraction of the ζ half-width kept unwindowed
};

struct EdgeEvolutionReport {
  double relative_deviation = 0.0;  // ||α(T) - e^{-iμT}α(0)|| / ||α(0)||
  double mass_drift = 0.0;
};

// Evolves e^{ik∥ξ}β(ζ) with the 2D Dirac solver in a box aligned with the wall.
EdgeEvolutionReport evolve_edge_state_2d(const Vec2& Kv, double k_par, double mu,
                                         const std::function<CVec2(double)>& beta, const WallProfile& kappa,
                                         double c, double m, const EdgeEvolutionOptions& options);

}  // namespace hexwave
