// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "hexwave/bloch.hpp"
#include "hexwave/lattice.hpp"
#include "hexwave/medium.hpp"
#include "hexwave/types.hpp"

namespace hexwave {

// Two-fold degenerate eigenspace of L^A(K).
struct DiracEigenspace {
  PlaneWaveBasis basis;
  Vec2 K;
  int b_star = 0;  // 1-based; the pair is (b_star, b_star + 1)
  double E_D = 0.0;
  double relative_gap = 0.0;
  double gap_margin = 0.0;  // min over the other computed bands of |E_b(K) - E_D|
  Eigen::VectorXd energies;  // all computed energies at K
  CVector u, w;              // orthonormal in L²(Ω)
};

// Scans the lowest `n_scan` eigenvalues at K for the first pair with relative gap
// below tol_deg. Throws InvariantViolation for no pair or a higher multiplicity.
DiracEigenspace find_dirac_point(const PeriodicMatrixField& A, int truncation, double tol_deg, int n_scan = 12);

struct GaugePair {
  CVector phi1, phi2;
  std::array<cplx, 2> rotation_eigenvalues;  // of the 2x2 action of R on the eigenspace
  double rotation_error = 0.0;    // distance of those eigenvalues from {τ, conj τ}
  double conjugate_residual = 0.0;  // distance of conj(Φ1(-x)) from the eigenspace
  bool swapped = false;
};

// Fixes Φ1 as the τ = e^{2πi/3} rotation eigenvector, Φ2(x) = conj(Φ1(-x)), and the
// phase so that <Φ1, 𝒜Φ2> = v_F (1, i) with v_F > 0.
GaugePair fix_gauge(const PlaneWaveBasis& basis, const Vec2& K, const CVector& u, const CVector& w,
                    const PeriodicMatrixField& A);

// Components of 𝒜Φ = (1/i)(A∇Φ + ∇.(AΦ)) for Φ = Σ c_G e^{i(k+G).x}, truncated to the basis.
std::array<CVector, 2> apply_current(const PeriodicMatrixField& A, const PlaneWaveBasis& basis, const Vec2& k,
                                     const CVector& c);
// <f, 𝒜g> as a 2-vector.
CVec2 current_inner(const PeriodicMatrixField& A, const PlaneWaveBasis& basis, const Vec2& k, const CVector& f,
                    const CVector& g);

struct CurrentIdentities {
  CVec2 a11, a12, a21, a22;  // <Φi, 𝒜Φj>
  double v_F = 0.0;
  // max deviation from a11 = a22 = 0, a12 = v_F (1, i), a21 = v_F (1, -i)
  double max_residual = 0.0;
};

CurrentIdentities compute_vf_inner(const PlaneWaveBasis& basis, const Vec2& K, const CVector& phi1,
                                   const CVector& phi2, const PeriodicMatrixField& A);

struct MassIdentities {
  cplx b11, b12, b21, b22;  // <Φi, L^B Φj>
  double theta_sharp = 0.0;
  // max of |Im b11|, |b11 + b22|, |b12|, |b21|
  double max_residual = 0.0;
  bool degenerate = false;  // |ϑ♯| < 1e-8
};

MassIdentities compute_theta_sharp(const PlaneWaveBasis& basis, const Vec2& K, const CVector& phi1,
                                   const CVector& phi2, const PeriodicMatrixField& B);

struct DiracData {
  DiracEigenspace point;
  GaugePair gauge;
  CurrentIdentities current;
  MassIdentities mass;
  double tol_deg = 0.0;
  double q0 = 0.0;

  const CVector& phi1() const { return gauge.phi1; }
  const CVector& phi2() const { return gauge.phi2; }
  double E_D() const { return point.E_D; }
  double v_F() const { return current.v_F; }
  double theta_sharp() const { return mass.theta_sharp; }
  // Coefficients of the envelope equation: v_F / (2√E_D) and ϑ♯ / (2√E_D).
  double kinetic_coefficient() const;
  double mass_coefficient() const;
};

struct DiracOptions {
  int truncation = 12;
  double tol_deg = 1e-6;
  int n_scan = 12;
  double q0_factor = 1e-2;  // q0 = q0_factor |K|
};

// find_dirac_point, fix_gauge and both identity sets.
DiracData analyze_dirac_point(const PeriodicMatrixField& A, const PeriodicMatrixField& B, const DiracOptions& options);

struct ConicalFit {
  std::vector<Vec2> directions;
  std::vector<double> radii;
  Eigen::MatrixXd e_plus, e_minus;  // (direction, radius) energies at K + rκ̂
  std::vector<double> slopes_plus, slopes_minus;  // linear coefficient of E_± - E_D
  std::vector<double> sum_linear;                 // linear coefficient of E_+ + E_- - 2E_D
  std::vector<double> small_radius_slopes;        // (E_+ - E_-) / 2r at the smallest radius
  Eigen::MatrixXd residual_plus, residual_minus;  // e_±(κ) = (E_± - E_D) / (±v_F r) - 1
  double residual_constant = 0.0;                 // max |e_±| / r
  double max_fit_residual = 0.0;
};

// Throws InvariantViolation ("not conical") if a linear + quadratic model misses
// the data by more than 1e-2 v_F max(radii) or a slope is not positive.
ConicalFit conical_fit(const PeriodicMatrixField& A, const DiracData& dirac, const std::vector<double>& radii,
                       const std::vector<Vec2>& directions, int workers = 1);

struct ModeExpansionReport {
  Vec2 kappa;
  double overlap_plus = 0.0;  // |<predicted, computed>| for the upper band
  double overlap_minus = 0.0;
  // Phase-aligned L² distance √(2 - 2|<predicted, computed>|), max over both bands.
  double deficit = 0.0;
};

ModeExpansionReport check_mode_expansion(const PeriodicMatrixField& A, const DiracData& dirac, const Vec2& kappa);

// min over sampled k with |k - K| <= q1 and bands outside the pair of |E_b(k) - E_D|.
double isolation_margin(const PeriodicMatrixField& A, const DiracData& dirac, double q1, int rings = 4,
                        int per_ring = 12, int workers = 1);

nlohmann::json to_json(const DiracData& d);
nlohmann::json to_json(const ConicalFit& fit);

}  // namespace hexwave
