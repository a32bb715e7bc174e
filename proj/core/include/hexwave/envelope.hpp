// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hexwave/grid.hpp"
#include "hexwave/medium.hpp"
#include "hexwave/types.hpp"

namespace hexwave {

// i∂_T α1 = c(i∂_1 - ∂_2) α2 - m κ α1,  i∂_T α2 = c(i∂_1 + ∂_2) α1 + m κ α2.
struct DiracParams {
  double c = 1.0;
  double m = 1.0;
  SlowModulation kappa;
};

// Spinor envelope on a periodic slow-variable box.
struct EnvelopeField {
  SpectralGrid grid;
  ComplexGrid alpha1, alpha2;
  double T = 0.0;

  explicit EnvelopeField(SpectralGrid g);
  // Square box [-L/2, L/2)^2 with N points per side.
  static EnvelopeField square(double L, int N);

  double mass() const;  // ||α1||² + ||α2||²
  void fill(const std::function<CVec2(const Vec2&)>& f);
};

// Strang split-step propagator for a fixed grid, parameters and step. The mass
// phases and the kinetic propagator symbol are tabulated once.
class DiracStepper {
 public:
  DiracStepper(const SpectralGrid& grid, const DiracParams& params, double dT);

  double dT() const { return dT_; }
  // n Strang steps; adjacent mass half steps are fused.
  void advance(EnvelopeField& field, int n_steps) const;
  // Fraction of spectral mass on the outer 10% of the frequency box.
  double nyquist_fraction(const EnvelopeField& field) const;

 private:
  void mass_phase(EnvelopeField& f, bool half) const;
  void kinetic(EnvelopeField& f) const;

  SpectralGrid grid_;
  Fft2d fft_;
  double dT_;
  ComplexGrid half_phase_, full_phase_;  // e^{i m κ dT/2}, e^{i m κ dT}
  ComplexGrid k_diag_, k_12_, k_21_;     // exact 2x2 kinetic propagator per mode
};

// Exact propagator exp(-i H dT) of the constant-symbol operator H(ξ) = -c[[0, ξ1 + iξ2], [ξ1 - iξ2, 0]].
CMat2 kinetic_propagator(double c, const Vec2& xi, double dT);

struct EvolveReport {
  double initial_mass = 0.0;
  double final_mass = 0.0;
  double nyquist_fraction = 0.0;
  std::vector<std::string> warnings;
};

EvolveReport dirac_evolve(EnvelopeField& field, const DiracParams& params, double dT, int n_steps);

struct Figure1Options {
  double L = 200.0;
  int N = 1024;
  double dT = 0.05;
  std::vector<double> snapshot_times{0.0, 30.0, 60.0};
  double X1_start = -20.0;
  double c = 1.0;
  double m = 1.0;
  double curve_amplitude = 10.0;
  // +1: α20 = α10, -1: α20 = -α10, 0: the decaying zero-mode polarization for sign(m).
  int polarization = 0;
  double near_distance = 5.0;
};

struct Figure1Snapshot {
  double T = 0.0;
  ComplexGrid alpha1, alpha2;
  double mass = 0.0;
  double near_curve_fraction = 0.0;
  double boundary_fraction = 0.0;
};

struct Figure1Result {
  SpectralGrid grid;
  int polarization = 0;
  std::vector<Figure1Snapshot> snapshots;
  std::vector<Vec2> zero_curve;  // κ = 0 level set
  std::vector<std::string> warnings;
};

Figure1Result run_figure1(const Figure1Options& options);

// Fraction of |α|² within `distance` of the curve X2 = a tanh(X1).
double mass_near_curve(const EnvelopeField& field, double amplitude, double distance);
// Fraction of |α|² within `width` of the boundary of the box.
double boundary_mass_fraction(const EnvelopeField& field, double width);

}  // namespace hexwave
