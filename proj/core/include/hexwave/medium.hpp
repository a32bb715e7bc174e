// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hexwave/grid.hpp"
#include "hexwave/lattice.hpp"
#include "hexwave/types.hpp"

namespace hexwave {

// Λ-periodic 2x2 matrix field A(x) = Σ_G Â(G) e^{iG.x} with finite Fourier
// support. Construction enforces Â(G) = Â(-G)^† exactly, so A is Hermitian
// pointwise.
class PeriodicMatrixField {
 public:
  // Inputs violating Hermitian symmetry by more than `tolerance` are rejected.
  PeriodicMatrixField(PlaneWaveBasis basis, std::vector<CMat2> coeffs, double tolerance = 1e-12);
  static PeriodicMatrixField zero(const LatticeSpec& lattice);

  const PlaneWaveBasis& basis() const { return basis_; }
  const LatticeSpec& lattice() const { return basis_.lattice(); }
  const std::vector<CMat2>& coeffs() const { return coeffs_; }
  // Â(m); zero outside the stored support.
  CMat2 coeff(int m1, int m2) const;
  CMat2 evaluate(const Vec2& x) const;
  bool is_zero() const;

  // Max |Â(G) - Â(-G)^†| of the stored coefficients.
  double hermitian_symmetry_defect() const;

 private:
  PlaneWaveBasis basis_;
  std::vector<CMat2> coeffs_;
};

// a(x) I with a = 1 + δ (cos k1.x + cos k2.x + cos (k1+k2).x); requires |δ| < 1/3.
PeriodicMatrixField make_honeycomb_scalar_weight(double delta);

// Real even profile b(x) given as a truncated cosine series Σ_h b_h cos(G_h.x).
struct CosineProfile {
  struct Term {
    MillerIndex m;
    double amplitude;
  };
  std::vector<Term> terms;

  static CosineProfile constant(double value);
  static CosineProfile three_cosine();
};

// B(x) = delta_b b(x) σ2 with σ2 = [[0, -i], [i, 0]].
PeriodicMatrixField make_sigma2_weight(double delta_b, const CosineProfile& profile);
// Same, from explicit Fourier coefficients b̂(G) of b; rejects profiles with a
// non-real or odd part larger than 1e-12.
PeriodicMatrixField make_sigma2_weight(double delta_b, const PlaneWaveBasis& basis,
                                       const std::vector<cplx>& b_hat);

struct SymmetryReport {
  double hermiticity = 0.0;         // max ||A - A^†||
  double pc_invariance = 0.0;       // max ||conj(A(-x)) - A(x)||
  double rotation_equivariance = 0.0;  // max ||A(R* x) - R* A(x) R||
  double ellipticity = 0.0;         // min eigenvalue of the Hermitian part

  bool passes(double tol) const {
    return hermiticity < tol && pc_invariance < tol && rotation_equivariance < tol && ellipticity > 0.0;
  }
};

// Max-norm residuals over a uniform samples x samples grid of the unit cell.
SymmetryReport check_honeycomb_symmetries(const PeriodicMatrixField& a, int samples = 128);

// Slow modulation κ(X), real and bounded.
struct ConstantKappa {
  double value = 1.0;
};
// Σ_h [c_h cos(q_h.X) + s_h sin(q_h.X)], q_h = (h1 k1 + h2 k2) / period. Periodic
// under X -> X + period v_i.
struct FourierKappa {
  struct Term {
    MillerIndex h;
    double cos_amplitude = 0.0;
    double sin_amplitude = 0.0;
  };
  double period = 1.0;
  std::vector<Term> terms;
};
// κ∞ tanh(Kv . X).
struct TanhWallKappa {
  Vec2 wall_direction{0.0, 1.0};
  double kappa_inf = 1.0;
};
// κ∞ tanh(X2 - amplitude tanh(X1)).
struct CurvedWallKappa {
  double amplitude = 10.0;
  double kappa_inf = 1.0;
};

class SlowModulation {
 public:
  using Kind = std::variant<ConstantKappa, FourierKappa, TanhWallKappa, CurvedWallKappa>;

  SlowModulation() : kind_(ConstantKappa{0.0}) {}
  SlowModulation(Kind kind);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, Kind> && !std::is_same_v<std::decay_t<T>, SlowModulation> &&
             std::is_constructible_v<Kind, T>)
  SlowModulation(T&& k) : SlowModulation(Kind(std::forward<T>(k))) {}  // NOLINT(google-explicit-constructor)

  double operator()(const Vec2& X) const;
  const Kind& kind() const { return kind_; }
  bool is_constant() const { return std::holds_alternative<ConstantKappa>(kind_); }
  bool is_wall() const {
    return std::holds_alternative<TanhWallKappa>(kind_) || std::holds_alternative<CurvedWallKappa>(kind_);
  }
  // Upper bound on sup |κ|, exact for every kind.
  double sup_bound() const;
  // True if κ(ε x) is periodic on the supercell P v1, P v2.
  bool periodic_on_supercell(double epsilon, int P) const;

 private:
  Kind kind_;
};

// W_ε(x) = A(x) + ε κ(εx) B(x).
struct CompositeWeight {
  PeriodicMatrixField A;
  PeriodicMatrixField B;
  SlowModulation kappa;
  double epsilon = 0.0;

  CompositeWeight(PeriodicMatrixField a, PeriodicMatrixField b, SlowModulation k, double eps);

  CMat2 evaluate(const Vec2& x) const;
  // Largest ε keeping the ellipticity bound C1(A) - ε sup|κ| ||B||_∞ positive.
  static double epsilon_max(const PeriodicMatrixField& a, const PeriodicMatrixField& b,
                            const SlowModulation& kappa, int samples = 128);
};

// W_ε sampled on a spectral grid, stored per entry so that the wave operator can
// multiply componentwise.
struct GriddedWeight {
  ComplexGrid w11, w12, w21, w22;
  double max_eigenvalue = 0.0;
  double min_eigenvalue = 0.0;
  double max_hermitian_defect = 0.0;
};

// Samples W on the (P n)^2 lattice-coordinate grid of the P x P supercell.
// κ must be constant or supercell periodic.
GriddedWeight evaluate_weight_on_grid(const CompositeWeight& w, int P, int points_per_cell);
GriddedWeight evaluate_weight_on_grid(const CompositeWeight& w, const SpectralGrid& grid);

SpectralGrid supercell_grid(const LatticeSpec& lattice, int P, int points_per_cell);

}  // namespace hexwave
