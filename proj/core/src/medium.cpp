// SPDX-License-Identifier: Apache-2.0
#include "hexwave/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "hexwave/error.hpp"

namespace hexwave {

namespace {

const CMat2& sigma2() {
  static const CMat2 s = [] {
    CMat2 m;
    m << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
    return m;
  }();
  return s;
}

double min_hermitian_eigenvalue(const CMat2& w) {
  const CMat2 h = 0.5 * (w + w.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat2> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_hermitian_eigenvalue(const CMat2& w) {
  const CMat2 h = 0.5 * (w + w.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat2> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1);
}

double spectral_norm(const CMat2& w) {
  Eigen::JacobiSVD<CMat2> svd(w);
  return svd.singularValues()(0);
}

}  // namespace

PeriodicMatrixField::PeriodicMatrixField(PlaneWaveBasis basis, std::vector<CMat2> coeffs, double tolerance)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != basis_.size())
    throw InvalidArgument("PeriodicMatrixField: coefficient count does not match basis");
  if (hermitian_symmetry_defect() > tolerance)
    throw InvalidArgument("PeriodicMatrixField: coefficients violate Â(G) = Â(-G)^† (field not Hermitian)");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const std::size_t j = basis_.negated(i);
    if (j < i) continue;
    const CMat2 sym = 0.5 * (coeffs_[i] + coeffs_[j].adjoint());
    coeffs_[i] = sym;
    coeffs_[j] = sym.adjoint();
  }
}

PeriodicMatrixField PeriodicMatrixField::zero(const LatticeSpec& lattice) {
  PlaneWaveBasis basis(lattice, 0);
  return PeriodicMatrixField(basis, {CMat2::Zero()});
}

CMat2 PeriodicMatrixField::coeff(int m1, int m2) const {
  const auto i = basis_.index_of(m1, m2);
  return i ? coeffs_[*i] : CMat2::Zero();
}

CMat2 PeriodicMatrixField::evaluate(const Vec2& x) const {
  CMat2 sum = CMat2::Zero();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].isZero(0.0)) continue;
    sum += coeffs_[i] * std::exp(kI * basis_.frequency(i).dot(x));
  }
  return sum;
}

bool PeriodicMatrixField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const CMat2& c) { return c.isZero(0.0); });
}

double PeriodicMatrixField::hermitian_symmetry_defect() const {
  double defect = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    defect = std::max(defect, (coeffs_[i] - coeffs_[basis_.negated(i)].adjoint()).cwiseAbs().maxCoeff());
  return defect;
}

PeriodicMatrixField make_honeycomb_scalar_weight(double delta) {
  if (!(std::abs(delta) < 1.0 / 3.0))
    throw InvalidArgument("honeycomb weight: |delta| must be < 1/3 for ellipticity");
  PlaneWaveBasis basis(make_triangular_lattice(), 1);
  std::vector<CMat2> coeffs(basis.size(), CMat2::Zero());
  coeffs[*basis.index_of(0, 0)] = CMat2::Identity();
  // cos(G.x) = (e^{iG.x} + e^{-iG.x}) / 2 for G in {k1, k2, k1 + k2}.
  for (const MillerIndex m : {MillerIndex{1, 0}, MillerIndex{0, 1}, MillerIndex{1, 1}}) {
    coeffs[*basis.index_of(m.m1, m.m2)] += 0.5 * delta * CMat2::Identity();
    coeffs[*basis.index_of(-m.m1, -m.m2)] += 0.5 * delta * CMat2::Identity();
  }
  return PeriodicMatrixField(basis, std::move(coeffs));
}

CosineProfile CosineProfile::constant(double value) { return {{{{0, 0}, value}}}; }

CosineProfile CosineProfile::three_cosine() { return {{{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{1, 1}, 1.0}}}; }

PeriodicMatrixField make_sigma2_weight(double delta_b, const CosineProfile& profile) {
  int truncation = 0;
  for (const auto& t : profile.terms) truncation = std::max({truncation, std::abs(t.m.m1), std::abs(t.m.m2)});
  PlaneWaveBasis basis(make_triangular_lattice(), truncation);
  std::vector<cplx> b_hat(basis.size(), 0.0);
  for (const auto& t : profile.terms) {
    if (t.m.m1 == 0 && t.m.m2 == 0) {
      b_hat[*basis.index_of(0, 0)] += t.amplitude;
    } else {
      b_hat[*basis.index_of(t.m)] += 0.5 * t.amplitude;
      b_hat[*basis.index_of(-t.m.m1, -t.m.m2)] += 0.5 * t.amplitude;
    }
  }
  return make_sigma2_weight(delta_b, basis, b_hat);
}

PeriodicMatrixField make_sigma2_weight(double delta_b, const PlaneWaveBasis& basis,
                                       const std::vector<cplx>& b_hat) {
  if (b_hat.size() != basis.size()) throw InvalidArgument("sigma2 weight: coefficient count mismatch");
  // b real <=> b̂(-G) = conj b̂(G); b even <=> b̂(-G) = b̂(G). Both => b̂ real and symmetric.
  for (std::size_t i = 0; i < b_hat.size(); ++i) {
    const cplx other = b_hat[basis.negated(i)];
    if (std::abs(b_hat[i].imag()) > 1e-12 || std::abs(b_hat[i] - other) > 1e-12)
      throw InvalidArgument("sigma2 weight: profile b must be real and even");
  }
  std::vector<CMat2> coeffs(basis.size());
  for (std::size_t i = 0; i < b_hat.size(); ++i) coeffs[i] = delta_b * b_hat[i].real() * sigma2();
  return PeriodicMatrixField(basis, std::move(coeffs));
}

SymmetryReport check_honeycomb_symmetries(const PeriodicMatrixField& a, int samples) {
  const LatticeSpec& lat = a.lattice();
  const Mat2 r_star = lat.R.transpose();
  SymmetryReport rep;
  rep.ellipticity = std::numeric_limits<double>::infinity();
  auto norm = [](const CMat2& m) { return m.cwiseAbs().maxCoeff(); };
  for (int i1 = 0; i1 < samples; ++i1) {
    for (int i2 = 0; i2 < samples; ++i2) {
      const Vec2 x = lat.point(static_cast<double>(i1) / samples, static_cast<double>(i2) / samples);
      const CMat2 ax = a.evaluate(x);
      rep.hermiticity = std::max(rep.hermiticity, norm(ax - ax.adjoint()));
      rep.pc_invariance = std::max(rep.pc_invariance, norm(a.evaluate(-x).conjugate() - ax));
      const CMat2 rotated = r_star.cast<cplx>() * ax * lat.R.cast<cplx>();
      rep.rotation_equivariance = std::max(rep.rotation_equivariance, norm(a.evaluate(r_star * x) - rotated));
      rep.ellipticity = std::min(rep.ellipticity, min_hermitian_eigenvalue(ax));
    }
  }
  return rep;
}

SlowModulation::SlowModulation(Kind kind) : kind_(std::move(kind)) {
  if (const auto* f = std::get_if<FourierKappa>(&kind_); f && !(f->period > 0.0))
    throw InvalidArgument("Fourier slow modulation: period must be positive");
  if (const auto* t = std::get_if<TanhWallKappa>(&kind_); t && t->wall_direction.norm() == 0.0)
    throw InvalidArgument("tanh wall: wall direction must be nonzero");
}

double SlowModulation::operator()(const Vec2& X) const {
  return std::visit(
      [&X](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantKappa>) {
          return k.value;
        } else if constexpr (std::is_same_v<T, FourierKappa>) {
          static const LatticeSpec lat = make_triangular_lattice();
          double s = 0.0;
          for (const auto& t : k.terms) {
            const double phase = lat.dual_point(t.h.m1, t.h.m2).dot(X) / k.period;
            s += t.cos_amplitude * std::cos(phase) + t.sin_amplitude * std::sin(phase);
          }
          return s;
        } else if constexpr (std::is_same_v<T, TanhWallKappa>) {
          return k.kappa_inf * std::tanh(k.wall_direction.dot(X));
        } else {
          return k.kappa_inf * std::tanh(X(1) - k.amplitude * std::tanh(X(0)));
        }
      },
      kind_);
}

double SlowModulation::sup_bound() const {
  return std::visit(
      [](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantKappa>) {
          return std::abs(k.value);
        } else if constexpr (std::is_same_v<T, FourierKappa>) {
          double s = 0.0;
          for (const auto& t : k.terms) s += std::hypot(t.cos_amplitude, t.sin_amplitude);
          return s;
        } else {
          return std::abs(k.kappa_inf);
        }
      },
      kind_);
}

bool SlowModulation::periodic_on_supercell(double epsilon, int P) const {
  if (is_constant()) return true;
  if (const auto* f = std::get_if<FourierKappa>(&kind_)) {
    const double ratio = epsilon * P / f->period;
    return std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1.0;
  }
  return false;
}

CompositeWeight::CompositeWeight(PeriodicMatrixField a, PeriodicMatrixField b, SlowModulation k, double eps)
    : A(std::move(a)), B(std::move(b)), kappa(std::move(k)), epsilon(eps) {
  if (epsilon < 0.0) throw InvalidArgument("composite weight: epsilon must be non-negative");
}

CMat2 CompositeWeight::evaluate(const Vec2& x) const {
  CMat2 w = A.evaluate(x);
  if (epsilon != 0.0 && !B.is_zero()) w += epsilon * kappa(epsilon * x) * B.evaluate(x);
  return w;
}

double CompositeWeight::epsilon_max(const PeriodicMatrixField& a, const PeriodicMatrixField& b,
                                    const SlowModulation& kappa, int samples) {
  const LatticeSpec& lat = a.lattice();
  double c1 = std::numeric_limits<double>::infinity();
  double b_sup = 0.0;
  for (int i1 = 0; i1 < samples; ++i1) {
    for (int i2 = 0; i2 < samples; ++i2) {
      const Vec2 x = lat.point(static_cast<double>(i1) / samples, static_cast<double>(i2) / samples);
      c1 = std::min(c1, min_hermitian_eigenvalue(a.evaluate(x)));
      b_sup = std::max(b_sup, spectral_norm(b.evaluate(x)));
    }
  }
  const double denom = kappa.sup_bound() * b_sup;
  if (c1 <= 0.0) return 0.0;
  return denom > 0.0 ? c1 / denom : std::numeric_limits<double>::infinity();
}

SpectralGrid supercell_grid(const LatticeSpec& lattice, int P, int points_per_cell) {
  if (P < 1 || points_per_cell < 1) throw InvalidArgument("supercell: P and n must be positive");
  return SpectralGrid(Vec2::Zero(), P * lattice.v1, P * lattice.v2, P * points_per_cell, P * points_per_cell);
}

GriddedWeight evaluate_weight_on_grid(const CompositeWeight& w, int P, int points_per_cell) {
  if (!w.kappa.periodic_on_supercell(w.epsilon, P) && w.epsilon != 0.0 && !w.B.is_zero())
    throw InvalidArgument(
        "evaluate_weight_on_grid: kappa must be constant or periodic on the supercell "
        "(tanh walls are not compatible with a periodic supercell)");
  return evaluate_weight_on_grid(w, supercell_grid(w.A.lattice(), P, points_per_cell));
}

GriddedWeight evaluate_weight_on_grid(const CompositeWeight& w, const SpectralGrid& grid) {
  GriddedWeight out;
  const std::size_t n = grid.size();
  out.w11.resize(n);
  out.w12.resize(n);
  out.w21.resize(n);
  out.w22.resize(n);
  out.max_eigenvalue = -std::numeric_limits<double>::infinity();
  out.min_eigenvalue = std::numeric_limits<double>::infinity();

  for (std::size_t idx = 0; idx < n; ++idx) {
    const Vec2 x = grid.point(idx);
    const CMat2 m = w.evaluate(x);
    out.w11[idx] = m(0, 0);
    out.w12[idx] = m(0, 1);
    out.w21[idx] = m(1, 0);
    out.w22[idx] = m(1, 1);
    out.max_hermitian_defect = std::max(out.max_hermitian_defect, (m - m.adjoint()).cwiseAbs().maxCoeff());
    out.max_eigenvalue = std::max(out.max_eigenvalue, max_hermitian_eigenvalue(m));
    out.min_eigenvalue = std::min(out.min_eigenvalue, min_hermitian_eigenvalue(m));
  }
  return out;
}

}  // namespace hexwave
