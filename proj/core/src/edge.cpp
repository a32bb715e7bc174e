// SPDX-License-Identifier: Apache-2.0
#include "hexwave/edge.hpp"

#include <algorithm>
#include <cmath>

#include "hexwave/error.hpp"
#include "hexwave/linalg.hpp"
#include "hexwave/parallel.hpp"

namespace hexwave {

double WallProfile::operator()(double zeta) const {
  return kind == Kind::Tanh ? kappa_inf * std::tanh(zeta) : kappa_inf;
}

double WallProfile::integral(double zeta) const {
  if (kind == Kind::Constant) return kappa_inf * zeta;
  // ln cosh ζ, written to avoid overflow for large |ζ|
  const double a = std::abs(zeta);
  return kappa_inf * (a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0));
}

namespace {

void validate(const EdgeProblem& p) {
  if (p.Kv.norm() == 0.0) throw InvalidArgument("edge problem: wall direction must be nonzero");
  if (!(p.L_zeta > 0.0) || p.n_zeta < 8) throw InvalidArgument("edge problem: need L_zeta > 0 and n_zeta >= 8");
  if (!std::isfinite(p.k_par)) throw InvalidArgument("edge problem: k_par must be finite");
}

}  // namespace

EdgeGrid edge_grid(const EdgeProblem& problem) {
  validate(problem);
  EdgeGrid g;
  g.h = problem.L_zeta / problem.n_zeta;
  const double z0 = -0.5 * problem.L_zeta;
  g.zeta1.resize(static_cast<std::size_t>(problem.n_zeta));
  g.zeta2.resize(static_cast<std::size_t>(problem.n_zeta));
  for (int j = 0; j < problem.n_zeta; ++j) {
    g.zeta1[static_cast<std::size_t>(j)] = z0 + (j + 0.25) * g.h;
    g.zeta2[static_cast<std::size_t>(j)] = z0 + (j + 0.75) * g.h;
  }
  return g;
}

CMatrix edge_operator_band(const EdgeProblem& problem, double c, double m) {
  const EdgeGrid g = edge_grid(problem);
  const int n = problem.n_zeta;
  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(n);
  CMatrix band = CMatrix::Zero(4, dim);
  const cplx p(-problem.Kv(1), problem.Kv(0));  // i𝕶1 - 𝕶2
  const double k = problem.k_par;
  // Row j of the comp2 -> comp1 block: offsets -2..1 relative to comp2 index j.
  const double d[4] = {1.0 / 24.0, -27.0 / 24.0, 27.0 / 24.0, -1.0 / 24.0};
  const double w[4] = {-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0};
  for (int j = 0; j < n; ++j) {
    const Eigen::Index r = 2 * static_cast<Eigen::Index>(j);
    band(0, r) = -m * problem.kappa(g.zeta1[static_cast<std::size_t>(j)]);
    band(0, r + 1) = m * problem.kappa(g.zeta2[static_cast<std::size_t>(j)]);
    for (int s = 0; s < 4; ++s) {
      const int jj = j + s - 2;
      if (jj < 0 || jj >= n) continue;
      const cplx h12 = c * p * (d[s] / g.h) - c * k * p * w[s];  // H(comp1 j, comp2 jj)
      const Eigen::Index col = 2 * static_cast<Eigen::Index>(jj) + 1;
      if (col < r) band(r - col, col) = h12;
      else band(col - r, r) = std::conj(h12);
    }
  }
  return band;
}

CMatrix edge_operator(const EdgeProblem& problem, double c, double m) {
  const CMatrix band = edge_operator_band(problem, c, m);
  const Eigen::Index n = band.cols();
  CMatrix h = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index d = 0; d < band.rows() && j + d < n; ++d) {
      h(j + d, j) = band(d, j);
      if (d > 0) h(j, j + d) = std::conj(band(d, j));
    }
  if (hermitian_defect(h) > 1e-12) throw InvariantViolation("edge_operator: assembled matrix is not Hermitian");
  return h;
}

CVector apply_band(const CMatrix& band, const CVector& x) {
  const Eigen::Index n = band.cols();
  if (x.size() != n) throw InvalidArgument("apply_band: size mismatch");
  CVector y = CVector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index d = 0; d < band.rows() && j + d < n; ++d) {
      y(j + d) += band(d, j) * x(j);
      if (d > 0) y(j) += std::conj(band(d, j)) * x(j + d);
    }
  return y;
}

double edge_norm(const CVector& beta, double h) { return std::sqrt(h) * beta.norm(); }

CVector zero_mode_analytic(const EdgeProblem& problem, double c, double m) {
  if (m == 0.0) throw InvalidArgument("zero_mode_analytic: the mass coefficient must be nonzero");
  if (!(c > 0.0)) throw InvalidArgument("zero_mode_analytic: c must be positive");
  if (problem.kappa.kind != WallProfile::Kind::Tanh || !(problem.kappa.kappa_inf > 0.0))
    throw InvalidArgument("zero_mode_analytic: profile is not a wall with positive asymptote; mode is not integrable");
  const EdgeGrid g = edge_grid(problem);
  const double kn = problem.Kv.norm();
  const double lambda = std::abs(m) / (c * kn);
  const cplx top(-problem.Kv(1) / kn, problem.Kv(0) / kn);
  const double bottom = m > 0.0 ? -1.0 : 1.0;
  CVector beta(2 * static_cast<Eigen::Index>(problem.n_zeta));
  for (int j = 0; j < problem.n_zeta; ++j) {
    beta(2 * j) = top * std::exp(-lambda * problem.kappa.integral(g.zeta1[static_cast<std::size_t>(j)]));
    beta(2 * j + 1) = bottom * std::exp(-lambda * problem.kappa.integral(g.zeta2[static_cast<std::size_t>(j)]));
  }
  beta /= edge_norm(beta, g.h);
  return beta;
}

EdgeSpectrum edge_dispersion_sweep(const EdgeProblem& problem, const std::vector<double>& k_par, double c, double m,
                                   int count, int workers) {
  if (count < 1) throw InvalidArgument("edge_dispersion_sweep: count must be positive");
  EdgeSpectrum out;
  out.k_par = k_par;
  out.gap_edge = std::abs(m * problem.kappa.kappa_inf);
  out.modes.resize(k_par.size());
  const EdgeGrid g = edge_grid(problem);
  const int dim = 2 * problem.n_zeta;
  const int lo = std::max(0, dim / 2 - count);
  const int hi = std::min(dim - 1, dim / 2 + count - 1);
  parallel_for(k_par.size(), workers, [&](std::size_t i) {
    EdgeProblem p = problem;
    p.k_par = k_par[i];
    const auto eig = banded_hermitian_eigen(edge_operator_band(p, c, m), lo, hi);
    std::vector<EdgeMode> modes;
    for (Eigen::Index e = 0; e < eig.values.size(); ++e) {
      EdgeMode md;
      md.k_par = k_par[i];
      md.mu = eig.values(e);
      md.beta = eig.vectors.col(e) / std::sqrt(g.h);
      const double peak = md.beta.cwiseAbs().maxCoeff();
      const double ends = std::max({std::abs(md.beta(0)), std::abs(md.beta(1)), std::abs(md.beta(dim - 2)),
                                    std::abs(md.beta(dim - 1))});
      md.decays = ends < 1e-6 * peak;
      md.in_gap = std::abs(md.mu) < out.gap_edge;
      modes.push_back(std::move(md));
    }
    std::stable_sort(modes.begin(), modes.end(),
                     [](const EdgeMode& a, const EdgeMode& b) { return std::abs(a.mu) < std::abs(b.mu); });
    if (modes.size() > static_cast<std::size_t>(count)) modes.resize(static_cast<std::size_t>(count));
    out.modes[i] = std::move(modes);
  });
  return out;
}

cplx interpolate_component(const CVector& beta, const EdgeGrid& grid, int component, double zeta) {
  const std::vector<double>& z = component == 0 ? grid.zeta1 : grid.zeta2;
  const auto n = static_cast<int>(z.size());
  const double s = (zeta - z[0]) / grid.h;
  const int j0 = static_cast<int>(std::floor(s));
  if (j0 < -1 || j0 > n - 1) return 0.0;
  const double t = s - j0;
  // Cubic Lagrange weights on nodes j0-1 .. j0+2 (offsets -1, 0, 1, 2).
  const double wts[4] = {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                         -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
  cplx v = 0.0;
  for (int k = 0; k < 4; ++k) {
    const int j = j0 - 1 + k;
    if (j < 0 || j >= n) continue;
    v += wts[k] * beta(2 * j + component);
  }
  return v;
}

EdgeEvolutionReport evolve_edge_state_2d(const Vec2& Kv, double k_par, double mu,
                                         const std::function<CVec2(double)>& beta, const WallProfile& kappa,
                                         double c, double m, const EdgeEvolutionOptions& o) {
  if (Kv.norm() == 0.0) throw InvalidArgument("evolve_edge_state_2d: wall direction must be nonzero");
  if (!(o.L_xi > 0.0) || !(o.L_zeta > 0.0) || o.n_xi < 1 || o.n_zeta < 2 || !(o.dT > 0.0) || o.T_end < 0.0)
    throw InvalidArgument("evolve_edge_state_2d: invalid box or time parameters");
  const double turns = k_par * o.L_xi / (2.0 * kPi);
  if (std::abs(turns - std::round(turns)) > 1e-9)
    throw InvalidArgument("evolve_edge_state_2d: k_par is not commensurate with the xi period");
  const double steps_real = o.T_end / o.dT;
  const int steps = static_cast<int>(std::llround(steps_real));
  if (std::abs(steps_real - steps) > 1e-9 * std::max(1.0, steps_real))
    throw InvalidArgument("evolve_edge_state_2d: T_end must be a multiple of dT");

  // Rows of M are 𝕶⊥ and 𝕶, so (ξ, ζ) = M X.
  Mat2 M;
  M << -Kv(1), Kv(0), Kv(0), Kv(1);
  const Mat2 Mi = M.inverse();
  const SpectralGrid grid(Mi * Vec2(-0.5 * o.L_xi, -0.5 * o.L_zeta), Mi * Vec2(o.L_xi, 0.0), Mi * Vec2(0.0, o.L_zeta),
                          o.n_xi, o.n_zeta);
  SlowModulation km = kappa.kind == WallProfile::Kind::Tanh ? SlowModulation(TanhWallKappa{Kv, kappa.kappa_inf})
                                                            : SlowModulation(ConstantKappa{kappa.kappa_inf});
  const DiracParams params{c, m, km};

  const double half = 0.5 * o.L_zeta;
  const double flat = o.window * half;
  EnvelopeField field(grid);
  field.fill([&](const Vec2& X) {
    const Vec2 xz = M * X;
    const double az = std::abs(xz(1));
    double win = 1.0;
    if (az > flat) {
      const double s = std::min(1.0, (az - flat) / (half - flat));
      win = 0.5 * (1.0 + std::cos(kPi * s));
    }
    return CVec2(win * std::exp(kI * k_par * xz(0)) * beta(xz(1)));
  });
  const EnvelopeField initial = field;
  const DiracStepper stepper(grid, params, o.dT);
  stepper.advance(field, steps);

  const cplx ph = std::exp(-kI * mu * o.T_end);
  ComplexGrid d1(grid.size()), d2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    d1[i] = field.alpha1[i] - ph * initial.alpha1[i];
    d2[i] = field.alpha2[i] - ph * initial.alpha2[i];
  }
  const double num = std::hypot(l2_norm(grid, d1), l2_norm(grid, d2));
  const double m0 = initial.mass();
  EdgeEvolutionReport rep;
  rep.relative_deviation = m0 > 0.0 ? num / std::sqrt(m0) : 0.0;
  rep.mass_drift = m0 > 0.0 ? std::abs(field.mass() - m0) / m0 : 0.0;
  return rep;
}

}  // namespace hexwave
