// SPDX-License-Identifier: Apache-2.0
#include "hexwave/wave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hexwave/bloch.hpp"
#include "hexwave/error.hpp"
#include "hexwave/parallel.hpp"

namespace hexwave {

WaveOperator::WaveOperator(SpectralGrid grid, GriddedWeight weight)
    : grid_(std::move(grid)), weight_(std::move(weight)), fft_(grid_) {
  if (weight_.w11.size() != grid_.size()) throw InvalidArgument("WaveOperator: weight does not match the grid");
  if (!(weight_.min_eigenvalue > 0.0)) throw InvalidArgument("WaveOperator: weight is not elliptic on the grid");
}

void WaveOperator::apply(std::span<const cplx> psi, std::span<cplx> out) const {
  const std::size_t n = grid_.size();
  if (psi.size() != n || out.size() != n) throw InvalidArgument("WaveOperator::apply: size mismatch");
  ComplexGrid hat(psi.begin(), psi.end());
  ComplexGrid g1(n), g2(n);
  fft_.forward(hat);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 q = grid_.wavevector(i);
    g1[i] = kI * q(0) * hat[i];
    g2[i] = kI * q(1) * hat[i];
  }
  fft_.backward(g1);
  fft_.backward(g2);
  const GriddedWeight& w = weight_;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = g1[i];
    const cplx b = g2[i];
    g1[i] = w.w11[i] * a + w.w12[i] * b;
    g2[i] = w.w21[i] * a + w.w22[i] * b;
  }
  fft_.forward(g1);
  fft_.forward(g2);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 q = grid_.wavevector(i);
    out[i] = -kI * (q(0) * g1[i] + q(1) * g2[i]);
  }
  fft_.backward(out);
}

double WaveOperator::h_min() const { return kPi / grid_.max_wavenumber(); }

double WaveOperator::dt_max() const { return 0.5 * h_min() / std::sqrt(weight_.max_eigenvalue); }

Leapfrog::Leapfrog(const WaveOperator& op, double dt) : op_(op), dt_(dt) {
  if (!(dt > 0.0)) throw InvalidArgument("Leapfrog: dt must be positive");
  if (dt > op.dt_max() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "Leapfrog: dt = " << dt << " violates the stability bound dt_max = " << op.dt_max();
    throw InvalidArgument(os.str());
  }
}

WaveState Leapfrog::start(std::span<const cplx> psi0, std::span<const cplx> psi_t0) const {
  const std::size_t n = op_.grid().size();
  if (psi0.size() != n || psi_t0.size() != n) throw InvalidArgument("Leapfrog::start: size mismatch");
  ComplexGrid lpsi(n);
  op_.apply(psi0, lpsi);
  WaveState s;
  s.dt = dt_;
  s.psi_prev.assign(psi0.begin(), psi0.end());
  s.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.psi[i] = psi0[i] + dt_ * psi_t0[i] - 0.5 * dt_ * dt_ * lpsi[i];
  ComplexGrid diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = (s.psi[i] - s.psi_prev[i]) / dt_;
  const double kin = l2_norm(op_.grid(), diff);
  s.energy = kin * kin + inner_product(op_.grid(), s.psi, lpsi).real();
  s.initial_energy = s.energy;
  s.t = dt_;
  s.steps = 1;
  return s;
}

void Leapfrog::advance(WaveState& s, long n_steps, double max_drift) const {
  const std::size_t n = op_.grid().size();
  if (s.psi.size() != n || s.psi_prev.size() != n) throw InvalidArgument("Leapfrog::advance: state does not match grid");
  if (s.dt != dt_) throw InvalidArgument("Leapfrog::advance: state was started with a different dt");
  ComplexGrid lpsi(n), next(n), diff(n);
  const double dt2 = dt_ * dt_;
  for (long k = 0; k < n_steps; ++k) {
    op_.apply(s.psi, lpsi);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = 2.0 * s.psi[i] - s.psi_prev[i] - dt2 * lpsi[i];
      diff[i] = (next[i] - s.psi[i]) / dt_;
    }
    const double kin = l2_norm(op_.grid(), diff);
    s.energy = kin * kin + inner_product(op_.grid(), next, lpsi).real();
    std::swap(s.psi_prev, s.psi);
    std::swap(s.psi, next);
    ++s.steps;
    s.t = static_cast<double>(s.steps) * dt_;
    const double drift = relative_energy_drift(s);
    if (drift > max_drift) {
      std::ostringstream os;
      os << "Leapfrog: relative energy drift " << drift << " at t = " << s.t << " (step " << s.steps
         << ") exceeds " << max_drift << "; initial energy " << s.initial_energy;
      throw InvariantViolation(os.str());
    }
  }
}

double relative_energy_drift(const WaveState& s) {
  if (s.initial_energy == 0.0) return s.energy == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(s.energy - s.initial_energy) / std::abs(s.initial_energy);
}

SpectralGrid slow_grid_for(const LatticeSpec& lattice, int P, int n_slow, double epsilon) {
  if (P < 1 || n_slow < 1 || n_slow > P || !(epsilon > 0.0))
    throw InvalidArgument("slow_grid_for: need 1 <= n_slow <= P and epsilon > 0");
  return SpectralGrid(Vec2::Zero(), epsilon * P * lattice.v1, epsilon * P * lattice.v2, n_slow, n_slow);
}

ComplexGrid synthesize_modulated(const SpectralGrid& fine, int P, const PlaneWaveBasis& basis, const Vec2& base,
                                 const CVector& c1, const ComplexGrid& alpha1, const CVector& c2,
                                 const ComplexGrid& alpha2, const SpectralGrid& slow, double epsilon) {
  const LatticeSpec& lat = basis.lattice();
  const Vec2 kd = static_cast<double>(P) * lat.dual_coords(base);
  const int K1 = static_cast<int>(std::lround(kd(0)));
  const int K2 = static_cast<int>(std::lround(kd(1)));
  if (std::abs(kd(0) - K1) > 1e-9 || std::abs(kd(1) - K2) > 1e-9)
    throw InvalidArgument("synthesize_modulated: P K is not a dual lattice point (P must be a multiple of 3)");
  if (fine.n1() != fine.n2() || fine.n1() % P != 0)
    throw InvalidArgument("synthesize_modulated: fine grid is not a P-cell supercell grid");
  if (slow.n1() > P || slow.n2() > P || slow.size() != alpha1.size() || slow.size() != alpha2.size())
    throw InvalidArgument("synthesize_modulated: slow grid exceeds P points per side or does not match the data");
  const double tol = 1e-12 * epsilon * P;
  if ((slow.a1() - epsilon * fine.a1()).norm() > tol * fine.a1().norm() ||
      (slow.a2() - epsilon * fine.a2()).norm() > tol * fine.a2().norm() ||
      (slow.origin() - epsilon * fine.origin()).norm() > tol * fine.a1().norm())
    throw InvalidArgument("synthesize_modulated: slow box is not epsilon times the supercell");
  if (static_cast<std::size_t>(c1.size()) != basis.size() || static_cast<std::size_t>(c2.size()) != basis.size())
    throw InvalidArgument("synthesize_modulated: coefficient vectors do not match the basis");

  ComplexGrid a1(alpha1), a2(alpha2);
  const Fft2d slow_fft(slow);
  slow_fft.forward(a1);
  slow_fft.forward(a2);

  const int N = fine.n1();
  const int lo = -N / 2;
  const int hi = (N - 1) / 2;
  ComplexGrid out(fine.size(), 0.0);
  for (std::size_t g = 0; g < basis.size(); ++g) {
    const cplx w1 = epsilon * c1(static_cast<Eigen::Index>(g));
    const cplx w2 = epsilon * c2(static_cast<Eigen::Index>(g));
    if (w1 == 0.0 && w2 == 0.0) continue;
    const int base1 = P * basis[g].m1 + K1;
    const int base2 = P * basis[g].m2 + K2;
    for (int s2 = 0; s2 < slow.n2(); ++s2) {
      const int J2 = base2 + SpectralGrid::signed_frequency(s2, slow.n2());
      if (J2 < lo || J2 > hi) continue;
      for (int s1 = 0; s1 < slow.n1(); ++s1) {
        const int J1 = base1 + SpectralGrid::signed_frequency(s1, slow.n1());
        if (J1 < lo || J1 > hi) continue;
        const std::size_t si = slow.index(s1, s2);
        out[fine.index(SpectralGrid::slot_of_frequency(J1, N), SpectralGrid::slot_of_frequency(J2, N))] +=
            w1 * a1[si] + w2 * a2[si];
      }
    }
  }
  Fft2d(fine).backward(out);
  return out;
}

std::pair<ComplexGrid, ComplexGrid> make_wavepacket_initial(const DiracData& dirac, const EnvelopeField& alpha0,
                                                            double epsilon, const SpectralGrid& fine, int P,
                                                            double margin) {
  if (margin > 0.0) {
    const double tail = boundary_mass_fraction(alpha0, margin);
    if (tail > 1e-10) {
      std::ostringstream os;
      os << "make_wavepacket_initial: envelope is not supported inside the slow box (tail mass " << tail << ")";
      throw InvalidArgument(os.str());
    }
  }
  ComplexGrid psi = synthesize_modulated(fine, P, dirac.point.basis, dirac.point.K, dirac.phi1(), alpha0.alpha1,
                                         dirac.phi2(), alpha0.alpha2, alpha0.grid, epsilon);
  ComplexGrid psi_t(psi.size());
  const cplx w = kI * std::sqrt(dirac.E_D());
  for (std::size_t i = 0; i < psi.size(); ++i) psi_t[i] = w * psi[i];
  return {std::move(psi), std::move(psi_t)};
}

ResidualNorms extract_residual(std::span<const cplx> psi, double t, const EnvelopeField& alpha, const DiracData& dirac,
                               double epsilon, const SpectralGrid& fine, int P) {
  if (psi.size() != fine.size()) throw InvalidArgument("extract_residual: field does not match the supercell grid");
  ResidualNorms r;
  r.eta = synthesize_modulated(fine, P, dirac.point.basis, dirac.point.K, dirac.phi1(), alpha.alpha1, dirac.phi2(),
                               alpha.alpha2, alpha.grid, epsilon);
  const cplx ph = std::polar(1.0, std::sqrt(dirac.E_D()) * t);
  for (std::size_t i = 0; i < psi.size(); ++i) r.eta[i] = psi[i] - ph * r.eta[i];
  r.h0 = sobolev_norm(fine, r.eta, 0);
  r.h1 = sobolev_norm(fine, r.eta, 1);
  return r;
}

CorrectorCoefficients first_order_correctors(const PeriodicMatrixField& A, const DiracData& dirac) {
  const PlaneWaveBasis& basis = dirac.point.basis;
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(assemble_bloch_matrix({A, dirac.point.K, basis}));
  const Eigen::Index lo = dirac.point.b_star - 1;
  CorrectorCoefficients X;
  for (int i = 0; i < 2; ++i) {
    const auto cur = apply_current(A, basis, dirac.point.K, i == 0 ? dirac.phi1() : dirac.phi2());
    for (int j = 0; j < 2; ++j) {
      CVector proj = es.eigenvectors().adjoint() * cur[j];
      for (Eigen::Index b = 0; b < proj.size(); ++b)
        proj(b) = (b == lo || b == lo + 1) ? cplx(0.0) : proj(b) / (es.eigenvalues()(b) - dirac.E_D());
      X[i][j] = -(es.eigenvectors() * proj);
    }
  }
  return X;
}

ComplexGrid synthesize_corrector(const CorrectorCoefficients& X, const DiracData& dirac, const EnvelopeField& alpha,
                                 double epsilon, const SpectralGrid& fine, int P) {
  const Fft2d fft(alpha.grid);
  ComplexGrid out(fine.size(), 0.0);
  for (int i = 0; i < 2; ++i) {
    ComplexGrid hat = i == 0 ? alpha.alpha1 : alpha.alpha2;
    fft.forward(hat);
    std::array<ComplexGrid, 2> d{hat, hat};
    for (int j = 0; j < 2; ++j) {
      for (std::size_t s = 0; s < hat.size(); ++s) d[j][s] *= epsilon * alpha.grid.wavevector(s)(j);
      fft.backward(d[j]);
    }
    const ComplexGrid c = synthesize_modulated(fine, P, dirac.point.basis, dirac.point.K, X[i][0], d[0], X[i][1],
                                               d[1], alpha.grid, epsilon);
    for (std::size_t s = 0; s < out.size(); ++s) out[s] += c[s];
  }
  return out;
}

int supercell_size(int P0, double epsilon) {
  if (P0 < 1 || !(epsilon > 0.0)) throw InvalidArgument("supercell_size: need P0 >= 1 and epsilon > 0");
  int P = static_cast<int>(std::ceil(P0 / epsilon - 1e-9));
  P += (3 - P % 3) % 3;
  return P;
}

double estimated_run_bytes(int P, int n) {
  const double N = static_cast<double>(P) * n;
  // state, scratch, weight and residual arrays of complex doubles
  return 16.0 * 16.0 * N * N;
}

namespace {

ScalingRow run_one(const PeriodicMatrixField& A, const PeriodicMatrixField& B, const DiracData& dirac,
                   const ScalingConfig& cfg, double eps) {
  const LatticeSpec& lat = A.lattice();
  ScalingRow row;
  row.epsilon = eps;
  row.P = supercell_size(cfg.P0, eps);
  row.N = row.P * cfg.n;
  row.N_slow = row.P;
  const SpectralGrid fine = supercell_grid(lat, row.P, cfg.n);

  const SlowModulation kappa = cfg.massless ? SlowModulation(ConstantKappa{0.0}) : cfg.kappa;
  const CompositeWeight w(A, cfg.massless ? PeriodicMatrixField::zero(lat) : B, kappa, eps);
  const WaveOperator op(fine, evaluate_weight_on_grid(w, row.P, cfg.n));

  row.t_end = cfg.rho / eps;
  const double dt_nominal = cfg.dt_factor * op.h_min() / std::sqrt(op.weight().max_eigenvalue);
  long per_ck = static_cast<long>(std::ceil(row.t_end / (dt_nominal * cfg.checkpoints)));
  per_ck = std::max(per_ck, 2L);
  row.steps = per_ck * cfg.checkpoints;
  row.dt = row.t_end / static_cast<double>(row.steps);
  const Leapfrog lf(op, row.dt);

  EnvelopeField env(slow_grid_for(lat, row.P, row.N_slow, eps));
  const Vec2 centre = 0.5 * eps * row.P * (lat.v1 + lat.v2);
  const double wd2 = cfg.envelope_width * cfg.envelope_width;
  env.fill([&](const Vec2& X) {
    const cplx g = std::exp(-(X - centre).squaredNorm() / wd2);
    return CVec2(g, g);
  });
  const DiracParams params{dirac.kinetic_coefficient(), cfg.massless ? 0.0 : dirac.mass_coefficient(), kappa};
  const double dT_ck = cfg.rho / cfg.checkpoints;
  const int sub = std::max(1, static_cast<int>(std::ceil(dT_ck / cfg.slow_dT - 1e-9)));
  const DiracStepper stepper(env.grid, params, dT_ck / sub);

  const double margin = 0.1 * eps * row.P * lat.v1.norm();
  auto [psi0, psit0] = make_wavepacket_initial(dirac, env, eps, fine, row.P, margin);
  if (cfg.well_prepared) {
    const ComplexGrid corr = synthesize_corrector(first_order_correctors(A, dirac), dirac, env, eps, fine, row.P);
    const cplx w = kI * std::sqrt(dirac.E_D());
    for (std::size_t i = 0; i < corr.size(); ++i) {
      psi0[i] += corr[i];
      psit0[i] += w * corr[i];
    }
  }
  row.psi_norm = l2_norm(fine, psi0);
  const ResidualNorms r0 = extract_residual(psi0, 0.0, env, dirac, eps, fine, row.P);
  row.initial_residual = r0.h0;
  row.series.push_back({0.0, r0.h0, r0.h1, 0.0});

  WaveState st = lf.start(psi0, psit0);
  row.series.front().energy = st.initial_energy;
  for (int k = 1; k <= cfg.checkpoints; ++k) {
    lf.advance(st, k * per_ck - st.steps, 1e-6);
    stepper.advance(env, sub);
    env.T = eps * st.t;
    const ResidualNorms r = extract_residual(st.psi, st.t, env, dirac, eps, fine, row.P);
    row.series.push_back({st.t, r.h0, r.h1, st.energy});
    row.sup_h0 = std::max(row.sup_h0, r.h0);
    row.sup_h1 = std::max(row.sup_h1, r.h1);
  }
  row.energy_drift = relative_energy_drift(st);
  return row;
}

double fit_slope(const std::vector<ScalingRow>& rows, bool h1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    const double x = std::log(r.epsilon);
    const double y = std::log(h1 ? r.sup_h1 : r.sup_h0);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ScalingResult run_scaling_experiment(const PeriodicMatrixField& A, const PeriodicMatrixField& B, const DiracData& dirac,
                                     const ScalingConfig& cfg) {
  if (cfg.epsilons.empty()) throw InvalidArgument("run_scaling_experiment: no epsilon values");
  if (cfg.s != 0 && cfg.s != 1) throw InvalidArgument("run_scaling_experiment: s must be 0 or 1");
  if (!(cfg.rho > 0.0) || cfg.checkpoints < 1 || cfg.n < 2 || !(cfg.dt_factor > 0.0) || cfg.dt_factor > 0.5)
    throw InvalidArgument("run_scaling_experiment: invalid rho, checkpoints, n or dt_factor");
  if (!cfg.massless && !cfg.kappa.is_constant() && !std::holds_alternative<FourierKappa>(cfg.kappa.kind()))
    throw InvalidArgument("run_scaling_experiment: kappa must be constant or slow-torus periodic; domain walls are "
                          "incompatible with the periodic supercell");
  std::vector<double> feasible;
  std::vector<double> refused;
  for (double e : cfg.epsilons) {
    if (!(e > 0.0) || e >= 1.0) throw InvalidArgument("run_scaling_experiment: epsilon must lie in (0, 1)");
    (estimated_run_bytes(supercell_size(cfg.P0, e), cfg.n) <= cfg.memory_budget_bytes ? feasible : refused).push_back(e);
  }
  if (!refused.empty()) {
    std::ostringstream os;
    os << "run_scaling_experiment: memory budget " << cfg.memory_budget_bytes << " bytes exceeded for epsilon {";
    for (std::size_t i = 0; i < refused.size(); ++i) os << (i ? ", " : "") << refused[i];
    os << "}; feasible subset {";
    for (std::size_t i = 0; i < feasible.size(); ++i) os << (i ? ", " : "") << feasible[i];
    os << "}";
    throw ResourceRefusal(os.str());
  }
  const double eps_max =
      cfg.massless ? std::numeric_limits<double>::infinity() : CompositeWeight::epsilon_max(A, B, cfg.kappa);
  for (double e : cfg.epsilons) {
    if (e >= eps_max)
      throw InvalidArgument("run_scaling_experiment: epsilon " + std::to_string(e) +
                            " breaks ellipticity of W (epsilon_max = " + std::to_string(eps_max) + ")");
    if (!cfg.massless && !cfg.kappa.periodic_on_supercell(e, supercell_size(cfg.P0, e)))
      throw InvalidArgument("run_scaling_experiment: kappa is not periodic on the supercell for epsilon " +
                            std::to_string(e));
  }

  ScalingResult res;
  res.rows.resize(cfg.epsilons.size());
  parallel_for(cfg.epsilons.size(), cfg.workers,
               [&](std::size_t i) { res.rows[i] = run_one(A, B, dirac, cfg, cfg.epsilons[i]); });
  if (res.rows.size() >= 2) {
    res.has_fit = true;
    res.slope_h0 = fit_slope(res.rows, false);
    res.slope_h1 = fit_slope(res.rows, true);
  }
  std::vector<const ScalingRow*> sorted;
  for (const auto& r : res.rows) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->epsilon > b->epsilon; });
  res.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double prev = cfg.s == 0 ? sorted[i - 1]->sup_h0 : sorted[i - 1]->sup_h1;
    const double cur = cfg.s == 0 ? sorted[i]->sup_h0 : sorted[i]->sup_h1;
    if (!(cur < prev)) res.monotone = false;
  }
  return res;
}

}  // namespace hexwave
