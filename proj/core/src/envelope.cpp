// SPDX-License-Identifier: Apache-2.0
#include "hexwave/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hexwave/error.hpp"

namespace hexwave {

EnvelopeField::EnvelopeField(SpectralGrid g)
    : grid(std::move(g)), alpha1(grid.size(), 0.0), alpha2(grid.size(), 0.0) {}

EnvelopeField EnvelopeField::square(double L, int N) {
  if (!(L > 0.0) || N < 2) throw InvalidArgument("EnvelopeField: box side must be positive and N >= 2");
  return EnvelopeField(SpectralGrid(Vec2(-0.5 * L, -0.5 * L), Vec2(L, 0.0), Vec2(0.0, L), N, N));
}

double EnvelopeField::mass() const {
  const double n1 = l2_norm(grid, alpha1);
  const double n2 = l2_norm(grid, alpha2);
  return n1 * n1 + n2 * n2;
}

void EnvelopeField::fill(const std::function<CVec2(const Vec2&)>& f) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CVec2 v = f(grid.point(i));
    alpha1[i] = v(0);
    alpha2[i] = v(1);
  }
}

CMat2 kinetic_propagator(double c, const Vec2& xi, double dT) {
  const double r = xi.norm();
  CMat2 u = CMat2::Identity();
  if (r == 0.0) return u;
  const double th = c * r * dT;
  const double s = std::sin(th);
  u(0, 0) = u(1, 1) = std::cos(th);
  u(0, 1) = kI * s * cplx(xi(0), xi(1)) / r;
  u(1, 0) = kI * s * cplx(xi(0), -xi(1)) / r;
  return u;
}

DiracStepper::DiracStepper(const SpectralGrid& grid, const DiracParams& params, double dT)
    : grid_(grid), fft_(grid), dT_(dT) {
  if (dT == 0.0 || !std::isfinite(dT)) throw InvalidArgument("DiracStepper: dT must be finite and nonzero");
  if (!(params.c > 0.0)) throw InvalidArgument("DiracStepper: c must be positive");
  const std::size_t n = grid.size();
  half_phase_.resize(n);
  full_phase_.resize(n);
  k_diag_.resize(n);
  k_12_.resize(n);
  k_21_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mk = params.m * params.kappa(grid.point(i));
    half_phase_[i] = std::polar(1.0, 0.5 * mk * dT);
    full_phase_[i] = std::polar(1.0, mk * dT);
    const CMat2 u = kinetic_propagator(params.c, grid.wavevector(i), dT);
    k_diag_[i] = u(0, 0);
    k_12_[i] = u(0, 1);
    k_21_[i] = u(1, 0);
  }
}

void DiracStepper::mass_phase(EnvelopeField& f, bool half) const {
  const ComplexGrid& ph = half ? half_phase_ : full_phase_;
  for (std::size_t i = 0; i < ph.size(); ++i) {
    f.alpha1[i] *= ph[i];
    f.alpha2[i] *= std::conj(ph[i]);
  }
}

void DiracStepper::kinetic(EnvelopeField& f) const {
  fft_.forward(f.alpha1);
  fft_.forward(f.alpha2);
  for (std::size_t i = 0; i < k_diag_.size(); ++i) {
    const cplx a = f.alpha1[i];
    const cplx b = f.alpha2[i];
    f.alpha1[i] = k_diag_[i] * a + k_12_[i] * b;
    f.alpha2[i] = k_21_[i] * a + k_diag_[i] * b;
  }
  fft_.backward(f.alpha1);
  fft_.backward(f.alpha2);
}

void DiracStepper::advance(EnvelopeField& field, int n_steps) const {
  if (n_steps < 0) throw InvalidArgument("DiracStepper: negative step count");
  if (n_steps == 0) return;
  if (field.grid.size() != grid_.size()) throw InvalidArgument("DiracStepper: field does not match the stepper grid");
  mass_phase(field, true);
  for (int s = 0; s < n_steps; ++s) {
    kinetic(field);
    mass_phase(field, s + 1 == n_steps);
  }
  field.T += n_steps * dT_;
}

double DiracStepper::nyquist_fraction(const EnvelopeField& field) const {
  ComplexGrid a1 = field.alpha1;
  ComplexGrid a2 = field.alpha2;
  fft_.forward(a1);
  fft_.forward(a2);
  const int n1 = grid_.n1();
  const int n2 = grid_.n2();
  double total = 0.0;
  double outer = 0.0;
  for (int i2 = 0; i2 < n2; ++i2) {
    const double f2 = std::abs(SpectralGrid::signed_frequency(i2, n2)) / (0.5 * n2);
    for (int i1 = 0; i1 < n1; ++i1) {
      const double f1 = std::abs(SpectralGrid::signed_frequency(i1, n1)) / (0.5 * n1);
      const std::size_t idx = grid_.index(i1, i2);
      const double e = std::norm(a1[idx]) + std::norm(a2[idx]);
      total += e;
      if (std::max(f1, f2) > 0.9) outer += e;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

EvolveReport dirac_evolve(EnvelopeField& field, const DiracParams& params, double dT, int n_steps) {
  const DiracStepper stepper(field.grid, params, dT);
  EvolveReport rep;
  rep.initial_mass = field.mass();
  rep.nyquist_fraction = stepper.nyquist_fraction(field);
  if (rep.nyquist_fraction > 1e-8) {
    std::ostringstream os;
    os << "envelope under-resolved: Nyquist energy fraction " << rep.nyquist_fraction;
    rep.warnings.push_back(os.str());
  }
  stepper.advance(field, n_steps);
  rep.final_mass = field.mass();
  return rep;
}

namespace {

double curve_distance(const Vec2& x, double a, double limit) {
  // Slope bound of a tanh(t) on the window |t - x1| <= limit.
  const double t_min = std::max(0.0, std::abs(x(0)) - limit);
  const double sech = 1.0 / std::cosh(t_min);
  const double lip = std::sqrt(1.0 + a * a * sech * sech * sech * sech);
  const double vertical = std::abs(x(1) - a * std::tanh(x(0)));
  if (vertical <= limit) return vertical;
  if (vertical > limit * lip) return vertical / lip;
  // Brute-force minimum over the window where a closer point can lie, then refine.
  auto d2 = [&](double t) {
    const double dy = x(1) - a * std::tanh(t);
    return (x(0) - t) * (x(0) - t) + dy * dy;
  };
  const double step = 1e-2;
  double best_t = x(0);
  double best = d2(best_t);
  for (double t = x(0) - limit; t <= x(0) + limit; t += step) {
    const double v = d2(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double lo = best_t - step;
  double hi = best_t + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double m1 = hi - g * (hi - lo);
    const double m2 = lo + g * (hi - lo);
    if (d2(m1) < d2(m2)) hi = m2;
    else lo = m1;
  }
  return std::sqrt(std::min(best, d2(0.5 * (lo + hi))));
}

}  // namespace

double mass_near_curve(const EnvelopeField& field, double amplitude, double distance) {
  double total = 0.0;
  double near = 0.0;
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    const double e = std::norm(field.alpha1[i]) + std::norm(field.alpha2[i]);
    total += e;
    if (e == 0.0) continue;
    if (curve_distance(field.grid.point(i), amplitude, distance) <= distance) near += e;
  }
  return total > 0.0 ? near / total : 0.0;
}

double boundary_mass_fraction(const EnvelopeField& field, double width) {
  const SpectralGrid& g = field.grid;
  double total = 0.0;
  double edge = 0.0;
  for (int i2 = 0; i2 < g.n2(); ++i2) {
    for (int i1 = 0; i1 < g.n1(); ++i1) {
      // distance to the box boundary measured in lattice coordinates of the box edges
      const double u1 = static_cast<double>(i1) / g.n1();
      const double u2 = static_cast<double>(i2) / g.n2();
      const double d1 = std::min(u1, 1.0 - u1) * g.a1().norm();
      const double d2 = std::min(u2, 1.0 - u2) * g.a2().norm();
      const std::size_t idx = g.index(i1, i2);
      const double e = std::norm(field.alpha1[idx]) + std::norm(field.alpha2[idx]);
      total += e;
      if (std::min(d1, d2) < width) edge += e;
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

Figure1Result run_figure1(const Figure1Options& o) {
  if (o.snapshot_times.empty()) throw InvalidArgument("run_figure1: no snapshot times");
  if (!(o.dT > 0.0)) throw InvalidArgument("run_figure1: dT must be positive");
  if (o.m == 0.0 && o.polarization == 0)
    throw InvalidArgument("run_figure1: polarization cannot be chosen automatically for m = 0");
  std::vector<int> steps;
  for (double t : o.snapshot_times) {
    const double s = t / o.dT;
    if (t < 0.0 || std::abs(s - std::round(s)) > 1e-9 * std::max(1.0, s))
      throw InvalidArgument("run_figure1: snapshot times must be non-negative multiples of dT");
    steps.push_back(static_cast<int>(std::llround(s)));
  }
  if (!std::is_sorted(steps.begin(), steps.end()))
    throw InvalidArgument("run_figure1: snapshot times must be increasing");

  const double a = o.curve_amplitude;
  DiracParams params{o.c, o.m, SlowModulation(CurvedWallKappa{a, 1.0})};
  EnvelopeField field = EnvelopeField::square(o.L, o.N);

  Figure1Result res{field.grid, 0, {}, {}, {}};
  // The wall normal is +X2 far from the bend; the decaying zero mode there has α2 = α1 for m > 0.
  res.polarization = o.polarization != 0 ? (o.polarization > 0 ? 1 : -1) : (o.m > 0.0 ? 1 : -1);
  const double x20 = a * std::tanh(o.X1_start);
  const double pol = res.polarization;
  field.fill([&](const Vec2& X) {
    const cplx v = std::exp(-(X(0) - o.X1_start) * (X(0) - o.X1_start)) / std::cosh(X(1) - x20);
    return CVec2(v, pol * v);
  });

  const DiracStepper stepper(field.grid, params, o.dT);
  const double nyq = stepper.nyquist_fraction(field);
  if (nyq > 1e-8) {
    std::ostringstream os;
    os << "initial data under-resolved: Nyquist energy fraction " << nyq;
    res.warnings.push_back(os.str());
  }
  const double width = 0.05 * o.L;
  int done = 0;
  for (int target : steps) {
    stepper.advance(field, target - done);
    done = target;
    field.T = target * o.dT;
    Figure1Snapshot snap{field.T, field.alpha1, field.alpha2, field.mass(),
                         mass_near_curve(field, a, o.near_distance), boundary_mass_fraction(field, width)};
    if (snap.boundary_fraction > 1e-3) {
      std::ostringstream os;
      os << "boundary contamination at T = " << snap.T << ": outer annulus holds " << snap.boundary_fraction
         << " of the mass";
      res.warnings.push_back(os.str());
    }
    res.snapshots.push_back(std::move(snap));
  }
  const int samples = 4 * o.N + 1;
  for (int i = 0; i < samples; ++i) {
    const double x1 = -0.5 * o.L + o.L * i / (samples - 1);
    const double x2 = a * std::tanh(x1);
    if (std::abs(x2) <= 0.5 * o.L) res.zero_curve.emplace_back(x1, x2);
  }
  return res;
}

}  // namespace hexwave
