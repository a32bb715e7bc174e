// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hexwave/envelope.hpp"
#include "hexwave/error.hpp"

using namespace hexwave;

namespace {

EnvelopeField gaussian(double L, int N, const Vec2& c, double pol) {
  EnvelopeField f = EnvelopeField::square(L, N);
  f.fill([&](const Vec2& X) {
    const cplx g = std::exp(-(X - c).squaredNorm() / 4.0) * std::exp(kI * 0.3 * X(0));
    return CVec2(g, pol * g);
  });
  return f;
}

}  // namespace

TEST_CASE("kinetic propagator is unitary and matches the symbol") {
  const Vec2 xi(0.7, -1.3);
  const double c = 1.7, dT = 0.3;
  const CMat2 u = kinetic_propagator(c, xi, dT);
  CHECK((u.adjoint() * u - CMat2::Identity()).norm() < 1e-14);
  CMat2 h;
  h << 0.0, -c * cplx(xi(0), xi(1)), -c * cplx(xi(0), -xi(1)), 0.0;
  // exp(-i H dT) via eigen decomposition of the Hermitian symbol
  Eigen::SelfAdjointEigenSolver<CMat2> es(h);
  const CMat2 ref = es.eigenvectors() *
                    Eigen::Vector2cd(std::exp(-kI * es.eigenvalues()(0) * dT), std::exp(-kI * es.eigenvalues()(1) * dT))
                        .asDiagonal() *
                    es.eigenvectors().adjoint();
  CHECK((u - ref).norm() < 1e-13);
  CHECK((kinetic_propagator(c, Vec2::Zero(), dT) - CMat2::Identity()).norm() == 0.0);
}

TEST_CASE("L2 mass is conserved with a varying mass") {
  EnvelopeField f = gaussian(40.0, 128, Vec2(-3, 1), 1.0);
  const DiracParams p{1.0, 1.0, CurvedWallKappa{3.0, 1.0}};
  const EvolveReport r = dirac_evolve(f, p, 0.02, 500);
  CHECK(std::abs(r.final_mass - r.initial_mass) / r.initial_mass < 1e-12);
  CHECK(r.warnings.empty());
  CHECK(f.T == doctest::Approx(10.0));
}

TEST_CASE("evolving back with -dT returns the initial state") {
  const EnvelopeField f0 = gaussian(40.0, 128, Vec2(2, -1), -1.0);
  EnvelopeField f = f0;
  const DiracParams p{0.8, 1.3, TanhWallKappa{Vec2(0.6, 0.8), 1.0}};
  DiracStepper(f.grid, p, 0.05).advance(f, 200);
  DiracStepper(f.grid, p, -0.05).advance(f, 200);
  double err = 0.0;
  for (std::size_t i = 0; i < f.alpha1.size(); ++i)
    err = std::max({err, std::abs(f.alpha1[i] - f0.alpha1[i]), std::abs(f.alpha2[i] - f0.alpha2[i])});
  CHECK(err < 1e-11);
}

TEST_CASE("Strang splitting is second order") {
  const EnvelopeField f0 = gaussian(30.0, 96, Vec2(0, 0), 1.0);
  const DiracParams p{1.0, 1.0, TanhWallKappa{Vec2(0, 1), 1.0}};
  auto run = [&](double dT) {
    EnvelopeField f = f0;
    DiracStepper(f.grid, p, dT).advance(f, static_cast<int>(std::lround(1.0 / dT)));
    return f;
  };
  const EnvelopeField ref = run(1.0 / 1280);
  auto err = [&](const EnvelopeField& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.alpha1.size(); ++i)
      s += std::norm(f.alpha1[i] - ref.alpha1[i]) + std::norm(f.alpha2[i] - ref.alpha2[i]);
    return std::sqrt(s);
  };
  const double ratio = err(run(0.1)) / err(run(0.05));
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("constant mass plane waves follow omega^2 = c^2 |xi|^2 + m^2") {
  EnvelopeField f = EnvelopeField::square(2 * kPi, 16);
  const Vec2 xi(2.0, -1.0);
  const double c = 1.3, m = 0.7;
  CMat2 h;
  h << -m, -c * cplx(xi(0), xi(1)), -c * cplx(xi(0), -xi(1)), m;
  Eigen::SelfAdjointEigenSolver<CMat2> es(h);
  const CVec2 v = es.eigenvectors().col(1);
  const double omega = es.eigenvalues()(1);
  CHECK(omega == doctest::Approx(std::sqrt(c * c * xi.squaredNorm() + m * m)));
  f.fill([&](const Vec2& X) { return CVec2(v * std::exp(kI * xi.dot(X))); });
  const double dT = 1e-5;
  DiracStepper(f.grid, {c, m, ConstantKappa{1.0}}, dT).advance(f, 1);
  const Vec2 X0 = f.grid.point(std::size_t{0});
  const cplx base = std::exp(kI * xi.dot(X0));
  const cplx lambda = (std::conj(v(0)) * f.alpha1[0] + std::conj(v(1)) * f.alpha2[0]) / base;
  CHECK(std::abs(std::abs(lambda) - 1.0) < 1e-12);
  CHECK(std::abs(-std::arg(lambda) / dT - omega) / omega < 1e-8);
}

TEST_CASE("Nyquist diagnostic flags under-resolved data") {
  EnvelopeField f = EnvelopeField::square(10.0, 32);
  f.fill([](const Vec2& X) { return CVec2(std::exp(kI * 9.0 * X(0)), 0.0); });
  const EvolveReport r = dirac_evolve(f, {1.0, 0.0, ConstantKappa{0.0}}, 0.01, 1);
  CHECK_FALSE(r.warnings.empty());
  CHECK_THROWS_AS(DiracStepper(f.grid, {1.0, 1.0, ConstantKappa{1.0}}, 0.0), InvalidArgument);
  CHECK_THROWS_AS(DiracStepper(f.grid, {-1.0, 1.0, ConstantKappa{1.0}}, 0.1), InvalidArgument);
}

TEST_CASE("mass near the curved wall and near the boundary") {
  EnvelopeField f = EnvelopeField::square(40.0, 128);
  f.fill([](const Vec2& X) { return CVec2(std::exp(-(X(1) - 3 * std::tanh(X(0))) * (X(1) - 3 * std::tanh(X(0)))), 0.0); });
  CHECK(mass_near_curve(f, 3.0, 3.0) > 0.999);
  CHECK(boundary_mass_fraction(f, 2.0) > 0.05);
  EnvelopeField g = gaussian(40.0, 128, Vec2(0, 0), 1.0);
  CHECK(boundary_mass_fraction(g, 2.0) < 1e-12);
}

TEST_CASE("Figure 1 setup (coarse) keeps the packet on the wall") {
  Figure1Options o;
  o.L = 100.0;
  o.N = 256;
  o.dT = 0.05;
  o.snapshot_times = {0.0, 10.0};
  const Figure1Result r = run_figure1(o);
  CHECK(r.polarization == 1);
  REQUIRE(r.snapshots.size() == 2);
  CHECK(r.snapshots[0].T == 0.0);
  CHECK(std::abs(r.snapshots[1].mass - r.snapshots[0].mass) / r.snapshots[0].mass < 1e-10);
  CHECK(r.snapshots[1].near_curve_fraction > 0.9);
  CHECK_FALSE(r.zero_curve.empty());
  o.snapshot_times = {0.0, 0.07};
  CHECK_THROWS_AS(run_figure1(o), InvalidArgument);
}
