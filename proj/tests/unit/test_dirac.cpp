// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hexwave/dirac.hpp"
#include "hexwave/error.hpp"

using namespace hexwave;

namespace {

const DiracData& honeycomb() {
  static const DiracData d = analyze_dirac_point(make_honeycomb_scalar_weight(0.1),
                                                 make_sigma2_weight(1.0, CosineProfile::three_cosine()), {});
  return d;
}

}  // namespace

TEST_CASE("honeycomb medium has a two-fold degenerate pair at K") {
  const DiracData& d = honeycomb();
  CHECK(d.point.relative_gap < 1e-8);
  CHECK(d.point.gap_margin > 0.0);
  CHECK(d.point.b_star == 2);
  CHECK(d.E_D() == doctest::Approx(17.88337).epsilon(1e-6));
}

TEST_CASE("free medium is rejected as a three-fold crossing") {
  CHECK_THROWS_AS(find_dirac_point(make_honeycomb_scalar_weight(0.0), 8, 1e-6), InvariantViolation);
}

TEST_CASE("gauge fixing yields rotation eigenvectors and the conjugate partner") {
  const DiracData& d = honeycomb();
  const cplx tau = std::polar(1.0, 2 * kPi / 3);
  CHECK(d.gauge.rotation_error < 1e-10);
  CHECK(std::abs(d.gauge.rotation_eigenvalues[0] - tau) < 1e-10);
  CHECK(std::abs(d.gauge.rotation_eigenvalues[1] - std::conj(tau)) < 1e-10);
  CHECK(d.gauge.conjugate_residual < 1e-10);
  const double area = d.point.basis.lattice().cell_area;
  CHECK(area * d.phi1().squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(area * d.phi2().squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(area * d.phi1().dot(d.phi2())) < 1e-10);
}

TEST_CASE("current and mass identities") {
  const DiracData& d = honeycomb();
  CHECK(d.v_F() > 0.0);
  CHECK(d.current.max_residual < 1e-8);
  CHECK(std::abs(d.current.a12(0) - d.v_F()) < 1e-8);
  CHECK(std::abs(d.current.a12(1) - kI * d.v_F()) < 1e-8);
  CHECK(std::abs(d.current.a21(1) + kI * d.v_F()) < 1e-8);
  CHECK(d.mass.max_residual < 1e-8);
  CHECK(std::abs(d.mass.b11.imag()) < 1e-8);
  CHECK(std::abs(d.mass.b22 + d.mass.b11) < 1e-8);
  CHECK_FALSE(d.mass.degenerate);
  CHECK(d.kinetic_coefficient() == doctest::Approx(d.v_F() / (2 * std::sqrt(d.E_D()))));
}

TEST_CASE("a constant sigma2 weight has vanishing theta_sharp") {
  const DiracData& d = honeycomb();
  const MassIdentities m = compute_theta_sharp(d.point.basis, d.point.K, d.phi1(), d.phi2(),
                                               make_sigma2_weight(1.0, CosineProfile::constant(1.0)));
  CHECK(m.degenerate);
}

TEST_CASE("cone is isotropic and its slope matches v_F") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const DiracData& d = honeycomb();
  const double kn = d.point.K.norm();
  const std::vector<double> radii{2.5e-4 * kn, 5e-4 * kn, 7.5e-4 * kn, 1e-3 * kn};
  const ConicalFit fit = conical_fit(A, d, radii, {Vec2(1, 0), Vec2(0, 1), Vec2(1, 1).normalized()});
  for (std::size_t i = 0; i < fit.directions.size(); ++i) {
    CHECK(fit.slopes_plus[i] == doctest::Approx(d.v_F()).epsilon(1e-2));
    CHECK(fit.slopes_minus[i] == doctest::Approx(d.v_F()).epsilon(1e-2));
  }
  CHECK(std::abs(fit.slopes_plus[0] - fit.slopes_plus[1]) < 1e-2 * d.v_F());
  CHECK_THROWS_AS(conical_fit(A, d, {2 * d.q0}, {Vec2(1, 0)}), InvalidArgument);
}

TEST_CASE("mode expansion deficit is linear in |kappa|") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const DiracData& d = honeycomb();
  const double kn = d.point.K.norm();
  const auto a = check_mode_expansion(A, d, Vec2(1e-3 * kn, 0.0));
  const auto b = check_mode_expansion(A, d, Vec2(5e-4 * kn, 0.0));
  CHECK(a.overlap_plus > 0.99);
  CHECK(b.deficit / a.deficit == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("other bands stay away from E_D near K") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const DiracData& d = honeycomb();
  CHECK(isolation_margin(A, d, 0.3 * d.point.K.norm(), 2, 6) > 0.5);
}

TEST_CASE("json export carries the identities") {
  const auto j = to_json(honeycomb());
  CHECK(j.contains("E_D"));
  CHECK(j.contains("v_F"));
  CHECK(j.contains("theta_sharp"));
}
