// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "hexwave/error.hpp"
#include "hexwave/medium.hpp"

using namespace hexwave;

TEST_CASE("honeycomb scalar weight satisfies the symmetry checks") {
  for (double d : {0.0, 0.1, -0.2, 0.3}) {
    const SymmetryReport r = check_honeycomb_symmetries(make_honeycomb_scalar_weight(d));
    CHECK(r.passes(1e-12));
  }
  CHECK_THROWS_AS(make_honeycomb_scalar_weight(0.34), InvalidArgument);
  CHECK_THROWS_AS(make_honeycomb_scalar_weight(-0.5), InvalidArgument);
}

TEST_CASE("free medium is the identity") {
  const PeriodicMatrixField a = make_honeycomb_scalar_weight(0.0);
  const LatticeSpec& lat = a.lattice();
  for (double u : {0.0, 0.3, 0.77}) CHECK((a.evaluate(lat.point(u, 1 - u)) - CMat2::Identity()).norm() < 1e-15);
}

TEST_CASE("honeycomb weight stays above 1 - 3 delta") {
  const double d = 0.1;
  const PeriodicMatrixField a = make_honeycomb_scalar_weight(d);
  const SymmetryReport r = check_honeycomb_symmetries(a, 256);
  CHECK(r.ellipticity >= 1 - 3 * d - 1e-12);
  // the minimum of cos a + cos b + cos(a + b) is -3/2
  CHECK(r.ellipticity == doctest::Approx(1 - 1.5 * d).epsilon(1e-3));
}

TEST_CASE("sigma2 weight is purely imaginary and even") {
  const PeriodicMatrixField b = make_sigma2_weight(1.0, CosineProfile::three_cosine());
  const LatticeSpec& lat = b.lattice();
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const Vec2 x = lat.point(i / 64.0, j / 64.0);
      const CMat2 v = b.evaluate(x);
      CHECK((v.conjugate() + v).norm() < 1e-14);
      CHECK((b.evaluate(-x) - v).norm() < 1e-12);
    }
  const PeriodicMatrixField c = make_sigma2_weight(2.0, CosineProfile::constant(1.0));
  CHECK(c.coeffs().size() == 1);
  const PlaneWaveBasis basis(lat, 1);
  std::vector<cplx> odd(basis.size(), 0.0);
  odd[*basis.index_of(1, 0)] = kI;
  odd[*basis.index_of(-1, 0)] = -kI;
  CHECK_THROWS_AS(make_sigma2_weight(1.0, basis, odd), InvalidArgument);
}

TEST_CASE("PeriodicMatrixField rejects non-Hermitian coefficients") {
  const PlaneWaveBasis basis(make_triangular_lattice(), 1);
  std::vector<CMat2> c(basis.size(), CMat2::Zero());
  c[*basis.index_of(1, 0)] = CMat2::Identity();
  CHECK_THROWS_AS(PeriodicMatrixField(basis, c), InvalidArgument);
  c[*basis.index_of(-1, 0)] = CMat2::Identity();
  CHECK_NOTHROW(PeriodicMatrixField(basis, c));
}

TEST_CASE("slow modulations") {
  const SlowModulation c(ConstantKappa{0.7});
  CHECK(c(Vec2(3, 4)) == doctest::Approx(0.7));
  CHECK(c.is_constant());
  const SlowModulation t(TanhWallKappa{Vec2(0, 1), 2.0});
  CHECK(t(Vec2(5, 0.3)) == doctest::Approx(2 * std::tanh(0.3)));
  CHECK(t.is_wall());
  CHECK_FALSE(t.periodic_on_supercell(0.1, 30));
  const SlowModulation cw(CurvedWallKappa{10.0, 1.0});
  CHECK(cw(Vec2(1.0, 10 * std::tanh(1.0))) == doctest::Approx(0.0).epsilon(1e-14));
  FourierKappa f;
  f.period = 3.0;
  f.terms = {{{1, 0}, 0.5, 0.25}};
  const SlowModulation fk(f);
  CHECK(fk.sup_bound() == doctest::Approx(std::hypot(0.5, 0.25)));
  CHECK(fk.periodic_on_supercell(0.1, 30));
  CHECK_FALSE(fk.periodic_on_supercell(0.1, 31));
  const LatticeSpec lat = make_triangular_lattice();
  const Vec2 X(0.4, -1.1);
  CHECK(fk(X + 3.0 * lat.v1) == doctest::Approx(fk(X)).epsilon(1e-12));
}

TEST_CASE("composite weight ellipticity bound") {
  const PeriodicMatrixField A = make_honeycomb_scalar_weight(0.1);
  const PeriodicMatrixField B = make_sigma2_weight(1.0, CosineProfile::three_cosine());
  const double e = CompositeWeight::epsilon_max(A, B, ConstantKappa{1.0});
  CHECK(e > 0.2);
  CHECK(e < 0.3);
  const double e0 = CompositeWeight::epsilon_max(A, PeriodicMatrixField::zero(A.lattice()), ConstantKappa{1.0});
  CHECK(std::isinf(e0));
  // below epsilon_max the sampled weight stays elliptic
  const GriddedWeight g = evaluate_weight_on_grid(CompositeWeight(A, B, ConstantKappa{1.0}, 0.9 * e), 3, 16);
  CHECK(g.min_eigenvalue > 0.0);
  CHECK(g.max_hermitian_defect < 1e-14);
}
