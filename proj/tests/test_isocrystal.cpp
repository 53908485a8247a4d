#include <random>

#include "doctest.h"
#include "gspin/errors.hpp"
#include "gspin/isocrystal.hpp"

using namespace gspin;

TEST_CASE("Phi from b") {
  for (int p : {3, 5}) {
    auto alg = CliffordAlgebra::standard(p, 4, DetSelector::minus);
    auto m = phi_from_b(alg);
    // image of x1 is -p x2, of x2 is -x1/p, of x3 is -x3
    CHECK(m.linear_q(0, 0) == 0);
    CHECK(m.linear_q(1, 0) == -p);
    CHECK(m.linear_q(0, 1) == mpq_class(-1, p));
    CHECK(m.linear_q(2, 2) == -1);
    CHECK(m.linear_q(3, 3) == 1);
    CHECK(m.linear_q * m.linear_q == qmatrix_identity(4));
    CHECK(m.linear_q.transpose() * m.gram_q * m.linear_q == m.gram_q);
  }
}

TEST_CASE("Phi is semilinear") {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> d(-20, 20);
  auto alg = CliffordAlgebra::standard(5, 5);
  auto m = phi_from_b(alg, 20);
  for (int t = 0; t < 50; ++t) {
    auto lam = PadicElement::from_components(PadicElement::from_int(5, d(rng), 1, 20),
                                             PadicElement::from_int(5, d(rng), 1, 20));
    PVector v;
    for (int i = 0; i < 5; ++i)
      v.push_back(PadicElement::from_components(PadicElement::from_int(5, d(rng), 1, 20),
                                                PadicElement::from_int(5, d(rng), 1, 20)));
    PVector lv = v;
    for (auto& x : lv) x *= lam;
    auto a = m.apply(lv), b = m.apply(v);
    for (int i = 0; i < 5; ++i) CHECK(a[i] == lam.frobenius() * b[i]);
  }
}

TEST_CASE("fixed points") {
  for (int p : {3, 5, 7})
    for (int n = 3; n <= 7; ++n)
      for (auto sel : {DetSelector::plus, DetSelector::minus}) {
        auto alg = CliffordAlgebra::standard(p, n, sel);
        auto V = standard_space(p, n, sel);
        // Phi = sigma: the standard form itself
        auto triv = fixed_points(phi_from_element(alg, alg->scalar(1)));
        CHECK(triv.space.gram() == V.gram());
        auto m = phi_from_b(alg);
        auto fx = fixed_points(m);
        CHECK(fx.space.dim() == n);
        for (int j = 0; j < n; ++j) {
          auto v = fx.embedding.column(j);
          auto w = m.apply(v);
          for (int i = 0; i < n; ++i) CHECK(w[i] == v[i]);
        }
        auto inv = fx.space.invariants();
        CHECK(inv.det == V.invariants().det);
        CHECK(inv.hasse == -1);
        CHECK(isometric(fx.space, flip_hasse(V)));
        auto again = fixed_points(phi_from_b(alg));
        CHECK(isometric(again.space, fx.space));
        auto low = fixed_points(phi_from_b(alg, 16));
        CHECK(low.space.invariants() == inv);
      }
}

TEST_CASE("twist reports") {
  for (int n = 3; n <= 7; ++n) {
    auto alg = CliffordAlgebra::standard(3, n, DetSelector::plus);
    auto r = verify_twist(alg);
    CHECK(r.pass());
    CHECK(r.hasse_got == -1);
    CHECK(r.slope_d == mpq_class(1, 2));
    auto r2 = verify_twist(alg, 2);
    CHECK(r2.pass());
    CHECK(r2.hasse_got == 1);
    auto r0 = verify_twist(alg, 0);
    CHECK(r0.pass());
    CHECK(r0.slope_d == 0);
  }
  auto r = verify_twist(CliffordAlgebra::standard(5, 3));
  CHECK(r.to_json().find("\"pass\":true") != std::string::npos);
}

TEST_CASE("slopes") {
  for (int n = 3; n <= 5; ++n) {
    auto alg = CliffordAlgebra::standard(3, n);
    auto b = basic_b(alg);
    CHECK(slope_on_D(alg, b) == mpq_class(1, 2));
    CHECK(slope_on_D(alg, alg->scalar(1)) == 0);
    CHECK(slope_on_D(alg, b * b * b) == mpq_class(3, 2));
    CHECK(phi_orbit_period(phi_from_b(alg)) == 2);
    CHECK(phi_orbit_period(phi_from_element(alg, alg->scalar(1))) == 1);
    // mu(p) is not isoclinic on D
    CHECK_THROWS_AS(slope_on_D(alg, mu(alg, 3)), NotIsoclinic);
  }
}
