#include <bit>
#include <random>

#include "doctest.h"
#include "gspin/clifford.hpp"
#include "gspin/errors.hpp"

using namespace gspin;

namespace {

// Independent model: C(V) acting on the exterior algebra by
// x . w = x ^ w + i_x w, with i_x contracting through B = [ , ]/2.
struct FockModel {
  int n;
  std::vector<QMatrix> gens;

  explicit FockModel(const QMatrix& gram) : n(static_cast<int>(gram.rows())) {
    std::uint32_t N = 1u << n;
    for (int i = 0; i < n; ++i) {
      QMatrix m(N, N, mpq_class(0));
      for (std::uint32_t S = 0; S < N; ++S) {
        // wedge: x_i ^ e_S
        if (!(S >> i & 1u)) {
          int sign = std::popcount(S & ((1u << i) - 1)) % 2 ? -1 : 1;
          m(S | 1u << i, S) += sign;
        }
        // contraction: sum_k (-1)^pos B(x_i, e_k) e_{S - k}
        int pos = 0;
        for (int k = 0; k < n; ++k)
          if (S >> k & 1u) {
            mpq_class b = gram(i, k) / 2;
            if (b != 0) m(S ^ 1u << k, S) += (pos % 2 ? -1 : 1) * b;
            ++pos;
          }
      }
      gens.push_back(m);
    }
  }

  QMatrix image(const CliffordElement& a) const {
    std::uint32_t N = 1u << n;
    QMatrix out(N, N, mpq_class(0));
    for (auto& [S, c] : a.terms()) {
      QMatrix m = qmatrix_identity(N);
      for (int i = 0; i < n; ++i)
        if (S >> i & 1u) m = m * gens[i];
      for (std::uint32_t r = 0; r < N; ++r)
        for (std::uint32_t s = 0; s < N; ++s)
          if (m(r, s) != 0) out(r, s) += c * m(r, s);
    }
    return out;
  }
};

mpq_class trace(const QMatrix& m) {
  mpq_class t = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

CliffordElement random_element(std::mt19937& rng, const CliffordPtr& alg, int terms = 4) {
  std::uniform_int_distribution<std::uint32_t> mono(0, alg->size() - 1);
  std::uniform_int_distribution<int> c(-4, 4), den(0, 2);
  CliffordElement a = alg->zero();
  for (int i = 0; i < terms; ++i) {
    mpq_class x = c(rng);
    for (int k = den(rng); k > 0; --k) x /= alg->prime();
    a = a + alg->monomial(mono(rng)) * x;
  }
  return a;
}

CliffordElement random_vector(std::mt19937& rng, const CliffordPtr& alg) {
  std::uniform_int_distribution<int> c(-5, 5);
  std::vector<mpq_class> v;
  for (int i = 0; i < alg->dim(); ++i) v.push_back(c(rng));
  return alg->vector(v);
}

}  // namespace

TEST_CASE("defining relations") {
  auto alg = CliffordAlgebra::standard(3, 4);
  auto x1 = alg->generator(1), x2 = alg->generator(2);
  CHECK(x1 * x2 + x2 * x1 == alg->scalar(1));
  CHECK((x1 * x1).is_zero());
  std::mt19937 rng(1);
  for (int n = 3; n <= 6; ++n) {
    auto a = CliffordAlgebra::standard(5, n, n % 2 ? DetSelector::minus : DetSelector::plus);
    for (int t = 0; t < 100; ++t) {
      auto v = random_vector(rng, a);
      auto coeffs = *v.as_vector();
      mpq_class q = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) q += coeffs[i] * a->gram()(i, j) * coeffs[j];
      CHECK(v * v == a->scalar(q / 2));
    }
  }
}

TEST_CASE("product agrees with the exterior-algebra model") {
  std::mt19937 rng(2);
  for (int n = 3; n <= 5; ++n) {
    auto alg = CliffordAlgebra::standard(3, n, DetSelector::minus);
    FockModel fock(alg->gram());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        QMatrix ac = fock.gens[i] * fock.gens[j];
        QMatrix ca = fock.gens[j] * fock.gens[i];
        for (std::size_t r = 0; r < ac.rows(); ++r)
          for (std::size_t s = 0; s < ac.cols(); ++s)
            CHECK(ac(r, s) + ca(r, s) == (r == s ? alg->gram()(i, j) : mpq_class(0)));
      }
    for (int t = 0; t < 30; ++t) {
      auto a = random_element(rng, alg), b = random_element(rng, alg);
      CHECK(fock.image(a * b) == fock.image(a) * fock.image(b));
      CHECK(trace(fock.image(a)) == trace(left_regular(a)));
    }
  }
}

TEST_CASE("associativity, involution and trace symmetry") {
  std::mt19937 rng(3);
  for (int n = 3; n <= 7; ++n) {
    auto alg = CliffordAlgebra::standard(n % 2 ? 3 : 5, n, DetSelector::plus);
    for (int t = 0; t < 500; ++t) {
      auto a = random_element(rng, alg, 3), b = random_element(rng, alg, 3), c = random_element(rng, alg, 3);
      CHECK((a * b) * c == a * (b * c));
      CHECK(involution(a * b) == involution(b) * involution(a));
      CHECK(involution(involution(a)) == a);
      CHECK(reduced_trace(a * b) == reduced_trace(b * a));
    }
    mpq_class expected = mpq_class(mpz_class(1) << ((n + 1) / 2));
    CHECK(reduced_trace(alg->scalar(1)) == expected);
    CHECK(reduced_trace(random_vector(rng, alg)) == 0);
  }
  auto alg = CliffordAlgebra::standard(3, 3);
  auto x1 = alg->generator(1), x2 = alg->generator(2), x3 = alg->generator(3);
  CHECK(involution(x1 * x2 * x3) == x3 * x2 * x1);
}

TEST_CASE("center") {
  auto a4 = CliffordAlgebra::standard(3, 4);
  auto z4 = center(a4);
  REQUIRE(z4.size() == 1);
  CHECK(z4[0].is_scalar());
  for (int n : {3, 5}) {
    std::vector<bool> square;
    for (auto sel : {DetSelector::plus, DetSelector::minus}) {
      int p = 3;
      auto alg = CliffordAlgebra::standard(p, n, sel);
      auto z = center(alg);
      REQUIRE(z.size() == 2);
      CHECK(z[0] * z[1] == z[1] * z[0]);
      CliffordElement odd = alg->zero();
      for (auto& e : z) {
        CliffordElement part = alg->zero();
        for (auto& [S, c] : e.terms())
          if (std::popcount(S) % 2) part = part + alg->monomial(S) * c;
        if (!part.is_zero()) odd = part;
      }
      REQUIRE(!odd.is_zero());
      auto sq = odd * odd;
      REQUIRE(sq.is_scalar());
      // z^2 = (-1)^{n(n-1)/2} det(Gram) / 2^n modulo squares
      QMatrix g = alg->gram();
      PadicElement det = determinant(to_padic(p, g));
      PadicElement expected = det * PadicElement::from_rational(p, mpq_class(((n * (n - 1) / 2) % 2 ? -1 : 1), 1 << n));
      PadicElement got = PadicElement::from_rational(p, sq.coeff(0));
      CHECK(square_class(got) == square_class(expected));
      square.push_back(square_class(got).is_square());
    }
    // the two determinant classes give a split and a nonsplit center
    CHECK(square[0] != square[1]);
  }
}

TEST_CASE("GSpin membership") {
  auto alg = CliffordAlgebra::standard(5, 5);
  auto s = is_gspin(alg->scalar(3));
  REQUIRE(s);
  CHECK(s.element->eta == 9);
  CHECK(s.element->action == qmatrix_identity(5));
  auto odd = is_gspin(alg->generator(1));
  CHECK(!odd);
  CHECK(odd.reason == "not even");
  auto nil = is_gspin(alg->generator(1) * alg->generator(3));
  CHECK(!nil);
  CHECK(nil.reason == "not invertible");
  mpq_class t(7, 5);
  auto m = is_gspin(mu(alg, t));
  REQUIRE(m);
  CHECK(m.element->eta == 1 / t);
  QMatrix expected = qmatrix_identity(5);
  expected(0, 0) = 1 / t;
  expected(1, 1) = t;
  CHECK(m.element->action == expected);
  CHECK(mu(alg, 1) == alg->scalar(1));
  CHECK(mu(alg, t) * mu(alg, 1 / t) == alg->scalar(1));
  CHECK(mu(alg, t) * mu(alg, mpq_class(2, 3)) == mu(alg, t * mpq_class(2, 3)));
}

TEST_CASE("GSpin elements act by isometries and eta is multiplicative") {
  std::mt19937 rng(7);
  for (int n = 3; n <= 6; ++n) {
    auto alg = CliffordAlgebra::standard(3, n);
    std::vector<GSpinElement> elems;
    // products of two anisotropic vectors are in GSpin
    for (int t = 0; t < 20; ++t) {
      auto v = random_vector(rng, alg), w = random_vector(rng, alg);
      auto r = is_gspin(v * w);
      if (!r) continue;
      elems.push_back(*r.element);
    }
    elems.push_back(*is_gspin(basic_b(alg)).element);
    elems.push_back(*is_gspin(mu(alg, 3)).element);
    REQUIRE(elems.size() > 5);
    for (auto& g : elems) CHECK(g.action.transpose() * alg->gram() * g.action == alg->gram());
    for (std::size_t i = 0; i + 1 < elems.size(); ++i) {
      auto prod = is_gspin(elems[i].g * elems[i + 1].g);
      REQUIRE(prod);
      CHECK(prod.element->eta == elems[i].eta * elems[i + 1].eta);
      CHECK(prod.element->action == elems[i].action * elems[i + 1].action);
    }
  }
}

TEST_CASE("the basic element") {
  for (int p : {3, 5})
    for (int n = 3; n <= 7; ++n) {
      auto alg = CliffordAlgebra::standard(p, n, DetSelector::minus);
      auto b = basic_b(alg);
      CHECK(b * b == alg->scalar(-alg->q_value(2) / p));
      auto bk = alg->scalar(1);
      std::vector<int> vals;
      for (int k = 0; k <= 3; ++k) {
        auto r = is_gspin(bk);
        REQUIRE(r);
        vals.push_back(valuation(r.element->eta, p));
        bk = bk * b;
      }
      CHECK(vals == std::vector<int>{0, -1, -2, -3});
      auto gb = *is_gspin(b).element;
      QMatrix expected = qmatrix_identity(n);
      expected(0, 0) = 0;
      expected(1, 1) = 0;
      expected(1, 0) = -p;
      expected(0, 1) = mpq_class(-1, p);
      expected(2, 2) = -1;
      CHECK(gb.action == expected);
      // b^2 is central and acts trivially
      auto b2 = *is_gspin(b * b).element;
      CHECK(b2.action == qmatrix_identity(n));
      // mu(p)^-1 b stabilizes the standard lattice with unit similitude
      auto h = is_gspin(mu(alg, mpq_class(1, p)) * b);
      REQUIRE(h);
      CHECK(valuation(h.element->eta, p) == 0);
      CHECK(elementary_divisor_valuations(h.element->action, p) == std::vector<int>(n, 0));
    }
}

TEST_CASE("symplectic form") {
  std::mt19937 rng(9);
  for (int n = 3; n <= 6; ++n) {
    auto alg = CliffordAlgebra::standard(3, n);
    auto delta = default_delta(alg);
    CHECK(involution(delta) == -delta);
    for (int t = 0; t < 30; ++t) {
      auto c = random_element(rng, alg), d = random_element(rng, alg);
      CHECK(psi_delta(c, c, delta) == 0);
      CHECK(psi_delta(c, d, delta) == -psi_delta(d, c, delta));
      mpq_class s(5, 3);
      auto m = mu(alg, s);
      CHECK(psi_delta(m * c, m * d, delta) == psi_delta(c, d, delta) / s);
    }
    auto r = psi_perfection(alg, delta);
    CHECK(r.integral);
    CHECK(r.perfect);
  }
  auto alg = CliffordAlgebra::standard(3, 3);
  CHECK_THROWS_AS(psi_delta(alg->scalar(1), alg->scalar(1), alg->scalar(1)), BadDelta);
  // non-self-dual form: Q(x3) = p
  QMatrix g = standard_gram(3, 3, DetSelector::plus);
  g(2, 2) = 6;
  auto bad = CliffordAlgebra::create(3, g);
  CHECK(!psi_perfection(bad, default_delta(bad)).perfect);
}

TEST_CASE("cocharacter weights") {
  for (int n = 3; n <= 6; ++n) {
    auto alg = CliffordAlgebra::standard(3, n);
    auto w = cocharacter_weights(alg);
    CHECK(w.size() == alg->size());
    int minus = 0;
    mpq_class t(2, 7);
    auto m = mu(alg, t);
    QMatrix basis(alg->size(), w.size(), mpq_class(0));
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j].weight == -1) ++minus;
      CHECK(m * w[j].z == w[j].z * (w[j].weight == -1 ? 1 / t : mpq_class(1)));
      for (auto& [S, c] : w[j].z.terms()) basis(S, j) = c;
    }
    CHECK(minus == static_cast<int>(alg->size() / 2));
    CHECK(elementary_divisor_valuations(basis, 3) == std::vector<int>(alg->size(), 0));
  }
}
