#include <random>

#include "doctest.h"
#include "gspin/errors.hpp"
#include "gspin/quadspace.hpp"

using namespace gspin;

namespace {

QpQuadSpace diag_q(int p, const std::vector<long long>& q) {
  std::vector<PadicElement> v;
  for (auto x : q) v.push_back(PadicElement::from_int(p, x));
  return QpQuadSpace::diagonal(v);
}

QpQuadSpace gram_of(int p, const std::vector<std::vector<long long>>& rows) {
  QMatrix g(rows.size(), rows.size(), mpq_class(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) g(i, j) = static_cast<long>(rows[i][j]);
  return QpQuadSpace::from_rational(p, g);
}

// Primitive zero of sum q_i x_i^2 modulo p^2; decides isotropy when every
// coefficient has valuation 0 or 1.
bool isotropic_bruteforce(const std::vector<long long>& q, int p) {
  long long m = static_cast<long long>(p) * p;
  std::size_t n = q.size();
  long long total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;
  std::vector<long long> x(n);
  for (long long idx = 1; idx < total; ++idx) {
    long long t = idx;
    bool prim = false;
    long long s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = t % m;
      t /= m;
      if (x[i] % p) prim = true;
      s += ((q[i] % m + m) % m) * (x[i] * x[i] % m);
    }
    if (prim && s % m == 0) return true;
  }
  return false;
}

std::vector<long long> class_reps(int p) {
  long long u = least_nonresidue(p);
  return {1, u, p, u * p};
}

QMatrix random_unimodular(std::mt19937& rng, int n, int p) {
  std::uniform_int_distribution<int> d(-3, 3);
  while (true) {
    QMatrix g(n, n, mpq_class(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = d(rng);
    PadicElement det = determinant(to_padic(p, g));
    if (!det.is_zero() && det.valuation() == 0) return g;
  }
}

QpQuadSpace transform(const QpQuadSpace& s, const QMatrix& g) {
  PMatrix gp = to_padic(s.prime(), g);
  return QpQuadSpace(gp.transpose() * s.gram() * gp);
}

QpQuadSpace random_space(std::mt19937& rng, int n, int p) {
  auto reps = class_reps(p);
  std::uniform_int_distribution<int> pick(0, 3), sq(1, 4);
  std::vector<long long> q;
  for (int i = 0; i < n; ++i) q.push_back(reps[pick(rng)] * sq(rng) * sq(rng) * (sq(rng) == 4 ? p * p : 1));
  return transform(diag_q(p, q), random_unimodular(rng, n, p));
}

}  // namespace

TEST_CASE("diagonalize examples") {
  auto id = diag_q(3, {1, 1, 1});
  auto d = diagonalize(id);
  for (auto& c : d.classes) CHECK(c.name() == "1");
  auto hyp = gram_of(5, {{0, 1}, {1, 0}});
  auto dh = diagonalize(hyp);
  CHECK(dh.classes[0] * dh.classes[1] == SquareClass::of_minus_one(5));
  for (int n = 3; n <= 7; ++n) {
    auto v = standard_space(3, n, DetSelector::minus);
    auto dv = diagonalize(v);
    int total = 0;
    for (auto& q : dv.q_values) total += q.valuation();
    CHECK(total % 2 == 0);
    auto check = dv.basis.transpose() * v.gram() * dv.basis;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) CHECK(check(i, j).is_zero());
  }
}

TEST_CASE("invariants examples") {
  for (int p : {3, 5, 7}) {
    auto s = diag_q(p, {1, -1});
    auto inv = s.invariants();
    CHECK(inv.det == SquareClass::of_minus_one(p));
    CHECK(inv.hasse == 1);
    auto one = diag_q(p, {1, 1, 1}).invariants();
    CHECK(one.hasse == 1);
    for (int n = 3; n <= 7; ++n)
      for (auto sel : {DetSelector::plus, DetSelector::minus}) {
        auto v = standard_space(p, n, sel);
        CHECK(v.invariants().hasse == 1);
        // (-1)^{floor(n/2)} det is a square exactly for "plus"
        SquareClass sign = (n / 2) % 2 ? SquareClass::of_minus_one(p) : SquareClass{};
        CHECK((sign * v.invariants().det).is_square() == (sel == DetSelector::plus));
        CHECK((sign * v.invariants().det).odd_valuation == false);
      }
  }
}

TEST_CASE("isotropy tables agree with brute force") {
  for (int p : {3, 5}) {
    auto reps = class_reps(p);
    for (int n = 2; n <= (p == 3 ? 4 : 3); ++n) {
      std::vector<int> idx(n, 0);
      while (true) {
        std::vector<long long> q;
        for (int i : idx) q.push_back(reps[i]);
        auto s = diag_q(p, q);
        bool expected = isotropic_bruteforce(q, p);
        CAPTURE(p);
        CAPTURE(n);
        CHECK(is_isotropic(s) == expected);
        auto v = find_isotropic_vector(s);
        CHECK(v.has_value() == expected);
        if (v) CHECK(s.q_value(*v).is_zero());
        int k = 0;
        while (k < n && ++idx[k] == 4) idx[k++] = 0;
        if (k == n) break;
      }
    }
  }
}

TEST_CASE("quaternion norm form is anisotropic") {
  for (int p : {3, 5, 7}) {
    long long u = least_nonresidue(p);
    auto s = diag_q(p, {1, -u, -p, u * p});
    CHECK(s.invariants().det.is_square());
    CHECK(!is_isotropic(s));
    CHECK(!find_isotropic_vector(s).has_value());
    auto w = witt_decompose(s);
    CHECK(w.witt_index() == 0);
    CHECK(w.kernel.dim() == 4);
    CHECK(isometric(w.kernel, s));
  }
}

TEST_CASE("find_isotropic_vector examples") {
  auto hyp = gram_of(3, {{0, 1}, {1, 0}});
  auto v = find_isotropic_vector(hyp);
  REQUIRE(v);
  CHECK((*v)[0] == PadicElement::from_int(3, 1));
  CHECK((*v)[1].is_zero());
  auto d = diag_q(3, {1, -1});
  auto w = find_isotropic_vector(d);
  REQUIRE(w);
  CHECK((*w)[0] == PadicElement::from_int(3, 1));
  CHECK((*w)[1] == PadicElement::from_int(3, 1));
  for (int p : {3, 5, 7}) {
    auto s = diag_q(p, {1, 1, 1, 1, p});
    auto x = find_isotropic_vector(s);
    REQUIRE(x);
    CHECK(s.q_value(*x).is_zero());
    int mv = 1000;
    for (auto& c : *x) mv = std::min(mv, c.valuation());
    CHECK(mv == 0);
  }
}

TEST_CASE("dimension five is always isotropic") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    int p = trial % 2 ? 3 : 5;
    auto s = random_space(rng, 5, p);
    CHECK(is_isotropic(s));
    auto v = find_isotropic_vector(s);
    REQUIRE(v);
    CHECK(s.q_value(*v).is_zero());
  }
}

TEST_CASE("witt decomposition") {
  auto hyp = gram_of(3, {{0, 1}, {1, 0}});
  auto w = witt_decompose(hyp);
  CHECK(w.witt_index() == 1);
  CHECK(w.kernel.dim() == 0);
  std::mt19937 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    int p = trial % 2 ? 3 : 5;
    int n = 2 + trial % 5;
    auto s = random_space(rng, n, p);
    auto wd = witt_decompose(s);
    CHECK(wd.kernel.dim() <= 4);
    CHECK(n - 2 * wd.witt_index() == wd.kernel.dim());
    if (wd.kernel.dim()) CHECK(!is_isotropic(wd.kernel));
    for (int i = 0; i < wd.witt_index(); ++i) {
      CHECK(s.q_value(wd.e[i]).is_zero());
      CHECK(s.q_value(wd.f[i]).is_zero());
      for (int j = 0; j < wd.witt_index(); ++j) {
        auto b = s.bracket(wd.e[i], wd.f[j]);
        if (i == j)
          CHECK(b == PadicElement::from_int(p, 1));
        else
          CHECK(b.is_zero());
      }
    }
    // reassemble: hyperbolic planes + kernel
    std::vector<PVector> cols;
    for (int i = 0; i < wd.witt_index(); ++i) {
      cols.push_back(wd.e[i]);
      cols.push_back(wd.f[i]);
    }
    for (std::size_t j = 0; j < wd.kernel_basis.cols(); ++j) cols.push_back(wd.kernel_basis.column(j));
    auto rebuilt = s.restrict_to(columns(cols, p, n));
    CHECK(isometric(rebuilt, s));
    CHECK(rebuilt.invariants().witt_index == s.invariants().witt_index);
  }
}

TEST_CASE("twisted space witt index for n = 5") {
  for (int p : {3, 5})
    for (auto sel : {DetSelector::plus, DetSelector::minus}) {
      auto v = standard_space(p, 5, sel);
      auto vp = flip_hasse(v);
      auto wd = witt_decompose(vp);
      CHECK((wd.kernel.dim() == 1 || wd.kernel.dim() == 3));
      CHECK(wd.witt_index() == (5 - wd.kernel.dim()) / 2);
      CHECK(v.invariants().witt_index == 2);
      CHECK(vp.invariants().witt_index == 1);
    }
}

TEST_CASE("isometry checks") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int p = trial % 2 ? 3 : 5;
    int n = 3 + trial % 4;
    auto s = random_space(rng, n, p);
    auto t = transform(s, random_unimodular(rng, n, p));
    CHECK(isometric(s, t));
    auto f = flip_hasse(s);
    CHECK(!isometric(s, f));
    CHECK(f.invariants().det == s.invariants().det);
    CHECK(f.invariants().hasse == -s.invariants().hasse);
    CHECK(isometric(flip_hasse(f), s));
    // Hasse invariant does not depend on the diagonalization
    CHECK(t.invariants().hasse == s.invariants().hasse);
  }
  CHECK(isometric(diag_q(5, {1, -1}), gram_of(5, {{0, 1}, {1, 0}})));
  auto fl = flip_hasse(gram_of(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})).invariants();
  CHECK(fl.n == 3);
  CHECK(fl.det.is_square());
  CHECK(fl.hasse == -1);
  CHECK_THROWS_AS(flip_hasse(diag_q(3, {1, 1})), DimensionTooSmall);
}

TEST_CASE("classification soundness via witt transport") {
  // Equal invariants <=> equal Witt index and isometric anisotropic kernels.
  std::mt19937 rng(37);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 200; ++trial) {
      int p = trial % 2 ? 3 : 5;
      auto a = random_space(rng, n, p), b = random_space(rng, n, p);
      auto wa = witt_decompose(a), wb = witt_decompose(b);
      bool transport = wa.witt_index() == wb.witt_index() &&
                       (wa.kernel.dim() == 0 || isometric(wa.kernel, wb.kernel));
      CHECK(isometric(a, b) == transport);
    }
}

TEST_CASE("precision exhaustion is reported") {
  auto g = pmatrix_identity(3, 2);
  g(0, 0) = PadicElement::from_int(3, 2).truncate(1);
  CHECK_THROWS_AS(QpQuadSpace(g).invariants(), PrecisionExhausted);
}
