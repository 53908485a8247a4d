#include <random>

#include "doctest.h"
#include "gspin/errors.hpp"
#include "gspin/padic.hpp"

using namespace gspin;

namespace {

// Schoolbook base-p product of two little-endian digit strings, truncated.
std::vector<int> schoolbook(const std::vector<int>& a, const std::vector<int>& b, int p, int n) {
  std::vector<long long> acc(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; i + j < n; ++j) acc[i + j] += static_cast<long long>(a[i]) * b[j];
  std::vector<int> out(n);
  long long carry = 0;
  for (int i = 0; i < n; ++i) {
    long long v = acc[i] + carry;
    out[i] = static_cast<int>(v % p);
    carry = v / p;
  }
  return out;
}

std::vector<int> digits_of(const PadicElement& x, int n) {
  std::vector<int> out(n, 0);
  auto d = x.digits();
  for (int i = 0; i < n && i < static_cast<int>(d.size()); ++i) out[i] = d[i][0];
  return out;
}

// Primitive solvability of z^2 = a x^2 + b y^2 modulo p^3; decides the
// Hilbert symbol when a and b have valuation at most 1.
int hilbert_bruteforce(long long a, long long b, int p) {
  long long m = static_cast<long long>(p) * p * p;
  std::vector<char> is_unit_square(m, 0), is_square(m, 0);
  std::vector<std::vector<long long>> roots(m);
  for (long long z = 0; z < m; ++z) roots[(z * z) % m].push_back(z);
  for (long long x = 0; x < m; ++x)
    for (long long y = 0; y < m; ++y) {
      long long rhs = ((a % m + m) % m * (x * x % m) + (b % m + m) % m * (y * y % m)) % m;
      for (long long z : roots[rhs])
        if (x % p || y % p || z % p) return 1;
    }
  return -1;
}

PadicElement random_element(std::mt19937& rng, int p, int f = 1) {
  std::uniform_int_distribution<int> digit(0, p - 1), val(-3, 3);
  std::vector<int> d0(10), d1(10);
  for (auto& d : d0) d = digit(rng);
  for (auto& d : d1) d = digit(rng);
  d0[0] = 1 + digit(rng) % (p - 1);
  PadicElement a = PadicElement::from_digits(p, d0, val(rng), 1);
  if (f == 1) return a;
  PadicElement b = PadicElement::from_digits(p, d1, a.valuation(), 1);
  return PadicElement::from_components(a, b);
}

}  // namespace

TEST_CASE("inverse pairs") {
  for (int p : {3, 5, 7}) {
    auto one = PadicElement::from_int(p, 1);
    CHECK(one.inverse() == one);
    CHECK(one.inverse().precision() == default_precision(p));
    auto pp = PadicElement::from_int(p, p);
    auto prod = pp * pp.inverse();
    CHECK(prod == one);
    CHECK(prod.valuation() == 0);
  }
}

TEST_CASE("schoolbook product oracle") {
  for (int p : {3, 5}) {
    const int n = 24;
    auto a = PadicElement::from_int(p, 1 + p);
    auto b = PadicElement::from_int(p, 1 - p);
    auto prod = a * b;
    auto expected = schoolbook(digits_of(a, n), digits_of(b, n), p, n);
    CHECK(digits_of(prod, n) == expected);
    CHECK(digits_of(PadicElement::from_int(p, 1 - static_cast<long long>(p) * p), n) == expected);
  }
}

TEST_CASE("precision tracking under cancellation") {
  int p = 3;
  auto one = PadicElement::from_int(p, 1);
  auto x = one + PadicElement::from_int(p, 2 * 243);  // 1 + 2*3^5
  auto d = x - one;
  CHECK(d.valuation() == 5);
  CHECK(d.precision() == 24 - 5);
  CHECK((x - x).is_zero());
  auto t = x.truncate(3);
  CHECK(t.precision() == 3);
  CHECK((t - one).is_zero());
  CHECK(one.shift(2).valuation() == 2);
}

TEST_CASE("precision cap by prime") {
  CHECK(default_precision(3) == 24);
  CHECK(default_precision(5) == 24);
  CHECK(default_precision(7) == 22);
  CHECK_THROWS_AS(PadicElement::from_int(7, 1, 1, 23), InputError);
  CHECK_THROWS_AS(PadicElement::from_int(9, 1), InputError);
}

TEST_CASE("mixed fields are rejected") {
  auto a = PadicElement::from_int(3, 2);
  auto b = PadicElement::from_int(5, 2);
  CHECK_THROWS_AS(a + b, MixedField);
  CHECK_THROWS_AS(a * a.embed(), MixedField);
  CHECK_THROWS_AS(PadicElement::zero(3).inverse(), PrecisionExhausted);
}

TEST_CASE("frobenius") {
  for (int p : {3, 5, 7}) {
    auto seven = PadicElement::from_int(p, 7, 2);
    CHECK(seven.frobenius() == seven);
    auto w = PadicElement::generator(p);
    auto wp = w;
    for (int i = 1; i < p; ++i) wp *= w;
    auto fw = w.frobenius();
    CHECK(fw.digits()[0] == wp.digits()[0]);
    CHECK(fw.valuation() == 0);
    std::mt19937 rng(11 + p);
    for (int trial = 0; trial < 50; ++trial) {
      auto a = random_element(rng, p, 2), b = random_element(rng, p, 2);
      CHECK(a.frobenius().frobenius() == a);
      CHECK((a * b).frobenius() == a.frobenius() * b.frobenius());
      CHECK((a + b).frobenius() == a.frobenius() + b.frobenius());
      CHECK(a.inverse().frobenius() == a.frobenius().inverse());
      auto fixed = a + a.frobenius();
      CHECK(fixed.is_rational());
    }
    // Fixed space of sigma on F_{p^2} = F_p<1, w>: rank of (sigma - 1) is 1.
    auto one = PadicElement::from_int(p, 1, 2);
    int rank = 0;
    for (const auto& e : {one, w}) {
      auto d = e.frobenius() - e;
      if (!d.is_zero() && d.valuation() == 0) ++rank;
    }
    CHECK(rank == 1);
  }
}

TEST_CASE("embedding is compatible") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_element(rng, 5), b = random_element(rng, 5);
    CHECK((a * b).embed() == a.embed() * b.embed());
    CHECK((a + b).embed() == a.embed() + b.embed());
    CHECK((a / b).embed() == a.embed() / b.embed());
  }
}

TEST_CASE("field axioms on random elements") {
  std::mt19937 rng(3);
  for (int f : {1, 2})
    for (int trial = 0; trial < 100; ++trial) {
      auto a = random_element(rng, 3, f), b = random_element(rng, 3, f),
           c = random_element(rng, 3, f);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b).valuation() == a.valuation() + b.valuation());
      CHECK(a * a.inverse() == PadicElement::from_int(3, 1, f));
    }
}

TEST_CASE("square classes") {
  CHECK(square_class(PadicElement::from_int(3, 9)).name() == "1");
  CHECK(square_class(PadicElement::from_int(3, 3)).name() == "p");
  CHECK(square_class(PadicElement::from_int(3, 18)).name() == "u");
  CHECK(square_class(PadicElement::from_int(5, 10)).name() == "up");
  CHECK_THROWS_AS(square_class(PadicElement::from_int(3, 1).truncate(1)), PrecisionExhausted);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_element(rng, 5), b = random_element(rng, 5);
    CHECK(square_class(a * b) == square_class(a) * square_class(b));
  }
}

TEST_CASE("hilbert symbol against brute force") {
  CHECK(hilbert_bruteforce(2, 3, 3) == -1);
  CHECK(hilbert_symbol(PadicElement::from_int(3, 2), PadicElement::from_int(3, 3)) == -1);
  CHECK(hilbert_symbol(PadicElement::from_int(3, 3), PadicElement::from_int(3, 3)) == -1);
  for (int p : {3, 5}) {
    for (auto a : SquareClass::all())
      for (auto b : SquareClass::all()) {
        long long ra = a.nonsquare_unit ? least_nonresidue(p) : 1;
        long long rb = b.nonsquare_unit ? least_nonresidue(p) : 1;
        if (a.odd_valuation) ra *= p;
        if (b.odd_valuation) rb *= p;
        CAPTURE(p);
        CAPTURE(a.name());
        CAPTURE(b.name());
        CHECK(hilbert_symbol(a, b, p) == hilbert_bruteforce(ra, rb, p));
      }
  }
}

TEST_CASE("hilbert symbol properties over all classes") {
  for (int p : {3, 5, 7, 11}) {
    auto all = SquareClass::all();
    for (auto a : all) {
      CHECK(hilbert_symbol(a, SquareClass{}, p) == 1);
      CHECK(hilbert_symbol(a, a * SquareClass::of_minus_one(p), p) == 1);
      for (auto b : all) {
        CHECK(hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p));
        for (auto c : all)
          CHECK(hilbert_symbol(a, b * c, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a, c, p));
      }
    }
  }
}

TEST_CASE("text encoding round trip") {
  std::mt19937 rng(9);
  for (int f : {1, 2})
    for (int trial = 0; trial < 50; ++trial) {
      auto a = random_element(rng, 5, f);
      auto s = a.to_string();
      CHECK(PadicElement::parse(5, s, f) == a);
    }
  CHECK(PadicElement::parse(3, "1/3") == PadicElement::from_int(3, 3).inverse());
  CHECK(PadicElement::parse(3, "-7") == PadicElement::from_int(3, -7));
  CHECK(PadicElement::parse(3, "0").is_zero());
  CHECK(PadicElement::parse(3, "2,1@1") == PadicElement::from_int(3, 15));
  CHECK_THROWS_AS(PadicElement::parse(3, "abc"), InputError);
  CHECK_THROWS_AS(PadicElement::parse(3, "5@0"), InputError);
}

TEST_CASE("canonical digit representatives") {
  auto x = PadicElement::from_int(3, -1);
  auto r = x.digits_below(2);
  CHECK(r == PadicElement::from_int(3, 8));
  CHECK(x.residue() == 2);
  CHECK(PadicElement::from_int(3, 10).residue_mod(2) == 1);
  CHECK(PadicElement::from_int(3, 9).digits_below(2).is_zero());
}
