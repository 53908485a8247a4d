#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace gspin {

inline constexpr int kDefaultPrecision = 24;

// Largest N with p^N < 2^62; unit parts are stored as residues mod p^N.
int max_precision(int p);
// min(kDefaultPrecision, max_precision(p)).
int default_precision(int p);

bool is_odd_prime(long long p);

// c with x^2 + c the lexicographically least monic irreducible quadratic
// over F_p, so that Q_{p^2} = Q_p(w) with w^2 = -c.
int quadratic_nonresidue_constant(int p);
// Least quadratic nonresidue mod p.
int least_nonresidue(int p);
// Legendre symbol of a mod p (0 if p | a).
int legendre(long long a, int p);

// Element of Q_p (f = 1) or Q_{p^2} (f = 2) with capped relative precision.
//
// A nonzero element is p^v * u with u a unit known modulo p^N; for f = 2,
// u = u0 + u1*w. Zero is exact. A sum whose known digits all cancel is
// returned as exact zero.
class PadicElement {
 public:
  static constexpr int kZeroValuation = std::numeric_limits<int>::max();

  PadicElement() = default;

  static PadicElement zero(int p, int f = 1);
  static PadicElement from_int(int p, long long value, int f = 1, int precision = 0);
  static PadicElement from_rational(int p, const mpq_class& value, int f = 1,
                                    int precision = 0);
  static PadicElement from_mpz(int p, const mpz_class& value, int f = 1, int precision = 0);
  // p^valuation * (sum digits[i] p^i), treated as exact.
  static PadicElement from_digits(int p, const std::vector<int>& digits, int valuation,
                                  int f = 1, int precision = 0);
  // a + b*w with a, b in Q_p.
  static PadicElement from_components(const PadicElement& a, const PadicElement& b);
  // The generator w of Q_{p^2}.
  static PadicElement generator(int p, int precision = 0);
  static PadicElement power_of_p(int p, int exponent, int f = 1, int precision = 0);

  int prime() const { return p_; }
  int degree() const { return f_; }
  bool is_zero() const { return val_ == kZeroValuation; }
  bool is_unit() const { return val_ == 0; }
  int valuation() const { return val_; }
  // Number of significant digits (cap for exact zero).
  int precision() const;
  // valuation + precision; the element is known modulo p^(this).
  int absolute_precision() const;

  // Little-endian base-p digits of the unit part; one pair per digit.
  std::vector<std::array<int, 2>> digits() const;
  // Unit residues u0, u1 modulo p^precision.
  std::uint64_t unit_residue(int component) const { return u_[component]; }

  PadicElement operator-() const;
  PadicElement operator+(const PadicElement& o) const;
  PadicElement operator-(const PadicElement& o) const;
  PadicElement operator*(const PadicElement& o) const;
  PadicElement operator/(const PadicElement& o) const;
  PadicElement& operator+=(const PadicElement& o) { return *this = *this + o; }
  PadicElement& operator-=(const PadicElement& o) { return *this = *this - o; }
  PadicElement& operator*=(const PadicElement& o) { return *this = *this * o; }
  PadicElement& operator/=(const PadicElement& o) { return *this = *this / o; }

  PadicElement inverse() const;
  PadicElement frobenius() const;
  // Multiply by p^k without touching the unit part.
  PadicElement shift(int k) const;
  // Drop significant digits down to at most `precision`.
  PadicElement truncate(int precision) const;
  // Q_p -> Q_{p^2}.
  PadicElement embed() const;
  // i-th Q_p coordinate of a + b*w.
  PadicElement component(int i) const;
  bool is_rational() const;  // lies in Q_p

  // Equality modulo the common known precision.
  bool operator==(const PadicElement& o) const;
  bool operator!=(const PadicElement& o) const { return !(*this == o); }

  // The integer sum_{i < k} d_i p^i of the digits of this element below
  // p^k, as an exact element; used for canonical representatives.
  PadicElement digits_below(int k) const;
  // Reduction mod p of a p-integral element of Q_p (0..p-1).
  int residue() const;
  // p-integral element of Q_p modulo p^k as an integer in [0, p^k).
  std::uint64_t residue_mod(int k) const;

  // "d,d,...@v" encoding (f = 1) or "a:b,a:b,...@v" (f = 2); "0" for zero.
  std::string to_string() const;
  // Parses the digit encoding, "a/b" rationals, or plain integers.
  static PadicElement parse(int p, const std::string& text, int f = 1, int precision = 0);

 private:
  PadicElement(int p, int f, int val, int prec, std::uint64_t u0, std::uint64_t u1)
      : p_(p), f_(f), val_(val), prec_(prec), u_{u0, u1} {}
  void check_compatible(const PadicElement& o) const;
  static PadicElement normalized(int p, int f, int val, int len, std::uint64_t w0,
                                 std::uint64_t w1);

  int p_ = 0;
  int f_ = 1;
  int val_ = kZeroValuation;
  int prec_ = 0;
  std::uint64_t u_[2] = {0, 0};
};

// Square class in Q_p^x / (Q_p^x)^2 for odd p: {1, u, p, up}.
struct SquareClass {
  bool odd_valuation = false;
  bool nonsquare_unit = false;

  SquareClass operator*(const SquareClass& o) const {
    return {odd_valuation != o.odd_valuation, nonsquare_unit != o.nonsquare_unit};
  }
  bool operator==(const SquareClass&) const = default;
  bool is_square() const { return !odd_valuation && !nonsquare_unit; }
  // "1", "u", "p", "up".
  std::string name() const;
  // Representative 1, u, p or up with u the least nonresidue.
  PadicElement representative(int p, int precision = 0) const;
  static SquareClass of_minus_one(int p);
  static std::vector<SquareClass> all();
};

SquareClass square_class(const PadicElement& a);
int hilbert_symbol(const PadicElement& a, const PadicElement& b);
int hilbert_symbol(const SquareClass& a, const SquareClass& b, int p);

// p-adic valuation of a nonzero rational.
int valuation(const mpq_class& q, int p);
int valuation(const mpz_class& z, int p);

}  // namespace gspin
