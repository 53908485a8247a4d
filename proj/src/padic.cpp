#include "gspin/padic.hpp"

#include <algorithm>
#include <sstream>

#include "gspin/errors.hpp"

namespace gspin {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 pow_u64(u64 base, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}

u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 m) {
  __int128 t = 0, newt = 1;
  __int128 r = m, newr = a % m;
  while (newr != 0) {
    __int128 q = r / newr;
    __int128 tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw PrecisionExhausted("inverse of a non-unit residue");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

int vp_u64(u64 w, int p) {
  if (w == 0) return PadicElement::kZeroValuation;
  int s = 0;
  while (w % p == 0) {
    w /= p;
    ++s;
  }
  return s;
}

int resolve_precision(int p, int precision) {
  if (!is_odd_prime(p)) throw InputError("p must be an odd prime, got " + std::to_string(p));
  if (precision <= 0) return default_precision(p);
  if (precision > max_precision(p))
    throw InputError("precision " + std::to_string(precision) + " exceeds the cap " +
                     std::to_string(max_precision(p)) + " for p = " + std::to_string(p));
  return precision;
}

int compute_nonresidue_constant(int p) {
  for (int c = 1; c < p; ++c)
    if (legendre(p - c, p) == -1) return c;
  return 1;
}

}  // namespace

bool is_odd_prime(long long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long long d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

int max_precision(int p) {
  int n = 0;
  u128 acc = 1;
  while (acc * static_cast<u128>(p) < (static_cast<u128>(1) << 62)) {
    acc *= p;
    ++n;
  }
  return n;
}

int default_precision(int p) { return std::min(kDefaultPrecision, max_precision(p)); }

int legendre(long long a, int p) {
  long long r = a % p;
  if (r < 0) r += p;
  if (r == 0) return 0;
  u64 e = powmod(static_cast<u64>(r), (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

int least_nonresidue(int p) {
  for (int a = 2; a < p; ++a)
    if (legendre(a, p) == -1) return a;
  return 2;
}

int quadratic_nonresidue_constant(int p) {
  static const std::vector<int> table = [] {
    std::vector<int> t(1024, 0);
    for (int q = 3; q < 1024; q += 2)
      if (is_odd_prime(q)) t[q] = compute_nonresidue_constant(q);
    return t;
  }();
  if (p < 1024) return table[p];
  return compute_nonresidue_constant(p);
}

int valuation(const mpz_class& z, int p) {
  if (z == 0) return PadicElement::kZeroValuation;
  mpz_class tmp = z;
  mpz_class pp = p;
  return static_cast<int>(mpz_remove(tmp.get_mpz_t(), tmp.get_mpz_t(), pp.get_mpz_t()));
}

int valuation(const mpq_class& q, int p) {
  if (q == 0) return PadicElement::kZeroValuation;
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

// ---- PadicElement ----

PadicElement PadicElement::normalized(int p, int f, int val, int len, u64 w0, u64 w1) {
  u64 m = pow_u64(p, len);
  w0 %= m;
  w1 %= m;
  int s = std::min(vp_u64(w0, p), vp_u64(w1, p));
  if (s == kZeroValuation || s >= len) return zero(p, f);
  u64 ps = pow_u64(p, s);
  return PadicElement(p, f, val + s, len - s, w0 / ps, w1 / ps);
}

void PadicElement::check_compatible(const PadicElement& o) const {
  if (p_ != o.p_ || f_ != o.f_)
    throw MixedField("operands live in different fields (p=" + std::to_string(p_) +
                     ",f=" + std::to_string(f_) + " vs p=" + std::to_string(o.p_) +
                     ",f=" + std::to_string(o.f_) + ")");
}

PadicElement PadicElement::zero(int p, int f) {
  if (!is_odd_prime(p)) throw InputError("p must be an odd prime, got " + std::to_string(p));
  if (f != 1 && f != 2) throw InputError("residue degree must be 1 or 2");
  return PadicElement(p, f, kZeroValuation, 0, 0, 0);
}

PadicElement PadicElement::from_int(int p, long long value, int f, int precision) {
  return from_mpz(p, mpz_class(static_cast<long>(value)), f, precision);
}

PadicElement PadicElement::from_mpz(int p, const mpz_class& value, int f, int precision) {
  int n = resolve_precision(p, precision);
  if (value == 0) return zero(p, f);
  int v = gspin::valuation(value, p);
  mpz_class unit = value;
  mpz_class pv;
  mpz_ui_pow_ui(pv.get_mpz_t(), p, v);
  unit /= pv;
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), p, n);
  mpz_class r;
  mpz_mod(r.get_mpz_t(), unit.get_mpz_t(), m.get_mpz_t());
  return PadicElement(p, f, v, n, r.get_ui(), 0);
}

PadicElement PadicElement::from_rational(int p, const mpq_class& value, int f, int precision) {
  int n = resolve_precision(p, precision);
  if (value == 0) return zero(p, f);
  int vn = gspin::valuation(value.get_num(), p);
  int vd = gspin::valuation(value.get_den(), p);
  mpz_class pn, pd;
  mpz_ui_pow_ui(pn.get_mpz_t(), p, vn);
  mpz_ui_pow_ui(pd.get_mpz_t(), p, vd);
  mpz_class num = value.get_num() / pn;
  mpz_class den = value.get_den() / pd;
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), p, n);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  mpz_class r = num * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return PadicElement(p, f, vn - vd, n, r.get_ui(), 0);
}

PadicElement PadicElement::from_digits(int p, const std::vector<int>& digits, int valuation,
                                       int f, int precision) {
  mpz_class acc = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (*it < 0 || *it >= p) throw InputError("digit out of range for p = " + std::to_string(p));
    acc = acc * p + *it;
  }
  return from_mpz(p, acc, f, precision).shift(valuation);
}

PadicElement PadicElement::from_components(const PadicElement& a, const PadicElement& b) {
  if (a.f_ != 1 || b.f_ != 1) throw MixedField("components must lie in Q_p");
  a.check_compatible(b);
  return a.embed() + b.embed() * generator(a.p_, std::min(a.precision(), b.precision()));
}

PadicElement PadicElement::generator(int p, int precision) {
  int n = resolve_precision(p, precision);
  return PadicElement(p, 2, 0, n, 0, 1);
}

PadicElement PadicElement::power_of_p(int p, int exponent, int f, int precision) {
  int n = resolve_precision(p, precision);
  return PadicElement(p, f, exponent, n, 1, 0);
}

int PadicElement::precision() const { return is_zero() ? max_precision(p_) : prec_; }

int PadicElement::absolute_precision() const {
  return is_zero() ? kZeroValuation : val_ + prec_;
}

std::vector<std::array<int, 2>> PadicElement::digits() const {
  std::vector<std::array<int, 2>> out;
  if (is_zero()) return out;
  u64 a = u_[0], b = u_[1];
  for (int i = 0; i < prec_; ++i) {
    out.push_back({static_cast<int>(a % p_), static_cast<int>(b % p_)});
    a /= p_;
    b /= p_;
  }
  return out;
}

PadicElement PadicElement::operator-() const {
  if (is_zero()) return *this;
  u64 m = pow_u64(p_, prec_);
  return PadicElement(p_, f_, val_, prec_, (m - u_[0]) % m, (m - u_[1]) % m);
}

PadicElement PadicElement::operator+(const PadicElement& o) const {
  check_compatible(o);
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  int v = std::min(val_, o.val_);
  int a = std::min(val_ + prec_, o.val_ + o.prec_);
  int len = a - v;
  u64 m = pow_u64(p_, len);
  u64 w[2] = {0, 0};
  for (const PadicElement* x : {this, &o}) {
    int shift = x->val_ - v;
    if (shift >= len) continue;
    u64 keep = pow_u64(p_, len - shift);
    u64 scale = pow_u64(p_, shift);
    for (int c = 0; c < 2; ++c) w[c] = addmod(w[c], (x->u_[c] % keep) * scale, m);
  }
  return normalized(p_, f_, v, len, w[0], w[1]);
}

PadicElement PadicElement::operator-(const PadicElement& o) const { return *this + (-o); }

PadicElement PadicElement::operator*(const PadicElement& o) const {
  check_compatible(o);
  if (is_zero() || o.is_zero()) return zero(p_, f_);
  int n = std::min(prec_, o.prec_);
  u64 m = pow_u64(p_, n);
  u64 a0 = u_[0] % m, a1 = u_[1] % m, b0 = o.u_[0] % m, b1 = o.u_[1] % m;
  if (f_ == 1) return PadicElement(p_, 1, val_ + o.val_, n, mulmod(a0, b0, m), 0);
  u64 c = static_cast<u64>(quadratic_nonresidue_constant(p_)) % m;
  u64 r0 = submod(mulmod(a0, b0, m), mulmod(c, mulmod(a1, b1, m), m), m);
  u64 r1 = addmod(mulmod(a0, b1, m), mulmod(a1, b0, m), m);
  return PadicElement(p_, 2, val_ + o.val_, n, r0, r1);
}

PadicElement PadicElement::inverse() const {
  if (is_zero()) throw PrecisionExhausted("inverse of zero");
  u64 m = pow_u64(p_, prec_);
  if (f_ == 1) return PadicElement(p_, 1, -val_, prec_, invmod(u_[0], m), 0);
  u64 c = static_cast<u64>(quadratic_nonresidue_constant(p_)) % m;
  u64 norm = addmod(mulmod(u_[0], u_[0], m), mulmod(c, mulmod(u_[1], u_[1], m), m), m);
  u64 ninv = invmod(norm, m);
  return PadicElement(p_, 2, -val_, prec_, mulmod(u_[0], ninv, m),
                      mulmod((m - u_[1]) % m, ninv, m));
}

PadicElement PadicElement::operator/(const PadicElement& o) const { return *this * o.inverse(); }

PadicElement PadicElement::frobenius() const {
  if (f_ == 1 || is_zero()) return *this;
  u64 m = pow_u64(p_, prec_);
  return PadicElement(p_, 2, val_, prec_, u_[0], (m - u_[1]) % m);
}

PadicElement PadicElement::shift(int k) const {
  if (is_zero()) return *this;
  PadicElement r = *this;
  r.val_ += k;
  return r;
}

PadicElement PadicElement::truncate(int precision) const {
  if (is_zero() || precision >= prec_) return *this;
  if (precision < 1) throw PrecisionExhausted("truncation below one significant digit");
  return normalized(p_, f_, val_, precision, u_[0], u_[1]);
}

PadicElement PadicElement::embed() const {
  if (f_ == 2) return *this;
  PadicElement r = *this;
  r.f_ = 2;
  return r;
}

PadicElement PadicElement::component(int i) const {
  if (f_ == 1) return i == 0 ? *this : zero(p_, 1);
  if (is_zero()) return zero(p_, 1);
  return normalized(p_, 1, val_, prec_, u_[i], 0);
}

bool PadicElement::is_rational() const { return f_ == 1 || is_zero() || u_[1] == 0; }

bool PadicElement::operator==(const PadicElement& o) const { return (*this - o).is_zero(); }

PadicElement PadicElement::digits_below(int k) const {
  if (is_zero() || val_ >= k) return zero(p_, f_);
  int len = k - val_;
  if (len > prec_)
    throw PrecisionExhausted("need " + std::to_string(len) + " digits, have " +
                             std::to_string(prec_));
  u64 m = pow_u64(p_, len);
  return PadicElement(p_, f_, val_, max_precision(p_), u_[0] % m, u_[1] % m);
}

int PadicElement::residue() const {
  if (is_zero() || val_ > 0) return 0;
  if (val_ < 0) throw InputError("residue of a non-integral element");
  return static_cast<int>(u_[0] % p_);
}

std::uint64_t PadicElement::residue_mod(int k) const {
  if (is_zero() || val_ >= k) return 0;
  if (val_ < 0) throw InputError("residue of a non-integral element");
  int len = k - val_;
  if (len > prec_) throw PrecisionExhausted("residue beyond known digits");
  return (u_[0] % pow_u64(p_, len)) * pow_u64(p_, val_);
}

std::string PadicElement::to_string() const {
  if (is_zero()) return "0";
  auto ds = digits();
  while (ds.size() > 1 && ds.back()[0] == 0 && ds.back()[1] == 0) ds.pop_back();
  std::ostringstream os;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) os << ',';
    os << ds[i][0];
    if (f_ == 2) os << ':' << ds[i][1];
  }
  os << '@' << val_;
  return os.str();
}

PadicElement PadicElement::parse(int p, const std::string& text, int f, int precision) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InputError("empty scalar");
  try {
    auto at = s.find('@');
    if (at != std::string::npos) {
      int v = std::stoi(s.substr(at + 1));
      std::vector<int> d0, d1;
      std::stringstream ss(s.substr(0, at));
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) {
          d0.push_back(std::stoi(tok));
          d1.push_back(0);
        } else {
          d0.push_back(std::stoi(tok.substr(0, colon)));
          d1.push_back(std::stoi(tok.substr(colon + 1)));
        }
      }
      bool has_second = std::any_of(d1.begin(), d1.end(), [](int d) { return d != 0; });
      if (has_second && f == 1) throw InputError("Q_{p^2} digits in a Q_p scalar: " + text);
      PadicElement a = from_digits(p, d0, v, 1, precision);
      if (f == 1) return a;
      PadicElement b = from_digits(p, d1, v, 1, precision);
      return from_components(a, b);
    }
    mpq_class q(s);
    q.canonicalize();
    if (q.get_den() == 0) throw InputError("zero denominator: " + text);
    return from_rational(p, q, f, precision);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("cannot parse scalar '" + text + "'");
  }
}

// ---- square classes ----

std::string SquareClass::name() const {
  if (odd_valuation) return nonsquare_unit ? "up" : "p";
  return nonsquare_unit ? "u" : "1";
}

PadicElement SquareClass::representative(int p, int precision) const {
  long long r = nonsquare_unit ? least_nonresidue(p) : 1;
  if (odd_valuation) r *= p;
  return PadicElement::from_int(p, r, 1, precision);
}

SquareClass SquareClass::of_minus_one(int p) { return {false, legendre(-1, p) == -1}; }

std::vector<SquareClass> SquareClass::all() {
  return {{false, false}, {false, true}, {true, false}, {true, true}};
}

SquareClass square_class(const PadicElement& a) {
  if (a.degree() != 1) throw MixedField("square classes are defined on Q_p only");
  if (a.is_zero()) throw PrecisionExhausted("square class of zero");
  if (a.precision() < 2)
    throw PrecisionExhausted("square class needs at least 2 significant digits");
  int leading = static_cast<int>(a.unit_residue(0) % a.prime());
  return {(a.valuation() % 2) != 0, legendre(leading, a.prime()) == -1};
}

int hilbert_symbol(const SquareClass& a, const SquareClass& b, int p) {
  int alpha = a.odd_valuation ? 1 : 0;
  int beta = b.odd_valuation ? 1 : 0;
  int s = 1;
  if (alpha && beta && ((p - 1) / 2) % 2 == 1) s = -s;
  if (beta && a.nonsquare_unit) s = -s;
  if (alpha && b.nonsquare_unit) s = -s;
  return s;
}

int hilbert_symbol(const PadicElement& a, const PadicElement& b) {
  if (a.prime() != b.prime()) throw MixedField("Hilbert symbol of different primes");
  return hilbert_symbol(square_class(a), square_class(b), a.prime());
}

}  // namespace gspin
