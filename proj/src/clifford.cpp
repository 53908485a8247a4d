#include "gspin/clifford.hpp"

#include <bit>
#include <sstream>

#include "gspin/errors.hpp"
#include "gspin/finite_field.hpp"

namespace gspin {

namespace {

using Terms = CliffordElement::Terms;

void add_term(Terms& t, std::uint32_t mask, const mpq_class& c) {
  if (c == 0) return;
  auto [it, inserted] = t.emplace(mask, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}

int top_bit(std::uint32_t mask) { return 31 - std::countl_zero(mask); }

}  // namespace

std::string mask_name(std::uint32_t mask) {
  if (!mask) return "1";
  std::string s;
  for (int i = 0; i < 32; ++i)
    if (mask >> i & 1u) s += "x" + std::to_string(i + 1);
  return s;
}

// ---- algebra ----

CliffordPtr CliffordAlgebra::create(int p, const QMatrix& gram) {
  if (!is_odd_prime(p)) throw InputError("p must be an odd prime");
  if (gram.rows() != gram.cols() || gram.rows() == 0) throw InputError("Gram matrix must be square");
  if (gram.rows() > 10) throw TooLarge("Clifford tables are built for n <= 10");
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (gram(i, j) != gram(j, i)) throw InputError("Gram matrix must be symmetric");
  std::shared_ptr<CliffordAlgebra> alg(new CliffordAlgebra());
  alg->p_ = p;
  alg->n_ = static_cast<int>(gram.rows());
  alg->gram_ = gram;
  alg->build();
  return alg;
}

CliffordPtr CliffordAlgebra::standard(int p, int n, DetSelector sel) {
  return create(p, standard_gram(p, n, sel));
}

void CliffordAlgebra::build() {
  std::uint32_t N = size();
  // x_S * x_j for every monomial S and generator j (0-based)
  std::vector<Terms> rgen(static_cast<std::size_t>(N) * n_);
  for (std::uint32_t S = 0; S < N; ++S)
    for (int j = 0; j < n_; ++j) {
      Terms& out = rgen[static_cast<std::size_t>(S) * n_ + j];
      if (!S) {
        out[1u << j] = 1;
        continue;
      }
      int top = top_bit(S);
      std::uint32_t rest = S ^ (1u << top);
      if (top < j) {
        out[S | 1u << j] = 1;
      } else if (top == j) {
        add_term(out, rest, q_value(j));
      } else {
        // x_rest x_top x_j = -(x_rest x_j) x_top + [x_top, x_j] x_rest
        for (auto& [T, c] : rgen[static_cast<std::size_t>(rest) * n_ + j]) add_term(out, T | 1u << top, -c);
        add_term(out, rest, gram_(top, j));
      }
    }
  auto times_gen = [&](const Terms& a, int j) {
    Terms out;
    for (auto& [S, c] : a)
      for (auto& [T, d] : rgen[static_cast<std::size_t>(S) * n_ + j]) add_term(out, T, c * d);
    return out;
  };
  products_.assign(static_cast<std::size_t>(N) * N, Terms{});
  for (std::uint32_t S = 0; S < N; ++S)
    for (std::uint32_t T = 0; T < N; ++T) {
      Terms cur{{S, mpq_class(1)}};
      for (int j = 0; j < n_; ++j)
        if (T >> j & 1u) cur = times_gen(cur, j);
      products_[static_cast<std::size_t>(S) * N + T] = std::move(cur);
    }
  reversed_.assign(N, Terms{});
  for (std::uint32_t S = 0; S < N; ++S) {
    Terms cur{{0u, mpq_class(1)}};
    for (int j = n_ - 1; j >= 0; --j)
      if (S >> j & 1u) cur = times_gen(cur, j);
    reversed_[S] = std::move(cur);
  }
  traces_.assign(N, mpq_class(0));
  for (std::uint32_t S = 0; S < N; ++S)
    for (std::uint32_t T = 0; T < N; ++T) {
      const Terms& pr = products_[static_cast<std::size_t>(S) * N + T];
      auto it = pr.find(T);
      if (it != pr.end()) traces_[S] += it->second;
    }
}

CliffordElement CliffordAlgebra::zero() const { return CliffordElement(shared_from_this(), {}); }

CliffordElement CliffordAlgebra::scalar(const mpq_class& t) const {
  Terms terms;
  add_term(terms, 0, t);
  return CliffordElement(shared_from_this(), terms);
}

CliffordElement CliffordAlgebra::generator(int i) const {
  if (i < 1 || i > n_) throw InputError("generator index out of range");
  return monomial(1u << (i - 1));
}

CliffordElement CliffordAlgebra::monomial(std::uint32_t mask) const {
  if (mask >= size()) throw InputError("monomial out of range");
  return CliffordElement(shared_from_this(), {{mask, mpq_class(1)}});
}

CliffordElement CliffordAlgebra::vector(const std::vector<mpq_class>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != n_) throw InputError("vector has the wrong length");
  Terms terms;
  for (int i = 0; i < n_; ++i) add_term(terms, 1u << i, coeffs[i]);
  return CliffordElement(shared_from_this(), terms);
}

// ---- elements ----

CliffordElement::CliffordElement(CliffordPtr alg, Terms terms) : alg_(std::move(alg)), terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = it->second == 0 ? terms_.erase(it) : std::next(it);
}

mpq_class CliffordElement::coeff(std::uint32_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

bool CliffordElement::is_scalar() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }

bool CliffordElement::is_even() const {
  for (auto& [S, c] : terms_)
    if (std::popcount(S) % 2) return false;
  return true;
}

bool CliffordElement::is_odd() const {
  for (auto& [S, c] : terms_)
    if (std::popcount(S) % 2 == 0) return false;
  return true;
}

std::optional<std::vector<mpq_class>> CliffordElement::as_vector() const {
  std::vector<mpq_class> v(alg_->dim(), mpq_class(0));
  for (auto& [S, c] : terms_) {
    if (std::popcount(S) != 1) return std::nullopt;
    v[std::countr_zero(S)] = c;
  }
  return v;
}

CliffordElement CliffordElement::operator+(const CliffordElement& o) const {
  Terms t = terms_;
  for (auto& [S, c] : o.terms_) add_term(t, S, c);
  return CliffordElement(alg_ ? alg_ : o.alg_, std::move(t));
}

CliffordElement CliffordElement::operator-(const CliffordElement& o) const { return *this + (-o); }

CliffordElement CliffordElement::operator-() const {
  Terms t = terms_;
  for (auto& [S, c] : t) c = -c;
  return CliffordElement(alg_, std::move(t));
}

CliffordElement CliffordElement::operator*(const CliffordElement& o) const {
  const CliffordPtr& alg = alg_ ? alg_ : o.alg_;
  if (alg_ && o.alg_ && alg_ != o.alg_) throw MixedField("elements of different Clifford algebras");
  Terms t;
  for (auto& [S, c] : terms_)
    for (auto& [T, d] : o.terms_) {
      mpq_class cd = c * d;
      for (auto& [U, e] : alg->monomial_product(S, T)) add_term(t, U, cd * e);
    }
  return CliffordElement(alg, std::move(t));
}

CliffordElement CliffordElement::operator*(const mpq_class& s) const {
  Terms t = terms_;
  for (auto& [S, c] : t) c *= s;
  return CliffordElement(alg_, std::move(t));
}

std::string CliffordElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [S, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str() << "*" << mask_name(S);
  }
  return os.str();
}

// ---- operations ----

CliffordElement involution(const CliffordElement& a) {
  Terms t;
  for (auto& [S, c] : a.terms())
    for (auto& [T, d] : a.algebra()->monomial_reverse(S)) add_term(t, T, c * d);
  return CliffordElement(a.algebra(), std::move(t));
}

mpq_class reduced_trace(const CliffordElement& a) {
  if (a.is_zero()) return 0;
  const auto& alg = *a.algebra();
  mpq_class s = 0;
  for (auto& [S, c] : a.terms()) s += c * alg.monomial_trace(S);
  return s / mpq_class(mpz_class(1) << (alg.dim() / 2));
}

QMatrix left_regular(const CliffordElement& a) {
  const auto& alg = *a.algebra();
  std::uint32_t N = alg.size();
  QMatrix m(N, N, mpq_class(0));
  for (std::uint32_t T = 0; T < N; ++T)
    for (auto& [S, c] : a.terms())
      for (auto& [U, d] : alg.monomial_product(S, T)) m(U, T) += c * d;
  return m;
}

std::vector<CliffordElement> center(const CliffordPtr& alg) {
  std::uint32_t N = alg->size();
  int n = alg->dim();
  QMatrix eq(static_cast<std::size_t>(n) * N, N, mpq_class(0));
  for (int i = 0; i < n; ++i) {
    std::uint32_t g = 1u << i;
    for (std::uint32_t S = 0; S < N; ++S) {
      for (auto& [U, c] : alg->monomial_product(S, g)) eq(static_cast<std::size_t>(i) * N + U, S) += c;
      for (auto& [U, c] : alg->monomial_product(g, S)) eq(static_cast<std::size_t>(i) * N + U, S) -= c;
    }
  }
  QMatrix k = qkernel(eq);
  std::vector<CliffordElement> out;
  for (std::size_t j = 0; j < k.cols(); ++j) {
    Terms t;
    for (std::uint32_t S = 0; S < N; ++S) add_term(t, S, k(S, j));
    out.emplace_back(alg, std::move(t));
  }
  return out;
}

std::optional<CliffordElement> inverse(const CliffordElement& a) {
  const CliffordPtr& alg = a.algebra();
  if (!alg || a.is_zero()) return std::nullopt;
  // Elements with a scalar norm a* a invert by the involution.
  CliffordElement norm = involution(a) * a;
  if (norm.is_scalar() && !norm.is_zero()) return involution(a) * (1 / norm.coeff(0));
  std::uint32_t N = alg->size();
  QMatrix rhs(N, 1, mpq_class(0));
  rhs(0, 0) = 1;
  auto x = qsolve(left_regular(a), rhs);
  if (!x) return std::nullopt;
  Terms t;
  for (std::uint32_t S = 0; S < N; ++S) add_term(t, S, (*x)(S, 0));
  return CliffordElement(alg, std::move(t));
}

GSpinCheck is_gspin(const CliffordElement& g) {
  GSpinCheck out;
  if (!g.algebra() || g.is_zero()) {
    out.reason = "zero is not invertible";
    return out;
  }
  if (!g.is_even()) {
    out.reason = "not even";
    return out;
  }
  auto ginv = inverse(g);
  if (!ginv) {
    out.reason = "not invertible";
    return out;
  }
  const auto& alg = *g.algebra();
  int n = alg.dim();
  QMatrix action(n, n, mpq_class(0));
  for (int i = 1; i <= n; ++i) {
    auto v = (g * alg.generator(i) * *ginv).as_vector();
    if (!v) {
      out.reason = "conjugation does not preserve V (x" + std::to_string(i) + ")";
      return out;
    }
    for (int r = 0; r < n; ++r) action(r, i - 1) = (*v)[r];
  }
  CliffordElement norm = involution(g) * g;
  if (!norm.is_scalar()) {
    out.reason = "g* g is not a scalar";
    return out;
  }
  out.element = GSpinElement{g, norm.coeff(0), action};
  return out;
}

GSpinElement gspin_product(const GSpinElement& a, const GSpinElement& b) {
  return GSpinElement{a.g * b.g, a.eta * b.eta, a.action * b.action};
}

CliffordElement mu(const CliffordPtr& alg, const mpq_class& t) {
  if (t == 0) throw InputError("mu(t) needs t invertible");
  if (alg->dim() < 2) throw DimensionTooSmall("mu needs n >= 2");
  auto x1 = alg->generator(1), x2 = alg->generator(2);
  return x1 * x2 * (1 / t) + x2 * x1;
}

CliffordElement basic_b(const CliffordPtr& alg) {
  if (alg->dim() < 3) throw DimensionTooSmall("b needs n >= 3");
  auto x1 = alg->generator(1), x2 = alg->generator(2), x3 = alg->generator(3);
  return x3 * (x1 * mpq_class(1, alg->prime()) + x2);
}

CliffordElement default_delta(const CliffordPtr& alg) {
  if (alg->dim() < 3) throw DimensionTooSmall("delta needs n >= 3");
  return (alg->generator(1) + alg->generator(2)) * alg->generator(3);
}

mpq_class psi_delta(const CliffordElement& c1, const CliffordElement& c2, const CliffordElement& delta) {
  if (involution(delta) != -delta) throw BadDelta("delta* must equal -delta");
  return reduced_trace(c1 * delta * involution(c2));
}

QMatrix psi_matrix(const CliffordPtr& alg, const CliffordElement& delta) {
  if (involution(delta) != -delta) throw BadDelta("delta* must equal -delta");
  std::uint32_t N = alg->size();
  std::vector<CliffordElement> left(N), right(N);
  for (std::uint32_t S = 0; S < N; ++S) {
    left[S] = alg->monomial(S) * delta;
    right[S] = involution(alg->monomial(S));
  }
  mpq_class norm = mpq_class(mpz_class(1) << (alg->dim() / 2));
  QMatrix m(N, N, mpq_class(0));
  for (std::uint32_t S = 0; S < N; ++S)
    for (std::uint32_t T = 0; T < N; ++T) {
      mpq_class s = 0;
      for (auto& [U, c] : left[S].terms())
        for (auto& [W, d] : right[T].terms())
          for (auto& [X, e] : alg->monomial_product(U, W)) s += c * d * e * alg->monomial_trace(X);
      m(S, T) = s / norm;
    }
  return m;
}

PerfectionReport psi_perfection(const CliffordPtr& alg, const CliffordElement& delta) {
  QMatrix m = psi_matrix(alg, delta);
  PerfectionReport r;
  int p = alg->prime();
  r.integral = true;
  for (std::size_t i = 0; i < m.rows() && r.integral; ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!q_is_p_integral(m(i, j), p)) {
        r.integral = false;
        break;
      }
  if (r.integral) {
    FiniteField F(p, 1);
    FqMatrix red(m.rows(), std::vector<int>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) red[i][j] = q_residue(m(i, j), p);
    r.rank_mod_p = fq_rank(F, red);
  }
  r.perfect = r.integral && r.rank_mod_p == static_cast<int>(alg->size());
  return r;
}

std::vector<WeightVector> cocharacter_weights(const CliffordPtr& alg) {
  std::vector<WeightVector> out;
  auto x1 = alg->generator(1), x2 = alg->generator(2);
  std::uint32_t N = alg->size();
  for (std::uint32_t T = 0; T < N; ++T)
    if (!(T & 1u)) out.push_back({x1 * alg->monomial(T), -1});
  for (std::uint32_t T = 0; T < N; ++T)
    if (!(T & 2u)) out.push_back({x2 * alg->monomial(T), 0});
  return out;
}

}  // namespace gspin
