#include "gspin/isocrystal.hpp"

#include "json.hpp"

#include "gspin/errors.hpp"

namespace gspin {

PVector PhiModule::apply(const PVector& v) const {
  PVector s;
  s.reserve(v.size());
  for (auto& x : v) s.push_back(x.frobenius());
  return mat_vec(linear, s);
}

PhiModule phi_from_element(const CliffordPtr& alg, const CliffordElement& g, int precision) {
  auto r = is_gspin(g);
  if (!r) throw InputError("element is not in GSpin: " + r.reason);
  PhiModule m;
  m.p = alg->prime();
  m.n = alg->dim();
  m.precision = precision;
  m.gram_q = alg->gram();
  m.linear_q = r.element->action;
  m.gram = to_padic(m.p, m.gram_q, 2, precision);
  m.linear = to_padic(m.p, m.linear_q, 2, precision);
  return m;
}

PhiModule phi_from_b(const CliffordPtr& alg, int precision) {
  return phi_from_element(alg, basic_b(alg), precision);
}

FixedSpace fixed_points(const PhiModule& m) {
  int n = m.n, p = m.p;
  // B = B0 + B1 w, v = v0 + v1 w, w^2 = -c:
  //   B sigma(v) = (B0 v0 + c B1 v1) + (B1 v0 - B0 v1) w
  PadicElement c = PadicElement::from_int(p, quadratic_nonresidue_constant(p), 1, m.precision);
  PadicElement one = PadicElement::from_int(p, 1, 1, m.precision);
  PMatrix sys = pmatrix_zero(p, 2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PadicElement b0 = m.linear(i, j).component(0), b1 = m.linear(i, j).component(1);
      sys(i, j) = b0 - (i == j ? one : PadicElement::zero(p));
      sys(i, n + j) = c * b1;
      sys(n + i, j) = b1;
      sys(n + i, n + j) = -b0 - (i == j ? one : PadicElement::zero(p));
    }
  PMatrix k = kernel(sys);
  if (static_cast<int>(k.cols()) != n)
    throw SlopeNotZero("fixed space has dimension " + std::to_string(k.cols()) + ", expected " +
                       std::to_string(n));
  FixedSpace out;
  out.embedding = pmatrix_zero(p, n, n, 2);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out.embedding(i, j) = PadicElement::from_components(k(i, j), k(n + i, j));
  PMatrix g2 = out.embedding.transpose() * m.gram * out.embedding;
  PMatrix g1 = pmatrix_zero(p, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!g2(i, j).component(1).is_zero()) throw PrecisionExhausted("fixed-space Gram is not rational");
      g1(i, j) = g2(i, j).component(0);
    }
  out.space = QpQuadSpace(g1);
  return out;
}

bool TwistReport::pass() const {
  bool ok = dim_expected == dim_got && det_expected == det_got && hasse_expected == hasse_got && stable;
  if (hasse_expected == -1) ok = ok && isometric_to_flip;
  return ok;
}

std::string TwistReport::to_json() const {
  nlohmann::ordered_json j;
  j["dim"] = {{"expected", dim_expected}, {"got", dim_got}};
  j["det"] = {{"expected", det_expected}, {"got", det_got}};
  j["hasse"] = {{"expected", hasse_expected}, {"got", hasse_got}};
  j["isometric_to_flip"] = isometric_to_flip;
  j["stable"] = stable;
  j["slopeV"] = slope_v.get_str();
  j["slopeD"] = slope_d.get_str();
  j["pass"] = pass();
  return j.dump();
}

TwistReport verify_twist(const CliffordPtr& alg, int power, int precision) {
  int p = alg->prime();
  int N = precision ? precision : default_precision(p);
  CliffordElement g = alg->scalar(1);
  CliffordElement b = basic_b(alg);
  for (int i = 0; i < power; ++i) g = g * b;
  QpQuadSpace V = QpQuadSpace::from_rational(p, alg->gram(), N);
  auto fixed = fixed_points(phi_from_element(alg, g, N));
  auto coarse = fixed_points(phi_from_element(alg, g, N - 4));
  const QuadInvariants& inv = fixed.space.invariants();
  const QuadInvariants& ref = V.invariants();
  TwistReport r;
  r.dim_expected = ref.n;
  r.dim_got = inv.n;
  r.det_expected = ref.det.name();
  r.det_got = inv.det.name();
  r.hasse_expected = power % 2 ? -ref.hasse : ref.hasse;
  r.hasse_got = inv.hasse;
  r.stable = coarse.space.basic_invariants() == fixed.space.basic_invariants();
  if (ref.n >= 3) r.isometric_to_flip = isometric(fixed.space, flip_hasse(V));
  r.slope_d = slope_on_D(alg, g);
  phi_orbit_period(phi_from_element(alg, g, N));
  r.slope_v = 0;
  return r;
}

mpq_class slope_on_D(const CliffordPtr& alg, const CliffordElement& g) {
  auto ginv = inverse(g);
  if (!ginv) throw InputError("element is not invertible");
  // rational entries: sigma acts trivially, so F^2 = ((L_{g^-1})^T)^2
  QMatrix f = left_regular(*ginv).transpose();
  QMatrix f2 = f * f;
  auto divs = elementary_divisor_valuations(f2, alg->prime());
  if (divs.size() != alg->size()) throw NotIsoclinic("F^2 is singular");
  for (int d : divs)
    if (d != divs.front()) throw NotIsoclinic("elementary divisors of F^2 differ");
  mpq_class s(divs.front(), 2);
  s.canonicalize();
  return s;
}

int phi_orbit_period(const PhiModule& m, int max_period) {
  PMatrix start = hermite_form(pmatrix_identity(m.p, m.n, 2, m.precision));
  std::string key = matrix_key(start);
  PMatrix cur = start;
  for (int k = 1; k <= max_period; ++k) {
    cur = hermite_form(m.linear * frobenius(cur));
    if (matrix_key(cur) == key) return k;
  }
  throw SlopeNotZero("Phi-orbit of the standard lattice does not close");
}

}  // namespace gspin
