#pragma once

#include <string>

#include <gmpxx.h>

#include "gspin/clifford.hpp"
#include "gspin/matrix.hpp"
#include "gspin/quadspace.hpp"

namespace gspin {

// Phi = B o sigma on V over Q_{p^2}.
struct PhiModule {
  int p = 0;
  int n = 0;
  int precision = 0;
  QMatrix gram_q;    // Gram of V (rational)
  QMatrix linear_q;  // B: the action of the group element on V
  PMatrix gram;      // same over Q_{p^2}
  PMatrix linear;

  PVector apply(const PVector& v) const;  // B sigma(v)
};

PhiModule phi_from_element(const CliffordPtr& alg, const CliffordElement& g, int precision = 0);
PhiModule phi_from_b(const CliffordPtr& alg, int precision = 0);

struct FixedSpace {
  QpQuadSpace space;   // over Q_p
  PMatrix embedding;   // n x n over Q_{p^2}, columns are Phi-fixed
};

// Phi-fixed vectors via restriction of scalars to Q_p (a 2n x 2n kernel).
FixedSpace fixed_points(const PhiModule& m);

struct TwistReport {
  int dim_expected = 0, dim_got = 0;
  std::string det_expected, det_got;
  int hasse_expected = 0, hasse_got = 0;
  bool isometric_to_flip = false;  // only meaningful when hasse_expected = -1
  bool stable = false;             // invariants agree at precision N and N - 4
  mpq_class slope_v, slope_d;
  bool pass() const;
  std::string to_json() const;
};

// Twist by b^power: fixed space has the same dim and det and Hasse (-1)^power.
TwistReport verify_twist(const CliffordPtr& alg, int power = 1, int precision = 0);

// Slope of the contragredient isocrystal D from the elementary divisors of
// F^2, F = (L_{g^-1})^T o sigma on the dual monomial lattice. Throws
// NotIsoclinic unless all divisors agree.
mpq_class slope_on_D(const CliffordPtr& alg, const CliffordElement& g);
// Least m >= 1 with Phi^m(L0) = L0 for the standard lattice L0; throws
// SlopeNotZero if none up to max_period.
int phi_orbit_period(const PhiModule& m, int max_period = 8);

}  // namespace gspin
