#pragma once

#include <string>
#include <vector>

#include "riesz/interval.hpp"
#include "riesz/rational.hpp"

namespace riesz {

// Dense univariate polynomial over Q, coefficients by ascending power,
// no trailing zero (the zero polynomial has an empty coefficient vector).
class QPoly {
 public:
  QPoly() = default;
  explicit QPoly(std::vector<Rat> coeffs);
  static QPoly constant(const Rat& c);
  static QPoly monomial(const Rat& c, std::size_t power);

  const std::vector<Rat>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const Rat& leading() const;
  Rat coeff(std::size_t power) const;

  Rat eval(const Rat& x) const;
  QInterval eval(const QInterval& x) const;  // Horner over intervals

  QPoly derivative() const;
  std::string str() const;

  bool operator==(const QPoly&) const = default;

 private:
  std::vector<Rat> c_;
};

QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a);
QPoly operator*(const QPoly& a, const QPoly& b);
QPoly operator*(const Rat& s, const QPoly& a);

struct QPolyDivision {
  QPoly quotient, remainder;
};
QPolyDivision divrem(const QPoly& a, const QPoly& b);

// positive-rational rescale to coprime integer coefficients (sign pattern
// unchanged, which is all Sturm counting needs)
QPoly primitive_scale(const QPoly& p);

QPoly poly_gcd(const QPoly& a, const QPoly& b);  // monic-free, primitive
QPoly squarefree_part(const QPoly& p);

// Evaluation point for sign-variation counting. ExpOf(a) is the
// transcendental point e^a for rational a != 0; since every chain entry has
// rational coefficients, its value there is nonzero (Lindemann), so interval
// refinement of e^a always settles every sign.
struct ChainPoint {
  enum class Kind { MinusInf, Rational, ExpOf, PlusInf };
  Kind kind;
  Rat value;

  static ChainPoint minus_inf() { return {Kind::MinusInf, Rat(0)}; }
  static ChainPoint plus_inf() { return {Kind::PlusInf, Rat(0)}; }
  static ChainPoint at(const Rat& x) { return {Kind::Rational, x}; }
  static ChainPoint exp_of(const Rat& a);  // requires a != 0
};

// canonical chain of the squarefree part; first entry is the squarefree part
std::vector<QPoly> sturm_chain(const QPoly& p);

int sign_variations(const std::vector<QPoly>& chain, const ChainPoint& at);

// Number of distinct real roots of p strictly between lo and hi. Requires
// p nonzero and p(lo) != 0 != p(hi) at rational endpoints (transcendental and
// infinite endpoints never coincide with roots).
long count_roots_between(const QPoly& p, const std::vector<QPoly>& chain,
                         const ChainPoint& lo, const ChainPoint& hi);

// Disjoint closed rational intervals, each containing exactly one distinct
// real root of p; a width-zero interval is an exact rational root, and the
// endpoints of wide intervals are never roots.
std::vector<QInterval> isolate_real_roots(const QPoly& p);

// Shrink an isolating interval to width <= eps (same containment contract).
QInterval refine_root(const QPoly& p, const std::vector<QPoly>& chain,
                      QInterval iso, const Rat& eps);

// All real roots lie strictly inside (-bound, bound).
Rat cauchy_root_bound(const QPoly& p);

// Unique interpolating polynomial through distinct nodes (Newton form).
QPoly interpolate_polynomial(const std::vector<std::pair<Rat, Rat>>& nodes);

}  // namespace riesz
