#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "riesz/closed_set.hpp"
#include "riesz/interval.hpp"
#include "riesz/piecewise_linear.hpp"
#include "riesz/polynomial.hpp"
#include "riesz/supernatural.hpp"

namespace riesz {

// Finite sum  f(x) = sum_n c_n e^{nx}  with every coefficient drawn from the
// localized ring D_modulus. The zero polynomial stores no coefficients.
class LaurentPoly {
 public:
  LaurentPoly() : modulus_(Supernatural::universal()) {}
  LaurentPoly(std::map<long, Rat> coeffs, Supernatural modulus);

  static LaurentPoly zero(Supernatural n);
  static LaurentPoly constant(const Rat& c, Supernatural n);
  static LaurentPoly monomial(const Rat& c, long exponent, Supernatural n);

  const std::map<long, Rat>& coeffs() const { return coeffs_; }
  const Supernatural& modulus() const { return modulus_; }
  bool is_zero() const { return coeffs_.empty(); }
  Rat coeff(long n) const;
  long min_exponent() const;  // nonzero polynomial only
  long max_exponent() const;

  LaurentPoly shifted(long k) const;  // e^{kx} * f
  LaurentPoly reflected() const;      // x -> -x

  // f(x) = e^{shift * x} * poly(e^x) with poly(0) != 0; nonzero f only
  std::pair<QPoly, long> factored() const;

  // certified enclosure of f(x), width at most eps; exact at x = 0
  QInterval eval_enclosure(const Rat& x, const Rat& eps) const;
  // enclosure of f over an interval of x values (inherently wide)
  QInterval eval_range(const QInterval& x, const Rat& inner_eps) const;

  std::string str() const;
  bool operator==(const LaurentPoly&) const = default;

 private:
  std::map<long, Rat> coeffs_;
  Supernatural modulus_;
};

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator-(const LaurentPoly& a);
// products and scalings may leave the coefficient ring for finite moduli;
// they throw errc::precondition when a coefficient falls outside it
LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator*(const Rat& c, const LaurentPoly& a);

enum class RevLex { Less, Equal, Greater };

// order by the topmost disagreeing coefficient
RevLex rev_lex_compare(const LaurentPoly& f, const LaurentPoly& g);

// requires rev_lex_compare(f, g) == Less; returns r such that g - f is
// strictly positive on all of [r, inf)
Rat eventual_domination_bound(const LaurentPoly& f, const LaurentPoly& g);

enum class Positivity { Positive, IsZero, NotPositive };

struct PositivityWitness {
  enum class Kind { NegativeAt, ZeroInside };
  Kind kind;
  // NegativeAt: rational point of F with f(point) <= 0, enclosure in value
  Rat point;
  QInterval value;
  // ZeroInside: [x1, x2] inside a single component of F with f vanishing
  // strictly between; the squarefree part of f's polynomial factor changes
  // sign across it, so the claim is checkable by interval arithmetic alone
  QInterval x_range;

  std::string str() const;
};

struct PositivityResult {
  Positivity verdict;
  std::optional<PositivityWitness> witness;
};

// Exact three-way decision of "f > 0 everywhere on F". Nonzero f over empty
// F is vacuously Positive; f = 0 reports IsZero.
PositivityResult strictly_positive_on(const LaurentPoly& f, const ClosedSetR& F);

// Re-check a witness using only interval arithmetic and exact evaluation,
// independent of the root-counting path that produced it.
bool verify_positivity_witness(const LaurentPoly& f, const ClosedSetR& F,
                               const PositivityWitness& w);

// f = 0 or strictly positive on F
bool cone_member(const LaurentPoly& f, const ClosedSetR& F);

// Laurent polynomial within d of target uniformly on bounded K, with
// coefficients in D_n. Throws errc::insufficient_density when a finite n
// cannot provide fine enough coefficients.
LaurentPoly compact_uniform_approx(const PiecewiseLinear& target, const ClosedSetR& k,
                                   const Rat& d, const Supernatural& n);

// Riesz interpolation for the strict pointwise order over semi-bounded F:
// returns a with p_i <= a <= q_j for all i, j, every comparison validated
// exactly before returning. Throws errc::not_semi_bounded when F is
// unbounded on both sides, errc::precondition when some p_i <= q_j fails.
LaurentPoly interpolate_semibounded(const ClosedSetR& F, const LaurentPoly& p0,
                                    const LaurentPoly& p1, const LaurentPoly& q0,
                                    const LaurentPoly& q1);

// support contained in {0}: the only Laurent polynomials bounded on the line
bool bounded_on_line(const LaurentPoly& f);

// The obstruction quadruple over F = R: any interpolant would have to be a
// bounded Laurent polynomial, hence a constant c, squeezed into an empty
// window. All facts are exact rationals.
struct UnboundedObstruction {
  long parameter;  // n >= 2
  LaurentPoly p0, p1, q0, q1;
  Rat lower_required;  // sup of p1 = n^2/4, forced c >= this
  Rat peak_t;          // e^x value attaining that sup, 3n/2
  Rat upper_required;  // inf of q0 = 0, forced c <= this
  bool feasible;       // always false
  std::string note;
};

UnboundedObstruction converse_witness(long n, const Supernatural& modulus);

}  // namespace riesz
