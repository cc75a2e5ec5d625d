#pragma once

#include <optional>
#include <string>

#include "riesz/rational.hpp"

namespace riesz {

// Closed rational interval [lo, hi]. Arithmetic is outward-exact: results
// contain every value attainable by the operands, with no rounding anywhere.
struct QInterval {
  Rat lo, hi;

  QInterval() : lo(0), hi(0) {}
  QInterval(Rat a, Rat b);
  static QInterval point(const Rat& a) { return QInterval(a, a); }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0 && 0 <= hi; }

  // +1 when the whole interval is above zero, -1 below, 0 when the interval
  // is exactly {0}; nullopt when the sign is not decided by this enclosure.
  std::optional<int> sign() const;

  std::string str() const;

  bool operator==(const QInterval&) const = default;
};

QInterval operator+(const QInterval& a, const QInterval& b);
QInterval operator-(const QInterval& a, const QInterval& b);
QInterval operator-(const QInterval& a);
QInterval operator*(const QInterval& a, const QInterval& b);
QInterval operator*(const Rat& c, const QInterval& a);

// Requires 0 outside a.
QInterval reciprocal(const QInterval& a);

QInterval hull(const QInterval& a, const QInterval& b);

// Enclosure of a^n (n may be negative when 0 is outside a).
QInterval pow(const QInterval& a, long n);

// Smallest enclosing interval whose endpoints have denominator 2^prec.
// Keeps long chains of interval arithmetic at bounded bit size.
QInterval round_out(const QInterval& a, long prec);

// a^n with every intermediate product rounded outward at 2^-prec; binary
// exponentiation, so the overestimate stays mild.
QInterval pow_rounded(const QInterval& a, long n, long prec);

// Certified enclosure of e^a with width at most eps (eps > 0). Taylor sums
// on a/ceil(a) with dyadically rounded intermediates, powered back up; the
// working precision escalates until the requested width holds.
QInterval exp_enclosure(const Rat& a, const Rat& eps);

// Enclosure of {e^x : x in [a.lo, a.hi]}; width shrinks with eps but is not
// bounded by it (the image of a wide interval stays wide).
QInterval exp_image(const QInterval& a, const Rat& eps);

// Certified enclosure of ln(t) for rational t > 0, width at most eps.
// Bisection against exp enclosures; ln(1) = 0 is returned exactly.
QInterval ln_enclosure(const Rat& t, const Rat& eps);

}  // namespace riesz
