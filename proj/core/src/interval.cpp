#include "riesz/interval.hpp"

#include <algorithm>

#include "riesz/error.hpp"

namespace riesz {

QInterval::QInterval(Rat a, Rat b) : lo(std::move(a)), hi(std::move(b)) {
  if (lo > hi) fail(errc::precondition, "interval endpoints out of order");
}

std::optional<int> QInterval::sign() const {
  if (sgn(lo) > 0) return 1;
  if (sgn(hi) < 0) return -1;
  if (sgn(lo) == 0 && sgn(hi) == 0) return 0;
  return std::nullopt;
}

std::string QInterval::str() const {
  return "[" + to_string(lo) + ", " + to_string(hi) + "]";
}

QInterval operator+(const QInterval& a, const QInterval& b) {
  return QInterval(a.lo + b.lo, a.hi + b.hi);
}

QInterval operator-(const QInterval& a, const QInterval& b) {
  return QInterval(a.lo - b.hi, a.hi - b.lo);
}

QInterval operator-(const QInterval& a) { return QInterval(-a.hi, -a.lo); }

QInterval operator*(const QInterval& a, const QInterval& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return QInterval(std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4}));
}

QInterval operator*(const Rat& c, const QInterval& a) {
  return c >= 0 ? QInterval(c * a.lo, c * a.hi) : QInterval(c * a.hi, c * a.lo);
}

QInterval reciprocal(const QInterval& a) {
  if (a.contains_zero()) fail(errc::precondition, "reciprocal of interval through zero");
  return QInterval(Rat(1) / a.hi, Rat(1) / a.lo);
}

QInterval hull(const QInterval& a, const QInterval& b) {
  return QInterval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

QInterval pow(const QInterval& a, long n) {
  if (n < 0) return reciprocal(pow(a, -n));
  QInterval acc = QInterval::point(Rat(1));
  for (long i = 0; i < n; ++i) acc = acc * a;
  return acc;
}

QInterval round_out(const QInterval& a, long prec) {
  Int p2 = Int(1) << static_cast<unsigned long>(prec);
  Rat lo(floor_rat(a.lo * p2), p2);
  Rat hi(ceil_rat(a.hi * p2), p2);
  lo.canonicalize();
  hi.canonicalize();
  return QInterval(std::move(lo), std::move(hi));
}

QInterval pow_rounded(const QInterval& a, long n, long prec) {
  if (n < 0) return pow_rounded(round_out(reciprocal(a), prec), -n, prec);
  QInterval acc = QInterval::point(Rat(1));
  QInterval base = a;
  unsigned long e = static_cast<unsigned long>(n);
  while (e != 0) {
    if (e & 1) acc = round_out(acc * base, prec);
    e >>= 1;
    if (e != 0) base = round_out(base * base, prec);
  }
  return acc;
}

namespace {

long prec_for(const Rat& eps) {
  Int inv = ceil_rat(Rat(1) / eps);
  return 64 + static_cast<long>(mpz_sizeinbase(inv.get_mpz_t(), 2));
}

// e^y for y in (0, 1] at working precision prec: Taylor terms and partial
// sums rounded outward, explicit geometric tail bound added at the end
QInterval exp_unit_rounded(const Rat& y, long prec) {
  QInterval yy = round_out(QInterval::point(y), prec);
  QInterval acc = QInterval::point(Rat(1));
  QInterval pw = QInterval::point(Rat(1));
  Rat floor_stop = Rat(Int(1), Int(1) << static_cast<unsigned long>(prec));
  for (long i = 1;; ++i) {
    QInterval t = pw * yy;
    pw = round_out(QInterval(t.lo / i, t.hi / i), prec);
    acc = round_out(acc + pw, prec);
    Rat tail = pw.hi * 2 / (i + 1);  // terms shrink at least geometrically
    if (tail <= floor_stop || i > prec + 32)
      return QInterval(acc.lo, acc.hi + tail);
  }
}

}  // namespace

QInterval exp_enclosure(const Rat& a, const Rat& eps) {
  if (sgn(eps) <= 0) fail(errc::precondition, "enclosure width must be positive");
  if (sgn(a) == 0) return QInterval::point(Rat(1));
  if (sgn(a) < 0) {
    // e^a = 1/e^{-a}; e^{-a} >= 1, so inverting never widens. Refine until
    // the inverted width fits.
    Rat target = eps;
    while (true) {
      QInterval inv = reciprocal(exp_enclosure(-a, target));
      if (inv.width() <= eps) return inv;
      target /= 2;
    }
  }

  Int mz = ceil_rat(a);
  if (!mz.fits_slong_p()) fail(errc::precondition, "exp argument too large");
  long m = mz.get_si();
  Rat y = a / Rat(mz);  // in (0, 1]
  // the m-th power scales absolute error by about e^a * m, so pre-pay
  // roughly 1.5 bits per unit of a on top of the width request
  long prec = prec_for(eps) + (3 * m) / 2 + 16;
  while (true) {
    QInterval e = pow_rounded(exp_unit_rounded(y, prec), m, prec);
    if (e.width() <= eps) return e;
    prec += prec / 2 + 16;
  }
}

QInterval exp_image(const QInterval& a, const Rat& eps) {
  QInterval lo = exp_enclosure(a.lo, eps);
  QInterval hi = exp_enclosure(a.hi, eps);
  return QInterval(lo.lo, hi.hi);
}

QInterval ln_enclosure(const Rat& t, const Rat& eps) {
  if (sgn(t) <= 0) fail(errc::precondition, "log of a nonpositive number");
  if (sgn(eps) <= 0) fail(errc::precondition, "enclosure width must be positive");
  if (t == 1) return QInterval::point(Rat(0));

  // e^x at rational x never equals a rational t (other than e^0 = 1, already
  // handled), so comparisons settle after enough refinement
  auto exp_below = [&t](const Rat& x) {
    Rat delta(1, 16);
    while (true) {
      QInterval e = exp_enclosure(x, delta);
      if (e.hi < t) return true;
      if (e.lo > t) return false;
      delta /= 16;
    }
  };

  // integer bracket with e^lo < t < e^hi, then bisect
  Rat lo(0), hi(0);
  if (t > 1) {
    hi = 1;
    while (exp_below(hi)) hi += 1;
  } else {
    lo = -1;
    while (!exp_below(lo)) lo -= 1;
  }

  while (hi - lo > eps) {
    Rat mid = (lo + hi) / 2;
    (exp_below(mid) ? lo : hi) = mid;
  }
  return QInterval(lo, hi);
}

}  // namespace riesz
