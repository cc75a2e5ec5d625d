#include "riesz/laurent.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <functional>
#include <memory>
#include <vector>

#include "riesz/error.hpp"

namespace riesz {

LaurentPoly::LaurentPoly(std::map<long, Rat> coeffs, Supernatural modulus)
    : modulus_(std::move(modulus)) {
  for (auto& [n, c] : coeffs) {
    if (sgn(c) == 0) continue;
    if (!dn_contains(c, modulus_))
      fail(errc::precondition,
           "coefficient " + to_string(c) + " outside the ring for modulus " +
               modulus_.str());
    coeffs_.emplace(n, c);
  }
}

LaurentPoly LaurentPoly::zero(Supernatural n) { return LaurentPoly({}, std::move(n)); }

LaurentPoly LaurentPoly::constant(const Rat& c, Supernatural n) {
  return LaurentPoly({{0, c}}, std::move(n));
}

LaurentPoly LaurentPoly::monomial(const Rat& c, long exponent, Supernatural n) {
  return LaurentPoly({{exponent, c}}, std::move(n));
}

Rat LaurentPoly::coeff(long n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

long LaurentPoly::min_exponent() const {
  if (coeffs_.empty()) fail(errc::precondition, "zero polynomial has no support");
  return coeffs_.begin()->first;
}

long LaurentPoly::max_exponent() const {
  if (coeffs_.empty()) fail(errc::precondition, "zero polynomial has no support");
  return coeffs_.rbegin()->first;
}

LaurentPoly LaurentPoly::shifted(long k) const {
  std::map<long, Rat> out;
  for (const auto& [n, c] : coeffs_) out.emplace(n + k, c);
  return LaurentPoly(std::move(out), modulus_);
}

LaurentPoly LaurentPoly::reflected() const {
  std::map<long, Rat> out;
  for (const auto& [n, c] : coeffs_) out.emplace(-n, c);
  return LaurentPoly(std::move(out), modulus_);
}

std::pair<QPoly, long> LaurentPoly::factored() const {
  long lo = min_exponent();
  std::vector<Rat> c(static_cast<std::size_t>(max_exponent() - lo + 1), Rat(0));
  for (const auto& [n, v] : coeffs_) c[static_cast<std::size_t>(n - lo)] = v;
  return {QPoly(std::move(c)), lo};
}

QInterval LaurentPoly::eval_enclosure(const Rat& x, const Rat& eps) const {
  if (coeffs_.empty()) return QInterval::point(Rat(0));
  if (sgn(x) == 0) {
    Rat v(0);
    for (const auto& [n, c] : coeffs_) v += c;
    return QInterval::point(v);
  }
  // the sum's width scales with B = sum |c_n| (|n|+1) G^|n| where G bounds the
  // base and its reciprocal, so the exp width and the working precision have
  // to absorb B up front (interpolants can carry enormous coefficients)
  QInterval coarse = exp_enclosure(x, Rat(1, 4));
  Int g = std::max(Int(1), std::max(ceil_rat(coarse.hi), ceil_rat(reciprocal(coarse).hi)));
  Rat b(1);
  for (const auto& [n, c] : coeffs_) {
    unsigned long m = static_cast<unsigned long>(n < 0 ? -n : n);
    Int gp;
    mpz_pow_ui(gp.get_mpz_t(), g.get_mpz_t(), m);
    b += abs(c) * Rat(gp) * Rat(m + 1);
  }
  long bbits = static_cast<long>(mpz_sizeinbase(ceil_rat(b).get_mpz_t(), 2));
  Int invq = ceil_rat(Rat(4) / eps);
  long prec = 64 + bbits + static_cast<long>(mpz_sizeinbase(invq.get_mpz_t(), 2));
  Rat delta = eps / (8 * b);
  while (true) {
    QInterval e = exp_enclosure(x, delta);
    QInterval acc = QInterval::point(Rat(0));
    for (const auto& [n, c] : coeffs_)
      acc = round_out(acc + c * pow_rounded(e, n, prec), prec);
    if (acc.width() <= eps) return acc;
    delta /= 16;
    prec += prec / 2;
  }
}

QInterval LaurentPoly::eval_range(const QInterval& x, const Rat& inner_eps) const {
  QInterval e = exp_image(x, inner_eps);
  Int invq = ceil_rat(Rat(1) / inner_eps);
  long prec = 64 + static_cast<long>(mpz_sizeinbase(invq.get_mpz_t(), 2));
  QInterval acc = QInterval::point(Rat(0));
  for (const auto& [n, c] : coeffs_)
    acc = round_out(acc + c * pow_rounded(e, n, prec), prec);
  return acc;
}

std::string LaurentPoly::str() const {
  if (coeffs_.empty()) return "0";
  std::string s;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += to_string(it->second);
    if (it->first != 0) s += "*e^(" + std::to_string(it->first) + "x)";
  }
  return s;
}

namespace {

Supernatural common_modulus(const LaurentPoly& a, const LaurentPoly& b) {
  if (!(a.modulus() == b.modulus()))
    fail(errc::precondition, "operands have different coefficient moduli");
  return a.modulus();
}

}  // namespace

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
  Supernatural n = common_modulus(a, b);
  std::map<long, Rat> out = a.coeffs();
  for (const auto& [k, c] : b.coeffs()) out[k] += c;
  return LaurentPoly(std::move(out), std::move(n));
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
  Supernatural n = common_modulus(a, b);
  std::map<long, Rat> out = a.coeffs();
  for (const auto& [k, c] : b.coeffs()) out[k] -= c;
  return LaurentPoly(std::move(out), std::move(n));
}

LaurentPoly operator-(const LaurentPoly& a) {
  std::map<long, Rat> out;
  for (const auto& [k, c] : a.coeffs()) out.emplace(k, -c);
  return LaurentPoly(std::move(out), a.modulus());
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  Supernatural n = common_modulus(a, b);
  std::map<long, Rat> out;
  for (const auto& [i, ci] : a.coeffs())
    for (const auto& [j, cj] : b.coeffs()) out[i + j] += ci * cj;
  return LaurentPoly(std::move(out), std::move(n));
}

LaurentPoly operator*(const Rat& c, const LaurentPoly& a) {
  std::map<long, Rat> out;
  for (const auto& [k, v] : a.coeffs()) out.emplace(k, c * v);
  return LaurentPoly(std::move(out), a.modulus());
}

RevLex rev_lex_compare(const LaurentPoly& f, const LaurentPoly& g) {
  if (f.coeffs().empty() && g.coeffs().empty()) return RevLex::Equal;
  long hi = LONG_MIN, lo = LONG_MAX;
  for (const auto* p : {&f, &g}) {
    if (p->coeffs().empty()) continue;
    hi = std::max(hi, p->max_exponent());
    lo = std::min(lo, p->min_exponent());
  }
  for (long n = hi; n >= lo; --n) {
    Rat cf = f.coeff(n), cg = g.coeff(n);
    if (cf != cg) return cf < cg ? RevLex::Less : RevLex::Greater;
  }
  return RevLex::Equal;
}

Rat eventual_domination_bound(const LaurentPoly& f, const LaurentPoly& g) {
  if (rev_lex_compare(f, g) != RevLex::Less)
    fail(errc::precondition, "domination bound needs a strictly smaller first argument");
  LaurentPoly d = g - f;
  auto [q, shift] = d.factored();
  Rat tb = cauchy_root_bound(q);
  long r = 1;
  while (!(exp_enclosure(Rat(r), Rat(1, 4)).lo > tb)) ++r;
  return Rat(r);
}

std::string PositivityWitness::str() const {
  if (kind == Kind::NegativeAt)
    return "f(" + to_string(point) + ") in " + value.str();
  return "f vanishes inside " + x_range.str();
}

namespace {

// chain evaluation point for the t-image of rational x
ChainPoint t_point(const Rat& x) {
  return sgn(x) == 0 ? ChainPoint::at(Rat(1)) : ChainPoint::exp_of(x);
}

// sign of q(e^x); may be 0 only when x = 0 (t = 1 is the one rational image)
int sign_q_at(const QPoly& q, const Rat& x) {
  if (sgn(x) == 0) return sgn(q.eval(Rat(1)));
  Rat eps(1, 4);
  while (true) {
    auto s = q.eval(exp_enclosure(x, eps)).sign();
    if (s && *s != 0) return *s;
    eps /= 16;
  }
}

PositivityWitness negative_at(const LaurentPoly& f, const Rat& x) {
  PositivityWitness w;
  w.kind = PositivityWitness::Kind::NegativeAt;
  w.point = x;
  if (sgn(x) == 0) {
    Rat v(0);
    for (const auto& [n, c] : f.coeffs()) v += c;
    w.value = QInterval::point(v);
    return w;
  }
  Rat eps(1, 4);
  while (true) {
    QInterval v = f.eval_enclosure(x, eps);
    if (v.hi < 0) {
      w.value = v;
      return w;
    }
    eps /= 16;
  }
}

PositivityWitness zero_at_origin(const LaurentPoly& f) {
  PositivityWitness w;
  w.kind = PositivityWitness::Kind::NegativeAt;
  w.point = Rat(0);
  Rat v(0);
  for (const auto& [n, c] : f.coeffs()) v += c;
  w.value = QInterval::point(v);
  return w;
}

// a root of q lies strictly inside the t-image of comp: shrink to a rational
// x-bracket holding an odd number of distinct roots, so the squarefree part
// changes sign across it
PositivityWitness zero_inside(const LaurentPoly& f, const QPoly& q,
                              const std::vector<QPoly>& chain,
                              const ClosedSetR::Component& comp) {
  auto cnt = [&](const ChainPoint& a, const ChainPoint& b) {
    return count_roots_between(q, chain, a, b);
  };
  auto q_at_one_vanishes = [&]() { return sgn(q.eval(Rat(1))) == 0; };

  Rat xl, xr;
  if (comp.lo && comp.hi) {
    xl = *comp.lo;
    xr = *comp.hi;
  } else if (!comp.lo && comp.hi) {
    xr = *comp.hi;
    Rat step(1);
    while (true) {
      xl = xr - step;
      if (sgn(xl) == 0 && q_at_one_vanishes()) return zero_at_origin(f);
      if (cnt(t_point(xl), t_point(xr)) >= 1) break;
      step *= 2;
    }
  } else if (comp.lo && !comp.hi) {
    xl = *comp.lo;
    Rat step(1);
    while (true) {
      xr = xl + step;
      if (sgn(xr) == 0 && q_at_one_vanishes()) return zero_at_origin(f);
      if (cnt(t_point(xl), t_point(xr)) >= 1) break;
      step *= 2;
    }
  } else {
    // whole line; capture a root on the right of t = 0, then bracket left
    Rat step(1);
    while (true) {
      xr = step;
      if (cnt(ChainPoint::at(Rat(0)), t_point(xr)) >= 1) break;
      step *= 2;
    }
    step = 1;
    while (true) {
      xl = -step;
      if (cnt(t_point(xl), t_point(xr)) >= 1) break;
      step *= 2;
    }
  }

  while (true) {
    long c = cnt(t_point(xl), t_point(xr));
    if (c % 2 == 1) break;
    Rat mid = (xl + xr) / 2;
    if (sgn(mid) == 0 && q_at_one_vanishes()) return zero_at_origin(f);
    if (cnt(t_point(xl), t_point(mid)) >= 1)
      xr = mid;
    else
      xl = mid;
  }

  PositivityWitness w;
  w.kind = PositivityWitness::Kind::ZeroInside;
  w.x_range = QInterval(xl, xr);
  return w;
}

std::optional<PositivityWitness> component_witness(const LaurentPoly& f, const QPoly& q,
                                                   const std::vector<QPoly>& chain,
                                                   const ClosedSetR::Component& comp) {
  for (const auto& endpoint : {comp.lo, comp.hi}) {
    if (!endpoint) continue;
    int s = sign_q_at(q, *endpoint);
    if (s < 0) return negative_at(f, *endpoint);
    if (s == 0) return zero_at_origin(f);  // only t = 1 can be a rational root
    if (comp.is_point()) return std::nullopt;
  }

  ChainPoint lo = comp.lo ? t_point(*comp.lo) : ChainPoint::at(Rat(0));
  ChainPoint hi = comp.hi ? t_point(*comp.hi) : ChainPoint::plus_inf();
  long roots = count_roots_between(q, chain, lo, hi);
  if (roots == 0) {
    if (!comp.lo && !comp.hi && sign_q_at(q, Rat(0)) < 0) return negative_at(f, Rat(0));
    return std::nullopt;
  }
  return zero_inside(f, q, chain, comp);
}

}  // namespace

PositivityResult strictly_positive_on(const LaurentPoly& f, const ClosedSetR& F) {
  if (f.is_zero()) return {Positivity::IsZero, std::nullopt};
  if (F.is_empty()) return {Positivity::Positive, std::nullopt};
  auto [q, shift] = f.factored();
  std::vector<QPoly> chain = sturm_chain(q);
  for (const auto& comp : F.components()) {
    auto w = component_witness(f, q, chain, comp);
    if (w) return {Positivity::NotPositive, std::move(w)};
  }
  return {Positivity::Positive, std::nullopt};
}

bool verify_positivity_witness(const LaurentPoly& f, const ClosedSetR& F,
                               const PositivityWitness& w) {
  if (f.is_zero()) return false;
  if (w.kind == PositivityWitness::Kind::NegativeAt) {
    if (!F.contains(w.point)) return false;
    if (sgn(w.point) == 0) {
      Rat v(0);
      for (const auto& [n, c] : f.coeffs()) v += c;
      return sgn(v) <= 0;
    }
    Rat eps(1, 4);
    while (true) {
      QInterval v = f.eval_enclosure(w.point, eps);
      if (v.hi < 0) return true;
      if (v.lo > 0) return false;
      eps /= 16;
    }
  }

  const Rat& x1 = w.x_range.lo;
  const Rat& x2 = w.x_range.hi;
  if (!(x1 < x2)) return false;
  bool inside = false;
  for (const auto& comp : F.components()) {
    if ((!comp.lo || *comp.lo <= x1) && (!comp.hi || x2 <= *comp.hi)) {
      inside = true;
      break;
    }
  }
  if (!inside) return false;

  auto [q, shift] = f.factored();
  QPoly sf = squarefree_part(q);
  auto sf_sign = [&](const Rat& x) {
    if (sgn(x) == 0) return sgn(sf.eval(Rat(1)));
    Rat eps(1, 4);
    while (true) {
      auto s = sf.eval(exp_enclosure(x, eps)).sign();
      if (s && *s != 0) return *s;
      eps /= 16;
    }
  };
  int s1 = sf_sign(x1);
  if (s1 == 0) return true;  // exact zero of f at x = 0 inside the range
  int s2 = sf_sign(x2);
  if (s2 == 0) return true;
  return s1 * s2 < 0;
}

bool cone_member(const LaurentPoly& f, const ClosedSetR& F) {
  return f.is_zero() || strictly_positive_on(f, F).verdict == Positivity::Positive;
}

// ---------- uniform approximation ----------

namespace {

struct Rounder {
  Int den;
  bool saturated;  // finite modulus could not reach the requested grain
  Rat operator()(const Rat& v) const { return round_to_denominator(v, den); }
};

Rounder make_rounder(const Supernatural& n, const Int& at_least) {
  if (auto d = dense_divisor(n, at_least)) return {*d, false};
  return {n.finite_value(), true};
}

std::vector<Rat> cheb_nodes(const Rat& lo, const Rat& hi, int count) {
  if (count <= 1) return {(lo + hi) / 2};
  Rat width = hi - lo;
  Int snap = 1 << 20;
  Rat need = Rat(4 * count) / width;
  while (Rat(snap) < need) snap *= 2;

  std::vector<Rat> nodes;
  double c = to_double((lo + hi) / 2), h = to_double(width / 2);
  if (std::isfinite(c) && std::isfinite(h)) {
    for (int i = 0; i < count; ++i) {
      double th = M_PI * (2.0 * i + 1.0) / (2.0 * count);
      Rat r = round_to_denominator(Rat(c - h * std::cos(th)), snap);
      if (r <= lo) r = lo + width / (4 * count);
      if (r >= hi) r = hi - width / (4 * count);
      nodes.push_back(r);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  }
  if (static_cast<int>(nodes.size()) < count) {
    nodes.clear();
    for (int i = 0; i < count; ++i)
      nodes.push_back(lo + width * Rat(2 * i + 1) / Rat(2 * count));
  }
  return nodes;
}

// rounding the interpolant's monomial coefficients at grain g perturbs values
// by up to (deg+1) * max(1,|t|)^deg / (2g) on the node span, so the grain has
// to absorb that growth
Int coefficient_amplification(const Rat& span_hi, int degree) {
  Int base = ceil_rat(abs(span_hi)) + 1;
  Int amp;
  mpz_pow_ui(amp.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(degree + 1));
  return amp;
}

Rat max_abs_slope(const PiecewiseLinear& p) {
  Rat m(0);
  const auto& pts = p.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Rat s = abs((pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first));
    m = std::max(m, s);
  }
  return m;
}

// certified check that |target - a| < d at a single rational point
bool point_error_within(const LaurentPoly& a, const PiecewiseLinear& target,
                        const Rat& x, const Rat& d) {
  Rat tv = target.eval(x);
  if (sgn(x) == 0) {
    Rat av(0);
    for (const auto& [n, c] : a.coeffs()) av += c;
    return abs(tv - av) < d;
  }
  bool constant_only = a.coeffs().empty() ||
                       (a.coeffs().size() == 1 && a.coeffs().begin()->first == 0);
  if (constant_only) return abs(tv - a.coeff(0)) < d;
  Rat eps = d / 4;
  while (true) {
    QInterval err = QInterval::point(tv) - a.eval_enclosure(x, eps);
    if (-d < err.lo && err.hi < d) return true;
    if (err.lo >= d || err.hi <= -d) return false;
    eps /= 16;  // |target - a| never equals d exactly here (transcendence)
  }
}

// the target restricted to [u, v], split into its affine pieces y = alpha + beta x
struct AffinePiece {
  Rat lo, hi, alpha, beta;
};

std::vector<AffinePiece> affine_pieces(const PiecewiseLinear& t, const Rat& u,
                                       const Rat& v) {
  const auto& pts = t.points();
  std::vector<AffinePiece> out;
  auto add = [&](Rat a, Rat b, const Rat& alpha, const Rat& beta) {
    if (a < u) a = u;
    if (b > v) b = v;
    if (a <= b) out.push_back({std::move(a), std::move(b), alpha, beta});
  };
  if (u < pts.front().first) add(u, pts.front().first, pts.front().second, Rat(0));
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Rat beta =
        (pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first);
    Rat alpha = pts[i - 1].second - beta * pts[i - 1].first;
    add(pts[i - 1].first, pts[i].first, alpha, beta);
  }
  if (v > pts.back().first) add(pts.back().first, v, pts.back().second, Rat(0));
  if (out.empty()) out.push_back({u, v, t.eval(u), Rat(0)});
  return out;
}

// a refinable enclosure of h = a - (alpha + beta x) at one point; every call
// tightens and returns the current enclosure
using Refiner = std::function<QInterval()>;

Refiner rational_site(const LaurentPoly& a, const Rat& x, const Rat& alpha,
                      const Rat& beta) {
  Rat affine = alpha + beta * x;
  if (sgn(x) == 0) {
    Rat v = -affine;
    for (const auto& [n, c] : a.coeffs()) v += c;
    QInterval pt = QInterval::point(v);
    return [pt]() { return pt; };
  }
  return [&a, x, affine, eps = Rat(1, 4)]() mutable {
    eps /= 16;
    return a.eval_enclosure(x, eps) - QInterval::point(affine);
  };
}

// sites where h = a - (alpha + beta x) can attain an extremum over
// [seg.lo, seg.hi]: the endpoints, plus every interior zero of h'. In
// t = e^x the zeros of h' are the roots of sum n c_n t^n - beta t^0
// (cleared to a polynomial), so they are isolated exactly.
std::vector<Refiner> extreme_sites(const LaurentPoly& a, const AffinePiece& seg) {
  std::vector<Refiner> sites;
  sites.push_back(rational_site(a, seg.lo, seg.alpha, seg.beta));
  if (seg.lo == seg.hi) return sites;
  sites.push_back(rational_site(a, seg.hi, seg.alpha, seg.beta));

  std::map<long, Rat> der;
  for (const auto& [n, c] : a.coeffs()) {
    if (n != 0) der[n] = Rat(n) * c;
  }
  if (sgn(seg.beta) != 0) der[0] -= seg.beta;
  if (der.empty()) return sites;
  long nmin = der.begin()->first;
  std::vector<Rat> rc(static_cast<std::size_t>(der.rbegin()->first - nmin + 1),
                      Rat(0));
  for (const auto& [n, c] : der) rc[static_cast<std::size_t>(n - nmin)] = c;
  QPoly r(std::move(rc));
  if (r.degree() <= 0) return sites;

  auto rp = std::make_shared<const QPoly>(std::move(r));
  auto chain = std::make_shared<const std::vector<QPoly>>(sturm_chain(*rp));
  auto fact = std::make_shared<const std::pair<QPoly, long>>(a.factored());

  // window (e^lo, e^hi); exact endpoint when the exponent is 0
  bool lo_exact = sgn(seg.lo) == 0, hi_exact = sgn(seg.hi) == 0;
  Rat weps(1, 4);
  QInterval wlo = lo_exact ? QInterval::point(Rat(1)) : exp_enclosure(seg.lo, weps);
  QInterval whi = hi_exact ? QInterval::point(Rat(1)) : exp_enclosure(seg.hi, weps);

  for (QInterval iso : isolate_real_roots(*rp)) {
    bool inside = false;
    for (int step = 0;; ++step) {
      if (iso.hi <= wlo.lo || iso.lo >= whi.hi) break;  // root at or past a wall
      if (wlo.hi < iso.lo && iso.hi < whi.lo) {
        inside = true;
        break;
      }
      // a root never coincides with a wall: transcendental walls by
      // Lindemann, the exact wall t = 1 by the boundary checks above
      if (step >= 200) fail(errc::inconsistent, "root-window separation stalled");
      if (iso.width() > 0) iso = refine_root(*rp, *chain, iso, iso.width() / 16);
      weps /= 16;
      if (!lo_exact) wlo = exp_enclosure(seg.lo, weps);
      if (!hi_exact) whi = exp_enclosure(seg.hi, weps);
    }
    if (!inside) continue;
    sites.push_back([rp, chain, fact, iso, alpha = seg.alpha, beta = seg.beta,
                     leps = Rat(1, 4)]() mutable -> QInterval {
      if (iso.width() > 0) iso = refine_root(*rp, *chain, iso, iso.width() / 16);
      leps /= 16;
      QInterval val = fact->first.eval(iso) * pow(iso, fact->second);
      QInterval lx = iso.lo == 1 && iso.hi == 1
                         ? QInterval::point(Rat(0))
                         : QInterval(ln_enclosure(iso.lo, leps).lo,
                                     ln_enclosure(iso.hi, leps).hi);
      return val - QInterval::point(alpha) - QInterval::point(beta) * lx;
    });
  }
  return sites;
}

bool certified_sup_within(const LaurentPoly& a, const PiecewiseLinear& target,
                          const ClosedSetR& k, const Rat& d) {
  for (const auto& comp : k.components()) {
    if (comp.is_point()) {
      if (!point_error_within(a, target, *comp.lo, d)) return false;
      continue;
    }
    for (const auto& seg : affine_pieces(target, *comp.lo, *comp.hi)) {
      // a midpoint probe rejects hopeless candidates before root isolation
      if (!point_error_within(a, target, (seg.lo + seg.hi) / 2, d)) return false;
      for (auto& site : extreme_sites(a, seg)) {
        bool ok = false;
        for (int round = 0; round < 60 && !ok; ++round) {
          QInterval v = site();
          if (v.lo >= d || v.hi <= -d) return false;
          ok = -d < v.lo && v.hi < d;
        }
        if (!ok) return false;
      }
    }
  }
  return true;
}

const int kApproxDegrees[] = {0, 1, 2, 4, 8, 12, 16, 24, 32, 48, 64, 96};

}  // namespace

LaurentPoly compact_uniform_approx(const PiecewiseLinear& target, const ClosedSetR& k,
                                   const Rat& d, const Supernatural& n) {
  if (sgn(d) <= 0) fail(errc::precondition, "tolerance must be positive");
  if (!k.is_bounded()) fail(errc::precondition, "approximation set must be bounded");
  if (k.is_empty()) return LaurentPoly::zero(n);
  if (target.is_constant() && dn_contains(target.points().front().second, n))
    return LaurentPoly::constant(target.points().front().second, n);

  Rat a = *k.min_point(), b = *k.max_point();
  Rat slope = max_abs_slope(target);
  Rat ln_eps = d / (8 * (slope + 1));
  bool saturated = false;

  Rat tlo = exp_enclosure(a, Rat(1, 8)).lo;
  Rat thi = exp_enclosure(b, Rat(1, 8)).hi;

  for (int attempt = 0; attempt < 12; ++attempt) {
    int degree = kApproxDegrees[attempt];
    Int want = Int(1) << (12 + 3 * attempt);
    Rat grain_need = ceil_rat(Rat(8) / d) + 1;
    while (Rat(want) < grain_need) want *= 2;
    want *= coefficient_amplification(thi, degree);
    Rounder round = make_rounder(n, want);
    saturated = saturated || round.saturated;
    std::vector<std::pair<Rat, Rat>> pts;
    for (const Rat& t : cheb_nodes(tlo, thi, degree + 1)) {
      QInterval xe = ln_enclosure(t, ln_eps);
      pts.push_back({t, round(target.range_on(xe).mid())});
    }
    QPoly p = interpolate_polynomial(pts);

    std::map<long, Rat> cmap;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
      Rat c = round(p.coeffs()[i]);
      if (sgn(c) != 0) cmap[static_cast<long>(i)] = c;
    }
    LaurentPoly cand(std::move(cmap), n);
    if (certified_sup_within(cand, target, k, d)) return cand;
  }
  if (saturated)
    fail(errc::insufficient_density,
         "modulus " + n.str() + " has no denominators fine enough for tolerance " +
             to_string(d));
  fail(errc::inconsistent, "uniform approximation did not converge");
}

// ---------- interpolation ----------

namespace {

// exact positive lower bound for h on bounded K, given h strictly positive;
// the minimum sits at a component endpoint or a zero of h', so it is pinned
// by the same extreme sites the sup certification uses
Rat certified_min_lower_bound(const LaurentPoly& h, const ClosedSetR& k) {
  std::vector<Refiner> sites;
  for (const auto& comp : k.components()) {
    if (comp.is_point()) {
      sites.push_back(rational_site(h, *comp.lo, Rat(0), Rat(0)));
      continue;
    }
    AffinePiece seg{*comp.lo, *comp.hi, Rat(0), Rat(0)};
    for (auto& s : extreme_sites(h, seg)) sites.push_back(std::move(s));
  }
  if (sites.empty()) fail(errc::precondition, "gap over the empty set");

  std::vector<QInterval> vals;
  for (auto& s : sites) vals.push_back(s());
  for (int round = 0; round < 60; ++round) {
    Rat m = vals.front().lo, cap = vals.front().hi;
    for (const auto& v : vals) {
      m = std::min(m, v.lo);
      cap = std::min(cap, v.hi);
    }
    if (m > 0 && (cap - m) * 4 <= cap) return m;
    for (std::size_t i = 0; i < sites.size(); ++i) vals[i] = sites[i]();
  }
  fail(errc::inconsistent, "gap refinement failed on a positive function");
}

bool all_strictly_positive(const std::vector<LaurentPoly>& hs, const ClosedSetR& f) {
  for (const auto& h : hs) {
    if (strictly_positive_on(h, f).verdict != Positivity::Positive) return false;
  }
  return true;
}

std::vector<LaurentPoly> boundary_differences(const LaurentPoly& a,
                                              const std::vector<LaurentPoly>& ps,
                                              const std::vector<LaurentPoly>& qs) {
  std::vector<LaurentPoly> hs;
  for (const auto& p : ps) hs.push_back(a - p);
  for (const auto& q : qs) hs.push_back(q - a);
  return hs;
}

// grid nodes of each component: endpoints plus a uniform refinement
std::vector<Rat> grid_nodes(const ClosedSetR& k, int pieces_per_component) {
  std::vector<Rat> xs;
  for (const auto& comp : k.components()) {
    Rat u = *comp.lo, v = *comp.hi;
    xs.push_back(u);
    if (u == v) continue;
    for (int i = 1; i < pieces_per_component; ++i)
      xs.push_back(u + (v - u) * Rat(i) / Rat(pieces_per_component));
    xs.push_back(v);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// midpoint-of-certified-window values, one per node
PiecewiseLinear tube_target(const std::vector<Rat>& nodes,
                            const std::vector<LaurentPoly>& lows,
                            const std::vector<LaurentPoly>& highs, const Rat& tight,
                            const Rounder& round) {
  std::vector<std::pair<Rat, Rat>> pts;
  for (const Rat& x : nodes) {
    Rat lo, hi;
    bool fl = true, fh = true;
    for (const auto& l : lows) {
      Rat v = l.eval_enclosure(x, tight).hi;
      if (fl || v > lo) lo = v;
      fl = false;
    }
    for (const auto& h : highs) {
      Rat v = h.eval_enclosure(x, tight).lo;
      if (fh || v < hi) hi = v;
      fh = false;
    }
    pts.push_back({x, round((lo + hi) / 2)});
  }
  return PiecewiseLinear::from_points(std::move(pts));
}

LaurentPoly compact_interpolate(const ClosedSetR& f, const std::vector<LaurentPoly>& ps,
                                const std::vector<LaurentPoly>& qs,
                                const Supernatural& n) {
  Rat gap;
  bool first = true;
  for (const auto& p : ps) {
    for (const auto& q : qs) {
      Rat g = certified_min_lower_bound(q - p, f);
      if (first || g < gap) gap = g;
      first = false;
    }
  }

  for (int attempt = 0; attempt < 8; ++attempt) {
    int pieces = 8 << attempt;
    Rat tol = gap / (8 << attempt);
    Rounder round = make_rounder(n, ceil_rat(Rat(64 << attempt) / gap) + 1);
    PiecewiseLinear target =
        tube_target(grid_nodes(f, pieces), ps, qs, gap / 16, round);
    LaurentPoly cand = compact_uniform_approx(target, f, tol, n);
    if (all_strictly_positive(boundary_differences(cand, ps, qs), f)) return cand;
  }
  fail(errc::inconsistent, "bounded-set interpolation did not converge");
}

long top_disagreement(const LaurentPoly& a, const LaurentPoly& b) {
  long hi = LONG_MIN, lo = LONG_MAX;
  for (const auto* p : {&a, &b}) {
    if (p->coeffs().empty()) continue;
    hi = std::max(hi, p->max_exponent());
    lo = std::min(lo, p->min_exponent());
  }
  for (long k = hi; k >= lo; --k) {
    if (a.coeff(k) != b.coeff(k)) return k;
  }
  fail(errc::precondition, "polynomials do not disagree");
}

const int kTailDegrees[] = {3, 5, 8, 12, 18, 26, 38, 54};

LaurentPoly ray_interpolate(const ClosedSetR& f, std::vector<LaurentPoly> ps,
                            std::vector<LaurentPoly> qs, const Supernatural& n) {
  // f bounded below, unbounded above; every q - p strictly positive on f
  if (rev_lex_compare(ps[0], ps[1]) == RevLex::Greater) std::swap(ps[0], ps[1]);
  if (rev_lex_compare(qs[0], qs[1]) == RevLex::Greater) std::swap(qs[0], qs[1]);
  const LaurentPoly& p1 = ps[1];
  const LaurentPoly& q0 = qs[0];

  long n0 = top_disagreement(p1, q0);
  LaurentPoly a0 = p1 + LaurentPoly::monomial(Rat(1), n0 - 1, n);
  LaurentPoly one = LaurentPoly::constant(Rat(1), n);

  long chosen_n = 0;
  Rat big_r;
  std::vector<LaurentPoly> tails;
  for (long N = 1; N <= 64; N *= 2) {
    std::vector<LaurentPoly> hs;
    for (const auto& p : ps) hs.push_back(-one - (p - a0).shifted(N));
    for (const auto& q : qs) hs.push_back((q - a0).shifted(N) - one);
    bool shape_ok = true;
    for (const auto& h : hs) {
      if (h.is_zero() || sgn(h.coeffs().rbegin()->second) <= 0) {
        shape_ok = false;
        break;
      }
    }
    if (!shape_ok) continue;

    long r = 1;
    for (const auto& h : hs) {
      Rat tb = cauchy_root_bound(h.factored().first);
      while (!(exp_enclosure(Rat(r), Rat(1, 4)).lo > tb)) ++r;
    }
    if (all_strictly_positive(hs, f.clip_below(Rat(r)))) {
      chosen_n = N;
      big_r = Rat(r);
      tails = std::move(hs);
      break;
    }
  }
  if (chosen_n == 0) fail(errc::inconsistent, "tail domination search failed");

  ClosedSetR k = f.clip_above(big_r);
  if (k.is_empty()) {
    LaurentPoly a = a0;
    if (all_strictly_positive(boundary_differences(a, ps, qs), f)) return a;
    fail(errc::inconsistent, "tail-only interpolant failed validation");
  }

  std::vector<LaurentPoly> lows, highs;
  for (const auto& p : ps) lows.push_back((p - a0).shifted(chosen_n));
  for (const auto& q : qs) highs.push_back((q - a0).shifted(chosen_n));

  Rat gap;
  bool first = true;
  for (const auto& p : ps) {
    for (const auto& q : qs) {
      Rat g = certified_min_lower_bound((q - p).shifted(chosen_n), k);
      if (first || g < gap) gap = g;
      first = false;
    }
  }

  Rat a_min = *k.min_point();
  Rat slo = exp_enclosure(-big_r, Rat(1, 8)).lo;
  Rat shi = exp_enclosure(-a_min, Rat(1, 8)).hi;
  for (int attempt = 0; attempt < 8; ++attempt) {
    int pieces = 8 << attempt;
    int degree = kTailDegrees[attempt];
    Int want = ceil_rat(Rat(64 << attempt) / std::min(gap, Rat(1))) + 1;
    want *= coefficient_amplification(shi, degree);
    Rounder round = make_rounder(n, want);

    std::vector<Rat> nodes = grid_nodes(k, pieces);
    PiecewiseLinear raw = tube_target(nodes, lows, highs, gap / 16, round);
    // clamp the seam value into (-1, 1), where tail domination covers the
    // tube, then ramp to 0 so the correction dies off along the ray
    std::vector<std::pair<Rat, Rat>> pts = raw.points();
    Rat half(1, 2);
    if (pts.back().second > half) pts.back().second = half;
    if (pts.back().second < -half) pts.back().second = -half;
    pts.push_back({big_r + 1, Rat(0)});
    PiecewiseLinear target = PiecewiseLinear::from_points(std::move(pts));

    // correction in powers of e^{-x} only; interpolating down to s = 0 (the
    // point at infinity) keeps the tail from swinging on extrapolation
    Rat slope = max_abs_slope(target);
    Rat ln_eps = std::min(gap, Rat(1)) / (16 * (slope + 1));
    std::vector<std::pair<Rat, Rat>> spts;
    for (const Rat& s : cheb_nodes(Rat(0), shi, degree + 1)) {
      if (sgn(s) == 0) {
        spts.push_back({s, Rat(0)});
        continue;
      }
      QInterval xe = -ln_enclosure(s, ln_eps);
      spts.push_back({s, round(target.range_on(xe).mid()) / s});
    }
    QPoly p = interpolate_polynomial(spts);
    std::map<long, Rat> cmap;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
      Rat c = round(p.coeffs()[i]);
      if (sgn(c) != 0) cmap[-static_cast<long>(i) - 1] = c;
    }
    LaurentPoly a1(std::move(cmap), n);

    // certified tail bound: |a1| < 1 beyond R, where domination holds
    ClosedSetR tail_set = f.clip_below(big_r);
    if (strictly_positive_on(one - a1, tail_set).verdict != Positivity::Positive)
      continue;
    if (strictly_positive_on(one + a1, tail_set).verdict != Positivity::Positive)
      continue;

    LaurentPoly a = a0 + a1.shifted(-chosen_n);
    if (all_strictly_positive(boundary_differences(a, ps, qs), f)) return a;
  }
  fail(errc::inconsistent, "ray interpolation did not converge");
}

}  // namespace

LaurentPoly interpolate_semibounded(const ClosedSetR& F, const LaurentPoly& p0,
                                    const LaurentPoly& p1, const LaurentPoly& q0,
                                    const LaurentPoly& q1) {
  const Supernatural& n = p0.modulus();
  for (const auto* g : {&p1, &q0, &q1}) {
    if (!(g->modulus() == n))
      fail(errc::precondition, "bounds must share one coefficient modulus");
  }
  if (!F.semi_bounded())
    fail(errc::not_semi_bounded, "interpolation needs a semi-bounded set");

  const LaurentPoly* ps[2] = {&p0, &p1};
  const LaurentPoly* qs[2] = {&q0, &q1};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      LaurentPoly diff = *qs[j] - *ps[i];
      if (diff.is_zero()) continue;
      if (strictly_positive_on(diff, F).verdict != Positivity::Positive)
        fail(errc::precondition, "p" + std::to_string(i) + " <= q" + std::to_string(j) +
                                     " fails on the given set");
    }
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if ((*qs[j] - *ps[i]).is_zero()) return *ps[i];
    }
  }
  if (F.is_empty()) return p0;

  if (F.bounded_above() && !F.bounded_below()) {
    LaurentPoly r = interpolate_semibounded(F.reflected(), p0.reflected(), p1.reflected(),
                                            q0.reflected(), q1.reflected());
    return r.reflected();
  }
  if (F.is_bounded()) return compact_interpolate(F, {p0, p1}, {q0, q1}, n);
  return ray_interpolate(F, {p0, p1}, {q0, q1}, n);
}

bool bounded_on_line(const LaurentPoly& f) {
  return f.is_zero() || (f.min_exponent() == 0 && f.max_exponent() == 0);
}

UnboundedObstruction converse_witness(long n, const Supernatural& modulus) {
  if (n < 2) fail(errc::precondition, "parameter must be at least 2");
  Rat nn(n);
  UnboundedObstruction out;
  out.parameter = n;
  out.p0 = LaurentPoly::constant(Rat(-1), modulus);
  out.p1 = LaurentPoly({{2, Rat(-1)}, {1, 3 * nn}, {0, -2 * nn * nn}}, modulus);
  out.q0 = LaurentPoly::monomial(Rat(1), 2, modulus);
  out.q1 = LaurentPoly::constant(nn * nn, modulus);

  ClosedSetR line = ClosedSetR::whole_line();
  for (const auto* p : {&out.p0, &out.p1}) {
    for (const auto* q : {&out.q0, &out.q1}) {
      if (strictly_positive_on(*q - *p, line).verdict != Positivity::Positive)
        fail(errc::inconsistent, "obstruction quadruple is not ordered");
    }
  }

  out.lower_required = nn * nn / 4;
  out.peak_t = 3 * nn / 2;
  out.upper_required = Rat(0);
  out.feasible = out.lower_required <= out.upper_required;

  // tightness checks: the peak value really blocks smaller constants, and
  // any positive constant already fails against q0
  LaurentPoly c_low = LaurentPoly::constant(out.lower_required, modulus);
  if (strictly_positive_on(c_low - out.p1, line).verdict != Positivity::NotPositive)
    fail(errc::inconsistent, "peak bound is not tight");
  LaurentPoly c_eps = LaurentPoly::constant(Rat(1, 1000), modulus);
  if (strictly_positive_on(out.q0 - c_eps, line).verdict != Positivity::NotPositive)
    fail(errc::inconsistent, "infimum bound is not tight");

  out.note =
      "every Laurent polynomial bounded on the line is constant; the lower bound "
      "exceeds the upper bound, so no interpolant exists";
  return out;
}

}  // namespace riesz
