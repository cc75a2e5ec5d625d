#include "riesz/polynomial.hpp"

#include <algorithm>

#include "riesz/error.hpp"

namespace riesz {

QPoly::QPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

QPoly QPoly::constant(const Rat& c) { return QPoly(std::vector<Rat>{c}); }

QPoly QPoly::monomial(const Rat& c, std::size_t power) {
  std::vector<Rat> v(power + 1, Rat(0));
  v[power] = c;
  return QPoly(std::move(v));
}

const Rat& QPoly::leading() const {
  if (c_.empty()) fail(errc::precondition, "zero polynomial has no leading coefficient");
  return c_.back();
}

Rat QPoly::coeff(std::size_t power) const {
  return power < c_.size() ? c_[power] : Rat(0);
}

Rat QPoly::eval(const Rat& x) const {
  Rat acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

QInterval QPoly::eval(const QInterval& x) const {
  QInterval acc = QInterval::point(Rat(0));
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    acc = acc * x + QInterval::point(*it);
  return acc;
}

QPoly QPoly::derivative() const {
  if (c_.size() <= 1) return QPoly();
  std::vector<Rat> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = Rat(long(i)) * c_[i];
  return QPoly(std::move(d));
}

std::string QPoly::str() const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (sgn(c_[i]) == 0) continue;
    if (!s.empty()) s += " + ";
    s += to_string(c_[i]);
    if (i > 0) s += "*t^" + std::to_string(i);
  }
  return s;
}

QPoly operator+(const QPoly& a, const QPoly& b) {
  std::vector<Rat> c(std::max(a.coeffs().size(), b.coeffs().size()), Rat(0));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return QPoly(std::move(c));
}

QPoly operator-(const QPoly& a, const QPoly& b) { return a + (Rat(-1) * b); }

QPoly operator-(const QPoly& a) { return Rat(-1) * a; }

QPoly operator*(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return QPoly();
  std::vector<Rat> c(a.coeffs().size() + b.coeffs().size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j)
      c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return QPoly(std::move(c));
}

QPoly operator*(const Rat& s, const QPoly& a) {
  std::vector<Rat> c = a.coeffs();
  for (auto& x : c) x *= s;
  return QPoly(std::move(c));
}

QPolyDivision divrem(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) fail(errc::precondition, "polynomial division by zero");
  std::vector<Rat> rem = a.coeffs();
  std::vector<Rat> quo;
  long db = b.degree();
  while (static_cast<long>(rem.size()) - 1 >= db) {
    Rat factor = rem.back() / b.leading();
    std::size_t shift = rem.size() - 1 - db;
    if (quo.size() < shift + 1) quo.resize(shift + 1, Rat(0));
    quo[shift] = factor;
    for (long i = 0; i <= db; ++i) rem[shift + i] -= factor * b.coeffs()[i];
    while (!rem.empty() && sgn(rem.back()) == 0) rem.pop_back();
    if (rem.empty()) break;
  }
  return {QPoly(std::move(quo)), QPoly(std::move(rem))};
}

QPoly primitive_scale(const QPoly& p) {
  if (p.is_zero()) return p;
  Int den = 1, num = 0;
  for (const auto& x : p.coeffs()) den = lcm(den, x.get_den());
  for (const auto& x : p.coeffs()) num = gcd(num, Rat(x * Rat(den)).get_num());
  Rat scale(den, num);
  scale.canonicalize();
  return scale * p;
}

QPoly poly_gcd(const QPoly& a, const QPoly& b) {
  QPoly x = primitive_scale(a), y = primitive_scale(b);
  while (!y.is_zero()) {
    QPoly r = primitive_scale(divrem(x, y).remainder);
    x = y;
    y = r;
  }
  return x;
}

QPoly squarefree_part(const QPoly& p) {
  if (p.degree() <= 1) return primitive_scale(p);
  QPoly g = poly_gcd(p, p.derivative());
  if (g.degree() <= 0) return primitive_scale(p);
  return primitive_scale(divrem(p, g).quotient);
}

ChainPoint ChainPoint::exp_of(const Rat& a) {
  if (sgn(a) == 0) fail(errc::precondition, "e^0 is the rational point 1");
  return {Kind::ExpOf, a};
}

std::vector<QPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> chain;
  QPoly p0 = squarefree_part(p);
  if (p0.is_zero()) return chain;
  chain.push_back(p0);
  QPoly p1 = primitive_scale(p0.derivative());
  while (!p1.is_zero()) {
    chain.push_back(p1);
    QPoly r = primitive_scale(-divrem(chain[chain.size() - 2], p1).remainder);
    p1 = std::move(r);
  }
  return chain;
}

namespace {

int sign_at_infinity(const QPoly& p, bool plus) {
  if (p.is_zero()) return 0;
  int lead = sgn(p.leading());
  if (plus) return lead;
  return p.degree() % 2 == 0 ? lead : -lead;
}

int count_changes(const std::vector<int>& signs) {
  int changes = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

int sign_variations(const std::vector<QPoly>& chain, const ChainPoint& at) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  switch (at.kind) {
    case ChainPoint::Kind::MinusInf:
      for (const auto& p : chain) signs.push_back(sign_at_infinity(p, false));
      break;
    case ChainPoint::Kind::PlusInf:
      for (const auto& p : chain) signs.push_back(sign_at_infinity(p, true));
      break;
    case ChainPoint::Kind::Rational:
      for (const auto& p : chain) signs.push_back(sgn(p.eval(at.value)));
      break;
    case ChainPoint::Kind::ExpOf: {
      // refine the enclosure of e^a until every chain entry has a settled
      // sign; entries never vanish at e^a, so this terminates
      Rat eps(1, 4);
      signs.assign(chain.size(), 0);
      std::vector<bool> settled(chain.size(), false);
      bool all = false;
      while (!all) {
        QInterval t = exp_enclosure(at.value, eps);
        all = true;
        for (std::size_t i = 0; i < chain.size(); ++i) {
          if (settled[i]) continue;
          auto s = chain[i].eval(t).sign();
          if (s && *s != 0) {
            signs[i] = *s;
            settled[i] = true;
          } else {
            all = false;
          }
        }
        eps /= 16;
      }
      break;
    }
  }
  return count_changes(signs);
}

long count_roots_between(const QPoly& p, const std::vector<QPoly>& chain,
                         const ChainPoint& lo, const ChainPoint& hi) {
  if (p.is_zero()) fail(errc::precondition, "root count of the zero polynomial");
  if (chain.empty()) return 0;
  if (lo.kind == ChainPoint::Kind::Rational && sgn(chain[0].eval(lo.value)) == 0)
    fail(errc::precondition, "root at counting endpoint");
  if (hi.kind == ChainPoint::Kind::Rational && sgn(chain[0].eval(hi.value)) == 0)
    fail(errc::precondition, "root at counting endpoint");
  return sign_variations(chain, lo) - sign_variations(chain, hi);
}

Rat cauchy_root_bound(const QPoly& p) {
  if (p.degree() < 1) return Rat(1);
  Rat m(0);
  for (std::size_t i = 0; i + 1 < p.coeffs().size(); ++i)
    m = std::max(m, abs(p.coeffs()[i]));
  return Rat(1) + m / abs(p.leading());
}

namespace {

struct Isolator {
  const QPoly& p;  // squarefree
  const std::vector<QPoly>& chain;
  std::vector<QInterval> out;

  long count(const Rat& a, const Rat& b) const {
    return count_roots_between(p, chain, ChainPoint::at(a), ChainPoint::at(b));
  }

  // invariant: p(a) != 0, p(b) != 0
  void split(const Rat& a, const Rat& b) {
    long n = count(a, b);
    if (n == 0) return;
    if (n == 1) {
      out.push_back(QInterval(a, b));
      return;
    }
    Rat mid = (a + b) / 2;
    if (sgn(p.eval(mid)) != 0) {
      split(a, mid);
      split(mid, b);
      return;
    }
    out.push_back(QInterval::point(mid));
    // carve out a punctured neighborhood holding only the root at mid
    Rat eps = (b - a) / 4;
    while (true) {
      Rat l = mid - eps, r = mid + eps;
      if (sgn(p.eval(l)) != 0 && sgn(p.eval(r)) != 0 && count(l, r) == 1) {
        split(a, l);
        split(r, b);
        return;
      }
      eps /= 2;
    }
  }
};

}  // namespace

std::vector<QInterval> isolate_real_roots(const QPoly& p) {
  QPoly sf = squarefree_part(p);
  if (sf.degree() < 1) return {};
  std::vector<QPoly> chain = sturm_chain(sf);
  Rat bound = cauchy_root_bound(sf);
  Isolator iso{sf, chain, {}};
  iso.split(-bound, bound);
  std::sort(iso.out.begin(), iso.out.end(),
            [](const QInterval& a, const QInterval& b) { return a.lo < b.lo; });
  return iso.out;
}

QInterval refine_root(const QPoly& p, const std::vector<QPoly>& chain,
                      QInterval iso, const Rat& eps) {
  std::vector<QPoly> local;
  if (chain.empty()) local = sturm_chain(p);
  const std::vector<QPoly>& ch = chain.empty() ? local : chain;
  if (ch.empty()) fail(errc::precondition, "refining a root of a constant");
  const QPoly& sf = ch[0];
  while (iso.width() > eps) {
    Rat mid = iso.mid();
    if (sgn(sf.eval(mid)) == 0) return QInterval::point(mid);
    if (count_roots_between(sf, ch, ChainPoint::at(iso.lo), ChainPoint::at(mid)) == 1)
      iso = QInterval(iso.lo, mid);
    else
      iso = QInterval(mid, iso.hi);
  }
  return iso;
}

QPoly interpolate_polynomial(const std::vector<std::pair<Rat, Rat>>& nodes) {
  if (nodes.empty()) return QPoly();
  // Newton divided differences
  std::size_t n = nodes.size();
  std::vector<Rat> coef(n);
  for (std::size_t i = 0; i < n; ++i) coef[i] = nodes[i].second;
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      Rat dx = nodes[i].first - nodes[i - level].first;
      if (sgn(dx) == 0) fail(errc::precondition, "repeated interpolation node");
      coef[i] = (coef[i] - coef[i - 1]) / dx;
    }
  }
  QPoly acc = QPoly::constant(coef[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    QPoly shift(std::vector<Rat>{-nodes[i].first, Rat(1)});
    acc = acc * shift + QPoly::constant(coef[i]);
  }
  return acc;
}

}  // namespace riesz
