#include "riesz/kms_bundle.hpp"

#include <algorithm>
#include <utility>

#include "riesz/error.hpp"
#include "riesz/lattice.hpp"
#include "riesz/matrix.hpp"

namespace riesz {

namespace {

bool pl_is_zero(const PiecewiseLinear& p) {
  return p.is_constant() && p.points().front().second == 0;
}

// Minimal breakpoint list for the same function: collapse constant tails and
// collinear interior points, and pin constants to a single point at 0.
PiecewiseLinear pl_simplify(const PiecewiseLinear& p) {
  std::vector<std::pair<Rat, Rat>> pts = p.points();
  while (pts.size() >= 2 && pts[0].second == pts[1].second) pts.erase(pts.begin());
  while (pts.size() >= 2 && pts[pts.size() - 1].second == pts[pts.size() - 2].second)
    pts.pop_back();
  std::vector<std::pair<Rat, Rat>> kept;
  for (const auto& pt : pts) {
    while (kept.size() >= 2) {
      const auto& a = kept[kept.size() - 2];
      const auto& b = kept[kept.size() - 1];
      if ((b.second - a.second) * (pt.first - b.first) ==
          (pt.second - b.second) * (b.first - a.first)) {
        kept.pop_back();
      } else {
        break;
      }
    }
    kept.push_back(pt);
  }
  if (kept.size() == 1) return PiecewiseLinear::constant(kept.front().second);
  return PiecewiseLinear::from_points(std::move(kept));
}

void normalize_terms(std::map<long, PiecewiseLinear>& terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    it->second = pl_simplify(it->second);
    if (pl_is_zero(it->second)) {
      it = terms.erase(it);
    } else {
      ++it;
    }
  }
}

bool comp_contains(const ClosedSetR::Component& c, const Rat& x) {
  if (c.lo && x < *c.lo) return false;
  if (c.hi && x > *c.hi) return false;
  return true;
}

ClosedSetR comp_set(const ClosedSetR::Component& c) { return ClosedSetR({c}); }

// F restricted to the component's extent.
ClosedSetR clip_to_component(ClosedSetR f, const ClosedSetR::Component& c) {
  if (c.lo) f = f.clip_below(*c.lo);
  if (c.hi) f = f.clip_above(*c.hi);
  return f;
}

const PiecewiseLinear& term_or_zero(const std::map<long, PiecewiseLinear>& terms, long j) {
  static const PiecewiseLinear kZero;
  auto it = terms.find(j);
  return it == terms.end() ? kZero : it->second;
}

std::map<long, Int> clean_xi(std::map<long, Int> xi) {
  for (auto it = xi.begin(); it != xi.end();) {
    if (it->second == 0) {
      it = xi.erase(it);
    } else {
      ++it;
    }
  }
  return xi;
}

// Equality of two piecewise-linear functions on [lo, hi] (absent side means
// unbounded): endpoint values plus every interior breakpoint of either.
bool pl_equal_on(const PiecewiseLinear& p, const PiecewiseLinear& q,
                 const std::optional<Rat>& lo, const std::optional<Rat>& hi) {
  if (lo && p.eval(*lo) != q.eval(*lo)) return false;
  if (hi && p.eval(*hi) != q.eval(*hi)) return false;
  if (!lo && p.points().front().second != q.points().front().second) return false;
  if (!hi && p.points().back().second != q.points().back().second) return false;
  auto inside = [&](const Rat& x) {
    return (!lo || *lo < x) && (!hi || x < *hi);
  };
  for (const auto& [x, v] : p.points())
    if (inside(x) && p.eval(x) != q.eval(x)) return false;
  for (const auto& [x, v] : q.points())
    if (inside(x) && p.eval(x) != q.eval(x)) return false;
  return true;
}

}  // namespace

void BundleSpec::validate() const {
  if (F.is_empty()) fail(errc::precondition, "bundle base must be nonempty");
  if (!F.contains(Rat(0))) fail(errc::precondition, "bundle base must contain 0");
}

CutoffTriple CutoffTriple::standard(long k) {
  if (k < 1) fail(errc::precondition, "cutoff stage must be positive");
  Rat a(1, k), b(1, 2 * k);
  CutoffTriple t;
  t.k = k;
  t.psi_minus = PiecewiseLinear::from_points({{-a, Rat(1)}, {-b, Rat(0)}});
  t.psi_mid = PiecewiseLinear::from_points({{-a, Rat(0)}, {-b, Rat(1)}, {b, Rat(1)}, {a, Rat(0)}});
  t.psi_plus = PiecewiseLinear::from_points({{b, Rat(0)}, {a, Rat(1)}});
  return t;
}

void CutoffTriple::validate() const {
  if (k < 1) fail(errc::precondition, "cutoff stage must be positive");
  PiecewiseLinear sum = psi_minus + psi_mid + psi_plus;
  if (!sum.is_constant() || sum.eval(Rat(0)) != 1)
    fail(errc::precondition, "cutoffs must sum to 1");
  const ClosedSetR line = ClosedSetR::whole_line();
  for (const PiecewiseLinear* p : {&psi_minus, &psi_mid, &psi_plus}) {
    if (p->min_on(line) < 0 || p->max_on(line) > 1)
      fail(errc::precondition, "cutoffs must take values in [0, 1]");
  }
  Rat a(1, k), b(1, 2 * k);
  auto plateau = [](const PiecewiseLinear& p, const ClosedSetR& where) {
    return p.min_on(where) == 1 && p.max_on(where) == 1;
  };
  if (!plateau(psi_minus, ClosedSetR::ray_below(-a)))
    fail(errc::precondition, "left cutoff must be 1 below -1/k");
  if (!plateau(psi_mid, ClosedSetR::interval(-b, b)))
    fail(errc::precondition, "middle cutoff must be 1 on [-1/2k, 1/2k]");
  if (!plateau(psi_plus, ClosedSetR::ray_above(a)))
    fail(errc::precondition, "right cutoff must be 1 above 1/k");
}

PiecewiseExpFn PiecewiseExpFn::uniform(const ClosedSetR& F, std::map<long, PiecewiseLinear> terms) {
  normalize_terms(terms);
  PiecewiseExpFn f;
  for (const auto& c : F.components()) f.pieces.push_back({c, terms});
  return f;
}

void PiecewiseExpFn::validate_cover(const ClosedSetR& F) const {
  ClosedSetR covered;
  for (const auto& p : pieces) covered = covered.unite(comp_set(p.domain));
  for (const auto& c : F.components()) {
    bool inside = false;
    for (const auto& u : covered.components()) {
      bool lo_ok = !u.lo || (c.lo && *u.lo <= *c.lo);
      bool hi_ok = !u.hi || (c.hi && *c.hi <= *u.hi);
      if (lo_ok && hi_ok) {
        inside = true;
        break;
      }
    }
    if (!inside) fail(errc::precondition, "pieces must cover the bundle base");
  }
  // where two pieces overlap, the term lists must describe the same function
  // exponent by exponent
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces.size(); ++j) {
      const auto& a = pieces[i];
      const auto& b = pieces[j];
      std::optional<Rat> lo = a.domain.lo;
      if (b.domain.lo && (!lo || *b.domain.lo > *lo)) lo = b.domain.lo;
      std::optional<Rat> hi = a.domain.hi;
      if (b.domain.hi && (!hi || *b.domain.hi < *hi)) hi = b.domain.hi;
      if (lo && hi && *lo > *hi) continue;  // disjoint
      std::vector<long> exps;
      for (const auto& [e, r] : a.terms) exps.push_back(e);
      for (const auto& [e, r] : b.terms) exps.push_back(e);
      std::sort(exps.begin(), exps.end());
      exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
      for (long e : exps) {
        if (!pl_equal_on(term_or_zero(a.terms, e), term_or_zero(b.terms, e), lo, hi))
          fail(errc::precondition, "overlapping pieces disagree at e^" + std::to_string(e) + "x");
      }
    }
  }
}

LaurentPoly laurent_of_xi(const std::map<long, Int>& xi) {
  std::map<long, Rat> coeffs;
  for (const auto& [n, z] : xi) coeffs[n] = Rat(z);
  return LaurentPoly(std::move(coeffs), Supernatural::universal());
}

std::map<long, Int> shift_xi(const std::map<long, Int>& xi) {
  std::map<long, Int> out;
  for (const auto& [n, z] : xi) out[n - 1] = z;
  return out;
}

GZElement make_gz_element(const BundleSpec& B, const LaurentPoly& h_minus,
                          const std::map<long, Int>& xi, const LaurentPoly& h_plus, long k,
                          const PiecewiseLinear& g0) {
  B.validate();
  if (k < 1) fail(errc::precondition, "cutoff stage must be positive");
  if (!pl_is_zero(g0)) {
    if (g0.points().front().second != 0 || g0.points().back().second != 0)
      fail(errc::precondition, "g0 must be compactly supported");
  }
  Rat eps(1, 2 * k);
  ClosedSetR window = ClosedSetR::interval(-eps, eps);
  if (g0.min_on(window) != 0 || g0.max_on(window) != 0)
    fail(errc::support_overlap, "g0 meets the matching window (-1/" + std::to_string(2 * k) +
                                    ", 1/" + std::to_string(2 * k) + ")");
  CutoffTriple psi = CutoffTriple::standard(k);
  std::map<long, PiecewiseLinear> terms;
  auto add = [&](long j, const PiecewiseLinear& p) {
    auto it = terms.find(j);
    if (it == terms.end()) {
      terms.emplace(j, p);
    } else {
      it->second = it->second + p;
    }
  };
  for (const auto& [j, c] : h_minus.coeffs()) add(j, c * psi.psi_minus);
  for (const auto& [n, z] : xi) add(n, Rat(z) * psi.psi_mid);
  for (const auto& [j, c] : h_plus.coeffs()) add(j, c * psi.psi_plus);
  add(0, g0);
  GZElement e{clean_xi(xi), PiecewiseExpFn::uniform(B.F, std::move(terms)), eps};
  validate_gz(B, e);
  return e;
}

GZElement gz_zero(const BundleSpec& B) {
  B.validate();
  return GZElement{{}, PiecewiseExpFn::uniform(B.F, {}), Rat(1)};
}

GZElement gz_unit(const BundleSpec& B) {
  LaurentPoly one = LaurentPoly::constant(Rat(1), Supernatural::universal());
  return make_gz_element(B, one, {{0, Int(1)}}, one, 1, PiecewiseLinear());
}

void validate_gz(const BundleSpec& B, const GZElement& e) {
  B.validate();
  if (sign(e.window) <= 0) fail(errc::inconsistent, "matching window must be positive");
  e.f.validate_cover(B.F);
  // closure of F intersected with the open window: clip, then drop isolated
  // endpoints that only the closed window picks up
  ClosedSetR clipped = B.F.clip_below(-e.window).clip_above(e.window);
  std::vector<ClosedSetR::Component> comps;
  for (const auto& c : clipped.components()) {
    if (c.is_point() && (*c.lo == -e.window || *c.lo == e.window)) continue;
    comps.push_back(c);
  }
  ClosedSetR w{comps};
  for (const auto& piece : e.f.pieces) {
    ClosedSetR overlap = clip_to_component(w, piece.domain);
    if (overlap.is_empty()) continue;
    std::vector<long> exps;
    for (const auto& [j, r] : piece.terms) exps.push_back(j);
    for (const auto& [n, z] : e.xi) exps.push_back(n);
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());
    for (long j : exps) {
      auto it = e.xi.find(j);
      Rat expected = it == e.xi.end() ? Rat(0) : Rat(it->second);
      const PiecewiseLinear& r = term_or_zero(piece.terms, j);
      if (r.min_on(overlap) != expected || r.max_on(overlap) != expected)
        fail(errc::inconsistent,
             "coefficient of e^" + std::to_string(j) + "x deviates from xi on the window");
    }
  }
}

namespace {

GZElement map_element(const GZElement& e, long shift) {
  GZElement out;
  out.xi.clear();
  for (const auto& [n, z] : e.xi) out.xi[n + shift] = z;
  out.window = e.window;
  for (const auto& piece : e.f.pieces) {
    ExpPiece p;
    p.domain = piece.domain;
    for (const auto& [j, r] : piece.terms) p.terms[j + shift] = r;
    out.f.pieces.push_back(std::move(p));
  }
  return out;
}

}  // namespace

GZElement apply_sigma(const GZElement& e) {
  // (sigma xi)_n = xi_{n+1} stores z at n-1; f picks up a factor e^{-x}
  return map_element(e, -1);
}

GZElement apply_sigma_inverse(const GZElement& e) { return map_element(e, 1); }

GZElement operator+(const GZElement& a, const GZElement& b) {
  if (a.f.pieces.size() != b.f.pieces.size())
    fail(errc::dimension_mismatch, "elements live over different bundles");
  GZElement out;
  out.window = std::min(a.window, b.window);
  out.xi = a.xi;
  for (const auto& [n, z] : b.xi) out.xi[n] += z;
  out.xi = clean_xi(std::move(out.xi));
  for (std::size_t i = 0; i < a.f.pieces.size(); ++i) {
    const auto& pa = a.f.pieces[i];
    const auto& pb = b.f.pieces[i];
    if (!(pa.domain == pb.domain))
      fail(errc::dimension_mismatch, "elements live over different bundles");
    ExpPiece p;
    p.domain = pa.domain;
    p.terms = pa.terms;
    for (const auto& [j, r] : pb.terms) {
      auto it = p.terms.find(j);
      if (it == p.terms.end()) {
        p.terms.emplace(j, r);
      } else {
        it->second = it->second + r;
      }
    }
    normalize_terms(p.terms);
    out.f.pieces.push_back(std::move(p));
  }
  return out;
}

GZElement operator-(const GZElement& a) { return gz_scale(Int(-1), a); }

GZElement operator-(const GZElement& a, const GZElement& b) { return a + (-b); }

GZElement gz_scale(const Int& c, const GZElement& a) {
  GZElement out;
  out.window = a.window;
  for (const auto& [n, z] : a.xi) out.xi[n] = c * z;
  out.xi = clean_xi(std::move(out.xi));
  for (const auto& piece : a.f.pieces) {
    ExpPiece p;
    p.domain = piece.domain;
    for (const auto& [j, r] : piece.terms) p.terms[j] = Rat(c) * r;
    normalize_terms(p.terms);
    out.f.pieces.push_back(std::move(p));
  }
  return out;
}

bool gz_is_zero(const GZElement& e) {
  if (!e.xi.empty()) return false;
  for (const auto& piece : e.f.pieces)
    for (const auto& [j, r] : piece.terms)
      if (!pl_is_zero(r)) return false;
  return true;
}

Int sigma0(const GZElement& e) {
  Int total(0);
  for (const auto& [n, z] : e.xi) total += z;
  for (const auto& piece : e.f.pieces) {
    if (!comp_contains(piece.domain, Rat(0))) continue;
    Rat at_zero(0);
    for (const auto& [j, r] : piece.terms) at_zero += r.eval(Rat(0));
    if (at_zero != Rat(total))
      fail(errc::inconsistent, "coefficient sum " + to_string(total) +
                                   " does not match f(0) = " + to_string(at_zero));
    return total;
  }
  fail(errc::inconsistent, "no piece covers the fiber over 0");
}

namespace {

// Linear coordinates that separate elements as functions on the covered
// domains: xi entries, then coefficient values at enough sample points.
// Faithful for any element whose breakpoints were collected at build time.
// A point domain at 0 contributes the single value f(0) (sums of e^{j*0}
// collapse); elsewhere coefficients are separated exponent by exponent.
struct Coordinatizer {
  std::vector<long> xi_keys;
  std::vector<long> exps;
  std::vector<Rat> samples;
  std::vector<ClosedSetR::Component> domains;

  static Coordinatizer over(const std::vector<const GZElement*>& es) {
    if (es.empty()) fail(errc::precondition, "no elements to coordinatize");
    Coordinatizer c;
    for (const auto& piece : es.front()->f.pieces) c.domains.push_back(piece.domain);
    for (const GZElement* e : es) {
      if (e->f.pieces.size() != c.domains.size())
        fail(errc::dimension_mismatch, "elements live over different bundles");
      for (std::size_t i = 0; i < c.domains.size(); ++i) {
        if (!(e->f.pieces[i].domain == c.domains[i]))
          fail(errc::dimension_mismatch, "elements live over different bundles");
      }
      for (const auto& [n, z] : e->xi) c.xi_keys.push_back(n);
      for (const auto& piece : e->f.pieces) {
        for (const auto& [j, r] : piece.terms) {
          c.exps.push_back(j);
          for (const auto& [x, v] : r.points()) c.samples.push_back(x);
        }
      }
    }
    for (const auto& d : c.domains) {
      if (d.lo) c.samples.push_back(*d.lo);
      if (d.hi) c.samples.push_back(*d.hi);
    }
    c.samples.push_back(Rat(0));
    auto dedup = [](auto& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    dedup(c.xi_keys);
    dedup(c.exps);
    dedup(c.samples);
    if (c.exps.empty()) c.exps.push_back(0);  // all-zero families still get coordinates
    return c;
  }

  std::vector<Rat> coords(const GZElement& e) const {
    std::vector<Rat> out;
    for (long n : xi_keys) {
      auto it = e.xi.find(n);
      out.push_back(it == e.xi.end() ? Rat(0) : Rat(it->second));
    }
    for (std::size_t i = 0; i < domains.size(); ++i) {
      const auto& d = domains[i];
      const auto& terms = e.f.pieces[i].terms;
      if (d.is_point() && *d.lo == 0) {
        Rat total(0);
        for (const auto& [j, r] : terms) total += r.eval(Rat(0));
        out.push_back(total);
        continue;
      }
      for (long j : exps) {
        const PiecewiseLinear& r = term_or_zero(terms, j);
        if (d.is_point()) {
          out.push_back(r.eval(*d.lo));
          continue;
        }
        for (const Rat& s : samples) {
          if (comp_contains(d, s)) out.push_back(r.eval(s));
        }
      }
    }
    return out;
  }
};

}  // namespace

bool gz_equal(const GZElement& a, const GZElement& b) {
  Coordinatizer c = Coordinatizer::over({&a, &b});
  return c.coords(a) == c.coords(b);
}

namespace {

struct PieceVerdict {
  enum class Kind { Positive, Zero, NotPositive, Unknown };
  Kind kind = Kind::Zero;
  std::optional<PositivityWitness> witness;
  Rat resolution = 0;
};

PositivityWitness witness_at(const Rat& point, const QInterval& value) {
  PositivityWitness w;
  w.kind = PositivityWitness::Kind::NegativeAt;
  w.point = point;
  w.value = value;
  return w;
}

// Exact sign of sum_j c_j e^{j x}: rational at x = 0, otherwise nonzero by
// transcendence of e^x, so the enclosure eventually decides.
int exact_value_sign(const std::map<long, Rat>& coeffs, const Rat& x, QInterval* enclosure) {
  LaurentPoly f(coeffs, Supernatural::universal());
  if (f.is_zero()) {
    if (enclosure) *enclosure = QInterval::point(Rat(0));
    return 0;
  }
  if (x == 0) {
    Rat total(0);
    for (const auto& [j, c] : f.coeffs()) total += c;
    if (enclosure) *enclosure = QInterval::point(total);
    return sign(total);
  }
  Rat eps(1, 1024);
  for (int round = 0; round < 64; ++round) {
    QInterval v = f.eval_enclosure(x, eps);
    if (auto s = v.sign()) {
      if (enclosure) *enclosure = v;
      return *s;
    }
    eps /= 16;
  }
  fail(errc::unsupported, "sign of exponential sum did not resolve");
}

std::map<long, Rat> coeffs_at(const std::map<long, PiecewiseLinear>& terms, const Rat& x) {
  std::map<long, Rat> out;
  for (const auto& [j, r] : terms) {
    Rat v = r.eval(x);
    if (v != 0) out[j] = v;
  }
  return out;
}

// Certified bisection on [a, b] where some coefficient genuinely varies.
PieceVerdict bisect_mixed(const std::map<long, PiecewiseLinear>& terms, const Rat& a, const Rat& b,
                          long depth, long& budget) {
  QInterval I(a, b);
  Rat eps = std::min(Rat(I.width() / 16), Rat(1, 1024));
  QInterval bound = QInterval::point(Rat(0));
  for (const auto& [j, r] : terms) {
    bound = bound + r.range_on(I) * exp_image(Rat(j) * I, eps);
  }
  PieceVerdict v;
  if (bound.lo > 0) {
    v.kind = PieceVerdict::Kind::Positive;
    return v;
  }
  Rat mid = I.mid();
  if (bound.hi < 0) {
    // the true value at mid is below bound.hi; shrink until the enclosure
    // confirms it
    LaurentPoly f(coeffs_at(terms, mid), Supernatural::universal());
    Rat w(1, 1024);
    QInterval val = f.eval_enclosure(mid, w);
    while (val.hi >= 0) {
      w /= 16;
      val = f.eval_enclosure(mid, w);
    }
    v.kind = PieceVerdict::Kind::NotPositive;
    v.witness = witness_at(mid, val);
    return v;
  }
  QInterval at_mid;
  if (exact_value_sign(coeffs_at(terms, mid), mid, &at_mid) <= 0) {
    v.kind = PieceVerdict::Kind::NotPositive;
    v.witness = witness_at(mid, at_mid);
    return v;
  }
  if (depth <= 0 || --budget <= 0) {
    v.kind = PieceVerdict::Kind::Unknown;
    v.resolution = I.width();
    return v;
  }
  PieceVerdict left = bisect_mixed(terms, a, mid, depth - 1, budget);
  if (left.kind == PieceVerdict::Kind::NotPositive) return left;
  PieceVerdict right = bisect_mixed(terms, mid, b, depth - 1, budget);
  if (right.kind == PieceVerdict::Kind::NotPositive) return right;
  if (left.kind == PieceVerdict::Kind::Unknown || right.kind == PieceVerdict::Kind::Unknown) {
    v.kind = PieceVerdict::Kind::Unknown;
    v.resolution = std::min(left.kind == PieceVerdict::Kind::Unknown ? left.resolution : I.width(),
                            right.kind == PieceVerdict::Kind::Unknown ? right.resolution
                                                                      : I.width());
    return v;
  }
  v.kind = PieceVerdict::Kind::Positive;  // a mixed stretch is never identically zero
  return v;
}

PieceVerdict laurent_verdict(const std::map<long, Rat>& coeffs, const ClosedSetR::Component& dom) {
  LaurentPoly f(coeffs, Supernatural::universal());
  PositivityResult r = strictly_positive_on(f, comp_set(dom));
  PieceVerdict v;
  switch (r.verdict) {
    case Positivity::Positive:
      v.kind = PieceVerdict::Kind::Positive;
      break;
    case Positivity::IsZero:
      v.kind = PieceVerdict::Kind::Zero;
      break;
    case Positivity::NotPositive:
      v.kind = PieceVerdict::Kind::NotPositive;
      v.witness = r.witness;
      break;
  }
  return v;
}

// A rational point of the subdomain, for zero-region witnesses.
Rat point_inside(const ClosedSetR::Component& dom) {
  if (dom.lo && dom.hi) return (*dom.lo + *dom.hi) / 2;
  if (dom.lo) return *dom.lo;
  if (dom.hi) return *dom.hi;
  return Rat(0);
}

}  // namespace

std::string ElementPositivityResult::str() const {
  switch (kind) {
    case Kind::Positive:
      return "positive";
    case Kind::IsZero:
      return "zero";
    case Kind::NotPositive:
      return "not positive" + (witness ? " (" + witness->str() + ")" : std::string());
    case Kind::Unknown:
      return "unknown at resolution " + to_string(resolution);
  }
  return "";
}

ElementPositivityResult element_positive(const GZElement& e, const BundleSpec& B, long depth) {
  B.validate();
  e.f.validate_cover(B.F);
  std::vector<PieceVerdict> verdicts;
  std::vector<Rat> zero_points;  // representatives of vanishing subdomains
  for (const auto& piece : e.f.pieces) {
    std::map<long, PiecewiseLinear> terms = piece.terms;
    normalize_terms(terms);
    const auto& dom = piece.domain;
    if (dom.is_point()) {
      QInterval enc;
      int s = exact_value_sign(coeffs_at(terms, *dom.lo), *dom.lo, &enc);
      PieceVerdict v;
      if (s > 0) {
        v.kind = PieceVerdict::Kind::Positive;
      } else if (s == 0) {
        v.kind = PieceVerdict::Kind::Zero;
        zero_points.push_back(*dom.lo);
      } else {
        v.kind = PieceVerdict::Kind::NotPositive;
        v.witness = witness_at(*dom.lo, enc);
      }
      verdicts.push_back(std::move(v));
      continue;
    }
    // cut the component at interior breakpoints; between cuts every
    // coefficient is affine, and beyond the outermost ones constant
    std::vector<Rat> cuts;
    for (const auto& [j, r] : terms) {
      for (const auto& [x, val] : r.points()) {
        if ((!dom.lo || *dom.lo < x) && (!dom.hi || x < *dom.hi)) cuts.push_back(x);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<ClosedSetR::Component> subs;
    std::optional<Rat> prev = dom.lo;
    for (const Rat& c : cuts) {
      subs.push_back({prev, c});
      prev = c;
    }
    subs.push_back({prev, dom.hi});
    for (const auto& sub : subs) {
      bool constant = true;
      if (sub.lo && sub.hi) {
        for (const auto& [j, r] : terms) {
          if (r.eval(*sub.lo) != r.eval(*sub.hi)) {
            constant = false;
            break;
          }
        }
      }
      if (constant) {
        Rat at = point_inside(sub);
        PieceVerdict v = laurent_verdict(coeffs_at(terms, at), sub);
        if (v.kind == PieceVerdict::Kind::Zero) zero_points.push_back(at);
        verdicts.push_back(std::move(v));
      } else {
        long budget = 1 << 12;
        verdicts.push_back(bisect_mixed(terms, *sub.lo, *sub.hi, depth, budget));
      }
    }
  }
  ElementPositivityResult out;
  bool has_unknown = false, has_positive = false, all_zero = true;
  Rat best_resolution(0);
  for (const auto& v : verdicts) {
    if (v.kind != PieceVerdict::Kind::Zero) all_zero = false;
    if (v.kind == PieceVerdict::Kind::NotPositive) {
      out.kind = ElementPositivityResult::Kind::NotPositive;
      out.witness = v.witness;
      return out;
    }
    if (v.kind == PieceVerdict::Kind::Unknown) {
      has_unknown = true;
      if (best_resolution == 0 || v.resolution < best_resolution) best_resolution = v.resolution;
    }
    if (v.kind == PieceVerdict::Kind::Positive) has_positive = true;
  }
  if (!zero_points.empty() && (has_positive || has_unknown)) {
    // f vanishes somewhere but is not the zero function: not in the cone
    out.kind = ElementPositivityResult::Kind::NotPositive;
    out.witness = witness_at(zero_points.front(), QInterval::point(Rat(0)));
    return out;
  }
  if (has_unknown) {
    out.kind = ElementPositivityResult::Kind::Unknown;
    out.resolution = best_resolution;
    return out;
  }
  out.kind = all_zero ? ElementPositivityResult::Kind::IsZero
                      : ElementPositivityResult::Kind::Positive;
  return out;
}

ExpPolyValue::ExpPolyValue(std::map<long, Rat> coeffs, Rat beta, const Rat& eps)
    : coeffs_(std::move(coeffs)), beta_(std::move(beta)) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it = it->second == 0 ? coeffs_.erase(it) : std::next(it);
  }
  refine(eps);
}

void ExpPolyValue::refine(const Rat& eps) {
  if (sign(eps) <= 0) fail(errc::precondition, "enclosure width must be positive");
  enclosure_ = LaurentPoly(coeffs_, Supernatural::universal()).eval_enclosure(beta_, eps);
}

std::optional<Rat> ExpPolyValue::exact() const {
  if (coeffs_.empty()) return Rat(0);
  if (beta_ == 0) {
    Rat total(0);
    for (const auto& [j, c] : coeffs_) total += c;
    return total;
  }
  if (coeffs_.size() == 1 && coeffs_.begin()->first == 0) return coeffs_.begin()->second;
  return std::nullopt;
}

ExpPolyValue ExpPolyValue::shifted(long k) const {
  std::map<long, Rat> out;
  for (const auto& [j, c] : coeffs_) out[j + k] = c;
  Rat width = enclosure_.width();
  return ExpPolyValue(std::move(out), beta_, width > 0 ? width : Rat(1, 1 << 30));
}

bool ExpPolyValue::symbolically_equal(const ExpPolyValue& other) const {
  return beta_ == other.beta_ && coeffs_ == other.coeffs_;
}

std::string ExpPolyValue::str() const {
  if (auto v = exact()) return to_string(*v);
  std::string s;
  for (const auto& [j, c] : coeffs_) {
    if (!s.empty()) s += " + ";
    s += to_string(c) + "*e^(" + std::to_string(j) + "*" + to_string(beta_) + ")";
  }
  return s + " in " + enclosure_.str();
}

ExpPolyValue evaluate_state(const GZElement& e, const Rat& beta, const BundleSpec& B,
                            const Rat& eps) {
  B.validate();
  if (!B.F.contains(beta))
    fail(errc::beta_outside_bundle, "beta = " + to_string(beta) + " is outside the base");
  for (const auto& piece : e.f.pieces) {
    if (!comp_contains(piece.domain, beta)) continue;
    return ExpPolyValue(coeffs_at(piece.terms, beta), beta, eps);
  }
  fail(errc::inconsistent, "no piece covers beta = " + to_string(beta));
}

std::size_t KernelImageReport::solved_count() const {
  std::size_t n = 0;
  for (const auto& p : preimages)
    if (p.status == Preimage::Status::solved) ++n;
  return n;
}

std::size_t KernelImageReport::unresolved_count() const {
  std::size_t n = 0;
  for (const auto& p : preimages)
    if (p.status == Preimage::Status::unresolved) ++n;
  return n;
}

bool KernelImageReport::image_covers_kernel_members() const {
  for (const auto& p : preimages)
    if (p.status == Preimage::Status::unresolved) return false;
  return true;
}

KernelImageReport verify_kernel_image(const std::vector<GZElement>& family, const BundleSpec& B,
                                      long window) {
  B.validate();
  if (window < 0) fail(errc::precondition, "window must be nonnegative");
  KernelImageReport report;
  report.window = window;
  if (family.empty()) {
    report.subset_holds = true;
    return report;
  }
  // the preimage search spans the sigma-orbit of the family together with the
  // unit's orbit, so differences of unit shifts resolve without the caller
  // listing the unit explicitly
  GZElement unit = gz_unit(B);
  std::vector<GZElement> base = family;
  bool has_unit = false;
  for (const auto& g : base) {
    if (gz_equal(g, unit)) {
      has_unit = true;
      break;
    }
  }
  if (!has_unit) {
    base.insert(base.begin(), unit);
    report.unit_added = true;
  }
  // sigma-orbit of the search family, one step past the window for the
  // boundary differences
  std::vector<std::vector<GZElement>> orbit(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    orbit[i].push_back(base[i]);
    for (long t = 0; t <= window; ++t) orbit[i].push_back(apply_sigma(orbit[i].back()));
  }
  std::vector<const GZElement*> all;
  for (const auto& row : orbit)
    for (const auto& e : row) all.push_back(&e);
  Coordinatizer coord = Coordinatizer::over(all);

  // forward direction: the coefficient sum kills every difference e - sigma(e)
  bool ok = true;
  for (const auto& row : orbit) {
    ok = ok && sigma0(row[0] - row[1]) == 0;
    ++report.combinations_checked;
  }
  unsigned long long state = 0x9e3779b97f4a7c15ull;
  auto next_small = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<long>((state >> 33) % 7) - 3;  // in [-3, 3]
  };
  for (int trial = 0; trial < 8; ++trial) {
    GZElement e = gz_scale(Int(0), family[0]);
    for (const auto& row : orbit) e = e + gz_scale(Int(next_small()), row[0]);
    ok = ok && sigma0(e - apply_sigma(e)) == 0;
    ++report.combinations_checked;
  }
  report.subset_holds = ok;

  // reverse direction: express each coefficient-sum-zero member as a
  // difference e' - sigma(e') with e' in the truncated orbit span
  std::vector<std::vector<Rat>> columns;
  for (const auto& row : orbit) {
    for (long t = 0; t <= window; ++t) {
      std::vector<Rat> a = coord.coords(row[static_cast<std::size_t>(t)]);
      std::vector<Rat> b = coord.coords(row[static_cast<std::size_t>(t) + 1]);
      for (std::size_t j = 0; j < a.size(); ++j) a[j] -= b[j];
      columns.push_back(std::move(a));
    }
  }
  SubgroupPresentation span =
      SubgroupPresentation::z_span(columns.empty() ? 0 : columns[0].size(), columns);
  for (std::size_t i = 0; i < family.size(); ++i) {
    KernelImageReport::Preimage p;
    p.family_index = i;
    p.sigma0_value = sigma0(family[i]);
    if (p.sigma0_value != 0) {
      p.status = KernelImageReport::Preimage::Status::not_in_kernel;
      report.preimages.push_back(std::move(p));
      continue;
    }
    auto sol = solve_integer_combination(coord.coords(family[i]), span);
    if (!sol) {
      p.status = KernelImageReport::Preimage::Status::unresolved;
      report.preimages.push_back(std::move(p));
      continue;
    }
    // replay the combination through the element arithmetic
    GZElement acc = gz_scale(Int(0), family[0]);
    std::size_t col = 0;
    for (const auto& row : orbit) {
      for (long t = 0; t <= window; ++t, ++col) {
        if ((*sol)[col] != 0) acc = acc + gz_scale((*sol)[col], row[static_cast<std::size_t>(t)]);
      }
    }
    if (!gz_equal(acc - apply_sigma(acc), family[i]))
      fail(errc::inconsistent, "preimage replay disagrees with the solver");
    p.status = KernelImageReport::Preimage::Status::solved;
    p.combination = std::move(*sol);
    report.preimages.push_back(std::move(p));
  }
  return report;
}

K0CokernelResult k0_crossed_product(const std::vector<GZElement>& family, const BundleSpec& B,
                                    long window) {
  B.validate();
  if (window < 0) fail(errc::precondition, "window must be nonnegative");
  GZElement unit = gz_unit(B);
  std::vector<GZElement> base = family;
  bool has_unit = false;
  for (const auto& g : base) {
    if (gz_equal(g, unit)) {
      has_unit = true;
      break;
    }
  }
  if (!has_unit) base.insert(base.begin(), unit);
  std::vector<GZElement> pool;
  for (const auto& g : base) {
    pool.push_back(g);
    for (long t = 1; t <= window; ++t) pool.push_back(apply_sigma(pool.back()));
  }
  std::vector<GZElement> shifted;
  shifted.reserve(pool.size());
  for (const auto& p : pool) shifted.push_back(apply_sigma(p));
  std::vector<const GZElement*> all;
  for (const auto& p : pool) all.push_back(&p);
  for (const auto& p : shifted) all.push_back(&p);
  Coordinatizer coord = Coordinatizer::over(all);

  std::vector<std::vector<Rat>> gen_coords;
  gen_coords.reserve(pool.size());
  for (const auto& p : pool) gen_coords.push_back(coord.coords(p));
  SubgroupPresentation module =
      SubgroupPresentation::z_span(gen_coords[0].size(), gen_coords);
  std::vector<std::vector<Rat>> basis = lattice_basis(module);
  std::size_t r = basis.size();
  SubgroupPresentation basis_span = SubgroupPresentation::z_span(gen_coords[0].size(), basis);

  std::vector<std::vector<Int>> relations;
  for (std::size_t p = 0; p < pool.size(); ++p) {
    auto cp = solve_integer_combination(gen_coords[p], basis_span);
    if (!cp) fail(errc::inconsistent, "pool element escaped its own span");
    auto cs = solve_integer_combination(coord.coords(shifted[p]), basis_span);
    if (!cs) continue;  // the shift leaves the truncated module
    std::vector<Int> row(r);
    for (std::size_t j = 0; j < r; ++j) row[j] = (*cp)[j] - (*cs)[j];
    relations.push_back(std::move(row));
  }

  K0CokernelResult result;
  result.module_rank = r;
  result.relation_count = relations.size();

  std::size_t rank = 0;
  std::vector<Int> factors;
  IntegerMatrix v_inv = IntegerMatrix::identity(r);
  if (!relations.empty()) {
    IntegerMatrix a(relations.size(), r);
    for (std::size_t i = 0; i < relations.size(); ++i)
      for (std::size_t j = 0; j < r; ++j) a.at(i, j) = relations[i][j];
    SmithResult snf = smith_normal_form(a);
    rank = snf.rank;
    factors = snf.invariant_factors();
    v_inv = snf.v_inv;
  }
  result.free_rank = static_cast<long>(r - rank);
  for (const auto& d : factors)
    if (d > 1) result.torsion.push_back(d);

  auto cu = solve_integer_combination(coord.coords(unit), basis_span);
  if (!cu) fail(errc::inconsistent, "unit escaped the truncated module");
  // rows of v form the adapted basis; coordinates transform by v_inv
  std::vector<Int> adapted(r, Int(0));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < r; ++i) adapted[j] += (*cu)[i] * v_inv.at(i, j);
  if (result.free_rank == 1) {
    Int c = adapted[rank];
    result.class_of_u = c < 0 ? Int(-c) : c;
  }
  return result;
}

SimplicityProbe sigma_simplicity_probe(const GZElement& g, const BundleSpec& B, long n_max,
                                       long m_max, long depth) {
  ElementPositivityResult pos = element_positive(g, B, depth);
  if (pos.kind != ElementPositivityResult::Kind::Positive)
    fail(errc::precondition, "probe needs a strictly positive element, got " + pos.str());
  GZElement unit = gz_unit(B);
  GZElement orbit_sum = g;
  GZElement lo = g, hi = g;
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) {
      lo = apply_sigma(lo);
      hi = apply_sigma_inverse(hi);
      orbit_sum = orbit_sum + lo + hi;
    }
    for (long m = 1; m <= m_max; ++m) {
      GZElement candidate = gz_scale(Int(m), orbit_sum) - unit;
      if (element_positive(candidate, B, depth).kind == ElementPositivityResult::Kind::Positive)
        return SimplicityProbe{true, n, m};
    }
  }
  return SimplicityProbe{false, 0, 0};
}

}  // namespace riesz
