#include "riesz/ordered_group.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <string>

#include "riesz/error.hpp"

namespace riesz {

namespace {

using Vec = std::vector<Rat>;

Vec vec_add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec vec_scale(const Rat& c, const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

bool vec_is_zero(const Vec& a) {
  for (const Rat& c : a)
    if (sgn(c) != 0) return false;
  return true;
}

bool vec_less(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

std::string vec_str(const Vec& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out + ")";
}

// additive closure of the members strictly below the saturation bound
std::vector<char> member_table(const ConeSpec& cone) {
  long sat = cone.saturation.get_si();
  std::vector<char> reach(static_cast<std::size_t>(sat), 0);
  reach[0] = 1;
  for (const Int& m : cone.members) {
    if (m >= cone.saturation) continue;  // subsumed by the saturation tail
    long ml = m.get_si();
    for (long i = ml; i < sat; ++i)
      if (reach[static_cast<std::size_t>(i - ml)]) reach[static_cast<std::size_t>(i)] = 1;
  }
  return reach;
}

// scale with b's prime content removed; callers guarantee divides(b, scale)
Supernatural remove_factor(const Supernatural& s, const Int& b) {
  if (s.is_universal()) return s;
  std::map<Int, std::int64_t> out;
  for (const auto& [p, e] : s.factors()) {
    Int r = b;
    std::int64_t v = 0;
    while (r % p == 0) {
      r /= p;
      ++v;
    }
    if (e == Supernatural::kInf)
      out.emplace(p, Supernatural::kInf);
    else if (e > v)
      out.emplace(p, e - v);
  }
  return Supernatural::from_factors(out);
}

// r = a/b > 0 is a nonnegative D_scale-combination of the explicit set iff
// some integer multiple a*t with b*t dividing the scale lands in its additive
// closure (clear denominators across the combination).
bool explicit_region_contains(const ConeSpec& cone, const Rat& r) {
  int s = sgn(r);
  if (s == 0) return true;
  if (s < 0) return false;
  if (!dn_contains(r, cone.scale)) return false;
  const Int a = num(r);
  const Int b = den(r);
  std::vector<char> reach = member_table(cone);
  Int tmax = (cone.saturation - 1) / a;
  for (Int t(1); t <= tmax; ++t) {
    Int at = a * t;
    if (reach[static_cast<std::size_t>(at.get_si())] && divides(b * t, cone.scale)) return true;
  }
  // multiples at or above the saturation bound need t >= sat/a only
  Int tmin = ceil_rat(Rat(cone.saturation) / Rat(a));
  return dense_divisor(remove_factor(cone.scale, b), tmin).has_value();
}

bool region_contains(const ConeSpec& cone, const Vec& v) {
  switch (cone.kind) {
    case ConeSpec::Kind::Coordinatewise:
      for (const Rat& c : v)
        if (sgn(c) < 0) return false;
      return true;
    case ConeSpec::Kind::HalfspaceList:
      for (const auto& f : cone.functionals) {
        Rat s(0);
        for (std::size_t i = 0; i < v.size(); ++i) s += f[i] * v[i];
        if (sgn(s) < 0) return false;
      }
      return true;
    case ConeSpec::Kind::ExplicitSubset:
      return explicit_region_contains(cone, v[0]);
  }
  return false;
}

// coefficients p/q with |p| <= window, q <= window allowed by the modulus
std::vector<Rat> coefficient_values(const Supernatural& modulus, long window) {
  std::vector<Rat> vals;
  for (long a = -window; a <= window; ++a) vals.emplace_back(a);
  for (long b = 2; b <= window; ++b)
    for (long a = -window; a <= window; ++a) {
      if (a == 0 || gcd(Int(std::labs(a)), Int(b)) != 1) continue;
      Rat r = Rat(Int(a)) / Rat(Int(b));
      if (dn_contains(r, modulus)) vals.push_back(std::move(r));
    }
  return vals;
}

}  // namespace

ConeSpec ConeSpec::coordinatewise() { return ConeSpec{}; }

ConeSpec ConeSpec::halfspaces(std::vector<std::vector<Rat>> functionals) {
  ConeSpec c;
  c.kind = Kind::HalfspaceList;
  c.functionals = std::move(functionals);
  return c;
}

ConeSpec ConeSpec::integers_from(const Int& n) {
  ConeSpec c;
  c.kind = Kind::ExplicitSubset;
  c.saturation = n;
  return c;
}

void OrderedGroupSpec::validate() const {
  carrier.validate();
  switch (cone.kind) {
    case ConeSpec::Kind::Coordinatewise:
      break;
    case ConeSpec::Kind::HalfspaceList:
      for (const auto& f : cone.functionals)
        if (f.size() != carrier.ambient_rank)
          fail(errc::dimension_mismatch, "functional length does not match the ambient rank");
      break;
    case ConeSpec::Kind::ExplicitSubset:
      if (carrier.ambient_rank != 1)
        fail(errc::dimension_mismatch, "explicit cones are supported on rank-1 groups only");
      if (sgn(cone.saturation) <= 0 || !cone.saturation.fits_slong_p())
        fail(errc::precondition, "saturation bound must be a small positive integer");
      for (const Int& m : cone.members)
        if (sgn(m) <= 0) fail(errc::precondition, "cone members must be positive integers");
      break;
  }
}

bool cone_contains(const OrderedGroupSpec& g, const std::vector<Rat>& v) {
  g.validate();
  return subgroup_membership(v, g.carrier) && region_contains(g.cone, v);
}

std::vector<std::vector<Rat>> bounded_elements(const OrderedGroupSpec& g, long window) {
  g.validate();
  if (window < 1) fail(errc::precondition, "window must be positive");
  const auto& gens = g.carrier.generators;
  std::vector<Rat> vals = coefficient_values(g.carrier.modulus, window);
  double combos = 1.0;
  for (std::size_t t = 0; t < gens.size(); ++t) combos *= static_cast<double>(vals.size());
  if (combos > 4.0e6) fail(errc::unsupported, "window too large for this generator count");

  std::vector<Vec> out;
  const Vec zero(g.carrier.ambient_rank, Rat(0));
  if (gens.empty()) {
    out.push_back(zero);
  } else {
    std::vector<std::size_t> idx(gens.size(), 0);
    while (true) {
      Vec v = zero;
      for (std::size_t t = 0; t < gens.size(); ++t)
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += vals[idx[t]] * gens[t][i];
      out.push_back(std::move(v));
      std::size_t t = 0;
      while (t < gens.size() && ++idx[t] == vals.size()) {
        idx[t] = 0;
        ++t;
      }
      if (t == gens.size()) break;
    }
  }
  std::sort(out.begin(), out.end(), vec_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool partially_ordered_within(const OrderedGroupSpec& g, long window) {
  for (const Vec& v : bounded_elements(g, window)) {
    if (vec_is_zero(v)) continue;
    if (region_contains(g.cone, v) && region_contains(g.cone, vec_scale(Rat(-1), v))) return false;
  }
  return true;
}

bool is_torsion_free(const OrderedGroupSpec& g) {
  g.validate();
  const auto& gens = g.carrier.generators;
  if (gens.empty()) return true;
  Int common(1);
  for (const Vec& row : gens)
    for (const Rat& e : row) common = lcm(common, den(e));
  IntegerMatrix m(gens.size(), g.carrier.ambient_rank);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < g.carrier.ambient_rank; ++j)
      m.at(i, j) = num(gens[i][j] * Rat(common));
  std::vector<std::vector<Int>> ker = integer_kernel(m);
  IntegerMatrix relations(ker.size(), gens.size());
  for (std::size_t i = 0; i < ker.size(); ++i)
    for (std::size_t j = 0; j < gens.size(); ++j) relations.at(i, j) = ker[i][j];
  return presentation_torsion_free(relations, gens.size());
}

UnperforationResult is_unperforated(const OrderedGroupSpec& g, long window) {
  g.validate();
  if (window < 1) fail(errc::precondition, "window must be positive");
  if (g.cone.kind != ConeSpec::Kind::ExplicitSubset) {
    // the region is cut by linear functionals, so n*g >= 0 forces g >= 0
    return {UnperforationResult::Kind::True, {}, 0};
  }
  for (const Vec& v : bounded_elements(g, window)) {
    if (cone_contains(g, v)) continue;
    for (long n = 2; n <= window; ++n)
      if (cone_contains(g, vec_scale(Rat(n), v)))
        return {UnperforationResult::Kind::FalseWithWitness, v, n};
  }
  return {UnperforationResult::Kind::TrueWithinWindow, {}, 0};
}

OrderedGroupSpec tensor_localize(const OrderedGroupSpec& g, const Supernatural& m) {
  g.validate();
  OrderedGroupSpec out = g;
  out.carrier.modulus = g.carrier.modulus * m;
  // linear regions are stable under localization: a positive element of the
  // larger carrier is 1/D times a positive element of the original
  if (out.cone.kind == ConeSpec::Kind::ExplicitSubset) out.cone.scale = g.cone.scale * m;
  return out;
}

bool localization_intersection_contains(const SubgroupPresentation& g, const Supernatural& p,
                                        const Supernatural& q, const std::vector<Rat>& x) {
  g.validate();
  if (!relatively_prime(p, q))
    fail(errc::support_overlap, "localization moduli must be relatively prime");
  SubgroupPresentation gp = g;
  gp.modulus = g.modulus * p;
  SubgroupPresentation gq = g;
  gq.modulus = g.modulus * q;
  return subgroup_membership(x, gp) && subgroup_membership(x, gq);
}

std::optional<std::vector<Rat>> riesz_interpolate_fg(const OrderedGroupSpec& g,
                                                     const std::vector<Rat>& p0,
                                                     const std::vector<Rat>& p1,
                                                     const std::vector<Rat>& q0,
                                                     const std::vector<Rat>& q1, long window) {
  g.validate();
  if (window < 1) fail(errc::precondition, "window must be positive");
  const std::array<const Vec*, 2> ps{&p0, &p1};
  const std::array<const Vec*, 2> qs{&q0, &q1};
  for (const Vec* v : {&p0, &p1, &q0, &q1})
    if (!subgroup_membership(*v, g.carrier))
      fail(errc::precondition, "interpolation data must lie in the group");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!region_contains(g.cone, vec_sub(*qs[j], *ps[i])))
        fail(errc::precondition,
             "p" + std::to_string(i) + " <= q" + std::to_string(j) + " fails");
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (*ps[i] == *qs[j]) return *ps[i];  // pinched: the shared value interpolates
  if (g.cone.kind == ConeSpec::Kind::Coordinatewise) {
    Vec join = p0;
    for (std::size_t i = 0; i < join.size(); ++i)
      if (p1[i] > join[i]) join[i] = p1[i];
    if (subgroup_membership(join, g.carrier)) return join;
  }
  for (const Vec& a : bounded_elements(g, window))
    if (region_contains(g.cone, vec_sub(a, p0)) && region_contains(g.cone, vec_sub(a, p1)) &&
        region_contains(g.cone, vec_sub(q0, a)) && region_contains(g.cone, vec_sub(q1, a)))
      return a;
  return std::nullopt;
}

std::optional<std::pair<std::vector<Rat>, std::vector<Rat>>> riesz_decompose(
    const OrderedGroupSpec& g, const std::vector<Rat>& x, const std::vector<Rat>& a0,
    const std::vector<Rat>& a1, long window) {
  g.validate();
  if (!cone_contains(g, x)) fail(errc::precondition, "x must lie in the cone");
  if (!cone_contains(g, a0)) fail(errc::precondition, "a0 must lie in the cone");
  if (!cone_contains(g, a1)) fail(errc::precondition, "a1 must lie in the cone");
  if (!region_contains(g.cone, vec_sub(vec_add(a0, a1), x)))
    fail(errc::precondition, "x exceeds a0 + a1");
  const Vec zero(x.size(), Rat(0));
  auto mid = riesz_interpolate_fg(g, vec_sub(x, a1), zero, a0, x, window);
  if (!mid) return std::nullopt;
  Vec rest = vec_sub(x, *mid);
  return std::make_pair(std::move(*mid), std::move(rest));
}

std::vector<std::vector<Rat>> matrix_dimension_range_level(const OrderedGroupSpec& g,
                                                           const std::vector<Rat>& u, long n,
                                                           long window) {
  g.validate();
  if (n < 1) fail(errc::precondition, "level must be positive");
  if (!cone_contains(g, u)) fail(errc::precondition, "u must lie in the cone");
  const Vec top = vec_scale(Rat(n), u);
  std::vector<Vec> out;
  for (const Vec& v : bounded_elements(g, window))
    if (region_contains(g.cone, v) && region_contains(g.cone, vec_sub(top, v)))
      out.push_back(v);
  return out;  // bounded_elements is already sorted
}

std::pair<OrderedGroupSpec, DimensionDropReport> dimension_drop_k0(const OrderedGroupSpec& g) {
  g.validate();
  constexpr long kWindow = 10;
  if (!is_torsion_free(g)) fail(errc::precondition, "carrier presentation has torsion");
  UnperforationResult u = is_unperforated(g, kWindow);
  if (u.kind == UnperforationResult::Kind::FalseWithWitness)
    fail(errc::precondition, "perforation witness: n = " + std::to_string(u.multiple) +
                                 ", g = " + vec_str(u.witness));

  const OrderedGroupSpec g2 = tensor_localize(g, Supernatural::prime_power(2, Supernatural::kInf));
  const OrderedGroupSpec g3 = tensor_localize(g, Supernatural::prime_power(3, Supernatural::kInf));
  OrderedGroupSpec result = g;
  if (g.carrier.modulus.is_one()) {
    result.carrier = subgroup_intersection(g2.carrier, g3.carrier);
  }
  // otherwise the moduli share the original one and any common multiplier
  // divides it, so the intersection is the original carrier already

  DimensionDropReport report;
  report.generators_embed = true;
  for (const auto& gen : g.carrier.generators)
    if (!subgroup_membership(gen, result.carrier)) report.generators_embed = false;
  report.carriers_agree = subgroups_equal(result.carrier, g.carrier);
  report.cone_agrees = true;
  std::vector<Vec> sample = g.carrier.generators;
  for (Vec& v : bounded_elements(g, 4)) sample.push_back(std::move(v));
  for (const Vec& v : sample) {
    bool original = cone_contains(g, v);
    bool intersected = subgroup_membership(v, result.carrier) && region_contains(g2.cone, v) &&
                       region_contains(g3.cone, v);
    if (original != intersected) report.cone_agrees = false;
  }
  report.elements_checked = sample.size();
  return {std::move(result), report};
}

SubgroupPresentation order_ideal_closure(const OrderedGroupSpec& g,
                                         const std::vector<std::vector<Rat>>& seeds, long window) {
  g.validate();
  for (const Vec& s : seeds)
    if (!subgroup_membership(s, g.carrier)) fail(errc::precondition, "seed lies outside the group");

  const std::vector<Vec> candidates = bounded_elements(g, window);
  std::vector<std::size_t> pos_idx;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (region_contains(g.cone, candidates[k])) pos_idx.push_back(k);

  std::vector<Vec> gens = seeds;
  // every growth round strictly enlarges the span, and only windowed elements
  // are ever added
  for (std::size_t round = 0; round <= candidates.size() + 2; ++round) {
    SubgroupPresentation ideal{g.carrier.ambient_rank, gens, g.carrier.modulus};
    std::vector<char> inside(candidates.size());
    for (std::size_t k = 0; k < candidates.size(); ++k)
      inside[k] = subgroup_membership(candidates[k], ideal);

    bool grew = false;
    // hereditary: positives capped by an ideal positive come inside
    for (std::size_t k : pos_idx) {
      if (inside[k]) continue;
      for (std::size_t h : pos_idx) {
        if (!inside[h]) continue;
        if (region_contains(g.cone, vec_sub(candidates[h], candidates[k]))) {
          gens.push_back(candidates[k]);
          grew = true;
          break;
        }
      }
    }
    if (grew) continue;

    // directedness: pairs drawn from the generators and their negatives need
    // an upper bound inside; pull the least windowed one in when none exists
    std::vector<Vec> poles;
    for (const Vec& s : gens) {
      poles.push_back(s);
      poles.push_back(vec_scale(Rat(-1), s));
    }
    for (std::size_t i = 0; i < poles.size() && !grew; ++i)
      for (std::size_t j = i; j < poles.size() && !grew; ++j) {
        bool bounded = false;
        for (std::size_t k = 0; k < candidates.size() && !bounded; ++k)
          if (inside[k] && region_contains(g.cone, vec_sub(candidates[k], poles[i])) &&
              region_contains(g.cone, vec_sub(candidates[k], poles[j])))
            bounded = true;
        if (bounded) continue;
        for (std::size_t k = 0; k < candidates.size() && !grew; ++k)
          if (region_contains(g.cone, vec_sub(candidates[k], poles[i])) &&
              region_contains(g.cone, vec_sub(candidates[k], poles[j]))) {
            gens.push_back(candidates[k]);
            grew = true;
          }
      }
    if (!grew) break;
  }

  SubgroupPresentation collected{g.carrier.ambient_rank, gens, g.carrier.modulus};
  return SubgroupPresentation{g.carrier.ambient_rank, lattice_basis(collected),
                              g.carrier.modulus};
}

}  // namespace riesz
