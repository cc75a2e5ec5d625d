#include "riesz/ordered_group.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "riesz/error.hpp"

using namespace riesz;

namespace {

using Vec = std::vector<Rat>;

Vec rv(const std::vector<std::string>& ss) { return rat_vector_from_strings(ss); }

Supernatural two_inf() { return Supernatural::prime_power(2, Supernatural::kInf); }
Supernatural three_inf() { return Supernatural::prime_power(3, Supernatural::kInf); }

OrderedGroupSpec integer_lattice(std::size_t k) {
  return {SubgroupPresentation::full_integer_lattice(k), ConeSpec::coordinatewise()};
}

// (Z, {0, n, n+1, ...})
OrderedGroupSpec integers_from_spec(long n) {
  return {SubgroupPresentation::full_integer_lattice(1), ConeSpec::integers_from(Int(n))};
}

// Rank-2 group generated by the two diagonal half-vectors, ordered by the
// ambient coordinates. Its localizations pin some interpolation instances to
// the single ambient point (1/2, 0), which only some coefficient rings reach.
OrderedGroupSpec diagonal_lattice(const Supernatural& m) {
  auto carrier =
      SubgroupPresentation::d_span(2, {rv({"1/2", "-1/2"}), rv({"1/2", "1/2"})}, m);
  return {std::move(carrier), ConeSpec::coordinatewise()};
}

OrderedGroupSpec wedge_lattice() {
  return {SubgroupPresentation::full_integer_lattice(2),
          ConeSpec::halfspaces({rv({"1", "1"}), rv({"1", "-1"})})};
}

Vec vadd(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec vsub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec vscale(long c, const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = Rat(c) * a[i];
  return out;
}

bool leq_all(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// Oracle: scan the integer box between the componentwise extremes. Shares no
// code with the bounded search it is checking.
bool box_interpolant_exists(const Vec& p0, const Vec& p1, const Vec& q0, const Vec& q1) {
  std::size_t k = p0.size();
  std::vector<long> lo(k), hi(k), cur;
  for (std::size_t i = 0; i < k; ++i) {
    Rat l = p0[i] > p1[i] ? p0[i] : p1[i];
    Rat h = q0[i] < q1[i] ? q0[i] : q1[i];
    if (l > h) return false;
    lo[i] = static_cast<long>(ceil_rat(l).get_si());
    hi[i] = static_cast<long>(floor_rat(h).get_si());
    if (lo[i] > hi[i]) return false;
  }
  return true;  // integer instances: the clamped box itself is the witness set
}

// Oracle: enumerate x0 over the integer box [0, a0] directly.
bool box_decomposition_exists(const Vec& x, const Vec& a0, const Vec& a1) {
  std::size_t k = x.size();
  std::vector<long> top(k), cur(k, 0);
  for (std::size_t i = 0; i < k; ++i) top[i] = static_cast<long>(floor_rat(a0[i]).get_si());
  while (true) {
    Vec x0(k);
    for (std::size_t i = 0; i < k; ++i) x0[i] = Rat(cur[i]);
    Vec x1 = vsub(x, x0);
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i)
      if (sgn(x1[i]) < 0 || x1[i] > a1[i]) ok = false;
    if (ok && leq_all(x0, x)) return true;
    std::size_t t = 0;
    while (t < k && ++cur[t] > top[t]) cur[t++] = 0;
    if (t == k) return false;
  }
}

}  // namespace

TEST_CASE("coordinatewise and halfspace cone membership") {
  OrderedGroupSpec z2 = integer_lattice(2);
  CHECK(cone_contains(z2, rv({"1", "0"})));
  CHECK(cone_contains(z2, rv({"0", "0"})));
  CHECK_FALSE(cone_contains(z2, rv({"-1", "2"})));
  CHECK_FALSE(cone_contains(z2, rv({"1/2", "1/2"})));  // outside the carrier

  OrderedGroupSpec wedge = wedge_lattice();
  CHECK(cone_contains(wedge, rv({"2", "1"})));
  CHECK(cone_contains(wedge, rv({"2", "-1"})));
  CHECK(cone_contains(wedge, rv({"0", "0"})));
  CHECK_FALSE(cone_contains(wedge, rv({"1", "2"})));
  CHECK_FALSE(cone_contains(wedge, rv({"-1", "0"})));
}

TEST_CASE("explicit integer cone membership") {
  OrderedGroupSpec s2 = integers_from_spec(2);
  CHECK(cone_contains(s2, rv({"0"})));
  CHECK_FALSE(cone_contains(s2, rv({"1"})));
  CHECK(cone_contains(s2, rv({"2"})));
  CHECK(cone_contains(s2, rv({"3"})));
  CHECK_FALSE(cone_contains(s2, rv({"-1"})));
  CHECK_FALSE(cone_contains(s2, rv({"-2"})));
  CHECK_FALSE(cone_contains(s2, rv({"1/2"})));  // outside Z

  // members below the saturation bound participate through their sums
  ConeSpec sparse = ConeSpec::integers_from(Int(5));
  sparse.members = {Int(3)};
  OrderedGroupSpec g{SubgroupPresentation::full_integer_lattice(1), sparse};

  // oracle: additive closure of {3} u {5, 6, ...} computed directly
  std::vector<char> closed(16, 0);
  closed[0] = 1;
  for (int v = 1; v < 16; ++v) {
    if (v >= 5) closed[v] = 1;
    if (v >= 3 && closed[v - 3]) closed[v] = 1;
  }
  for (long v = 0; v < 16; ++v)
    CHECK(cone_contains(g, {Rat(v)}) == static_cast<bool>(closed[v]));
  CHECK_FALSE(cone_contains(g, rv({"-3"})));
}

TEST_CASE("localized explicit cones") {
  // scaling by D_3 makes 2/3 positive but keeps 1/3 out
  OrderedGroupSpec g = tensor_localize(integers_from_spec(2), Supernatural::from_integer(3));
  CHECK(cone_contains(g, rv({"1"})));
  CHECK(cone_contains(g, rv({"2"})));
  CHECK(cone_contains(g, rv({"2/3"})));
  CHECK(cone_contains(g, rv({"5/3"})));
  CHECK_FALSE(cone_contains(g, rv({"1/3"})));
  CHECK_FALSE(cone_contains(g, rv({"1/9"})));
  CHECK_FALSE(cone_contains(g, rv({"-2/3"})));
}

TEST_CASE("bounded element enumeration") {
  auto z1 = bounded_elements(integer_lattice(1), 3);
  REQUIRE(z1.size() == 7);
  for (long v = -3; v <= 3; ++v) CHECK(z1[static_cast<std::size_t>(v + 3)] == Vec{Rat(v)});

  OrderedGroupSpec half{
      SubgroupPresentation::d_span(1, {rv({"1"})}, Supernatural::from_integer(2)),
      ConeSpec::coordinatewise()};
  auto vals = bounded_elements(half, 3);
  std::vector<std::string> expect = {"-3", "-2", "-3/2", "-1", "-1/2", "0",
                                     "1/2", "1",  "3/2",  "2",  "3"};
  REQUIRE(vals.size() == expect.size());
  for (std::size_t i = 0; i < vals.size(); ++i) CHECK(vals[i] == Vec{rat_from_string(expect[i])});

  // dependent generators produce no duplicates
  OrderedGroupSpec dep{SubgroupPresentation::z_span(2, {rv({"1", "0"}), rv({"2", "0"})}),
                       ConeSpec::coordinatewise()};
  auto span = bounded_elements(dep, 2);
  CHECK(std::adjacent_find(span.begin(), span.end()) == span.end());
  for (const Vec& v : span) CHECK(sgn(v[1]) == 0);

  OrderedGroupSpec wide = integer_lattice(3);
  CHECK_THROWS_AS(bounded_elements(wide, 200), error);
}

TEST_CASE("partial order flags") {
  CHECK(partially_ordered_within(integer_lattice(2), 4));
  CHECK(partially_ordered_within(integers_from_spec(2), 6));
  CHECK(partially_ordered_within(wedge_lattice(), 4));
  CHECK(partially_ordered_within(diagonal_lattice(Supernatural::universal()), 3));

  // a single halfspace leaves the orthogonal line unordered
  OrderedGroupSpec slab{SubgroupPresentation::full_integer_lattice(2),
                        ConeSpec::halfspaces({rv({"1", "0"})})};
  CHECK_FALSE(partially_ordered_within(slab, 2));
}

TEST_CASE("torsion-free carriers") {
  CHECK(is_torsion_free(integer_lattice(2)));
  CHECK(is_torsion_free(diagonal_lattice(Supernatural())));
  OrderedGroupSpec dep{SubgroupPresentation::z_span(2, {rv({"1", "0"}), rv({"2", "0"})}),
                       ConeSpec::coordinatewise()};
  CHECK(is_torsion_free(dep));  // the relation kernel is saturated

  // an abstract relation 2g = 0 is torsion, caught by the presentation check
  IntegerMatrix rel(1, 1);
  rel.at(0, 0) = 2;
  CHECK_FALSE(presentation_torsion_free(rel, 1));
}

TEST_CASE("unperforation verdicts") {
  SUBCASE("gapped integers fail with the smallest witness") {
    UnperforationResult r = is_unperforated(integers_from_spec(2), 4);
    REQUIRE(r.kind == UnperforationResult::Kind::FalseWithWitness);
    CHECK(r.witness == rv({"1"}));
    CHECK(r.multiple == 2);

    // the witness replays against plain cone membership
    OrderedGroupSpec s2 = integers_from_spec(2);
    CHECK(cone_contains(s2, vscale(r.multiple, r.witness)));
    CHECK_FALSE(cone_contains(s2, r.witness));
  }

  SUBCASE("linear cones are exactly unperforated") {
    CHECK(is_unperforated(integer_lattice(1), 4).kind == UnperforationResult::Kind::True);
    CHECK(is_unperforated(wedge_lattice(), 4).kind == UnperforationResult::Kind::True);
    CHECK(is_unperforated(diagonal_lattice(Supernatural()), 4).kind ==
          UnperforationResult::Kind::True);
  }

  SUBCASE("saturated explicit cones pass within the window") {
    OrderedGroupSpec g = tensor_localize(integers_from_spec(2), two_inf());
    CHECK(is_unperforated(g, 6).kind == UnperforationResult::Kind::TrueWithinWindow);
  }
}

TEST_CASE("localization") {
  SUBCASE("gapped integers against dyadics flatten to the dyadic cone") {
    OrderedGroupSpec g = tensor_localize(integers_from_spec(2), two_inf());
    for (long a = -8; a <= 8; ++a)
      for (long j = 0; j <= 4; ++j) {
        Rat v = Rat(a) / Rat(Int(1) << j);
        CHECK(cone_contains(g, {v}) == (sgn(v) >= 0));
      }
  }

  SUBCASE("localizing by one is the identity") {
    OrderedGroupSpec s2 = integers_from_spec(2);
    OrderedGroupSpec same = tensor_localize(s2, Supernatural());
    CHECK(subgroups_equal(same.carrier, s2.carrier));
    CHECK(same.cone == s2.cone);
  }

  SUBCASE("coordinatewise planes localize coordinatewise") {
    OrderedGroupSpec g = tensor_localize(integer_lattice(2), three_inf());
    CHECK(cone_contains(g, rv({"1/3", "2/9"})));
    CHECK_FALSE(cone_contains(g, rv({"1/2", "0"})));
    CHECK_FALSE(cone_contains(g, rv({"-1/3", "0"})));
  }

  SUBCASE("exact unperforation survives localization") {
    for (const OrderedGroupSpec& g :
         {integer_lattice(1), integer_lattice(2), wedge_lattice(), diagonal_lattice(Supernatural())}) {
      REQUIRE(is_unperforated(g, 4).kind == UnperforationResult::Kind::True);
      CHECK(is_unperforated(tensor_localize(g, two_inf()), 4).kind ==
            UnperforationResult::Kind::True);
      CHECK(is_unperforated(tensor_localize(g, three_inf()), 4).kind ==
            UnperforationResult::Kind::True);
    }
  }
}

TEST_CASE("intersection of coprime localizations") {
  SubgroupPresentation z2 = SubgroupPresentation::full_integer_lattice(2);
  CHECK(localization_intersection_contains(z2, two_inf(), three_inf(), rv({"1", "1"})));
  CHECK_FALSE(localization_intersection_contains(z2, two_inf(), three_inf(), rv({"1/2", "0"})));
  CHECK_FALSE(localization_intersection_contains(z2, two_inf(), three_inf(), rv({"1/6", "0"})));

  SubgroupPresentation diag = diagonal_lattice(Supernatural()).carrier;
  // (1/2, 0) doubles into the lattice, so only the dyadic side holds it
  SubgroupPresentation diag2 = diag, diag3 = diag;
  diag2.modulus = two_inf();
  diag3.modulus = three_inf();
  CHECK(subgroup_membership(rv({"1/2", "0"}), diag2));
  CHECK_FALSE(subgroup_membership(rv({"1/2", "0"}), diag3));
  CHECK_FALSE(localization_intersection_contains(diag, two_inf(), three_inf(), rv({"1/2", "0"})));
  CHECK(localization_intersection_contains(diag, two_inf(), three_inf(), rv({"1/2", "1/2"})));
  CHECK_FALSE(
      localization_intersection_contains(diag, two_inf(), three_inf(), rv({"1/5", "1/5"})));

  // membership in the intersection is membership in the group itself
  OrderedGroupSpec dspec = diagonal_lattice(Supernatural());
  for (const Vec& x : bounded_elements(dspec, 2))
    CHECK(localization_intersection_contains(diag, two_inf(), three_inf(), x) ==
          subgroup_membership(x, diag));

  Supernatural mixed = Supernatural::from_factors({{Int(2), Supernatural::kInf}, {Int(3), 1}});
  CHECK_THROWS_AS(localization_intersection_contains(z2, mixed, three_inf(), rv({"1", "1"})),
                  error);
  try {
    localization_intersection_contains(z2, mixed, three_inf(), rv({"1", "1"}));
  } catch (const error& e) {
    CHECK(e.code() == errc::support_overlap);
  }
}

TEST_CASE("interpolation on the diagonal lattice") {
  const Vec p0 = rv({"0", "0"});
  const Vec p1 = rv({"1/2", "-1/2"});
  const Vec q0 = rv({"1", "0"});
  const Vec q1 = rv({"1/2", "1/2"});

  // ambient oracle: the componentwise join and meet pinch to one point
  Vec join(2), meet(2);
  for (std::size_t i = 0; i < 2; ++i) {
    join[i] = p0[i] > p1[i] ? p0[i] : p1[i];
    meet[i] = q0[i] < q1[i] ? q0[i] : q1[i];
  }
  REQUIRE(join == meet);
  REQUIRE(join == rv({"1/2", "0"}));

  SUBCASE("the full rational ring reaches the pinch point") {
    OrderedGroupSpec g = diagonal_lattice(Supernatural::universal());
    auto a = riesz_interpolate_fg(g, p0, p1, q0, q1, 10);
    REQUIRE(a.has_value());
    CHECK(*a == join);
    for (const Vec& lo : {p0, p1}) CHECK(cone_contains(g, vsub(*a, lo)));
    for (const Vec& hi : {q0, q1}) CHECK(cone_contains(g, vsub(hi, *a)));
  }

  SUBCASE("the dyadic ring reaches it too") {
    OrderedGroupSpec g = diagonal_lattice(two_inf());
    auto a = riesz_interpolate_fg(g, p0, p1, q0, q1, 10);
    REQUIRE(a.has_value());
    CHECK(*a == join);
  }

  SUBCASE("the triadic ring cannot interpolate") {
    OrderedGroupSpec g = diagonal_lattice(three_inf());
    CHECK_FALSE(riesz_interpolate_fg(g, p0, p1, q0, q1, 10).has_value());
  }

  SUBCASE("pinched data returns the shared value") {
    OrderedGroupSpec g = diagonal_lattice(Supernatural());
    auto a = riesz_interpolate_fg(g, q1, q1, q1, q1, 4);
    REQUIRE(a.has_value());
    CHECK(*a == q1);
  }

  SUBCASE("order violations name the failing pair") {
    OrderedGroupSpec g = diagonal_lattice(Supernatural());
    try {
      riesz_interpolate_fg(g, q1, p1, p0, q0, 4);  // q1 > p0 swaps the first pair
      FAIL("expected a precondition error");
    } catch (const error& e) {
      CHECK(e.code() == errc::precondition);
      CHECK(std::string(e.what()).find("p0") != std::string::npos);
      CHECK(std::string(e.what()).find("q0") != std::string::npos);
    }
  }

  SUBCASE("data outside the group is rejected") {
    OrderedGroupSpec g = diagonal_lattice(Supernatural());
    CHECK_THROWS_AS(riesz_interpolate_fg(g, rv({"1/3", "0"}), p1, q0, q1, 4), error);
  }
}

TEST_CASE("interpolation search on a halfspace cone") {
  OrderedGroupSpec g = wedge_lattice();
  auto a = riesz_interpolate_fg(g, rv({"0", "0"}), rv({"1", "0"}), rv({"3", "1"}),
                                rv({"3", "-1"}), 4);
  REQUIRE(a.has_value());
  CHECK(*a == rv({"1", "0"}));  // least candidate in enumeration order
}

TEST_CASE("interpolation and decomposition match the box oracle") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> coord(-3, 3), pad(0, 2);
  for (std::size_t k : {2u, 3u}) {
    OrderedGroupSpec g = integer_lattice(k);
    for (int trial = 0; trial < 25; ++trial) {
      Vec p0(k), p1(k), q0(k), q1(k);
      for (std::size_t i = 0; i < k; ++i) {
        p0[i] = Rat(coord(rng));
        p1[i] = Rat(coord(rng));
        Rat top = p0[i] > p1[i] ? p0[i] : p1[i];
        q0[i] = top + Rat(pad(rng));
        q1[i] = top + Rat(pad(rng));
      }
      bool expect = box_interpolant_exists(p0, p1, q0, q1);
      auto a = riesz_interpolate_fg(g, p0, p1, q0, q1, 6);
      REQUIRE(a.has_value() == expect);
      if (a) {
        for (const Vec& lo : {p0, p1}) CHECK(leq_all(lo, *a));
        for (const Vec& hi : {q0, q1}) CHECK(leq_all(*a, hi));
        CHECK(subgroup_membership(*a, g.carrier));
      }

      // the associated decomposition instance succeeds in step
      Vec x = vsub(q1, p0), a0 = vsub(q0, p0), a1 = vsub(q1, p1);
      bool expect_split = box_decomposition_exists(x, a0, a1);
      auto split = riesz_decompose(g, x, a0, a1, 6);
      CHECK(expect_split == split.has_value());
      CHECK(split.has_value() == a.has_value());
      if (split) {
        CHECK(vadd(split->first, split->second) == x);
        CHECK(cone_contains(g, split->first));
        CHECK(cone_contains(g, split->second));
        CHECK(leq_all(split->first, a0));
        CHECK(leq_all(split->second, a1));
      }
    }
  }
}

TEST_CASE("decomposition") {
  SUBCASE("orthogonal split is forced") {
    OrderedGroupSpec g = integer_lattice(2);
    auto split = riesz_decompose(g, rv({"1", "1"}), rv({"1", "0"}), rv({"0", "1"}), 4);
    REQUIRE(split.has_value());
    CHECK(split->first == rv({"1", "0"}));
    CHECK(split->second == rv({"0", "1"}));
  }

  SUBCASE("slack absorbed entirely by one side stays valid") {
    OrderedGroupSpec g = integer_lattice(2);
    Vec x = rv({"2", "1"}), a = rv({"1", "1"});
    auto split = riesz_decompose(g, x, x, a, 4);
    REQUIRE(split.has_value());
    CHECK(vadd(split->first, split->second) == x);
    CHECK(leq_all(split->first, x));
    CHECK(leq_all(split->second, a));
    // the pair (x, 0) itself satisfies every requirement
    Vec zero = rv({"0", "0"});
    CHECK(cone_contains(g, vsub(x, x)));
    CHECK(cone_contains(g, vsub(a, zero)));
  }

  SUBCASE("the triadic diagonal lattice cannot decompose the pinched instance") {
    Vec x = rv({"1/2", "1/2"}), a0 = rv({"1", "0"}), a1 = rv({"0", "1"});
    CHECK_FALSE(riesz_decompose(diagonal_lattice(three_inf()), x, a0, a1, 10).has_value());
    auto split = riesz_decompose(diagonal_lattice(Supernatural::universal()), x, a0, a1, 10);
    REQUIRE(split.has_value());
    CHECK(split->first == rv({"1/2", "0"}));
    CHECK(split->second == rv({"0", "1/2"}));
  }

  SUBCASE("preconditions are verified") {
    OrderedGroupSpec g = integer_lattice(2);
    CHECK_THROWS_AS(riesz_decompose(g, rv({"3", "0"}), rv({"1", "0"}), rv({"1", "0"}), 4),
                    error);
    CHECK_THROWS_AS(riesz_decompose(g, rv({"-1", "0"}), rv({"1", "0"}), rv({"1", "0"}), 4),
                    error);
  }
}

TEST_CASE("matrix dimension range levels") {
  OrderedGroupSpec z1 = integer_lattice(1);
  auto lvl = matrix_dimension_range_level(z1, rv({"1"}), 3, 5);
  REQUIRE(lvl.size() == 4);
  for (long v = 0; v <= 3; ++v) CHECK(lvl[static_cast<std::size_t>(v)] == Vec{Rat(v)});

  OrderedGroupSpec z2 = integer_lattice(2);
  auto square = matrix_dimension_range_level(z2, rv({"1", "1"}), 1, 3);
  std::vector<Vec> expect = {rv({"0", "0"}), rv({"0", "1"}), rv({"1", "0"}), rv({"1", "1"})};
  CHECK(square == expect);

  SUBCASE("diagonal lattice level matches its coefficient enumeration") {
    OrderedGroupSpec g = diagonal_lattice(Supernatural());
    const Vec u = rv({"1/2", "1/2"});

    // oracle: integer coefficients on the two generators, scanned directly
    std::vector<Vec> oracle;
    for (long al = -6; al <= 6; ++al)
      for (long be = -6; be <= 6; ++be) {
        Vec v = {Rat(al + be) / 2, Rat(be - al) / 2};
        if (sgn(v[0]) >= 0 && sgn(v[1]) >= 0 && v[0] <= 1 && v[1] <= 1) oracle.push_back(v);
      }
    std::sort(oracle.begin(), oracle.end(), [](const Vec& a, const Vec& b) {
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
      return false;
    });
    oracle.erase(std::unique(oracle.begin(), oracle.end()), oracle.end());

    auto lvl2 = matrix_dimension_range_level(g, u, 2, 6);
    CHECK(lvl2 == oracle);
    std::vector<Vec> frozen = {rv({"0", "0"}), rv({"0", "1"}), rv({"1/2", "1/2"}),
                               rv({"1", "0"}), rv({"1", "1"})};
    CHECK(lvl2 == frozen);
  }

  SUBCASE("levels grow with the multiple") {
    for (const OrderedGroupSpec& g : {integer_lattice(2), wedge_lattice()}) {
      Vec u = rv({"1", "0"});
      if (!cone_contains(g, u)) continue;
      for (long n = 1; n <= 2; ++n) {
        auto small = matrix_dimension_range_level(g, u, n, 4);
        auto big = matrix_dimension_range_level(g, u, n + 1, 4);
        for (const Vec& v : small) CHECK(std::find(big.begin(), big.end(), v) != big.end());
      }
    }
  }

  SUBCASE("the base point must be positive") {
    CHECK_THROWS_AS(matrix_dimension_range_level(z2, rv({"-1", "0"}), 1, 3), error);
  }
}

TEST_CASE("dimension drop intersections") {
  SUBCASE("integers") {
    auto [spec, report] = dimension_drop_k0(integer_lattice(1));
    CHECK(subgroups_equal(spec.carrier, SubgroupPresentation::full_integer_lattice(1)));
    CHECK(report.order_isomorphism());
  }

  SUBCASE("planes") {
    auto [spec, report] = dimension_drop_k0(integer_lattice(2));
    CHECK(subgroups_equal(spec.carrier, SubgroupPresentation::full_integer_lattice(2)));
    CHECK(report.order_isomorphism());
  }

  SUBCASE("diagonal lattice round trip") {
    OrderedGroupSpec g = diagonal_lattice(Supernatural());
    auto [spec, report] = dimension_drop_k0(g);
    CHECK(report.order_isomorphism());
    CHECK(subgroups_equal(spec.carrier, g.carrier));
    for (const auto& gen : g.carrier.generators) {
      CHECK(subgroup_membership(gen, spec.carrier));
      CHECK(cone_contains(spec, gen) == cone_contains(g, gen));
    }
  }

  SUBCASE("a localized carrier keeps its modulus") {
    OrderedGroupSpec g = tensor_localize(integers_from_spec(2), two_inf());
    auto [spec, report] = dimension_drop_k0(g);
    CHECK(subgroups_equal(spec.carrier, g.carrier));
    CHECK(report.order_isomorphism());
  }

  SUBCASE("perforation is a precondition failure") {
    try {
      dimension_drop_k0(integers_from_spec(2));
      FAIL("expected a precondition error");
    } catch (const error& e) {
      CHECK(e.code() == errc::precondition);
      CHECK(std::string(e.what()).find("witness") != std::string::npos);
    }
  }
}

TEST_CASE("order ideal closures") {
  OrderedGroupSpec z2 = integer_lattice(2);

  SUBCASE("an axis seed spans its axis") {
    SubgroupPresentation ideal = order_ideal_closure(z2, {rv({"1", "0"})}, 4);
    CHECK(subgroups_equal(ideal, SubgroupPresentation::z_span(2, {rv({"1", "0"})})));
  }

  SUBCASE("an interior seed absorbs everything") {
    SubgroupPresentation ideal = order_ideal_closure(z2, {rv({"1", "1"})}, 4);
    CHECK(subgroups_equal(ideal, SubgroupPresentation::full_integer_lattice(2)));
  }

  SUBCASE("no seeds, no ideal") {
    SubgroupPresentation ideal = order_ideal_closure(z2, {}, 4);
    CHECK(ideal.generators.empty());
    CHECK(subgroups_equal(ideal, SubgroupPresentation::z_span(2, {})));
  }

  SUBCASE("a mixed-sign seed forces the whole diagonal lattice") {
    OrderedGroupSpec g = diagonal_lattice(Supernatural());
    SubgroupPresentation ideal = order_ideal_closure(g, {rv({"1/2", "-1/2"})}, 4);
    CHECK(subgroups_equal(ideal, g.carrier));
  }

  SUBCASE("seeds must lie in the group") {
    CHECK_THROWS_AS(order_ideal_closure(z2, {rv({"1/2", "0"})}, 4), error);
  }
}

TEST_CASE("cone axioms across the example suite") {
  std::vector<OrderedGroupSpec> suite = {integer_lattice(1),
                                         integer_lattice(2),
                                         wedge_lattice(),
                                         integers_from_spec(2),
                                         diagonal_lattice(Supernatural()),
                                         diagonal_lattice(Supernatural::universal()),
                                         tensor_localize(integers_from_spec(2), two_inf())};
  for (const OrderedGroupSpec& g : suite) {
    Vec zero(g.carrier.ambient_rank, Rat(0));
    CHECK(cone_contains(g, zero));
    CHECK(partially_ordered_within(g, 3));

    std::vector<Vec> positives;
    for (const Vec& v : bounded_elements(g, 3)) {
      if (positives.size() >= 8) break;
      if (cone_contains(g, v)) positives.push_back(v);
    }
    for (const Vec& a : positives)
      for (const Vec& b : positives) CHECK(cone_contains(g, vadd(a, b)));
  }
}

TEST_CASE("spec validation") {
  OrderedGroupSpec bad{SubgroupPresentation::full_integer_lattice(2),
                       ConeSpec::halfspaces({rv({"1"})})};
  CHECK_THROWS_AS(bad.validate(), error);

  OrderedGroupSpec wide{SubgroupPresentation::full_integer_lattice(2),
                        ConeSpec::integers_from(Int(2))};
  CHECK_THROWS_AS(wide.validate(), error);

  OrderedGroupSpec flat{SubgroupPresentation::full_integer_lattice(1),
                        ConeSpec::integers_from(Int(0))};
  CHECK_THROWS_AS(flat.validate(), error);
}
