#include <cmath>
#include <random>

#include "doctest.h"
#include "riesz/closed_set.hpp"
#include "riesz/error.hpp"
#include "riesz/interval.hpp"
#include "riesz/polynomial.hpp"

using namespace riesz;

namespace {
Rat q(const char* s) { return rat_from_string(s); }
}  // namespace

TEST_CASE("interval arithmetic is outward exact") {
  QInterval a(q("-1/2"), q("3"));
  QInterval b(q("2"), q("5"));
  CHECK((a + b) == QInterval(q("3/2"), q("8")));
  CHECK((a - b) == QInterval(q("-11/2"), q("1")));
  CHECK((a * b) == QInterval(q("-5/2"), q("15")));
  CHECK(reciprocal(b) == QInterval(q("1/5"), q("1/2")));
  CHECK(pow(b, 2) == QInterval(q("4"), q("25")));
  CHECK(pow(b, -1) == reciprocal(b));
  CHECK_THROWS_AS(reciprocal(a), error);
  CHECK_THROWS_AS(QInterval(q("1"), q("0")), error);

  CHECK(QInterval(q("1"), q("2")).sign() == 1);
  CHECK(QInterval(q("-2"), q("-1")).sign() == -1);
  CHECK(QInterval(q("0"), q("0")).sign() == 0);
  CHECK_FALSE(QInterval(q("-1"), q("1")).sign().has_value());
}

TEST_CASE("exp enclosures are certified and tight") {
  // frozen digits of e and 1/e
  Rat e_lo = q("27182818284/10000000000"), e_hi = q("27182818285/10000000000");
  QInterval e1 = exp_enclosure(q("1"), q("1/100000000000"));
  CHECK(e1.lo > e_lo);
  CHECK(e1.hi < e_hi);

  QInterval em1 = exp_enclosure(q("-1"), q("1/10000000000"));
  CHECK(em1.lo > q("36787944117/100000000000"));
  CHECK(em1.hi < q("36787944118/100000000000"));

  CHECK(exp_enclosure(q("0"), q("1/1000")).contains(q("1")));
  CHECK(exp_enclosure(q("0"), q("1/1000")).width() == 0);

  // e^2 between 7.389056098 and 7.389056099
  QInterval e2 = exp_enclosure(q("2"), q("1/1000000000"));
  CHECK(e2.lo > q("7389056098/1000000000"));
  CHECK(e2.hi < q("7389056099/1000000000"));

  // widths honor the request across magnitudes
  for (const char* s : {"5", "-7", "13/3", "-22/7", "1/1000"}) {
    QInterval v = exp_enclosure(q(s), q("1/1000000"));
    CHECK(v.width() <= q("1/1000000"));
    CHECK(v.lo > 0);
    double ref = std::exp(to_double(q(s)));
    CHECK(to_double(v.lo) <= ref * 1.0000001);
    CHECK(to_double(v.hi) >= ref * 0.9999999);
  }

  QInterval img = exp_image(QInterval(q("0"), q("1")), q("1/1000"));
  CHECK(img.lo <= 1);
  CHECK(img.hi >= q("27/10"));
}

TEST_CASE("closed sets normalize to disjoint sorted components") {
  auto f = ClosedSetR({ClosedSetR::Component{q("3"), q("4")},
                       ClosedSetR::Component{q("0"), q("1")},
                       ClosedSetR::Component{q("1"), q("2")}});
  REQUIRE(f.components().size() == 2);
  CHECK(f.components()[0] == ClosedSetR::Component{q("0"), q("2")});
  CHECK(f.components()[1] == ClosedSetR::Component{q("3"), q("4")});
  CHECK(f == ClosedSetR::interval(q("0"), q("2")).unite(
                 ClosedSetR::interval(q("3"), q("4"))));

  CHECK(ClosedSetR::ray_below(q("0")).unite(ClosedSetR::ray_above(q("0"))) ==
        ClosedSetR::whole_line());
  CHECK(ClosedSetR::point(q("1")).unite(ClosedSetR::interval(q("1"), q("2"))) ==
        ClosedSetR::interval(q("1"), q("2")));
  CHECK_THROWS_AS(ClosedSetR::interval(q("2"), q("1")), error);
}

TEST_CASE("closed set predicates and clipping") {
  auto f = ClosedSetR::ray_below(q("-1")).unite(ClosedSetR::interval(q("0"), q("2")));
  CHECK(f.contains(q("-5")));
  CHECK(f.contains(q("-1")));
  CHECK_FALSE(f.contains(q("-1/2")));
  CHECK(f.contains(q("2")));
  CHECK_FALSE(f.contains(q("3")));

  CHECK_FALSE(f.bounded_below());
  CHECK(f.bounded_above());
  CHECK(f.semi_bounded());
  CHECK_FALSE(f.is_bounded());
  CHECK(f.max_point() == q("2"));
  CHECK_FALSE(f.min_point().has_value());

  CHECK_FALSE(ClosedSetR::whole_line().semi_bounded());
  CHECK_FALSE(ClosedSetR::ray_below(q("0"))
                  .unite(ClosedSetR::ray_above(q("5")))
                  .semi_bounded());
  CHECK(ClosedSetR::empty().semi_bounded());
  CHECK(ClosedSetR::interval(q("0"), q("1")).is_bounded());

  CHECK(f.reflected() ==
        ClosedSetR::interval(q("-2"), q("0")).unite(ClosedSetR::ray_above(q("1"))));
  CHECK(f.reflected().reflected() == f);

  CHECK(f.clip_below(q("1/2")) == ClosedSetR::interval(q("1/2"), q("2")));
  CHECK(f.clip_below(q("-3")) ==
        ClosedSetR::interval(q("-3"), q("-1")).unite(ClosedSetR::interval(q("0"), q("2"))));
  CHECK(f.clip_above(q("-2")) == ClosedSetR::ray_below(q("-2")));
  CHECK(f.clip_below(q("5")).is_empty());
  CHECK(ClosedSetR::whole_line().clip_below(q("7")) == ClosedSetR::ray_above(q("7")));
}

TEST_CASE("polynomial arithmetic and division") {
  QPoly p({q("-2"), q("0"), q("1")});  // t^2 - 2
  QPoly d({q("-1"), q("1")});          // t - 1
  CHECK(p.eval(q("3")) == 7);
  CHECK(p.eval(QInterval(q("0"), q("1"))) == QInterval(q("-2"), q("-1")));

  auto dv = divrem(p, d);
  CHECK(dv.quotient == QPoly({q("1"), q("1")}));
  CHECK(dv.remainder == QPoly::constant(q("-1")));
  CHECK(dv.quotient * d + dv.remainder == p);

  CHECK(p.derivative() == QPoly({q("0"), q("2")}));
  CHECK(primitive_scale(QPoly({q("4/6"), q("8/6")})) == QPoly({q("1"), q("2")}));
  CHECK(poly_gcd(p * d, d * d).degree() == 1);
  CHECK(squarefree_part(d * d * p).degree() == 3);
}

TEST_CASE("sturm chain counts roots of a fixed cubic") {
  // (t-1)(t-2)(t-4) = t^3 - 7t^2 + 14t - 8
  QPoly p({q("-8"), q("14"), q("-7"), q("1")});
  auto chain = sturm_chain(p);
  CHECK(count_roots_between(p, chain, ChainPoint::at(q("0")), ChainPoint::at(q("5"))) == 3);
  CHECK(count_roots_between(p, chain, ChainPoint::at(q("3/2")), ChainPoint::at(q("3"))) == 1);
  CHECK(count_roots_between(p, chain, ChainPoint::minus_inf(), ChainPoint::plus_inf()) == 3);
  CHECK(count_roots_between(p, chain, ChainPoint::at(q("5")), ChainPoint::plus_inf()) == 0);

  // multiple roots count once
  QPoly sq = p * p;
  auto chain2 = sturm_chain(sq);
  CHECK(count_roots_between(sq, chain2, ChainPoint::at(q("0")), ChainPoint::at(q("5"))) == 3);
}

TEST_CASE("sturm counting across transcendental endpoints") {
  // roots t = 1, 2; e^(1/2) in (1, 2), e^1 > 2
  QPoly p({q("2"), q("-3"), q("1")});
  auto chain = sturm_chain(p);
  CHECK(count_roots_between(p, chain, ChainPoint::exp_of(q("1/2")),
                            ChainPoint::plus_inf()) == 1);
  CHECK(count_roots_between(p, chain, ChainPoint::exp_of(q("1")),
                            ChainPoint::plus_inf()) == 0);
  CHECK(count_roots_between(p, chain, ChainPoint::at(q("0")),
                            ChainPoint::exp_of(q("1/2"))) == 1);
  CHECK(count_roots_between(p, chain, ChainPoint::exp_of(q("-30")),
                            ChainPoint::exp_of(q("30"))) == 2);
  CHECK_THROWS_AS(ChainPoint::exp_of(q("0")), error);
}

TEST_CASE("root isolation separates all real roots") {
  QPoly p({q("-8"), q("14"), q("-7"), q("1")});
  auto roots = isolate_real_roots(p);
  REQUIRE(roots.size() == 3);
  Rat expect[] = {q("1"), q("2"), q("4")};
  auto chain = sturm_chain(p);
  for (int i = 0; i < 3; ++i) {
    CHECK(roots[i].contains(expect[i]));
    QInterval tight = refine_root(p, chain, roots[i], q("1/1024"));
    CHECK(tight.contains(expect[i]));
    CHECK(tight.width() <= q("1/1024"));
  }
  CHECK(isolate_real_roots(QPoly({q("1"), q("0"), q("1")})).empty());
  CHECK(isolate_real_roots(QPoly::constant(q("3"))).empty());
}

TEST_CASE("root isolation on random products matches planted roots") {
  std::mt19937_64 rng(361251);
  std::uniform_int_distribution<int> rootpick(-8, 8), denpick(1, 3);
  for (int iter = 0; iter < 120; ++iter) {
    std::vector<Rat> planted;
    QPoly p = QPoly::constant(q("1"));
    int k = 1 + iter % 4;
    for (int i = 0; i < k; ++i) {
      Rat r(rootpick(rng), denpick(rng));
      r.canonicalize();
      planted.push_back(r);
      p = p * QPoly({-r, q("1")});
    }
    if (iter % 3 == 0) p = p * QPoly({q("1"), q("0"), q("1")});  // no real roots
    std::sort(planted.begin(), planted.end());
    planted.erase(std::unique(planted.begin(), planted.end()), planted.end());

    auto roots = isolate_real_roots(p);
    REQUIRE(roots.size() == planted.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      CHECK(roots[i].contains(planted[i]));
      if (i + 1 < roots.size()) CHECK(roots[i].hi <= roots[i + 1].lo);
    }
  }
}

TEST_CASE("newton interpolation reproduces polynomials") {
  QPoly p({q("1"), q("-2"), q("0"), q("3/7")});
  std::vector<std::pair<Rat, Rat>> nodes;
  for (long x : {-2, -1, 0, 1, 2}) nodes.push_back({Rat(x), p.eval(Rat(x))});
  CHECK(interpolate_polynomial(nodes) == p);
  CHECK(interpolate_polynomial({{q("5"), q("9")}}) == QPoly::constant(q("9")));
  CHECK_THROWS_AS(interpolate_polynomial({{q("1"), q("0")}, {q("1"), q("1")}}), error);
}
