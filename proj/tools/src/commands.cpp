#include "riesz_cli/commands.hpp"

#include <chrono>
#include <exception>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "riesz/error.hpp"
#include "riesz_cli/json_io.hpp"

namespace riesz::cli {

namespace {

// Input problems (unreadable file, malformed JSON, shape violations) exit
// with code 2; computation failures become failed checks and exit 1.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input, output, csv;
  long window_group = 10;
  long window_kms = 3;
  long depth = 30;
  long n = 2;
  long p = 2, q = 3;
};

json load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open input file '" + path + "'");
  try {
    json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw usage_error("malformed JSON in '" + path + "': " + e.what());
  }
}

template <typename F>
auto decoded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const error& e) {
    throw usage_error(std::string("bad input: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw usage_error(std::string("input: expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw usage_error(std::string("input: missing field '") + key + "'");
  return *it;
}

long long_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw usage_error(std::string("input: field '") + key + "' must be an integer");
  return v.get<long>();
}

Check pass_fail(std::string name, bool ok, json detail = nullptr) {
  return {std::move(name), ok ? "ok" : "failed", std::move(detail)};
}

Check undecided(std::string name, json detail) { return {std::move(name), "unknown", std::move(detail)}; }

// Computation errors turn into a single failed check so the report stays
// schema-stable and the command exits 1 rather than crashing.
template <typename F>
std::vector<Check> guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const error& e) {
    return {Check{name, "failed", json{{"error", errc_name(e.code())}, {"message", e.what()}}}};
  }
}

std::vector<Rat> vsub(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  std::vector<Rat> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

std::vector<Rat> vscale(long c, const std::vector<Rat>& a) {
  std::vector<Rat> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = Rat(c) * a[i];
  return out;
}

// ---- check builders shared between subcommands and the suite ----

std::vector<Check> interpolation_checks(const ClosedSetR& F, const LaurentPoly& p0,
                                        const LaurentPoly& p1, const LaurentPoly& q0,
                                        const LaurentPoly& q1) {
  std::vector<Check> out;
  const LaurentPoly* ps[2] = {&p0, &p1};
  const LaurentPoly* qs[2] = {&q0, &q1};
  bool pre = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      bool ok = cone_member(*qs[j] - *ps[i], F);
      pre = pre && ok;
      out.push_back(pass_fail("order-p" + std::to_string(i) + "-q" + std::to_string(j), ok));
    }
  if (!pre) return out;
  auto rest = guarded("interpolation", [&]() -> std::vector<Check> {
    LaurentPoly a = interpolate_semibounded(F, p0, p1, q0, q1);
    std::vector<Check> cs;
    cs.push_back(pass_fail("interpolation", true, json{{"interpolant", encode(a)}}));
    for (int i = 0; i < 2; ++i)
      cs.push_back(pass_fail("separation-p" + std::to_string(i), cone_member(a - *ps[i], F)));
    for (int j = 0; j < 2; ++j)
      cs.push_back(pass_fail("separation-q" + std::to_string(j), cone_member(*qs[j] - a, F)));
    return cs;
  });
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<Check> rip_checks(const OrderedGroupSpec& g, const std::vector<Rat>& p0,
                              const std::vector<Rat>& p1, const std::vector<Rat>& q0,
                              const std::vector<Rat>& q1, long window) {
  std::vector<Check> out;
  const std::vector<Rat>* ps[2] = {&p0, &p1};
  const std::vector<Rat>* qs[2] = {&q0, &q1};
  bool pre = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      bool ok = cone_contains(g, vsub(*qs[j], *ps[i]));
      pre = pre && ok;
      out.push_back(pass_fail("order-p" + std::to_string(i) + "-q" + std::to_string(j), ok));
    }
  if (!pre) return out;
  auto rest = guarded("interpolant-found", [&]() -> std::vector<Check> {
    auto a = riesz_interpolate_fg(g, p0, p1, q0, q1, window);
    std::vector<Check> cs;
    if (!a) {
      cs.push_back(pass_fail("interpolant-found", false,
                             json{{"window", window}, {"message", "no interpolant within the window"}}));
      return cs;
    }
    cs.push_back(pass_fail("interpolant-found", true, json{{"interpolant", encode(*a)}}));
    for (int i = 0; i < 2; ++i)
      cs.push_back(pass_fail("separation-p" + std::to_string(i), cone_contains(g, vsub(*a, *ps[i]))));
    for (int j = 0; j < 2; ++j)
      cs.push_back(pass_fail("separation-q" + std::to_string(j), cone_contains(g, vsub(*qs[j], *a))));
    return cs;
  });
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::vector<Check> unperforated_checks(const OrderedGroupSpec& g, long window) {
  return guarded("unperforated", [&]() -> std::vector<Check> {
    UnperforationResult r = is_unperforated(g, window);
    return {pass_fail("unperforated", r.kind != UnperforationResult::Kind::FalseWithWitness, encode(r))};
  });
}

std::vector<Check> dimension_drop_checks(const OrderedGroupSpec& g) {
  return guarded("order-isomorphism", [&]() -> std::vector<Check> {
    auto [localized, rep] = dimension_drop_k0(g);
    std::vector<Check> cs;
    cs.push_back(pass_fail("generators-embed", rep.generators_embed,
                           json{{"elements_checked", rep.elements_checked}}));
    cs.push_back(pass_fail("carriers-agree", rep.carriers_agree));
    cs.push_back(pass_fail("cone-agrees", rep.cone_agrees));
    cs.push_back(pass_fail("order-isomorphism", rep.order_isomorphism(),
                           json{{"intersection", encode(localized)}}));
    return cs;
  });
}

std::vector<Check> dimension_range_checks(const OrderedGroupSpec& g, const std::vector<Rat>& u,
                                          long n, long window) {
  return guarded("level-computed", [&]() -> std::vector<Check> {
    auto level = matrix_dimension_range_level(g, u, n, window);
    json elems = json::array();
    for (const auto& e : level) elems.push_back(encode(e));
    return {pass_fail("level-computed", true,
                      json{{"n", n}, {"count", level.size()}, {"elements", std::move(elems)}})};
  });
}

std::vector<Check> obstruction_checks(long n) {
  return guarded("infeasible", [&]() -> std::vector<Check> {
    UnboundedObstruction o = converse_witness(n, Supernatural::universal());
    Rat floor_expected = Rat(n) * Rat(n) / Rat(4);
    std::vector<Check> cs;
    cs.push_back(pass_fail("floor-matches-square", o.lower_required == floor_expected,
                           json{{"lower_required", encode(o.lower_required)}}));
    cs.push_back(pass_fail("ceiling-zero", o.upper_required == 0));
    cs.push_back(pass_fail("window-empty", o.lower_required > o.upper_required));
    cs.push_back(pass_fail("infeasible", !o.feasible, encode(o)));
    return cs;
  });
}

// Rank-2 pinched interpolation instance: the quadruple squeezes every
// interpolant to the single ambient point (1/p, 0), reachable from the
// generators only with coefficient denominator p, so the interpolant leaves
// the span once denominators touching p are forbidden.
std::vector<Check> pinched_checks(long p, long q) {
  Supernatural qinf = Supernatural::prime_power(Int(q), Supernatural::kInf);
  std::vector<Rat> a0{Rat(0), Rat(0)};
  std::vector<Rat> a1{Rat(1) / Rat(p), Rat(-(p - 1)) / Rat(p)};
  std::vector<Rat> b0{Rat(1), Rat(0)};
  std::vector<Rat> b1{Rat(1) / Rat(p), Rat(1) / Rat(p)};
  std::vector<Rat> pinch{Rat(1) / Rat(p), Rat(0)};
  auto make_group = [&](const Supernatural& m) {
    return OrderedGroupSpec{SubgroupPresentation::d_span(2, {a1, b1}, m),
                            ConeSpec::coordinatewise()};
  };
  return guarded("interpolation-blocked-localized", [&]() -> std::vector<Check> {
    std::vector<Check> cs;
    UnperforationResult unp = is_unperforated(make_group(qinf), 10);
    cs.push_back(pass_fail("unperforated",
                           unp.kind == UnperforationResult::Kind::True, encode(unp)));

    json quadruple{{"p0", encode(a0)}, {"p1", encode(a1)}, {"q0", encode(b0)}, {"q1", encode(b1)}};
    auto blocked = riesz_interpolate_fg(make_group(qinf), a0, a1, b0, b1, 20);
    cs.push_back(pass_fail("interpolation-blocked-localized", !blocked.has_value(),
                           json{{"quadruple", quadruple},
                                {"pinch_point", encode(pinch)},
                                {"modulus", encode(qinf)},
                                {"window", 20}}));

    auto reached = riesz_interpolate_fg(make_group(Supernatural::universal()), a0, a1, b0, b1, 20);
    cs.push_back(pass_fail("interpolation-reaches-pinch-rationally",
                           reached.has_value() && *reached == pinch,
                           reached ? json{{"interpolant", encode(*reached)}} : json(nullptr)));

    bool outside = !subgroup_membership(pinch, SubgroupPresentation::d_span(2, {a1, b1}, qinf));
    cs.push_back(pass_fail("pinch-point-outside-localized-span", outside));
    return cs;
  });
}

std::vector<Check> kernel_checks(const std::vector<GZElement>& family, const BundleSpec& B,
                                 long window) {
  return guarded("difference-sums-vanish", [&]() -> std::vector<Check> {
    KernelImageReport r = verify_kernel_image(family, B, window);
    std::vector<Check> cs;
    cs.push_back(pass_fail("difference-sums-vanish", r.subset_holds,
                           json{{"combinations_checked", r.combinations_checked}}));
    if (r.unresolved_count() == 0)
      cs.push_back(pass_fail("kernel-members-resolved", true, encode(r)));
    else
      cs.push_back(undecided("kernel-members-resolved", encode(r)));
    return cs;
  });
}

std::vector<Check> cokernel_checks(const std::vector<GZElement>& family, const BundleSpec& B,
                                   long window) {
  return guarded("cokernel-computed", [&]() -> std::vector<Check> {
    K0CokernelResult r = k0_crossed_product(family, B, window);
    return {pass_fail("cokernel-computed", true, encode(r))};
  });
}

// ---- fixed suite items ----

LaurentPoly lp(std::map<long, Rat> coeffs) {
  return LaurentPoly(std::move(coeffs), Supernatural::universal());
}

std::vector<Check> perforation_checks(long n) {
  OrderedGroupSpec g{SubgroupPresentation::full_integer_lattice(1),
                     ConeSpec::integers_from(Int(n))};
  UnperforationResult r = is_unperforated(g, 10);
  bool ok = r.kind == UnperforationResult::Kind::FalseWithWitness &&
            r.witness == std::vector<Rat>{Rat(1)} && r.multiple == n;
  return {pass_fail("witness-found", ok, encode(r))};
}

std::vector<Check> localization_checks() {
  Supernatural dyadic = Supernatural::prime_power(Int(2), Supernatural::kInf);
  OrderedGroupSpec base{SubgroupPresentation::full_integer_lattice(1),
                        ConeSpec::integers_from(Int(2))};
  OrderedGroupSpec localized = tensor_localize(base, dyadic);
  OrderedGroupSpec direct{SubgroupPresentation::d_span(1, {{Rat(1)}}, dyadic),
                          ConeSpec::coordinatewise()};
  auto le = bounded_elements(localized, 10);
  auto de = bounded_elements(direct, 10);
  bool same = le == de;
  bool cones = true;
  for (const auto& e : le) cones = cones && cone_contains(localized, e) == cone_contains(direct, e);
  return {pass_fail("elements-match", same, json{{"count", le.size()}}),
          pass_fail("cones-match", cones)};
}

std::vector<Check> dimension_range_enumeration_checks() {
  std::vector<Rat> a1{Rat(1, 2), Rat(-1, 2)};
  std::vector<Rat> b1{Rat(1, 2), Rat(1, 2)};
  OrderedGroupSpec g{SubgroupPresentation::d_span(2, {a1, b1}, Supernatural()),
                     ConeSpec::coordinatewise()};
  auto level = matrix_dimension_range_level(g, b1, 2, 6);
  std::vector<std::vector<Rat>> expected;
  for (const auto& e : bounded_elements(g, 6))
    if (cone_contains(g, e) && cone_contains(g, vsub(vscale(2, b1), e))) expected.push_back(e);
  return {pass_fail("matches-enumeration", level == expected, json{{"count", level.size()}})};
}

std::vector<Check> cokernel_expectation_checks(const BundleSpec& B) {
  K0CokernelResult r = k0_crossed_product({gz_unit(B)}, B, 3);
  bool ok = r.free_rank == 1 && r.torsion.empty() && r.class_of_u == 1;
  return {pass_fail("unit-generates-cokernel", ok, encode(r))};
}

std::vector<Check> covariance_checks() {
  BundleSpec B{ClosedSetR::ray_above(Rat(0))};
  GZElement u = gz_unit(B);
  GZElement e = u + apply_sigma(u);
  bool covariant = true;
  for (const Rat& beta : std::vector<Rat>{Rat(0), Rat(1), Rat(1, 2)}) {
    ExpPolyValue lhs = evaluate_state(apply_sigma(e), beta, B);
    ExpPolyValue rhs = evaluate_state(e, beta, B).shifted(-1);
    covariant = covariant && lhs.symbolically_equal(rhs);
  }
  auto at0 = evaluate_state(e, Rat(0), B).exact();
  bool sums = at0.has_value() && *at0 == Rat(sigma0(e));
  return {pass_fail("covariance-symbolic", covariant),
          pass_fail("value-at-zero", sums, json{{"coefficient_sum", encode(sigma0(e))}})};
}

// ---- subcommand handlers ----

CommandReport interpolate_handler(const Options& o) {
  json in = load_input(o.input);
  ClosedSetR F;
  LaurentPoly p0, p1, q0, q1;
  decoded([&] {
    F = decode_closed_set(field(in, "set"));
    p0 = decode_laurent(field(in, "p0"));
    p1 = decode_laurent(field(in, "p1"));
    q0 = decode_laurent(field(in, "q0"));
    q1 = decode_laurent(field(in, "q1"));
  });
  CommandReport rep;
  rep.checks = interpolation_checks(F, p0, p1, q0, q1);
  return rep;
}

CommandReport check_rip_handler(const Options& o) {
  json in = load_input(o.input);
  OrderedGroupSpec g;
  std::vector<Rat> p0, p1, q0, q1;
  decoded([&] {
    g = decode_group(field(in, "group"));
    p0 = decode_rat_vector(field(in, "p0"));
    p1 = decode_rat_vector(field(in, "p1"));
    q0 = decode_rat_vector(field(in, "q0"));
    q1 = decode_rat_vector(field(in, "q1"));
  });
  for (const auto* v : {&p0, &p1, &q0, &q1})
    if (v->size() != g.carrier.ambient_rank)
      throw usage_error("input: vector length does not match the ambient rank");
  CommandReport rep;
  rep.checks = rip_checks(g, p0, p1, q0, q1, o.window_group);
  return rep;
}

CommandReport check_unperforated_handler(const Options& o) {
  json in = load_input(o.input);
  OrderedGroupSpec g;
  decoded([&] { g = decode_group(field(in, "group")); });
  CommandReport rep;
  rep.checks = unperforated_checks(g, o.window_group);
  return rep;
}

CommandReport dimension_drop_handler(const Options& o) {
  json in = load_input(o.input);
  OrderedGroupSpec g;
  decoded([&] { g = decode_group(field(in, "group")); });
  CommandReport rep;
  rep.checks = dimension_drop_checks(g);
  return rep;
}

CommandReport dimension_range_handler(const Options& o) {
  json in = load_input(o.input);
  OrderedGroupSpec g;
  std::vector<Rat> u;
  long n = 0;
  decoded([&] {
    g = decode_group(field(in, "group"));
    u = decode_rat_vector(field(in, "u"));
  });
  n = long_field(in, "n");
  if (u.size() != g.carrier.ambient_rank)
    throw usage_error("input: vector length does not match the ambient rank");
  if (n < 0) throw usage_error("input: n must be nonnegative");
  CommandReport rep;
  rep.checks = dimension_range_checks(g, u, n, o.window_group);
  return rep;
}

CommandReport obstruction_handler(const Options& o) {
  if (o.n < 2) throw usage_error("--n must be at least 2");
  CommandReport rep;
  rep.checks = obstruction_checks(o.n);
  return rep;
}

CommandReport pinched_handler(const Options& o) {
  decoded([&] {
    // primality of both parameters is what from_factors verifies
    Supernatural::from_factors({{Int(o.p), 1}});
    Supernatural::from_factors({{Int(o.q), 1}});
  });
  if (o.p == o.q) throw usage_error("--p and --q must be distinct primes");
  CommandReport rep;
  rep.checks = pinched_checks(o.p, o.q);
  return rep;
}

CommandReport kms_kernel_handler(const Options& o) {
  json in = load_input(o.input);
  BundleSpec B;
  std::vector<GZElement> family;
  decoded([&] {
    B = decode_bundle(field(in, "bundle"));
    const json& fam = field(in, "family");
    if (!fam.is_array()) throw error(errc::parse, "family: expected an array");
    for (const json& jf : fam) {
      GZElement e = decode_gz_element(jf);
      validate_gz(B, e);
      family.push_back(std::move(e));
    }
  });
  CommandReport rep;
  rep.checks = kernel_checks(family, B, o.window_kms);
  return rep;
}

CommandReport kms_k0_handler(const Options& o) {
  json in = load_input(o.input);
  BundleSpec B;
  std::vector<GZElement> family;
  decoded([&] {
    B = decode_bundle(field(in, "bundle"));
    const json& fam = field(in, "family");
    if (!fam.is_array()) throw error(errc::parse, "family: expected an array");
    for (const json& jf : fam) {
      GZElement e = decode_gz_element(jf);
      validate_gz(B, e);
      family.push_back(std::move(e));
    }
  });
  CommandReport rep;
  rep.checks = cokernel_checks(family, B, o.window_kms);
  return rep;
}

CommandReport kms_states_handler(const Options& o) {
  json in = load_input(o.input);
  BundleSpec B;
  GZElement e;
  std::vector<Rat> betas;
  decoded([&] {
    B = decode_bundle(field(in, "bundle"));
    e = decode_gz_element(field(in, "element"));
    validate_gz(B, e);
    betas = decode_rat_vector(field(in, "betas"));
  });
  Rat eps = Rat(1) / Rat(Int(1) << static_cast<unsigned long>(o.depth));

  CommandReport rep;
  json rows = json::array();
  bool evaluated = true;
  for (const Rat& beta : betas) {
    try {
      ExpPolyValue v = evaluate_state(e, beta, B, eps);
      rows.push_back(json::array(
          {encode(beta), encode(v.enclosure().lo), encode(v.enclosure().hi)}));
    } catch (const error& err) {
      rep.checks.push_back(pass_fail(
          "states-evaluated", false,
          json{{"beta", encode(beta)}, {"error", errc_name(err.code())}, {"message", err.what()}}));
      evaluated = false;
      break;
    }
  }
  if (evaluated) {
    std::ofstream csv(o.csv);
    if (!csv) throw usage_error("cannot open csv file '" + o.csv + "'");
    csv << "beta,lower,upper\n";
    for (const json& row : rows)
      csv << row[0].get<std::string>() << ',' << row[1].get<std::string>() << ','
          << row[2].get<std::string>() << '\n';
    rep.checks.push_back(pass_fail(
        "states-evaluated", true,
        json{{"count", betas.size()}, {"csv", o.csv}, {"rows", rows}}));
    if (!betas.empty()) {
      auto cov = guarded("covariance-spot-check", [&]() -> std::vector<Check> {
        ExpPolyValue lhs = evaluate_state(apply_sigma(e), betas.front(), B, eps);
        ExpPolyValue rhs = evaluate_state(e, betas.front(), B, eps).shifted(-1);
        return {pass_fail("covariance-spot-check", lhs.symbolically_equal(rhs),
                          json{{"beta", encode(betas.front())}})};
      });
      rep.checks.insert(rep.checks.end(), cov.begin(), cov.end());
    }
  }
  return rep;
}

CommandReport suite_handler() {
  using Item = std::pair<std::string, std::function<std::vector<Check>()>>;
  std::vector<Item> items;
  items.emplace_back("interpolation-halfline", [] {
    return interpolation_checks(ClosedSetR::ray_above(Rat(0)),
                                lp({{0, Rat(-1)}, {1, Rat(1)}}),
                                lp({{-1, Rat(-1)}, {1, Rat(1)}}),
                                lp({{0, Rat(1)}, {1, Rat(1)}}),
                                lp({{-1, Rat(2)}, {1, Rat(1)}}));
  });
  for (long n : {2, 5, 10})
    items.emplace_back("obstruction-n" + std::to_string(n), [n] { return obstruction_checks(n); });
  items.emplace_back("pinched-interpolation", [] { return pinched_checks(2, 3); });
  for (long n : {2, 3, 5})
    items.emplace_back("perforation-from" + std::to_string(n),
                       [n] { return perforation_checks(n); });
  items.emplace_back("localized-integers", [] { return localization_checks(); });
  items.emplace_back("dimension-drop-integers", [] {
    return dimension_drop_checks({SubgroupPresentation::full_integer_lattice(1),
                                  ConeSpec::coordinatewise()});
  });
  items.emplace_back("dimension-drop-plane", [] {
    return dimension_drop_checks({SubgroupPresentation::full_integer_lattice(2),
                                  ConeSpec::coordinatewise()});
  });
  items.emplace_back("dimension-drop-pinched", [] {
    return dimension_drop_checks(
        {SubgroupPresentation::d_span(2, {{Rat(1, 2), Rat(-1, 2)}, {Rat(1, 2), Rat(1, 2)}},
                                      Supernatural()),
         ConeSpec::coordinatewise()});
  });
  items.emplace_back("dimension-range-level2", [] { return dimension_range_enumeration_checks(); });
  items.emplace_back("kernel-image-halfline", [] {
    BundleSpec B{ClosedSetR::ray_above(Rat(0))};
    GZElement u = gz_unit(B);
    return kernel_checks({u, u - apply_sigma(u)}, B, 3);
  });
  items.emplace_back("cokernel-halfline", [] {
    return cokernel_expectation_checks(BundleSpec{ClosedSetR::ray_above(Rat(0))});
  });
  items.emplace_back("cokernel-split", [] {
    return cokernel_expectation_checks(
        BundleSpec{ClosedSetR::ray_below(Rat(0)).unite(ClosedSetR::interval(Rat(1), Rat(2)))});
  });
  items.emplace_back("state-covariance", [] { return covariance_checks(); });

  // items are independent; the report keeps the declared order regardless of
  // completion order
  std::vector<std::future<std::vector<Check>>> futures;
  futures.reserve(items.size());
  for (const auto& item : items) {
    const auto& name = item.first;
    const auto& fn = item.second;
    futures.push_back(
        std::async(std::launch::async, [name, fn] { return guarded(name, fn); }));
  }
  CommandReport rep;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::vector<Check> cs = futures[i].get();
    for (Check& c : cs) {
      c.name = items[i].first + ":" + c.name;
      rep.checks.push_back(std::move(c));
    }
  }
  return rep;
}

void diagnose(const std::string& message) {
  std::string line = message.substr(0, message.find('\n'));
  std::cerr << "riesz: " << line << "\n";
}

}  // namespace

void CommandReport::finalize() {
  status = "ok";
  for (const Check& c : checks) {
    if (c.verdict == "unknown" && status == "ok") status = "unknown";
    if (c.verdict == "failed") status = "failed";
  }
}

json CommandReport::to_json() const {
  json cs = json::array();
  for (const Check& c : checks) {
    json jc{{"name", c.name}, {"verdict", c.verdict}};
    if (!c.detail.is_null()) jc["detail"] = c.detail;
    cs.push_back(std::move(jc));
  }
  return json{{"command", command},
              {"status", status},
              {"checks", std::move(cs)},
              {"timing_ms", std::to_string(timing_ms)}};
}

int CommandReport::exit_code() const { return status == "ok" ? 0 : 1; }

int run_command(const std::vector<std::string>& argv) {
  CLI::App app{"exact verification of ordered-group interpolation and bundle truncations"};
  app.name("riesz");
  app.require_subcommand(0, 1);
  Options o;
  std::string command;
  std::function<CommandReport()> action;

  auto add_output = [&](CLI::App* s) {
    s->add_option("--output", o.output, "write the JSON report to this file instead of stdout");
  };
  auto add_input = [&](CLI::App* s) {
    s->add_option("--input", o.input, "JSON input file")->required();
    add_output(s);
  };
  auto bind = [&](CLI::App* s, const char* name, std::function<CommandReport()> fn) {
    s->callback([&command, &action, name, fn = std::move(fn)] {
      command = name;
      action = fn;
    });
  };

  CLI::App* interp = app.add_subcommand(
      "interpolate", "interpolate between exponential sums in the strict pointwise order");
  add_input(interp);
  bind(interp, "interpolate", [&] { return interpolate_handler(o); });

  CLI::App* rip = app.add_subcommand("check-rip", "search for an order interpolant in a presented group");
  add_input(rip);
  rip->add_option("--window", o.window_group, "coefficient search window")->check(CLI::Range(1, 10000));
  bind(rip, "check-rip", [&] { return check_rip_handler(o); });

  CLI::App* unp = app.add_subcommand("check-unperforated", "decide unperforation of a presented group");
  add_input(unp);
  unp->add_option("--window", o.window_group, "witness search window")->check(CLI::Range(1, 10000));
  bind(unp, "check-unperforated", [&] { return check_unperforated_handler(o); });

  CLI::App* ddk = app.add_subcommand(
      "dimension-drop-k0", "compare a group with the intersection of its coprime localizations");
  add_input(ddk);
  bind(ddk, "dimension-drop-k0", [&] { return dimension_drop_handler(o); });

  CLI::App* mdr = app.add_subcommand("matrix-dimension-range",
                                     "enumerate the cone elements below a multiple of the unit");
  add_input(mdr);
  mdr->add_option("--window", o.window_group, "enumeration window")->check(CLI::Range(1, 10000));
  bind(mdr, "matrix-dimension-range", [&] { return dimension_range_handler(o); });

  CLI::App* obs = app.add_subcommand(
      "verify-lemma21-converse",
      "exhibit the obstruction quadruple that blocks interpolation over the whole line");
  obs->add_option("--n", o.n, "obstruction parameter (>= 2)")->check(CLI::Range(2, 1000000));
  add_output(obs);
  bind(obs, "verify-lemma21-converse", [&] { return obstruction_handler(o); });

  CLI::App* pin = app.add_subcommand(
      "verify-remark33", "pinched interpolation instance separating coefficient rings");
  pin->add_option("--p", o.p, "prime blocked by the localization");
  pin->add_option("--q", o.q, "prime kept by the localization");
  add_output(pin);
  bind(pin, "verify-remark33", [&] { return pinched_handler(o); });

  CLI::App* kms = app.add_subcommand("kms", "truncated bundle checks");
  kms->require_subcommand(1);
  CLI::App* vk = kms->add_subcommand("verify-kernel",
                                     "compare the kernel of the coefficient sum with the image of id - shift");
  add_input(vk);
  vk->add_option("--window", o.window_kms, "shift truncation window")->check(CLI::Range(0, 64));
  bind(vk, "kms verify-kernel", [&] { return kms_kernel_handler(o); });

  CLI::App* k0 = kms->add_subcommand("k0", "cokernel of id - shift on the truncated module");
  add_input(k0);
  k0->add_option("--window", o.window_kms, "shift truncation window")->check(CLI::Range(0, 64));
  bind(k0, "kms k0", [&] { return kms_k0_handler(o); });

  CLI::App* st = kms->add_subcommand("states", "evaluate the state of an element over a list of beta");
  add_input(st);
  st->add_option("--csv", o.csv, "write beta,lower,upper rows here")->required();
  st->add_option("--depth", o.depth, "enclosure precision, width at most 2^-depth")
      ->check(CLI::Range(1, 512));
  bind(st, "kms states", [&] { return kms_states_handler(o); });

  CLI::App* suite = app.add_subcommand("suite", "run every shipped example");
  add_output(suite);
  bind(suite, "suite", [] { return suite_handler(); });

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    diagnose(e.what());
    return 2;
  }

  if (!action) {
    diagnose("no subcommand given (try --help)");
    return 2;
  }

  CommandReport rep;
  try {
    auto t0 = std::chrono::steady_clock::now();
    rep = action();
    auto t1 = std::chrono::steady_clock::now();
    rep.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  } catch (const usage_error& e) {
    diagnose(e.what());
    return 2;
  } catch (const error& e) {
    rep.checks.push_back(Check{
        "run", "failed", json{{"error", errc_name(e.code())}, {"message", e.what()}}});
  } catch (const std::exception& e) {
    diagnose(e.what());
    return 2;
  }
  rep.command = command;
  rep.finalize();

  std::string text = rep.to_json().dump(2) + "\n";
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) {
      diagnose("cannot open output file '" + o.output + "'");
      return 2;
    }
    out << text;
  } else {
    std::cout << text;
  }
  return rep.exit_code();
}

}  // namespace riesz::cli
