#include "riesz_cli/json_io.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "riesz/error.hpp"

namespace riesz::cli {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(errc::parse, path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing field");
  return *it;
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

long long_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return static_cast<long>(j.get<std::int64_t>());
}

Rat rat_at(const json& j, const std::string& path) {
  try {
    return rat_from_string(string_at(j, path));
  } catch (const error& e) {
    if (e.code() == errc::parse && j.is_string()) bad(path, e.what());
    throw;
  }
}

Int int_at(const json& j, const std::string& path) {
  try {
    return int_from_string(string_at(j, path));
  } catch (const error& e) {
    if (e.code() == errc::parse && j.is_string()) bad(path, e.what());
    throw;
  }
}

long key_to_long(const std::string& key, const std::string& path) {
  try {
    std::size_t used = 0;
    long v = std::stol(key, &used);
    if (used != key.size()) bad(path, "bad integer key '" + key + "'");
    return v;
  } catch (const std::exception&) {
    bad(path, "bad integer key '" + key + "'");
  }
}

json encode_component(const ClosedSetR::Component& c) {
  json j = json::object();
  j["lo"] = c.lo ? encode(*c.lo) : json(nullptr);
  j["hi"] = c.hi ? encode(*c.hi) : json(nullptr);
  return j;
}

ClosedSetR::Component decode_component(const json& j, const std::string& path) {
  ClosedSetR::Component c;
  const json& lo = member(j, "lo", path);
  const json& hi = member(j, "hi", path);
  if (!lo.is_null()) c.lo = rat_at(lo, path + ".lo");
  if (!hi.is_null()) c.hi = rat_at(hi, path + ".hi");
  if (c.lo && c.hi && *c.lo > *c.hi) bad(path, "lo exceeds hi");
  return c;
}

const char* verdict_name(Positivity p) {
  switch (p) {
    case Positivity::Positive: return "positive";
    case Positivity::IsZero: return "is_zero";
    case Positivity::NotPositive: return "not_positive";
  }
  return "not_positive";
}

}  // namespace

json encode(const Rat& r) { return json(to_string(r)); }

json encode(const Int& z) { return json(to_string(z)); }

json encode(const std::vector<Rat>& v) {
  json j = json::array();
  for (const Rat& r : v) j.push_back(encode(r));
  return j;
}

json encode(const QInterval& v) { return json::array({encode(v.lo), encode(v.hi)}); }

json encode(const Supernatural& n) {
  if (n.is_universal()) return json("universal");
  json factors = json::object();
  for (const auto& [p, e] : n.factors())
    factors[to_string(p)] = e == Supernatural::kInf ? json("inf") : json(e);
  return json{{"factors", std::move(factors)}};
}

json encode(const SubgroupPresentation& h) {
  json gens = json::array();
  for (const auto& g : h.generators) gens.push_back(encode(g));
  return json{{"ambient_rank", h.ambient_rank},
              {"generators", std::move(gens)},
              {"modulus", encode(h.modulus)}};
}

json encode(const ConeSpec& c) {
  switch (c.kind) {
    case ConeSpec::Kind::Coordinatewise:
      return json{{"kind", "coordinatewise"}};
    case ConeSpec::Kind::HalfspaceList: {
      json fns = json::array();
      for (const auto& f : c.functionals) fns.push_back(encode(f));
      return json{{"kind", "halfspace_list"}, {"functionals", std::move(fns)}};
    }
    case ConeSpec::Kind::ExplicitSubset: {
      json members = json::array();
      for (const Int& m : c.members) members.push_back(encode(m));
      return json{{"kind", "explicit_subset"},
                  {"members", std::move(members)},
                  {"saturation", encode(c.saturation)},
                  {"scale", encode(c.scale)}};
    }
  }
  fail(errc::unsupported, "unknown cone kind");
}

json encode(const OrderedGroupSpec& g) {
  return json{{"carrier", encode(g.carrier)}, {"cone", encode(g.cone)}};
}

json encode(const LaurentPoly& f) {
  json coeffs = json::object();
  for (const auto& [n, c] : f.coeffs()) coeffs[std::to_string(n)] = encode(c);
  return json{{"coeffs", std::move(coeffs)}, {"modulus", encode(f.modulus())}};
}

json encode(const ClosedSetR& s) {
  json comps = json::array();
  for (const auto& c : s.components()) comps.push_back(encode_component(c));
  return json{{"components", std::move(comps)}};
}

json encode(const PiecewiseLinear& p) {
  json pts = json::array();
  for (const auto& [x, y] : p.points()) pts.push_back(json::array({encode(x), encode(y)}));
  return json{{"points", std::move(pts)}};
}

json encode(const PiecewiseExpFn& f) {
  json pieces = json::array();
  for (const auto& piece : f.pieces) {
    json terms = json::object();
    for (const auto& [j, r] : piece.terms) terms[std::to_string(j)] = encode(r);
    pieces.push_back(json{{"domain", encode_component(piece.domain)}, {"terms", std::move(terms)}});
  }
  return json{{"pieces", std::move(pieces)}};
}

json encode(const GZElement& e) {
  json xi = json::object();
  for (const auto& [n, c] : e.xi) xi[std::to_string(n)] = encode(c);
  return json{{"xi", std::move(xi)}, {"f", encode(e.f)}, {"window", encode(e.window)}};
}

json encode(const BundleSpec& b) { return json{{"F", encode(b.F)}}; }

json encode(const QuotientInvariants& q) {
  json torsion = json::array();
  for (const Int& d : q.torsion) torsion.push_back(encode(d));
  return json{{"free_rank", q.free_rank}, {"torsion", std::move(torsion)}};
}

json encode(const UnperforationResult& r) {
  switch (r.kind) {
    case UnperforationResult::Kind::True:
      return json{{"kind", "true"}};
    case UnperforationResult::Kind::TrueWithinWindow:
      return json{{"kind", "true_within_window"}};
    case UnperforationResult::Kind::FalseWithWitness:
      return json{{"kind", "false_with_witness"},
                  {"witness", encode(r.witness)},
                  {"multiple", r.multiple}};
  }
  fail(errc::unsupported, "unknown unperforation kind");
}

json encode(const DimensionDropReport& r) {
  return json{{"generators_embed", r.generators_embed},
              {"carriers_agree", r.carriers_agree},
              {"cone_agrees", r.cone_agrees},
              {"elements_checked", r.elements_checked},
              {"order_isomorphism", r.order_isomorphism()}};
}

json encode(const UnboundedObstruction& o) {
  return json{{"parameter", o.parameter},
              {"p0", encode(o.p0)},
              {"p1", encode(o.p1)},
              {"q0", encode(o.q0)},
              {"q1", encode(o.q1)},
              {"lower_required", encode(o.lower_required)},
              {"peak_t", encode(o.peak_t)},
              {"upper_required", encode(o.upper_required)},
              {"feasible", o.feasible},
              {"note", o.note}};
}

json encode(const PositivityWitness& w) {
  if (w.kind == PositivityWitness::Kind::NegativeAt)
    return json{{"kind", "negative_at"}, {"point", encode(w.point)}, {"value", encode(w.value)}};
  return json{{"kind", "zero_inside"}, {"x_range", encode(w.x_range)}};
}

json encode(const PositivityResult& r) {
  json j{{"verdict", verdict_name(r.verdict)}};
  if (r.witness) j["witness"] = encode(*r.witness);
  return j;
}

json encode(const ElementPositivityResult& r) {
  const char* kind = "unknown";
  switch (r.kind) {
    case ElementPositivityResult::Kind::Positive: kind = "positive"; break;
    case ElementPositivityResult::Kind::IsZero: kind = "is_zero"; break;
    case ElementPositivityResult::Kind::NotPositive: kind = "not_positive"; break;
    case ElementPositivityResult::Kind::Unknown: kind = "unknown"; break;
  }
  json j{{"kind", kind}};
  if (r.witness) j["witness"] = encode(*r.witness);
  if (r.kind == ElementPositivityResult::Kind::Unknown) j["resolution"] = encode(r.resolution);
  return j;
}

json encode(const ExpPolyValue& v) {
  json coeffs = json::object();
  for (const auto& [j, c] : v.coeffs()) coeffs[std::to_string(j)] = encode(c);
  return json{{"coeffs", std::move(coeffs)},
              {"beta", encode(v.beta())},
              {"enclosure", encode(v.enclosure())}};
}

json encode(const KernelImageReport& r) {
  json preimages = json::array();
  for (const auto& p : r.preimages) {
    const char* status = "unresolved";
    if (p.status == KernelImageReport::Preimage::Status::solved) status = "solved";
    if (p.status == KernelImageReport::Preimage::Status::not_in_kernel) status = "not_in_kernel";
    json combo = json::array();
    for (const Int& c : p.combination) combo.push_back(encode(c));
    preimages.push_back(json{{"family_index", p.family_index},
                             {"sigma0", encode(p.sigma0_value)},
                             {"status", status},
                             {"combination", std::move(combo)}});
  }
  return json{{"window", r.window},
              {"combinations_checked", r.combinations_checked},
              {"subset_holds", r.subset_holds},
              {"unit_added", r.unit_added},
              {"preimages", std::move(preimages)},
              {"solved_count", r.solved_count()},
              {"unresolved_count", r.unresolved_count()},
              {"image_covers_kernel_members", r.image_covers_kernel_members()}};
}

json encode(const K0CokernelResult& r) {
  json torsion = json::array();
  for (const Int& d : r.torsion) torsion.push_back(encode(d));
  return json{{"free_rank", r.free_rank},
              {"torsion", std::move(torsion)},
              {"class_of_u", encode(r.class_of_u)},
              {"module_rank", r.module_rank},
              {"relation_count", r.relation_count}};
}

json encode(const SimplicityProbe& p) {
  return json{{"confirmed", p.confirmed}, {"n", p.n}, {"m", p.m}};
}

Rat decode_rat(const json& j) { return rat_at(j, "rational"); }

Int decode_int(const json& j) { return int_at(j, "integer"); }

std::vector<Rat> decode_rat_vector(const json& j) {
  if (!j.is_array()) bad("vector", "expected an array");
  std::vector<Rat> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rat_at(j[i], "vector[" + std::to_string(i) + "]"));
  return v;
}

Supernatural decode_supernatural(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "universal") return Supernatural::universal();
    bad("supernatural", "expected \"universal\" or a factors object");
  }
  const json& factors = member(j, "factors", "supernatural");
  if (!factors.is_object()) bad("supernatural.factors", "expected an object");
  std::map<Int, std::int64_t> map;
  for (const auto& [key, value] : factors.items()) {
    Int p;
    try {
      p = int_from_string(key);
    } catch (const error&) {
      bad("supernatural.factors", "bad prime key '" + key + "'");
    }
    std::int64_t e = 0;
    if (value.is_string() && value.get<std::string>() == "inf") {
      e = Supernatural::kInf;
    } else if (value.is_number_integer() && value.get<std::int64_t>() >= 1) {
      e = value.get<std::int64_t>();
    } else {
      bad("supernatural.factors." + key, "expected a positive integer or \"inf\"");
    }
    map[p] = e;
  }
  return Supernatural::from_factors(map);
}

SubgroupPresentation decode_subgroup(const json& j) {
  SubgroupPresentation h;
  h.ambient_rank = static_cast<std::size_t>(long_at(member(j, "ambient_rank", "subgroup"), "subgroup.ambient_rank"));
  const json& gens = member(j, "generators", "subgroup");
  if (!gens.is_array()) bad("subgroup.generators", "expected an array");
  for (const json& g : gens) h.generators.push_back(decode_rat_vector(g));
  h.modulus = decode_supernatural(member(j, "modulus", "subgroup"));
  h.validate();
  return h;
}

ConeSpec decode_cone(const json& j) {
  std::string kind = string_at(member(j, "kind", "cone"), "cone.kind");
  if (kind == "coordinatewise") return ConeSpec::coordinatewise();
  if (kind == "halfspace_list") {
    const json& fns = member(j, "functionals", "cone");
    if (!fns.is_array()) bad("cone.functionals", "expected an array");
    std::vector<std::vector<Rat>> functionals;
    for (const json& f : fns) functionals.push_back(decode_rat_vector(f));
    return ConeSpec::halfspaces(std::move(functionals));
  }
  if (kind == "explicit_subset") {
    ConeSpec c;
    c.kind = ConeSpec::Kind::ExplicitSubset;
    const json& members = member(j, "members", "cone");
    if (!members.is_array()) bad("cone.members", "expected an array");
    for (const json& m : members) c.members.push_back(int_at(m, "cone.members[]"));
    c.saturation = int_at(member(j, "saturation", "cone"), "cone.saturation");
    c.scale = decode_supernatural(member(j, "scale", "cone"));
    return c;
  }
  bad("cone.kind", "unknown kind '" + kind + "'");
}

OrderedGroupSpec decode_group(const json& j) {
  OrderedGroupSpec g{decode_subgroup(member(j, "carrier", "group")),
                     decode_cone(member(j, "cone", "group"))};
  g.validate();
  return g;
}

LaurentPoly decode_laurent(const json& j) {
  const json& coeffs = member(j, "coeffs", "laurent");
  if (!coeffs.is_object()) bad("laurent.coeffs", "expected an object");
  std::map<long, Rat> map;
  for (const auto& [key, value] : coeffs.items())
    map[key_to_long(key, "laurent.coeffs")] = rat_at(value, "laurent.coeffs." + key);
  Supernatural modulus = decode_supernatural(member(j, "modulus", "laurent"));
  return LaurentPoly(std::move(map), std::move(modulus));
}

ClosedSetR decode_closed_set(const json& j) {
  const json& comps = member(j, "components", "closed_set");
  if (!comps.is_array()) bad("closed_set.components", "expected an array");
  std::vector<ClosedSetR::Component> parts;
  for (std::size_t i = 0; i < comps.size(); ++i)
    parts.push_back(decode_component(comps[i], "closed_set.components[" + std::to_string(i) + "]"));
  return ClosedSetR(std::move(parts));
}

PiecewiseLinear decode_piecewise_linear(const json& j) {
  const json& pts = member(j, "points", "piecewise_linear");
  if (!pts.is_array()) bad("piecewise_linear.points", "expected an array");
  std::vector<std::pair<Rat, Rat>> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const json& p = pts[i];
    std::string path = "piecewise_linear.points[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2) bad(path, "expected an [x, y] pair");
    points.emplace_back(rat_at(p[0], path), rat_at(p[1], path));
  }
  if (points.empty()) bad("piecewise_linear.points", "at least one point required");
  return PiecewiseLinear::from_points(std::move(points));
}

PiecewiseExpFn decode_exp_fn(const json& j) {
  const json& pieces = member(j, "pieces", "exp_fn");
  if (!pieces.is_array()) bad("exp_fn.pieces", "expected an array");
  PiecewiseExpFn f;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::string path = "exp_fn.pieces[" + std::to_string(i) + "]";
    ExpPiece piece;
    piece.domain = decode_component(member(pieces[i], "domain", path), path + ".domain");
    const json& terms = member(pieces[i], "terms", path);
    if (!terms.is_object()) bad(path + ".terms", "expected an object");
    for (const auto& [key, value] : terms.items())
      piece.terms[key_to_long(key, path + ".terms")] = decode_piecewise_linear(value);
    f.pieces.push_back(std::move(piece));
  }
  return f;
}

GZElement decode_gz_element(const json& j) {
  GZElement e;
  const json& xi = member(j, "xi", "element");
  if (!xi.is_object()) bad("element.xi", "expected an object");
  for (const auto& [key, value] : xi.items()) {
    Int c = int_at(value, "element.xi." + key);
    if (c != 0) e.xi[key_to_long(key, "element.xi")] = c;
  }
  e.f = decode_exp_fn(member(j, "f", "element"));
  e.window = rat_at(member(j, "window", "element"), "element.window");
  if (e.window <= 0) bad("element.window", "window must be positive");
  return e;
}

BundleSpec decode_bundle(const json& j) {
  BundleSpec b{decode_closed_set(member(j, "F", "bundle"))};
  b.validate();
  return b;
}

}  // namespace riesz::cli
