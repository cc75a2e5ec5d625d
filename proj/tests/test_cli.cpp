#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "doctest.h"
#include "riesz/error.hpp"
#include "riesz_cli/commands.hpp"
#include "riesz_cli/json_io.hpp"

using namespace riesz;
using namespace riesz::cli;
using nlohmann::json;

namespace {

Rat q(const std::string& s) { return rat_from_string(s); }

std::vector<Rat> rv(const std::vector<std::string>& ss) { return rat_vector_from_strings(ss); }

Supernatural two_inf() { return Supernatural::prime_power(Int(2), Supernatural::kInf); }
Supernatural three_inf() { return Supernatural::prime_power(Int(3), Supernatural::kInf); }

// Validates against the subset of JSON Schema the shipped schema uses:
// type, enum, required, properties, additionalProperties, items, pattern,
// minLength. An empty schema accepts anything.
bool schema_valid(const json& schema, const json& value) {
  if (schema.contains("enum")) {
    bool any = false;
    for (const auto& e : schema["enum"]) any = any || e == value;
    if (!any) return false;
  }
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    if (t == "object" && !value.is_object()) return false;
    if (t == "array" && !value.is_array()) return false;
    if (t == "string" && !value.is_string()) return false;
    if (t == "integer" && !value.is_number_integer()) return false;
    if (t == "boolean" && !value.is_boolean()) return false;
    if (t == "null" && !value.is_null()) return false;
  }
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (schema.contains("minLength") && s.size() < schema["minLength"].get<std::size_t>())
      return false;
    if (schema.contains("pattern") &&
        !std::regex_search(s, std::regex(schema["pattern"].get<std::string>())))
      return false;
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& k : schema["required"])
        if (!value.contains(k.get<std::string>())) return false;
    const json props = schema.value("properties", json::object());
    const bool extra_ok = schema.value("additionalProperties", json(true)) != json(false);
    for (const auto& [k, v] : value.items()) {
      if (props.contains(k)) {
        if (!schema_valid(props[k], v)) return false;
      } else if (!extra_ok) {
        return false;
      }
    }
  }
  if (value.is_array() && schema.contains("items"))
    for (const auto& e : value)
      if (!schema_valid(schema["items"], e)) return false;
  return true;
}

const json& report_schema() {
  static json schema = [] {
    std::ifstream in(RIESZ_SCHEMA_FILE);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
  }();
  return schema;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("riesz_cli_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const json& content) const {
    std::string p = (path / name).string();
    std::ofstream out(p);
    out << content.dump(2);
    return p;
  }
  std::string slot(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Runs the command with --output, checks the produced report against the
// shipped schema, and hands back (exit code, report).
std::pair<int, json> run_reported(const TempDir& dir, std::vector<std::string> args) {
  static int counter = 0;
  std::string out = dir.slot("report_" + std::to_string(counter++) + ".json");
  args.push_back("--output");
  args.push_back(out);
  int rc = run_command(args);
  json rep = json::parse(read_file(out));
  CHECK(schema_valid(report_schema(), rep));
  return {rc, rep};
}

const Check* find_check(const std::vector<Check>&, const std::string&) = delete;

json check_named(const json& report, const std::string& name) {
  for (const json& c : report["checks"])
    if (c["name"] == name) return c;
  FAIL("missing check ", name);
  return json();
}

GZElement unit_halfline() { return gz_unit(BundleSpec{ClosedSetR::ray_above(Rat(0))}); }

}  // namespace

TEST_CASE("rational and integer round trips") {
  for (const std::string& s : {"0", "1", "-7/3", "22/7", "-100000000000000000001"}) {
    CHECK(encode(q(s)) == json(s));
    CHECK(decode_rat(json(s)) == q(s));
  }
  CHECK(decode_rat(json("3/6")) == q("1/2"));  // parsing canonicalizes
  CHECK(decode_int(json("-42")) == Int(-42));
  CHECK(encode(Int(-42)) == json("-42"));

  CHECK_THROWS_AS(decode_rat(json("1/0")), error);
  CHECK_THROWS_AS(decode_rat(json(5)), error);
  CHECK_THROWS_AS(decode_rat(json("x")), error);
  CHECK_THROWS_AS(decode_int(json("1/2")), error);

  std::vector<Rat> v = rv({"1/2", "-3", "0"});
  CHECK(decode_rat_vector(encode(v)) == v);
}

TEST_CASE("supernatural round trips") {
  CHECK(encode(Supernatural::universal()) == json("universal"));
  CHECK(decode_supernatural(json("universal")).is_universal());

  Supernatural one;
  CHECK(decode_supernatural(encode(one)) == one);

  Supernatural mixed = Supernatural::from_factors({{Int(2), Supernatural::kInf}, {Int(3), 2}});
  json j = encode(mixed);
  CHECK(j["factors"]["2"] == json("inf"));
  CHECK(j["factors"]["3"] == json(2));
  CHECK(decode_supernatural(j) == mixed);

  CHECK_THROWS_AS(decode_supernatural(json{{"factors", json{{"4", 1}}}}), error);
  CHECK_THROWS_AS(decode_supernatural(json{{"factors", json{{"2", 0}}}}), error);
  CHECK_THROWS_AS(decode_supernatural(json("everything")), error);
}

TEST_CASE("lattice and group round trips") {
  SubgroupPresentation h =
      SubgroupPresentation::d_span(2, {rv({"1/2", "-1/2"}), rv({"1/2", "1/2"})}, three_inf());
  json jh = encode(h);
  SubgroupPresentation back = decode_subgroup(jh);
  CHECK(back.ambient_rank == h.ambient_rank);
  CHECK(back.generators == h.generators);
  CHECK(back.modulus == h.modulus);

  ConeSpec coord = ConeSpec::coordinatewise();
  CHECK(decode_cone(encode(coord)) == coord);
  ConeSpec half = ConeSpec::halfspaces({rv({"1", "1"}), rv({"1", "-1"})});
  CHECK(decode_cone(encode(half)) == half);
  ConeSpec expl = ConeSpec::integers_from(Int(3));
  CHECK(decode_cone(encode(expl)) == expl);

  OrderedGroupSpec g{h, half};
  json jg = encode(g);
  OrderedGroupSpec gback = decode_group(jg);
  CHECK(gback.carrier.generators == g.carrier.generators);
  CHECK(gback.cone == g.cone);

  // ragged generators fail the embedded validate
  json broken = jh;
  broken["generators"][0] = json::array({"1"});
  CHECK_THROWS_AS(decode_subgroup(broken), error);
  json badkind = encode(coord);
  badkind["kind"] = "mystery";
  CHECK_THROWS_AS(decode_cone(badkind), error);
}

TEST_CASE("laurent and closed set round trips") {
  LaurentPoly f({{-2, q("1/4")}, {0, q("-5")}, {3, q("7/2")}}, two_inf());
  CHECK(decode_laurent(encode(f)) == f);
  // a coefficient outside the ring fails the constructor during decode
  json outside = encode(f);
  outside["coeffs"]["1"] = "1/3";
  CHECK_THROWS_AS(decode_laurent(outside), error);
  LaurentPoly zero = LaurentPoly::zero(Supernatural::universal());
  CHECK(decode_laurent(encode(zero)) == zero);

  json jf = encode(f);
  jf["coeffs"]["x"] = "1";
  CHECK_THROWS_AS(decode_laurent(jf), error);

  for (const ClosedSetR& s :
       {ClosedSetR::empty(), ClosedSetR::whole_line(), ClosedSetR::point(q("1/2")),
        ClosedSetR::ray_below(Rat(0)).unite(ClosedSetR::interval(Rat(1), Rat(2))),
        ClosedSetR::ray_above(Rat(-3))}) {
    CHECK(decode_closed_set(encode(s)) == s);
  }
  CHECK(encode(ClosedSetR::whole_line()) ==
        json{{"components", json::array({json{{"lo", nullptr}, {"hi", nullptr}}})}});

  json badcomp{{"components", json::array({json{{"lo", "2"}, {"hi", "1"}}})}};
  CHECK_THROWS_AS(decode_closed_set(badcomp), error);
}

TEST_CASE("piecewise and element round trips") {
  PiecewiseLinear pl = PiecewiseLinear::from_points({{Rat(-1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(2), Rat(0)}});
  CHECK(decode_piecewise_linear(encode(pl)) == pl);
  CHECK_THROWS_AS(decode_piecewise_linear(json{{"points", json::array()}}), error);

  BundleSpec B{ClosedSetR::ray_above(Rat(0))};
  GZElement u = gz_unit(B);
  GZElement su = apply_sigma(u);
  GZElement d = u - su;
  for (const GZElement* e : {&u, &su, &d}) {
    GZElement back = decode_gz_element(encode(*e));
    CHECK(back == *e);
    validate_gz(B, back);
  }
  CHECK(decode_bundle(encode(B)).F == B.F);

  json je = encode(u);
  je["window"] = "0";
  CHECK_THROWS_AS(decode_gz_element(je), error);
  // zero xi entries are dropped on decode rather than kept
  json jz = encode(u);
  jz["xi"]["5"] = "0";
  CHECK(decode_gz_element(jz) == u);
}

TEST_CASE("report serialization and status aggregation") {
  CommandReport rep;
  rep.command = "probe";
  rep.checks.push_back({"a", "ok", nullptr});
  rep.finalize();
  CHECK(rep.status == "ok");
  CHECK(rep.exit_code() == 0);

  rep.checks.push_back({"b", "unknown", json{{"why", "depth"}}});
  rep.finalize();
  CHECK(rep.status == "unknown");
  CHECK(rep.exit_code() == 1);

  rep.checks.push_back({"c", "failed", nullptr});
  rep.finalize();
  CHECK(rep.status == "failed");
  CHECK(rep.exit_code() == 1);

  json j = rep.to_json();
  CHECK(schema_valid(report_schema(), j));
  CHECK(j["checks"].size() == 3);
  CHECK_FALSE(j["checks"][0].contains("detail"));
  CHECK(j["checks"][1]["detail"]["why"] == "depth");
  CHECK(j["timing_ms"].is_string());
}

TEST_CASE("schema validator rejects malformed reports") {
  const json& schema = report_schema();
  json good{{"command", "x"},
            {"status", "ok"},
            {"checks", json::array({json{{"name", "n"}, {"verdict", "ok"}}})},
            {"timing_ms", "12"}};
  CHECK(schema_valid(schema, good));

  json missing = good;
  missing.erase("status");
  CHECK_FALSE(schema_valid(schema, missing));

  json badverdict = good;
  badverdict["checks"][0]["verdict"] = "maybe";
  CHECK_FALSE(schema_valid(schema, badverdict));

  json fractional = good;
  fractional["timing_ms"] = "12.5";
  CHECK_FALSE(schema_valid(schema, fractional));

  json extra = good;
  extra["surprise"] = 1;
  CHECK_FALSE(schema_valid(schema, extra));

  json anonymous = good;
  anonymous["checks"][0].erase("name");
  CHECK_FALSE(schema_valid(schema, anonymous));
}

TEST_CASE("interpolate subcommand") {
  TempDir dir;
  auto poly = [](std::map<long, std::string> cs) {
    json coeffs = json::object();
    for (auto& [k, v] : cs) coeffs[std::to_string(k)] = v;
    return json{{"coeffs", coeffs}, {"modulus", "universal"}};
  };
  json halfline{{"components", json::array({json{{"lo", "0"}, {"hi", nullptr}}})}};

  SUBCASE("well ordered quadruple interpolates and validates") {
    std::string in = dir.file("in.json", json{{"set", halfline},
                                              {"p0", poly({{0, "-1"}, {1, "1"}})},
                                              {"p1", poly({{-1, "-1"}, {1, "1"}})},
                                              {"q0", poly({{0, "1"}, {1, "1"}})},
                                              {"q1", poly({{-1, "2"}, {1, "1"}})}});
    auto [rc, rep] = run_reported(dir, {"interpolate", "--input", in});
    CHECK(rc == 0);
    CHECK(rep["status"] == "ok");
    CHECK(rep["checks"].size() == 9);
    CHECK(check_named(rep, "interpolation")["detail"].contains("interpolant"));
  }

  SUBCASE("violated precondition fails the order checks") {
    std::string in = dir.file("in.json", json{{"set", halfline},
                                              {"p0", poly({{0, "1"}})},
                                              {"p1", poly({{0, "1"}})},
                                              {"q0", poly({{0, "0"}})},
                                              {"q1", poly({{0, "1"}})}});
    auto [rc, rep] = run_reported(dir, {"interpolate", "--input", in});
    CHECK(rc == 1);
    CHECK(rep["status"] == "failed");
    CHECK(check_named(rep, "order-p0-q0")["verdict"] == "failed");
  }

  SUBCASE("two-sided unbounded sets are rejected by the computation") {
    json whole{{"components", json::array({json{{"lo", nullptr}, {"hi", nullptr}}})}};
    std::string in = dir.file("in.json", json{{"set", whole},
                                              {"p0", poly({{0, "0"}})},
                                              {"p1", poly({{0, "0"}})},
                                              {"q0", poly({{0, "1"}})},
                                              {"q1", poly({{0, "1"}})}});
    auto [rc, rep] = run_reported(dir, {"interpolate", "--input", in});
    CHECK(rc == 1);
    CHECK(check_named(rep, "interpolation")["verdict"] == "failed");
    CHECK(check_named(rep, "interpolation")["detail"]["error"] == "not_semi_bounded");
  }
}

TEST_CASE("group subcommands") {
  TempDir dir;
  json diag_carrier{{"ambient_rank", 2},
                    {"generators", json::array({json::array({"1/2", "-1/2"}),
                                                json::array({"1/2", "1/2"})})},
                    {"modulus", json::object()}};
  json coord{{"kind", "coordinatewise"}};

  SUBCASE("check-rip finds the pinch point over the rationals") {
    json carrier = diag_carrier;
    carrier["modulus"] = "universal";
    std::string in = dir.file("in.json", json{{"group", json{{"carrier", carrier}, {"cone", coord}}},
                                              {"p0", json::array({"0", "0"})},
                                              {"p1", json::array({"1/2", "-1/2"})},
                                              {"q0", json::array({"1", "0"})},
                                              {"q1", json::array({"1/2", "1/2"})}});
    auto [rc, rep] = run_reported(dir, {"check-rip", "--input", in});
    CHECK(rc == 0);
    CHECK(check_named(rep, "interpolant-found")["detail"]["interpolant"] ==
          json::array({"1/2", "0"}));
  }

  SUBCASE("check-rip reports the blocked localization") {
    json carrier = diag_carrier;
    carrier["modulus"] = json{{"factors", json{{"3", "inf"}}}};
    std::string in = dir.file("in.json", json{{"group", json{{"carrier", carrier}, {"cone", coord}}},
                                              {"p0", json::array({"0", "0"})},
                                              {"p1", json::array({"1/2", "-1/2"})},
                                              {"q0", json::array({"1", "0"})},
                                              {"q1", json::array({"1/2", "1/2"})}});
    auto [rc, rep] = run_reported(dir, {"check-rip", "--input", in, "--window", "20"});
    CHECK(rc == 1);
    CHECK(rep["status"] == "failed");
    CHECK(check_named(rep, "interpolant-found")["verdict"] == "failed");
  }

  SUBCASE("check-unperforated splits on the cone") {
    json zgroup{{"carrier", json{{"ambient_rank", 1},
                                 {"generators", json::array({json::array({"1"})})},
                                 {"modulus", json::object()}}},
                {"cone", json{{"kind", "explicit_subset"},
                              {"members", json::array({"2"})},
                              {"saturation", "2"},
                              {"scale", json::object()}}}};
    std::string in = dir.file("in.json", json{{"group", zgroup}});
    auto [rc, rep] = run_reported(dir, {"check-unperforated", "--input", in});
    CHECK(rc == 1);
    CHECK(check_named(rep, "unperforated")["detail"]["kind"] == "false_with_witness");
    CHECK(check_named(rep, "unperforated")["detail"]["witness"] == json::array({"1"}));

    json plain = zgroup;
    plain["cone"] = coord;
    std::string in2 = dir.file("in2.json", json{{"group", plain}});
    auto [rc2, rep2] = run_reported(dir, {"check-unperforated", "--input", in2});
    CHECK(rc2 == 0);
    CHECK(rep2["status"] == "ok");
  }

  SUBCASE("dimension-drop-k0 certifies the pinched plane") {
    std::string in = dir.file("in.json",
                              json{{"group", json{{"carrier", diag_carrier}, {"cone", coord}}}});
    auto [rc, rep] = run_reported(dir, {"dimension-drop-k0", "--input", in});
    CHECK(rc == 0);
    CHECK(check_named(rep, "order-isomorphism")["verdict"] == "ok");
  }

  SUBCASE("matrix-dimension-range lists the level set") {
    std::string in = dir.file("in.json",
                              json{{"group", json{{"carrier", diag_carrier}, {"cone", coord}}},
                                   {"u", json::array({"1/2", "1/2"})},
                                   {"n", 2}});
    auto [rc, rep] = run_reported(dir, {"matrix-dimension-range", "--input", in, "--window", "6"});
    CHECK(rc == 0);
    json detail = check_named(rep, "level-computed")["detail"];
    CHECK(detail["count"].get<std::size_t>() == detail["elements"].size());
    json zero = json::array({"0", "0"});
    json unit = json::array({"1/2", "1/2"});
    bool has_zero = false, has_unit = false;
    for (const json& e : detail["elements"]) {
      has_zero = has_zero || e == zero;
      has_unit = has_unit || e == unit;
    }
    CHECK(has_zero);
    CHECK(has_unit);
  }
}

TEST_CASE("obstruction and pinched verification subcommands") {
  TempDir dir;

  auto [rc, rep] = run_reported(dir, {"verify-lemma21-converse", "--n", "5"});
  CHECK(rc == 0);
  CHECK(rep["status"] == "ok");
  CHECK(check_named(rep, "floor-matches-square")["detail"]["lower_required"] == "25/4");
  CHECK(check_named(rep, "infeasible")["detail"]["feasible"] == json(false));

  auto [rc2, rep2] = run_reported(dir, {"verify-remark33", "--p", "2", "--q", "3"});
  CHECK(rc2 == 0);
  CHECK(rep2["status"] == "ok");
  CHECK(rep2["checks"].size() == 4);
  CHECK(check_named(rep2, "interpolation-blocked-localized")["detail"]["pinch_point"] ==
        json::array({"1/2", "0"}));

  // swapped roles still verify: p = 3 blocked by the dyadic localization
  auto [rc3, rep3] = run_reported(dir, {"verify-remark33", "--p", "3", "--q", "2"});
  CHECK(rc3 == 0);
  CHECK(rep3["status"] == "ok");

  CHECK(run_command({"verify-remark33", "--p", "4", "--q", "3"}) == 2);
  CHECK(run_command({"verify-remark33", "--p", "3", "--q", "3"}) == 2);
  CHECK(run_command({"verify-lemma21-converse", "--n", "1"}) == 2);
}

TEST_CASE("kms subcommands") {
  TempDir dir;
  BundleSpec B{ClosedSetR::ray_above(Rat(0))};
  GZElement u = gz_unit(B);
  json bundle = encode(B);

  SUBCASE("verify-kernel resolves the unit difference") {
    json in_j{{"bundle", bundle},
              {"family", json::array({encode(u), encode(u - apply_sigma(u))})}};
    std::string in = dir.file("in.json", in_j);
    auto [rc, rep] = run_reported(dir, {"kms", "verify-kernel", "--input", in, "--window", "4"});
    CHECK(rc == 0);
    CHECK(rep["status"] == "ok");
    json detail = check_named(rep, "kernel-members-resolved")["detail"];
    CHECK(detail["subset_holds"] == json(true));
    CHECK(detail["unresolved_count"] == json(0));
    CHECK(detail["unit_added"] == json(false));
  }

  SUBCASE("k0 reports the cokernel invariants") {
    json in_j{{"bundle", bundle}, {"family", json::array({encode(u)})}};
    std::string in = dir.file("in.json", in_j);
    auto [rc, rep] = run_reported(dir, {"kms", "k0", "--input", in, "--window", "3"});
    CHECK(rc == 0);
    json detail = check_named(rep, "cokernel-computed")["detail"];
    CHECK(detail["free_rank"] == json(1));
    CHECK(detail["torsion"] == json::array());
    CHECK(detail["class_of_u"] == "1");
  }

  SUBCASE("states writes exact csv rows") {
    json in_j{{"bundle", bundle},
              {"element", encode(u)},
              {"betas", json::array({"0", "1", "1/2"})}};
    std::string in = dir.file("in.json", in_j);
    std::string csv = dir.slot("states.csv");
    auto [rc, rep] = run_reported(dir, {"kms", "states", "--input", in, "--csv", csv});
    CHECK(rc == 0);
    CHECK(rep["status"] == "ok");
    CHECK(check_named(rep, "covariance-spot-check")["verdict"] == "ok");
    CHECK(read_file(csv) == "beta,lower,upper\n0,1,1\n1,1,1\n1/2,1,1\n");
  }

  SUBCASE("states rejects beta outside the bundle") {
    json in_j{{"bundle", bundle},
              {"element", encode(u)},
              {"betas", json::array({"0", "-1"})}};
    std::string in = dir.file("in.json", in_j);
    std::string csv = dir.slot("states.csv");
    auto [rc, rep] = run_reported(dir, {"kms", "states", "--input", in, "--csv", csv});
    CHECK(rc == 1);
    CHECK(rep["status"] == "failed");
    CHECK(check_named(rep, "states-evaluated")["detail"]["error"] == "beta_outside_bundle");
  }

  SUBCASE("inconsistent elements are input errors") {
    json broken = encode(u);
    broken["xi"]["0"] = "2";  // function no longer matches the sequence
    json in_j{{"bundle", bundle}, {"family", json::array({broken})}};
    std::string in = dir.file("in.json", in_j);
    CHECK(run_command({"kms", "verify-kernel", "--input", in}) == 2);
  }
}

TEST_CASE("usage and parse errors exit 2") {
  TempDir dir;
  std::string bad = dir.slot("bad.json");
  {
    std::ofstream out(bad);
    out << "{broken";
  }
  CHECK(run_command({"kms", "k0", "--input", bad}) == 2);
  CHECK(run_command({"interpolate", "--input", dir.slot("missing.json")}) == 2);
  CHECK(run_command({"interpolate"}) == 2);         // --input required
  CHECK(run_command({"frobnicate"}) == 2);          // unknown subcommand
  CHECK(run_command({"--bogus"}) == 2);             // unknown flag
  CHECK(run_command({}) == 2);                      // no subcommand
  CHECK(run_command({"kms"}) == 2);                 // missing nested subcommand
  CHECK(run_command({"kms", "k0", "--input", bad, "--window", "-1"}) == 2);
  CHECK(run_command({"--help"}) == 0);

  std::string wrongshape = dir.file("shape.json", json{{"group", json{{"carrier", 5}}}});
  CHECK(run_command({"check-unperforated", "--input", wrongshape}) == 2);

  // a cone kind the decoder does not know
  std::string badkind = dir.file(
      "kind.json",
      json{{"group",
            json{{"carrier", json{{"ambient_rank", 1},
                                  {"generators", json::array({json::array({"1"})})},
                                  {"modulus", json::object()}}},
                 {"cone", json{{"kind", "mystery"}}}}}});
  CHECK(run_command({"check-unperforated", "--input", badkind}) == 2);
}

TEST_CASE("suite is deterministic modulo timing") {
  TempDir dir;
  auto [rc1, rep1] = run_reported(dir, {"suite"});
  auto [rc2, rep2] = run_reported(dir, {"suite"});
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  CHECK(rep1["status"] == "ok");
  for (const json& c : rep1["checks"]) CHECK(c["verdict"] == "ok");
  rep1.erase("timing_ms");
  rep2.erase("timing_ms");
  CHECK(rep1.dump() == rep2.dump());
}
