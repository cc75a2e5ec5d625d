#pragma once

#include <vector>

#include "json.hpp"
#include "riesz/closed_set.hpp"
#include "riesz/kms_bundle.hpp"
#include "riesz/lattice.hpp"
#include "riesz/laurent.hpp"
#include "riesz/ordered_group.hpp"
#include "riesz/piecewise_linear.hpp"
#include "riesz/rational.hpp"
#include "riesz/supernatural.hpp"

namespace riesz::cli {

using nlohmann::json;

// Every numeric value is carried as an exact decimal or "p/q" string;
// certified enclosures are ["lo", "hi"] endpoint pairs. Structural counts
// (ranks, sizes, windows) stay plain JSON integers.

json encode(const Rat& r);
json encode(const Int& z);
json encode(const std::vector<Rat>& v);
json encode(const QInterval& v);
json encode(const Supernatural& n);
json encode(const SubgroupPresentation& h);
json encode(const ConeSpec& c);
json encode(const OrderedGroupSpec& g);
json encode(const LaurentPoly& f);
json encode(const ClosedSetR& s);
json encode(const PiecewiseLinear& p);
json encode(const PiecewiseExpFn& f);
json encode(const GZElement& e);
json encode(const BundleSpec& b);

// result types, emitted into reports but never read back
json encode(const QuotientInvariants& q);
json encode(const UnperforationResult& r);
json encode(const DimensionDropReport& r);
json encode(const UnboundedObstruction& o);
json encode(const PositivityWitness& w);
json encode(const PositivityResult& r);
json encode(const ElementPositivityResult& r);
json encode(const ExpPolyValue& v);
json encode(const KernelImageReport& r);
json encode(const K0CokernelResult& r);
json encode(const SimplicityProbe& p);

// Decoders throw error(errc::parse) naming the offending path. Shape checks
// of the decoded value (validate, constructor preconditions) run before
// returning, so a successful decode is usable as-is.
Rat decode_rat(const json& j);
Int decode_int(const json& j);
std::vector<Rat> decode_rat_vector(const json& j);
Supernatural decode_supernatural(const json& j);
SubgroupPresentation decode_subgroup(const json& j);
ConeSpec decode_cone(const json& j);
OrderedGroupSpec decode_group(const json& j);
LaurentPoly decode_laurent(const json& j);
ClosedSetR decode_closed_set(const json& j);
PiecewiseLinear decode_piecewise_linear(const json& j);
PiecewiseExpFn decode_exp_fn(const json& j);
GZElement decode_gz_element(const json& j);
BundleSpec decode_bundle(const json& j);

}  // namespace riesz::cli
