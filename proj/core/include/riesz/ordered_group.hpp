#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "riesz/lattice.hpp"
#include "riesz/supernatural.hpp"

namespace riesz {

// Positive region of an ordered subgroup of Q^k. The cone of the group is
// always the carrier intersected with the region described here.
struct ConeSpec {
  enum class Kind { Coordinatewise, HalfspaceList, ExplicitSubset };

  Kind kind = Kind::Coordinatewise;

  // HalfspaceList: common nonnegativity locus of these functionals.
  std::vector<std::vector<Rat>> functionals;

  // ExplicitSubset, ambient rank 1 only: nonnegative D_scale-combinations of
  // the set  members u { n : n >= saturation } u {0}.  members are positive
  // integers; entries at or above the saturation bound are redundant.
  std::vector<Int> members;
  Int saturation = 0;
  Supernatural scale;  // 1 for the unlocalized cone

  static ConeSpec coordinatewise();
  static ConeSpec halfspaces(std::vector<std::vector<Rat>> functionals);
  // {0} u {g : g >= n} inside Z; n >= 1
  static ConeSpec integers_from(const Int& n);

  friend bool operator==(const ConeSpec&, const ConeSpec&) = default;
};

// Finitely generated partially ordered subgroup of Q^k. Elements are plain
// ambient vectors; the carrier fixes which vectors belong to the group.
struct OrderedGroupSpec {
  SubgroupPresentation carrier;
  ConeSpec cone;

  void validate() const;  // shape checks, throws error
};

// v lies in the carrier and in the cone region. Exact for every variant; the
// ExplicitSubset test searches divisors of the scale, no truncation.
bool cone_contains(const OrderedGroupSpec& g, const std::vector<Rat>& v);

// Every group element whose generator coefficients are fractions p/q with
// |p| <= window, 1 <= q <= window and q allowed by the carrier modulus.
// Deduplicated, sorted lexicographically.
std::vector<std::vector<Rat>> bounded_elements(const OrderedGroupSpec& g, long window);

// cone ∩ -cone = {0} over the windowed elements
bool partially_ordered_within(const OrderedGroupSpec& g, long window);

// The carrier embeds in Q^k, so its presentation (generators modulo their
// integer relation kernel) is torsion-free; the kernel is run through its
// Smith form anyway rather than asserted.
bool is_torsion_free(const OrderedGroupSpec& g);

struct UnperforationResult {
  enum class Kind { True, FalseWithWitness, TrueWithinWindow };

  Kind kind = Kind::True;
  std::vector<Rat> witness;  // FalseWithWitness: witness outside the cone...
  long multiple = 0;         // ...while multiple * witness is inside
};

// Coordinatewise and halfspace regions are cut by linear functionals, so
// n*g >= 0 forces g >= 0 and the answer is exactly True. Explicit cones get a
// witness search over the window instead.
UnperforationResult is_unperforated(const OrderedGroupSpec& g, long window);

// Same generators over the enlarged coefficient ring D_{modulus * m}; explicit
// cones are saturated by the same factor.
OrderedGroupSpec tensor_localize(const OrderedGroupSpec& g, const Supernatural& m);

// x in (D_p-span) ∩ (D_q-span) of g's generators, moduli taken on top of g's
// own. Coprime supports force the minimal multiplier of x into g itself.
// Throws error(errc::support_overlap) unless p and q are relatively prime.
bool localization_intersection_contains(const SubgroupPresentation& g, const Supernatural& p,
                                        const Supernatural& q, const std::vector<Rat>& x);

// Some a with p0, p1 <= a <= q0, q1, searched over the window after the exact
// shortcuts (a shared endpoint; the coordinatewise join). The four order
// preconditions are verified and a violation names the failing pair.
std::optional<std::vector<Rat>> riesz_interpolate_fg(const OrderedGroupSpec& g,
                                                     const std::vector<Rat>& p0,
                                                     const std::vector<Rat>& p1,
                                                     const std::vector<Rat>& q0,
                                                     const std::vector<Rat>& q1, long window);

// x0 + x1 = x with 0 <= xi <= ai, reduced to interpolation between
// {x - a1, 0} and {a0, x}. Preconditions: x, a0, a1 in the cone, x <= a0 + a1.
std::optional<std::pair<std::vector<Rat>, std::vector<Rat>>> riesz_decompose(
    const OrderedGroupSpec& g, const std::vector<Rat>& x, const std::vector<Rat>& a0,
    const std::vector<Rat>& a1, long window);

// All windowed cone elements below n*u, sorted lexicographically. u must lie
// in the cone.
std::vector<std::vector<Rat>> matrix_dimension_range_level(const OrderedGroupSpec& g,
                                                           const std::vector<Rat>& u, long n,
                                                           long window);

struct DimensionDropReport {
  bool generators_embed = false;  // every generator lies in the intersection
  bool carriers_agree = false;    // intersection equals the original carrier
  bool cone_agrees = false;       // localized cones cut the same positives
  std::size_t elements_checked = 0;

  bool order_isomorphism() const { return generators_embed && carriers_agree && cone_agrees; }
};

// Intersection of the localizations of g away from 2 and away from 3, inside
// the joint localization, together with a generator-by-generator check that
// g -> g embeds it order-isomorphically. Requires g torsion-free and
// unperforated (witness search over window 10); a perforation witness is a
// precondition failure.
std::pair<OrderedGroupSpec, DimensionDropReport> dimension_drop_k0(const OrderedGroupSpec& g);

// Smallest windowed subgroup containing the seeds that is hereditary
// (0 <= a <= b with b inside pulls a inside) and directed (pairs from the
// ideal get an upper bound inside, drawn from the window when needed).
// Returns a canonical basis presentation over g's modulus.
SubgroupPresentation order_ideal_closure(const OrderedGroupSpec& g,
                                         const std::vector<std::vector<Rat>>& seeds, long window);

}  // namespace riesz
