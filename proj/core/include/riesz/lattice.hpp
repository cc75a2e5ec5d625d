#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "riesz/matrix.hpp"
#include "riesz/supernatural.hpp"

namespace riesz {

// D_n-span of finitely many rational vectors inside Q^k. modulus 1 is a plain
// Z-span, the universal modulus gives the Q-span.
struct SubgroupPresentation {
  std::size_t ambient_rank = 0;
  std::vector<std::vector<Rat>> generators;
  Supernatural modulus;

  static SubgroupPresentation z_span(std::size_t rank, std::vector<std::vector<Rat>> gens);
  static SubgroupPresentation d_span(std::size_t rank, std::vector<std::vector<Rat>> gens,
                                     Supernatural modulus);
  // Standard basis of Z^k.
  static SubgroupPresentation full_integer_lattice(std::size_t rank);

  void validate() const;  // shape checks, throws error(errc::dimension_mismatch)
};

// Smallest m >= 1 with m*v in the Z-span of the generators, or 0 when v is
// not even in the Q-span. The modulus of h is ignored here.
Int minimal_multiplier(const std::vector<Rat>& v, const SubgroupPresentation& h);

// v in D_modulus-span(generators): the minimal multiplier must divide the
// modulus. Exact for every modulus, no search.
bool subgroup_membership(const std::vector<Rat>& v, const SubgroupPresentation& h);

// Intersection of two presented subgroups of the same ambient Q^k.
// Supported moduli: equal (localization commutes with intersection), or
// relatively prime supports (the intersection is a plain Z-span; multipliers
// with coprime supports force elements into the unlocalized lattices).
// Anything else throws error(errc::incompatible_moduli).
SubgroupPresentation subgroup_intersection(const SubgroupPresentation& h1,
                                           const SubgroupPresentation& h2);

struct QuotientInvariants {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1, each dividing the next

  friend bool operator==(const QuotientInvariants&, const QuotientInvariants&) = default;
};

// Invariants of G/H for pure Z-spans H <= G; membership of every generator of
// H in G is verified first (error(errc::not_a_subgroup) otherwise).
QuotientInvariants quotient_invariants(const SubgroupPresentation& h,
                                       const SubgroupPresentation& g);

// A Z-basis of the Z-span of the generators (empty for the zero subgroup).
std::vector<std::vector<Rat>> lattice_basis(const SubgroupPresentation& h);

// Integer row vector x with x * generators = v, if one exists.
std::optional<std::vector<Int>> solve_integer_combination(const std::vector<Rat>& v,
                                                          const SubgroupPresentation& h);

// Rational solution of x * generators = v, if v lies in the Q-span.
std::optional<std::vector<Rat>> solve_rational_combination(const std::vector<Rat>& v,
                                                           const SubgroupPresentation& h);

// Z-basis of { y in Z^m : y * mat = 0 } as rows.
std::vector<std::vector<Int>> integer_kernel(const IntegerMatrix& mat);

// Is Z^n_generators / rowspan(relations) torsion-free?
bool presentation_torsion_free(const IntegerMatrix& relations, std::size_t n_generators);

// Equality of the underlying sets (membership of each generator both ways,
// honoring moduli).
bool subgroups_equal(const SubgroupPresentation& h1, const SubgroupPresentation& h2);

std::size_t rational_rank(const SubgroupPresentation& h);

}  // namespace riesz
