#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riesz/closed_set.hpp"
#include "riesz/interval.hpp"
#include "riesz/laurent.hpp"
#include "riesz/piecewise_linear.hpp"
#include "riesz/rational.hpp"

namespace riesz {

// Base space of a singleton-fiber bundle: a closed subset of the line that
// contains 0, identified with the bundle itself (the projection is the
// identity embedding).
struct BundleSpec {
  ClosedSetR F;

  void validate() const;  // 0 in F, nonempty
};

// Exact partition of unity psi_minus + psi_mid + psi_plus = 1 with prescribed
// plateaus: psi_minus is 1 on (-inf, -1/k], psi_mid is 1 on [-1/2k, 1/2k],
// psi_plus is 1 on [1/k, inf), and all three take values in [0, 1].
struct CutoffTriple {
  long k = 1;
  PiecewiseLinear psi_minus, psi_mid, psi_plus;

  // Ramps linearly between the plateaus; breakpoints exactly at +-1/k, +-1/2k.
  static CutoffTriple standard(long k);

  void validate() const;
};

// One covered component together with the exponential sum on it.
struct ExpPiece {
  ClosedSetR::Component domain;
  // exponent j -> coefficient function r_j; the piece is sum_j r_j(x) e^{jx}.
  // Identically-zero coefficients are dropped by normalization.
  std::map<long, PiecewiseLinear> terms;

  friend bool operator==(const ExpPiece&, const ExpPiece&) = default;
};

// Function on F given piecewise by finite sums sum_j r_j(x) e^{jx} with
// piecewise-linear rational r_j. Pieces must cover F; where two pieces share
// a boundary point, their normalized term lists must agree there.
struct PiecewiseExpFn {
  std::vector<ExpPiece> pieces;

  // The same term list on every component of F.
  static PiecewiseExpFn uniform(const ClosedSetR& F, std::map<long, PiecewiseLinear> terms);

  // Cover and boundary-agreement checks; throws error(errc::precondition).
  void validate_cover(const ClosedSetR& F) const;

  friend bool operator==(const PiecewiseExpFn&, const PiecewiseExpFn&) = default;
};

// A finitely supported integer sequence xi together with a function f on F
// that agrees with L(xi)(x) = sum_n xi_n e^{nx} term by term on the window
// F intersect (-window, window). The pair is the element xi (+) f; window > 0
// witnesses the matching condition.
struct GZElement {
  std::map<long, Int> xi;  // zero entries dropped
  PiecewiseExpFn f;
  Rat window;

  friend bool operator==(const GZElement&, const GZElement&) = default;
};

// L: coefficient sequences to exponential sums, L(xi) = sum_n xi_n e^{nx}.
LaurentPoly laurent_of_xi(const std::map<long, Int>& xi);

// The shift (sigma xi)_n = xi_{n+1}; satisfies L(shift_xi(xi)) = e^{-x} L(xi).
std::map<long, Int> shift_xi(const std::map<long, Int>& xi);

// Assembles h_minus * psi_minus + L(xi) * psi_mid + h_plus * psi_plus + g0
// restricted to F, with the standard cutoffs at stage k and window 1/2k.
// g0 must be compactly supported and vanish on the window: its support
// meeting (-1/2k, 1/2k) is error(errc::support_overlap).
GZElement make_gz_element(const BundleSpec& B, const LaurentPoly& h_minus,
                          const std::map<long, Int>& xi, const LaurentPoly& h_plus, long k,
                          const PiecewiseLinear& g0);

GZElement gz_zero(const BundleSpec& B);
GZElement gz_unit(const BundleSpec& B);  // xi = delta_0, f identically 1

// Re-checks the matching condition of e against B (term-by-term equality
// with L(xi) on the closure of F intersect (-window, window)) and the cover
// invariant. Throws error(errc::inconsistent) on violation.
void validate_gz(const BundleSpec& B, const GZElement& e);

// xi shifted, f multiplied by e^{-x} (exact exponent bookkeeping), window
// kept. apply_sigma_inverse is the exact inverse.
GZElement apply_sigma(const GZElement& e);
GZElement apply_sigma_inverse(const GZElement& e);

// Componentwise group operations; both operands must carry the same piece
// domains (error(errc::dimension_mismatch) otherwise). The window of a sum is
// the smaller of the two.
GZElement operator+(const GZElement& a, const GZElement& b);
GZElement operator-(const GZElement& a, const GZElement& b);
GZElement operator-(const GZElement& a);
GZElement gz_scale(const Int& c, const GZElement& a);

bool gz_is_zero(const GZElement& e);

// Equality as elements: same xi and same function on every piece domain
// (representation differences in the coefficient functions are quotiented
// out by comparing values).
bool gz_equal(const GZElement& a, const GZElement& b);

// sum_n xi_n; cross-checked against the exact value f(0), which must agree
// (error(errc::inconsistent) on a broken invariant).
Int sigma0(const GZElement& e);

struct ElementPositivityResult {
  enum class Kind { Positive, IsZero, NotPositive, Unknown };
  Kind kind = Kind::IsZero;
  // NotPositive: a point of F with a certified enclosure of f(point) whose
  // upper end is <= 0.
  std::optional<PositivityWitness> witness;
  // Unknown: width of the narrowest subinterval left undecided at the depth
  // limit.
  Rat resolution = 0;

  std::string str() const;
};

// Decides strict positivity of f on F. Pieces whose coefficients are constant
// reduce to the exact Laurent decision; genuinely mixed stretches use
// certified interval bisection, giving up with Unknown after `depth`
// halvings. f vanishing on part of F while nonzero elsewhere is NotPositive
// (witnessed by a zero of f in F).
ElementPositivityResult element_positive(const GZElement& e, const BundleSpec& B,
                                         long depth = 40);

// Value of an evaluation state: the exact symbolic sum_j c_j e^{j beta}
// together with a certified enclosure (exact at beta = 0).
class ExpPolyValue {
 public:
  ExpPolyValue() = default;
  ExpPolyValue(std::map<long, Rat> coeffs, Rat beta, const Rat& eps);

  const std::map<long, Rat>& coeffs() const { return coeffs_; }
  const Rat& beta() const { return beta_; }
  const QInterval& enclosure() const { return enclosure_; }

  void refine(const Rat& eps);  // recompute the enclosure to width <= eps

  // Exact rational value when one exists (beta = 0, or a single e^0 term).
  std::optional<Rat> exact() const;

  // e^{k beta} times this value, exact on the symbolic side.
  ExpPolyValue shifted(long k) const;

  // Same symbolic value (enclosures are allowed to differ in width).
  bool symbolically_equal(const ExpPolyValue& other) const;

  std::string str() const;

 private:
  std::map<long, Rat> coeffs_;  // zero coefficients dropped
  Rat beta_ = 0;
  QInterval enclosure_;
};

// f(beta) for beta in F; error(errc::beta_outside_bundle) otherwise.
// Satisfies evaluate_state(apply_sigma(e), beta) = e^{-beta} *
// evaluate_state(e, beta) symbolically, and equals sigma0(e) exactly at
// beta = 0.
ExpPolyValue evaluate_state(const GZElement& e, const Rat& beta, const BundleSpec& B,
                            const Rat& eps = Rat(1, 1 << 30));

// Kernel/image comparison for the endomorphism id - sigma against the
// coefficient-sum character, over the Z-span of `family` truncated at
// `window` sigma-steps.
struct KernelImageReport {
  long window = 0;
  // Exact checks sigma0((id - sigma) e) = 0 over sampled integer
  // combinations e of the family (generators included); subset_holds records
  // that none failed.
  long combinations_checked = 0;
  bool subset_holds = false;
  // The unit joins the preimage search span when the family lacks it.
  bool unit_added = false;

  struct Preimage {
    enum class Status { solved, not_in_kernel, unresolved };
    std::size_t family_index = 0;
    Int sigma0_value = 0;
    Status status = Status::unresolved;
    // When solved: g = (id - sigma) e' with e' = sum over (i, t) of
    // combination[i * (window + 1) + t] * sigma^t(base[i]), where base is the
    // family with the unit prepended when unit_added; verified by
    // reconstruction.
    std::vector<Int> combination;
  };
  std::vector<Preimage> preimages;

  std::size_t solved_count() const;
  std::size_t unresolved_count() const;
  // Every family member with coefficient sum 0 has a verified preimage.
  bool image_covers_kernel_members() const;
};

KernelImageReport verify_kernel_image(const std::vector<GZElement>& family, const BundleSpec& B,
                                      long window);

// Cokernel of id - sigma on the truncated module spanned by the family
// (extended to contain the unit and closed under sigma up to `window`), via
// Smith normal form of the relation matrix.
struct K0CokernelResult {
  long free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1
  // Image of the unit under the quotient map, normalized to be nonnegative;
  // meaningful when free_rank = 1 (0 otherwise).
  Int class_of_u = 0;
  std::size_t module_rank = 0;
  std::size_t relation_count = 0;

  friend bool operator==(const K0CokernelResult&, const K0CokernelResult&) = default;
};

K0CokernelResult k0_crossed_product(const std::vector<GZElement>& family, const BundleSpec& B,
                                    long window);

// Searches for n <= n_max, m <= m_max with m * sum_{|j| <= n} sigma^j(g) - u
// strictly positive, certifying that the sigma-invariant order ideal
// generated by g reaches the unit. Requires element_positive(g) = Positive
// (error(errc::precondition) otherwise).
struct SimplicityProbe {
  bool confirmed = false;
  long n = 0;
  long m = 0;
};

SimplicityProbe sigma_simplicity_probe(const GZElement& g, const BundleSpec& B, long n_max,
                                       long m_max, long depth = 40);

}  // namespace riesz
