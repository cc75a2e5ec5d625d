#include "riesz/lattice.hpp"

#include <algorithm>

#include "riesz/error.hpp"

namespace riesz {

namespace {

struct Scaled {
  IntegerMatrix mat;  // scale * generators, row per generator
  Int scale = 1;
};

Scaled integerize(const std::vector<std::vector<Rat>>& gens, std::size_t k) {
  Scaled out;
  for (const auto& g : gens)
    for (const auto& x : g) out.scale = lcm(out.scale, x.get_den());
  out.mat = IntegerMatrix(gens.size(), k);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      Rat scaled = gens[i][j] * Rat(out.scale);
      out.mat.at(i, j) = scaled.get_num();  // denominator is 1 by choice of scale
    }
  }
  return out;
}

std::vector<Rat> row_times_matrix(const std::vector<Rat>& x, const IntegerMatrix& m) {
  std::vector<Rat> out(m.cols(), Rat(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += x[i] * Rat(m.at(i, j));
  }
  return out;
}

std::vector<Rat> scale_vector(const std::vector<Rat>& v, const Rat& c) {
  std::vector<Rat> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] * c;
  return out;
}

bool is_zero_vector(const std::vector<Rat>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

// Z-basis (as rational rows) of the Z-span; empty for the zero subgroup.
std::vector<std::vector<Rat>> basis_of(const std::vector<std::vector<Rat>>& gens, std::size_t k) {
  if (gens.empty()) return {};
  Scaled sc = integerize(gens, k);
  SmithResult snf = smith_normal_form(sc.mat);
  std::vector<std::vector<Rat>> basis;
  for (std::size_t i = 0; i < snf.rank; ++i) {
    std::vector<Rat> row(k);
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = Rat(snf.s.at(i, i) * snf.v.at(i, j), sc.scale);
      row[j].canonicalize();
    }
    basis.push_back(std::move(row));
  }
  return basis;
}

// Z-kernel of the stacked matrix [A; -B], reported as the A-part coefficient
// rows, yields generators of rowspanZ(A) n rowspanZ(B).
std::vector<std::vector<Rat>> z_span_intersection(const std::vector<std::vector<Rat>>& a,
                                                  const std::vector<std::vector<Rat>>& b,
                                                  std::size_t k) {
  if (a.empty() || b.empty()) return {};
  Int scale = 1;
  for (const auto& g : a)
    for (const auto& x : g) scale = lcm(scale, x.get_den());
  for (const auto& g : b)
    for (const auto& x : g) scale = lcm(scale, x.get_den());
  IntegerMatrix stacked(a.size() + b.size(), k);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < k; ++j) stacked.at(i, j) = Rat(a[i][j] * Rat(scale)).get_num();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < k; ++j)
      stacked.at(a.size() + i, j) = Rat(-b[i][j] * Rat(scale)).get_num();
  std::vector<std::vector<Int>> kernel = integer_kernel(stacked);
  std::vector<std::vector<Rat>> gens;
  for (const auto& y : kernel) {
    std::vector<Rat> x(k, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (y[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) x[j] += Rat(y[i]) * a[i][j];
    }
    if (!is_zero_vector(x)) gens.push_back(std::move(x));
  }
  return basis_of(gens, k);
}

// Columns of v_inv beyond the rank of m span { z : m * z^T = 0 } over Q.
// Returned as rows for convenience.
std::vector<std::vector<Int>> rational_kernel_columns(const IntegerMatrix& m) {
  SmithResult snf = smith_normal_form(m);
  std::vector<std::vector<Int>> cols;
  for (std::size_t j = snf.rank; j < m.cols(); ++j) {
    std::vector<Int> col(m.cols());
    for (std::size_t i = 0; i < m.cols(); ++i) col[i] = snf.v_inv.at(i, j);
    cols.push_back(std::move(col));
  }
  return cols;
}

// Generators of { x in rowspanZ(gens) : x . c = 0 for all constraint rows c }.
std::vector<std::vector<Rat>> span_meet_subspace(const std::vector<std::vector<Rat>>& gens,
                                                 const std::vector<std::vector<Int>>& constraints,
                                                 std::size_t k) {
  if (gens.empty()) return {};
  if (constraints.empty()) return basis_of(gens, k);
  Scaled sc = integerize(gens, k);
  // rows: generators, columns: one per constraint; entry = (scaled gen) . c
  IntegerMatrix prod(gens.size(), constraints.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t c = 0; c < constraints.size(); ++c) {
      Int dot = 0;
      for (std::size_t j = 0; j < k; ++j) dot += sc.mat.at(i, j) * constraints[c][j];
      prod.at(i, c) = dot;
    }
  }
  std::vector<std::vector<Int>> kernel = integer_kernel(prod);
  std::vector<std::vector<Rat>> out;
  for (const auto& y : kernel) {
    std::vector<Rat> x(k, Rat(0));
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (y[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) x[j] += Rat(y[i]) * gens[i][j];
    }
    if (!is_zero_vector(x)) out.push_back(std::move(x));
  }
  return basis_of(out, k);
}

// Largest invariant factor (the exponent) of big/small for Z-spans of equal
// rational rank with small <= big; 1 when they coincide or are zero.
Int quotient_exponent(const std::vector<std::vector<Rat>>& small,
                      const std::vector<std::vector<Rat>>& big, std::size_t k) {
  std::vector<std::vector<Rat>> basis = basis_of(big, k);
  if (basis.empty()) return 1;
  SubgroupPresentation basis_group = SubgroupPresentation::z_span(k, basis);
  IntegerMatrix coeffs(small.size(), basis.size());
  for (std::size_t i = 0; i < small.size(); ++i) {
    auto x = solve_rational_combination(small[i], basis_group);
    if (!x) fail(errc::inconsistent, "quotient_exponent: generator outside the larger span");
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if ((*x)[j].get_den() != 1)
        fail(errc::inconsistent, "quotient_exponent: non-integral coefficient");
      coeffs.at(i, j) = (*x)[j].get_num();
    }
  }
  SmithResult snf = smith_normal_form(coeffs);
  if (snf.rank < basis.size())
    fail(errc::inconsistent, "quotient_exponent: infinite quotient");
  return snf.s.at(snf.rank - 1, snf.rank - 1);
}

}  // namespace

SubgroupPresentation SubgroupPresentation::z_span(std::size_t rank,
                                                  std::vector<std::vector<Rat>> gens) {
  SubgroupPresentation h;
  h.ambient_rank = rank;
  h.generators = std::move(gens);
  h.validate();
  return h;
}

SubgroupPresentation SubgroupPresentation::d_span(std::size_t rank,
                                                  std::vector<std::vector<Rat>> gens,
                                                  Supernatural modulus) {
  SubgroupPresentation h;
  h.ambient_rank = rank;
  h.generators = std::move(gens);
  h.modulus = std::move(modulus);
  h.validate();
  return h;
}

SubgroupPresentation SubgroupPresentation::full_integer_lattice(std::size_t rank) {
  std::vector<std::vector<Rat>> gens(rank, std::vector<Rat>(rank, Rat(0)));
  for (std::size_t i = 0; i < rank; ++i) gens[i][i] = 1;
  return z_span(rank, std::move(gens));
}

void SubgroupPresentation::validate() const {
  for (const auto& g : generators) {
    if (g.size() != ambient_rank)
      fail(errc::dimension_mismatch, "generator length does not match ambient rank");
  }
}

Int minimal_multiplier(const std::vector<Rat>& v, const SubgroupPresentation& h) {
  if (v.size() != h.ambient_rank)
    fail(errc::dimension_mismatch, "vector length does not match ambient rank");
  if (h.generators.empty()) return is_zero_vector(v) ? Int(1) : Int(0);
  Scaled sc = integerize(h.generators, h.ambient_rank);
  SmithResult snf = smith_normal_form(sc.mat);
  std::vector<Rat> w = scale_vector(v, Rat(sc.scale));
  std::vector<Rat> t = row_times_matrix(w, snf.v_inv);
  for (std::size_t j = snf.rank; j < h.ambient_rank; ++j) {
    if (t[j] != 0) return 0;
  }
  Int m = 1;
  for (std::size_t j = 0; j < snf.rank; ++j) {
    if (t[j] == 0) continue;
    // smallest m with m * t_j in d_j * Z
    Int need = snf.s.at(j, j) * t[j].get_den();
    m = lcm(m, need / gcd(t[j].get_num(), need));
  }
  return m;
}

bool subgroup_membership(const std::vector<Rat>& v, const SubgroupPresentation& h) {
  Int m = minimal_multiplier(v, h);
  if (m == 0) return false;
  return divides(m, h.modulus);
}

SubgroupPresentation subgroup_intersection(const SubgroupPresentation& h1,
                                           const SubgroupPresentation& h2) {
  if (h1.ambient_rank != h2.ambient_rank)
    fail(errc::dimension_mismatch, "intersection requires a common ambient rank");
  std::size_t k = h1.ambient_rank;

  if (h1.modulus == h2.modulus) {
    return SubgroupPresentation::d_span(
        k, z_span_intersection(h1.generators, h2.generators, k), h1.modulus);
  }
  if (!relatively_prime(h1.modulus, h2.modulus)) {
    fail(errc::incompatible_moduli,
         "moduli " + h1.modulus.str() + " and " + h2.modulus.str() +
             " are neither equal nor relatively prime");
  }

  // Coprime multipliers: an element with k1*x in L1, k2*x in L2 and
  // gcd(k1, k2) = 1 already lies in L1 + L2, so denominators are bounded by
  // the exponent of ((L1+L2) n W) over (Li n W), W the common rational span.
  if (h1.generators.empty() || h2.generators.empty())
    return SubgroupPresentation::z_span(k, {});

  Scaled sc1 = integerize(h1.generators, k);
  Scaled sc2 = integerize(h2.generators, k);
  std::vector<std::vector<Int>> ann1 = rational_kernel_columns(sc1.mat);
  std::vector<std::vector<Int>> ann2 = rational_kernel_columns(sc2.mat);
  std::vector<std::vector<Int>> ann_w = ann1;
  ann_w.insert(ann_w.end(), ann2.begin(), ann2.end());

  std::vector<std::vector<Rat>> l1w = span_meet_subspace(h1.generators, ann2, k);
  std::vector<std::vector<Rat>> l2w = span_meet_subspace(h2.generators, ann1, k);
  std::vector<std::vector<Rat>> sum = h1.generators;
  sum.insert(sum.end(), h2.generators.begin(), h2.generators.end());
  std::vector<std::vector<Rat>> mw = span_meet_subspace(sum, ann_w, k);

  Int d1 = compatible_part(quotient_exponent(l1w, mw, k), h1.modulus);
  Int d2 = compatible_part(quotient_exponent(l2w, mw, k), h2.modulus);

  std::vector<std::vector<Rat>> g1;
  for (const auto& g : h1.generators) g1.push_back(scale_vector(g, Rat(1, d1)));
  std::vector<std::vector<Rat>> g2;
  for (const auto& g : h2.generators) g2.push_back(scale_vector(g, Rat(1, d2)));
  return SubgroupPresentation::z_span(k, z_span_intersection(g1, g2, k));
}

QuotientInvariants quotient_invariants(const SubgroupPresentation& h,
                                       const SubgroupPresentation& g) {
  if (h.ambient_rank != g.ambient_rank)
    fail(errc::dimension_mismatch, "quotient requires a common ambient rank");
  if (!h.modulus.is_one() || !g.modulus.is_one())
    fail(errc::precondition, "quotient_invariants requires pure Z-spans");
  for (const auto& gen : h.generators) {
    if (!subgroup_membership(gen, g))
      fail(errc::not_a_subgroup, "a generator of the subgroup lies outside the larger group");
  }
  std::vector<std::vector<Rat>> basis = basis_of(g.generators, g.ambient_rank);
  QuotientInvariants out;
  if (basis.empty()) return out;  // G = 0, so H = 0 as well

  SubgroupPresentation basis_group = SubgroupPresentation::z_span(g.ambient_rank, basis);
  IntegerMatrix coeffs(h.generators.size(), basis.size());
  for (std::size_t i = 0; i < h.generators.size(); ++i) {
    auto x = solve_rational_combination(h.generators[i], basis_group);
    if (!x) fail(errc::inconsistent, "membership held but no rational expression found");
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if ((*x)[j].get_den() != 1)
        fail(errc::inconsistent, "membership held but coefficients are fractional");
      coeffs.at(i, j) = (*x)[j].get_num();
    }
  }
  SmithResult snf = smith_normal_form(coeffs);
  out.free_rank = basis.size() - snf.rank;
  for (std::size_t i = 0; i < snf.rank; ++i) {
    if (snf.s.at(i, i) != 1) out.torsion.push_back(snf.s.at(i, i));
  }
  return out;
}

std::vector<std::vector<Rat>> lattice_basis(const SubgroupPresentation& h) {
  return basis_of(h.generators, h.ambient_rank);
}

std::optional<std::vector<Int>> solve_integer_combination(const std::vector<Rat>& v,
                                                          const SubgroupPresentation& h) {
  if (v.size() != h.ambient_rank)
    fail(errc::dimension_mismatch, "vector length does not match ambient rank");
  if (h.generators.empty()) {
    if (is_zero_vector(v)) return std::vector<Int>{};
    return std::nullopt;
  }
  Scaled sc = integerize(h.generators, h.ambient_rank);
  SmithResult snf = smith_normal_form(sc.mat);
  std::vector<Rat> w = scale_vector(v, Rat(sc.scale));
  std::vector<Rat> t = row_times_matrix(w, snf.v_inv);
  std::size_t m = h.generators.size();
  std::vector<Int> z(m, Int(0));
  for (std::size_t j = 0; j < h.ambient_rank; ++j) {
    if (j < snf.rank) {
      if (t[j].get_den() != 1) return std::nullopt;
      Int q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), t[j].get_num().get_mpz_t(),
                  snf.s.at(j, j).get_mpz_t());
      if (r != 0) return std::nullopt;
      z[j] = q;
    } else if (t[j] != 0) {
      return std::nullopt;
    }
  }
  std::vector<Int> x(m, Int(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) x[j] += z[i] * snf.u_inv.at(i, j);
  return x;
}

std::optional<std::vector<Rat>> solve_rational_combination(const std::vector<Rat>& v,
                                                           const SubgroupPresentation& h) {
  if (v.size() != h.ambient_rank)
    fail(errc::dimension_mismatch, "vector length does not match ambient rank");
  if (h.generators.empty()) {
    if (is_zero_vector(v)) return std::vector<Rat>{};
    return std::nullopt;
  }
  Scaled sc = integerize(h.generators, h.ambient_rank);
  SmithResult snf = smith_normal_form(sc.mat);
  std::vector<Rat> w = scale_vector(v, Rat(sc.scale));
  std::vector<Rat> t = row_times_matrix(w, snf.v_inv);
  std::size_t m = h.generators.size();
  std::vector<Rat> z(m, Rat(0));
  for (std::size_t j = 0; j < h.ambient_rank; ++j) {
    if (j < snf.rank) {
      z[j] = t[j] / Rat(snf.s.at(j, j));
    } else if (t[j] != 0) {
      return std::nullopt;
    }
  }
  std::vector<Rat> x(m, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) x[j] += z[i] * Rat(snf.u_inv.at(i, j));
  return x;
}

std::vector<std::vector<Int>> integer_kernel(const IntegerMatrix& mat) {
  SmithResult snf = smith_normal_form(mat);
  std::vector<std::vector<Int>> rows;
  for (std::size_t i = snf.rank; i < mat.rows(); ++i) {
    std::vector<Int> y(mat.rows());
    for (std::size_t j = 0; j < mat.rows(); ++j) y[j] = snf.u_inv.at(i, j);
    rows.push_back(std::move(y));
  }
  return rows;
}

bool presentation_torsion_free(const IntegerMatrix& relations, std::size_t n_generators) {
  if (relations.cols() != n_generators)
    fail(errc::dimension_mismatch, "relation width does not match generator count");
  SmithResult snf = smith_normal_form(relations);
  for (std::size_t i = 0; i < snf.rank; ++i) {
    if (snf.s.at(i, i) != 1) return false;
  }
  return true;
}

bool subgroups_equal(const SubgroupPresentation& h1, const SubgroupPresentation& h2) {
  if (h1.ambient_rank != h2.ambient_rank) return false;
  if (!(h1.modulus == h2.modulus))
    fail(errc::incompatible_moduli, "subgroups_equal requires a common modulus");
  for (const auto& g : h1.generators) {
    if (!subgroup_membership(g, h2)) return false;
  }
  for (const auto& g : h2.generators) {
    if (!subgroup_membership(g, h1)) return false;
  }
  return true;
}

std::size_t rational_rank(const SubgroupPresentation& h) {
  if (h.generators.empty()) return 0;
  Scaled sc = integerize(h.generators, h.ambient_rank);
  return smith_normal_form(sc.mat).rank;
}

}  // namespace riesz
