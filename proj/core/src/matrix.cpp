#include "riesz/matrix.hpp"

#include <utility>

#include "riesz/error.hpp"

namespace riesz {

IntegerMatrix IntegerMatrix::identity(std::size_t n) {
  IntegerMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::transposed() const {
  IntegerMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.rows()) fail(errc::dimension_mismatch, "matrix product shape mismatch");
  IntegerMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
    }
  }
  return c;
}

std::vector<Int> SmithResult::invariant_factors() const {
  std::vector<Int> d;
  for (std::size_t i = 0; i < rank; ++i) d.push_back(s.at(i, i));
  return d;
}

namespace {

// All operations keep the invariant a = u * s * v by applying the inverse of
// each elementary step to u (resp. v) and the step itself to u_inv (v_inv).
struct Worker {
  SmithResult r;
  std::size_t m, n;

  explicit Worker(const IntegerMatrix& a) : m(a.rows()), n(a.cols()) {
    r.s = a;
    r.u = IntegerMatrix::identity(m);
    r.u_inv = r.u;
    r.v = IntegerMatrix::identity(n);
    r.v_inv = r.v;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < n; ++c) std::swap(r.s.at(i, c), r.s.at(j, c));
    for (std::size_t k = 0; k < m; ++k) std::swap(r.u.at(k, i), r.u.at(k, j));
    for (std::size_t c = 0; c < m; ++c) std::swap(r.u_inv.at(i, c), r.u_inv.at(j, c));
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < m; ++k) std::swap(r.s.at(k, i), r.s.at(k, j));
    for (std::size_t c = 0; c < n; ++c) std::swap(r.v.at(i, c), r.v.at(j, c));
    for (std::size_t k = 0; k < n; ++k) std::swap(r.v_inv.at(k, i), r.v_inv.at(k, j));
  }

  // row i += k * row j
  void add_row(std::size_t i, std::size_t j, const Int& k) {
    if (k == 0) return;
    for (std::size_t c = 0; c < n; ++c) r.s.at(i, c) += k * r.s.at(j, c);
    for (std::size_t c = 0; c < m; ++c) r.u.at(c, j) -= k * r.u.at(c, i);
    for (std::size_t c = 0; c < m; ++c) r.u_inv.at(i, c) += k * r.u_inv.at(j, c);
  }

  // col j += k * col i
  void add_col(std::size_t j, std::size_t i, const Int& k) {
    if (k == 0) return;
    for (std::size_t c = 0; c < m; ++c) r.s.at(c, j) += k * r.s.at(c, i);
    for (std::size_t c = 0; c < n; ++c) r.v.at(i, c) -= k * r.v.at(j, c);
    for (std::size_t c = 0; c < n; ++c) r.v_inv.at(c, j) += k * r.v_inv.at(c, i);
  }

  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < n; ++c) r.s.at(i, c) = -r.s.at(i, c);
    for (std::size_t c = 0; c < m; ++c) r.u.at(c, i) = -r.u.at(c, i);
    for (std::size_t c = 0; c < m; ++c) r.u_inv.at(i, c) = -r.u_inv.at(i, c);
  }

  bool find_min_pivot(std::size_t t, std::size_t* pi, std::size_t* pj) const {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < m; ++i) {
      for (std::size_t j = t; j < n; ++j) {
        const Int& x = r.s.at(i, j);
        if (x == 0) continue;
        Int ax = ::abs(x);
        if (!found || ax < best) {
          found = true;
          best = ax;
          *pi = i;
          *pj = j;
        }
      }
    }
    return found;
  }

  static Int nearest_quotient(const Int& a, const Int& b) {
    Rat q(a, b);
    q.canonicalize();
    return round_rat(q);
  }

  void run() {
    std::size_t t = 0;
    while (t < m && t < n) {
      std::size_t pi = t, pj = t;
      if (!find_min_pivot(t, &pi, &pj)) break;
      swap_rows(t, pi);
      swap_cols(t, pj);

      for (;;) {
        // Reduce the pivot column, re-pivoting on any nonzero remainder
        // (which is strictly smaller in absolute value, so this terminates).
        bool dirty = false;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (r.s.at(i, t) == 0) continue;
          Int q = nearest_quotient(r.s.at(i, t), r.s.at(t, t));
          add_row(i, t, -q);
          if (r.s.at(i, t) != 0) {
            swap_rows(t, i);
            dirty = true;
          }
        }
        if (dirty) continue;
        for (std::size_t j = t + 1; j < n; ++j) {
          if (r.s.at(t, j) == 0) continue;
          Int q = nearest_quotient(r.s.at(t, j), r.s.at(t, t));
          add_col(j, t, -q);
          if (r.s.at(t, j) != 0) {
            swap_cols(t, j);
            dirty = true;
          }
        }
        if (dirty) continue;

        // Pivot now owns its row and column. Fold in any entry of the
        // remaining block that the pivot does not divide yet.
        bool divisible = true;
        for (std::size_t i = t + 1; i < m && divisible; ++i) {
          for (std::size_t j = t + 1; j < n && divisible; ++j) {
            if (!mpz_divisible_p(r.s.at(i, j).get_mpz_t(), r.s.at(t, t).get_mpz_t())) {
              add_row(t, i, Int(1));
              divisible = false;
            }
          }
        }
        if (divisible) break;
      }

      if (r.s.at(t, t) < 0) negate_row(t);
      ++t;
    }
    r.rank = t;
  }
};

}  // namespace

SmithResult smith_normal_form(const IntegerMatrix& a) {
  Worker w(a);
  w.run();
  return std::move(w.r);
}

Int determinant(const IntegerMatrix& a) {
  if (a.rows() != a.cols()) fail(errc::dimension_mismatch, "determinant of non-square matrix");
  std::size_t n = a.rows();
  if (n == 0) return 1;
  IntegerMatrix mat = a;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (mat.at(k, k) == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && mat.at(pivot, k) == 0) ++pivot;
      if (pivot == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(mat.at(k, j), mat.at(pivot, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = mat.at(i, j) * mat.at(k, k) - mat.at(i, k) * mat.at(k, j);
        mpz_divexact(mat.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      mat.at(i, k) = 0;
    }
    prev = mat.at(k, k);
  }
  return sign * mat.at(n - 1, n - 1);
}

}  // namespace riesz
