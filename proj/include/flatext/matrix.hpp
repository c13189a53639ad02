#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "flatext/errors.hpp"
#include "flatext/monomial.hpp"
#include "flatext/rational.hpp"

namespace flatext {

// Dense matrix over Q. Row/column labels are optional monomial lists carried
// along so basis selection can report monomials instead of indices.
struct RatMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> entries;  // row-major
  std::vector<Monomial> row_labels;
  std::vector<Monomial> col_labels;

  RatMatrix() = default;
  RatMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}

  Rational& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

  static RatMatrix identity(std::size_t k) {
    RatMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) m.at(i, i) = 1;
    return m;
  }

  bool is_zero() const {
    for (const auto& e : entries)
      if (e != 0) return false;
    return true;
  }

  bool is_symmetric() const {
    if (rows != cols) return false;
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = i + 1; j < cols; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }

  std::vector<Rational> column(std::size_t j) const {
    std::vector<Rational> v(rows);
    for (std::size_t i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
  }

  std::vector<Rational> apply(const std::vector<Rational>& x) const {
    std::vector<Rational> y(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < cols; ++j)
        if (x[j] != 0) s += at(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  RatMatrix select_columns(const std::vector<std::size_t>& idx) const {
    RatMatrix out(rows, idx.size());
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) out.at(i, j) = at(i, idx[j]);
    out.row_labels = row_labels;
    if (!col_labels.empty())
      for (std::size_t j : idx) out.col_labels.push_back(col_labels[j]);
    return out;
  }

  bool operator==(const RatMatrix& other) const {
    return rows == other.rows && cols == other.cols && entries == other.entries;
  }
};

inline RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      if (a.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j)
        if (b.at(k, j) != 0) out.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return out;
}

struct RrefResult {
  RatMatrix reduced;
  std::vector<std::size_t> pivot_cols;
};

// Reduced row echelon form with the first-nonzero pivoting rule: columns are
// processed left to right and the first remaining row with a nonzero entry
// becomes the pivot. Deterministic, so kernels and solves are canonical.
inline RrefResult rref(RatMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < m.cols && pivot_row < m.rows; ++col) {
    std::size_t sel = pivot_row;
    while (sel < m.rows && m.at(sel, col) == 0) ++sel;
    if (sel == m.rows) continue;
    if (sel != pivot_row)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(pivot_row, j));
    const Rational inv = Rational(1) / m.at(pivot_row, col);
    for (std::size_t j = col; j < m.cols; ++j) m.at(pivot_row, j) *= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == pivot_row || m.at(i, col) == 0) continue;
      const Rational f = m.at(i, col);
      for (std::size_t j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(pivot_row, j);
    }
    pivots.push_back(col);
    ++pivot_row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivot_cols.size(); }

// Canonical right null space basis read off the RREF: one vector per free
// column, with the free coordinate set to 1.
inline std::vector<std::vector<Rational>> kernel_basis(const RatMatrix& m) {
  const RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (std::size_t p : r.pivot_cols) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols);
    v[free] = 1;
    for (std::size_t i = 0; i < r.pivot_cols.size(); ++i)
      v[r.pivot_cols[i]] = -r.reduced.at(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves A x = b when consistent, returning the canonical solution with all
// free variables set to 0. Empty optional means b is not in the column space.
inline std::optional<std::vector<Rational>> solve_in_span(const RatMatrix& a,
                                                          const std::vector<Rational>& b) {
  RatMatrix aug(a.rows, a.cols + 1);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols) = b[i];
  }
  const RrefResult r = rref(std::move(aug));
  if (!r.pivot_cols.empty() && r.pivot_cols.back() == a.cols) return std::nullopt;
  std::vector<Rational> x(a.cols);
  for (std::size_t i = 0; i < r.pivot_cols.size(); ++i) x[r.pivot_cols[i]] = r.reduced.at(i, a.cols);
  return x;
}

// Scans columns in the given order and keeps each column that is linearly
// independent of the kept set. Returns kept indices in scan order.
inline std::vector<std::size_t> greedy_column_basis(const RatMatrix& m,
                                                    const std::vector<std::size_t>& scan_order) {
  std::vector<std::size_t> kept;
  // Echelon forms of the kept columns, sorted by leading row so that one
  // reduction pass over them is a complete forward substitution.
  std::vector<std::pair<std::size_t, std::vector<Rational>>> echelon;
  for (std::size_t col : scan_order) {
    std::vector<Rational> v = m.column(col);
    for (const auto& [lead, w] : echelon) {
      if (v[lead] == 0) continue;
      const Rational f = v[lead] / w[lead];
      for (std::size_t i = lead; i < v.size(); ++i) v[i] -= f * w[i];
    }
    std::size_t lead = 0;
    while (lead < v.size() && v[lead] == 0) ++lead;
    if (lead == v.size()) continue;
    auto pos = std::lower_bound(echelon.begin(), echelon.end(), lead,
                                [](const auto& e, std::size_t l) { return e.first < l; });
    echelon.insert(pos, {lead, std::move(v)});
    kept.push_back(col);
  }
  return kept;
}

inline std::vector<std::size_t> greedy_column_basis(const RatMatrix& m) {
  std::vector<std::size_t> order(m.cols);
  std::iota(order.begin(), order.end(), 0);
  return greedy_column_basis(m, order);
}

// Exact PSD decision by symmetric elimination: repeatedly pivot on a positive
// diagonal entry; a negative diagonal entry refutes PSD, and once every
// remaining diagonal entry is zero the remaining block must vanish entirely.
inline bool is_psd(const RatMatrix& m) {
  if (!m.is_symmetric()) throw NotSymmetricError("is_psd requires a symmetric matrix");
  RatMatrix a = m;
  std::vector<bool> active(a.rows, true);
  for (;;) {
    std::size_t pivot = a.rows;
    for (std::size_t i = 0; i < a.rows; ++i) {
      if (!active[i]) continue;
      if (a.at(i, i) < 0) return false;
      if (a.at(i, i) > 0 && pivot == a.rows) pivot = i;
    }
    if (pivot == a.rows) {
      // All active diagonals are zero; PSD iff the active block is zero.
      for (std::size_t i = 0; i < a.rows; ++i) {
        if (!active[i]) continue;
        for (std::size_t j = 0; j < a.cols; ++j)
          if (active[j] && a.at(i, j) != 0) return false;
      }
      return true;
    }
    const Rational d = a.at(pivot, pivot);
    for (std::size_t i = 0; i < a.rows; ++i) {
      if (!active[i] || i == pivot || a.at(i, pivot) == 0) continue;
      const Rational f = a.at(i, pivot) / d;
      for (std::size_t j = 0; j < a.cols; ++j)
        if (active[j] && j != pivot) a.at(i, j) -= f * a.at(pivot, j);
    }
    active[pivot] = false;
  }
}

}  // namespace flatext
