#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flatext/errors.hpp"
#include "flatext/matrix.hpp"
#include "flatext/monomial.hpp"
#include "flatext/rational.hpp"

namespace flatext {

// A truncated moment sequence: the index set C plus exact values for every
// monomial of C+ * C+. Extra input moments are dropped and remembered so the
// CLI can warn about them.
struct MomentSequence {
  int n = 0;
  MonomialSet index_set;  // C
  MonomialSet cplus;      // C+
  MonomialSet support;    // C+ * C+
  std::map<Monomial, Rational, GrlexLess> values;
  std::vector<Monomial> ignored;

  static MomentSequence build(int n, MonomialSet c,
                              const std::map<Monomial, Rational, GrlexLess>& given) {
    MomentSequence y;
    y.n = n;
    y.index_set = std::move(c);
    y.cplus = closure(y.index_set);
    y.support = product_set(y.cplus, y.cplus);
    std::vector<std::vector<int>> absent;
    for (const auto& m : y.support) {
      auto it = given.find(m);
      if (it == given.end())
        absent.push_back(m.exponents);
      else
        y.values.emplace(m, it->second);
    }
    if (!absent.empty()) {
      std::string msg = "missing moments for " + std::to_string(absent.size()) +
                        " monomial(s) of C+*C+, first absent: ";
      msg += monomial_to_string(Monomial(absent.front()));
      throw MissingMomentError(std::move(msg), std::move(absent));
    }
    for (const auto& [m, v] : given)
      if (!y.support.contains(m)) y.ignored.push_back(m);
    return y;
  }

  const Rational& value(const Monomial& m) const {
    auto it = values.find(m);
    if (it == values.end())
      throw MissingMomentError("moment not in support: " + monomial_to_string(m),
                               {m.exponents});
    return it->second;
  }
};

struct HankelView {
  MonomialSet row_labels;
  MonomialSet col_labels;
  RatMatrix matrix;
};

// Matrix (y_{rc}) for r in R, c in Col. The generalized-Hankel property holds
// by construction with map storage; a missing product raises MissingMoment.
inline HankelView assemble(const MomentSequence& y, const MonomialSet& r, const MonomialSet& col) {
  HankelView view;
  view.row_labels = r;
  view.col_labels = col;
  view.matrix = RatMatrix(r.size(), col.size());
  std::vector<std::vector<int>> absent;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < col.size(); ++j) {
      const Monomial prod = r[i].times(col[j]);
      auto it = y.values.find(prod);
      if (it == y.values.end()) {
        absent.push_back(prod.exponents);
        continue;
      }
      view.matrix.at(i, j) = it->second;
    }
  if (!absent.empty())
    throw MissingMomentError("moment matrix needs moments outside the sequence support",
                             std::move(absent));
  view.matrix.row_labels = r.members;
  view.matrix.col_labels = col.members;
  return view;
}

struct BasisSelection {
  MonomialSet basis;
  bool zero_form = false;
};

// Greedy grlex column basis of H^{C+} restricted to columns indexed by C.
// Keeps 1 whenever its column is nonzero (1 is grlex-minimal, so the greedy
// scan sees it first). Under flatness a zero column of 1 forces the zero
// form; if the matrix is nonzero anyway that contradicts the theory and is
// surfaced rather than silently worked around.
inline BasisSelection select_basis(const MomentSequence& y) {
  const HankelView h = assemble(y, y.cplus, y.cplus);
  BasisSelection out;
  const Monomial one = Monomial::unit(y.n);
  if (y.index_set.contains(one)) {
    const auto unit_col = h.matrix.column(*y.cplus.index_of(one));
    const bool unit_col_zero =
        std::all_of(unit_col.begin(), unit_col.end(), [](const Rational& v) { return v == 0; });
    if (unit_col_zero) {
      if (h.matrix.is_zero()) {
        out.zero_form = true;
        out.basis = MonomialSet(y.n, {});
        return out;
      }
      const HankelView hc = assemble(y, y.index_set, y.index_set);
      if (rank(hc.matrix) == rank(h.matrix))
        throw ZeroFormDetectedError(
            "column of 1 vanishes on a flat nonzero moment matrix; "
            "input contradicts the zero-form argument");
      // Non-flat input: fall through and report a basis without 1.
    }
  }
  std::vector<std::size_t> scan;
  for (const auto& m : y.index_set) scan.push_back(*y.cplus.index_of(m));
  const auto kept = greedy_column_basis(h.matrix, scan);
  std::vector<Monomial> members;
  for (std::size_t idx : kept) members.push_back(y.cplus[idx]);
  out.basis = MonomialSet(y.n, std::move(members));
  return out;
}

struct FlatnessReport {
  bool connected = false;
  std::size_t rank_C = 0;
  std::size_t rank_Cplus = 0;
  bool flat = false;
  bool zero_form = false;
  MonomialSet basis;
  std::vector<std::vector<Rational>> kernel_Cplus;  // coefficient vectors over C+
};

inline FlatnessReport check_flat(const MomentSequence& y) {
  FlatnessReport report;
  report.connected = is_connected_to_one(y.index_set).connected;
  const HankelView hc = assemble(y, y.index_set, y.index_set);
  const HankelView hcp = assemble(y, y.cplus, y.cplus);
  report.rank_C = rank(hc.matrix);
  report.rank_Cplus = rank(hcp.matrix);
  report.flat = report.rank_C == report.rank_Cplus;
  const BasisSelection sel = select_basis(y);
  report.basis = sel.basis;
  report.zero_form = sel.zero_form;
  report.kernel_Cplus = kernel_basis(hcp.matrix);
  return report;
}

// Evaluates Lambda(q * p) for a polynomial p given as coefficients over C+.
inline Rational apply_form(const MomentSequence& y, const Monomial& q,
                           const std::vector<Rational>& p_over_cplus) {
  Rational s = 0;
  for (std::size_t j = 0; j < y.cplus.size(); ++j)
    if (p_over_cplus[j] != 0) s += p_over_cplus[j] * y.value(q.times(y.cplus[j]));
  return s;
}

// Checks the two kernel observations for a single polynomial p over C+:
// Lambda(ap) vanishing over a in C is equivalent to vanishing over all of C+,
// and when p is in the kernel, so is every shift xi*p that stays inside <C+>.
inline bool verify_kernel_conditions(const MomentSequence& y,
                                     const std::vector<Rational>& p_over_cplus) {
  bool zero_on_C = true;
  for (const auto& a : y.index_set)
    if (apply_form(y, a, p_over_cplus) != 0) {
      zero_on_C = false;
      break;
    }
  bool zero_on_Cplus = true;
  for (const auto& a : y.cplus)
    if (apply_form(y, a, p_over_cplus) != 0) {
      zero_on_Cplus = false;
      break;
    }
  if (zero_on_C != zero_on_Cplus) return false;
  if (!zero_on_Cplus) return true;
  // p is in ker H^{C+}; check each admissible shift.
  for (int i = 0; i < y.n; ++i) {
    std::vector<Rational> shifted(y.cplus.size(), Rational(0));
    bool inside = true;
    for (std::size_t j = 0; j < y.cplus.size() && inside; ++j) {
      if (p_over_cplus[j] == 0) continue;
      const auto idx = y.cplus.index_of(y.cplus[j].times_var(i));
      if (!idx)
        inside = false;
      else
        shifted[*idx] += p_over_cplus[j];
    }
    if (!inside) continue;  // xi*p leaves <C+>; the implication is vacuous
    for (const auto& a : y.cplus)
      if (apply_form(y, a, shifted) != 0) return false;
  }
  return true;
}

// Basis-free flatness equivalences: the span condition <C+> = <C> + ker H^{C+}
// holds iff every border column lies in the span of the C-columns, and the
// kernel condition ker H^C = ker H^{C+} cap <C> holds iff the C-columns carry
// no more relations over rows C than over rows C+. Both are rank comparisons
// against the rectangular block (rows C+, columns C).
inline bool check_sigma_equivalences(const MomentSequence& y) {
  const HankelView hcp = assemble(y, y.cplus, y.cplus);
  std::vector<std::size_t> c_cols;
  for (const auto& m : y.index_set) c_cols.push_back(*y.cplus.index_of(m));
  const RatMatrix rect = hcp.matrix.select_columns(c_cols);
  const std::size_t rank_rect = rank(rect);

  bool span_condition = true;
  for (const auto& m : border(y.index_set)) {
    const auto col = hcp.matrix.column(*y.cplus.index_of(m));
    if (!solve_in_span(rect, col)) {
      span_condition = false;
      break;
    }
  }
  const HankelView hc = assemble(y, y.index_set, y.index_set);
  const bool kernel_condition = rank(hc.matrix) == rank_rect;
  return span_condition && kernel_condition;
}

}  // namespace flatext
