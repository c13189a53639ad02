#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatext/errors.hpp"
#include "flatext/matrix.hpp"
#include "flatext/moment.hpp"
#include "flatext/monomial.hpp"
#include "flatext/rational.hpp"

namespace flatext {

// Border prebasis for B: each border monomial m of B rewrites to its
// projection pi(m), stored as coefficients over B. When built from a flat
// sequence, m - pi(m) lies in ker H^{C+} (verified at construction).
struct RewritingFamily {
  MonomialSet basis;
  bool contains_one = false;
  std::map<Monomial, std::vector<Rational>, GrlexLess> rules;
};

// The n multiplication-by-xi operators on <B>; column j holds the
// coefficients of xi * b_j after rewriting.
struct MultiplicationSystem {
  MonomialSet basis;
  std::vector<RatMatrix> operators;
};

struct CommutationWitness {
  bool commutes = true;
  int i = -1, j = -1;       // failing pair, when any
  RatMatrix difference;     // chi_i chi_j - chi_j chi_i for that pair
};

// Unique pi(p) in <B> with p - pi(p) in ker H^{C+}, computed by expressing
// the column H p over the columns of B. Fails exactly when the instance is
// not flat for this basis.
inline std::vector<Rational> project_pi(const MomentSequence& y, const MonomialSet& basis,
                                        const std::vector<Rational>& p_over_cplus) {
  const HankelView h = assemble(y, y.cplus, y.cplus);
  std::vector<std::size_t> basis_cols;
  for (const auto& b : basis) {
    auto idx = y.cplus.index_of(b);
    if (!idx) throw NotInSpanError("basis monomial outside C+: " + monomial_to_string(b));
    basis_cols.push_back(*idx);
  }
  const RatMatrix a = h.matrix.select_columns(basis_cols);
  const std::vector<Rational> rhs = h.matrix.apply(p_over_cplus);
  auto solution = solve_in_span(a, rhs);
  if (!solution)
    throw NotInSpanError("projection onto the basis failed; the sequence is not flat");
  return *solution;
}

inline std::vector<Rational> project_pi(const MomentSequence& y, const MonomialSet& basis,
                                        const Monomial& m) {
  std::vector<Rational> e(y.cplus.size(), Rational(0));
  auto idx = y.cplus.index_of(m);
  if (!idx) throw NotInSpanError("monomial outside C+: " + monomial_to_string(m));
  e[*idx] = 1;
  return project_pi(y, basis, e);
}

// F = { m - pi(m) | m in border(B) }, with every rule checked to lie in
// ker H^{C+} exactly.
inline RewritingFamily build_rewriting_family(const MomentSequence& y, const MonomialSet& basis) {
  RewritingFamily family;
  family.basis = basis;
  family.contains_one = basis.contains_unit();
  const HankelView h = assemble(y, y.cplus, y.cplus);
  for (const auto& m : border(basis)) {
    std::vector<Rational> rule = project_pi(y, basis, m);
    // f = m - pi(m) as a vector over C+; H f = 0 is observation (obs).
    std::vector<Rational> f(y.cplus.size(), Rational(0));
    f[*y.cplus.index_of(m)] = 1;
    for (std::size_t k = 0; k < basis.size(); ++k) f[*y.cplus.index_of(basis[k])] -= rule[k];
    for (const auto& v : h.matrix.apply(f))
      if (v != 0)
        throw NotInSpanError("rewriting rule for " + monomial_to_string(m) +
                             " is not in the Hankel kernel");
    family.rules.emplace(m, std::move(rule));
  }
  return family;
}

inline MultiplicationSystem build_multiplication_system(const RewritingFamily& family, int n) {
  MultiplicationSystem system;
  system.basis = family.basis;
  const std::size_t size = family.basis.size();
  system.operators.assign(n, RatMatrix(size, size));
  for (int i = 0; i < n; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const Monomial shifted = family.basis[j].times_var(i);
      if (auto idx = family.basis.index_of(shifted)) {
        system.operators[i].at(*idx, j) = 1;
        continue;
      }
      auto rule = family.rules.find(shifted);
      if (rule == family.rules.end())
        throw MissingRuleError("no rewriting rule for border monomial " +
                                   monomial_to_string(shifted),
                               shifted.exponents);
      for (std::size_t k = 0; k < size; ++k) system.operators[i].at(k, j) = rule->second[k];
    }
  return system;
}

// Pairwise commutation check; usable standalone on user-supplied prebases.
inline CommutationWitness check_commutation(const MultiplicationSystem& system) {
  CommutationWitness witness;
  const int n = static_cast<int>(system.operators.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const RatMatrix ij = multiply(system.operators[i], system.operators[j]);
      const RatMatrix ji = multiply(system.operators[j], system.operators[i]);
      if (ij == ji) continue;
      witness.commutes = false;
      witness.i = i;
      witness.j = j;
      witness.difference = RatMatrix(ij.rows, ij.cols);
      for (std::size_t k = 0; k < ij.entries.size(); ++k)
        witness.difference.entries[k] = ij.entries[k] - ji.entries[k];
      return witness;
    }
  return witness;
}

// The extended form: Lambda~(x^alpha) = <lambda_B, chi^alpha v0> where v0 is
// the coordinate vector of pi(1) (the unit vector of 1 when 1 is in B).
// Values are memoized; the cache is invisible in outputs.
class ExtendedForm {
 public:
  ExtendedForm(MomentSequence source, MonomialSet basis, MultiplicationSystem system,
               bool commutation_verified)
      : source_(std::move(source)),
        basis_(std::move(basis)),
        system_(std::move(system)),
        commutation_verified_(commutation_verified),
        memo_(std::make_unique<Memo>()) {
    for (std::size_t k = 0; k < basis_.size(); ++k)
      lambda_basis_.push_back(source_.value(basis_[k]));
    const Monomial one = Monomial::unit(source_.n);
    if (auto idx = basis_.index_of(one)) {
      base_vector_.assign(basis_.size(), Rational(0));
      base_vector_[*idx] = 1;
    } else {
      base_vector_ = project_pi(source_, basis_, one);
    }
  }

  const MomentSequence& source() const { return source_; }
  const MonomialSet& basis() const { return basis_; }
  const MultiplicationSystem& system() const { return system_; }
  bool commutation_verified() const { return commutation_verified_; }

  // chi^alpha applied to v0, exponent by exponent in fixed variable order.
  std::vector<Rational> phi_vector(const Monomial& m) const {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    return phi_locked(m);
  }

  Rational evaluate(const Monomial& m) const {
    if (!commutation_verified_)
      throw CommutationUnverifiedError(
          "extension values are order-dependent until commutation is verified");
    const std::vector<Rational> v = phi_vector(m);
    Rational s = 0;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k] != 0) s += lambda_basis_[k] * v[k];
    return s;
  }

  Rational evaluate_poly(const std::map<Monomial, Rational, GrlexLess>& poly) const {
    Rational s = 0;
    for (const auto& [m, c] : poly)
      if (c != 0) s += c * evaluate(m);
    return s;
  }

 private:
  struct Memo {
    std::mutex mutex;
    std::map<Monomial, std::vector<Rational>, GrlexLess> phi;
  };

  std::vector<Rational> phi_locked(const Monomial& m) const {
    auto it = memo_->phi.find(m);
    if (it != memo_->phi.end()) return it->second;
    std::vector<Rational> result;
    if (m.is_unit()) {
      result = base_vector_;
    } else {
      int var = 0;
      while (m.exponents[var] == 0) ++var;
      const std::vector<Rational> parent = phi_locked(m.div_var(var));
      result = system_.operators[var].apply(parent);
    }
    memo_->phi.emplace(m, result);
    return result;
  }

  MomentSequence source_;
  MonomialSet basis_;
  MultiplicationSystem system_;
  std::vector<Rational> lambda_basis_;
  std::vector<Rational> base_vector_;
  bool commutation_verified_ = false;
  std::unique_ptr<Memo> memo_;
};

// Builds the whole operator pipeline for a chosen basis. Requires 1 in C:
// without it Lambda(b) and pi(1) are not even defined on the data.
inline ExtendedForm make_extended_form(const MomentSequence& y, const MonomialSet& basis) {
  if (!y.index_set.contains_unit())
    throw NotConnectedError("index set does not contain the monomial 1");
  const RewritingFamily family = build_rewriting_family(y, basis);
  MultiplicationSystem system = build_multiplication_system(family, y.n);
  const CommutationWitness witness = check_commutation(system);
  if (!witness.commutes)
    throw InconsistentExtensionError(
        "multiplication operators do not commute (pair x" + std::to_string(witness.i + 1) +
        ", x" + std::to_string(witness.j + 1) + "); the basis is not valid for this sequence");
  return ExtendedForm(std::move(y), basis, std::move(system), true);
}

struct ValueViolation {
  Monomial monomial;
  Rational expected;  // y value
  Rational got;       // extension value
};

struct ConsistencyReport {
  bool passed = true;
  std::vector<ValueViolation> value_mismatches;   // Lambda~ vs y on C+*C+
  std::vector<Monomial> projection_mismatches;    // phi(m) != pi(m) on C+
};

// Checks the two lemmas behind the construction: phi agrees with pi on C+,
// and the extension reproduces every moment of C+*C+. For connected flat
// input both must hold; for forced non-connected input this is the detector
// for non-existence.
inline ConsistencyReport verify_consistency(const ExtendedForm& e) {
  ConsistencyReport report;
  const MomentSequence& y = e.source();
  for (const auto& m : y.cplus) {
    const std::vector<Rational> phi = e.phi_vector(m);
    const std::vector<Rational> pi = project_pi(y, e.basis(), m);
    if (phi != pi) report.projection_mismatches.push_back(m);
  }
  for (const auto& m : y.support) {
    const Rational got = e.evaluate(m);
    const Rational expected = y.value(m);
    if (got != expected) report.value_mismatches.push_back({m, expected, got});
  }
  report.passed = report.value_mismatches.empty() && report.projection_mismatches.empty();
  return report;
}

struct ExtensionOptions {
  bool force = false;                         // run on non-connected C anyway
  std::optional<MonomialSet> basis_override;  // alternative basis (may omit 1)
};

struct ExtensionResult {
  MomentSequence extended;  // index set M_{n,c}; support M_{n,2c+2} covers the request
  int emitted_degree = 0;
  MonomialSet basis;
  std::size_t rank = 0;
  bool connected = false;
  bool certified = false;  // theorem-backed (connected) vs force-path evidence
  bool zero_form = false;
};

inline void validate_basis_choice(const MomentSequence& y, const MonomialSet& basis,
                                  std::size_t required_rank) {
  for (const auto& b : basis)
    if (!y.index_set.contains(b))
      throw ParseError("basis monomial " + monomial_to_string(b) + " is not in C");
  if (basis.size() != required_rank)
    throw ParseError("basis size " + std::to_string(basis.size()) +
                     " does not match rank " + std::to_string(required_rank));
  const HankelView h = assemble(y, y.cplus, y.cplus);
  std::vector<std::size_t> cols;
  for (const auto& b : basis) cols.push_back(*y.cplus.index_of(b));
  if (rank(h.matrix.select_columns(cols)) != basis.size())
    throw ParseError("basis columns are linearly dependent");
}

// Full pipeline of the flat extension theorem: rank test, basis, rewriting
// family, multiplication operators, commutation, consistency, then emission
// of y~ for all monomials up to the requested degree.
inline ExtensionResult extend_sequence(const MomentSequence& y, int degree,
                                       const ExtensionOptions& opts = {}) {
  const FlatnessReport flatness = check_flat(y);
  if (!flatness.flat)
    throw NotFlatError("rank H^C = " + std::to_string(flatness.rank_C) +
                       " but rank H^{C+} = " + std::to_string(flatness.rank_Cplus) +
                       "; no flat extension from this data");
  if (!flatness.connected && !opts.force)
    throw NotConnectedError(
        "index set is not connected to 1; rerun with --force to attempt the "
        "construction with consistency checking");

  ExtensionResult result;
  result.connected = flatness.connected;
  result.rank = flatness.rank_Cplus;
  result.zero_form = flatness.zero_form;

  MonomialSet basis = flatness.basis;
  if (opts.basis_override) {
    validate_basis_choice(y, *opts.basis_override, flatness.rank_Cplus);
    basis = *opts.basis_override;
  }
  result.basis = basis;

  const int index_degree = std::max(0, (degree + 1) / 2 - 1);
  const int emit_degree = 2 * index_degree + 2;
  result.emitted_degree = emit_degree;
  const MonomialSet emit_set = monomials_up_to_degree(y.n, emit_degree);

  std::map<Monomial, Rational, GrlexLess> values;
  if (result.zero_form) {
    for (const auto& m : emit_set) values.emplace(m, Rational(0));
    result.certified = flatness.connected;
  } else {
    const ExtendedForm form = make_extended_form(y, basis);
    const ConsistencyReport consistency = verify_consistency(form);
    if (!consistency.passed) {
      std::string msg = "extension is inconsistent with the input sequence";
      if (!consistency.value_mismatches.empty()) {
        const ValueViolation& v = consistency.value_mismatches.front();
        msg += " at monomial " + monomial_to_string(v.monomial) + " (expected " +
               rational_to_string(v.expected) + ", got " + rational_to_string(v.got) + ")";
      } else {
        msg += " (projection mismatch at " +
               monomial_to_string(consistency.projection_mismatches.front()) + ")";
      }
      msg += "; no flat extension exists for this data";
      throw InconsistentExtensionError(msg);
    }
    for (const auto& m : emit_set) values.emplace(m, form.evaluate(m));
    result.certified = flatness.connected;
  }

  result.extended =
      MomentSequence::build(y.n, monomials_up_to_degree(y.n, index_degree), values);

  // Flat-rank spot check: the truncation at half the emitted degree must
  // still have rank |B| once it contains the basis.
  const int check_degree = emit_degree / 2;
  if (!result.zero_form && basis.max_degree() <= check_degree) {
    const MonomialSet check_set = monomials_up_to_degree(y.n, check_degree);
    const HankelView view = assemble(result.extended, check_set, check_set);
    if (rank(view.matrix) != basis.size())
      throw InconsistentExtensionError(
          "extended sequence does not stay rank-" + std::to_string(basis.size()) +
          " at truncation degree " + std::to_string(check_degree));
  }
  return result;
}

// Runs the pipeline under two bases and compares the extensions exactly.
// The second basis may omit 1; the evaluator then starts from pi(1).
inline bool uniqueness_probe(const MomentSequence& y, const MonomialSet& basis1,
                             const MonomialSet& basis2, int degree) {
  const ExtendedForm f1 = make_extended_form(y, basis1);
  const ExtendedForm f2 = make_extended_form(y, basis2);
  for (const auto& m : monomials_up_to_degree(y.n, degree))
    if (f1.evaluate(m) != f2.evaluate(m)) return false;
  return true;
}

}  // namespace flatext
