#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatext/errors.hpp"

namespace flatext {

// A monomial x^alpha in n variables, stored as a dense exponent vector.
struct Monomial {
  std::vector<int> exponents;

  Monomial() = default;
  explicit Monomial(std::vector<int> e) : exponents(std::move(e)) {}

  static Monomial unit(int n) { return Monomial(std::vector<int>(n, 0)); }

  static Monomial variable(int n, int i) {
    Monomial m = unit(n);
    m.exponents[i] = 1;
    return m;
  }

  int var_count() const { return static_cast<int>(exponents.size()); }

  int degree() const {
    int d = 0;
    for (int e : exponents) d += e;
    return d;
  }

  bool is_unit() const { return degree() == 0; }

  Monomial times(const Monomial& other) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < r.exponents.size(); ++i)
      r.exponents[i] += other.exponents[i];
    return r;
  }

  Monomial times_var(int i) const {
    Monomial r = *this;
    ++r.exponents[i];
    return r;
  }

  // Valid only when exponents[i] > 0.
  Monomial div_var(int i) const {
    Monomial r = *this;
    --r.exponents[i];
    return r;
  }

  bool operator==(const Monomial& other) const = default;
};

// Graded lexicographic order: total degree first, then lex on exponents with
// x1 > x2 > ... > xn. On M_{2,2} this sorts as 1, x2, x1, x2^2, x1x2, x1^2.
inline int grlex_compare(const Monomial& a, const Monomial& b) {
  const int da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  if (a.exponents < b.exponents) return -1;
  if (b.exponents < a.exponents) return 1;
  return 0;
}

struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return grlex_compare(a, b) < 0;
  }
};

// A finite set of monomials, canonically ordered (grlex ascending, no
// duplicates) so that serialization is deterministic.
struct MonomialSet {
  int n = 0;
  std::vector<Monomial> members;

  MonomialSet() = default;
  MonomialSet(int vars, std::vector<Monomial> elems) : n(vars), members(std::move(elems)) {
    std::sort(members.begin(), members.end(), GrlexLess{});
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  const Monomial& operator[](std::size_t i) const { return members[i]; }

  auto begin() const { return members.begin(); }
  auto end() const { return members.end(); }

  bool contains(const Monomial& m) const {
    return std::binary_search(members.begin(), members.end(), m, GrlexLess{});
  }

  std::optional<std::size_t> index_of(const Monomial& m) const {
    auto it = std::lower_bound(members.begin(), members.end(), m, GrlexLess{});
    if (it == members.end() || !(*it == m)) return std::nullopt;
    return static_cast<std::size_t>(it - members.begin());
  }

  bool contains_unit() const { return contains(Monomial::unit(n)); }

  int max_degree() const {
    int d = 0;
    for (const auto& m : members) d = std::max(d, m.degree());
    return d;
  }

  bool operator==(const MonomialSet& other) const = default;
};

// C+ = C union x1*C union ... union xn*C.
inline MonomialSet closure(const MonomialSet& c) {
  std::vector<Monomial> out = c.members;
  out.reserve(c.size() * (c.n + 1));
  for (const auto& m : c.members)
    for (int i = 0; i < c.n; ++i) out.push_back(m.times_var(i));
  return MonomialSet(c.n, std::move(out));
}

// dC = C+ \ C.
inline MonomialSet border(const MonomialSet& c) {
  const MonomialSet cl = closure(c);
  std::vector<Monomial> out;
  for (const auto& m : cl)
    if (!c.contains(m)) out.push_back(m);
  return MonomialSet(c.n, std::move(out));
}

// {a*b | a in A, b in B}.
inline MonomialSet product_set(const MonomialSet& a, const MonomialSet& b) {
  std::vector<Monomial> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x.times(y));
  return MonomialSet(a.n, std::move(out));
}

// All monomials of degree <= t in n variables (the set M_{n,t}).
inline MonomialSet monomials_up_to_degree(int n, int t) {
  std::vector<Monomial> out;
  std::vector<int> e(n, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == n) {
      out.emplace_back(e);
      return;
    }
    for (int d = 0; d <= remaining; ++d) {
      e[pos] = d;
      self(self, pos + 1, remaining - d);
    }
    e[pos] = 0;
  };
  rec(rec, 0, t);
  return MonomialSet(n, std::move(out));
}

// Fixed-point reachability from 1: a member is reached when it is xi times an
// already-reached member. The parent map records one factorization chain per
// reached monomial, usable for induction on degree.
struct ConnectivityReport {
  bool connected = false;
  // member (other than 1) -> (parent in C, variable index) with member = xi * parent
  std::map<Monomial, std::pair<Monomial, int>, GrlexLess> parent;
  std::vector<Monomial> unreachable;
};

inline ConnectivityReport is_connected_to_one(const MonomialSet& c) {
  ConnectivityReport report;
  if (!c.contains_unit()) {
    report.connected = false;
    report.unreachable = c.members;
    return report;
  }
  std::vector<bool> reached(c.size(), false);
  reached[*c.index_of(Monomial::unit(c.n))] = true;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (reached[k]) continue;
      const Monomial& m = c[k];
      for (int i = 0; i < c.n && !reached[k]; ++i) {
        if (m.exponents[i] == 0) continue;
        const Monomial down = m.div_var(i);
        auto idx = c.index_of(down);
        if (idx && reached[*idx]) {
          reached[k] = true;
          report.parent.emplace(m, std::make_pair(down, i));
          progress = true;
        }
      }
    }
  }
  for (std::size_t k = 0; k < c.size(); ++k)
    if (!reached[k]) report.unreachable.push_back(c[k]);
  report.connected = report.unreachable.empty();
  return report;
}

// Text form: "1", "x2", "x1^2*x3". Variables are 1-indexed.
inline std::string monomial_to_string(const Monomial& m) {
  if (m.is_unit()) return "1";
  std::string out;
  for (int i = 0; i < m.var_count(); ++i) {
    const int e = m.exponents[i];
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(i + 1);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

inline Monomial parse_monomial(const std::string& text, int n) {
  auto fail = [&]() -> Monomial {
    throw ParseError("invalid monomial literal: \"" + text + "\"");
  };
  if (text.empty()) return fail();
  if (text == "1") return Monomial::unit(n);
  Monomial m = Monomial::unit(n);
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] != 'x') return fail();
    ++pos;
    std::size_t start = pos;
    while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (start == pos) return fail();
    const int var = std::stoi(text.substr(start, pos - start));
    if (var < 1 || var > n) return fail();
    int exp = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      start = pos;
      while (pos < text.size() && isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos) return fail();
      exp = std::stoi(text.substr(start, pos - start));
    }
    m.exponents[var - 1] += exp;
    if (pos < text.size()) {
      if (text[pos] != '*') return fail();
      ++pos;
      if (pos == text.size()) return fail();
    }
  }
  return m;
}

}  // namespace flatext
