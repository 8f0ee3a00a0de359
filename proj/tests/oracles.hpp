// Copyright 2026 The schurcc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force reference implementations used as test oracles. Nothing here
// calls into the library beyond its data types.

#ifndef SCHUR_TESTS_ORACLES_HPP_
#define SCHUR_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "schur/cnf.hpp"
#include "schur/encode.hpp"

namespace oracle {

using schur::Clause;
using schur::ClauseDatabase;
using schur::Lit;
using schur::Var;

inline bool lit_true(std::uint64_t mask, Lit l) {
  bool bit = (mask >> (l.var() - 1)) & 1u;
  return l.negative() ? !bit : bit;
}

inline bool satisfied_by(const ClauseDatabase& db, std::uint64_t mask) {
  for (const Clause& c : db.clauses()) {
    bool ok = false;
    for (Lit l : c)
      if (lit_true(mask, l)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

/// Every total assignment over vars 1..num_vars (bit v-1 = value of v).
inline std::vector<std::uint64_t> models(const ClauseDatabase& db) {
  std::vector<std::uint64_t> out;
  const std::uint64_t total = std::uint64_t{1} << db.num_vars();
  for (std::uint64_t m = 0; m < total; ++m)
    if (satisfied_by(db, m)) out.push_back(m);
  return out;
}

inline bool satisfiable(const ClauseDatabase& db) {
  const std::uint64_t total = std::uint64_t{1} << db.num_vars();
  for (std::uint64_t m = 0; m < total; ++m)
    if (satisfied_by(db, m)) return true;
  return false;
}

inline bool satisfiable_under(const ClauseDatabase& db, const std::vector<Lit>& cube) {
  const std::uint64_t total = std::uint64_t{1} << db.num_vars();
  for (std::uint64_t m = 0; m < total; ++m) {
    bool ok = std::all_of(cube.begin(), cube.end(), [&](Lit l) { return lit_true(m, l); });
    if (ok && satisfied_by(db, m)) return true;
  }
  return false;
}

/// Random CNF with clause lengths in [1, max_len] and no tautologies or
/// duplicate literals.
inline ClauseDatabase random_cnf(std::mt19937_64& rng, Var num_vars, std::size_t num_clauses,
                                 int max_len, int min_len = 1) {
  std::vector<Clause> cs;
  std::uniform_int_distribution<int> len(min_len, max_len);
  std::uniform_int_distribution<Var> var(1, num_vars);
  std::bernoulli_distribution sign(0.5);
  while (cs.size() < num_clauses) {
    int n = std::min<int>(len(rng), static_cast<int>(num_vars));
    std::set<Var> vs;
    while (static_cast<int>(vs.size()) < n) vs.insert(var(rng));
    std::vector<Lit> lits;
    for (Var v : vs) lits.push_back(Lit::make(v, sign(rng)));
    std::shuffle(lits.begin(), lits.end(), rng);
    cs.emplace_back(std::move(lits));
  }
  return ClauseDatabase(num_vars, std::move(cs));
}

/// Pigeonhole: p pigeons into h holes; var(i, j) = i*h + j + 1.
inline ClauseDatabase pigeonhole(int p, int h) {
  std::vector<Clause> cs;
  auto v = [&](int i, int j) { return i * h + j + 1; };
  for (int i = 0; i < p; ++i) {
    std::vector<Lit> c;
    for (int j = 0; j < h; ++j) c.push_back(Lit(v(i, j)));
    cs.emplace_back(std::move(c));
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) cs.push_back(Clause{-v(a, j), -v(b, j)});
  return ClauseDatabase(static_cast<Var>(p * h), std::move(cs));
}

/// Direct reading of the coloring constraints of each variant.
inline bool coloring_ok(const std::vector<int>& col, schur::Variant variant) {
  const int n = static_cast<int>(col.size());
  auto c = [&](int x) { return col[static_cast<std::size_t>(x - 1)]; };
  const bool mod = variant == schur::Variant::kModular || variant == schur::Variant::kPalindromic;
  for (int a = 1; a <= n; ++a)
    for (int b = a; b <= n; ++b) {
      if (variant == schur::Variant::kWeak && a == b) continue;
      for (int s = 1; s <= n; ++s) {
        bool hit = mod ? (a + b - s) % (n + 1) == 0 : a + b == s;
        if (hit && c(a) == c(b) && c(b) == c(s)) return false;
      }
    }
  if (variant == schur::Variant::kPalindromic)
    for (int i = 1; i <= n; ++i)
      if (i < n + 1 - i && 3 * i != n + 1 && c(i) != c(n + 1 - i)) return false;
  return true;
}

/// All valid k-colorings of 1..n, by backtracking on the constraints above.
inline std::vector<std::vector<int>> colorings(int k, int n, schur::Variant variant) {
  std::vector<std::vector<int>> out;
  std::vector<int> col;
  auto partial_ok = [&]() {
    const int m = static_cast<int>(col.size());
    // Only constraints fully inside 1..m; the modular/palindromic checks
    // wait for the full length.
    if (variant == schur::Variant::kModular || variant == schur::Variant::kPalindromic) return true;
    const int s = m;
    for (int a = 1; 2 * a <= s; ++a) {
      int b = s - a;
      if (variant == schur::Variant::kWeak && a == b) continue;
      if (col[a - 1] == col[b - 1] && col[b - 1] == col[s - 1]) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(col.size()) == n) {
      if (coloring_ok(col, variant)) out.push_back(col);
      return;
    }
    for (int i = 1; i <= k; ++i) {
      col.push_back(i);
      if (partial_ok()) self(self);
      col.pop_back();
    }
  };
  rec(rec);
  return out;
}

inline std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
    i = j + 1;
  }
  return r;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Small formulas shared by several suites.
struct Named {
  std::string name;
  ClauseDatabase db;
};

inline std::vector<Named> corpus() {
  using schur::ProblemSpec;
  using schur::Variant;
  std::vector<Named> out;
  out.push_back({"F2_4", schur::encode({2, 4})});
  out.push_back({"F2_5", schur::encode({2, 5})});
  out.push_back({"R2_4", schur::encode({2, 4, Variant::kClassic, true, true})});
  out.push_back({"R2_5", schur::encode({2, 5, Variant::kClassic, true, true})});
  out.push_back({"W2_8", schur::encode({2, 8, Variant::kWeak})});
  out.push_back({"W2_9", schur::encode({2, 9, Variant::kWeak})});
  out.push_back({"M2_4", schur::encode({2, 4, Variant::kModular})});
  out.push_back({"P2_5", schur::encode({2, 5, Variant::kPalindromic})});
  out.push_back({"F3_4", schur::encode({3, 4})});
  out.push_back({"F3_5", schur::encode({3, 5})});
  out.push_back({"php3_2", pigeonhole(3, 2)});
  out.push_back({"php4_3", pigeonhole(4, 3)});
  std::mt19937_64 rng(2026);
  for (int i = 0; i < 12; ++i) {
    Var v = static_cast<Var>(6 + i % 9);
    out.push_back({"rand" + std::to_string(i), random_cnf(rng, v, static_cast<std::size_t>(v * 4 + i % 5), 3)});
  }
  return out;
}

}  // namespace oracle

#endif  // SCHUR_TESTS_ORACLES_HPP_
