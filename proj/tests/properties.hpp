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

// Randomized property sweeps shared by the unit tests and the acceptance
// runner. Each returns the number of instances checked and the first
// failure, if any.

#ifndef SCHUR_TESTS_PROPERTIES_HPP_
#define SCHUR_TESTS_PROPERTIES_HPP_

#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "schur/cdcl.hpp"
#include "schur/certs.hpp"
#include "schur/encode.hpp"
#include "schur/lookahead.hpp"
#include "schur/partition.hpp"
#include "schur/proof.hpp"

namespace props {

using namespace schur;

struct Outcome {
  std::size_t checked = 0;
  std::optional<std::string> failure;
  bool ok() const { return !failure.has_value(); }
  void fail(const std::string& why) {
    if (!failure) failure = why;
  }
};

/// SE keeps the model set; BCE keeps satisfiability, and reports solved only
/// for satisfiable inputs.
inline Outcome se_bce(std::size_t count = 1000, std::uint64_t seed = 1) {
  Outcome o;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Var n = static_cast<Var>(3 + i % 10);
    ClauseDatabase db = oracle::random_cnf(rng, n, 2 + (i * 7) % (4 * n), 1 + static_cast<int>(i % 4));
    auto before = oracle::models(db);
    ClauseDatabase se = subsumption_eliminate(db);
    if (oracle::models(se) != before) o.fail("SE changed the model set of instance " + std::to_string(i));
    BceResult bce = blocked_clause_eliminate(db);
    bool sat = !before.empty();
    if (oracle::satisfiable(bce.formula) != sat)
      o.fail("BCE changed satisfiability of instance " + std::to_string(i));
    if (bce.solved && !sat) o.fail("BCE solved an unsatisfiable instance " + std::to_string(i));
    if (bce.solved != (bce.formula.num_clauses() == 0))
      o.fail("BCE solved flag disagrees with its fixpoint on instance " + std::to_string(i));
    ++o.checked;
  }
  return o;
}

/// Random trees: the tautology proof checks against the negated cubes with
/// exactly |cubes| - 1 additions.
inline Outcome tautology(std::size_t count = 200, std::uint64_t seed = 2) {
  Outcome o;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Var n = static_cast<Var>(2 + i % 15);
    CubeSet cs;
    const int splits = static_cast<int>(i % 40);
    for (int s = 0; s < splits; ++s) {
      auto leaves = cs.leaves();
      int leaf = leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
      Cube used = cs.cube_of(leaf);
      std::vector<Var> free;
      for (Var v = 1; v <= n; ++v)
        if (std::none_of(used.begin(), used.end(), [&](Lit l) { return l.var() == v; })) free.push_back(v);
      if (!free.empty()) cs.split(leaf, free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)]);
    }
    for (bool del : {false, true}) {
      ProofStream p = emit_tautology_proof(cs, del);
      if (p.num_additions() + 1 != cs.size() && cs.size() > 1)
        o.fail("tautology proof of tree " + std::to_string(i) + " has the wrong length");
      if (cs.size() > 1 && !check_proof(negated_cubes(cs, n), p).accepted())
        o.fail("tautology proof of tree " + std::to_string(i) + " rejected");
    }
    ++o.checked;
  }
  return o;
}

/// delta_update against a long-double evaluation, relative tolerance 1e-6.
inline Outcome delta(std::size_t count = 2000, std::uint64_t seed = 3) {
  Outcome o;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> de(0.05, 3.0), df(0.0, 0.95), dd(1.0, 1e5);
  auto check = [&](double d0, int depth, double e, double f) {
    long double expect = static_cast<long double>(d0) *
                         (1.0L - std::pow(static_cast<long double>(f),
                                          std::pow(static_cast<long double>(depth), static_cast<long double>(e))));
    double got = delta_update(d0, depth, e, f);
    long double err = expect == 0 ? std::fabs(static_cast<long double>(got))
                                  : std::fabs((static_cast<long double>(got) - expect) / expect);
    if (err > 1e-6L) o.fail("delta_update off by " + std::to_string(static_cast<double>(err)));
    ++o.checked;
  };
  check(1000, 1, 1.0, 0.6);
  check(500, 8, 0.3, 0.02);
  check(805, 1, 0.3, 0.02);
  for (std::size_t i = 0; i < count; ++i)
    check(dd(rng), 1 + static_cast<int>(i % 60), de(rng), df(rng));
  return o;
}

/// Every failed literal found during ranking is refuted by CDCL.
inline Outcome failed_literals(std::size_t count = 500, std::uint64_t seed = 4) {
  Outcome o;
  std::mt19937_64 rng(seed);
  std::size_t found = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const Var n = static_cast<Var>(10 + i % 51);
    ClauseDatabase db = oracle::random_cnf(rng, n, static_cast<std::size_t>(n * 2.2), 3, 2);
    LookaheadEngine e(db);
    if (e.conflicting()) continue;
    Ranking r = e.rank_all();
    Cube so_far;
    for (Lit l : r.failed) {
      ++found;
      // l failed under the failed literals discovered before it.
      Cube q = so_far;
      q.push_back(l);
      if (cdcl_solve(db, q).status != SolveStatus::kUnsat)
        o.fail("failed literal " + std::to_string(l.dimacs()) + " of instance " + std::to_string(i) +
               " is satisfiable");
      so_far.push_back(~l);
    }
    if (r.refuted && cdcl_solve(db).status != SolveStatus::kUnsat)
      o.fail("refuted instance " + std::to_string(i) + " is satisfiable");
    ++o.checked;
  }
  if (found == 0) o.fail("no failed literals were exercised");
  return o;
}

/// compute_backbone equals the intersection of brute-force models.
inline Outcome backbone() {
  Outcome o;
  for (const auto& [name, db] : oracle::corpus()) {
    if (db.num_vars() > 16) continue;
    auto ms = oracle::models(db);
    if (ms.empty()) continue;
    std::set<Lit> expect;
    for (Var v = 1; v <= db.num_vars(); ++v) {
      if (db.occurrence_count(Lit::make(v, false)) + db.occurrence_count(Lit::make(v, true)) == 0) continue;
      for (bool neg : {false, true}) {
        Lit l = Lit::make(v, neg);
        if (std::all_of(ms.begin(), ms.end(), [&](auto m) { return oracle::lit_true(m, l); })) expect.insert(l);
      }
    }
    Backbone bb = compute_backbone(db);
    if (std::set<Lit>(bb.literals.begin(), bb.literals.end()) != expect) o.fail("backbone mismatch on " + name);
    ++o.checked;
  }
  return o;
}

/// The palindromic S(3,13) certificates are closed under every multiplier
/// coprime to 14.
inline Outcome sigma_closure() {
  Outcome o;
  auto certs = to_certificates(enumerate_models(encode({3, 13, Variant::kPalindromic})).models, VariableMap(3, 13));
  std::set<Certificate> pal(certs.begin(), certs.end());
  if (pal.empty()) o.fail("no palindromic certificates");
  for (int p = 1; p < 14; ++p) {
    if (std::gcd(p, 14) != 1) continue;
    for (const Certificate& c : pal) {
      if (!pal.count(multiplicative_map(c, p))) o.fail("not closed under p=" + std::to_string(p));
      ++o.checked;
    }
  }
  return o;
}

}  // namespace props

#endif  // SCHUR_TESTS_PROPERTIES_HPP_
