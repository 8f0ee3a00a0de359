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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "schur/encode.hpp"
#include "schur/partition.hpp"
#include "schur/proof.hpp"

using namespace schur;

namespace {

bool consistent(std::uint64_t mask, const Cube& c) {
  for (Lit l : c)
    if (!oracle::lit_true(mask, l)) return false;
  return true;
}

// Splits random leaves on random unused variables.
CubeSet random_tree(std::mt19937_64& rng, Var num_vars, int splits) {
  CubeSet cs;
  for (int s = 0; s < splits; ++s) {
    auto leaves = cs.leaves();
    int leaf = leaves[std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng)];
    Cube used = cs.cube_of(leaf);
    std::vector<Var> free;
    for (Var v = 1; v <= num_vars; ++v)
      if (std::none_of(used.begin(), used.end(), [&](Lit l) { return l.var() == v; }))
        free.push_back(v);
    if (free.empty()) continue;
    cs.split(leaf, free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)]);
  }
  return cs;
}

}  // namespace

TEST_SUITE("partition") {
  TEST_CASE("delta update examples") {
    CHECK(delta_update(1000, 1, 1.0, 0.6) == doctest::Approx(400).epsilon(1e-9));
    for (int d : {1, 2, 9})
      for (double e : {0.1, 0.3, 2.0}) CHECK(delta_update(123.5, d, e, 0.0) == 123.5);
    long double expect = 500.0L * (1.0L - std::pow(0.02L, std::pow(8.0L, 0.3L)));
    double got = delta_update(500, 8, 0.3, 0.02);
    CHECK(std::fabs(got - static_cast<double>(expect)) / static_cast<double>(expect) < 1e-6);
    CHECK(got == doctest::Approx(499.66).epsilon(1e-4));
    CHECK_THROWS_AS(delta_update(10, 0, 0.3, 0.02), Error);

    SplitConfig cfg = SplitConfig::down_factor(1.0, 0.6);
    SplitterState s = delta_update(SplitterState{1000, 1}, cfg);
    CHECK(s.delta == doctest::Approx(400));
  }

  TEST_CASE("delta never increases and strictly drops when f > 0") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> fe(0.05, 2.0), ff(0.001, 0.9), fd(1.0, 5000.0);
    for (int i = 0; i < 1000; ++i) {
      double delta = fd(rng), e = fe(rng), f = ff(rng);
      for (int d = 1; d <= 30; ++d) {
        double next = delta_update(delta, d, e, f);
        CHECK(next <= delta);
        if (std::pow(f, std::pow(d, e)) > 1e-15) CHECK(next < delta);
        delta = next;
      }
    }
  }

  TEST_CASE("split configuration parsing") {
    SplitConfig b = SplitConfig::parse("binclauses:3700");
    CHECK(b.mode == SplitConfig::Mode::kBinaryClauses);
    CHECK(b.binary_limit == 3700);
    SplitConfig d = SplitConfig::parse("down:0.3,0.02");
    CHECK(d.mode == SplitConfig::Mode::kDownFactor);
    CHECK(d.e == 0.3);
    CHECK(d.f == 0.02);
    for (const char* bad : {"binclauses:0", "down:0,0.1", "down:0.3,1.5", "down:0.3", "foo:1", "binclauses:x"})
      CHECK_THROWS_AS(SplitConfig::parse(bad), Error);
  }

  TEST_CASE("icnf emission and parsing") {
    std::ostringstream one;
    emit_icnf(one, std::vector<Cube>{Cube{}});
    CHECK(one.str() == "p inccnf\na 0\n");
    std::vector<Cube> three{to_lits({1}), to_lits({-1, 2}), to_lits({-1, -2})};
    std::ostringstream out;
    emit_icnf(out, three);
    CHECK(out.str() == "p inccnf\na 1 0\na -1 2 0\na -1 -2 0\n");
    CHECK(parse_icnf(out.str()) == three);
    CHECK(emit_icnf(CubeSet::from_cubes(three)) == out.str());
    CHECK_THROWS_AS(parse_icnf("a 1 0\n"), ParseError);
    CHECK_THROWS_AS(parse_icnf("p inccnf\na 1 2\n"), ParseError);
  }

  TEST_CASE("cube sets rebuild from their cubes") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      CubeSet cs = random_tree(rng, 12, i % 20);
      auto cubes = cs.cubes();
      CubeSet back = CubeSet::from_cubes(cubes);
      CHECK(back.cubes() == cubes);
    }
    CHECK_THROWS_AS(CubeSet::from_cubes(std::vector<Cube>{to_lits({1}), to_lits({2})}), Error);
    CHECK_THROWS_AS(CubeSet::from_cubes(std::vector<Cube>{to_lits({-1}), to_lits({1})}), Error);
    CHECK_THROWS_AS(CubeSet::from_cubes(std::vector<Cube>{to_lits({1})}), Error);
  }

  TEST_CASE("split and merge") {
    CubeSet cs;
    auto [l, r] = cs.split(0, 3);
    CHECK(cs.cubes() == std::vector<Cube>{to_lits({3}), to_lits({-3})});
    cs.split(r, 5);
    CHECK(cs.size() == 3);
    cs.merge(r);
    CHECK(cs.size() == 2);
    CHECK_THROWS_AS(cs.merge(l), Error);
    (void)l;
  }

  TEST_CASE("every assignment matches exactly one cube") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 40; ++i) {
      const Var n = static_cast<Var>(4 + i % 13);
      CubeSet cs = random_tree(rng, n, 1 + i * 3);
      auto cubes = cs.cubes();
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); m += (n > 12 ? 7 : 1)) {
        int hits = 0;
        for (const Cube& c : cubes) hits += consistent(m, c);
        REQUIRE(hits == 1);
      }
    }
  }

  TEST_CASE("tautology proofs") {
    std::vector<Cube> three{to_lits({1}), to_lits({-1, 2}), to_lits({-1, -2})};
    CubeSet cs = CubeSet::from_cubes(three);
    ProofStream p = emit_tautology_proof(cs);
    REQUIRE(p.size() == 2);
    CHECK(p.steps()[0].lits == to_lits({1}));
    CHECK(p.steps()[1].lits.empty());
    CHECK(check_proof(negated_cubes(cs), p).accepted());

    CHECK(emit_tautology_proof(CubeSet()).size() == 0);
    CHECK(negated_cubes(CubeSet()).clause(0).empty());
  }

  TEST_CASE("partition of an unsatisfiable formula refutes every leaf") {
    ClauseDatabase f = encode({2, 5});
    for (const char* mode : {"down:0.3,0.02", "binclauses:1", "binclauses:100"}) {
      CubeSet cs = build_partition(f, SplitConfig::parse(mode));
      CHECK(cs.num_refuted() == cs.size());
    }
  }

  TEST_CASE("cutoff at the root gives one empty cube") {
    ClauseDatabase f = encode({3, 12});
    CubeSet cs = build_partition(f, SplitConfig::binary_clauses(1));
    REQUIRE(cs.size() == 1);
    CHECK(cs.cubes()[0].empty());
    CHECK(cs.statuses()[0] == LeafStatus::kOpen);

    ClauseDatabase sat(2, {Clause{1, 2}});
    CHECK(build_partition(sat, SplitConfig::down_factor(0.3, 0.02)).size() >= 1);
  }

  TEST_CASE("partitions are deterministic and carry sound proofs") {
    ClauseDatabase r = encode({3, 14, Variant::kClassic, true, true});
    SplitConfig cfg = SplitConfig::down_factor(0.3, 0.5);
    CubeSet a = build_partition(r, cfg), b = build_partition(r, cfg);
    CHECK(emit_icnf(a) == emit_icnf(b));
    REQUIRE(a.size() > 1);

    ProofStream taut = emit_tautology_proof(a);
    CHECK(taut.num_additions() == a.size() - 1);
    CHECK(check_proof(negated_cubes(a, r.num_vars()), taut).accepted());

    auto leaves = a.leaves();
    for (int leaf : leaves) {
      if (a.node(leaf).status != LeafStatus::kRefuted) continue;
      ProofStream p = refutation_proof(a, leaf);
      REQUIRE(p.last_addition());
      Cube cube = a.cube_of(leaf);
      std::vector<Lit> neg;
      for (Lit l : cube) neg.push_back(~l);
      CHECK(p.last_addition()->lits == neg);
      // With the cube asserted, the proof must refute the formula.
      std::vector<Clause> units;
      for (Lit l : cube) units.emplace_back(std::vector<Lit>{l});
      ProofStream closed = p;
      closed.add(std::vector<Lit>{});
      CHECK(check_proof(r.with_clauses(units), closed).accepted());
    }
  }

  TEST_CASE("binary-clause cutoff predicate on R(4,45)") {
    ClauseDatabase r = encode({4, 45, Variant::kClassic, true, true});
    CubeSet cs = build_partition(r, SplitConfig::binary_clauses(3700));
    CHECK(cs.size() > 1);
    for (int leaf : cs.leaves()) {
      const CubeNode& n = cs.node(leaf);
      CHECK((n.status == LeafStatus::kRefuted || n.binary_clauses > 3700));
    }
  }

  TEST_CASE("work budget and depth guard") {
    ClauseDatabase r = encode({4, 45, Variant::kClassic, true, true});
    SplitConfig cfg = SplitConfig::binary_clauses(460);
    cfg.work_budget = 1000;
    CHECK_THROWS_AS(build_partition(r, cfg), BudgetError);

    ClauseDatabase r3 = encode({3, 14});
    BalanceOptions bo;
    bo.max_depth = 1;
    CHECK_THROWS_AS(balance_partition(r3, CubeSet(), 1, 0, bo), BudgetError);
  }

  TEST_CASE("hardness prediction") {
    ClauseDatabase r = encode({3, 14, Variant::kClassic, true, true});
    CHECK(predict_hardness(r, {}) == predict_hardness(r, {}));
    VariableMap m(3, 14);
    // Number 1 and number 2 both colored 1 is an immediate conflict.
    Cube dead{m.lit(2, 1)};
    CHECK(predict_hardness(r, dead) < predict_hardness(r, {}));
  }

  TEST_CASE("balancing") {
    ClauseDatabase r = encode({3, 14});
    CubeSet base = build_partition(r, SplitConfig::down_factor(0.3, 0.5));
    const std::string before = emit_icnf(base);

    CubeSet same = balance_partition(r, base, UINT64_MAX, 0);
    CHECK(emit_icnf(same) == before);

    CubeSet two;
    two.split(0, 40);
    CubeSet merged = balance_partition(r, two, UINT64_MAX, UINT64_MAX - 1);
    CHECK(merged.size() == 1);

    const std::uint64_t w = predict_hardness(r, {}) / 4;
    BalanceStats st;
    CubeSet bal = balance_partition(r, base, w, w / 10, {}, &st);
    CHECK(st.max_leaf_hardness < w);
    ProofStream taut = emit_tautology_proof(bal);
    CHECK(taut.num_additions() == bal.size() - 1);
    CHECK(check_proof(negated_cubes(bal, r.num_vars()), taut).accepted());
  }
}
