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

#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "schur/cnf.hpp"
#include "schur/encode.hpp"

using namespace schur;

namespace {

// F^2_4 without optional clauses, after subsumption: the ten-clause formula
// used to illustrate look-aheads.
ClauseDatabase reduced_f24() {
  return subsumption_eliminate(encode({2, 4, Variant::kClassic, false, false}));
}

std::set<std::vector<Lit>> clause_set(const ClauseDatabase& db) {
  std::set<std::vector<Lit>> s;
  for (const Clause& c : db.clauses()) {
    std::vector<Lit> v(c.begin(), c.end());
    std::sort(v.begin(), v.end());
    s.insert(v);
  }
  return s;
}

}  // namespace

TEST_SUITE("cnf") {
  TEST_CASE("parse_dimacs reads header and clauses") {
    ClauseDatabase db = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n");
    CHECK(db.num_vars() == 2);
    REQUIRE(db.num_clauses() == 2);
    CHECK(db.clause(1)[0] == Lit(-1));

    ClauseDatabase unit = parse_dimacs("p cnf 1 1\n1 0\n");
    REQUIRE(unit.num_clauses() == 1);
    CHECK(unit.clause(0).size() == 1);
  }

  TEST_CASE("parse_dimacs tolerates comments and clauses spanning lines") {
    ClauseDatabase db = parse_dimacs("c hello\np cnf 3 2\n1 2\n3 0 -1\n -2 0\n");
    CHECK(db.num_clauses() == 2);
    CHECK(db.clause(0).size() == 3);
  }

  TEST_CASE("parse_dimacs rejects malformed input") {
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 -1 0\n"), Error);
  }

  TEST_CASE("write_dimacs is canonical") {
    ClauseDatabase db(2, {Clause{1, 2}, Clause{-1, -2}});
    CHECK(write_dimacs(db) == "p cnf 2 2\n1 2 0\n-1 -2 0\n");
    CHECK(write_dimacs(ClauseDatabase()) == "p cnf 0 0\n");
  }

  TEST_CASE("write then parse is the identity") {
    for (const auto& [name, db] : oracle::corpus()) {
      CAPTURE(name);
      std::string text = write_dimacs(db);
      ClauseDatabase back = parse_dimacs(text);
      CHECK(back == db);
      CHECK(write_dimacs(back) == text);
    }
  }

  TEST_CASE("clause construction rejects zero, duplicate and complementary literals") {
    CHECK_THROWS_AS(Clause({1, 0}), Error);
    CHECK_THROWS_AS(Clause({1, 1}), Error);
    CHECK_THROWS_AS(Clause({2, -2}), Error);
    CHECK_THROWS_AS(ClauseDatabase(1, {Clause{2}}), Error);
  }

  TEST_CASE("occurrence index is consistent") {
    for (const auto& [name, db] : oracle::corpus()) {
      CAPTURE(name);
      CHECK(db.occurrence_index_consistent());
      for (Var v = 1; v <= db.num_vars(); ++v)
        for (Lit l : {Lit::make(v, false), Lit::make(v, true)})
          for (auto id : db.occurrences(l)) CHECK(db.clause(id).contains(l));
    }
  }

  TEST_CASE("simplify on the reduced F24 under not v3^1") {
    ClauseDatabase f = reduced_f24();
    REQUIRE(f.num_clauses() == 10);
    VariableMap m(2, 4);
    Assignment a(f.num_vars());
    a.assign(m.lit(3, 1, true));
    SimplifyResult r = simplify(f, a);
    CHECK(r.status == SimplifyStatus::kOpen);
    CHECK(r.assignment.is_true(m.lit(3, 2)));
    auto before = clause_set(f), after = clause_set(r.formula);
    std::vector<std::vector<Lit>> fresh;
    for (const auto& c : after)
      if (!before.count(c)) fresh.push_back(c);
    REQUIRE(fresh.size() == 1);
    std::vector<Lit> expect{m.lit(1, 2, true), m.lit(4, 2, true)};
    std::sort(expect.begin(), expect.end());
    CHECK(fresh[0] == expect);
  }

  TEST_CASE("simplify identity, conflict and idempotence") {
    ClauseDatabase f = reduced_f24();
    SimplifyResult id = simplify(f, Assignment(f.num_vars()));
    CHECK(id.formula == f);
    CHECK(id.assignment.size() == 0);

    ClauseDatabase bad(1, {Clause{1}, Clause{-1}});
    CHECK(simplify(bad, Assignment(1)).status == SimplifyStatus::kConflict);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
      ClauseDatabase db = oracle::random_cnf(rng, 8, 20, 3);
      Assignment a(8);
      a.assign(Lit(static_cast<int>(i % 8) + 1));
      SimplifyResult once = simplify(db, a);
      if (once.status != SimplifyStatus::kOpen) continue;
      SimplifyResult twice = simplify(once.formula, once.assignment);
      CHECK(twice.formula == once.formula);
      CHECK(twice.assignment.size() == once.assignment.size());
    }
  }

  TEST_CASE("simplify only assigns literals forced by unit clauses") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
      ClauseDatabase db = oracle::random_cnf(rng, 10, 30, 3);
      Assignment a(10);
      a.assign(Lit(i % 2 ? 1 : -1));
      SimplifyResult r = simplify(db, a);
      if (r.status == SimplifyStatus::kConflict) continue;
      // Every implied literal must hold in every model consistent with a.
      for (std::uint64_t m : oracle::models(db)) {
        if (!oracle::lit_true(m, a.trail()[0])) continue;
        for (Lit l : r.assignment.trail()) CHECK(oracle::lit_true(m, l));
      }
    }
  }

  TEST_CASE("subsumption on F24 drops the two length-three negatives") {
    ClauseDatabase f = encode({2, 4});
    ClauseDatabase se = subsumption_eliminate(f);
    CHECK(se.num_clauses() == f.num_clauses() - 2);
    auto s = clause_set(se);
    VariableMap m(2, 4);
    for (int col : {1, 2}) {
      std::vector<Lit> gone{m.lit(1, col, true), m.lit(2, col, true), m.lit(3, col, true)};
      std::sort(gone.begin(), gone.end());
      CHECK(s.count(gone) == 0);
    }
    CHECK(subsumption_eliminate(se) == se);
  }

  TEST_CASE("blocked clause elimination examples") {
    BceResult r = blocked_clause_eliminate(ClauseDatabase(2, {Clause{1, 2}, Clause{1, -2}}));
    CHECK(r.solved);
    CHECK(r.formula.num_clauses() == 0);
    CHECK(blocked_clause_eliminate(ClauseDatabase()).solved);
    CHECK_FALSE(blocked_clause_eliminate(encode({2, 5})).solved);
  }

  TEST_CASE("formula_stats") {
    ClauseDatabase f = encode({2, 4});
    FormulaStats s = formula_stats(f, Assignment(f.num_vars()));
    CHECK(s.binary_clauses == 12);
    CHECK(s.remaining_vars == 8);
    CHECK(s.clause_histogram.at(3) == 4);

    Assignment model = certificate_to_assignment({{1, 2, 2, 1}}, VariableMap(2, 4));
    FormulaStats done = formula_stats(f, model);
    CHECK(done.binary_clauses == 0);
    CHECK(done.remaining_vars == 0);

    CHECK(formula_stats(encode({5, 161}), Assignment(805)).remaining_vars == 805);
  }
}
