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

#include <numeric>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "schur/certs.hpp"
#include "schur/encode.hpp"
#include "schur/partition.hpp"

using namespace schur;

namespace {

std::set<Certificate> cert_set(const ClauseDatabase& db, int k, int n) {
  auto certs = to_certificates(enumerate_models(db).models, VariableMap(k, n));
  return {certs.begin(), certs.end()};
}

// Literals true in every brute-force model.
std::set<Lit> model_intersection(const ClauseDatabase& db) {
  auto ms = oracle::models(db);
  std::set<Lit> out;
  for (Var v = 1; v <= db.num_vars(); ++v) {
    bool occurs = db.occurrence_count(Lit::make(v, false)) + db.occurrence_count(Lit::make(v, true)) > 0;
    if (!occurs) continue;
    for (bool neg : {false, true}) {
      Lit l = Lit::make(v, neg);
      if (std::all_of(ms.begin(), ms.end(), [&](auto m) { return oracle::lit_true(m, l); }))
        out.insert(l);
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("certs") {
  TEST_CASE("enumeration examples") {
    CHECK(enumerate_models(encode({2, 4})).models.size() == 2);
    CHECK(enumerate_models(encode({3, 13, Variant::kClassic, true, true})).models.size() == 3);
    CHECK(enumerate_models(encode({3, 13})).models.size() == 18);
  }

  TEST_CASE("enumeration matches brute force") {
    for (const auto& [name, db] : oracle::corpus()) {
      if (db.num_vars() > 16) continue;
      CAPTURE(name);
      Enumeration e = enumerate_models(db);
      CHECK(e.complete);
      CHECK(e.models.size() == oracle::models(db).size());
      for (const Assignment& m : e.models) CHECK(satisfies(db, m));
    }
  }

  TEST_CASE("limits and cube-parallel enumeration") {
    ClauseDatabase f = encode({3, 13});
    EnumerateOptions lim;
    lim.limit = 5;
    Enumeration part = enumerate_models(f, lim);
    CHECK(part.models.size() == 5);
    CHECK_FALSE(part.complete);

    CubeSet cs = build_partition(f, SplitConfig::down_factor(0.3, 0.5));
    auto cubes = cs.cubes();
    EnumerateOptions par;
    par.jobs = 3;
    Enumeration split = enumerate_models(f, cubes, par);
    Enumeration whole = enumerate_models(f);
    REQUIRE(split.models.size() == whole.models.size());
    for (std::size_t i = 0; i < whole.models.size(); ++i)
      CHECK(to_certificates(std::span(&split.models[i], 1), VariableMap(3, 13)) ==
            to_certificates(std::span(&whole.models[i], 1), VariableMap(3, 13)));
  }

  TEST_CASE("projection counts certificates") {
    ClauseDatabase r = encode({2, 4, Variant::kClassic, false, false});
    EnumerateOptions o;
    o.project = 8;
    CHECK(enumerate_models(r, o).models.size() == oracle::models(r).size());
  }

  TEST_CASE("classification") {
    CertificateClass c = classify({{1, 2, 2, 1}}, 2, 4);
    CHECK(c.is_modular);
    CHECK(c.is_palindromic);
    for (const Certificate& cert : cert_set(encode({3, 13, Variant::kClassic, true, true}), 3, 13)) {
      CertificateClass cc = classify(cert, 3, 13);
      CHECK(cc.is_modular);
      CHECK(cc.is_palindromic);
    }
    for (int n = 8; n <= 13; ++n)
      for (const Certificate& cert : cert_set(encode({3, n}), 3, n)) {
        CertificateClass cc = classify(cert, 3, n);
        if (cc.is_palindromic) CHECK(cc.is_modular);
      }
  }

  TEST_CASE("backbone examples") {
    ClauseDatabase r = encode({3, 13, Variant::kClassic, true, true});
    Backbone bb = compute_backbone(r);
    CHECK(bb.literals.size() == 36);
    VariableMap m(3, 13);
    for (Lit l : bb.literals) CHECK(m.number_of(l.var()) != 7);

    VariableMap m2(2, 4);
    Backbone b2 = compute_backbone(encode({2, 4}), Cube{m2.lit(1, 1)});
    CHECK(b2.literals.size() == 8);

    ClauseDatabase two(2, {Clause{1, 2}, Clause{-1, -2}});
    Backbone none = compute_backbone(two);
    CHECK(none.literals.empty());
    CHECK_THROWS_AS(compute_backbone(encode({2, 5})), Error);
  }

  TEST_CASE("backbone equals the intersection of all models") {
    for (const auto& [name, db] : oracle::corpus()) {
      if (db.num_vars() > 16 || !oracle::satisfiable(db)) continue;
      CAPTURE(name);
      Backbone bb = compute_backbone(db);
      CHECK(std::set<Lit>(bb.literals.begin(), bb.literals.end()) == model_intersection(db));
    }
  }

  TEST_CASE("backdoors") {
    ClauseDatabase easy(3, {Clause{1, 2}, Clause{1, -2}});
    CHECK(solved_by_se_bce(easy, {}));
    CHECK(extend_to_backdoor(easy, to_lits({3})).assignment == to_lits({3}));

    ClauseDatabase r = encode({3, 13, Variant::kClassic, true, true});
    Backbone bb = compute_backbone(r);
    Backdoor bd = extend_to_backdoor(r, bb.literals);
    CHECK(bd.solver_tag == "SE+BCE");
    CHECK(solved_by_se_bce(r, bd.assignment));
    CHECK(bd.assignment.size() >= bb.literals.size());

    Backdoor small = extend_to_backdoor(encode({2, 4}));
    CHECK(small.assignment.size() <= 8);
    CHECK(solved_by_se_bce(encode({2, 4}), small.assignment));
  }

  TEST_CASE("multiplicative map") {
    Certificate fig{{1, 2, 2, 1, 3, 3, 1, 3, 3, 1, 2, 2, 1}};
    CHECK(multiplicative_map(fig, 1) == fig);
    Certificate m3 = multiplicative_map(fig, 3);
    CHECK(validate_certificate(m3, {3, 13, Variant::kPalindromic}).valid);
    CHECK_THROWS_AS(multiplicative_map(fig, 7), Error);
    CHECK_THROWS_AS(multiplicative_map(fig, 0), Error);
  }

  TEST_CASE("palindromic certificates at n = 13 are closed under every valid multiplier") {
    std::set<Certificate> pal = cert_set(encode({3, 13, Variant::kPalindromic}), 3, 13);
    REQUIRE(!pal.empty());
    int multipliers = 0;
    for (int p = 1; p < 14; ++p) {
      if (std::gcd(p, 14) != 1) continue;
      ++multipliers;
      for (const Certificate& c : pal) CHECK(pal.count(multiplicative_map(c, p)) == 1);
    }
    CHECK(multipliers == 6);
  }

  TEST_CASE("the multiplier is not a symmetry of classic problems") {
    bool found = false;
    for (int n = 5; n <= 13 && !found; ++n) {
      if (std::gcd(3, n + 1) != 1) continue;
      for (const Certificate& c : cert_set(encode({3, n}), 3, n)) {
        if (classify(c, 3, n).is_modular) continue;
        if (!validate_certificate(multiplicative_map(c, 3), {3, n}).valid) {
          found = true;
          break;
        }
      }
    }
    CHECK(found);
  }
}
