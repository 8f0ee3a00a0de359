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

// Unit-propagating simplification, subsumption elimination and blocked
// clause elimination over immutable ClauseDatabase values.

#include <algorithm>
#include <deque>
#include <numeric>

#include "schur/cnf.hpp"

namespace schur {

SimplifyResult simplify(const ClauseDatabase& db, const Assignment& a) {
  Assignment cur(db.num_vars());
  for (Lit l : a.trail()) cur.assign(l);  // throws on inconsistency

  // Queue-based propagation over the occurrence index: after each new
  // literal, rescan the clauses containing its complement.
  bool conflict = false;
  std::deque<Lit> queue(cur.trail().begin(), cur.trail().end());
  auto scan = [&](ClauseDatabase::ClauseId id) {
    const Clause& c = db.clause(id);
    Lit unit;
    int unassigned = 0;
    for (Lit l : c) {
      Value v = cur.value(l);
      if (v == Value::kTrue) return;
      if (v == Value::kUnassigned) {
        ++unassigned;
        unit = l;
      }
    }
    if (unassigned == 0) {
      conflict = true;
    } else if (unassigned == 1) {
      cur.assign(unit);
      queue.push_back(unit);
    }
  };
  for (ClauseDatabase::ClauseId id = 0; id < db.num_clauses() && !conflict; ++id)
    if (db.clause(id).size() <= 1 ||
        std::any_of(db.clause(id).begin(), db.clause(id).end(),
                    [&](Lit l) { return cur.is_false(l); }))
      scan(id);
  while (!queue.empty() && !conflict) {
    Lit l = queue.front();
    queue.pop_front();
    for (auto id : db.occurrences(~l)) {
      scan(id);
      if (conflict) break;
    }
  }

  std::vector<Clause> reduced;
  bool empty_added = false;
  for (const Clause& c : db.clauses()) {
    std::vector<Lit> lits;
    bool sat = false;
    for (Lit l : c) {
      Value v = cur.value(l);
      if (v == Value::kTrue) {
        sat = true;
        break;
      }
      if (v == Value::kUnassigned) lits.push_back(l);
    }
    if (sat) continue;
    if (lits.empty()) {
      if (empty_added) continue;
      empty_added = true;
    }
    reduced.emplace_back(std::move(lits), c.origin());
  }
  SimplifyStatus status = SimplifyStatus::kOpen;
  if (conflict || empty_added)
    status = SimplifyStatus::kConflict;
  else if (reduced.empty())
    status = SimplifyStatus::kSatisfied;
  return {ClauseDatabase(db.num_vars(), std::move(reduced)), std::move(cur), status};
}

namespace {

std::uint64_t signature(const Clause& c) {
  std::uint64_t s = 0;
  for (Lit l : c) s |= std::uint64_t{1} << (l.code() % 64);
  return s;
}

}  // namespace

ClauseDatabase subsumption_eliminate(const ClauseDatabase& db) {
  const std::size_t m = db.num_clauses();
  std::vector<std::uint64_t> sig(m);
  for (std::size_t i = 0; i < m; ++i) sig[i] = signature(db.clause(i));

  // Process candidates shortest first so a subsuming clause is always
  // examined (and kept) before the clauses it subsumes. Ties keep input
  // order, so of two identical clauses the earlier one survives.
  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return db.clause(a).size() < db.clause(b).size();
  });

  std::vector<bool> removed(m, false);
  std::vector<std::uint32_t> stamp(2 * (std::size_t{db.num_vars()} + 1), 0);
  std::uint32_t epoch = 0;
  for (std::uint32_t id : order) {
    if (removed[id]) continue;
    const Clause& c = db.clause(id);
    if (c.empty()) {
      for (std::uint32_t j = 0; j < m; ++j) removed[j] = j != id;
      break;
    }
    ++epoch;
    for (Lit l : c) stamp[l.code()] = epoch;
    // Every clause subsumed by c contains c's rarest literal.
    Lit best = c[0];
    for (Lit l : c)
      if (db.occurrence_count(l) < db.occurrence_count(best)) best = l;
    for (auto other : db.occurrences(best)) {
      if (other == id || removed[other]) continue;
      const Clause& d = db.clause(other);
      if (d.size() < c.size()) continue;
      if ((sig[id] & ~sig[other]) != 0) continue;
      std::size_t hit = 0;
      for (Lit l : d) hit += stamp[l.code()] == epoch;
      if (hit == c.size()) removed[other] = true;
    }
  }
  std::vector<Clause> kept;
  for (std::size_t i = 0; i < m; ++i)
    if (!removed[i]) kept.push_back(db.clause(i));
  return ClauseDatabase(db.num_vars(), std::move(kept));
}

BceResult blocked_clause_eliminate(const ClauseDatabase& db) {
  const std::size_t m = db.num_clauses();
  std::vector<bool> removed(m, false);
  std::vector<std::uint32_t> stamp(2 * (std::size_t{db.num_vars()} + 1), 0);
  std::uint32_t epoch = 0;

  // C is blocked on l iff every resolvent with an active clause containing
  // ~l is a tautology. Removal never unblocks a clause, so a worklist
  // seeded with every clause and refilled with the neighbours of removed
  // clauses reaches the unique fixpoint.
  auto blocked_on = [&](std::uint32_t id, Lit l) {
    const Clause& c = db.clause(id);
    ++epoch;
    for (Lit x : c) stamp[x.code()] = epoch;
    for (auto other : db.occurrences(~l)) {
      if (removed[other]) continue;
      bool taut = false;
      for (Lit y : db.clause(other)) {
        if (y == ~l) continue;
        if (stamp[(~y).code()] == epoch) {
          taut = true;
          break;
        }
      }
      if (!taut) return false;
    }
    return true;
  };

  std::deque<std::uint32_t> work(m);
  std::iota(work.begin(), work.end(), 0);
  std::vector<bool> queued(m, true);
  while (!work.empty()) {
    std::uint32_t id = work.front();
    work.pop_front();
    queued[id] = false;
    if (removed[id]) continue;
    const Clause& c = db.clause(id);
    bool blocked = false;
    for (Lit l : c)
      if (blocked_on(id, l)) {
        blocked = true;
        break;
      }
    if (!blocked) continue;
    removed[id] = true;
    // Clauses resolving with c on some literal may have become blocked.
    for (Lit l : c)
      for (auto other : db.occurrences(~l))
        if (!removed[other] && !queued[other]) {
          queued[other] = true;
          work.push_back(other);
        }
  }
  std::vector<Clause> kept;
  for (std::size_t i = 0; i < m; ++i)
    if (!removed[i]) kept.push_back(db.clause(i));
  bool solved = kept.empty();
  return {ClauseDatabase(db.num_vars(), std::move(kept)), solved};
}

FormulaStats formula_stats(const ClauseDatabase& db, const Assignment& a) {
  FormulaStats st;
  std::vector<bool> occurs(std::size_t{db.num_vars()} + 1, false);
  for (const Clause& c : db.clauses()) {
    std::size_t len = 0;
    bool sat = false;
    for (Lit l : c) {
      Value v = a.value(l);
      if (v == Value::kTrue) {
        sat = true;
        break;
      }
      if (v == Value::kUnassigned) ++len;
    }
    if (sat) continue;
    for (Lit l : c)
      if (a.value(l) == Value::kUnassigned) occurs[l.var()] = true;
    ++st.clause_histogram[len];
    if (len == 2) ++st.binary_clauses;
  }
  st.remaining_vars = static_cast<std::size_t>(std::count(occurs.begin(), occurs.end(), true));
  return st;
}

bool satisfies(const ClauseDatabase& db, const Assignment& a) {
  for (const Clause& c : db.clauses())
    if (std::none_of(c.begin(), c.end(), [&](Lit l) { return a.is_true(l); }))
      return false;
  return true;
}

}  // namespace schur
