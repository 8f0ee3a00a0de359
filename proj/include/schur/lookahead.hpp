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

// Look-ahead engine: trial assignments with propagation, the clause weight
// w(F,C) = sum occ(F, ~l) / (2^|C| * |C|) over l in C, and the product score
// H(F,v) used to pick splitting variables.

#ifndef SCHUR_LOOKAHEAD_HPP_
#define SCHUR_LOOKAHEAD_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "schur/cnf.hpp"

namespace schur {

struct LookaheadResult {
  enum class Status { kOpen, kRefuted, kSatisfied };
  Lit literal;
  Status status = Status::kOpen;
  std::vector<Clause> reduced_clauses;  // F' \ F: shortened, not satisfied
  std::vector<Lit> forced_literals;     // propagated beyond `literal`
};

struct VariableScore {
  Var variable = 0;
  double score_pos = 0;
  double score_neg = 0;
  double product = 0;
};

struct Ranking {
  std::optional<Var> best;            // empty when refuted or nothing to split
  std::vector<VariableScore> scores;  // candidate order, last iteration
  std::vector<Lit> failed;            // literals whose look-ahead conflicted
  bool refuted = false;               // the node itself is unsatisfiable
  bool satisfied = false;             // every clause satisfied at the node
};

struct RankOptions {
  /// Rank only this fraction of candidates, chosen by occurrence count.
  std::optional<double> preselect;
  int max_iterations = 3;
};

/// w(F,C) with occurrence counts over every clause of db.
double clause_weight(const ClauseDatabase& db, std::span<const Lit> c);
double clause_weight(const ClauseDatabase& db, const Clause& c);

/// Incremental assignment state over a fixed database. Node-level
/// assignments form a stack of levels; look-aheads are undone on return.
class LookaheadEngine {
 public:
  explicit LookaheadEngine(const ClauseDatabase& db);

  const ClauseDatabase& db() const { return *db_; }

  /// Opens a new node level.
  void push();
  /// Undoes the most recent level.
  void pop();
  std::size_t levels() const { return levels_.size(); }

  /// Assigns l at the current level and propagates. Returns false on
  /// conflict; the engine then stays conflicting until pop().
  bool assign(Lit l);
  bool conflicting() const { return conflict_; }

  Value value(Var v) const { return static_cast<Value>(vals_[v]); }
  Value value(Lit l) const;
  std::vector<Lit> trail() const { return trail_; }

  LookaheadResult lookahead(Lit l);
  /// Scores candidates, asserting failed literals as found.
  Ranking rank(std::span<const Var> candidates, const RankOptions& opts = {});
  /// rank() over every unassigned variable that still occurs.
  Ranking rank_all(const RankOptions& opts = {});

  std::size_t remaining_vars() const;
  std::size_t binary_clauses() const;
  bool all_satisfied() const { return num_sat_ == db_->num_clauses(); }
  std::vector<Var> free_vars() const;

  /// Literals assigned so far by propagation, node and trial levels alike.
  std::uint64_t work() const { return work_; }

 private:
  enum : std::int8_t { kU = 0, kT = 1, kF = -1 };

  std::int8_t val(Lit l) const;
  void set(Lit l);
  bool propagate();
  void undo_to(std::size_t trail_size);
  // Trial look-ahead: returns false on conflict and leaves the touched set
  // in touched_ for inspection; caller undoes.
  bool trial(Lit l);
  void compute_occ();
  double weight_reduced(std::size_t c) const;

  const ClauseDatabase* db_;
  std::vector<std::int8_t> vals_;
  std::vector<std::uint32_t> sat_count_, false_count_;
  std::size_t num_sat_ = 0;
  std::vector<Lit> trail_;
  std::size_t qhead_ = 0;
  std::vector<std::size_t> levels_;
  bool conflict_ = false;
  std::uint64_t work_ = 0;

  std::vector<std::uint32_t> touched_;
  std::vector<std::uint32_t> touch_stamp_;
  std::uint32_t stamp_ = 0;
  std::vector<std::uint32_t> occ_;  // by literal code, over the node formula
  std::vector<double> weights_;
};

LookaheadResult lookahead_literal(const ClauseDatabase& db, const Assignment& a, Lit l);

/// Ranks candidates under a. The returned failed list holds every literal
/// whose look-ahead conflicted, in discovery order.
Ranking rank_variables(const ClauseDatabase& db, const Assignment& a,
                       std::span<const Var> candidates, const RankOptions& opts = {});

}  // namespace schur

#endif  // SCHUR_LOOKAHEAD_HPP_
