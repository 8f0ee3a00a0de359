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

// Conflict-driven clause-learning solver used to conquer cubes.
//
// Conventional design: two watched literals with blockers, first-UIP
// learning with recursive minimization, VSIDS with phase saving, Luby or
// geometric restarts and LBD-based learned-clause reduction. Assumptions
// are decided first, one per decision level. Every learned clause and every
// learned-clause deletion is reported to the optional proof sink.

#ifndef SCHUR_CDCL_HPP_
#define SCHUR_CDCL_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "schur/cnf.hpp"
#include "schur/proof.hpp"

namespace schur {

struct SolverConfig {
  enum class Restart { kLuby, kGeometric };
  Restart restart = Restart::kLuby;
  std::uint32_t restart_base = 64;  // conflicts
  double restart_factor = 1.5;      // geometric only

  // Learned-clause reduction: first at reduce_first conflicts, then every
  // reduce_first + k * reduce_increment. Clauses with LBD <= keep_lbd stay.
  std::uint32_t reduce_first = 2000;
  std::uint32_t reduce_increment = 300;
  std::uint32_t keep_lbd = 2;

  ProofSink* proof = nullptr;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> conflict_limit;
  /// Abort with kUnknown once learned clauses exceed this many bytes.
  std::optional<std::size_t> learnt_bytes_cap;
  const std::atomic<bool>* interrupt = nullptr;
};

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t learned = 0;
  std::uint64_t deleted = 0;
  std::uint64_t restarts = 0;
  std::size_t peak_learnt_bytes = 0;
};

enum class SolveStatus { kSat, kUnsat, kUnknown };

struct SolveOutcome {
  SolveStatus status = SolveStatus::kUnknown;
  Assignment model;  // total over 1..num_vars when kSat
  SolverStats stats;
  bool memory_abort = false;
};

class Solver {
 public:
  Solver(const ClauseDatabase& db, SolverConfig cfg = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  /// Adds an input clause between solve calls. Input clauses are not
  /// written to the proof sink.
  void add_clause(std::span<const Lit> lits);
  /// Throws Error if the assumptions are inconsistent. Statistics are
  /// cumulative over the solver's lifetime.
  SolveOutcome solve(std::span<const Lit> assumptions = {});

  const SolverStats& stats() const;
  Var num_vars() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot solve of db under the assumption cube.
SolveOutcome cdcl_solve(const ClauseDatabase& db, std::span<const Lit> assumptions = {},
                        const SolverConfig& cfg = {});

/// i-th element (0-based) of the Luby sequence 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t i);

}  // namespace schur

#endif  // SCHUR_CDCL_HPP_
