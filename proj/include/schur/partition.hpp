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

// Cube partitions: a binary look-ahead tree whose leaves cover the search
// space, built under a binary-clause cutoff or the adaptive delta cutoff,
// then optionally rebalanced by a work-unit hardness predictor.

#ifndef SCHUR_PARTITION_HPP_
#define SCHUR_PARTITION_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "schur/cnf.hpp"
#include "schur/lookahead.hpp"
#include "schur/proof.hpp"

namespace schur {

class BudgetError : public Error {
 public:
  using Error::Error;
};

struct SplitConfig {
  enum class Mode { kBinaryClauses, kDownFactor };
  Mode mode = Mode::kDownFactor;
  std::size_t binary_limit = 3700;  // stop once a node has more binaries
  double e = 0.3;                   // down exponent
  double f = 0.02;                  // down factor
  std::optional<std::uint64_t> work_budget;
  int max_depth = 64;  // guard; deeper nodes become leaves
  RankOptions rank;

  static SplitConfig binary_clauses(std::size_t limit);
  static SplitConfig down_factor(double e, double f);
  /// Parses "binclauses:LIMIT" or "down:E,F".
  static SplitConfig parse(std::string_view mode);
  /// Throws Error on limit == 0, e <= 0 or f outside [0, 1).
  void validate() const;
};

struct SplitterState {
  double delta = 0;
  int depth = 0;
};

/// delta * (1 - f^(d^e)) with d = state.depth >= 1.
SplitterState delta_update(SplitterState state, const SplitConfig& cfg);
double delta_update(double delta, int depth, double e, double f);

enum class LeafStatus { kOpen, kRefuted };

struct CubeNode {
  int parent = -1;
  int left = -1;   // child with split var true
  int right = -1;  // child with split var false
  Var split = 0;
  Lit decision;    // literal on the edge from the parent
  std::vector<Lit> failed;  // failed literals found here, discovery order
  LeafStatus status = LeafStatus::kOpen;
  int depth = 0;
  std::size_t remaining_vars = 0;
  std::size_t binary_clauses = 0;
  bool leaf() const { return left < 0; }
};

/// The partition tree. Node 0 is the root; cubes are the leaves in
/// depth-first order, true branch first. A nonempty prefix is prepended to
/// every cube.
class CubeSet {
 public:
  CubeSet() : nodes_(1) {}
  explicit CubeSet(Cube prefix) : nodes_(1), prefix_(std::move(prefix)) {}

  const std::vector<CubeNode>& nodes() const { return nodes_; }
  const CubeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  CubeNode& node(int id) { return nodes_[static_cast<std::size_t>(id)]; }
  const Cube& prefix() const { return prefix_; }

  /// Leaf node ids in cube order.
  std::vector<int> leaves() const;
  std::vector<Cube> cubes() const;
  std::vector<LeafStatus> statuses() const;
  Cube cube_of(int id) const;
  std::size_t size() const { return leaves().size(); }
  std::size_t num_refuted() const;

  /// Turns leaf `id` into an internal node on v; returns {left, right}.
  std::pair<int, int> split(int id, Var v);
  /// Turns internal node `id` with two leaf children back into a leaf.
  void merge(int id);

  /// Rebuilds the tree from cubes; throws Error unless they are exactly the
  /// leaves of a complete binary tree in depth-first true-first order.
  static CubeSet from_cubes(std::span<const Cube> cubes);

 private:
  std::vector<CubeNode> nodes_;
  Cube prefix_;
  std::vector<int> free_;  // recycled node slots
  int alloc();
};

struct PartitionStats {
  std::uint64_t work = 0;  // look-ahead propagations
  std::size_t nodes = 0;
  std::size_t open_leaves = 0;
  std::size_t refuted_leaves = 0;
  double final_delta = 0;
};

/// Builds the look-ahead tree for db (under `root`, if given). Throws
/// BudgetError if the work budget runs out.
CubeSet build_partition(const ClauseDatabase& db, const SplitConfig& cfg, const Cube& root = {},
                        PartitionStats* stats = nullptr);

/// Work units consumed by a delta-mode partition (e = 1.0, f = 0.1) of db
/// under cube.
std::uint64_t predict_hardness(const ClauseDatabase& db, const Cube& cube);

struct BalanceOptions {
  int max_depth = 64;  // exceeding it raises BudgetError
  int jobs = 1;
  RankOptions rank;
};

struct BalanceStats {
  std::size_t splits = 0;
  std::size_t merges = 0;
  std::uint64_t max_leaf_hardness = 0;
  std::vector<std::uint64_t> leaf_hardness;  // in cube order, open leaves only
};

/// Splits open leaves whose predicted hardness reaches split_threshold and
/// merges sibling leaves whose combined prediction is below merge_threshold
/// (when the parent itself predicts below split_threshold), to a fixpoint.
CubeSet balance_partition(const ClauseDatabase& db, CubeSet cs, std::uint64_t split_threshold,
                          std::uint64_t merge_threshold, const BalanceOptions& opts = {},
                          BalanceStats* stats = nullptr);

void emit_icnf(std::ostream& out, std::span<const Cube> cubes);
std::string emit_icnf(const CubeSet& cs);
std::vector<Cube> parse_icnf(std::istream& in);
std::vector<Cube> parse_icnf(std::string_view text);

/// The clause set { ~alpha : alpha a cube of cs }.
ClauseDatabase negated_cubes(const CubeSet& cs, Var num_vars = 0);

/// Resolution proof of the empty clause (or of ~prefix) from the negated
/// cubes: one addition per internal node, in post-order.
ProofStream emit_tautology_proof(const CubeSet& cs, bool with_deletions = false);

/// RUP proof of ~cube for a leaf refuted by look-ahead: the failed-literal
/// lemmas along its path, then ~cube itself.
ProofStream refutation_proof(const CubeSet& cs, int leaf);

}  // namespace schur

#endif  // SCHUR_PARTITION_HPP_
