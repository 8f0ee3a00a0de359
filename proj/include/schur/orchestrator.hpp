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

// Parallel conquest of a cube partition with a resumable ledger, proof
// composition, the end-to-end pipeline and the cutoff sweep.

#ifndef SCHUR_ORCHESTRATOR_HPP_
#define SCHUR_ORCHESTRATOR_HPP_

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "schur/cdcl.hpp"
#include "schur/encode.hpp"
#include "schur/partition.hpp"

namespace schur {

std::string_view status_name(SolveStatus s);

struct LedgerRecord {
  std::size_t cube_index = 0;
  SolveStatus verdict = SolveStatus::kUnknown;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  double seconds = 0;
  std::optional<std::string> proof_path;
  std::optional<Certificate> certificate;

  std::string to_line() const;
  /// Throws ParseError (line 0) on malformed input.
  static LedgerRecord from_line(std::string_view line);
};

/// 64-bit FNV-1a of the formula and cube file bytes, as 16 hex digits.
std::string run_digest(std::string_view formula_bytes, std::string_view icnf_bytes);

/// Append-only record file bound to one (formula, partition) pair by a
/// digest header. Reopening with another digest throws. A torn last line
/// is ignored. append() is thread-safe.
class Ledger {
 public:
  Ledger(std::string path, std::string digest);
  const std::string& path() const { return path_; }
  /// Latest record per cube.
  const std::map<std::size_t, LedgerRecord>& records() const { return records_; }
  std::size_t lines() const { return lines_; }
  void append(const LedgerRecord& r);

 private:
  std::string path_;
  std::map<std::size_t, LedgerRecord> records_;
  std::size_t lines_ = 0;
  std::mutex mu_;
};

struct RunConfig {
  int jobs = 1;
  /// Learned-clause budget per worker; exceeding it aborts the cube.
  std::optional<std::size_t> memory_cap_per_worker;
  std::optional<std::uint64_t> conflict_limit;
  std::string ledger_path;  // empty: no ledger
  std::string proof_dir;    // empty: no proofs
  int max_retries = 3;
  bool seed_mix = false;
  std::uint64_t seed = 0;  // mixed into worker seeds when seed_mix is set
  std::optional<VariableMap> certificate_map;
  /// Stop after this many new records (partial runs).
  std::optional<std::size_t> max_new_records;
  const std::atomic<bool>* interrupt = nullptr;
};

struct ConquerSummary {
  std::size_t sat_cubes = 0;
  std::size_t unsat_cubes = 0;
  std::size_t unknown_cubes = 0;
  std::size_t resumed = 0;  // taken from an existing ledger
  std::size_t retries = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  double seconds = 0;
  std::vector<LedgerRecord> records;  // by cube index; missing cubes absent
};

/// Solves every open cube of cs on db. Refuted leaves are recorded unsat
/// with their look-ahead proof.
ConquerSummary conquer_run(const ClauseDatabase& db, const CubeSet& cs, const RunConfig& cfg);

std::string proof_file(const std::string& dir, std::size_t cube_index);

/// Streams the per-cube proofs of `dir` in cube order, then the tautology
/// proof (read from `taut` when given), into out. Throws Error if a proof is
/// missing or does not end with its negated cube. Returns the number of
/// steps written.
std::size_t compose_proof_files(const CubeSet& cs, const std::string& dir, std::ostream& out,
                                bool with_deletions = true, std::istream* taut = nullptr);

std::optional<int> known_value(int k, Variant variant);

struct PipelineConfig {
  SplitConfig split;
  std::optional<std::uint64_t> balance_split;  // W_split; W_merge = W_split/10
  std::optional<std::uint64_t> balance_merge;
  RunConfig run;
  std::optional<int> claim;  // default: the known value
  std::string work_dir;      // proofs, ledger and the composed proof
  bool evidence = true;      // enumeration-based F vs R evidence for k <= 3
};

struct PipelineReport {
  int k = 0;
  Variant variant = Variant::kClassic;
  int claim = 0;
  bool confirmed = false;
  std::string verdict;  // "value_confirmed" or "counterexample"
  std::optional<Certificate> lower_certificate;      // colors 1..claim
  std::optional<Certificate> counterexample;         // colors 1..claim+1
  std::size_t cubes = 0;
  std::size_t refuted_cubes = 0;
  ConquerSummary conquer;
  std::size_t proof_steps = 0;
  bool proof_accepted = false;
  std::string proof_path;
  double split_seconds = 0;
  double conquer_seconds = 0;
  double check_seconds = 0;
  double total_seconds = 0;
  // k <= 3 evidence.
  std::optional<std::size_t> models_f;
  std::optional<std::size_t> models_r;
  std::optional<bool> f_next_unsat;
  std::optional<bool> evidence_ok;

  std::string to_json() const;
};

/// encode, symmetry, split, balance, conquer, compose, check. Throws Error
/// prefixed with the failing stage.
PipelineReport pipeline(const ProblemSpec& spec, const PipelineConfig& cfg);

struct SweepRow {
  std::string label;
  std::size_t cubes = 0;
  std::size_t refuted = 0;
  double split_seconds = 0;
  double conquer_seconds = 0;
  double total_seconds() const { return split_seconds + conquer_seconds; }
};

/// Single-worker totals: pure CDCL (one empty cube) first, then one row per
/// split configuration.
std::vector<SweepRow> run_sweep(const ClauseDatabase& db, const std::vector<SplitConfig>& configs,
                                const std::vector<std::string>& labels);
std::string sweep_report(const std::vector<SweepRow>& rows);

}  // namespace schur

#endif  // SCHUR_ORCHESTRATOR_HPP_
