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

// Clausal proofs: text format, in-memory streams, a forward RUP checker and
// the assembly of implication and tautology proofs into one refutation.
//
// Text format: one step per line. An addition is a zero-terminated literal
// list, a deletion is the same prefixed with "d ". Lines starting with 'c'
// are comments.

#ifndef SCHUR_PROOF_HPP_
#define SCHUR_PROOF_HPP_

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "schur/cnf.hpp"

namespace schur {

struct ProofStep {
  enum class Kind : std::uint8_t { kAdd, kDelete } kind = Kind::kAdd;
  std::vector<Lit> lits;
  friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

/// Receives proof steps as they are produced.
class ProofSink {
 public:
  virtual ~ProofSink() = default;
  virtual void add(std::span<const Lit> lits) = 0;
  virtual void remove(std::span<const Lit> lits) = 0;
};

/// An append-only, in-memory proof.
class ProofStream : public ProofSink {
 public:
  void add(std::span<const Lit> lits) override {
    steps_.push_back({ProofStep::Kind::kAdd, {lits.begin(), lits.end()}});
  }
  void remove(std::span<const Lit> lits) override {
    steps_.push_back({ProofStep::Kind::kDelete, {lits.begin(), lits.end()}});
  }
  void append(const ProofStream& other) {
    steps_.insert(steps_.end(), other.steps_.begin(), other.steps_.end());
  }

  const std::vector<ProofStep>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  std::size_t num_additions() const;
  /// The last addition step, or nullptr if there is none.
  const ProofStep* last_addition() const;

  friend bool operator==(const ProofStream& a, const ProofStream& b) { return a.steps_ == b.steps_; }

 private:
  std::vector<ProofStep> steps_;
};

/// Writes steps in text form to an output stream.
class TextProofWriter : public ProofSink {
 public:
  explicit TextProofWriter(std::ostream& out) : out_(&out) {}
  void add(std::span<const Lit> lits) override;
  void remove(std::span<const Lit> lits) override;
  std::size_t additions() const { return additions_; }

 private:
  std::ostream* out_;
  std::string buf_;
  std::size_t additions_ = 0;
};

/// Reads one step at a time; returns false at end of input. Throws
/// ParseError with the step index.
class ProofReader {
 public:
  explicit ProofReader(std::istream& in) : in_(&in) {}
  bool next(ProofStep& step);
  std::size_t steps_read() const { return steps_; }

 private:
  std::istream* in_;
  std::string line_;
  std::size_t steps_ = 0;
  std::size_t lineno_ = 0;
};

ProofStream parse_proof(std::istream& in);
ProofStream parse_proof(std::string_view text);
void write_proof(std::ostream& out, const ProofStream& p);
std::string write_proof(const ProofStream& p);

// ---------------------------------------------------------------------------

/// Incremental forward checker: holds the active clause multiset and the
/// top-level unit-propagation fixpoint, and validates additions by RUP.
class RupChecker {
 public:
  explicit RupChecker(Var num_vars);
  explicit RupChecker(const ClauseDatabase& db);

  /// Adds a clause without checking it (formula clauses).
  void add_axiom(std::span<const Lit> lits);
  /// True iff propagating the negation of lits on the active set conflicts.
  bool is_rup(std::span<const Lit> lits);
  /// Checks then adds. Returns false (and adds nothing) if not RUP.
  bool add_lemma(std::span<const Lit> lits);
  /// Removes one copy; returns false if no such clause is active.
  bool remove(std::span<const Lit> lits);

  /// True once the empty clause is derivable by top-level propagation.
  bool inconsistent() const { return inconsistent_; }
  std::uint64_t propagations() const { return propagations_; }
  std::size_t active_clauses() const { return live_; }

 private:
  using CRef = std::uint32_t;
  struct Watch {
    CRef cref;
    std::uint32_t blocker;
  };

  void grow(Var v);
  std::int8_t value(std::uint32_t code) const;
  void assign(std::uint32_t code);
  bool propagate();  // false on conflict
  void backtrack(std::size_t trail_size);
  CRef store(std::span<const Lit> lits);
  void attach(CRef cref);
  std::vector<std::uint32_t> key(std::span<const Lit> lits) const;

  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& k) const;
  };

  std::vector<std::uint32_t> arena_;  // [size, alive, lits...]
  std::vector<std::vector<Watch>> watches_;
  std::vector<std::int8_t> vals_;  // by literal code
  std::vector<std::uint32_t> trail_;
  std::size_t qhead_ = 0;
  bool inconsistent_ = false;
  std::uint64_t propagations_ = 0;
  std::size_t live_ = 0;
  std::unordered_map<std::vector<std::uint32_t>, std::vector<CRef>, KeyHash> index_;
};

/// Single-step RUP check against a clause database.
bool check_rup_step(const ClauseDatabase& active, const Clause& c);
bool check_rup_step(const ClauseDatabase& active, std::span<const Lit> c);

struct CheckReport {
  enum class Verdict { kAccepted, kRejected } verdict = Verdict::kRejected;
  std::size_t failed_step = 0;  // 0-based step index when rejected
  std::string reason;
  std::size_t steps_checked = 0;
  std::size_t additions = 0;
  std::uint64_t propagations = 0;
  bool accepted() const { return verdict == Verdict::kAccepted; }
};

struct CheckOptions {
  bool honor_deletions = true;
};

CheckReport check_proof(const ClauseDatabase& db, const ProofStream& p,
                        const CheckOptions& opts = {});
/// Streams the proof from `in` without materializing it.
CheckReport check_proof(const ClauseDatabase& db, std::istream& in,
                        const CheckOptions& opts = {});

}  // namespace schur

#endif  // SCHUR_PROOF_HPP_
