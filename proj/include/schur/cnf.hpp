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

#ifndef SCHUR_CNF_HPP_
#define SCHUR_CNF_HPP_

#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace schur {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (DIMACS, iCNF, proofs, certificate files).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using Var = std::uint32_t;

/// A literal in DIMACS convention: magnitude is the variable, sign the
/// polarity. The code() view maps literals densely onto 2*var + sign for
/// per-literal arrays.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr explicit Lit(int dimacs) : value_(dimacs) {}
  static Lit make(Var v, bool negative) {
    return Lit(negative ? -static_cast<int>(v) : static_cast<int>(v));
  }
  static Lit from_code(std::uint32_t code) {
    return make(code >> 1, (code & 1u) != 0);
  }

  constexpr int dimacs() const { return value_; }
  constexpr Var var() const {
    return static_cast<Var>(value_ < 0 ? -value_ : value_);
  }
  constexpr bool negative() const { return value_ < 0; }
  constexpr std::uint32_t code() const {
    return 2u * var() + (negative() ? 1u : 0u);
  }
  constexpr Lit operator~() const { return Lit(-value_); }
  constexpr bool valid() const { return value_ != 0; }

  friend constexpr bool operator==(Lit a, Lit b) = default;
  friend constexpr auto operator<=>(Lit a, Lit b) = default;

 private:
  int value_ = 0;
};

enum class Origin : std::uint8_t {
  kPositive,
  kNegative,
  kOptional,
  kSymmetry,
  kLearned,
  kCubeNegation,
  kPalindrome,
};

std::string_view origin_name(Origin o);

/// A disjunction of distinct, non-complementary literals. Literal order is
/// preserved as given.
class Clause {
 public:
  Clause() = default;
  /// Throws Error on a zero literal, a duplicate literal or a tautology.
  explicit Clause(std::vector<Lit> lits, Origin origin = Origin::kPositive);
  Clause(std::initializer_list<int> lits, Origin origin = Origin::kPositive);

  std::span<const Lit> lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  Lit operator[](std::size_t i) const { return lits_[i]; }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  Origin origin() const { return origin_; }
  void set_origin(Origin o) { origin_ = o; }
  bool contains(Lit l) const;

  /// Literal sets compare equal; origin is metadata and does not take part.
  friend bool operator==(const Clause& a, const Clause& b) {
    return a.lits_ == b.lits_;
  }

 private:
  std::vector<Lit> lits_;
  Origin origin_ = Origin::kPositive;
};

/// A CNF formula. Immutable after construction; the occurrence index is
/// built once and shared by all readers.
class ClauseDatabase {
 public:
  using ClauseId = std::uint32_t;

  ClauseDatabase() = default;
  /// Throws Error if a literal exceeds num_vars.
  ClauseDatabase(Var num_vars, std::vector<Clause> clauses);

  Var num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Clause& clause(ClauseId id) const { return clauses_[id]; }
  /// Clause ids containing l, ascending.
  std::span<const ClauseId> occurrences(Lit l) const { return occ_[l.code()]; }
  std::size_t occurrence_count(Lit l) const { return occ_[l.code()].size(); }

  /// Returns a new database with extra clauses appended.
  ClauseDatabase with_clauses(std::span<const Clause> extra) const;
  /// Rebuilds the index from scratch and compares it to the stored one.
  bool occurrence_index_consistent() const;

  friend bool operator==(const ClauseDatabase& a, const ClauseDatabase& b) {
    return a.num_vars_ == b.num_vars_ && a.clauses_ == b.clauses_;
  }

 private:
  static std::vector<std::vector<ClauseId>> build_index(
      Var num_vars, const std::vector<Clause>& clauses);

  Var num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::vector<std::vector<ClauseId>> occ_;
};

enum class Value : std::int8_t { kFalse = -1, kUnassigned = 0, kTrue = 1 };

/// Partial assignment with its trail. Read as a cube, the trail is the
/// conjunction of the assigned literals.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(Var num_vars) : values_(num_vars + 1, Value::kUnassigned) {}

  Var num_vars() const {
    return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1);
  }
  Value value(Var v) const {
    return v < values_.size() ? values_[v] : Value::kUnassigned;
  }
  Value value(Lit l) const {
    Value v = value(l.var());
    if (l.negative() && v != Value::kUnassigned)
      return v == Value::kTrue ? Value::kFalse : Value::kTrue;
    return v;
  }
  bool is_true(Lit l) const { return value(l) == Value::kTrue; }
  bool is_false(Lit l) const { return value(l) == Value::kFalse; }
  bool assigned(Var v) const { return value(v) != Value::kUnassigned; }

  /// Throws Error if l's variable is already assigned the other way.
  /// Re-assigning the same polarity is a no-op.
  void assign(Lit l);
  const std::vector<Lit>& trail() const { return trail_; }
  std::size_t size() const { return trail_.size(); }

  static Assignment from_literals(Var num_vars, std::span<const Lit> lits);

  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.trail_ == b.trail_;
  }

 private:
  std::vector<Value> values_;
  std::vector<Lit> trail_;
};

using Cube = std::vector<Lit>;

std::vector<Lit> to_lits(std::initializer_list<int> xs);
std::string format_lits(std::span<const Lit> lits);

// ---------------------------------------------------------------------------
// DIMACS

ClauseDatabase parse_dimacs(std::istream& in);
ClauseDatabase parse_dimacs(std::string_view text);
/// Deterministic writer; comment lines are emitted only when given.
void write_dimacs(std::ostream& out, const ClauseDatabase& db,
                  std::span<const std::string> comments = {});
std::string write_dimacs(const ClauseDatabase& db);

// ---------------------------------------------------------------------------
// Simplification and statistics

enum class SimplifyStatus { kOpen, kSatisfied, kConflict };

struct SimplifyResult {
  ClauseDatabase formula;
  Assignment assignment;
  SimplifyStatus status = SimplifyStatus::kOpen;
};

/// Applies `a`, propagates units to fixpoint, and returns the reduced
/// formula: satisfied clauses dropped, falsified literals removed. On a
/// conflict the reduced formula contains the empty clause.
SimplifyResult simplify(const ClauseDatabase& db, const Assignment& a);

ClauseDatabase subsumption_eliminate(const ClauseDatabase& db);

struct BceResult {
  ClauseDatabase formula;
  bool solved = false;
};
BceResult blocked_clause_eliminate(const ClauseDatabase& db);

struct FormulaStats {
  std::size_t remaining_vars = 0;
  std::size_t binary_clauses = 0;
  std::map<std::size_t, std::size_t> clause_histogram;
};

/// Counts effective lengths: unassigned literals of unsatisfied clauses.
FormulaStats formula_stats(const ClauseDatabase& db, const Assignment& a);

/// True iff every clause has a literal made true by `a`.
bool satisfies(const ClauseDatabase& db, const Assignment& a);

}  // namespace schur

#endif  // SCHUR_CNF_HPP_
