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

#include "schur/cnf.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

namespace schur {

std::string_view origin_name(Origin o) {
  switch (o) {
    case Origin::kPositive: return "positive";
    case Origin::kNegative: return "negative";
    case Origin::kOptional: return "optional";
    case Origin::kSymmetry: return "symmetry";
    case Origin::kLearned: return "learned";
    case Origin::kCubeNegation: return "cube-negation";
    case Origin::kPalindrome: return "palindrome";
  }
  return "?";
}

Clause::Clause(std::vector<Lit> lits, Origin origin)
    : lits_(std::move(lits)), origin_(origin) {
  std::vector<int> seen;
  seen.reserve(lits_.size());
  for (Lit l : lits_) {
    if (!l.valid()) throw Error("clause contains literal 0");
    seen.push_back(l.dimacs());
  }
  std::sort(seen.begin(), seen.end(),
            [](int a, int b) { return std::abs(a) < std::abs(b) ||
                                      (std::abs(a) == std::abs(b) && a < b); });
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (seen[i] == seen[i - 1])
      throw Error("duplicate literal " + std::to_string(seen[i]) + " in clause");
    if (seen[i] == -seen[i - 1])
      throw Error("tautological clause on variable " +
                  std::to_string(std::abs(seen[i])));
  }
}

Clause::Clause(std::initializer_list<int> lits, Origin origin)
    : Clause(to_lits(lits), origin) {}

bool Clause::contains(Lit l) const {
  return std::find(lits_.begin(), lits_.end(), l) != lits_.end();
}

ClauseDatabase::ClauseDatabase(Var num_vars, std::vector<Clause> clauses)
    : num_vars_(num_vars), clauses_(std::move(clauses)) {
  for (const Clause& c : clauses_)
    for (Lit l : c)
      if (l.var() > num_vars_)
        throw Error("literal " + std::to_string(l.dimacs()) +
                    " exceeds variable count " + std::to_string(num_vars_));
  occ_ = build_index(num_vars_, clauses_);
}

std::vector<std::vector<ClauseDatabase::ClauseId>> ClauseDatabase::build_index(
    Var num_vars, const std::vector<Clause>& clauses) {
  std::vector<std::vector<ClauseId>> occ(2 * (std::size_t{num_vars} + 1));
  for (ClauseId id = 0; id < clauses.size(); ++id)
    for (Lit l : clauses[id]) occ[l.code()].push_back(id);
  return occ;
}

ClauseDatabase ClauseDatabase::with_clauses(std::span<const Clause> extra) const {
  std::vector<Clause> all = clauses_;
  all.insert(all.end(), extra.begin(), extra.end());
  return ClauseDatabase(num_vars_, std::move(all));
}

bool ClauseDatabase::occurrence_index_consistent() const {
  return build_index(num_vars_, clauses_) == occ_;
}

void Assignment::assign(Lit l) {
  if (l.var() >= values_.size()) values_.resize(l.var() + 1, Value::kUnassigned);
  Value want = l.negative() ? Value::kFalse : Value::kTrue;
  Value& cur = values_[l.var()];
  if (cur == want) return;
  if (cur != Value::kUnassigned)
    throw Error("inconsistent assignment on variable " + std::to_string(l.var()));
  cur = want;
  trail_.push_back(l);
}

Assignment Assignment::from_literals(Var num_vars, std::span<const Lit> lits) {
  Assignment a(num_vars);
  for (Lit l : lits) a.assign(l);
  return a;
}

std::vector<Lit> to_lits(std::initializer_list<int> xs) {
  std::vector<Lit> out;
  out.reserve(xs.size());
  for (int x : xs) out.emplace_back(x);
  return out;
}

std::string format_lits(std::span<const Lit> lits) {
  std::string s;
  for (Lit l : lits) {
    s += std::to_string(l.dimacs());
    s += ' ';
  }
  s += '0';
  return s;
}

// ---------------------------------------------------------------------------

namespace {

bool parse_int(std::string_view tok, long long& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace

ClauseDatabase parse_dimacs(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  long long declared_vars = 0, declared_clauses = 0;
  std::vector<Clause> clauses;
  std::vector<Lit> pending;
  std::size_t pending_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "c" || toks[0][0] == 'c') continue;
    if (toks[0] == "p") {
      if (have_header) throw ParseError(lineno, "duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf" ||
          !parse_int(toks[2], declared_vars) ||
          !parse_int(toks[3], declared_clauses) || declared_vars < 0 ||
          declared_clauses < 0)
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause before 'p cnf' header");
    for (auto tok : toks) {
      long long x;
      if (!parse_int(tok, x)) throw ParseError(lineno, "bad token '" + std::string(tok) + "'");
      if (x == 0) {
        try {
          clauses.emplace_back(std::move(pending), Origin::kPositive);
        } catch (const ParseError&) {
          throw;
        } catch (const Error& e) {
          throw ParseError(lineno, e.what());
        }
        pending.clear();
        continue;
      }
      if (std::llabs(x) > declared_vars)
        throw ParseError(lineno, "literal " + std::to_string(x) +
                                     " exceeds declared variable count " +
                                     std::to_string(declared_vars));
      if (pending.empty()) pending_line = lineno;
      pending.emplace_back(static_cast<int>(x));
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!pending.empty())
    throw ParseError(pending_line, "clause missing terminating 0");
  if (static_cast<long long>(clauses.size()) != declared_clauses)
    throw ParseError(lineno, "header declares " + std::to_string(declared_clauses) +
                                 " clauses, found " + std::to_string(clauses.size()));
  return ClauseDatabase(static_cast<Var>(declared_vars), std::move(clauses));
}

ClauseDatabase parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const ClauseDatabase& db,
                  std::span<const std::string> comments) {
  for (const auto& c : comments) out << "c " << c << '\n';
  out << "p cnf " << db.num_vars() << ' ' << db.num_clauses() << '\n';
  std::string buf;
  for (const Clause& c : db.clauses()) {
    buf.clear();
    for (Lit l : c) {
      buf += std::to_string(l.dimacs());
      buf += ' ';
    }
    buf += "0\n";
    out << buf;
  }
}

std::string write_dimacs(const ClauseDatabase& db) {
  std::ostringstream out;
  write_dimacs(out, db);
  return out.str();
}

}  // namespace schur
