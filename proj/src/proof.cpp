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

#include "schur/proof.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace schur {

std::size_t ProofStream::num_additions() const {
  return static_cast<std::size_t>(std::count_if(steps_.begin(), steps_.end(), [](const ProofStep& s) {
    return s.kind == ProofStep::Kind::kAdd;
  }));
}

const ProofStep* ProofStream::last_addition() const {
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it)
    if (it->kind == ProofStep::Kind::kAdd) return &*it;
  return nullptr;
}

namespace {

void append_lits(std::string& buf, std::span<const Lit> lits) {
  char tmp[16];
  for (Lit l : lits) {
    auto [p, ec] = std::to_chars(tmp, tmp + sizeof tmp, l.dimacs());
    buf.append(tmp, p);
    buf += ' ';
  }
  buf += "0\n";
}

}  // namespace

void TextProofWriter::add(std::span<const Lit> lits) {
  buf_.clear();
  append_lits(buf_, lits);
  out_->write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  ++additions_;
}

void TextProofWriter::remove(std::span<const Lit> lits) {
  buf_.assign("d ");
  append_lits(buf_, lits);
  out_->write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
}

bool ProofReader::next(ProofStep& step) {
  while (std::getline(*in_, line_)) {
    ++lineno_;
    std::size_t i = 0;
    auto skip = [&] {
      while (i < line_.size() && (line_[i] == ' ' || line_[i] == '\t' || line_[i] == '\r')) ++i;
    };
    skip();
    if (i == line_.size() || line_[i] == 'c') continue;
    step.lits.clear();
    step.kind = ProofStep::Kind::kAdd;
    if (line_[i] == 'd') {
      step.kind = ProofStep::Kind::kDelete;
      ++i;
    }
    bool terminated = false;
    for (;;) {
      skip();
      if (i == line_.size()) break;
      int x = 0;
      auto [p, ec] = std::from_chars(line_.data() + i, line_.data() + line_.size(), x);
      if (ec != std::errc() || (p != line_.data() + line_.size() && *p != ' ' && *p != '\t' && *p != '\r'))
        throw ParseError(lineno_, "proof step " + std::to_string(steps_) + ": bad token");
      i = static_cast<std::size_t>(p - line_.data());
      if (x == 0) {
        terminated = true;
        skip();
        if (i != line_.size())
          throw ParseError(lineno_, "proof step " + std::to_string(steps_) + ": text after 0");
        break;
      }
      step.lits.emplace_back(x);
    }
    if (!terminated)
      throw ParseError(lineno_, "proof step " + std::to_string(steps_) + ": missing terminating 0");
    ++steps_;
    return true;
  }
  return false;
}

ProofStream parse_proof(std::istream& in) {
  ProofReader r(in);
  ProofStream p;
  ProofStep s;
  while (r.next(s)) {
    if (s.kind == ProofStep::Kind::kAdd)
      p.add(s.lits);
    else
      p.remove(s.lits);
  }
  return p;
}

ProofStream parse_proof(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_proof(in);
}

void write_proof(std::ostream& out, const ProofStream& p) {
  TextProofWriter w(out);
  for (const ProofStep& s : p.steps()) {
    if (s.kind == ProofStep::Kind::kAdd)
      w.add(s.lits);
    else
      w.remove(s.lits);
  }
}

std::string write_proof(const ProofStream& p) {
  std::ostringstream out;
  write_proof(out, p);
  return out.str();
}

// ---------------------------------------------------------------------------
// RupChecker

namespace {
inline std::uint32_t negc(std::uint32_t c) { return c ^ 1u; }
}  // namespace

std::size_t RupChecker::KeyHash::operator()(const std::vector<std::uint32_t>& k) const {
  std::uint64_t h = 1469598103934665603ull;
  for (auto x : k) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

RupChecker::RupChecker(Var num_vars) { grow(num_vars); }

RupChecker::RupChecker(const ClauseDatabase& db) {
  grow(db.num_vars());
  for (const Clause& c : db.clauses()) add_axiom(c.lits());
}

void RupChecker::grow(Var v) {
  std::size_t codes = 2 * (std::size_t{v} + 1);
  if (vals_.size() < codes) {
    vals_.resize(codes, 0);
    watches_.resize(codes);
  }
}

std::int8_t RupChecker::value(std::uint32_t code) const { return vals_[code]; }

void RupChecker::assign(std::uint32_t code) {
  vals_[code] = 1;
  vals_[negc(code)] = -1;
  trail_.push_back(code);
}

void RupChecker::backtrack(std::size_t trail_size) {
  for (std::size_t i = trail_.size(); i-- > trail_size;) {
    vals_[trail_[i]] = 0;
    vals_[negc(trail_[i])] = 0;
  }
  trail_.resize(trail_size);
  qhead_ = trail_size;
}

bool RupChecker::propagate() {
  while (qhead_ < trail_.size()) {
    std::uint32_t fl = negc(trail_[qhead_++]);
    ++propagations_;
    auto& ws = watches_[fl];
    std::size_t i = 0, j = 0;
    const std::size_t n = ws.size();
    bool conflict = false;
    while (i < n) {
      Watch w = ws[i++];
      std::uint32_t* c = &arena_[w.cref];
      if (c[1] == 0) continue;  // deleted: drop the watch
      if (value(w.blocker) == 1) {
        ws[j++] = w;
        continue;
      }
      std::uint32_t* l = c + 2;
      const std::uint32_t sz = c[0];
      if (l[0] == fl) std::swap(l[0], l[1]);
      std::uint32_t first = l[0];
      if (first != w.blocker && value(first) == 1) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::uint32_t k = 2; k < sz; ++k) {
        if (value(l[k]) != -1) {
          l[1] = l[k];
          l[k] = fl;
          watches_[l[1]].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == -1) {
        conflict = true;
        while (i < n) ws[j++] = ws[i++];
      } else {
        assign(first);
      }
    }
    ws.resize(j);
    if (conflict) return false;
  }
  return true;
}

std::vector<std::uint32_t> RupChecker::key(std::span<const Lit> lits) const {
  std::vector<std::uint32_t> k;
  k.reserve(lits.size());
  for (Lit l : lits) k.push_back(l.code());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

RupChecker::CRef RupChecker::store(std::span<const Lit> lits) {
  auto k = key(lits);
  CRef cref = static_cast<CRef>(arena_.size());
  arena_.push_back(static_cast<std::uint32_t>(k.size()));
  arena_.push_back(1);
  arena_.insert(arena_.end(), k.begin(), k.end());
  index_[std::move(k)].push_back(cref);
  ++live_;
  return cref;
}

void RupChecker::attach(CRef cref) {
  std::uint32_t* c = &arena_[cref];
  const std::uint32_t sz = c[0];
  std::uint32_t* l = c + 2;
  for (std::uint32_t i = 1; i < sz; ++i)
    if (l[i] == negc(l[i - 1])) return;  // tautology (sorted codes): never propagates
  if (inconsistent_) return;
  // Move non-false literals to the front.
  std::stable_partition(l, l + sz, [&](std::uint32_t x) { return value(x) != -1; });
  std::uint32_t nonfalse = 0;
  bool sat = false;
  for (std::uint32_t i = 0; i < sz; ++i) {
    if (value(l[i]) != -1) ++nonfalse;
    if (value(l[i]) == 1) sat = true;
  }
  if (sz >= 2) {
    watches_[l[0]].push_back({cref, l[1]});
    watches_[l[1]].push_back({cref, l[0]});
  }
  if (sat) return;
  if (nonfalse == 0) {
    inconsistent_ = true;
  } else if (nonfalse == 1) {
    assign(l[0]);
    if (!propagate()) inconsistent_ = true;
  }
}

void RupChecker::add_axiom(std::span<const Lit> lits) {
  Var maxv = 0;
  for (Lit l : lits) maxv = std::max(maxv, l.var());
  grow(maxv);
  attach(store(lits));
}

bool RupChecker::is_rup(std::span<const Lit> lits) {
  if (inconsistent_) return true;
  const std::size_t saved = trail_.size();
  Var maxv = 0;
  for (Lit l : lits) maxv = std::max(maxv, l.var());
  grow(maxv);
  bool conflict = false;
  for (Lit l : lits) {
    std::uint32_t c = l.code();
    if (value(c) == 1) {
      conflict = true;
      break;
    }
    if (value(c) == 0) assign(negc(c));
  }
  if (!conflict) conflict = !propagate();
  backtrack(saved);
  return conflict;
}

bool RupChecker::add_lemma(std::span<const Lit> lits) {
  if (!is_rup(lits)) return false;
  add_axiom(lits);
  return true;
}

bool RupChecker::remove(std::span<const Lit> lits) {
  auto it = index_.find(key(lits));
  if (it == index_.end() || it->second.empty()) return false;
  CRef cref = it->second.back();
  it->second.pop_back();
  if (it->second.empty()) index_.erase(it);
  arena_[cref + 1] = 0;
  --live_;
  return true;
}

bool check_rup_step(const ClauseDatabase& active, std::span<const Lit> c) {
  RupChecker checker(active);
  return checker.is_rup(c);
}

bool check_rup_step(const ClauseDatabase& active, const Clause& c) {
  return check_rup_step(active, c.lits());
}

namespace {

template <typename NextStep>
CheckReport run_check(const ClauseDatabase& db, NextStep&& next, const CheckOptions& opts) {
  CheckReport rep;
  RupChecker checker(db);
  ProofStep step;
  std::size_t index = 0;
  bool derived_empty = false;
  while (next(step)) {
    ++rep.steps_checked;
    if (step.kind == ProofStep::Kind::kAdd) {
      ++rep.additions;
      if (!checker.add_lemma(step.lits)) {
        rep.verdict = CheckReport::Verdict::kRejected;
        rep.failed_step = index;
        rep.reason = "lemma '" + format_lits(step.lits) +
                     "' is not RUP (RAT-only steps are not supported)";
        rep.propagations = checker.propagations();
        return rep;
      }
      if (step.lits.empty()) {
        derived_empty = true;
        break;
      }
    } else if (opts.honor_deletions) {
      if (!checker.remove(step.lits)) {
        rep.verdict = CheckReport::Verdict::kRejected;
        rep.failed_step = index;
        rep.reason = "deletion of inactive clause '" + format_lits(step.lits) + "'";
        rep.propagations = checker.propagations();
        return rep;
      }
    }
    ++index;
  }
  rep.propagations = checker.propagations();
  if (derived_empty) {
    rep.verdict = CheckReport::Verdict::kAccepted;
  } else {
    rep.verdict = CheckReport::Verdict::kRejected;
    rep.failed_step = index;
    rep.reason = "proof does not derive the empty clause";
  }
  return rep;
}

}  // namespace

CheckReport check_proof(const ClauseDatabase& db, const ProofStream& p, const CheckOptions& opts) {
  std::size_t i = 0;
  return run_check(
      db,
      [&](ProofStep& s) {
        if (i >= p.steps().size()) return false;
        s = p.steps()[i++];
        return true;
      },
      opts);
}

CheckReport check_proof(const ClauseDatabase& db, std::istream& in, const CheckOptions& opts) {
  ProofReader reader(in);
  return run_check(db, [&](ProofStep& s) { return reader.next(s); }, opts);
}

}  // namespace schur
