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

#include "schur/lookahead.hpp"

#include <algorithm>
#include <cmath>

namespace schur {

using ClauseId = ClauseDatabase::ClauseId;

double clause_weight(const ClauseDatabase& db, std::span<const Lit> c) {
  if (c.empty()) throw Error("clause weight of the empty clause is undefined");
  double sum = 0;
  for (Lit l : c) sum += static_cast<double>(db.occurrence_count(~l));
  const double m = static_cast<double>(c.size());
  return sum / (std::ldexp(1.0, static_cast<int>(c.size())) * m);
}

double clause_weight(const ClauseDatabase& db, const Clause& c) {
  return clause_weight(db, c.lits());
}

LookaheadEngine::LookaheadEngine(const ClauseDatabase& db)
    : db_(&db),
      vals_(db.num_vars() + 1, kU),
      sat_count_(db.num_clauses(), 0),
      false_count_(db.num_clauses(), 0),
      touch_stamp_(db.num_clauses(), 0),
      occ_(2 * (std::size_t{db.num_vars()} + 1), 0) {
  for (const Clause& c : db.clauses()) {
    if (c.empty()) {
      conflict_ = true;
    } else if (c.size() == 1 && !conflict_) {
      assign(c[0]);
    }
  }
}

std::int8_t LookaheadEngine::val(Lit l) const {
  std::int8_t v = vals_[l.var()];
  return l.negative() ? static_cast<std::int8_t>(-v) : v;
}

Value LookaheadEngine::value(Lit l) const { return static_cast<Value>(val(l)); }

void LookaheadEngine::set(Lit l) {
  vals_[l.var()] = l.negative() ? kF : kT;
  trail_.push_back(l);
  ++work_;
  for (ClauseId c : db_->occurrences(l))
    if (sat_count_[c]++ == 0) ++num_sat_;
  for (ClauseId c : db_->occurrences(~l)) {
    ++false_count_[c];
    if (touch_stamp_[c] != stamp_) {
      touch_stamp_[c] = stamp_;
      touched_.push_back(c);
    }
  }
}

bool LookaheadEngine::propagate() {
  while (qhead_ < trail_.size()) {
    Lit x = trail_[qhead_++];
    for (ClauseId c : db_->occurrences(~x)) {
      if (sat_count_[c] != 0) continue;
      const Clause& cl = db_->clause(c);
      if (false_count_[c] == cl.size()) return false;
      if (false_count_[c] + 1 == cl.size()) {
        for (Lit y : cl)
          if (val(y) == kU) {
            set(y);
            break;
          }
      }
    }
  }
  return true;
}

void LookaheadEngine::undo_to(std::size_t trail_size) {
  while (trail_.size() > trail_size) {
    Lit l = trail_.back();
    trail_.pop_back();
    vals_[l.var()] = kU;
    for (ClauseId c : db_->occurrences(l))
      if (--sat_count_[c] == 0) --num_sat_;
    for (ClauseId c : db_->occurrences(~l)) --false_count_[c];
  }
  qhead_ = std::min(qhead_, trail_.size());
}

void LookaheadEngine::push() { levels_.push_back(trail_.size()); }

void LookaheadEngine::pop() {
  if (levels_.empty()) throw Error("look-ahead engine: pop without push");
  undo_to(levels_.back());
  levels_.pop_back();
  qhead_ = trail_.size();
  conflict_ = false;
}

bool LookaheadEngine::assign(Lit l) {
  if (conflict_) return false;
  if (val(l) == kT) return true;
  if (val(l) == kF) {
    conflict_ = true;
    return false;
  }
  set(l);
  if (!propagate()) conflict_ = true;
  touched_.clear();
  return !conflict_;
}

bool LookaheadEngine::trial(Lit l) {
  ++stamp_;
  touched_.clear();
  set(l);
  return propagate();
}

LookaheadResult LookaheadEngine::lookahead(Lit l) {
  LookaheadResult r;
  r.literal = l;
  if (conflict_ || val(l) == kF) {
    r.status = LookaheadResult::Status::kRefuted;
    return r;
  }
  if (val(l) == kT) {
    if (all_satisfied()) r.status = LookaheadResult::Status::kSatisfied;
    return r;
  }
  const std::size_t base = trail_.size();
  if (!trial(l)) {
    r.status = LookaheadResult::Status::kRefuted;
  } else {
    r.forced_literals.assign(trail_.begin() + static_cast<std::ptrdiff_t>(base) + 1, trail_.end());
    for (std::uint32_t c : touched_) {
      if (sat_count_[c] != 0) continue;
      std::vector<Lit> lits;
      for (Lit y : db_->clause(c))
        if (val(y) == kU) lits.push_back(y);
      r.reduced_clauses.emplace_back(std::move(lits), db_->clause(c).origin());
    }
    if (all_satisfied()) r.status = LookaheadResult::Status::kSatisfied;
  }
  undo_to(base);
  return r;
}

void LookaheadEngine::compute_occ() {
  std::fill(occ_.begin(), occ_.end(), 0);
  for (std::size_t c = 0; c < db_->num_clauses(); ++c) {
    if (sat_count_[c] != 0) continue;
    for (Lit l : db_->clause(static_cast<ClauseId>(c)))
      if (val(l) == kU) ++occ_[l.code()];
  }
}

double LookaheadEngine::weight_reduced(std::size_t c) const {
  double sum = 0;
  int m = 0;
  for (Lit l : db_->clause(static_cast<ClauseId>(c))) {
    if (val(l) != kU) continue;
    sum += occ_[(~l).code()];
    ++m;
  }
  return m == 0 ? 0.0 : sum / (std::ldexp(1.0, m) * m);
}

Ranking LookaheadEngine::rank(std::span<const Var> candidates, const RankOptions& opts) {
  Ranking r;
  if (conflict_) {
    r.refuted = true;
    return r;
  }
  const int iterations = std::max(1, opts.max_iterations);
  for (int iter = 0; iter < iterations; ++iter) {
    if (all_satisfied()) break;
    compute_occ();
    std::vector<Var> cands;
    for (Var v : candidates)
      if (vals_[v] == kU) cands.push_back(v);
    if (opts.preselect && !cands.empty()) {
      auto occ_of = [&](Var v) {
        return occ_[Lit::make(v, false).code()] + occ_[Lit::make(v, true).code()];
      };
      std::stable_sort(cands.begin(), cands.end(),
                       [&](Var a, Var b) { return occ_of(a) > occ_of(b); });
      auto keep = static_cast<std::size_t>(std::ceil(*opts.preselect * static_cast<double>(cands.size())));
      cands.resize(std::clamp<std::size_t>(keep, 1, cands.size()));
      std::sort(cands.begin(), cands.end());
    }

    r.scores.clear();
    bool found = false;
    for (Var v : cands) {
      if (vals_[v] != kU) continue;
      double s[2] = {0, 0};
      bool failed = false;
      for (int side = 0; side < 2 && !failed; ++side) {
        Lit l = Lit::make(v, side == 1);
        const std::size_t base = trail_.size();
        if (trial(l)) {
          // Summed in sorted order so the score ignores clause order.
          weights_.clear();
          for (std::uint32_t c : touched_)
            if (sat_count_[c] == 0) weights_.push_back(weight_reduced(c));
          std::sort(weights_.begin(), weights_.end());
          for (double w : weights_) s[side] += w;
          undo_to(base);
          continue;
        }
        undo_to(base);
        failed = found = true;
        r.failed.push_back(l);
        if (!assign(~l)) {
          r.refuted = true;
          r.scores.clear();
          return r;
        }
      }
      if (!failed) r.scores.push_back({v, s[0], s[1], s[0] * s[1]});
    }
    if (!found) break;
  }

  std::erase_if(r.scores, [&](const VariableScore& s) { return vals_[s.variable] != kU; });
  if (all_satisfied()) {
    r.satisfied = true;
    return r;
  }
  const VariableScore* best = nullptr;
  for (const VariableScore& s : r.scores)
    if (!best || s.product > best->product || (s.product == best->product && s.variable < best->variable))
      best = &s;
  if (best) r.best = best->variable;
  return r;
}

std::vector<Var> LookaheadEngine::free_vars() const {
  std::vector<char> mark(vals_.size(), 0);
  for (std::size_t c = 0; c < db_->num_clauses(); ++c) {
    if (sat_count_[c] != 0) continue;
    for (Lit l : db_->clause(static_cast<ClauseId>(c)))
      if (val(l) == kU) mark[l.var()] = 1;
  }
  std::vector<Var> out;
  for (Var v = 1; v < mark.size(); ++v)
    if (mark[v]) out.push_back(v);
  return out;
}

Ranking LookaheadEngine::rank_all(const RankOptions& opts) {
  auto vars = free_vars();
  return rank(vars, opts);
}

std::size_t LookaheadEngine::remaining_vars() const { return free_vars().size(); }

std::size_t LookaheadEngine::binary_clauses() const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < db_->num_clauses(); ++c)
    if (sat_count_[c] == 0 && db_->clause(static_cast<ClauseId>(c)).size() - false_count_[c] == 2) ++n;
  return n;
}

namespace {

void apply(LookaheadEngine& e, const Assignment& a) {
  e.push();
  for (Lit l : a.trail())
    if (!e.assign(l)) break;
}

}  // namespace

LookaheadResult lookahead_literal(const ClauseDatabase& db, const Assignment& a, Lit l) {
  LookaheadEngine e(db);
  apply(e, a);
  return e.lookahead(l);
}

Ranking rank_variables(const ClauseDatabase& db, const Assignment& a,
                       std::span<const Var> candidates, const RankOptions& opts) {
  LookaheadEngine e(db);
  apply(e, a);
  return e.rank(candidates, opts);
}

}  // namespace schur
