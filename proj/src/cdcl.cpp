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

#include "schur/cdcl.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace schur {

std::uint64_t luby(std::uint64_t i) {
  // Find the finite subsequence containing index i and its size.
  std::uint64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return std::uint64_t{1} << seq;
}

namespace {

using Code = std::uint32_t;  // literal code: 2 * var + negative
using CRef = std::uint32_t;
constexpr CRef kNoRef = std::numeric_limits<CRef>::max();
constexpr std::size_t kHeader = 3;  // size, flags, activity

inline Code neg(Code c) { return c ^ 1u; }
inline Var var_of(Code c) { return c >> 1; }
inline Lit to_lit(Code c) { return Lit::from_code(c); }

struct Watcher {
  CRef cref;
  Code blocker;
};

// Max-heap of variables keyed by activity.
class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& act) : act_(act) {}
  void resize(Var n) { pos_.assign(n + 1, -1); }
  bool contains(Var v) const { return pos_[v] >= 0; }
  bool empty() const { return heap_.empty(); }
  void insert(Var v) {
    if (contains(v)) return;
    pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(pos_[v]);
  }
  void increased(Var v) {
    if (contains(v)) up(pos_[v]);
  }
  Var pop() {
    Var top = heap_[0];
    heap_[0] = heap_.back();
    pos_[heap_[0]] = 0;
    pos_[top] = -1;
    heap_.pop_back();
    if (!heap_.empty()) down(0);
    return top;
  }

 private:
  bool less(Var a, Var b) const {
    return act_[a] > act_[b] || (act_[a] == act_[b] && a < b);
  }
  void up(int i) {
    Var v = heap_[i];
    while (i > 0) {
      int p = (i - 1) >> 1;
      if (!less(v, heap_[p])) break;
      heap_[i] = heap_[p];
      pos_[heap_[i]] = i;
      i = p;
    }
    heap_[i] = v;
    pos_[v] = i;
  }
  void down(int i) {
    Var v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    for (;;) {
      int c = 2 * i + 1;
      if (c >= n) break;
      if (c + 1 < n && less(heap_[c + 1], heap_[c])) ++c;
      if (!less(heap_[c], v)) break;
      heap_[i] = heap_[c];
      pos_[heap_[i]] = i;
      i = c;
    }
    heap_[i] = v;
    pos_[v] = i;
  }

  const std::vector<double>& act_;
  std::vector<Var> heap_;
  std::vector<int> pos_;
};

}  // namespace

struct Solver::Impl {
  SolverConfig cfg;
  Var nvars = 0;
  SolverStats stats;

  std::vector<std::uint32_t> arena;
  std::size_t wasted = 0;
  std::vector<CRef> learnts;
  std::vector<std::vector<Watcher>> watches;  // by the watched literal's code
  std::vector<Code> originals;                // flat, 0-separated, for model checks

  std::vector<std::int8_t> vals;  // by literal code
  std::vector<int> level;
  std::vector<CRef> reason;
  std::vector<Code> trail;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;

  std::vector<double> activity;
  double var_inc = 1.0;
  double cla_inc = 1.0;
  VarHeap heap{activity};
  std::vector<std::int8_t> phase;

  std::vector<std::int8_t> seen;
  std::vector<Code> analyze_stack;
  std::vector<Code> analyze_clear;
  std::vector<std::uint64_t> level_stamp;
  std::uint64_t stamp_epoch = 0;

  std::size_t learnt_bytes = 0;
  bool unsat = false;
  std::vector<Lit> scratch;

  // -- clause arena -------------------------------------------------------
  std::uint32_t& size_of(CRef c) { return arena[c]; }
  std::uint32_t& flags_of(CRef c) { return arena[c + 1]; }
  bool learnt(CRef c) const { return (arena[c + 1] & 1u) != 0; }
  bool deleted(CRef c) const { return (arena[c + 1] & 2u) != 0; }
  std::uint32_t lbd(CRef c) const { return arena[c + 1] >> 2; }
  float& act_of(CRef c) { return *reinterpret_cast<float*>(&arena[c + 2]); }
  Code* lits(CRef c) { return &arena[c + kHeader]; }

  CRef alloc(std::span<const Code> ls, bool is_learnt, std::uint32_t lbd_value) {
    CRef c = static_cast<CRef>(arena.size());
    arena.push_back(static_cast<std::uint32_t>(ls.size()));
    arena.push_back((is_learnt ? 1u : 0u) | (lbd_value << 2));
    arena.push_back(0);
    act_of(c) = 0.0f;
    arena.insert(arena.end(), ls.begin(), ls.end());
    return c;
  }

  void attach(CRef c) {
    Code* l = lits(c);
    watches[l[0]].push_back({c, l[1]});
    watches[l[1]].push_back({c, l[0]});
  }

  std::span<const Lit> as_lits(CRef c) {
    scratch.clear();
    for (std::uint32_t i = 0; i < size_of(c); ++i) scratch.push_back(to_lit(lits(c)[i]));
    return scratch;
  }

  // -- assignment ---------------------------------------------------------
  std::int8_t value(Code c) const { return vals[c]; }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void enqueue(Code p, CRef from) {
    vals[p] = 1;
    vals[neg(p)] = -1;
    Var v = var_of(p);
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(p);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail.size(); i-- > trail_lim[lvl];) {
      Code p = trail[i];
      Var v = var_of(p);
      vals[p] = vals[neg(p)] = 0;
      reason[v] = kNoRef;
      phase[v] = (p & 1u) ? -1 : 1;
      heap.insert(v);
    }
    trail.resize(trail_lim[lvl]);
    trail_lim.resize(lvl);
    qhead = trail.size();
  }

  CRef propagate() {
    CRef conflict = kNoRef;
    while (qhead < trail.size()) {
      Code p = trail[qhead++];
      Code fl = neg(p);
      auto& ws = watches[fl];
      ++stats.propagations;
      std::size_t i = 0, j = 0;
      const std::size_t n = ws.size();
      while (i < n) {
        Watcher w = ws[i++];
        if (value(w.blocker) == 1) {
          ws[j++] = w;
          continue;
        }
        Code* c = lits(w.cref);
        if (c[0] == fl) std::swap(c[0], c[1]);
        Code first = c[0];
        if (first != w.blocker && value(first) == 1) {
          ws[j++] = {w.cref, first};
          continue;
        }
        const std::uint32_t sz = size_of(w.cref);
        bool moved = false;
        for (std::uint32_t k = 2; k < sz; ++k) {
          if (value(c[k]) != -1) {
            c[1] = c[k];
            c[k] = fl;
            watches[c[1]].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == -1) {
          conflict = w.cref;
          qhead = trail.size();
          while (i < n) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoRef) break;
    }
    return conflict;
  }

  // -- heuristics ---------------------------------------------------------
  void bump_var(Var v) {
    if ((activity[v] += var_inc) > 1e100) {
      for (Var u = 1; u <= nvars; ++u) activity[u] *= 1e-100;
      var_inc *= 1e-100;
    }
    heap.increased(v);
  }
  void bump_clause(CRef c) {
    if ((act_of(c) += static_cast<float>(cla_inc)) > 1e20f) {
      for (CRef l : learnts) act_of(l) *= 1e-20f;
      cla_inc *= 1e-20;
    }
  }

  std::uint32_t compute_lbd(std::span<const Code> ls) {
    ++stamp_epoch;
    std::uint32_t n = 0;
    for (Code c : ls) {
      int l = level[var_of(c)];
      if (level_stamp[l] != stamp_epoch) {
        level_stamp[l] = stamp_epoch;
        ++n;
      }
    }
    return n;
  }

  std::uint32_t abstract_level(Var v) const { return 1u << (level[v] & 31); }

  bool lit_redundant(Code p, std::uint32_t abstract_levels) {
    analyze_stack.clear();
    analyze_stack.push_back(p);
    const std::size_t top = analyze_clear.size();
    while (!analyze_stack.empty()) {
      Code q = analyze_stack.back();
      analyze_stack.pop_back();
      CRef r = reason[var_of(q)];
      Code* c = lits(r);
      for (std::uint32_t i = 1; i < size_of(r); ++i) {
        Code x = c[i];
        Var v = var_of(x);
        if (seen[v] || level[v] == 0) continue;
        if (reason[v] != kNoRef && (abstract_level(v) & abstract_levels) != 0) {
          seen[v] = 1;
          analyze_stack.push_back(x);
          analyze_clear.push_back(x);
        } else {
          for (std::size_t k = top; k < analyze_clear.size(); ++k)
            seen[var_of(analyze_clear[k])] = 0;
          analyze_clear.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  // First-UIP analysis; out[0] is the asserting literal.
  void analyze(CRef confl, std::vector<Code>& out, int& bt_level) {
    int path = 0;
    Code p = 0;
    bool have_p = false;
    out.clear();
    out.push_back(0);
    std::size_t index = trail.size();
    do {
      if (learnt(confl)) bump_clause(confl);
      Code* c = lits(confl);
      for (std::uint32_t i = have_p ? 1 : 0; i < size_of(confl); ++i) {
        Code q = c[i];
        Var v = var_of(q);
        if (seen[v] || level[v] == 0) continue;
        bump_var(v);
        seen[v] = 1;
        if (level[v] >= decision_level())
          ++path;
        else
          out.push_back(q);
      }
      while (!seen[var_of(trail[--index])]) {
      }
      p = trail[index];
      confl = reason[var_of(p)];
      seen[var_of(p)] = 0;
      have_p = true;
      --path;
    } while (path > 0);
    out[0] = neg(p);

    analyze_clear.assign(out.begin(), out.end());
    std::uint32_t abstract_levels = 0;
    for (std::size_t i = 1; i < out.size(); ++i) abstract_levels |= abstract_level(var_of(out[i]));
    std::size_t j = 1;
    for (std::size_t i = 1; i < out.size(); ++i)
      if (reason[var_of(out[i])] == kNoRef || !lit_redundant(out[i], abstract_levels))
        out[j++] = out[i];
    out.resize(j);

    if (out.size() == 1) {
      bt_level = 0;
    } else {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i)
        if (level[var_of(out[i])] > level[var_of(out[max_i])]) max_i = i;
      std::swap(out[1], out[max_i]);
      bt_level = level[var_of(out[1])];
    }
    for (Code c : analyze_clear) seen[var_of(c)] = 0;
  }

  // p is true and contradicts an assumption. Collects p plus the negations
  // of the assumptions whose propagation implied it.
  void analyze_final(Code p, std::vector<Code>& out) {
    out.assign(1, p);
    if (decision_level() == 0) return;
    seen[var_of(p)] = 1;
    for (std::size_t i = trail.size(); i-- > trail_lim[0];) {
      Var v = var_of(trail[i]);
      if (!seen[v]) continue;
      if (reason[v] == kNoRef) {
        if (level[v] > 0) out.push_back(neg(trail[i]));
      } else {
        Code* c = lits(reason[v]);
        for (std::uint32_t k = 1; k < size_of(reason[v]); ++k)
          if (level[var_of(c[k])] > 0) seen[var_of(c[k])] = 1;
      }
      seen[v] = 0;
    }
    seen[var_of(p)] = 0;
  }

  bool locked(CRef c) {
    Code first = lits(c)[0];
    return value(first) == 1 && reason[var_of(first)] == c;
  }

  void remove_clause(CRef c) {
    if (cfg.proof) cfg.proof->remove(as_lits(c));
    learnt_bytes -= size_of(c) * 4 + kHeader * 4;
    flags_of(c) |= 2u;
    wasted += size_of(c) + kHeader;
    ++stats.deleted;
  }

  void reduce_db() {
    std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
      if (lbd(a) != lbd(b)) return lbd(a) > lbd(b);
      return act_of(a) < act_of(b);
    });
    const std::size_t half = learnts.size() / 2;
    std::size_t j = 0;
    for (std::size_t i = 0; i < learnts.size(); ++i) {
      CRef c = learnts[i];
      if (i < half && lbd(c) > cfg.keep_lbd && size_of(c) > 2 && !locked(c))
        remove_clause(c);
      else
        learnts[j++] = c;
    }
    learnts.resize(j);
    for (auto& ws : watches)
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [&](const Watcher& w) { return deleted(w.cref); }),
               ws.end());
    if (wasted * 2 > arena.size()) collect_garbage();
  }

  void collect_garbage() {
    std::vector<std::uint32_t> fresh;
    fresh.reserve(arena.size() - wasted);
    std::vector<CRef> moved_to;
    // Walk the arena sequentially; every clause is laid out back to back.
    std::vector<std::pair<CRef, CRef>> map;
    for (CRef c = 0; c < arena.size(); c += kHeader + arena[c]) {
      if (deleted(c)) continue;
      CRef nc = static_cast<CRef>(fresh.size());
      fresh.insert(fresh.end(), arena.begin() + c, arena.begin() + c + kHeader + arena[c]);
      map.emplace_back(c, nc);
    }
    auto relocate = [&](CRef c) {
      auto it = std::lower_bound(map.begin(), map.end(), std::make_pair(c, CRef{0}));
      return it->second;
    };
    for (auto& ws : watches)
      for (auto& w : ws) w.cref = relocate(w.cref);
    for (Var v = 1; v <= nvars; ++v)
      if (reason[v] != kNoRef) reason[v] = relocate(reason[v]);
    for (auto& c : learnts) c = relocate(c);
    arena.swap(fresh);
    wasted = 0;
  }

  bool add_input(std::span<const Lit> ls) {
    if (unsat) return false;
    for (Lit l : ls) {
      if (!l.valid() || l.var() > nvars) throw Error("clause literal out of range");
      originals.push_back(l.code());
    }
    originals.push_back(0);
    std::vector<Code> cl;
    for (Lit l : ls) {
      Code c = l.code();
      if (value(c) == 1 && level[var_of(c)] == 0) return true;
      if (value(c) == -1 && level[var_of(c)] == 0) continue;
      if (std::find(cl.begin(), cl.end(), c) != cl.end()) continue;
      if (std::find(cl.begin(), cl.end(), neg(c)) != cl.end()) return true;
      cl.push_back(c);
    }
    if (cl.empty()) {
      unsat = true;
      if (cfg.proof) cfg.proof->add({});
      return false;
    }
    if (cl.size() == 1) {
      enqueue(cl[0], kNoRef);
      if (propagate() != kNoRef) {
        unsat = true;
        if (cfg.proof) cfg.proof->add({});
        return false;
      }
      return true;
    }
    attach(alloc(cl, false, 0));
    return true;
  }

  bool model_ok() const {
    bool sat = false;
    for (Code c : originals) {
      if (c == 0) {
        if (!sat) return false;
        sat = false;
      } else if (vals[c] == 1) {
        sat = true;
      }
    }
    return true;
  }

  void log_cube_negation(std::span<const Lit> assumptions, std::span<const Code> final_clause) {
    if (!cfg.proof) return;
    std::vector<Lit> fc;
    for (Code c : final_clause) fc.push_back(to_lit(c));
    cfg.proof->add(fc);
    std::vector<Lit> full;
    for (Lit a : assumptions)
      if (std::find(full.begin(), full.end(), ~a) == full.end()) full.push_back(~a);
    if (full.size() != fc.size()) cfg.proof->add(full);
  }

  SolveOutcome finish(SolveStatus st) {
    SolveOutcome out;
    out.status = st;
    if (st == SolveStatus::kSat) {
      if (!model_ok()) throw Error("internal error: model does not satisfy the formula");
      out.model = Assignment(nvars);
      for (Var v = 1; v <= nvars; ++v) out.model.assign(Lit::make(v, vals[2 * v] != 1));
    }
    cancel_until(0);
    out.stats = stats;
    return out;
  }

  SolveOutcome solve(std::span<const Lit> assumptions) {
    for (std::size_t i = 0; i < assumptions.size(); ++i) {
      Lit a = assumptions[i];
      if (!a.valid() || a.var() > nvars) throw Error("assumption literal out of range");
      for (std::size_t k = 0; k < i; ++k)
        if (assumptions[k] == ~a) throw Error("inconsistent assumptions");
    }
    if (unsat) {
      if (cfg.proof && !assumptions.empty()) log_cube_negation(assumptions, {});
      return finish(SolveStatus::kUnsat);
    }
    if (propagate() != kNoRef) {
      unsat = true;
      if (cfg.proof) cfg.proof->add({});
      if (cfg.proof && !assumptions.empty()) log_cube_negation(assumptions, {});
      return finish(SolveStatus::kUnsat);
    }

    std::vector<Code> learnt_clause;
    std::uint64_t conflicts_at_start = stats.conflicts;
    std::uint64_t next_reduce = stats.conflicts + cfg.reduce_first;
    std::uint64_t reduce_count = 0;
    std::uint64_t restart_index = 0;
    double geometric = cfg.restart_base;
    auto restart_budget = [&]() -> std::uint64_t {
      if (cfg.restart == SolverConfig::Restart::kLuby)
        return luby(restart_index) * cfg.restart_base;
      return static_cast<std::uint64_t>(geometric);
    };
    std::uint64_t conflicts_since_restart = 0;
    std::uint64_t budget = restart_budget();

    for (;;) {
      CRef confl = propagate();
      if (confl != kNoRef) {
        ++stats.conflicts;
        ++conflicts_since_restart;
        if (decision_level() == 0) {
          unsat = true;
          if (cfg.proof) {
            cfg.proof->add({});
            if (!assumptions.empty()) log_cube_negation(assumptions, {});
          }
          return finish(SolveStatus::kUnsat);
        }
        int bt = 0;
        analyze(confl, learnt_clause, bt);
        cancel_until(bt);
        ++stats.learned;
        if (cfg.proof) {
          scratch.clear();
          for (Code c : learnt_clause) scratch.push_back(to_lit(c));
          cfg.proof->add(scratch);
        }
        if (learnt_clause.size() == 1) {
          enqueue(learnt_clause[0], kNoRef);
        } else {
          std::uint32_t l = compute_lbd(learnt_clause);
          CRef c = alloc(learnt_clause, true, l);
          attach(c);
          learnts.push_back(c);
          bump_clause(c);
          learnt_bytes += learnt_clause.size() * 4 + kHeader * 4;
          stats.peak_learnt_bytes = std::max(stats.peak_learnt_bytes, learnt_bytes);
          enqueue(learnt_clause[0], c);
        }
        var_inc /= 0.95;
        cla_inc /= 0.999;

        if (cfg.learnt_bytes_cap && learnt_bytes > *cfg.learnt_bytes_cap) {
          auto out = finish(SolveStatus::kUnknown);
          out.memory_abort = true;
          return out;
        }
        if (cfg.conflict_limit && stats.conflicts - conflicts_at_start >= *cfg.conflict_limit)
          return finish(SolveStatus::kUnknown);
        if (cfg.interrupt && cfg.interrupt->load(std::memory_order_relaxed))
          return finish(SolveStatus::kUnknown);
        continue;
      }

      if (conflicts_since_restart >= budget) {
        ++stats.restarts;
        ++restart_index;
        geometric *= cfg.restart_factor;
        conflicts_since_restart = 0;
        budget = restart_budget();
        cancel_until(0);
      }
      if (stats.conflicts >= next_reduce) {
        ++reduce_count;
        next_reduce = stats.conflicts + cfg.reduce_first + reduce_count * cfg.reduce_increment;
        reduce_db();
      }

      Code next = 0;
      while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
        Code a = assumptions[static_cast<std::size_t>(decision_level())].code();
        if (value(a) == 1) {
          trail_lim.push_back(trail.size());
        } else if (value(a) == -1) {
          analyze_final(neg(a), learnt_clause);
          // learnt_clause = {~a, ~other responsible assumptions}
          log_cube_negation(assumptions, learnt_clause);
          return finish(SolveStatus::kUnsat);
        } else {
          next = a;
          break;
        }
      }
      if (next == 0) {
        while (!heap.empty()) {
          Var v = heap.pop();
          if (value(2 * v) == 0) {
            next = 2 * v + (phase[v] == 1 ? 0u : 1u);
            break;
          }
        }
        if (next == 0) return finish(SolveStatus::kSat);
      }
      ++stats.decisions;
      trail_lim.push_back(trail.size());
      enqueue(next, kNoRef);
    }
  }
};

Solver::Solver(const ClauseDatabase& db, SolverConfig cfg) : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.cfg = cfg;
  s.nvars = db.num_vars();
  const std::size_t codes = 2 * (std::size_t{s.nvars} + 1);
  s.watches.resize(codes);
  s.vals.assign(codes, 0);
  s.level.assign(s.nvars + 1, 0);
  s.reason.assign(s.nvars + 1, kNoRef);
  s.activity.assign(s.nvars + 1, 0.0);
  s.phase.assign(s.nvars + 1, -1);
  s.seen.assign(s.nvars + 1, 0);
  s.level_stamp.assign(s.nvars + 2, 0);
  s.heap.resize(s.nvars);
  if (cfg.seed != 0) {
    std::uint64_t x = cfg.seed * 0x9E3779B97F4A7C15ull + 1;
    for (Var v = 1; v <= s.nvars; ++v) {
      x ^= x << 13;
      x ^= x >> 7;
      x ^= x << 17;
      s.activity[v] = static_cast<double>(x % 1000) * 1e-6;
    }
  }
  for (Var v = 1; v <= s.nvars; ++v) s.heap.insert(v);
  for (const Clause& c : db.clauses())
    if (!s.add_input(c.lits())) break;
}

Solver::~Solver() = default;

void Solver::add_clause(std::span<const Lit> lits) { impl_->add_input(lits); }

SolveOutcome Solver::solve(std::span<const Lit> assumptions) { return impl_->solve(assumptions); }

const SolverStats& Solver::stats() const { return impl_->stats; }

Var Solver::num_vars() const { return impl_->nvars; }

SolveOutcome cdcl_solve(const ClauseDatabase& db, std::span<const Lit> assumptions,
                        const SolverConfig& cfg) {
  Solver s(db, cfg);
  return s.solve(assumptions);
}

}  // namespace schur
