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

#include "schur/partition.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace schur {

SplitConfig SplitConfig::binary_clauses(std::size_t limit) {
  SplitConfig c;
  c.mode = Mode::kBinaryClauses;
  c.binary_limit = limit;
  return c;
}

SplitConfig SplitConfig::down_factor(double e, double f) {
  SplitConfig c;
  c.mode = Mode::kDownFactor;
  c.e = e;
  c.f = f;
  return c;
}

SplitConfig SplitConfig::parse(std::string_view mode) {
  auto fail = [&] {
    return Error("bad split mode '" + std::string(mode) +
                 "' (expected binclauses:LIMIT or down:E,F)");
  };
  auto colon = mode.find(':');
  if (colon == std::string_view::npos) throw fail();
  std::string kind(mode.substr(0, colon));
  std::string rest(mode.substr(colon + 1));
  try {
    std::size_t pos = 0;
    SplitConfig c;
    if (kind == "binclauses") {
      long long limit = std::stoll(rest, &pos);
      if (pos != rest.size() || limit <= 0) throw fail();
      c = binary_clauses(static_cast<std::size_t>(limit));
    } else if (kind == "down") {
      auto comma = rest.find(',');
      if (comma == std::string::npos) throw fail();
      std::string es = rest.substr(0, comma), fs = rest.substr(comma + 1);
      double e = std::stod(es, &pos);
      if (pos != es.size()) throw fail();
      double f = std::stod(fs, &pos);
      if (pos != fs.size()) throw fail();
      c = down_factor(e, f);
    } else {
      throw fail();
    }
    c.validate();
    return c;
  } catch (const std::logic_error&) {
    throw fail();
  }
}

void SplitConfig::validate() const {
  if (mode == Mode::kBinaryClauses && binary_limit == 0)
    throw Error("binary clause limit must be positive");
  if (mode == Mode::kDownFactor) {
    if (!(e > 0)) throw Error("down exponent must be positive");
    if (!(f >= 0 && f < 1)) throw Error("down factor must lie in [0, 1)");
  }
  if (max_depth < 1) throw Error("max depth must be positive");
}

double delta_update(double delta, int depth, double e, double f) {
  if (depth < 1) throw Error("delta update needs depth >= 1");
  if (f == 0) return delta;
  return delta * (1.0 - std::pow(f, std::pow(static_cast<double>(depth), e)));
}

SplitterState delta_update(SplitterState state, const SplitConfig& cfg) {
  state.delta = delta_update(state.delta, state.depth, cfg.e, cfg.f);
  return state;
}

// ---------------------------------------------------------------------------
// CubeSet

int CubeSet::alloc() {
  if (!free_.empty()) {
    int id = free_.back();
    free_.pop_back();
    nodes_[static_cast<std::size_t>(id)] = CubeNode{};
    return id;
  }
  nodes_.emplace_back();
  return static_cast<int>(nodes_.size() - 1);
}

std::vector<int> CubeSet::leaves() const {
  std::vector<int> out, stack{0};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const CubeNode& n = node(id);
    if (n.leaf()) {
      out.push_back(id);
    } else {
      stack.push_back(n.right);
      stack.push_back(n.left);
    }
  }
  return out;
}

Cube CubeSet::cube_of(int id) const {
  Cube path;
  for (int x = id; x > 0; x = node(x).parent) path.push_back(node(x).decision);
  Cube out = prefix_;
  out.insert(out.end(), path.rbegin(), path.rend());
  return out;
}

std::vector<Cube> CubeSet::cubes() const {
  std::vector<Cube> out;
  for (int id : leaves()) out.push_back(cube_of(id));
  return out;
}

std::vector<LeafStatus> CubeSet::statuses() const {
  std::vector<LeafStatus> out;
  for (int id : leaves()) out.push_back(node(id).status);
  return out;
}

std::size_t CubeSet::num_refuted() const {
  std::size_t n = 0;
  for (int id : leaves()) n += node(id).status == LeafStatus::kRefuted;
  return n;
}

std::pair<int, int> CubeSet::split(int id, Var v) {
  if (!node(id).leaf()) throw Error("split of an internal node");
  int l = alloc();
  int r = alloc();
  CubeNode& p = node(id);
  p.split = v;
  p.left = l;
  p.right = r;
  p.status = LeafStatus::kOpen;
  for (int c : {l, r}) {
    CubeNode& n = node(c);
    n.parent = id;
    n.depth = p.depth + 1;
    n.decision = Lit::make(v, c == r);
  }
  return {l, r};
}

void CubeSet::merge(int id) {
  CubeNode& p = node(id);
  if (p.leaf() || !node(p.left).leaf() || !node(p.right).leaf())
    throw Error("merge needs two leaf children");
  free_.push_back(p.left);
  free_.push_back(p.right);
  p.left = p.right = -1;
  p.split = 0;
  p.status = LeafStatus::kOpen;
}

CubeSet CubeSet::from_cubes(std::span<const Cube> cubes) {
  if (cubes.empty()) throw Error("malformed partition: no cubes");
  CubeSet cs;
  // Recursive descent over contiguous cube ranges sharing a prefix.
  auto build = [&](auto&& self, int id, std::size_t lo, std::size_t hi, std::size_t depth) -> void {
    if (hi - lo == 1 && cubes[lo].size() == depth) return;
    for (std::size_t i = lo; i < hi; ++i)
      if (cubes[i].size() <= depth)
        throw Error("malformed partition: cube " + std::to_string(i) + " is a prefix of another");
    const Var v = cubes[lo][depth].var();
    if (cubes[lo][depth].negative())
      throw Error("malformed partition: cube " + std::to_string(lo) + " out of true-first order");
    std::size_t mid = lo;
    while (mid < hi && cubes[mid][depth] == Lit::make(v, false)) ++mid;
    for (std::size_t i = mid; i < hi; ++i)
      if (cubes[i][depth] != Lit::make(v, true))
        throw Error("malformed partition: cube " + std::to_string(i) +
                    " does not branch on variable " + std::to_string(v));
    if (mid == hi) throw Error("malformed partition: missing false branch on " + std::to_string(v));
    auto [l, r] = cs.split(id, v);
    self(self, l, lo, mid, depth + 1);
    self(self, r, mid, hi, depth + 1);
  };
  build(build, 0, 0, cubes.size(), 0);
  return cs;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

class Builder {
 public:
  Builder(const ClauseDatabase& db, const SplitConfig& cfg, const Cube& root)
      : cfg_(cfg), eng_(db), cs_(root), work0_(eng_.work()) {}

  CubeSet run(PartitionStats* stats) {
    visit(0);
    if (stats) {
      stats->work = eng_.work() - work0_;
      stats->nodes = nodes_;
      stats->refuted_leaves = cs_.num_refuted();
      stats->open_leaves = cs_.size() - stats->refuted_leaves;
      stats->final_delta = state_.delta;
    }
    return std::move(cs_);
  }

 private:
  void visit(int id) {
    ++nodes_;
    eng_.push();
    if (id == 0) {
      for (Lit l : cs_.prefix()) eng_.assign(l);
    } else {
      eng_.assign(cs_.node(id).decision);
    }
    const std::size_t remaining = eng_.conflicting() ? 0 : eng_.remaining_vars();
    Ranking rk;
    if (eng_.conflicting())
      rk.refuted = true;
    else
      rk = eng_.rank_all(cfg_.rank);
    if (cfg_.work_budget && eng_.work() - work0_ > *cfg_.work_budget)
      throw BudgetError("partition work budget of " + std::to_string(*cfg_.work_budget) +
                        " exhausted");
    {
      CubeNode& n = cs_.node(id);
      n.failed = std::move(rk.failed);
      n.remaining_vars = remaining;
      n.binary_clauses = rk.refuted ? 0 : eng_.binary_clauses();
    }
    const bool down = cfg_.mode == SplitConfig::Mode::kDownFactor;
    const int depth = cs_.node(id).depth;
    bool leaf = false;
    if (rk.refuted) {
      cs_.node(id).status = LeafStatus::kRefuted;
      if (down) state_.delta = static_cast<double>(remaining);
      leaf = true;
    } else if (rk.satisfied || !rk.best) {
      leaf = true;
    } else if (!down) {
      leaf = cs_.node(id).binary_clauses > cfg_.binary_limit;
    } else {
      leaf = static_cast<double>(remaining) < state_.delta;
    }
    if (!leaf && depth >= cfg_.max_depth) leaf = true;
    if (!leaf) {
      if (down && depth >= 1) {
        state_.depth = depth;
        state_ = delta_update(state_, cfg_);
      }
      auto [l, r] = cs_.split(id, *rk.best);
      visit(l);
      visit(r);
    }
    eng_.pop();
  }

  const SplitConfig& cfg_;
  LookaheadEngine eng_;
  CubeSet cs_;
  std::uint64_t work0_;
  SplitterState state_;
  std::size_t nodes_ = 0;
};

}  // namespace

CubeSet build_partition(const ClauseDatabase& db, const SplitConfig& cfg, const Cube& root,
                        PartitionStats* stats) {
  cfg.validate();
  Builder b(db, cfg, root);
  return b.run(stats);
}

std::uint64_t predict_hardness(const ClauseDatabase& db, const Cube& cube) {
  PartitionStats st;
  build_partition(db, SplitConfig::down_factor(1.0, 0.1), cube, &st);
  return st.work;
}

// ---------------------------------------------------------------------------
// Balancing

namespace {

// Replays the path to `id` (decisions and failed-literal assertions) on a
// fresh engine. Returns false if that already conflicts.
bool replay(LookaheadEngine& eng, const CubeSet& cs, int id) {
  std::vector<int> path;
  for (int x = id; x > 0; x = cs.node(x).parent) path.push_back(x);
  path.push_back(0);
  std::reverse(path.begin(), path.end());
  eng.push();
  for (Lit l : cs.prefix()) eng.assign(l);
  for (int x : path) {
    if (x != 0) eng.assign(cs.node(x).decision);
    for (Lit f : cs.node(x).failed) eng.assign(~f);
  }
  return !eng.conflicting();
}

// Ranks the node reached by replay; records failed literals and status.
Ranking evaluate(LookaheadEngine& eng, CubeSet& cs, int id, const RankOptions& opts) {
  Ranking rk = eng.conflicting() ? Ranking{} : eng.rank_all(opts);
  if (eng.conflicting()) rk.refuted = true;
  CubeNode& n = cs.node(id);
  n.failed.insert(n.failed.end(), rk.failed.begin(), rk.failed.end());
  if (rk.refuted) n.status = LeafStatus::kRefuted;
  n.binary_clauses = rk.refuted ? 0 : eng.binary_clauses();
  n.remaining_vars = rk.refuted ? 0 : eng.remaining_vars();
  return rk;
}

}  // namespace

CubeSet balance_partition(const ClauseDatabase& db, CubeSet cs, std::uint64_t split_threshold,
                          std::uint64_t merge_threshold, const BalanceOptions& opts,
                          BalanceStats* stats) {
  if (merge_threshold >= split_threshold)
    throw Error("merge threshold must be below the split threshold");
  std::vector<std::int64_t> pred;   // -1 = unknown
  std::vector<char> stuck;          // leaves that cannot be split further
  auto ensure = [&] {
    pred.resize(cs.nodes().size(), -1);
    stuck.resize(cs.nodes().size(), 0);
  };
  auto predict_all = [&](const std::vector<int>& ids) {
    std::vector<int> todo;
    for (int id : ids)
      if (pred[static_cast<std::size_t>(id)] < 0) todo.push_back(id);
    std::vector<Cube> cubes;
    for (int id : todo) cubes.push_back(cs.cube_of(id));
    std::vector<std::uint64_t> out(todo.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < todo.size();)
        out[i] = predict_hardness(db, cubes[i]);
    };
    const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(todo.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < todo.size(); ++i)
      pred[static_cast<std::size_t>(todo[i])] = static_cast<std::int64_t>(out[i]);
  };

  BalanceStats local;
  constexpr std::uint64_t kMax = std::numeric_limits<std::int64_t>::max();
  const auto split_at = static_cast<std::int64_t>(std::min(split_threshold, kMax));
  const auto merge_at = static_cast<std::int64_t>(std::min(merge_threshold, kMax));
  for (;;) {
    ensure();
    std::vector<int> open;
    for (int id : cs.leaves())
      if (cs.node(id).status == LeafStatus::kOpen) open.push_back(id);
    predict_all(open);

    bool changed = false;
    for (int id : open) {
      if (pred[static_cast<std::size_t>(id)] < split_at || stuck[static_cast<std::size_t>(id)]) continue;
      if (cs.node(id).depth >= opts.max_depth)
        throw BudgetError("balancing exceeded max depth " + std::to_string(opts.max_depth));
      LookaheadEngine eng(db);
      replay(eng, cs, id);
      Ranking rk = evaluate(eng, cs, id, opts.rank);
      if (rk.refuted) {
        changed = true;
        continue;
      }
      if (!rk.best) {
        stuck[static_cast<std::size_t>(id)] = 1;
        continue;
      }
      auto [l, r] = cs.split(id, *rk.best);
      ensure();
      for (int c : {l, r}) {
        pred[static_cast<std::size_t>(c)] = -1;
        stuck[static_cast<std::size_t>(c)] = 0;
        eng.push();
        eng.assign(cs.node(c).decision);
        evaluate(eng, cs, c, opts.rank);
        eng.pop();
      }
      ++local.splits;
      changed = true;
    }
    if (changed) continue;

    // Merge candidates: internal nodes whose children are both leaves.
    std::vector<int> parents;
    for (int id : cs.leaves()) {
      int p = cs.node(id).parent;
      if (p < 0 || cs.node(p).left != id) continue;
      if (cs.node(cs.node(p).right).leaf()) parents.push_back(p);
    }
    auto leaf_pred = [&](int id) -> std::int64_t {
      return cs.node(id).status == LeafStatus::kRefuted ? 0 : pred[static_cast<std::size_t>(id)];
    };
    std::vector<int> eligible;
    for (int p : parents)
      if (leaf_pred(cs.node(p).left) + leaf_pred(cs.node(p).right) < merge_at) eligible.push_back(p);
    predict_all(eligible);
    for (int p : eligible) {
      if (pred[static_cast<std::size_t>(p)] >= split_at) continue;
      cs.merge(p);
      ++local.merges;
      changed = true;
    }
    if (!changed) break;
  }

  for (int id : cs.leaves()) {
    if (cs.node(id).status != LeafStatus::kOpen) continue;
    auto h = static_cast<std::uint64_t>(pred[static_cast<std::size_t>(id)]);
    local.leaf_hardness.push_back(h);
    local.max_leaf_hardness = std::max(local.max_leaf_hardness, h);
  }
  if (stats) *stats = std::move(local);
  return cs;
}

// ---------------------------------------------------------------------------
// iCNF and proofs

void emit_icnf(std::ostream& out, std::span<const Cube> cubes) {
  out << "p inccnf\n";
  for (const Cube& c : cubes) {
    out << 'a';
    for (Lit l : c) out << ' ' << l.dimacs();
    out << " 0\n";
  }
}

std::string emit_icnf(const CubeSet& cs) {
  std::ostringstream out;
  auto cubes = cs.cubes();
  emit_icnf(out, cubes);
  return out.str();
}

std::vector<Cube> parse_icnf(std::istream& in) {
  std::vector<Cube> out;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == 'c') continue;
    if (!header) {
      std::string fmt;
      if (tok != "p" || !(ls >> fmt) || fmt != "inccnf")
        throw ParseError(lineno, "expected 'p inccnf' header");
      header = true;
      continue;
    }
    if (tok != "a") throw ParseError(lineno, "expected a cube line 'a <lits> 0'");
    Cube c;
    long long x = 0;
    bool terminated = false;
    while (ls >> tok) {
      try {
        std::size_t pos = 0;
        x = std::stoll(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw ParseError(lineno, "bad literal '" + tok + "'");
      }
      if (x == 0) {
        terminated = true;
        break;
      }
      c.emplace_back(static_cast<int>(x));
    }
    if (!terminated) throw ParseError(lineno, "cube line missing terminating 0");
    if (ls >> tok) throw ParseError(lineno, "text after terminating 0");
    out.push_back(std::move(c));
  }
  if (!header) throw ParseError(lineno, "missing 'p inccnf' header");
  return out;
}

std::vector<Cube> parse_icnf(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_icnf(in);
}

namespace {

std::vector<Lit> negate(const Cube& c) {
  std::vector<Lit> out;
  out.reserve(c.size());
  for (Lit l : c) out.push_back(~l);
  return out;
}

}  // namespace

ClauseDatabase negated_cubes(const CubeSet& cs, Var num_vars) {
  std::vector<Clause> clauses;
  for (const Cube& c : cs.cubes()) {
    for (Lit l : c) num_vars = std::max(num_vars, l.var());
    clauses.emplace_back(negate(c), Origin::kCubeNegation);
  }
  return ClauseDatabase(num_vars, std::move(clauses));
}

ProofStream emit_tautology_proof(const CubeSet& cs, bool with_deletions) {
  ProofStream p;
  auto post = [&](auto&& self, int id) -> void {
    const CubeNode& n = cs.node(id);
    if (n.leaf()) return;
    self(self, n.left);
    self(self, n.right);
    p.add(negate(cs.cube_of(id)));
    if (with_deletions) {
      p.remove(negate(cs.cube_of(n.left)));
      p.remove(negate(cs.cube_of(n.right)));
    }
  };
  post(post, 0);
  return p;
}

ProofStream refutation_proof(const CubeSet& cs, int leaf) {
  if (!cs.node(leaf).leaf()) throw Error("refutation proof requested for an internal node");
  std::vector<int> path;
  for (int x = leaf; x > 0; x = cs.node(x).parent) path.push_back(x);
  path.push_back(0);
  std::reverse(path.begin(), path.end());
  ProofStream p;
  for (int x : path) {
    const auto base = negate(cs.cube_of(x));
    for (Lit f : cs.node(x).failed) {
      auto lemma = base;
      lemma.push_back(~f);
      p.add(lemma);
    }
  }
  p.add(negate(cs.cube_of(leaf)));
  return p;
}

}  // namespace schur
