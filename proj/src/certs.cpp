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

#include "schur/certs.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

#include "schur/lookahead.hpp"

namespace schur {

namespace {

std::vector<Value> key_of(const Assignment& a) {
  std::vector<Value> k;
  for (Var v = 1; v <= a.num_vars(); ++v) k.push_back(a.value(v));
  return k;
}

void sort_models(std::vector<Assignment>& models) {
  std::vector<std::pair<std::vector<Value>, std::size_t>> keys;
  for (std::size_t i = 0; i < models.size(); ++i) keys.emplace_back(key_of(models[i]), i);
  std::sort(keys.begin(), keys.end());
  std::vector<Assignment> out;
  out.reserve(models.size());
  for (auto& [k, i] : keys) out.push_back(std::move(models[i]));
  models = std::move(out);
}

std::vector<Lit> blocking_clause(const Assignment& m, Var project) {
  std::vector<Lit> c;
  for (Var v = 1; v <= project; ++v) c.push_back(Lit::make(v, m.value(v) == Value::kTrue));
  return c;
}

// Enumerates models of db & cube on an existing solver, bumping `found`
// per model. Stops early once `found` exceeds `limit`.
void enumerate_on(Solver& s, const Cube& cube, Var project, std::vector<Assignment>& out,
                  std::atomic<std::size_t>& found, std::optional<std::size_t> limit) {
  while (!limit || found.load() <= *limit) {
    SolveOutcome r = s.solve(cube);
    if (r.status == SolveStatus::kUnsat) return;
    if (r.status != SolveStatus::kSat) throw Error("enumeration: solver returned unknown");
    auto block = blocking_clause(r.model, project);
    out.push_back(std::move(r.model));
    ++found;
    if (block.empty()) return;
    s.add_clause(block);
  }
}

}  // namespace

Enumeration enumerate_models(const ClauseDatabase& db, const EnumerateOptions& opts) {
  const Cube none;
  return enumerate_models(db, std::span<const Cube>(&none, 1), opts);
}

Enumeration enumerate_models(const ClauseDatabase& db, std::span<const Cube> cubes,
                             const EnumerateOptions& opts) {
  const Var project = std::min(opts.project.value_or(db.num_vars()), db.num_vars());
  std::vector<std::vector<Assignment>> per_cube(cubes.size());
  std::atomic<std::size_t> next{0}, found{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    try {
      SolverConfig cfg;
      cfg.seed = opts.seed;
      Solver s(db, cfg);
      for (std::size_t i; (i = next.fetch_add(1)) < cubes.size();)
        enumerate_on(s, cubes[i], project, per_cube[i], found, opts.limit);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!err) err = std::current_exception();
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(cubes.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  Enumeration e;
  for (auto& v : per_cube)
    for (auto& m : v) e.models.push_back(std::move(m));
  sort_models(e.models);
  if (opts.limit && found.load() > *opts.limit) {
    e.models.resize(std::min(e.models.size(), *opts.limit));
    e.complete = false;
  }
  return e;
}

CertificateClass classify(const Certificate& cert, int k, int n) {
  CertificateClass c;
  c.is_modular = validate_certificate(cert, {k, n, Variant::kModular}).valid;
  c.is_palindromic =
      c.is_modular && validate_certificate(cert, {k, n, Variant::kPalindromic}).valid;
  return c;
}

Backbone compute_backbone(const ClauseDatabase& db, const Cube& base) {
  Solver s(db);
  Backbone bb;
  SolveOutcome r = s.solve(base);
  ++bb.sat_calls;
  if (r.status != SolveStatus::kSat) throw Error("backbone: formula is unsatisfiable under the base cube");

  std::vector<char> occurs(db.num_vars() + 1, 0), in_base(db.num_vars() + 1, 0);
  for (Var v = 1; v <= db.num_vars(); ++v)
    occurs[v] = db.occurrence_count(Lit::make(v, false)) + db.occurrence_count(Lit::make(v, true)) > 0;
  for (Lit l : base) occurs[l.var()] = in_base[l.var()] = 1;

  std::vector<Lit> cand(db.num_vars() + 1);
  std::vector<char> alive(db.num_vars() + 1, 0);
  for (Var v = 1; v <= db.num_vars(); ++v) {
    if (!occurs[v]) continue;
    alive[v] = 1;
    cand[v] = Lit::make(v, r.model.value(v) != Value::kTrue);
  }
  for (Var v = 1; v <= db.num_vars(); ++v) {
    if (!alive[v]) continue;
    const Lit l = cand[v];
    if (in_base[v]) {
      bb.literals.push_back(l);
      continue;
    }
    Cube assumptions = base;
    assumptions.push_back(~l);
    SolveOutcome q = s.solve(assumptions);
    ++bb.sat_calls;
    if (q.status == SolveStatus::kUnsat) {
      bb.literals.push_back(l);
      continue;
    }
    if (q.status != SolveStatus::kSat) throw Error("backbone: solver returned unknown");
    for (Var w = v; w <= db.num_vars(); ++w)
      if (alive[w] && !q.model.is_true(cand[w])) alive[w] = 0;
  }
  return bb;
}

bool solved_by_se_bce(const ClauseDatabase& db, const Cube& cube) {
  SimplifyResult s = simplify(db, Assignment::from_literals(db.num_vars(), cube));
  if (s.status == SimplifyStatus::kSatisfied) return true;
  if (s.status == SimplifyStatus::kConflict) return false;
  return blocked_clause_eliminate(subsumption_eliminate(s.formula)).solved;
}

Backdoor extend_to_backdoor(const ClauseDatabase& db, const Cube& seed) {
  SolveOutcome m = cdcl_solve(db, seed);
  if (m.status != SolveStatus::kSat) throw Error("backdoor: formula is unsatisfiable under the seed");
  Backdoor bd;
  bd.assignment = seed;
  for (std::size_t step = 0; step <= db.num_vars(); ++step) {
    if (solved_by_se_bce(db, bd.assignment)) return bd;
    LookaheadEngine eng(db);
    eng.push();
    for (Lit l : bd.assignment) eng.assign(l);
    Ranking rk = eng.rank_all();
    std::optional<Var> pick = rk.best;
    if (!pick) {
      // Look-ahead sees nothing left to split; fall back to the first
      // variable simplify leaves open.
      SimplifyResult s = simplify(db, Assignment::from_literals(db.num_vars(), bd.assignment));
      for (const Clause& c : s.formula.clauses()) {
        for (Lit l : c)
          if (!s.assignment.assigned(l.var())) {
            pick = l.var();
            break;
          }
        if (pick) break;
      }
    }
    if (!pick) break;
    bd.assignment.push_back(Lit::make(*pick, m.model.value(*pick) != Value::kTrue));
  }
  if (solved_by_se_bce(db, bd.assignment)) return bd;
  throw Error("backdoor: extension exceeded the variable count");
}

Certificate multiplicative_map(const Certificate& cert, int p) {
  const int n = cert.n();
  if (p < 1 || std::gcd(p, n + 1) != 1)
    throw Error("multiplier " + std::to_string(p) + " is not coprime to n+1=" + std::to_string(n + 1));
  Certificate out;
  out.colors.assign(static_cast<std::size_t>(n), 0);
  for (int i = 1; i <= n; ++i) {
    int j = static_cast<int>((static_cast<long long>(i) * p) % (n + 1));
    out.colors[static_cast<std::size_t>(j - 1)] = cert[i];
  }
  return out;
}

std::vector<Certificate> to_certificates(std::span<const Assignment> models, const VariableMap& map) {
  std::vector<Certificate> out;
  out.reserve(models.size());
  for (const Assignment& a : models) out.push_back(assignment_to_certificate(a, map));
  return out;
}

}  // namespace schur
