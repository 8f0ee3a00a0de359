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

#include "schur/orchestrator.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "schur/assemble.hpp"
#include "schur/certs.hpp"

namespace schur {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolveStatus parse_status(std::string_view s) {
  if (s == "sat") return SolveStatus::kSat;
  if (s == "unsat") return SolveStatus::kUnsat;
  if (s == "unknown") return SolveStatus::kUnknown;
  throw ParseError(0, "bad verdict '" + std::string(s) + "'");
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kSat: return "sat";
    case SolveStatus::kUnsat: return "unsat";
    case SolveStatus::kUnknown: return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Ledger

std::string LedgerRecord::to_line() const {
  std::ostringstream out;
  out << "cube=" << cube_index << " verdict=" << status_name(verdict) << " props=" << propagations
      << " conflicts=" << conflicts << " seconds=" << std::setprecision(6) << seconds
      << " proof=" << proof_path.value_or("-") << " cert=";
  if (certificate) {
    for (std::size_t i = 0; i < certificate->colors.size(); ++i)
      out << (i ? "," : "") << certificate->colors[i];
  } else {
    out << '-';
  }
  return out.str();
}

LedgerRecord LedgerRecord::from_line(std::string_view line) {
  LedgerRecord r;
  std::istringstream in{std::string(line)};
  std::string tok;
  int seen = 0;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError(0, "ledger field without '=': " + tok);
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    try {
      if (key == "cube") {
        r.cube_index = std::stoull(val);
        seen |= 1;
      } else if (key == "verdict") {
        r.verdict = parse_status(val);
        seen |= 2;
      } else if (key == "props") {
        r.propagations = std::stoull(val);
      } else if (key == "conflicts") {
        r.conflicts = std::stoull(val);
      } else if (key == "seconds") {
        r.seconds = std::stod(val);
      } else if (key == "proof") {
        if (val != "-") r.proof_path = val;
      } else if (key == "cert") {
        if (val != "-") {
          Certificate c;
          std::istringstream cs(val);
          std::string x;
          while (std::getline(cs, x, ',')) c.colors.push_back(std::stoi(x));
          r.certificate = std::move(c);
        }
      }
    } catch (const std::logic_error&) {
      throw ParseError(0, "bad ledger value for " + key + ": " + val);
    }
  }
  if (seen != 3) throw ParseError(0, "ledger record lacks cube or verdict");
  return r;
}

std::string run_digest(std::string_view formula_bytes, std::string_view icnf_bytes) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  mix(formula_bytes);
  mix(std::string_view("\0", 1));
  mix(icnf_bytes);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Ledger::Ledger(std::string path, std::string digest) : path_(std::move(path)) {
  const std::string header = "c schurcc-ledger v1 digest=" + digest;
  std::error_code ec;
  if (fs::exists(path_, ec) && fs::file_size(path_, ec) > 0) {
    std::ifstream in(path_, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t end = text.rfind('\n');
    if (end == std::string::npos) end = 0;
    else ++end;
    if (end < text.size()) fs::resize_file(path_, end);  // drop a torn tail
    std::istringstream lines(text.substr(0, end));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      if (lineno == 1) {
        if (line.rfind("c schurcc-ledger v1 digest=", 0) != 0)
          throw ParseError(1, "not a ledger file: " + path_);
        if (line != header)
          throw Error("ledger " + path_ + " belongs to another run (" + line.substr(27) +
                      " != " + digest + ")");
        continue;
      }
      if (line.empty()) continue;
      try {
        LedgerRecord r = LedgerRecord::from_line(line);
        records_[r.cube_index] = std::move(r);
        ++lines_;
      } catch (const ParseError& e) {
        throw ParseError(lineno, e.what());
      }
    }
    if (lineno == 0) throw ParseError(1, "ledger " + path_ + " lacks its header");
  } else {
    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw Error("cannot create ledger " + path_);
    out << header << '\n';
  }
}

void Ledger::append(const LedgerRecord& r) {
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app);
  out << r.to_line() << '\n';
  out.flush();
  if (!out) throw Error("cannot append to ledger " + path_);
  records_[r.cube_index] = r;
  ++lines_;
}

// ---------------------------------------------------------------------------
// Conquest

std::string proof_file(const std::string& dir, std::size_t cube_index) {
  return (fs::path(dir) / ("cube_" + std::to_string(cube_index) + ".drat")).string();
}

ConquerSummary conquer_run(const ClauseDatabase& db, const CubeSet& cs, const RunConfig& cfg) {
  if (cfg.jobs < 1) throw Error("jobs must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  const auto leaves = cs.leaves();
  const auto cubes = cs.cubes();
  std::optional<Ledger> ledger;
  if (!cfg.ledger_path.empty()) ledger.emplace(cfg.ledger_path, run_digest(write_dimacs(db), emit_icnf(cs)));
  if (!cfg.proof_dir.empty()) fs::create_directories(cfg.proof_dir);

  ConquerSummary sum;
  std::map<std::size_t, LedgerRecord> all;
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (ledger) {
      auto it = ledger->records().find(i);
      if (it != ledger->records().end() && it->second.verdict != SolveStatus::kUnknown) {
        all[i] = it->second;
        ++sum.resumed;
        continue;
      }
    }
    todo.push_back(i);
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0}, fresh{0};
  std::exception_ptr err;
  auto record = [&](LedgerRecord r) {
    if (ledger) ledger->append(r);
    std::lock_guard<std::mutex> lock(mu);
    all[r.cube_index] = std::move(r);
  };

  auto solve_cube = [&](std::size_t i) {
    const int leaf = leaves[i];
    const auto start = std::chrono::steady_clock::now();
    LedgerRecord r;
    r.cube_index = i;
    const std::string path = cfg.proof_dir.empty() ? std::string() : proof_file(cfg.proof_dir, i);
    if (cs.node(leaf).status == LeafStatus::kRefuted) {
      r.verdict = SolveStatus::kUnsat;
      if (!path.empty()) {
        std::ofstream out(path, std::ios::trunc);
        write_proof(out, refutation_proof(cs, leaf));
        r.proof_path = path;
      }
      r.seconds = seconds_since(start);
      record(std::move(r));
      return;
    }
    SolveOutcome res;
    for (int attempt = 0;; ++attempt) {
      SolverConfig sc;
      sc.seed = cfg.seed_mix ? splitmix(cfg.seed ^ splitmix(i)) : i;
      sc.conflict_limit = cfg.conflict_limit;
      sc.learnt_bytes_cap = cfg.memory_cap_per_worker;
      sc.interrupt = cfg.interrupt;
      sc.reduce_first = std::max<std::uint32_t>(50, sc.reduce_first >> attempt);
      sc.reduce_increment = std::max<std::uint32_t>(10, sc.reduce_increment >> attempt);
      std::ofstream out;
      std::optional<TextProofWriter> writer;
      if (!path.empty()) {
        out.open(path, std::ios::trunc);
        if (!out) throw Error("cannot write proof " + path);
        writer.emplace(out);
        sc.proof = &*writer;
      }
      res = cdcl_solve(db, cubes[i], sc);
      r.propagations += res.stats.propagations;
      r.conflicts += res.stats.conflicts;
      if (res.status == SolveStatus::kUnknown && res.memory_abort && attempt < cfg.max_retries) {
        std::lock_guard<std::mutex> lock(mu);
        ++sum.retries;
        continue;
      }
      break;
    }
    if (res.status == SolveStatus::kUnknown && cfg.interrupt && cfg.interrupt->load()) {
      if (!path.empty()) fs::remove(path);
      return;  // not a verdict; the cube stays pending
    }
    r.verdict = res.status;
    if (res.status == SolveStatus::kUnsat && !path.empty()) r.proof_path = path;
    if (res.status != SolveStatus::kUnsat && !path.empty()) fs::remove(path);
    if (res.status == SolveStatus::kSat && cfg.certificate_map)
      r.certificate = assignment_to_certificate(res.model, *cfg.certificate_map);
    r.seconds = seconds_since(start);
    record(std::move(r));
  };

  auto worker = [&] {
    try {
      for (;;) {
        if (cfg.interrupt && cfg.interrupt->load()) return;
        if (cfg.max_new_records && fresh.fetch_add(1) >= *cfg.max_new_records) return;
        std::size_t t = next.fetch_add(1);
        if (t >= todo.size()) return;
        solve_cube(todo[t]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!err) err = std::current_exception();
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(std::max<std::size_t>(1, todo.size()))));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  for (auto& [i, r] : all) {
    switch (r.verdict) {
      case SolveStatus::kSat: ++sum.sat_cubes; break;
      case SolveStatus::kUnsat: ++sum.unsat_cubes; break;
      case SolveStatus::kUnknown: ++sum.unknown_cubes; break;
    }
    sum.propagations += r.propagations;
    sum.conflicts += r.conflicts;
    sum.records.push_back(r);
  }
  sum.seconds = seconds_since(t0);
  return sum;
}

std::size_t compose_proof_files(const CubeSet& cs, const std::string& dir, std::ostream& out,
                                bool with_deletions, std::istream* taut) {
  const auto cubes = cs.cubes();
  TextProofWriter writer(out);
  std::size_t steps = 0;
  ProofStep step, last;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    const std::string path = proof_file(dir, i);
    std::ifstream in(path);
    if (!in) throw Error("compose: missing proof " + path);
    ProofReader reader(in);
    bool any = false;
    while (reader.next(step)) {
      if (step.kind == ProofStep::Kind::kAdd) {
        writer.add(step.lits);
        last = step;
        any = true;
      } else {
        writer.remove(step.lits);
      }
      ++steps;
    }
    if (!derives_negated_cube(any ? &last : nullptr, cubes[i]))
      throw Error("compose: proof " + path + " does not end with its negated cube");
  }
  auto emit = [&](const ProofStep& s) {
    if (s.kind == ProofStep::Kind::kAdd)
      writer.add(s.lits);
    else
      writer.remove(s.lits);
    ++steps;
  };
  if (taut) {
    ProofReader reader(*taut);
    while (reader.next(step)) emit(step);
  } else {
    const ProofStream t = emit_tautology_proof(cs, with_deletions);
    for (const ProofStep& s : t.steps()) emit(s);
  }
  out.flush();
  return steps;
}

// ---------------------------------------------------------------------------
// Pipeline

std::optional<int> known_value(int k, Variant variant) {
  static constexpr int kClassic[] = {0, 1, 4, 13, 44, 160};
  static constexpr int kWeak[] = {0, 2, 8, 23, 66};
  if (k < 1) return std::nullopt;
  if (variant == Variant::kWeak) {
    if (k <= 4) return kWeak[k];
    return std::nullopt;
  }
  if (k <= 5) return kClassic[k];
  return std::nullopt;
}

std::string PipelineReport::to_json() const {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["variant"] = std::string(variant_name(variant));
  j["claim"] = claim;
  j["verdict"] = verdict;
  j["confirmed"] = confirmed;
  if (lower_certificate) j["lower_certificate"] = lower_certificate->colors;
  if (counterexample) j["counterexample"] = counterexample->colors;
  j["cubes"] = cubes;
  j["refuted_cubes"] = refuted_cubes;
  j["sat_cubes"] = conquer.sat_cubes;
  j["unsat_cubes"] = conquer.unsat_cubes;
  j["unknown_cubes"] = conquer.unknown_cubes;
  j["resumed_cubes"] = conquer.resumed;
  j["conquer_propagations"] = conquer.propagations;
  j["conquer_conflicts"] = conquer.conflicts;
  j["proof_path"] = proof_path;
  j["proof_steps"] = proof_steps;
  j["proof_accepted"] = proof_accepted;
  j["split_seconds"] = split_seconds;
  j["conquer_seconds"] = conquer_seconds;
  j["check_seconds"] = check_seconds;
  j["total_seconds"] = total_seconds;
  if (models_f) j["models_f"] = *models_f;
  if (models_r) j["models_r"] = *models_r;
  if (f_next_unsat) j["f_next_unsat"] = *f_next_unsat;
  if (evidence_ok) j["evidence_ok"] = *evidence_ok;
  return j.dump(2);
}

PipelineReport pipeline(const ProblemSpec& spec, const PipelineConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string stage = "setup";
  try {
    PipelineReport rep;
    rep.k = spec.k;
    rep.variant = spec.variant;
    auto claim = cfg.claim ? cfg.claim : known_value(spec.k, spec.variant);
    if (!claim) throw Error("no known value for this k and variant; pass a claim");
    rep.claim = *claim;
    const int v = *claim;

    fs::path dir = cfg.work_dir;
    if (dir.empty())
      dir = fs::temp_directory_path() /
            ("schurcc-" + std::to_string(::getpid()) + "-" + std::string(variant_name(spec.variant)) +
             "-k" + std::to_string(spec.k));
    fs::create_directories(dir);

    stage = "lower";
    ProblemSpec lower{spec.k, v, spec.variant, true, false};
    ClauseDatabase f_v = encode(lower);
    SolveOutcome lo = cdcl_solve(f_v);
    if (lo.status != SolveStatus::kSat)
      throw Error("F at n=" + std::to_string(v) + " is unsatisfiable; the claim is too high");
    Certificate cert = assignment_to_certificate(lo.model, VariableMap(spec.k, v));
    if (!validate_certificate(cert, lower).valid) throw Error("decoded certificate fails validation");
    rep.lower_certificate = cert;

    stage = "encode";
    ProblemSpec upper{spec.k, v + 1, spec.variant, true, true};
    ClauseDatabase r = encode(upper);

    stage = "split";
    auto ts = std::chrono::steady_clock::now();
    CubeSet cs = build_partition(r, cfg.split);
    if (cfg.balance_split) {
      BalanceOptions bo;
      bo.jobs = cfg.run.jobs;
      cs = balance_partition(r, std::move(cs), *cfg.balance_split,
                             cfg.balance_merge.value_or(*cfg.balance_split / 10), bo);
    }
    rep.split_seconds = seconds_since(ts);
    rep.cubes = cs.size();
    rep.refuted_cubes = cs.num_refuted();

    stage = "conquer";
    RunConfig run = cfg.run;
    run.ledger_path = (dir / "ledger.txt").string();
    run.proof_dir = (dir / "proofs").string();
    run.certificate_map = VariableMap(spec.k, v + 1);
    {
      std::ofstream icnf(dir / "cubes.icnf");
      icnf << emit_icnf(cs);
    }
    auto tc = std::chrono::steady_clock::now();
    rep.conquer = conquer_run(r, cs, run);
    rep.conquer_seconds = seconds_since(tc);
    if (rep.conquer.sat_cubes > 0) {
      for (const auto& rec : rep.conquer.records)
        if (rec.verdict == SolveStatus::kSat && rec.certificate) {
          rep.counterexample = rec.certificate;
          break;
        }
      rep.verdict = "counterexample";
      rep.total_seconds = seconds_since(t0);
      return rep;
    }
    if (rep.conquer.unknown_cubes > 0 || rep.conquer.records.size() != rep.cubes)
      throw Error(std::to_string(rep.cubes - rep.conquer.unsat_cubes) + " cubes left unsolved");

    stage = "compose";
    rep.proof_path = (dir / "full.drat").string();
    {
      std::ofstream out(rep.proof_path, std::ios::trunc);
      rep.proof_steps = compose_proof_files(cs, run.proof_dir, out);
    }

    stage = "check";
    auto tk = std::chrono::steady_clock::now();
    {
      std::ifstream in(rep.proof_path);
      CheckReport chk = check_proof(r, in);
      rep.proof_accepted = chk.accepted();
      if (!chk.accepted())
        throw Error("composed proof rejected at step " + std::to_string(chk.failed_step) + ": " +
                    chk.reason);
    }
    rep.check_seconds = seconds_since(tk);

    if (cfg.evidence && spec.k <= 3) {
      stage = "evidence";
      ProblemSpec rv{spec.k, v, spec.variant, true, true};
      rep.models_f = enumerate_models(f_v).models.size();
      rep.models_r = enumerate_models(encode(rv)).models.size();
      ClauseDatabase f_next = encode({spec.k, v + 1, spec.variant, true, false});
      ProofStream p;
      SolverConfig sc;
      sc.proof = &p;
      SolveOutcome fn = cdcl_solve(f_next, {}, sc);
      rep.f_next_unsat = fn.status == SolveStatus::kUnsat && check_proof(f_next, p).accepted();
      std::size_t fact = 1;
      for (int i = 2; i <= spec.k; ++i) fact *= static_cast<std::size_t>(i);
      bool ratio = spec.variant == Variant::kWeak ? (*rep.models_r > 0 && *rep.models_f > 0)
                                                  : *rep.models_f == fact * *rep.models_r;
      rep.evidence_ok = *rep.f_next_unsat && ratio;
    }

    rep.confirmed = rep.proof_accepted && rep.evidence_ok.value_or(true);
    rep.verdict = rep.confirmed ? "value_confirmed" : "unconfirmed";
    rep.total_seconds = seconds_since(t0);
    return rep;
  } catch (const Error& e) {
    throw Error("pipeline stage '" + stage + "': " + e.what());
  } catch (const std::exception& e) {
    throw Error("pipeline stage '" + stage + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Sweep

std::vector<SweepRow> run_sweep(const ClauseDatabase& db, const std::vector<SplitConfig>& configs,
                                const std::vector<std::string>& labels) {
  std::vector<SweepRow> rows;
  {
    SweepRow row;
    row.label = "cdcl";
    row.cubes = 1;
    auto t = std::chrono::steady_clock::now();
    cdcl_solve(db);
    row.conquer_seconds = seconds_since(t);
    rows.push_back(row);
  }
  for (std::size_t c = 0; c < configs.size(); ++c) {
    SweepRow row;
    row.label = c < labels.size() ? labels[c] : "config" + std::to_string(c);
    auto t = std::chrono::steady_clock::now();
    CubeSet cs = build_partition(db, configs[c]);
    row.split_seconds = seconds_since(t);
    row.cubes = cs.size();
    row.refuted = cs.num_refuted();
    const auto leaves = cs.leaves();
    const auto cubes = cs.cubes();
    t = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      if (cs.node(leaves[i]).status == LeafStatus::kRefuted) continue;
      SolverConfig sc;
      sc.seed = i;
      cdcl_solve(db, cubes[i], sc);
    }
    row.conquer_seconds = seconds_since(t);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_report(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << std::left << std::setw(22) << "setting" << std::right << std::setw(8) << "cubes"
      << std::setw(9) << "refuted" << std::setw(10) << "split_s" << std::setw(11) << "conquer_s"
      << std::setw(9) << "total_s" << '\n';
  out << std::fixed << std::setprecision(3);
  for (const SweepRow& r : rows)
    out << std::left << std::setw(22) << r.label << std::right << std::setw(8) << r.cubes
        << std::setw(9) << r.refuted << std::setw(10) << r.split_seconds << std::setw(11)
        << r.conquer_seconds << std::setw(9) << r.total_seconds() << '\n';
  return out.str();
}

}  // namespace schur
