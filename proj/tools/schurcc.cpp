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

// schurcc: command-line front end. Every option of a subcommand can also be
// set through SCHURCC_<OPTION> (dashes become underscores) or an INI file
// passed with --config, where keys live under a [subcommand] section.
// Precedence: command line > environment > config file.

#include <algorithm>
#include <chrono>
#include <cctype>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schur/assemble.hpp"
#include "schur/cdcl.hpp"
#include "schur/certs.hpp"
#include "schur/cnf.hpp"
#include "schur/encode.hpp"
#include "schur/orchestrator.hpp"
#include "schur/partition.hpp"
#include "schur/proof.hpp"

namespace {

using namespace schur;

constexpr int kExitSat = 10;
constexpr int kExitUnsat = 20;
constexpr int kExitUnknown = 30;
constexpr int kExitError = 2;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  return out;
}

ClauseDatabase load_cnf(const std::string& path) {
  if (path == "-") return parse_dimacs(std::cin);
  auto in = open_in(path);
  return parse_dimacs(in);
}

Cube parse_cube(const std::string& text) {
  Cube c;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    int x = 0;
    try {
      x = std::stoi(tok);
    } catch (const std::exception&) {
      throw Error("bad literal '" + tok + "' in cube");
    }
    if (x == 0) break;
    c.push_back(Lit(x));
  }
  return c;
}

void print_model(const Assignment& m) {
  std::cout << 'v';
  for (Var v = 1; v <= m.num_vars(); ++v)
    std::cout << ' ' << (m.value(v) == Value::kTrue ? static_cast<int>(v) : -static_cast<int>(v));
  std::cout << " 0\n";
}

std::pair<std::uint64_t, std::uint64_t> parse_balance(const std::string& s) {
  auto comma = s.find(',');
  try {
    std::uint64_t split = std::stoull(s.substr(0, comma));
    std::uint64_t merge = comma == std::string::npos ? split / 10 : std::stoull(s.substr(comma + 1));
    return {split, merge};
  } catch (const std::exception&) {
    throw Error("--balance expects WSPLIT[,WMERGE], got '" + s + "'");
  }
}

void bind_env(CLI::App& app) {
  for (CLI::App* sub : app.get_subcommands({})) {
    for (CLI::Option* opt : sub->get_options()) {
      if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
      std::string name = "SCHURCC_" + opt->get_lnames()[0];
      for (char& ch : name) ch = ch == '-' ? '_' : static_cast<char>(std::toupper(ch));
      opt->envname(name);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"schurcc: Schur number encodings, cube-and-conquer and clausal proofs"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file with [subcommand] sections of key = value defaults")
      ->envname("SCHURCC_CONFIG");
  int exit_code = 0;

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "write F or R (with --symmetry) as DIMACS");
  ProblemSpec espec;
  std::string variant = "classic", out_path = "-";
  bool no_optional = false, comment = false;
  encode_cmd->add_option("--k", espec.k, "number of colors")->required()->check(CLI::Range(1, 64));
  encode_cmd->add_option("--n", espec.n, "numbers 1..n")->required()->check(CLI::Range(1, 100000));
  encode_cmd->add_option("--variant", variant, "classic|weak|modular|palindromic")
      ->capture_default_str();
  encode_cmd->add_flag("--no-optional", no_optional, "omit the at-most-one clauses");
  encode_cmd->add_flag("--symmetry", espec.with_symmetry, "add the symmetry-breaking predicate");
  encode_cmd->add_flag("--comment", comment, "emit a provenance comment header");
  encode_cmd->add_option("-o,--output", out_path, "output file, - for stdout");
  encode_cmd->callback([&] {
    espec.variant = parse_variant(variant);
    espec.with_optional = !no_optional;
    ClauseDatabase db = encode(espec);
    std::vector<std::string> comments;
    if (comment)
      comments.push_back("schurcc encode k=" + std::to_string(espec.k) + " n=" +
                         std::to_string(espec.n) + " variant=" + variant +
                         (espec.with_symmetry ? " symmetry" : ""));
    if (out_path == "-") {
      write_dimacs(std::cout, db, comments);
    } else {
      auto out = open_out(out_path);
      write_dimacs(out, db, comments);
    }
  });

  // split
  auto* split_cmd = app.add_subcommand("split", "look-ahead partition into cubes (iCNF)");
  std::string split_in, mode = "down:0.3,0.02", icnf_out = "-", taut_out, balance;
  std::optional<double> preselect;
  int split_jobs = 1;
  split_cmd->add_option("formula", split_in, "DIMACS file")->required();
  split_cmd->add_option("--mode", mode, "binclauses:LIMIT or down:E,F")->capture_default_str();
  split_cmd->add_option("-o,--output", icnf_out, "iCNF output, - for stdout");
  split_cmd->add_option("--tautology-proof", taut_out, "write the tautology proof of the cubes");
  split_cmd->add_option("--balance", balance, "WSPLIT[,WMERGE] predicted-work thresholds");
  split_cmd->add_option("--preselect", preselect, "rank only this fraction of candidates")
      ->check(CLI::Range(0.0, 1.0));
  split_cmd->add_option("--jobs", split_jobs, "predictor threads for --balance")->check(CLI::PositiveNumber);
  split_cmd->callback([&] {
    ClauseDatabase db = load_cnf(split_in);
    SplitConfig cfg = SplitConfig::parse(mode);
    cfg.rank.preselect = preselect;
    PartitionStats ps;
    CubeSet cs = build_partition(db, cfg, {}, &ps);
    if (!balance.empty()) {
      auto [ws, wm] = parse_balance(balance);
      BalanceOptions bo;
      bo.jobs = split_jobs;
      bo.rank = cfg.rank;
      BalanceStats bs;
      cs = balance_partition(db, std::move(cs), ws, wm, bo, &bs);
      std::cerr << "c balance splits=" << bs.splits << " merges=" << bs.merges
                << " max_hardness=" << bs.max_leaf_hardness << '\n';
    }
    std::cerr << "c cubes=" << cs.size() << " refuted=" << cs.num_refuted() << " work=" << ps.work
              << '\n';
    if (icnf_out == "-") {
      std::cout << emit_icnf(cs);
    } else {
      auto out = open_out(icnf_out);
      out << emit_icnf(cs);
    }
    if (!taut_out.empty()) {
      auto out = open_out(taut_out);
      write_proof(out, emit_tautology_proof(cs, true));
    }
  });

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "CDCL solve; exit 10 sat, 20 unsat, 30 unknown");
  std::string solve_in, cube_text, proof_out;
  std::optional<std::uint64_t> conflict_limit;
  std::uint64_t seed = 0;
  solve_cmd->add_option("formula", solve_in, "DIMACS file")->required();
  solve_cmd->add_option("--cube", cube_text, "assumption literals, e.g. \"1 -5 7\"");
  solve_cmd->add_option("--proof", proof_out, "write a DRAT proof");
  solve_cmd->add_option("--conflict-limit", conflict_limit, "give up after N conflicts");
  solve_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  solve_cmd->callback([&] {
    ClauseDatabase db = load_cnf(solve_in);
    Cube cube = parse_cube(cube_text);
    SolverConfig sc;
    sc.seed = seed;
    sc.conflict_limit = conflict_limit;
    std::ofstream pout;
    std::optional<TextProofWriter> writer;
    if (!proof_out.empty()) {
      pout = open_out(proof_out);
      writer.emplace(pout);
      sc.proof = &*writer;
    }
    SolveOutcome r = cdcl_solve(db, cube, sc);
    std::cout << "c conflicts=" << r.stats.conflicts << " propagations=" << r.stats.propagations
              << '\n';
    switch (r.status) {
      case SolveStatus::kSat:
        std::cout << "s SATISFIABLE\n";
        print_model(r.model);
        exit_code = kExitSat;
        break;
      case SolveStatus::kUnsat:
        std::cout << "s UNSATISFIABLE\n";
        exit_code = kExitUnsat;
        break;
      case SolveStatus::kUnknown:
        std::cout << "s UNKNOWN\n";
        exit_code = kExitUnknown;
        break;
    }
  });

  // check
  auto* check_cmd = app.add_subcommand("check", "RUP/DRAT check; exit 0 accepted, 1 rejected");
  std::string check_cnf, check_proof_path;
  bool ignore_deletions = false;
  check_cmd->add_option("formula", check_cnf, "DIMACS file")->required();
  check_cmd->add_option("proof", check_proof_path, "proof file")->required();
  check_cmd->add_flag("--ignore-deletions", ignore_deletions, "keep deleted clauses active");
  check_cmd->callback([&] {
    ClauseDatabase db = load_cnf(check_cnf);
    auto in = open_in(check_proof_path);
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep = check_proof(db, in, {.honor_deletions = !ignore_deletions});
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "c steps=" << rep.steps_checked << " additions=" << rep.additions
              << " propagations=" << rep.propagations << " seconds=" << secs << '\n';
    if (rep.accepted()) {
      std::cout << "s VERIFIED\n";
    } else {
      std::cout << "s NOT VERIFIED\nc step " << rep.failed_step << ": " << rep.reason << '\n';
      exit_code = 1;
    }
  });

  // compose
  auto* compose_cmd = app.add_subcommand("compose", "concatenate per-cube proofs and a tautology proof");
  std::string compose_icnf, compose_dir, compose_taut, compose_out;
  compose_cmd->add_option("--icnf", compose_icnf, "cube file")->required();
  compose_cmd->add_option("--proof-dir", compose_dir, "directory of cube_<i>.drat")->required();
  compose_cmd->add_option("--taut", compose_taut, "tautology proof (generated when omitted)");
  compose_cmd->add_option("-o,--output", compose_out, "composed proof")->required();
  compose_cmd->callback([&] {
    auto in = open_in(compose_icnf);
    auto cubes = parse_icnf(in);
    CubeSet cs = CubeSet::from_cubes(cubes);
    auto out = open_out(compose_out);
    std::size_t steps;
    if (compose_taut.empty()) {
      steps = compose_proof_files(cs, compose_dir, out);
    } else {
      auto taut = open_in(compose_taut);
      steps = compose_proof_files(cs, compose_dir, out, true, &taut);
    }
    std::cout << "c composed " << cubes.size() << " cube proofs, " << steps << " steps\n";
  });

  // enumerate
  auto* enum_cmd = app.add_subcommand("enumerate", "count (and optionally decode) all models");
  std::string enum_in, certs_out;
  std::optional<std::size_t> limit;
  int cert_k = 0, cert_n = 0;
  enum_cmd->add_option("formula", enum_in, "DIMACS file")->required();
  enum_cmd->add_option("--limit", limit, "stop after M models");
  enum_cmd->add_option("--certs", certs_out, "write decoded certificates (needs --k, --n)");
  enum_cmd->add_option("--k", cert_k, "colors");
  enum_cmd->add_option("--n", cert_n, "numbers");
  enum_cmd->callback([&] {
    ClauseDatabase db = load_cnf(enum_in);
    EnumerateOptions eo;
    eo.limit = limit;
    if (!certs_out.empty()) {
      if (cert_k < 1 || cert_n < 1) throw Error("--certs requires --k and --n");
      eo.project = static_cast<Var>(cert_k) * static_cast<Var>(cert_n);
    }
    Enumeration e = enumerate_models(db, eo);
    std::cout << "models " << e.models.size() << (e.complete ? "" : " (limit reached)") << '\n';
    if (!certs_out.empty()) {
      auto out = open_out(certs_out);
      for (const Certificate& c : to_certificates(e.models, VariableMap(cert_k, cert_n)))
        write_certificate(out, c);
    }
  });

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "count modular and palindromic certificates");
  std::string certs_in;
  int cls_k = 0, cls_n = 0;
  classify_cmd->add_option("certificates", certs_in, "one certificate per line")->required();
  classify_cmd->add_option("--k", cls_k, "colors")->required();
  classify_cmd->add_option("--n", cls_n, "numbers")->required();
  classify_cmd->callback([&] {
    auto in = open_in(certs_in);
    auto certs = read_certificates(in);
    std::size_t valid = 0, modular = 0, palindromic = 0;
    for (const Certificate& c : certs) {
      if (!validate_certificate(c, {cls_k, cls_n, Variant::kClassic}).valid) continue;
      ++valid;
      CertificateClass cc = classify(c, cls_k, cls_n);
      modular += cc.is_modular;
      palindromic += cc.is_palindromic;
    }
    std::cout << "certificates " << certs.size() << " valid " << valid << " modular " << modular
              << " palindromic " << palindromic << '\n';
  });

  // backbone
  auto* bb_cmd = app.add_subcommand("backbone", "literals true in every model");
  std::string bb_in, bb_cube;
  bb_cmd->add_option("formula", bb_in, "DIMACS file")->required();
  bb_cmd->add_option("--cube", bb_cube, "base assumptions");
  bb_cmd->callback([&] {
    Backbone b = compute_backbone(load_cnf(bb_in), parse_cube(bb_cube));
    std::cout << "c size=" << b.literals.size() << " sat_calls=" << b.sat_calls << '\n'
              << "b " << format_lits(b.literals) << '\n';
  });

  // backdoor
  auto* bd_cmd = app.add_subcommand("backdoor", "SE+BCE backdoor extending a seed");
  std::string bd_in, bd_cube;
  bd_cmd->add_option("formula", bd_in, "DIMACS file")->required();
  bd_cmd->add_option("--cube", bd_cube, "seed literals");
  bd_cmd->callback([&] {
    Backdoor b = extend_to_backdoor(load_cnf(bd_in), parse_cube(bd_cube));
    std::cout << "c size=" << b.assignment.size() << " solver=" << b.solver_tag << '\n'
              << "d " << format_lits(b.assignment) << '\n';
  });

  // conquer
  auto* conquer_cmd = app.add_subcommand("conquer", "solve every cube with a resumable ledger");
  std::string cq_cnf, cq_icnf;
  RunConfig run;
  std::optional<std::size_t> memory_cap;
  conquer_cmd->add_option("formula", cq_cnf, "DIMACS file")->required();
  conquer_cmd->add_option("cubes", cq_icnf, "iCNF file")->required();
  conquer_cmd->add_option("--jobs", run.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  conquer_cmd->add_option("--ledger", run.ledger_path, "ledger file")->required();
  conquer_cmd->add_option("--proof-dir", run.proof_dir, "per-cube proof directory");
  conquer_cmd->add_option("--conflict-limit", run.conflict_limit, "per-cube conflict limit");
  conquer_cmd->add_option("--memory-cap", memory_cap, "learned-clause bytes per worker");
  conquer_cmd->add_option("--max-retries", run.max_retries, "retries after a memory abort")->capture_default_str();
  conquer_cmd->add_flag("--seed-mix", run.seed_mix, "derive worker seeds from --seed as well");
  conquer_cmd->add_option("--seed", run.seed, "seed mixed in with --seed-mix");
  conquer_cmd->add_option("--max-records", run.max_new_records, "stop after N new records");
  conquer_cmd->callback([&] {
    ClauseDatabase db = load_cnf(cq_cnf);
    auto in = open_in(cq_icnf);
    CubeSet cs = CubeSet::from_cubes(parse_icnf(in));
    run.memory_cap_per_worker = memory_cap;
    ConquerSummary s = conquer_run(db, cs, run);
    std::cout << "cubes " << cs.size() << " sat " << s.sat_cubes << " unsat " << s.unsat_cubes
              << " unknown " << s.unknown_cubes << " resumed " << s.resumed << " retries "
              << s.retries << " seconds " << s.seconds << '\n';
    if (s.sat_cubes)
      exit_code = kExitSat;
    else if (s.unsat_cubes == cs.size())
      exit_code = kExitUnsat;
    else
      exit_code = kExitUnknown;
  });

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "confirm a Schur-type value end to end");
  ProblemSpec pspec;
  PipelineConfig pcfg;
  std::string pvariant = "classic", pmode = "down:0.3,0.02", pbalance, json_out;
  std::optional<std::size_t> pmemory;
  bool no_evidence = false;
  pipe_cmd->add_option("--k", pspec.k, "number of colors")->required()->check(CLI::Range(1, 5));
  pipe_cmd->add_option("--variant", pvariant, "classic|weak|modular|palindromic")->capture_default_str();
  pipe_cmd->add_option("--claim", pcfg.claim, "claimed value (default: the known one)");
  pipe_cmd->add_option("--mode", pmode, "split mode")->capture_default_str();
  pipe_cmd->add_option("--balance", pbalance, "WSPLIT[,WMERGE]");
  pipe_cmd->add_option("--jobs", pcfg.run.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  pipe_cmd->add_option("--conflict-limit", pcfg.run.conflict_limit, "per-cube conflict limit");
  pipe_cmd->add_option("--memory-cap", pmemory, "learned-clause bytes per worker");
  pipe_cmd->add_option("--work-dir", pcfg.work_dir, "ledger, proofs and the composed proof");
  pipe_cmd->add_flag("--no-evidence", no_evidence, "skip the enumeration evidence for k <= 3");
  pipe_cmd->add_option("--json", json_out, "also write the report here");
  pipe_cmd->callback([&] {
    pspec.variant = parse_variant(pvariant);
    pcfg.split = SplitConfig::parse(pmode);
    pcfg.run.memory_cap_per_worker = pmemory;
    pcfg.evidence = !no_evidence;
    if (!pbalance.empty()) {
      auto [ws, wm] = parse_balance(pbalance);
      pcfg.balance_split = ws;
      pcfg.balance_merge = wm;
    }
    PipelineReport rep = pipeline(pspec, pcfg);
    std::cout << rep.to_json() << '\n';
    if (!json_out.empty()) open_out(json_out) << rep.to_json() << '\n';
    exit_code = rep.confirmed ? 0 : rep.counterexample ? kExitSat : 1;
  });

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "closed-form upper bounds next to known values");
  int max_k = 5;
  bounds_cmd->add_option("--max-k", max_k, "largest k")->check(CLI::Range(1, 20))->capture_default_str();
  bounds_cmd->callback([&] {
    std::cout << "k factorial_bound improved_bound ramsey_bound known\n";
    for (int k = 1; k <= max_k; ++k) {
      UpperBounds b = upper_bounds(k);
      auto known = known_value(k, Variant::kClassic);
      std::cout << k << ' ' << b.factorial_bound << ' ' << b.improved_bound << ' '
                << (b.ramsey_bound ? std::to_string(*b.ramsey_bound) : "-") << ' '
                << (known ? std::to_string(*known) : "-") << '\n';
    }
  });

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "single-worker cutoff sweep against pure CDCL");
  std::string sweep_in;
  std::vector<std::string> modes{"binclauses:430", "binclauses:450", "binclauses:470",
                                 "down:0.3,0.02", "down:0.3,0.1"};
  sweep_cmd->add_option("formula", sweep_in, "DIMACS file")->required();
  sweep_cmd->add_option("--mode", modes, "split modes (repeatable)");
  sweep_cmd->callback([&] {
    ClauseDatabase db = load_cnf(sweep_in);
    std::vector<SplitConfig> cfgs;
    for (const auto& m : modes) cfgs.push_back(SplitConfig::parse(m));
    std::cout << sweep_report(run_sweep(db, cfgs, modes));
  });

  bind_env(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "schurcc: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "schurcc: internal error: " << e.what() << '\n';
    return kExitError;
  }
  return exit_code;
}
