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

// Model enumeration, certificate classification, backbones, SE+BCE
// backdoors and the multiplicative certificate map.

#ifndef SCHUR_CERTS_HPP_
#define SCHUR_CERTS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schur/cdcl.hpp"
#include "schur/cnf.hpp"
#include "schur/encode.hpp"

namespace schur {

struct EnumerateOptions {
  std::optional<std::size_t> limit;
  /// Blocking clauses range over variables 1..project (default: all).
  std::optional<Var> project;
  int jobs = 1;  // used by the cube-parallel variant
  std::uint64_t seed = 0;
};

struct Enumeration {
  std::vector<Assignment> models;  // sorted by their value vectors
  bool complete = true;            // false when the limit cut enumeration short
};

/// All models of db (projected), by solving and blocking each model found.
Enumeration enumerate_models(const ClauseDatabase& db, const EnumerateOptions& opts = {});

/// Same, with the search split by a cube partition and workers taking
/// cubes independently. The cubes must be pairwise disjoint and cover the
/// space for the result to be complete.
Enumeration enumerate_models(const ClauseDatabase& db, std::span<const Cube> cubes,
                             const EnumerateOptions& opts = {});

struct CertificateClass {
  bool is_modular = false;
  bool is_palindromic = false;
};

CertificateClass classify(const Certificate& cert, int k, int n);

struct Backbone {
  std::vector<Lit> literals;  // sorted by variable
  std::size_t sat_calls = 0;
};

/// Literals l with db & base & ~l unsatisfiable. Throws Error if db & base
/// is unsatisfiable.
Backbone compute_backbone(const ClauseDatabase& db, const Cube& base = {});

struct Backdoor {
  Cube assignment;
  std::string solver_tag = "SE+BCE";
};

/// True iff simplify + SE + BCE on db under cube reaches the empty formula.
bool solved_by_se_bce(const ClauseDatabase& db, const Cube& cube);

/// Extends seed with look-ahead-ranked variables, phased by a model of
/// db & seed, until SE+BCE solves the residual formula.
Backdoor extend_to_backdoor(const ClauseDatabase& db, const Cube& seed = {});

/// out[i*p mod (n+1)] = in[i]. Throws Error unless gcd(p, n+1) = 1.
Certificate multiplicative_map(const Certificate& cert, int p);

std::vector<Certificate> to_certificates(std::span<const Assignment> models, const VariableMap& map);

}  // namespace schur

#endif  // SCHUR_CERTS_HPP_
