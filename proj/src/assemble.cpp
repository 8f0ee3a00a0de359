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

#include "schur/assemble.hpp"

#include <algorithm>

namespace schur {

bool derives_negated_cube(const ProofStep* last, const Cube& cube) {
  if (!last) return false;
  if (last->lits.empty()) return true;
  std::vector<Lit> want, got = last->lits;
  for (Lit l : cube) want.push_back(~l);
  std::sort(want.begin(), want.end());
  want.erase(std::unique(want.begin(), want.end()), want.end());
  std::sort(got.begin(), got.end());
  got.erase(std::unique(got.begin(), got.end()), got.end());
  return want == got;
}

ProofStream assemble_proof(const CubeSet& cs, std::span<const ProofStream> per_cube_proofs,
                           const ProofStream& taut_proof) {
  const auto cubes = cs.cubes();
  if (cubes.size() != per_cube_proofs.size())
    throw Error("assemble: " + std::to_string(cubes.size()) + " cubes but " +
                std::to_string(per_cube_proofs.size()) + " implication proofs");
  ProofStream out;
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (!derives_negated_cube(per_cube_proofs[i].last_addition(), cubes[i]))
      throw Error("assemble: implication proof " + std::to_string(i) +
                  " does not end with the negated cube");
    out.append(per_cube_proofs[i]);
  }
  out.append(taut_proof);
  return out;
}

}  // namespace schur
