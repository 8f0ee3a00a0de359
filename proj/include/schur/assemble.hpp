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

// Composition of per-cube implication proofs with the tautology proof.

#ifndef SCHUR_ASSEMBLE_HPP_
#define SCHUR_ASSEMBLE_HPP_

#include <span>

#include "schur/partition.hpp"
#include "schur/proof.hpp"

namespace schur {

/// True iff the last addition of p is ~cube (as a literal set) or empty.
bool derives_negated_cube(const ProofStep* last_addition, const Cube& cube);

/// Implication proofs in cube order, then the tautology proof. Throws Error
/// on a count mismatch or when proof i does not end by adding ~cube_i.
ProofStream assemble_proof(const CubeSet& cs, std::span<const ProofStream> per_cube_proofs,
                           const ProofStream& taut_proof);

}  // namespace schur

#endif  // SCHUR_ASSEMBLE_HPP_
