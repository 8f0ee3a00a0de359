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

#ifndef SCHUR_ENCODE_HPP_
#define SCHUR_ENCODE_HPP_

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "schur/cnf.hpp"

namespace schur {

enum class Variant { kClassic, kWeak, kModular, kPalindromic };

std::string_view variant_name(Variant v);
/// Throws Error on an unknown name.
Variant parse_variant(std::string_view name);

struct ProblemSpec {
  int k = 1;
  int n = 1;
  Variant variant = Variant::kClassic;
  bool with_optional = true;
  bool with_symmetry = false;
};

/// Number-major layout: var(j, i) = (j - 1) * k + i.
class VariableMap {
 public:
  VariableMap(int k, int n);
  int k() const { return k_; }
  int n() const { return n_; }
  Var num_vars() const { return static_cast<Var>(k_) * static_cast<Var>(n_); }
  /// number j in 1..n, color i in 1..k
  Var var(int number, int color) const {
    return static_cast<Var>((number - 1) * k_ + color);
  }
  Lit lit(int number, int color, bool negative = false) const {
    return Lit::make(var(number, color), negative);
  }
  int number_of(Var v) const { return static_cast<int>((v - 1) / k_) + 1; }
  int color_of(Var v) const { return static_cast<int>((v - 1) % k_) + 1; }

 private:
  int k_, n_;
};

struct Triple {
  int a, b, c;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

/// Solutions of a + b = c (or a + b = c mod n+1) over 1..n with a <= b,
/// lexicographically ordered. Palindromic uses the modular triples.
std::vector<Triple> schur_triples(int n, Variant variant);

/// Mirror pairs (i, n+1-i), i < n+1-i, excluding the pair with 2i = n+1-i.
std::vector<std::pair<int, int>> mirror_pairs(int n);

ClauseDatabase encode(const ProblemSpec& spec);

/// Color-symmetry-breaking clauses, all with origin kSymmetry. For the
/// weak variant 1 + 1 = 2 is not a constraint, so only number 1's color and
/// number 2's color range are fixed. Throws Error for k > 5 or n too small.
std::vector<Clause> symmetry_predicate(int k, int n,
                                       Variant variant = Variant::kClassic);

/// A coloring of 1..n with colors 1..k.
struct Certificate {
  std::vector<int> colors;
  int n() const { return static_cast<int>(colors.size()); }
  int operator[](int number) const { return colors[number - 1]; }
  friend bool operator==(const Certificate&, const Certificate&) = default;
  friend auto operator<=>(const Certificate&, const Certificate&) = default;
};

struct Violation {
  enum class Kind { kTriple, kMirror } kind = Kind::kTriple;
  int a = 0, b = 0, c = 0;  // for kMirror: (i, n+1-i, 0)
  int color = 0;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Validation {
  bool valid = true;
  std::optional<Violation> violation;
};

/// Throws Error when a color is out of range or the length is not spec.n.
Validation validate_certificate(const Certificate& cert, const ProblemSpec& spec);

Assignment certificate_to_assignment(const Certificate& cert, const VariableMap& map);
/// Throws Error if some number has zero or several colors.
Certificate assignment_to_certificate(const Assignment& a, const VariableMap& map);

struct UpperBounds {
  std::int64_t factorial_bound = 0;  // floor(k! e)
  std::int64_t improved_bound = 0;   // floor(k! (e - 1/24))
  std::optional<std::int64_t> ramsey_bound;  // R_k(3) - 2, k <= 3
};

/// Exact for 1 <= k <= 20.
UpperBounds upper_bounds(int k);

/// One certificate per line, space-separated colors.
std::vector<Certificate> read_certificates(std::istream& in);
void write_certificate(std::ostream& out, const Certificate& cert);

}  // namespace schur

#endif  // SCHUR_ENCODE_HPP_
