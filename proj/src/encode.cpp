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

#include "schur/encode.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <string>

namespace schur {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kClassic: return "classic";
    case Variant::kWeak: return "weak";
    case Variant::kModular: return "modular";
    case Variant::kPalindromic: return "palindromic";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "classic") return Variant::kClassic;
  if (name == "weak") return Variant::kWeak;
  if (name == "modular") return Variant::kModular;
  if (name == "palindromic") return Variant::kPalindromic;
  throw Error("unknown variant '" + std::string(name) + "'");
}

VariableMap::VariableMap(int k, int n) : k_(k), n_(n) {
  if (k < 1 || n < 1) throw Error("variable map needs k >= 1 and n >= 1");
}

std::vector<Triple> schur_triples(int n, Variant variant) {
  std::vector<Triple> out;
  for (int a = 1; a <= n; ++a) {
    for (int b = a; b <= n; ++b) {
      if (variant == Variant::kWeak && a == b) continue;
      int c = a + b;
      if (variant == Variant::kModular || variant == Variant::kPalindromic) {
        c %= n + 1;
        if (c == 0) continue;
      } else if (c > n) {
        break;
      }
      out.push_back({a, b, c});
    }
  }
  return out;
}

std::vector<std::pair<int, int>> mirror_pairs(int n) {
  std::vector<std::pair<int, int>> out;
  for (int i = 1; i < n + 1 - i; ++i) {
    // i + i = 2i forbids i and 2i from sharing a color.
    if (2 * i == n + 1 - i) continue;
    out.emplace_back(i, n + 1 - i);
  }
  return out;
}

ClauseDatabase encode(const ProblemSpec& spec) {
  const VariableMap map(spec.k, spec.n);
  const int k = spec.k, n = spec.n;
  std::vector<Clause> clauses;

  for (int j = 1; j <= n; ++j) {
    std::vector<Lit> lits;
    for (int i = 1; i <= k; ++i) lits.push_back(map.lit(j, i));
    clauses.emplace_back(std::move(lits), Origin::kPositive);
  }

  const auto triples = schur_triples(n, spec.variant);
  for (int i = 1; i <= k; ++i) {
    for (const Triple& t : triples) {
      std::vector<Lit> lits{map.lit(t.a, i, true)};
      if (t.b != t.a) lits.push_back(map.lit(t.b, i, true));
      lits.push_back(map.lit(t.c, i, true));
      clauses.emplace_back(std::move(lits), Origin::kNegative);
    }
  }

  if (spec.with_optional) {
    for (int j = 1; j <= n; ++j)
      for (int h = 1; h <= k; ++h)
        for (int i = h + 1; i <= k; ++i)
          clauses.emplace_back(std::vector<Lit>{map.lit(j, h, true), map.lit(j, i, true)},
                               Origin::kOptional);
  }

  if (spec.variant == Variant::kPalindromic) {
    for (auto [lo, hi] : mirror_pairs(n)) {
      for (int c = 1; c <= k; ++c) {
        clauses.emplace_back(std::vector<Lit>{map.lit(lo, c, true), map.lit(hi, c)},
                             Origin::kPalindrome);
        clauses.emplace_back(std::vector<Lit>{map.lit(lo, c), map.lit(hi, c, true)},
                             Origin::kPalindrome);
      }
    }
  }

  if (spec.with_symmetry) {
    auto sym = symmetry_predicate(k, n, spec.variant);
    clauses.insert(clauses.end(), sym.begin(), sym.end());
  }
  return ClauseDatabase(map.num_vars(), std::move(clauses));
}

std::vector<Clause> symmetry_predicate(int k, int n, Variant variant) {
  if (k > 5) throw Error("symmetry predicate supports k <= 5 only");
  if (k < 1) throw Error("symmetry predicate needs k >= 1");
  const int min_n = k == 5 ? 14 : k == 4 ? 5 : k >= 2 ? 2 : 1;
  if (n < min_n)
    throw Error("symmetry predicate for k=" + std::to_string(k) + " needs n >= " +
                std::to_string(min_n));
  const VariableMap map(k, n);
  std::vector<Clause> out;
  auto add = [&](std::vector<Lit> lits) {
    out.emplace_back(std::move(lits), Origin::kSymmetry);
  };
  if (k < 2) return out;

  if (variant == Variant::kWeak) {
    // 1 + 1 = 2 is not a weak triple, so 1 and 2 may share a color.
    add({map.lit(1, 1)});
    for (int c = 3; c <= k; ++c) add({map.lit(2, c, true)});
    return out;
  }

  add({map.lit(1, 1)});
  add({map.lit(2, 2)});
  // (number, color, negated) literal lists; kept when every color exists.
  struct L { int j, c; bool neg; };
  const std::vector<std::vector<L>> third = {
      {{3, 5, true}},
      {{4, 4, true}},
      {{4, 5, true}},
      {{4, 3, false}, {3, 4, true}},
      {{3, 4, false}, {5, 5, true}},
      {{3, 3, false}, {4, 3, false}, {5, 4, true}},
  };
  for (const auto& cl : third) {
    bool fits = true;
    for (const L& l : cl) fits &= l.c <= k;
    if (!fits) continue;
    std::vector<Lit> lits;
    for (const L& l : cl) lits.push_back(map.lit(l.j, l.c, l.neg));
    add(std::move(lits));
  }
  if (k == 5) {
    for (int i = 1; i <= 13; ++i) {
      std::vector<Lit> lits;
      for (int j = 1; j <= i; ++j) lits.push_back(map.lit(j, 4));
      lits.push_back(map.lit(i + 1, 5, true));
      add(std::move(lits));
    }
  }
  return out;
}

Validation validate_certificate(const Certificate& cert, const ProblemSpec& spec) {
  if (cert.n() != spec.n)
    throw Error("certificate length " + std::to_string(cert.n()) + " != n=" +
                std::to_string(spec.n));
  for (int j = 1; j <= cert.n(); ++j)
    if (cert[j] < 1 || cert[j] > spec.k)
      throw Error("color " + std::to_string(cert[j]) + " of number " + std::to_string(j) +
                  " out of range 1.." + std::to_string(spec.k));
  for (const Triple& t : schur_triples(spec.n, spec.variant))
    if (cert[t.a] == cert[t.b] && cert[t.b] == cert[t.c])
      return {false, Violation{Violation::Kind::kTriple, t.a, t.b, t.c, cert[t.a]}};
  if (spec.variant == Variant::kPalindromic)
    for (auto [lo, hi] : mirror_pairs(spec.n))
      if (cert[lo] != cert[hi])
        return {false, Violation{Violation::Kind::kMirror, lo, hi, 0, cert[lo]}};
  return {};
}

Assignment certificate_to_assignment(const Certificate& cert, const VariableMap& map) {
  if (cert.n() != map.n()) throw Error("certificate length does not match variable map");
  Assignment a(map.num_vars());
  for (int j = 1; j <= map.n(); ++j) {
    if (cert[j] < 1 || cert[j] > map.k()) throw Error("color out of range");
    for (int i = 1; i <= map.k(); ++i) a.assign(map.lit(j, i, cert[j] != i));
  }
  return a;
}

Certificate assignment_to_certificate(const Assignment& a, const VariableMap& map) {
  Certificate cert;
  cert.colors.resize(static_cast<std::size_t>(map.n()));
  for (int j = 1; j <= map.n(); ++j) {
    int color = 0;
    for (int i = 1; i <= map.k(); ++i) {
      if (!a.is_true(map.lit(j, i))) continue;
      if (color != 0)
        throw Error("number " + std::to_string(j) + " has more than one color");
      color = i;
    }
    if (color == 0) throw Error("number " + std::to_string(j) + " has no color");
    cert.colors[static_cast<std::size_t>(j - 1)] = color;
  }
  return cert;
}

UpperBounds upper_bounds(int k) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (k < 1 || k > 20) throw Error("upper bounds implemented for 1 <= k <= 20");

  // e as a partial sum of 1/i!; the omitted tail is below 1/60! < 1e-80.
  cpp_rational e = 0;
  cpp_int fact = 1;
  for (int i = 0; i <= 60; ++i) {
    if (i > 0) fact *= i;
    e += cpp_rational(1, fact);
  }
  const cpp_rational tail_bound(1, cpp_int(1) << 200);
  cpp_int kf = 1;
  for (int i = 2; i <= k; ++i) kf *= i;

  auto floor_checked = [&](const cpp_rational& x) {
    cpp_int q = numerator(x) / denominator(x);
    // The true value lies in [x, x + kf * tail]; both ends must floor alike.
    cpp_rational hi = x + cpp_rational(kf) * tail_bound;
    if (numerator(hi) / denominator(hi) != q)
      throw Error("upper bound floor is ambiguous at working precision");
    return q.convert_to<std::int64_t>();
  };

  UpperBounds ub;
  ub.factorial_bound = floor_checked(cpp_rational(kf) * e);
  ub.improved_bound = floor_checked(cpp_rational(kf) * (e - cpp_rational(1, 24)));
  static constexpr int kRamsey[] = {0, 3, 6, 17};
  if (k <= 3) ub.ramsey_bound = kRamsey[k] - 2;
  return ub;
}

std::vector<Certificate> read_certificates(std::istream& in) {
  std::vector<Certificate> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    Certificate c;
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#' || tok[0] == 'c') break;
      try {
        std::size_t pos = 0;
        int x = std::stoi(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        c.colors.push_back(x);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad color '" + tok + "'");
      }
    }
    if (!c.colors.empty()) out.push_back(std::move(c));
  }
  return out;
}

void write_certificate(std::ostream& out, const Certificate& cert) {
  for (std::size_t i = 0; i < cert.colors.size(); ++i) {
    if (i) out << ' ';
    out << cert.colors[i];
  }
  out << '\n';
}

}  // namespace schur
