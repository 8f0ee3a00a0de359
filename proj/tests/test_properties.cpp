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

#include "doctest.h"
#include "properties.hpp"

namespace {

void expect(const props::Outcome& o, std::size_t min_checked) {
  INFO(o.failure.value_or(""));
  CHECK(o.ok());
  CHECK(o.checked >= min_checked);
}

}  // namespace

TEST_SUITE("properties") {
  TEST_CASE("SE preserves models and BCE satisfiability") { expect(props::se_bce(1000), 1000); }
  TEST_CASE("tautology proofs of random partitions") { expect(props::tautology(200), 200); }
  TEST_CASE("delta update precision") { expect(props::delta(2000), 2000); }
  TEST_CASE("failed literals are refuted by CDCL") { expect(props::failed_literals(500), 400); }
  TEST_CASE("backbones equal model intersections") { expect(props::backbone(), 5); }
  TEST_CASE("multiplier closure of palindromic certificates") { expect(props::sigma_closure(), 6); }
}
