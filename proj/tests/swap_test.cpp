// Copyright 2026 The mdiqkd Authors
//
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


#include <map>

#include <gtest/gtest.h>

#include "mdiqkd/swap.hpp"
#include "oracles.hpp"

namespace {

using namespace mdiqkd;

TEST(SwapTest, OutcomeTableIsExact) {
  for (unsigned n = 1; n <= 3; ++n) {
    const gf::FieldSpec f(n);
    const double expected = 1.0 / (static_cast<double>(f.size()) * f.size());
    for (auto who : {swap::Corrector::Bob, swap::Corrector::Alice}) {
      const auto table = swap::swap_outcome_table(f, who);
      ASSERT_EQ(table.size(), f.size() * f.size());
      for (const auto& [idx, e] : table) {
        EXPECT_NEAR(e.probability, expected, 1e-12);
        EXPECT_NEAR(e.fidelity, 1.0, 1e-12);
      }
    }
  }
}

// Dense oracle for N = 2: the pair (A1, B1) left by outcome (a, b) is
// (I (x) X^a Z^b)|Phi_00> up to phase, independently of the library.
TEST(SwapTest, QubitPosteriorsMatchDenseOracle) {
  const gf::FieldSpec f(1);
  const auto phi00 = oracle::phi(0, 0, 0b11, 1);
  const auto four = oracle::kron(phi00, phi00);  // (A1, A2, B1, B2)
  // Reorder to (A1, B1, A2, B2) so Charlie's pair is last.
  const oracle::Dense reordered = oracle::permute_qudits(2, {0, 2, 1, 3}) * four;
  for (const auto& [label, phi] : bell_basis(f)) {
    const auto ab = oracle::phi(label.a.bits(), label.b.bits(), 0b11, 1);
    oracle::Dense left = oracle::Dense::Zero(4);
    for (int r = 0; r < 4; ++r) left[r] = ab.dot(reordered.segment(4 * r, 4));  // dot() conjugates ab
    const double p = left.squaredNorm();
    EXPECT_NEAR(p, 0.25, 1e-12);
    const auto branch = project(swap::initial_state(f), swap::kCharlieQudits, phi);
    EXPECT_NEAR(std::norm(branch.posterior.amplitude({0, 0}) * std::sqrt(p)), std::norm(left[0]), 1e-12);
    EXPECT_NEAR(std::norm(branch.posterior.amplitude({0, 1}) * std::sqrt(p)), std::norm(left[1]), 1e-12);
  }
}

TEST(SwapTest, SampledOutcomesAreUniform) {
  const gf::FieldSpec f(2);
  Rng rng(2026);
  const int rounds = 100000;
  std::map<std::uint32_t, int> counts;
  for (int i = 0; i < rounds; ++i) {
    const auto r = swap::run_swap_round(f, swap::Corrector::Bob, rng);
    ++counts[r.outcome.index()];
    if (i < 200) {
      ASSERT_NEAR(fidelity(r.post_state, make_phi(BellLabel(f, 0, 0))), 1.0, 1e-12);
    }
  }
  const double p = 1.0 / 16.0;
  const double sigma = std::sqrt(rounds * p * (1 - p));
  ASSERT_EQ(counts.size(), 16U);
  for (const auto& [idx, c] : counts) EXPECT_NEAR(c, rounds * p, 3.0 * sigma) << "outcome " << idx;
}

}  // namespace
