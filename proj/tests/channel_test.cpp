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


#include <array>

#include <gtest/gtest.h>

#include "mdiqkd/channel.hpp"
#include "mdiqkd/errors.hpp"
#include "mdiqkd/protocols.hpp"

namespace {

using namespace mdiqkd;
using namespace mdiqkd::channel;

StateVector plus(unsigned dim) {
  std::vector<Amplitude> v(dim, 1.0);
  return StateVector::from_dense(v).normalized();
}

double plus_frequency(const ChannelModel& model, unsigned dim, int shots, std::uint64_t seed) {
  Rng rng(seed);
  const auto p = plus(dim);
  int hits = 0;
  for (int i = 0; i < shots; ++i) hits += rng.uniform() < fidelity(p, apply_channel(p, 0, model, rng).state);
  return hits / static_cast<double>(shots);
}

TEST(ChannelTest, IdealIsBitExact) {
  Rng rng(1);
  const auto phi = make_phi(BellLabel(gf::FieldSpec(3), 5, 6));
  for (int i = 0; i < 10; ++i) {
    const auto r = apply_channel(phi, 1, ChannelModel::ideal(), rng);
    EXPECT_FALSE(r.lost);
    EXPECT_EQ(dump(r.state), dump(phi));
  }
}

TEST(ChannelTest, LossExtremes) {
  Rng rng(2);
  const auto s = plus(4);
  for (int i = 0; i < 100; ++i) {
    EXPECT_TRUE(apply_channel(s, 0, ChannelModel::loss(1.0), rng).lost);
    EXPECT_FALSE(apply_channel(s, 0, ChannelModel::loss(0.0), rng).lost);
  }
}

// Averaged replacement channel: <+|rho'|+> = (1 - p) + p / N for |+> input.
TEST(ChannelTest, DepolarizingAverage) {
  const int shots = 40000;
  for (unsigned dim : {2U, 4U}) {
    const double p = 0.3;
    const double expected = (1 - p) + p / dim;
    EXPECT_NEAR(plus_frequency(ChannelModel::depolarizing(p), dim, shots, 10 + dim), expected,
                3 * std::sqrt(expected * (1 - expected) / shots));
  }
}

// For N = 2 a random sign pattern flips the relative phase half the time, so
// the averaged overlap with |+> is (1 - p) + p / 2.
TEST(ChannelTest, DephasingAverage) {
  const int shots = 40000;
  const double p = 0.5;
  const double expected = (1 - p) + p / 2;
  EXPECT_NEAR(plus_frequency(ChannelModel::dephasing(p), 2, shots, 4), expected,
              3 * std::sqrt(expected * (1 - expected) / shots));
}

TEST(ChannelTest, SwapDisagreementFormula) {
  EXPECT_DOUBLE_EQ(swap_depolarizing_disagreement(0.0, 4, {}), 0.0);
  EXPECT_DOUBLE_EQ(swap_depolarizing_disagreement(1.0, 2, {}), 0.5);
  EXPECT_DOUBLE_EQ(swap_depolarizing_disagreement(0.1, 2, {true, false}), 0.05);
  EXPECT_DOUBLE_EQ(swap_depolarizing_disagreement(0.1, 4, {}), (1 - 0.81) * 0.75);
}

TEST(ChannelTest, ParsingAndValidation) {
  for (auto k : {ChannelKind::Ideal, ChannelKind::Depolarizing, ChannelKind::Dephasing, ChannelKind::Loss}) {
    EXPECT_EQ(parse_channel_kind(to_string(k)), k);
  }
  for (auto k : {CharlieKind::Honest, CharlieKind::Silent, CharlieKind::NaiveAttacker}) {
    EXPECT_EQ(parse_charlie_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_channel_kind("amplitude_damping"), std::invalid_argument);
  EXPECT_THROW(ChannelModel(ChannelKind::Loss, 1.5), std::invalid_argument);
  EXPECT_THROW(ChannelModel(ChannelKind::Loss, -0.1), std::invalid_argument);
}

TEST(ChannelTest, NaiveStatesAreOrthonormal) {
  const PublicPairs pairs{0, 2, 3, 1};
  const auto states = naive_bell_states(4, pairs);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(std::abs(inner_product(states[i], states[j]) - Amplitude(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    }
  }
  EXPECT_FALSE(naive_outcome_flips(0));
  EXPECT_TRUE(naive_outcome_flips(1));
  EXPECT_FALSE(naive_outcome_flips(2));
  EXPECT_TRUE(naive_outcome_flips(3));
}

// With the naive outcome's flip applied, Bob's bit always equals Alice's.
TEST(ChannelTest, NaiveMeasurementCorrelates) {
  Rng rng(8);
  const PublicPairs pairs{1, 3, 0, 2};
  for (int i = 0; i < 2000; ++i) {
    const unsigned s = rng.bit(), t = rng.bit();
    const auto joint = tensor(protocols::two_term_state(4, 1, 3, s), protocols::two_term_state(4, 0, 2, t));
    const auto outcome = naive_measure(joint, pairs, rng);
    if (outcome == kNaiveFailure) continue;
    ASSERT_EQ(s, t ^ (naive_outcome_flips(outcome) ? 1U : 0U));
  }
}

TEST(ChannelTest, AttackNeedsPublicPairs) {
  Rng rng(4);
  const auto a = protocols::two_term_state(4, 0, 1, 1);
  const auto b = protocols::two_term_state(4, 2, 3, 0);
  Transcript mdi;
  mdi.append(Party::Alice, EventKind::QuantumSent);
  mdi.append(Party::Bob, EventKind::QuantumSent);
  EXPECT_THROW(naive_charlie_attack(a, b, mdi, rng), protocol_violation);

  Transcript naive;
  naive.append(Party::Alice, EventKind::PairsPublic, {0, 1, 2, 3});
  const auto r = naive_charlie_attack(a, b, naive, rng);
  EXPECT_EQ(r.alice_phase_guess, 1U);
  EXPECT_EQ(r.bob_phase_guess, 0U);
}

TEST(ChannelTest, TranscriptOrdering) {
  Transcript t;
  t.append(Party::Charlie, EventKind::CharlieMeasured);
  t.append(Party::Charlie, EventKind::CharlieAnnouncement);
  t.append(Party::Bob, EventKind::BobAnnouncesPair, {0, 1});
  EXPECT_TRUE(t.bob_announces_after_charlie());
  EXPECT_NO_THROW(t.require_bob_after_charlie());
  EXPECT_FALSE(t.pairs_known_before_measurement());

  Transcript early;
  early.append(Party::Bob, EventKind::BobAnnouncesPair, {0, 1});
  early.append(Party::Charlie, EventKind::CharlieMeasured);
  EXPECT_THROW(early.require_bob_after_charlie(), protocol_violation);
}

}  // namespace
