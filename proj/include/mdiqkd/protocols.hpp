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

#pragma once

/// @file protocols.hpp
/// Single-round state machines for the five simulated schemes:
///
///   mother          entanglement swapping of two |Phi_00> pairs, keys from the
///                   computational outcomes of the retained halves
///   mdi_rrdps       Alice's phase-vector state and Bob's two-term state,
///                   Charlie's Bell measurement, Alice's raw-bit formula
///   mdi_rrdps_lo    as above, but Bob sends N-1 pair-basis states and Charlie
///                   postselects on the antisymmetric state
///   mdi_chau15_lo   Alice sends a two-term state instead; sift on matching pairs
///   naive_chau15    pairs fixed publicly up front and measured with a four-state
///                   Bell-like measurement (the attackable ordering)
///
/// Every round owns one Rng seeded from its per-round seed, so rounds are
/// independent work items.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mdiqkd/channel.hpp"
#include "mdiqkd/optics.hpp"
#include "mdiqkd/swap.hpp"
#include "mdiqkd/transcript.hpp"

namespace mdiqkd::protocols {

using channel::ChannelModel;
using channel::CharlieKind;

enum class ProtocolId { Mother, MdiRrdps, MdiRrdpsLo, MdiChau15Lo, NaiveChau15 };

constexpr std::string_view to_string(ProtocolId id) {
  switch (id) {
    case ProtocolId::Mother: return "mother";
    case ProtocolId::MdiRrdps: return "mdi_rrdps";
    case ProtocolId::MdiRrdpsLo: return "mdi_rrdps_lo";
    case ProtocolId::MdiChau15Lo: return "mdi_chau15_lo";
    case ProtocolId::NaiveChau15: return "naive_chau15";
  }
  return "?";
}

inline ProtocolId parse_protocol(std::string_view text) {
  for (auto id : {ProtocolId::Mother, ProtocolId::MdiRrdps, ProtocolId::MdiRrdpsLo, ProtocolId::MdiChau15Lo,
                  ProtocolId::NaiveChau15}) {
    if (text == to_string(id)) return id;
  }
  throw std::invalid_argument("unknown protocol '" + std::string(text) + "'");
}

/// Whether the protocol postselects on the antisymmetric projection.
constexpr bool uses_linear_optics(ProtocolId id) {
  return id == ProtocolId::MdiRrdpsLo || id == ProtocolId::MdiChau15Lo;
}

/// In the pair-based linear-optics scheme, successful sifted rounds satisfy
/// s = t XOR kChau15LoFlip, with t the sign of the state Bob withheld. Derived
/// by exhaustive enumeration of the antisymmetric projection (see tests).
inline constexpr unsigned kChau15LoFlip = 0;

// ---------------------------------------------------------------------------
// Party choices

struct RrdpsAliceChoice {
  std::vector<std::uint8_t> s;  // s[i] for i in GF(N), bit-value order
};

struct RrdpsBobChoice {
  unsigned t;
  std::uint32_t j;
  std::uint32_t k;
};

/// Bob's pair-basis choice. Pair i is (pairing[i].first, pairing[i].second).
struct LoBobChoice {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairing;
  std::size_t unsent_pair_index;
  unsigned t;
  std::vector<std::uint8_t> sent_signs;  // signs of the N-1 sent states, in send order

  [[nodiscard]] std::uint32_t j() const { return pairing.at(unsent_pair_index).first; }
  [[nodiscard]] std::uint32_t k() const { return pairing.at(unsent_pair_index).second; }
};

struct Chau15AliceChoice {
  unsigned s;
  std::uint32_t j;  // j'
  std::uint32_t k;  // k'
};

struct MotherChoice {};

using Choices = std::variant<MotherChoice, std::pair<RrdpsAliceChoice, RrdpsBobChoice>,
                             std::pair<RrdpsAliceChoice, LoBobChoice>, std::pair<Chau15AliceChoice, LoBobChoice>,
                             std::pair<Chau15AliceChoice, RrdpsBobChoice>>;

/// Charlie's public result. Exactly one of the alternatives applies per protocol.
struct Announcement {
  enum class Kind { None, Lost, Bell, Projection, Naive } kind = Kind::None;
  std::uint32_t a = 0, b = 0;  // Bell
  bool success = false;        // Projection
  std::uint32_t code = 0;      // Naive outcome code (kNaiveFailure = no result)

  [[nodiscard]] std::string to_string() const {
    switch (kind) {
      case Kind::None: return "none";
      case Kind::Lost: return "lost";
      case Kind::Bell: return "bell:" + std::to_string(a) + "," + std::to_string(b);
      case Kind::Projection: return success ? "psi:success" : "psi:failure";
      case Kind::Naive: return code == channel::kNaiveFailure ? "naive:failure" : "naive:" + std::to_string(code);
    }
    return "?";
  }
};

struct RoundRecord {
  ProtocolId protocol;
  std::uint64_t round;
  Choices choices;
  Announcement announcement;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> announced_pair;  // Bob's (j, k)
  std::optional<std::uint32_t> alice_raw;
  std::optional<std::uint32_t> bob_raw;
  unsigned raw_width = 1;  // bits per raw value (n for the swap scheme, else 1)
  bool sifted = false;
  std::optional<unsigned> attacker_guess;  // naive attack: Charlie's guess of Alice's raw bit
  Transcript transcript;
};

// ---------------------------------------------------------------------------
// Preparation and key formulas

inline StateVector rrdps_alice_prepare(const gf::FieldSpec& spec, const RrdpsAliceChoice& choice) {
  const std::uint32_t n = spec.size();
  if (choice.s.size() != n) throw std::invalid_argument("phase vector length must equal N");
  StateVector out(n, 1);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::uint32_t i = 0; i < n; ++i) out.set(i, choice.s[i] ? -amp : amp);
  return out;
}

/// [|j> + (-1)^t |k>] / sqrt2.
inline StateVector two_term_state(unsigned dim, std::uint32_t j, std::uint32_t k, unsigned t) {
  if (j == k) throw std::invalid_argument("two-term state needs j != k");
  const double h = 1.0 / std::sqrt(2.0);
  StateVector out(dim, 1);
  out.set(j, h);
  out.set(k, (t & 1U) ? -h : h);
  return out;
}

inline StateVector rrdps_bob_prepare(const gf::FieldSpec& spec, const RrdpsBobChoice& choice) {
  return two_term_state(spec.size(), choice.j, choice.k, choice.t);
}

/// Alice's raw bit { s_{k-a} - s_{j-a} - Tr[b(k-j)] } mod 2.
inline unsigned rrdps_alice_raw_bit(const gf::FieldSpec& spec, const std::vector<std::uint8_t>& s, std::uint32_t j,
                                    std::uint32_t k, const BellLabel& ab) {
  if (j == k) throw std::invalid_argument("raw-bit formula needs j != k");
  const std::uint32_t a = ab.a.bits();
  const unsigned tr = spec.trace_bits(spec.mul_bits(ab.b.bits(), k ^ j)) & 1U;
  return (s.at(k ^ a) ^ s.at(j ^ a) ^ tr) & 1U;
}

inline void validate(const gf::FieldSpec& spec, const LoBobChoice& choice) {
  const std::uint32_t n = spec.size();
  if (choice.pairing.size() != n / 2) throw std::invalid_argument("pairing must have N/2 pairs");
  std::vector<bool> covered(n, false);
  for (const auto& [j, k] : choice.pairing) {
    if (j >= n || k >= n || j == k || covered[j] || covered[k]) {
      throw std::invalid_argument("pairing is not a perfect matching of GF(N)");
    }
    covered[j] = covered[k] = true;
  }
  if (choice.unsent_pair_index >= choice.pairing.size()) throw std::invalid_argument("unsent pair index out of range");
  if (choice.sent_signs.size() != n - 1) throw std::invalid_argument("Bob must send exactly N-1 states");
  std::size_t pos = 0;
  for (std::size_t i = 0; i < choice.pairing.size(); ++i) {
    for (unsigned sign = 0; sign < 2; ++sign) {
      if (i == choice.unsent_pair_index && sign == choice.t) continue;
      if (choice.sent_signs[pos++] != sign) throw std::invalid_argument("sent signs do not match the withheld state");
    }
  }
}

/// The N-1 pair-basis states Bob sends, in pair order, skipping the withheld one.
inline std::vector<StateVector> lo_bob_prepare(const gf::FieldSpec& spec, const LoBobChoice& choice) {
  validate(spec, choice);
  std::vector<StateVector> out;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < choice.pairing.size(); ++i) {
    for (unsigned sign = 0; sign < 2; ++sign) {
      if (i == choice.unsent_pair_index && sign == choice.t) continue;
      const auto [j, k] = choice.pairing[i];
      out.push_back(two_term_state(spec.size(), j, k, choice.sent_signs[pos++]));
    }
  }
  return out;
}

/// The state Bob keeps back; its sign t is his raw bit.
inline StateVector lo_bob_withheld(const gf::FieldSpec& spec, const LoBobChoice& choice) {
  return two_term_state(spec.size(), choice.j(), choice.k(), choice.t);
}

// ---------------------------------------------------------------------------
// Random choices (uniform)

inline RrdpsAliceChoice random_rrdps_alice(const gf::FieldSpec& spec, Rng& rng) {
  RrdpsAliceChoice c;
  c.s.resize(spec.size());
  for (auto& bit : c.s) bit = static_cast<std::uint8_t>(rng.bit());
  return c;
}

inline std::pair<std::uint32_t, std::uint32_t> random_distinct_pair(std::uint32_t n, Rng& rng) {
  const auto j = static_cast<std::uint32_t>(rng.below(n));
  auto k = static_cast<std::uint32_t>(rng.below(n - 1));
  if (k >= j) ++k;
  return {j, k};
}

inline RrdpsBobChoice random_rrdps_bob(const gf::FieldSpec& spec, Rng& rng) {
  const unsigned t = rng.bit();
  const auto [j, k] = random_distinct_pair(spec.size(), rng);
  return {t, j, k};
}

inline LoBobChoice random_lo_bob(const gf::FieldSpec& spec, Rng& rng) {
  const std::uint32_t n = spec.size();
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  LoBobChoice c;
  for (std::uint32_t i = 0; i < n; i += 2) c.pairing.emplace_back(order[i], order[i + 1]);
  c.unsent_pair_index = rng.below(c.pairing.size());
  c.t = rng.bit();
  for (std::size_t i = 0; i < c.pairing.size(); ++i) {
    for (std::uint8_t sign = 0; sign < 2; ++sign) {
      if (i == c.unsent_pair_index && sign == c.t) continue;
      c.sent_signs.push_back(sign);
    }
  }
  return c;
}

inline Chau15AliceChoice random_chau15_alice(const gf::FieldSpec& spec, Rng& rng) {
  const unsigned s = rng.bit();
  const auto [j, k] = random_distinct_pair(spec.size(), rng);
  return {s, j, k};
}

// ---------------------------------------------------------------------------
// Rounds

namespace detail {

inline void require_not_attacker(CharlieKind charlie, ProtocolId id, const Transcript& transcript) {
  if (charlie != CharlieKind::NaiveAttacker) return;
  // The attack only works if the pairs are public before the measurement; the
  // MDI orderings never reveal them, so this always rejects.
  if (!transcript.pairs_known_before_measurement()) {
    throw protocol_violation(std::string("naive attack is structurally impossible in ") + std::string(to_string(id)) +
                             ": no pair information precedes Charlie's measurement");
  }
}

// Single-qudit transmission through one leg.
inline std::optional<StateVector> send(const StateVector& s, bool noisy, const ChannelModel& model, Rng& rng) {
  if (!noisy) return s;
  auto r = channel::apply_channel(s, 0, model, rng);
  if (r.lost) return std::nullopt;
  return std::move(r.state);
}

}  // namespace detail

/// One swap round plus computational-basis readout of both retained halves.
inline RoundRecord run_mother_round(const gf::FieldSpec& spec, std::uint64_t round, std::uint64_t seed,
                                    const ChannelModel& model, CharlieKind charlie) {
  Rng rng(seed);
  RoundRecord rec{ProtocolId::Mother, round, MotherChoice{}, {}, {}, {}, {}, spec.degree(), false, {}, {}};
  rec.transcript.append(Party::Alice, EventKind::QuantumSent);
  rec.transcript.append(Party::Bob, EventKind::QuantumSent);
  auto sent = channel::transmit(swap::initial_state(spec), {{1, model.legs.alice}, {3, model.legs.bob}}, model, rng);
  detail::require_not_attacker(charlie, rec.protocol, rec.transcript);
  if (sent.lost) {
    rec.announcement.kind = Announcement::Kind::Lost;
    return rec;
  }
  if (charlie == CharlieKind::Silent) return rec;

  rec.transcript.append(Party::Charlie, EventKind::CharlieMeasured);
  const auto basis = swap::bell_vectors(spec);
  auto m = measure_in_basis(sent.state, swap::kCharlieQudits, basis, rng);
  const BellLabel ab = swap::label_from_index(spec, m.outcome);
  rec.announcement = {Announcement::Kind::Bell, ab.a.bits(), ab.b.bits()};
  rec.transcript.append(Party::Charlie, EventKind::CharlieAnnouncement, {ab.a.bits(), ab.b.bits()});

  const StateVector retained = swap::correct(m.posterior, ab, swap::Corrector::Bob);
  const auto readout = computational_basis(spec.size());
  const std::array<unsigned, 1> first = {0};
  auto alice = measure_in_basis(retained, first, readout, rng);
  auto bob = measure_in_basis(alice.posterior, first, readout, rng);
  rec.alice_raw = static_cast<std::uint32_t>(alice.outcome);
  rec.bob_raw = static_cast<std::uint32_t>(bob.outcome);
  rec.sifted = true;
  return rec;
}

inline RoundRecord run_mdi_rrdps_round(const gf::FieldSpec& spec, std::uint64_t round, std::uint64_t seed,
                                       const ChannelModel& model, CharlieKind charlie) {
  Rng rng(seed);
  auto alice = random_rrdps_alice(spec, rng);
  auto bob = random_rrdps_bob(spec, rng);
  RoundRecord rec{ProtocolId::MdiRrdps, round, std::pair{alice, bob}, {}, {}, {}, {}, 1, false, {}, {}};

  rec.transcript.append(Party::Alice, EventKind::QuantumSent);
  rec.transcript.append(Party::Bob, EventKind::QuantumSent);
  auto a_state = detail::send(rrdps_alice_prepare(spec, alice), model.legs.alice, model, rng);
  auto b_state = detail::send(rrdps_bob_prepare(spec, bob), model.legs.bob, model, rng);
  detail::require_not_attacker(charlie, rec.protocol, rec.transcript);
  if (!a_state || !b_state) {
    rec.announcement.kind = Announcement::Kind::Lost;
    return rec;
  }
  if (charlie == CharlieKind::Silent) return rec;

  rec.transcript.append(Party::Charlie, EventKind::CharlieMeasured);
  const auto basis = swap::bell_vectors(spec);
  const std::array<unsigned, 2> both = {0, 1};
  auto m = measure_in_basis(tensor(*a_state, *b_state), both, basis, rng);
  const BellLabel ab = swap::label_from_index(spec, m.outcome);
  rec.announcement = {Announcement::Kind::Bell, ab.a.bits(), ab.b.bits()};
  rec.transcript.append(Party::Charlie, EventKind::CharlieAnnouncement, {ab.a.bits(), ab.b.bits()});

  rec.transcript.append(Party::Bob, EventKind::BobAnnouncesPair, {bob.j, bob.k});
  rec.announced_pair = std::pair{bob.j, bob.k};
  rec.transcript.require_bob_after_charlie();
  rec.alice_raw = rrdps_alice_raw_bit(spec, alice.s, bob.j, bob.k, ab);
  rec.bob_raw = bob.t;
  rec.sifted = true;
  return rec;
}

namespace detail {

// Shared by both linear-optics schemes: transmit Alice's qudit and Bob's N-1
// qudits, then postselect on |Psi>. Returns false if the round ended early.
inline bool lo_transmit_and_project(RoundRecord& rec, const StateVector& alice_state, const std::vector<StateVector>& bob_states,
                                    const ChannelModel& model, CharlieKind charlie, Rng& rng) {
  rec.transcript.append(Party::Alice, EventKind::QuantumSent);
  rec.transcript.append(Party::Bob, EventKind::QuantumSent);
  std::vector<StateVector> arriving;
  bool lost = false;
  if (auto a = send(alice_state, model.legs.alice, model, rng)) {
    arriving.push_back(std::move(*a));
  } else {
    lost = true;
  }
  for (const auto& s : bob_states) {
    if (auto b = send(s, model.legs.bob, model, rng)) {
      arriving.push_back(std::move(*b));
    } else {
      lost = true;
    }
  }
  require_not_attacker(charlie, rec.protocol, rec.transcript);
  if (lost) {
    rec.announcement.kind = Announcement::Kind::Lost;
    return false;
  }
  if (charlie == CharlieKind::Silent) return false;

  rec.transcript.append(Party::Charlie, EventKind::CharlieMeasured);
  const auto projection = optics::project_onto_psi(optics::ProductInput(std::move(arriving)), rng);
  rec.announcement.kind = Announcement::Kind::Projection;
  rec.announcement.success = projection.success;
  rec.transcript.append(Party::Charlie, EventKind::CharlieAnnouncement,
                        projection.success ? std::vector<std::uint32_t>{1} : std::vector<std::uint32_t>{});
  return projection.success;
}

}  // namespace detail

inline RoundRecord run_mdi_rrdps_lo_round(const gf::FieldSpec& spec, std::uint64_t round, std::uint64_t seed,
                                          const ChannelModel& model, CharlieKind charlie) {
  Rng rng(seed);
  auto alice = random_rrdps_alice(spec, rng);
  auto bob = random_lo_bob(spec, rng);
  RoundRecord rec{ProtocolId::MdiRrdpsLo, round, std::pair{alice, bob}, {}, {}, {}, {}, 1, false, {}, {}};
  if (!detail::lo_transmit_and_project(rec, rrdps_alice_prepare(spec, alice), lo_bob_prepare(spec, bob), model,
                                       charlie, rng)) {
    return rec;
  }
  rec.transcript.append(Party::Bob, EventKind::BobAnnouncesPair, {bob.j(), bob.k()});
  rec.announced_pair = std::pair{bob.j(), bob.k()};
  rec.transcript.require_bob_after_charlie();
  rec.alice_raw = (alice.s[bob.j()] ^ alice.s[bob.k()]) & 1U;
  rec.bob_raw = bob.t;
  rec.sifted = true;
  return rec;
}

inline RoundRecord run_mdi_chau15_lo_round(const gf::FieldSpec& spec, std::uint64_t round, std::uint64_t seed,
                                           const ChannelModel& model, CharlieKind charlie) {
  Rng rng(seed);
  auto alice = random_chau15_alice(spec, rng);
  auto bob = random_lo_bob(spec, rng);
  RoundRecord rec{ProtocolId::MdiChau15Lo, round, std::pair{alice, bob}, {}, {}, {}, {}, 1, false, {}, {}};
  if (!detail::lo_transmit_and_project(rec, two_term_state(spec.size(), alice.j, alice.k, alice.s),
                                       lo_bob_prepare(spec, bob), model, charlie, rng)) {
    return rec;
  }
  rec.transcript.append(Party::Bob, EventKind::BobAnnouncesPair, {bob.j(), bob.k()});
  rec.transcript.append(Party::Alice, EventKind::AliceAnnouncesPair, {alice.j, alice.k});
  rec.announced_pair = std::pair{bob.j(), bob.k()};
  rec.transcript.require_bob_after_charlie();
  const bool same_pair = std::minmax(alice.j, alice.k) == std::minmax(bob.j(), bob.k());
  if (!same_pair) return rec;
  rec.alice_raw = (alice.s ^ kChau15LoFlip) & 1U;
  rec.bob_raw = bob.t;
  rec.sifted = true;
  return rec;
}

/// The naive scheme: pairs are public before transmission, so an attacking
/// Charlie can read both phases without disturbing them.
inline RoundRecord run_naive_chau15_round(const gf::FieldSpec& spec, std::uint64_t round, std::uint64_t seed,
                                          const ChannelModel& model, CharlieKind charlie) {
  Rng rng(seed);
  auto alice = random_chau15_alice(spec, rng);
  auto bob = random_rrdps_bob(spec, rng);
  RoundRecord rec{ProtocolId::NaiveChau15, round, std::pair{alice, bob}, {}, {}, {}, {}, 1, false, {}, {}};
  const PublicPairs pairs{alice.j, alice.k, bob.j, bob.k};
  rec.transcript.append(Party::Alice, EventKind::PairsPublic, {alice.j, alice.k, bob.j, bob.k});
  rec.transcript.append(Party::Alice, EventKind::QuantumSent);
  rec.transcript.append(Party::Bob, EventKind::QuantumSent);
  auto a_state = detail::send(two_term_state(spec.size(), alice.j, alice.k, alice.s), model.legs.alice, model, rng);
  auto b_state = detail::send(two_term_state(spec.size(), bob.j, bob.k, bob.t), model.legs.bob, model, rng);
  if (!a_state || !b_state) {
    rec.announcement.kind = Announcement::Kind::Lost;
    return rec;
  }
  if (charlie == CharlieKind::Silent) return rec;

  std::uint32_t outcome = channel::kNaiveFailure;
  if (charlie == CharlieKind::NaiveAttacker) {
    const auto attack = channel::naive_charlie_attack(*a_state, *b_state, rec.transcript, rng);
    outcome = attack.announcement;
    rec.attacker_guess = attack.alice_phase_guess;
  } else {
    outcome = channel::naive_measure(tensor(*a_state, *b_state), pairs, rng);
  }
  rec.transcript.append(Party::Charlie, EventKind::CharlieMeasured);
  rec.announcement.kind = Announcement::Kind::Naive;
  rec.announcement.code = outcome;
  rec.transcript.append(Party::Charlie, EventKind::CharlieAnnouncement,
                        outcome == channel::kNaiveFailure ? std::vector<std::uint32_t>{}
                                                          : std::vector<std::uint32_t>{outcome});
  if (outcome == channel::kNaiveFailure) return rec;
  rec.alice_raw = alice.s;
  rec.bob_raw = bob.t ^ (channel::naive_outcome_flips(outcome) ? 1U : 0U);
  rec.sifted = true;
  return rec;
}

inline RoundRecord run_round(ProtocolId id, const gf::FieldSpec& spec, std::uint64_t round, std::uint64_t seed,
                             const ChannelModel& model, CharlieKind charlie) {
  switch (id) {
    case ProtocolId::Mother: return run_mother_round(spec, round, seed, model, charlie);
    case ProtocolId::MdiRrdps: return run_mdi_rrdps_round(spec, round, seed, model, charlie);
    case ProtocolId::MdiRrdpsLo: return run_mdi_rrdps_lo_round(spec, round, seed, model, charlie);
    case ProtocolId::MdiChau15Lo: return run_mdi_chau15_lo_round(spec, round, seed, model, charlie);
    case ProtocolId::NaiveChau15: return run_naive_chau15_round(spec, round, seed, model, charlie);
  }
  throw std::logic_error("unhandled protocol");
}

}  // namespace mdiqkd::protocols
