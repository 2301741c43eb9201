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

/// @file channel.hpp
/// Noise on the legs into Charlie, Charlie's behaviours, and the phase-extraction
/// attack on the naive MDI version of the pair-based scheme.
///
/// Noise is simulated as stochastic pure-state trajectories. With probability p:
///   depolarizing  the qudit is replaced by a uniformly random |r>. On an
///                 entangled qudit this is done by first collapsing it in the
///                 computational basis, which is the same channel once the old
///                 value is discarded.
///   dephasing     a uniformly random diagonal +-1 pattern is applied.
///   loss          the qudit is lost and the round is discarded.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/qstate.hpp"
#include "mdiqkd/transcript.hpp"

namespace mdiqkd::channel {

enum class ChannelKind { Ideal, Depolarizing, Dephasing, Loss };
enum class CharlieKind { Honest, Silent, NaiveAttacker };

/// Which Charlie-bound legs are noisy.
struct Legs {
  bool alice = true;
  bool bob = true;
  friend bool operator==(const Legs&, const Legs&) = default;
};

struct ChannelModel {
  ChannelKind kind = ChannelKind::Ideal;
  double p = 0.0;
  Legs legs{};

  ChannelModel() = default;
  ChannelModel(ChannelKind k, double prob, Legs l = {}) : kind(k), p(prob), legs(l) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("channel probability must lie in [0, 1]");
  }

  static ChannelModel ideal() { return {}; }
  static ChannelModel depolarizing(double p, Legs l = {}) { return {ChannelKind::Depolarizing, p, l}; }
  static ChannelModel dephasing(double p, Legs l = {}) { return {ChannelKind::Dephasing, p, l}; }
  static ChannelModel loss(double p, Legs l = {}) { return {ChannelKind::Loss, p, l}; }
};

constexpr std::string_view to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::Ideal: return "ideal";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::Dephasing: return "dephasing";
    case ChannelKind::Loss: return "loss";
  }
  return "?";
}

constexpr std::string_view to_string(CharlieKind k) {
  switch (k) {
    case CharlieKind::Honest: return "honest";
    case CharlieKind::Silent: return "silent";
    case CharlieKind::NaiveAttacker: return "naive_attacker";
  }
  return "?";
}

inline ChannelKind parse_channel_kind(std::string_view text) {
  for (auto k : {ChannelKind::Ideal, ChannelKind::Depolarizing, ChannelKind::Dephasing, ChannelKind::Loss}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown channel kind '" + std::string(text) + "'");
}

inline CharlieKind parse_charlie_kind(std::string_view text) {
  for (auto k : {CharlieKind::Honest, CharlieKind::Silent, CharlieKind::NaiveAttacker}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown charlie kind '" + std::string(text) + "'");
}

struct ChannelResult {
  StateVector state;
  bool lost = false;
};

namespace detail {

// Collapses `qudit` in the computational basis, then relabels it to `replacement`.
inline StateVector replace_qudit(const StateVector& s, unsigned qudit, std::uint32_t replacement, Rng& rng) {
  std::vector<double> marginal(s.dim(), 0.0);
  for (const auto& [key, amp] : s.entries()) marginal[s.qudit_value(key, qudit)] += std::norm(amp);
  double total = 0.0;
  for (double m : marginal) total += m;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::uint32_t collapsed = 0;
  for (std::uint32_t v = 0; v < s.dim(); ++v) {
    if (marginal[v] <= 0.0) continue;
    collapsed = v;
    acc += marginal[v];
    if (u < acc) break;
  }
  StateVector out(s.dim(), s.num_qudits());
  for (const auto& [key, amp] : s.entries()) {
    if (s.qudit_value(key, qudit) == collapsed) out.set(s.with_qudit(key, qudit, replacement), amp);
  }
  return out.normalized();
}

}  // namespace detail

/// One trajectory of the channel on one qudit.
inline ChannelResult apply_channel(const StateVector& s, unsigned qudit, const ChannelModel& model, Rng& rng) {
  if (qudit >= s.num_qudits()) throw std::out_of_range("qudit index out of range");
  switch (model.kind) {
    case ChannelKind::Ideal:
      return {s, false};
    case ChannelKind::Loss:
      return {s, rng.bernoulli(model.p)};
    case ChannelKind::Depolarizing: {
      if (!rng.bernoulli(model.p)) return {s, false};
      const auto r = static_cast<std::uint32_t>(rng.below(s.dim()));
      return {detail::replace_qudit(s, qudit, r, rng), false};
    }
    case ChannelKind::Dephasing: {
      if (!rng.bernoulli(model.p)) return {s, false};
      std::vector<double> signs(s.dim());
      for (auto& sign : signs) sign = rng.bit() ? -1.0 : 1.0;
      return {apply_monomial(s, qudit, [&](std::uint32_t i) { return std::pair{i, signs[i]}; }), false};
    }
  }
  throw std::logic_error("unhandled channel kind");
}

/// Applies the channel to the listed legs of a joint state, in order.
inline ChannelResult transmit(StateVector s, std::initializer_list<std::pair<unsigned, bool>> legs,
                              const ChannelModel& model, Rng& rng) {
  bool lost = false;
  for (const auto& [qudit, noisy] : legs) {
    if (!noisy) continue;
    auto r = apply_channel(s, qudit, model, rng);
    s = std::move(r.state);
    lost = lost || r.lost;
  }
  return {std::move(s), lost};
}

/// Exact symbol-disagreement rate of the entanglement-swapping scheme when each
/// noisy leg is independently depolarized with probability p: any replacement
/// decorrelates the two computational outcomes, which then agree with
/// probability 1/N.
inline double swap_depolarizing_disagreement(double p, unsigned dim, Legs legs) {
  const int noisy = static_cast<int>(legs.alice) + static_cast<int>(legs.bob);
  const double untouched = std::pow(1.0 - p, noisy);
  return (1.0 - untouched) * (dim - 1.0) / dim;
}

// ---------------------------------------------------------------------------
// Naive measurement for the pair-based scheme and the attack on it.

/// Outcome codes of the naive four-state measurement on (Alice, Bob):
///   0: (|j',j> + |k',k>)/sqrt2   1: (|j',j> - |k',k>)/sqrt2
///   2: (|j',k> + |k',j>)/sqrt2   3: (|j',k> - |k',j>)/sqrt2
/// kNaiveFailure: the state left the four-dimensional subspace.
inline constexpr std::uint32_t kNaiveFailure = 4;

inline std::array<StateVector, 4> naive_bell_states(unsigned dim, const PublicPairs& pairs) {
  const double h = 1.0 / std::sqrt(2.0);
  auto make = [&](std::uint32_t a0, std::uint32_t b0, std::uint32_t a1, std::uint32_t b1, double sign) {
    StateVector s(dim, 2);
    s.set(s.pack({a0, b0}), h);
    s.set(s.pack({a1, b1}), sign * h);
    return s;
  };
  const auto [jp, kp, j, k] = std::array{pairs.alice_j, pairs.alice_k, pairs.bob_j, pairs.bob_k};
  return {make(jp, j, kp, k, 1.0), make(jp, j, kp, k, -1.0), make(jp, k, kp, j, 1.0), make(jp, k, kp, j, -1.0)};
}

/// Whether Bob must flip his bit for a naive outcome (the "minus" outcomes
/// anti-correlate the two phases).
constexpr bool naive_outcome_flips(std::uint32_t outcome) { return outcome == 1 || outcome == 3; }

/// Charlie's honest naive measurement on the joint (Alice, Bob) state.
inline std::uint32_t naive_measure(const StateVector& joint, const PublicPairs& pairs, Rng& rng) {
  const auto states = naive_bell_states(joint.dim(), pairs);
  std::array<double, 5> probs{};
  double inside = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    probs[i] = std::norm(inner_product(states[i], joint));
    inside += probs[i];
  }
  probs[4] = std::max(0.0, joint.norm_squared() - inside);
  const double u = rng.uniform() * (inside + probs[4]);
  double acc = 0.0;
  for (std::uint32_t i = 0; i < 5; ++i) {
    acc += probs[i];
    if (u < acc && probs[i] > 0.0) return i;
  }
  return probs[4] > 0.0 ? kNaiveFailure : 3;
}

struct AttackResult {
  unsigned alice_phase_guess;  // guess of s
  unsigned bob_phase_guess;    // guess of t
  std::uint32_t announcement;  // naive outcome code
};

namespace detail {

// {(|j>+|k>)/sqrt2, (|j>-|k>)/sqrt2} completed by the computational states outside {j, k}.
inline std::vector<StateVector> pair_phase_basis(unsigned dim, std::uint32_t j, std::uint32_t k) {
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<StateVector> basis;
  for (double sign : {1.0, -1.0}) {
    StateVector s(dim, 1);
    s.set(j, h);
    s.set(k, sign * h);
    basis.push_back(std::move(s));
  }
  for (std::uint32_t x = 0; x < dim; ++x) {
    if (x != j && x != k) basis.push_back(StateVector::basis(dim, {x}));
  }
  return basis;
}

// Measures a single qudit in its pair phase basis. Returns (phase guess, post-state).
inline std::pair<unsigned, StateVector> extract_phase(const StateVector& qudit, std::uint32_t j, std::uint32_t k,
                                                      Rng& rng) {
  const auto basis = pair_phase_basis(qudit.dim(), j, k);
  const std::array<unsigned, 1> only = {0};
  auto m = measure_in_basis(qudit, only, basis, rng);
  const unsigned guess = m.outcome < 2 ? static_cast<unsigned>(m.outcome) : rng.bit();
  return {guess, basis[m.outcome]};
}

}  // namespace detail

/// Charlie reads both phases off the incoming single-qudit states, then runs the
/// honest naive measurement on what he re-prepared. Requires the pairs to be
/// public before Charlie measures; otherwise throws protocol_violation.
inline AttackResult naive_charlie_attack(const StateVector& alice_state, const StateVector& bob_state,
                                         const Transcript& transcript, Rng& rng) {
  const auto pairs = transcript.pairs_known_before_measurement();
  if (!pairs) {
    throw protocol_violation("naive attack needs the pairs before measurement, but the transcript does not reveal them");
  }
  auto [s_guess, alice_post] = detail::extract_phase(alice_state, pairs->alice_j, pairs->alice_k, rng);
  auto [t_guess, bob_post] = detail::extract_phase(bob_state, pairs->bob_j, pairs->bob_k, rng);
  const std::uint32_t outcome = naive_measure(tensor(alice_post, bob_post), *pairs, rng);
  return {s_guess, t_guess, outcome};
}

}  // namespace mdiqkd::channel
