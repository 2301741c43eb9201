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

/// @file swap.hpp
/// Entanglement swapping between two |Phi_00> pairs.
///
/// Qudit order is (A1, A2, B1, B2). Charlie measures A2 and B2 (indices 1 and 3)
/// in the generalized Bell basis; one party then corrects its retained qudit.

#include <array>
#include <map>
#include <vector>

#include "mdiqkd/qstate.hpp"

namespace mdiqkd::swap {

enum class Corrector { Alice, Bob };

inline constexpr std::array<unsigned, 2> kCharlieQudits = {1, 3};

struct SwapRound {
  gf::FieldSpec spec;
  BellLabel outcome;
  double outcome_probability;
  StateVector pre_state;   // 4 qudits, before Charlie's measurement
  StateVector post_state;  // (A1, B1) after correction
  Corrector corrected_by;
};

/// |Phi_00> (x) |Phi_00> on (A1, A2, B1, B2).
inline StateVector initial_state(const gf::FieldSpec& spec) {
  const StateVector phi = make_phi(BellLabel(spec, 0, 0));
  return tensor(phi, phi);
}

/// Applies the announced-outcome correction to the retained pair (A1, B1).
inline StateVector correct(const StateVector& retained, const BellLabel& outcome, Corrector who) {
  return who == Corrector::Bob ? apply_correction(retained, 1, outcome) : apply_alice_correction(retained, 0, outcome);
}

inline std::vector<StateVector> bell_vectors(const gf::FieldSpec& spec) {
  std::vector<StateVector> out;
  for (auto& [label, state] : bell_basis(spec)) out.push_back(std::move(state));
  return out;
}

inline BellLabel label_from_index(const gf::FieldSpec& spec, std::size_t index) {
  return {spec, static_cast<std::uint32_t>(index / spec.size()), static_cast<std::uint32_t>(index % spec.size())};
}

inline SwapRound run_swap_round(const gf::FieldSpec& spec, Corrector who, Rng& rng) {
  StateVector pre = initial_state(spec);
  const auto basis = bell_vectors(spec);
  auto m = measure_in_basis(pre, kCharlieQudits, basis, rng);
  BellLabel outcome = label_from_index(spec, m.outcome);
  StateVector post = correct(m.posterior, outcome, who);
  return {spec, outcome, m.probability, std::move(pre), std::move(post), who};
}

struct OutcomeEntry {
  double probability;
  double fidelity;  // with |Phi_00> after correction
};

/// Exhaustive branch table over all N^2 outcomes. Requires N <= 16.
inline std::map<std::uint32_t, OutcomeEntry> swap_outcome_table(const gf::FieldSpec& spec,
                                                                Corrector who = Corrector::Bob) {
  if (spec.size() > 16) throw std::invalid_argument("swap outcome table supports N <= 16");
  const StateVector pre = initial_state(spec);
  const StateVector target = make_phi(BellLabel(spec, 0, 0));
  std::map<std::uint32_t, OutcomeEntry> table;
  for (const auto& [label, phi] : bell_basis(spec)) {
    Branch branch = project(pre, kCharlieQudits, phi);
    double fid = 0.0;
    if (branch.probability > 0.0) fid = fidelity(target, correct(branch.posterior, label, who));
    table.emplace(label.index(), OutcomeEntry{branch.probability, fid});
  }
  return table;
}

}  // namespace mdiqkd::swap
