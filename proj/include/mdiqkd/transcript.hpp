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

/// @file transcript.hpp
/// Append-only log of everything a round makes public or sends to Charlie.
/// Ordering is the security property: in the MDI schemes Bob's (j, k) must be
/// announced only after Charlie has announced his result.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mdiqkd/errors.hpp"

namespace mdiqkd {

enum class Party { Alice, Bob, Charlie };

enum class EventKind {
  QuantumSent,          // a party hands qudits to the channel
  PairsPublic,          // naive scheme: (j', k', j, k) fixed publicly up front
  CharlieMeasured,      // Charlie performs his joint measurement
  CharlieAnnouncement,  // payload: outcome code, empty when the projection failed
  BobAnnouncesPair,     // payload: (j, k)
  AliceAnnouncesPair,   // payload: (j', k')
};

constexpr std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::QuantumSent: return "quantum_sent";
    case EventKind::PairsPublic: return "pairs_public";
    case EventKind::CharlieMeasured: return "charlie_measured";
    case EventKind::CharlieAnnouncement: return "charlie_announcement";
    case EventKind::BobAnnouncesPair: return "bob_announces_pair";
    case EventKind::AliceAnnouncesPair: return "alice_announces_pair";
  }
  return "?";
}

struct Event {
  Party party;
  EventKind kind;
  std::vector<std::uint32_t> payload;
};

/// Pairs known publicly before Charlie measures (naive scheme only).
struct PublicPairs {
  std::uint32_t alice_j, alice_k;  // (j', k')
  std::uint32_t bob_j, bob_k;      // (j, k)
};

class Transcript {
 public:
  void append(Party party, EventKind kind, std::vector<std::uint32_t> payload = {}) {
    events_.push_back({party, kind, std::move(payload)});
  }

  [[nodiscard]] const std::vector<Event>& events() const { return events_; }

  [[nodiscard]] std::optional<std::size_t> first(EventKind kind) const {
    for (std::size_t i = 0; i < events_.size(); ++i) {
      if (events_[i].kind == kind) return i;
    }
    return std::nullopt;
  }

  [[nodiscard]] bool contains(EventKind kind) const { return first(kind).has_value(); }

  /// Every Bob pair announcement is preceded by a Charlie announcement.
  [[nodiscard]] bool bob_announces_after_charlie() const {
    bool charlie_done = false;
    for (const auto& e : events_) {
      if (e.kind == EventKind::CharlieAnnouncement) charlie_done = true;
      if (e.kind == EventKind::BobAnnouncesPair && !charlie_done) return false;
    }
    return true;
  }

  /// The pairs, if they are public and Charlie has not measured yet.
  /// This is exactly the knowledge the naive attack needs.
  [[nodiscard]] std::optional<PublicPairs> pairs_known_before_measurement() const {
    for (const auto& e : events_) {
      if (e.kind == EventKind::CharlieMeasured) return std::nullopt;
      if (e.kind == EventKind::PairsPublic && e.payload.size() == 4) {
        return PublicPairs{e.payload[0], e.payload[1], e.payload[2], e.payload[3]};
      }
    }
    return std::nullopt;
  }

  void require_bob_after_charlie() const {
    if (!bob_announces_after_charlie()) {
      throw protocol_violation("Bob announced (j, k) before Charlie announced his result");
    }
  }

 private:
  std::vector<Event> events_;
};

}  // namespace mdiqkd
