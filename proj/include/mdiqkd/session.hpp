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

/// @file session.hpp
/// Session orchestration: configuration, per-round seeding, parallel round
/// execution with merge by round index, and post-processing into a report.
///
/// Seeds: round r uses derive_seed(seed, kRoundStream, r); post-processing draws
/// from its own streams. The worker count therefore never changes any output.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mdiqkd/postprocess.hpp"
#include "mdiqkd/protocols.hpp"

namespace mdiqkd {

inline constexpr std::uint64_t kRoundStream = 1;
inline constexpr std::uint64_t kQberStream = 2;
inline constexpr std::uint64_t kEcStream = 3;
inline constexpr std::uint64_t kPaStream = 4;

struct RunConfig {
  protocols::ProtocolId protocol = protocols::ProtocolId::Mother;
  unsigned n = 2;
  std::optional<std::uint32_t> modulus;  // overrides the default table
  std::uint64_t rounds = 1000;
  channel::ChannelModel channel{};
  channel::CharlieKind charlie = channel::CharlieKind::Honest;
  std::uint64_t seed = 1;
  double sample_fraction = 0.1;
  std::size_t safety_margin = post::kDefaultSafetyMargin;
  std::string output_path;  // empty: standard output

  [[nodiscard]] gf::FieldSpec field() const {
    return modulus ? gf::FieldSpec(n, *modulus) : gf::FieldSpec(n);
  }
};

/// Throws std::invalid_argument with a user-facing message on any bad field.
inline void validate(const RunConfig& c) {
  if (c.n < 1 || c.n > gf::kMaxDegree) {
    throw std::invalid_argument("n = " + std::to_string(c.n) + " is outside the supported range 1..8 (N = 2^n <= 256)");
  }
  (void)c.field();
  if (c.rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  if (!(c.sample_fraction > 0.0 && c.sample_fraction < 1.0)) {
    throw std::invalid_argument("sample fraction must lie strictly between 0 and 1");
  }
  if (!(c.channel.p >= 0.0 && c.channel.p <= 1.0)) throw std::invalid_argument("channel p must lie in [0, 1]");
  if (c.charlie == channel::CharlieKind::NaiveAttacker && c.protocol != protocols::ProtocolId::NaiveChau15) {
    throw std::invalid_argument("charlie naive_attacker is only meaningful with protocol naive_chau15");
  }
}

struct SessionReport {
  std::string protocol;
  unsigned n = 0;
  std::uint64_t rounds_total = 0;
  std::uint64_t rounds_lost = 0;
  std::uint64_t rounds_announced = 0;    // Charlie produced a result
  std::uint64_t projection_successes = 0;
  std::uint64_t rounds_sifted = 0;
  std::uint64_t sifted_key_bits = 0;
  double sifting_rate = 0.0;             // rounds_sifted / rounds_total
  double projection_success_rate = 0.0;  // linear-optics schemes only
  double raw_qber = 0.0;                 // bit disagreement over all sifted bits
  double symbol_error_rate = 0.0;        // raw-value disagreement per sifted round
  double qber_estimate = 0.0;
  std::uint64_t qber_sample_size = 0;
  std::uint64_t ec_leakage_bits = 0;
  std::uint64_t ec_corrections = 0;
  std::uint64_t final_key_length = 0;
  bool key_agreement = false;
  bool aborted = false;
  std::string abort_reason;
  // Naive attack only.
  std::optional<double> attacker_knowledge;
  std::optional<double> qber_baseline;
  std::optional<double> qber_delta;
};

struct SessionResult {
  std::vector<protocols::RoundRecord> records;
  SessionReport report;
  post::BitVector alice_key;
  post::BitVector bob_key;
};

/// Worker count from MDIQKD_WORKERS, else hardware concurrency.
inline unsigned default_workers() {
  if (const char* env = std::getenv("MDIQKD_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs every round; records are stored by round index.
inline std::vector<protocols::RoundRecord> run_rounds(const RunConfig& c, unsigned workers) {
  const gf::FieldSpec spec = c.field();
  std::vector<std::optional<protocols::RoundRecord>> slots(c.rounds);
  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t r = begin; r < end; ++r) {
      slots[r] = protocols::run_round(c.protocol, spec, r, derive_seed(c.seed, kRoundStream, r), c.channel, c.charlie);
    }
  };
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(c.rounds, 1024))));
  if (workers == 1) {
    work(0, c.rounds);
  } else {
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::uint64_t chunk = (c.rounds + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min<std::uint64_t>(c.rounds, w * chunk);
      const std::uint64_t end = std::min<std::uint64_t>(c.rounds, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<protocols::RoundRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

namespace detail {

inline void append_bits(post::BitVector& key, std::uint32_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) key.push_back(static_cast<std::uint8_t>((value >> i) & 1U));
}

inline double bit_error_rate(const post::BitVector& a, const post::BitVector& b) {
  if (a.empty()) return 0.0;
  std::size_t errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i) errors += a[i] != b[i];
  return static_cast<double>(errors) / static_cast<double>(a.size());
}

}  // namespace detail

/// Tallies the round records and runs sampling, reconciliation and privacy
/// amplification. Never throws on protocol-level trouble; sets aborted instead.
inline SessionResult distill(const RunConfig& c, std::vector<protocols::RoundRecord> records) {
  SessionResult res;
  SessionReport& rep = res.report;
  rep.protocol = std::string(protocols::to_string(c.protocol));
  rep.n = c.n;
  rep.rounds_total = records.size();

  post::BitVector alice, bob;
  std::uint64_t symbol_errors = 0;
  std::uint64_t attacker_hits = 0;
  for (const auto& r : records) {
    using Kind = protocols::Announcement::Kind;
    if (r.announcement.kind == Kind::Lost) ++rep.rounds_lost;
    if (r.announcement.kind != Kind::None && r.announcement.kind != Kind::Lost) ++rep.rounds_announced;
    if (r.announcement.kind == Kind::Projection && r.announcement.success) ++rep.projection_successes;
    if (!r.sifted) continue;
    ++rep.rounds_sifted;
    symbol_errors += *r.alice_raw != *r.bob_raw;
    if (r.attacker_guess && *r.attacker_guess == *r.alice_raw) ++attacker_hits;
    detail::append_bits(alice, *r.alice_raw, r.raw_width);
    detail::append_bits(bob, *r.bob_raw, r.raw_width);
  }
  rep.sifted_key_bits = alice.size();
  rep.sifting_rate = static_cast<double>(rep.rounds_sifted) / static_cast<double>(rep.rounds_total);
  if (protocols::uses_linear_optics(c.protocol) && rep.rounds_announced > 0) {
    rep.projection_success_rate =
        static_cast<double>(rep.projection_successes) / static_cast<double>(rep.rounds_announced);
  }
  rep.raw_qber = detail::bit_error_rate(alice, bob);
  if (rep.rounds_sifted > 0) {
    rep.symbol_error_rate = static_cast<double>(symbol_errors) / static_cast<double>(rep.rounds_sifted);
  }
  if (c.charlie == channel::CharlieKind::NaiveAttacker && rep.rounds_sifted > 0) {
    rep.attacker_knowledge = static_cast<double>(attacker_hits) / static_cast<double>(rep.rounds_sifted);
  }
  res.records = std::move(records);

  try {
    Rng qber_rng(derive_seed(c.seed, kQberStream, 0));
    auto est = post::estimate_qber(alice, bob, c.sample_fraction, qber_rng);
    rep.qber_estimate = est.qber;
    rep.qber_sample_size = est.sample_size;
    if (est.qber >= 0.5) {
      rep.aborted = true;
      rep.abort_reason = "estimated qber is at least 0.5";
      return res;
    }
    Rng ec_rng(derive_seed(c.seed, kEcStream, 0));
    auto ec = post::error_correct(est.remaining_a, est.remaining_b, est.qber, ec_rng);
    rep.ec_leakage_bits = ec.leakage_bits;
    rep.ec_corrections = ec.corrections;
    rep.final_key_length = post::final_key_length(est.remaining_a.size(), est.qber, ec.leakage_bits, c.safety_margin);
    const std::uint64_t pa_seed = derive_seed(c.seed, kPaStream, 0);
    res.alice_key = post::privacy_amplify(est.remaining_a, rep.final_key_length, pa_seed);
    res.bob_key = post::privacy_amplify(ec.corrected_b, rep.final_key_length, pa_seed);
    rep.key_agreement = rep.final_key_length > 0 && res.alice_key == res.bob_key;
  } catch (const ec_failure& e) {
    rep.aborted = true;
    rep.abort_reason = e.what();
  } catch (const std::invalid_argument& e) {
    rep.aborted = true;
    rep.abort_reason = e.what();
  }
  return res;
}

/// Full session. For the naive attack, also runs the honest baseline with the
/// same seed to report the induced qber change.
inline SessionResult run_session(const RunConfig& c, unsigned workers = default_workers()) {
  validate(c);
  SessionResult res = distill(c, run_rounds(c, workers));
  if (c.charlie == channel::CharlieKind::NaiveAttacker) {
    RunConfig honest = c;
    honest.charlie = channel::CharlieKind::Honest;
    const auto baseline = distill(honest, run_rounds(honest, workers));
    res.report.qber_baseline = baseline.report.raw_qber;
    res.report.qber_delta = res.report.raw_qber - baseline.report.raw_qber;
  }
  return res;
}

/// Convenience wrapper for the entanglement-swapping scheme.
inline SessionReport run_mother_of_all_session(const gf::FieldSpec& spec, std::uint64_t rounds, std::uint64_t seed,
                                               const channel::ChannelModel& model = {}) {
  if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
  RunConfig c;
  c.protocol = protocols::ProtocolId::Mother;
  c.n = spec.degree();
  c.modulus = spec.modulus();
  c.rounds = rounds;
  c.seed = seed;
  c.channel = model;
  return run_session(c).report;
}

}  // namespace mdiqkd
