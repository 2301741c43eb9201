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

/// @file selftest.hpp
/// Exhaustive small-N verification suites, runnable from the CLI.

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdiqkd/optics.hpp"
#include "mdiqkd/protocols.hpp"
#include "mdiqkd/swap.hpp"

namespace mdiqkd::selftest {

struct SuiteResult {
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

struct Options {
  /// Replaces the degree-4 field used by the axiom suite (fault injection).
  std::optional<gf::FieldSpec> axiom_field;
  std::uint64_t seed = 20260101;
};

namespace detail {

inline std::string field_axioms(const gf::FieldSpec& f) {
  const std::uint32_t n = f.size();
  for (std::uint32_t x = 0; x < n; ++x) {
    if (f.mul_bits(x, 1) != x) return "1 is not a multiplicative identity";
    if (x != 0) {
      bool has_inverse = false;
      for (std::uint32_t y = 1; y < n && !has_inverse; ++y) has_inverse = f.mul_bits(x, y) == 1;
      if (!has_inverse) return "element " + std::to_string(x) + " has no inverse";
    }
    if (f.trace_bits(x) > 1) return "trace of " + std::to_string(x) + " leaves GF(2)";
    for (std::uint32_t y = 0; y < n; ++y) {
      if (f.mul_bits(x, y) != f.mul_bits(y, x)) return "multiplication not commutative";
      for (std::uint32_t z = 0; z < n; ++z) {
        if (f.mul_bits(f.mul_bits(x, y), z) != f.mul_bits(x, f.mul_bits(y, z))) return "multiplication not associative";
        if (f.mul_bits(x, y ^ z) != (f.mul_bits(x, y) ^ f.mul_bits(x, z))) return "distributivity fails";
      }
    }
  }
  return {};
}

inline std::string bell_orthonormality() {
  for (unsigned deg : {1U, 2U, 3U}) {
    const gf::FieldSpec f(deg);
    const auto basis = swap::bell_vectors(f);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (std::abs(inner_product(basis[i], basis[j]) - Amplitude(i == j ? 1.0 : 0.0)) > kTolerance) {
          return "Gram matrix deviates at N = " + std::to_string(f.size());
        }
      }
    }
  }
  return {};
}

inline std::string swap_table() {
  for (unsigned deg : {1U, 2U, 3U}) {
    const gf::FieldSpec f(deg);
    const double expected = 1.0 / (static_cast<double>(f.size()) * f.size());
    for (auto who : {swap::Corrector::Bob, swap::Corrector::Alice}) {
      for (const auto& [idx, e] : swap::swap_outcome_table(f, who)) {
        if (std::abs(e.probability - expected) > 1e-12 || std::abs(e.fidelity - 1.0) > 1e-12) {
          return "outcome " + std::to_string(idx) + " at N = " + std::to_string(f.size()) + " is not exact";
        }
      }
    }
  }
  return {};
}

inline std::string oracle_equivalence(Rng& rng) {
  for (unsigned n : {2U, 3U, 4U}) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<StateVector> states;
      for (unsigned p = 0; p < n; ++p) {
        std::vector<Amplitude> v(n);
        for (auto& x : v) x = Amplitude(rng.normal(), rng.normal());
        states.push_back(StateVector::from_dense(v).normalized());
      }
      const optics::ProductInput input(std::move(states));
      if (std::abs(optics::antisym_overlap_det(input) - optics::antisym_overlap_bruteforce(input)) > 1e-10) {
        return "determinant and permutation sum disagree at N = " + std::to_string(n);
      }
    }
  }
  return {};
}

inline std::string distinct_outcomes(Rng& rng) {
  for (unsigned n : {2U, 3U, 4U}) {
    for (int i = 0; i < 10; ++i) {
      if (!optics::distinct_outcomes_check(optics::random_unitary(n, rng), 20, rng)) {
        return "repeated outcome at N = " + std::to_string(n);
      }
    }
  }
  if (!optics::distinct_outcomes_check(optics::hadamard_blocks(4), 50, rng)) return "repeated outcome for Hadamard blocks";
  return {};
}

// Every (s, t, j, k) for N = 2 and every Bell outcome with nonzero weight.
inline std::string rrdps_exhaustive() {
  const gf::FieldSpec f(1);
  const auto basis = bell_basis(f);
  for (unsigned s_bits = 0; s_bits < 4; ++s_bits) {
    protocols::RrdpsAliceChoice alice{{static_cast<std::uint8_t>(s_bits & 1U), static_cast<std::uint8_t>(s_bits >> 1)}};
    for (unsigned t = 0; t < 2; ++t) {
      for (auto [j, k] : {std::pair<std::uint32_t, std::uint32_t>{0, 1}, {1, 0}}) {
        const protocols::RrdpsBobChoice bob{t, j, k};
        const auto joint = tensor(protocols::rrdps_alice_prepare(f, alice), protocols::rrdps_bob_prepare(f, bob));
        for (const auto& [label, phi] : basis) {
          if (std::norm(inner_product(phi, joint)) < 1e-12) continue;
          if (protocols::rrdps_alice_raw_bit(f, alice.s, j, k, label) != t) return "raw bits disagree";
        }
      }
    }
  }
  return {};
}

// Linear-optics success branches for N = 2 always agree, and the pair-based
// scheme's correlation matches the frozen flip constant.
inline std::string lo_exhaustive() {
  const gf::FieldSpec f(1);
  for (unsigned s_bits = 0; s_bits < 4; ++s_bits) {
    protocols::RrdpsAliceChoice alice{{static_cast<std::uint8_t>(s_bits & 1U), static_cast<std::uint8_t>(s_bits >> 1)}};
    for (unsigned t = 0; t < 2; ++t) {
      protocols::LoBobChoice bob{{{0, 1}}, 0, t, {static_cast<std::uint8_t>(t ^ 1U)}};
      std::vector<StateVector> in{protocols::rrdps_alice_prepare(f, alice)};
      for (auto& s : protocols::lo_bob_prepare(f, bob)) in.push_back(std::move(s));
      const double p = std::norm(optics::antisym_overlap_det(optics::ProductInput(std::move(in))));
      if (p > 1e-12 && ((alice.s[0] ^ alice.s[1]) & 1U) != t) return "RRDPS linear-optics raw bits disagree";
    }
  }
  for (unsigned s = 0; s < 2; ++s) {
    for (unsigned t = 0; t < 2; ++t) {
      protocols::LoBobChoice bob{{{0, 1}}, 0, t, {static_cast<std::uint8_t>(t ^ 1U)}};
      std::vector<StateVector> in{protocols::two_term_state(2, 0, 1, s)};
      for (auto& st : protocols::lo_bob_prepare(f, bob)) in.push_back(std::move(st));
      const double p = std::norm(optics::antisym_overlap_det(optics::ProductInput(std::move(in))));
      if (p > 1e-12 && (s ^ protocols::kChau15LoFlip) != t) return "pair-based linear-optics raw bits disagree";
    }
  }
  return {};
}

inline std::string naive_attack_exhaustive() {
  const gf::FieldSpec f(1);
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    auto r = protocols::run_naive_chau15_round(f, seed, seed, channel::ChannelModel::ideal(),
                                               channel::CharlieKind::NaiveAttacker);
    if (!r.sifted) return "naive round unexpectedly unsifted";
    if (*r.alice_raw != *r.bob_raw) return "attack introduced a disagreement";
    if (*r.attacker_guess != *r.alice_raw) return "attacker guess wrong";
  }
  return {};
}

}  // namespace detail

inline std::vector<SuiteResult> run(const Options& options = {}) {
  Rng rng(options.seed);
  const gf::FieldSpec axiom_field = options.axiom_field.value_or(gf::FieldSpec(4));
  std::vector<std::pair<std::string, std::function<std::string()>>> suites = {
      {"field axioms (GF(16) exhaustive)", [&] { return detail::field_axioms(axiom_field); }},
      {"Bell basis orthonormality (N = 2, 4, 8)", [] { return detail::bell_orthonormality(); }},
      {"swap outcome table (N = 2, 4, 8)", [] { return detail::swap_table(); }},
      {"determinant vs permutation sum (N = 2, 3, 4)", [&] { return detail::oracle_equivalence(rng); }},
      {"antisymmetric state distinct outcomes", [&] { return detail::distinct_outcomes(rng); }},
      {"RRDPS raw-bit formula (N = 2 exhaustive)", [] { return detail::rrdps_exhaustive(); }},
      {"linear-optics raw bits (N = 2 exhaustive)", [] { return detail::lo_exhaustive(); }},
      {"naive attack undetectable (N = 2)", [] { return detail::naive_attack_exhaustive(); }},
  };
  std::vector<SuiteResult> out;
  for (auto& [name, fn] : suites) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      failure = fn();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back({name, failure.empty(), failure, secs});
  }
  return out;
}

}  // namespace mdiqkd::selftest
