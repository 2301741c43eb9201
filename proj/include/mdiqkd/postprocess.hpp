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

/// @file postprocess.hpp
/// Classical post-processing of sifted keys: sampled error estimation,
/// interactive parity-bisection reconciliation with a hash check, Toeplitz
/// privacy amplification, and a heuristic final-length rule.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/random.hpp"

namespace mdiqkd::post {

using BitVector = std::vector<std::uint8_t>;

inline constexpr std::size_t kDefaultSafetyMargin = 32;

struct QberEstimate {
  double qber;
  std::size_t sample_size;
  BitVector remaining_a;
  BitVector remaining_b;
};

/// Publicly compares a random subset of round(sample_fraction * length) positions.
inline QberEstimate estimate_qber(const BitVector& a, const BitVector& b, double sample_fraction, Rng& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("sifted keys differ in length");
  if (!(sample_fraction > 0.0 && sample_fraction < 1.0)) {
    throw std::invalid_argument("sample fraction must lie strictly between 0 and 1");
  }
  const auto k = static_cast<std::size_t>(std::llround(sample_fraction * static_cast<double>(a.size())));
  if (k == 0) throw std::invalid_argument("error-estimation sample is empty");
  std::vector<std::size_t> idx(a.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(idx);
  std::vector<bool> sampled(a.size(), false);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sampled[idx[i]] = true;
    if (a[idx[i]] != b[idx[i]]) ++errors;
  }
  QberEstimate out{static_cast<double>(errors) / static_cast<double>(k), k, {}, {}};
  out.remaining_a.reserve(a.size() - k);
  out.remaining_b.reserve(a.size() - k);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sampled[i]) continue;
    out.remaining_a.push_back(a[i]);
    out.remaining_b.push_back(b[i]);
  }
  return out;
}

/// T * key over GF(2) for a seeded out_len x key.size() Toeplitz matrix T.
/// Row i of T is the window r[i .. i + L - 1] of one random bit string read
/// against the reversed key, so the cost is out_len * L / 64 word operations.
inline BitVector toeplitz_hash(const BitVector& key, std::size_t out_len, std::uint64_t seed) {
  const std::size_t len = key.size();
  if (out_len == 0 || len == 0) return BitVector(out_len, 0);
  const std::size_t key_words = (len + 63) / 64;
  std::vector<std::uint64_t> rev(key_words, 0);
  for (std::size_t m = 0; m < len; ++m) {
    if (key[len - 1 - m] & 1U) rev[m / 64] |= std::uint64_t{1} << (m % 64);
  }
  const std::size_t r_bits = len + out_len - 1;
  std::vector<std::uint64_t> r((r_bits + 63) / 64 + 2, 0);
  Rng rng(seed);
  for (auto& w : r) w = rng.next();
  BitVector out(out_len, 0);
  for (std::size_t i = 0; i < out_len; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < key_words; ++w) {
      const std::size_t bit = i + 64 * w;
      const std::size_t q = bit / 64;
      const unsigned s = static_cast<unsigned>(bit % 64);
      const std::uint64_t window = s == 0 ? r[q] : (r[q] >> s) | (r[q + 1] << (64 - s));
      acc ^= window & rev[w];
    }
    out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

/// Seeded Toeplitz compression to out_len bits.
inline BitVector privacy_amplify(const BitVector& key, std::size_t out_len, std::uint64_t seed) {
  if (out_len > key.size()) throw std::invalid_argument("privacy amplification cannot lengthen the key");
  return toeplitz_hash(key, out_len, seed);
}

struct EcOptions {
  std::size_t max_passes = 16;
  std::size_t hash_bits = 64;  // verification tag length; collision probability 2^-hash_bits
};

struct EcResult {
  BitVector corrected_b;
  std::size_t leakage_bits;
  std::size_t corrections;
  std::size_t passes;
};

namespace detail {

inline unsigned parity(const BitVector& key, const std::vector<std::size_t>& order, std::size_t lo, std::size_t hi) {
  unsigned p = 0;
  for (std::size_t i = lo; i < hi; ++i) p ^= key[order[i]];
  return p & 1U;
}

}  // namespace detail

/// Parity-bisection reconciliation. Alice's key `a` is the reference; Bob's copy
/// is corrected in place. Every disclosed parity and every verification tag
/// counts toward leakage. Throws ec_failure if the tags still differ after
/// max_passes passes.
inline EcResult error_correct(const BitVector& a, const BitVector& b, double qber, Rng& rng, EcOptions options = {}) {
  if (a.size() != b.size()) throw std::invalid_argument("keys differ in length");
  if (!(qber >= 0.0 && qber < 0.5)) throw std::invalid_argument("error correction requires qber < 0.5");
  EcResult res{b, 0, 0, 0};
  auto verified = [&] {
    const std::uint64_t tag_seed = rng.next();
    res.leakage_bits += options.hash_bits;
    return toeplitz_hash(a, options.hash_bits, tag_seed) == toeplitz_hash(res.corrected_b, options.hash_bits, tag_seed);
  };
  if (a.empty() || verified()) return res;

  const std::size_t n = a.size();
  std::size_t block = qber > 0.0 ? std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(0.73 / qber))) : n;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t pass = 0; pass < options.max_passes; ++pass) {
    if (pass > 0) rng.shuffle(order);
    block = std::min(block, n);
    for (std::size_t lo = 0; lo < n; lo += block) {
      std::size_t hi = std::min(lo + block, n);
      ++res.leakage_bits;
      if (detail::parity(a, order, lo, hi) == detail::parity(res.corrected_b, order, lo, hi)) continue;
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        ++res.leakage_bits;
        if (detail::parity(a, order, lo, mid) != detail::parity(res.corrected_b, order, lo, mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      res.corrected_b[order[lo]] ^= 1U;
      ++res.corrections;
      lo = (lo / block) * block;  // resume after the block just fixed
    }
    res.passes = pass + 1;
    if (verified()) return res;
    block *= 2;
  }
  throw ec_failure("error correction did not converge after " + std::to_string(options.max_passes) + " passes");
}

/// Binary entropy h2(x), with h2(0) = h2(1) = 0.
inline double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

/// max(0, floor(n (1 - h2(qber)) - leakage - margin)). A reporting heuristic,
/// not a proven secure rate.
inline std::size_t final_key_length(std::size_t n_sifted, double qber, std::size_t ec_leakage,
                                    std::size_t safety_margin = kDefaultSafetyMargin) {
  const double q = std::min(qber, 0.5);
  const double raw = static_cast<double>(n_sifted) * (1.0 - binary_entropy(q)) - static_cast<double>(ec_leakage) -
                     static_cast<double>(safety_margin);
  return raw <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(raw));
}

}  // namespace mdiqkd::post
