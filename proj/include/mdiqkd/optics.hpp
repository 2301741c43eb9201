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

/// @file optics.hpp
/// Projection of N qudits onto the totally antisymmetric state
///
///   |Psi> = sum_P sgn(P) |P(0), P(1), ..., P(N-1)> / sqrt(N!)
///
/// which is what the linear-optics measurement postselects on. For a product
/// input phi_0 (x) ... (x) phi_{N-1} the overlap is det(M) / sqrt(N!) with
/// M[p][q] = <q|phi_p>. Works for any qudit dimension N >= 2.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mdiqkd/errors.hpp"
#include "mdiqkd/qstate.hpp"

namespace mdiqkd::optics {

/// Brute-force permutation sums are capped here.
inline constexpr unsigned kMaxBruteForceN = 6;
/// Explicit |Psi> construction for measurement is capped here.
inline constexpr unsigned kMaxExplicitPsiN = 4;

/// N single-qudit states of dimension N, one per input path.
class ProductInput {
 public:
  explicit ProductInput(std::vector<StateVector> states) : states_(std::move(states)) {
    if (states_.size() < 2) throw std::invalid_argument("antisymmetric projection needs at least two inputs");
    for (const auto& s : states_) {
      if (s.num_qudits() != 1 || s.dim() != states_.size()) {
        throw std::invalid_argument("each input must be one qudit of dimension equal to the number of inputs");
      }
    }
  }

  [[nodiscard]] unsigned size() const { return static_cast<unsigned>(states_.size()); }
  [[nodiscard]] const std::vector<StateVector>& states() const { return states_; }

  /// M[p][q] = <q|phi_p>, row-major.
  [[nodiscard]] std::vector<Amplitude> overlap_matrix() const {
    const unsigned n = size();
    std::vector<Amplitude> m(static_cast<std::size_t>(n) * n);
    for (unsigned p = 0; p < n; ++p) {
      for (const auto& [key, amp] : states_[p].entries()) m[p * n + key] = amp;
    }
    return m;
  }

 private:
  std::vector<StateVector> states_;
};

inline double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline Amplitude determinant(std::vector<Amplitude> m, unsigned n) {
  Amplitude det = 1.0;
  for (unsigned col = 0; col < n; ++col) {
    unsigned pivot = col;
    for (unsigned r = col + 1; r < n; ++r) {
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    }
    if (m[pivot * n + col] == Amplitude{}) return 0.0;
    if (pivot != col) {
      for (unsigned c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
      det = -det;
    }
    const Amplitude diag = m[col * n + col];
    det *= diag;
    for (unsigned r = col + 1; r < n; ++r) {
      const Amplitude f = m[r * n + col] / diag;
      if (f == Amplitude{}) continue;
      for (unsigned c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  return det;
}

/// Sign of a permutation given in one-line notation.
inline int permutation_sign(const std::vector<unsigned>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

/// <Psi|phi_0 ... phi_{N-1}> via the determinant, O(N^3).
inline Amplitude antisym_overlap_det(const ProductInput& input) {
  const unsigned n = input.size();
  return determinant(input.overlap_matrix(), n) / std::sqrt(factorial(n));
}

/// <Psi|phi_0 ... phi_{N-1}> as an explicit sum over all N! permutations.
inline Amplitude antisym_overlap_bruteforce(const ProductInput& input) {
  const unsigned n = input.size();
  if (n > kMaxBruteForceN) {
    throw capability_error("permutation-sum overlap is limited to N <= " + std::to_string(kMaxBruteForceN));
  }
  const auto m = input.overlap_matrix();
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  Amplitude sum{};
  do {
    Amplitude term = static_cast<double>(permutation_sign(perm));
    for (unsigned p = 0; p < n; ++p) term *= m[p * n + perm[p]];
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum / std::sqrt(factorial(n));
}

struct AntisymProjection {
  Amplitude amplitude;
  double probability;  // |amplitude|^2
  bool success;
};

/// Postselected projection onto |Psi>: succeeds with probability |<Psi|input>|^2.
inline AntisymProjection project_onto_psi(const ProductInput& input, Rng& rng) {
  const Amplitude amp = antisym_overlap_det(input);
  const double p = std::min(1.0, std::norm(amp));
  return {amp, p, rng.uniform() < p};
}

/// |Psi> as an explicit sparse state with N! entries.
inline StateVector antisymmetric_state(unsigned n) {
  if (n > 8) throw capability_error("explicit antisymmetric state is limited to N <= 8");
  StateVector psi(n, n);
  const double amp = 1.0 / std::sqrt(factorial(n));
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  do {
    BasisLabel label(perm.begin(), perm.end());
    psi.set(psi.pack(label), amp * permutation_sign(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return psi;
}

/// Direct sum of N/2 Hadamard blocks acting on (|2i>, |2i+1>).
inline LocalUnitary hadamard_blocks(unsigned n) {
  if (n % 2 != 0) throw std::invalid_argument("Hadamard block sum needs even dimension");
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<Amplitude> m(static_cast<std::size_t>(n) * n);
  for (unsigned i = 0; i < n; i += 2) {
    m[i * n + i] = h;
    m[i * n + i + 1] = h;
    m[(i + 1) * n + i] = h;
    m[(i + 1) * n + i + 1] = -h;
  }
  return {n, std::move(m)};
}

/// Haar-like random unitary: Gram-Schmidt on a complex Gaussian matrix.
inline LocalUnitary random_unitary(unsigned n, Rng& rng) {
  std::vector<std::vector<Amplitude>> cols(n, std::vector<Amplitude>(n));
  for (auto& col : cols) {
    for (auto& x : col) x = Amplitude(rng.normal(), rng.normal());
  }
  for (unsigned c = 0; c < n; ++c) {
    for (unsigned prev = 0; prev < c; ++prev) {
      Amplitude dot{};
      for (unsigned r = 0; r < n; ++r) dot += std::conj(cols[prev][r]) * cols[c][r];
      for (unsigned r = 0; r < n; ++r) cols[c][r] -= dot * cols[prev][r];
    }
    double norm = 0.0;
    for (const auto& x : cols[c]) norm += std::norm(x);
    norm = std::sqrt(norm);
    for (auto& x : cols[c]) x /= norm;
  }
  std::vector<Amplitude> m(static_cast<std::size_t>(n) * n);
  for (unsigned r = 0; r < n; ++r) {
    for (unsigned c = 0; c < n; ++c) m[r * n + c] = cols[c][r];
  }
  return {n, std::move(m)};
}

/// Measures every qudit of |Psi> in {U|i>} for `trials` shots and counts shots
/// whose outcomes are not all distinct.
inline std::size_t count_repeated_outcomes(const LocalUnitary& u, std::size_t trials, Rng& rng) {
  const unsigned n = u.dim();
  if (n > kMaxExplicitPsiN) {
    throw capability_error("distinct-outcome check builds |Psi> explicitly and is limited to N <= " +
                           std::to_string(kMaxExplicitPsiN));
  }
  std::vector<StateVector> basis;
  for (unsigned i = 0; i < n; ++i) basis.push_back(u.column(i));
  const StateVector psi = antisymmetric_state(n);
  const std::array<unsigned, 1> first = {0};
  std::size_t violations = 0;
  for (std::size_t shot = 0; shot < trials; ++shot) {
    StateVector state = psi;
    std::vector<bool> seen(n, false);
    bool repeated = false;
    for (unsigned q = 0; q < n; ++q) {
      // The measured qudit is always the first of what remains.
      auto m = measure_in_basis(state, first, basis, rng);
      if (seen[m.outcome]) repeated = true;
      seen[m.outcome] = true;
      state = std::move(m.posterior);
    }
    if (repeated) ++violations;
  }
  return violations;
}

/// True iff every shot of measuring |Psi> in {U|i>} yields N distinct outcomes.
inline bool distinct_outcomes_check(const LocalUnitary& u, std::size_t trials, Rng& rng) {
  return count_repeated_outcomes(u, trials, rng) == 0;
}

}  // namespace mdiqkd::optics
