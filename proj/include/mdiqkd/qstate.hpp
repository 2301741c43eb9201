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

/// @file qstate.hpp
/// Sparse pure states of m qudits of dimension d, the generalized Bell basis
/// over GF(2^n), local corrections and projective measurement.
///
/// A basis label (i_0, ..., i_{m-1}) is packed into one 64-bit key with qudit 0
/// in the most significant slot, so iterating the amplitude map visits labels
/// in lexicographic order.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mdiqkd/gf.hpp"
#include "mdiqkd/random.hpp"

namespace mdiqkd {

using Amplitude = std::complex<double>;
using BasisLabel = std::vector<std::uint32_t>;

/// Amplitudes below this magnitude are never stored.
inline constexpr double kPruneThreshold = 1e-12;
/// Tolerance for normalization, orthonormality and unitarity checks.
inline constexpr double kTolerance = 1e-9;

class StateVector {
 public:
  /// The zero vector on `num_qudits` qudits of dimension `dim`.
  StateVector(unsigned dim, unsigned num_qudits) : dim_(dim), num_qudits_(num_qudits) {
    if (dim < 2) throw std::invalid_argument("qudit dimension must be at least 2");
    bits_ = static_cast<unsigned>(std::bit_width(dim - 1));
    if (static_cast<unsigned long>(bits_) * num_qudits > 64) {
      throw std::invalid_argument("state too large for 64-bit label packing");
    }
  }

  /// Computational basis state |labels>.
  static StateVector basis(unsigned dim, const BasisLabel& labels) {
    StateVector s(dim, static_cast<unsigned>(labels.size()));
    s.set(s.pack(labels), 1.0);
    return s;
  }

  /// Single-qudit state from a dense amplitude vector (not renormalized).
  static StateVector from_dense(std::span<const Amplitude> amps) {
    StateVector s(static_cast<unsigned>(amps.size()), 1);
    for (std::uint32_t i = 0; i < amps.size(); ++i) s.set(i, amps[i]);
    return s;
  }

  [[nodiscard]] unsigned dim() const { return dim_; }
  [[nodiscard]] unsigned num_qudits() const { return num_qudits_; }
  [[nodiscard]] unsigned bits_per_qudit() const { return bits_; }
  [[nodiscard]] std::size_t nnz() const { return amps_.size(); }
  [[nodiscard]] const std::map<std::uint64_t, Amplitude>& entries() const { return amps_; }

  [[nodiscard]] std::uint64_t pack(const BasisLabel& labels) const {
    if (labels.size() != num_qudits_) throw std::invalid_argument("label length mismatch");
    std::uint64_t key = 0;
    for (std::uint32_t v : labels) {
      if (v >= dim_) throw std::out_of_range("qudit value out of range");
      key = (key << bits_) | v;
    }
    return key;
  }

  [[nodiscard]] BasisLabel unpack(std::uint64_t key) const {
    BasisLabel labels(num_qudits_);
    for (unsigned i = num_qudits_; i-- > 0;) {
      labels[i] = static_cast<std::uint32_t>(key & mask());
      key >>= bits_;
    }
    return labels;
  }

  [[nodiscard]] std::uint32_t qudit_value(std::uint64_t key, unsigned index) const {
    return static_cast<std::uint32_t>((key >> shift(index)) & mask());
  }

  [[nodiscard]] std::uint64_t with_qudit(std::uint64_t key, unsigned index, std::uint32_t value) const {
    const unsigned sh = shift(index);
    return (key & ~(mask() << sh)) | (static_cast<std::uint64_t>(value) << sh);
  }

  [[nodiscard]] Amplitude amplitude(std::uint64_t key) const {
    auto it = amps_.find(key);
    return it == amps_.end() ? Amplitude{} : it->second;
  }
  [[nodiscard]] Amplitude amplitude(const BasisLabel& labels) const { return amplitude(pack(labels)); }

  /// Overwrites one amplitude; values under the pruning threshold erase the entry.
  void set(std::uint64_t key, Amplitude value) {
    if (std::abs(value) < kPruneThreshold) {
      amps_.erase(key);
    } else {
      amps_[key] = value;
    }
  }

  void accumulate(std::uint64_t key, Amplitude value) { amps_[key] += value; }

  /// Drops entries that cancelled below the threshold after accumulate().
  void prune() { std::erase_if(amps_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; }); }

  [[nodiscard]] double norm_squared() const {
    double acc = 0.0;
    for (const auto& [key, amp] : amps_) acc += std::norm(amp);
    return acc;
  }

  [[nodiscard]] bool is_normalized() const { return std::abs(norm_squared() - 1.0) <= kTolerance; }

  [[nodiscard]] StateVector scaled(Amplitude factor) const {
    StateVector out(dim_, num_qudits_);
    for (const auto& [key, amp] : amps_) out.set(key, amp * factor);
    return out;
  }

  [[nodiscard]] StateVector normalized() const {
    const double n2 = norm_squared();
    if (n2 <= 0.0) throw std::domain_error("cannot normalize the zero vector");
    return scaled(1.0 / std::sqrt(n2));
  }

  /// Same shape (dimension and qudit count).
  [[nodiscard]] bool same_shape(const StateVector& other) const {
    return dim_ == other.dim_ && num_qudits_ == other.num_qudits_;
  }

  /// Exact equality of the stored amplitude maps.
  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  [[nodiscard]] std::uint64_t mask() const { return (std::uint64_t{1} << bits_) - 1; }
  [[nodiscard]] unsigned shift(unsigned index) const {
    if (index >= num_qudits_) throw std::out_of_range("qudit index out of range");
    return bits_ * (num_qudits_ - 1 - index);
  }

  unsigned dim_;
  unsigned num_qudits_;
  unsigned bits_ = 1;
  std::map<std::uint64_t, Amplitude> amps_;
};

/// Charlie's Bell outcome: the pair (a, b) indexing |Phi_ab>.
struct BellLabel {
  gf::FieldElement a;
  gf::FieldElement b;

  BellLabel(gf::FieldElement a_, gf::FieldElement b_) : a(a_), b(b_) {
    if (!(a.spec() == b.spec())) throw std::invalid_argument("Bell label components from different fields");
  }
  BellLabel(const gf::FieldSpec& spec, std::uint32_t a_bits, std::uint32_t b_bits)
      : a(spec, a_bits), b(spec, b_bits) {}

  /// Position in bell_basis() ordering.
  [[nodiscard]] std::uint32_t index() const { return a.bits() * a.spec().size() + b.bits(); }

  friend bool operator==(const BellLabel&, const BellLabel&) = default;
};

/// A d x d unitary, stored row-major.
class LocalUnitary {
 public:
  LocalUnitary(unsigned dim, std::vector<Amplitude> row_major) : dim_(dim), m_(std::move(row_major)) {
    if (m_.size() != static_cast<std::size_t>(dim) * dim) throw std::invalid_argument("matrix size mismatch");
    for (unsigned r = 0; r < dim; ++r) {
      for (unsigned c = 0; c < dim; ++c) {
        Amplitude dot{};
        for (unsigned k = 0; k < dim; ++k) dot += (*this)(r, k) * std::conj((*this)(c, k));
        if (std::abs(dot - Amplitude(r == c ? 1.0 : 0.0)) > kTolerance) {
          throw std::invalid_argument("matrix is not unitary");
        }
      }
    }
  }

  static LocalUnitary identity(unsigned dim) {
    std::vector<Amplitude> m(static_cast<std::size_t>(dim) * dim);
    for (unsigned i = 0; i < dim; ++i) m[i * dim + i] = 1.0;
    return {dim, std::move(m)};
  }

  [[nodiscard]] unsigned dim() const { return dim_; }
  [[nodiscard]] Amplitude operator()(unsigned row, unsigned col) const { return m_[row * dim_ + col]; }

  /// U|i> as a single-qudit state (column i).
  [[nodiscard]] StateVector column(unsigned i) const {
    std::vector<Amplitude> col(dim_);
    for (unsigned r = 0; r < dim_; ++r) col[r] = (*this)(r, i);
    return StateVector::from_dense(col);
  }

 private:
  unsigned dim_;
  std::vector<Amplitude> m_;
};

// ---------------------------------------------------------------------------
// Construction

/// |Phi_ab> = sum_i (-1)^Tr(b i) |i, i+a> / sqrt(N).
inline StateVector make_phi(const BellLabel& ab) {
  const gf::FieldSpec& spec = ab.a.spec();
  const std::uint32_t n = spec.size();
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  StateVector s(n, 2);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double sign = (spec.trace_bits(spec.mul_bits(ab.b.bits(), i)) & 1U) ? -1.0 : 1.0;
    s.set(s.pack({i, i ^ ab.a.bits()}), sign * amp);
  }
  return s;
}

/// The N^2 states |Phi_ab>, ordered by (a, b) with a major.
inline std::vector<std::pair<BellLabel, StateVector>> bell_basis(const gf::FieldSpec& spec) {
  std::vector<std::pair<BellLabel, StateVector>> out;
  out.reserve(static_cast<std::size_t>(spec.size()) * spec.size());
  for (std::uint32_t a = 0; a < spec.size(); ++a) {
    for (std::uint32_t b = 0; b < spec.size(); ++b) {
      BellLabel ab(spec, a, b);
      out.emplace_back(ab, make_phi(ab));
    }
  }
  return out;
}

/// Single-qudit computational basis {|0>, ..., |d-1>}.
inline std::vector<StateVector> computational_basis(unsigned dim) {
  std::vector<StateVector> out;
  out.reserve(dim);
  for (std::uint32_t i = 0; i < dim; ++i) out.push_back(StateVector::basis(dim, {i}));
  return out;
}

inline StateVector tensor(const StateVector& s1, const StateVector& s2) {
  if (s1.dim() != s2.dim()) throw std::invalid_argument("tensor of states with different qudit dimensions");
  StateVector out(s1.dim(), s1.num_qudits() + s2.num_qudits());
  const unsigned sh = s2.bits_per_qudit() * s2.num_qudits();
  for (const auto& [k1, a1] : s1.entries()) {
    for (const auto& [k2, a2] : s2.entries()) out.set((k1 << sh) | k2, a1 * a2);
  }
  return out;
}

inline StateVector tensor_all(std::span<const StateVector> parts) {
  if (parts.empty()) throw std::invalid_argument("empty tensor product");
  StateVector acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = tensor(acc, parts[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// Local operations

/// Applies a monomial map |i> -> sign(i) |target(i)> to one qudit.
template <typename Map>
StateVector apply_monomial(const StateVector& s, unsigned qudit, Map&& map) {
  if (qudit >= s.num_qudits()) throw std::out_of_range("qudit index out of range");
  StateVector out(s.dim(), s.num_qudits());
  for (const auto& [key, amp] : s.entries()) {
    const auto [target, sign] = map(s.qudit_value(key, qudit));
    out.set(s.with_qudit(key, qudit, target), amp * sign);
  }
  return out;
}

/// Bob's correction |i> -> (-1)^Tr[(a-i) b] |i-a>. Subtraction is XOR in GF(2^n).
inline StateVector apply_correction(const StateVector& s, unsigned qudit, const BellLabel& ab) {
  const gf::FieldSpec& spec = ab.a.spec();
  if (s.dim() != spec.size()) throw std::invalid_argument("state dimension does not match the field");
  const std::uint32_t a = ab.a.bits();
  const std::uint32_t b = ab.b.bits();
  return apply_monomial(s, qudit, [&](std::uint32_t i) {
    const double sign = (spec.trace_bits(spec.mul_bits(a ^ i, b)) & 1U) ? -1.0 : 1.0;
    return std::pair{i ^ a, sign};
  });
}

/// Alice's correction |i> -> (-1)^{-Tr(i b)} |i+a>; the exponent is taken mod 2.
inline StateVector apply_alice_correction(const StateVector& s, unsigned qudit, const BellLabel& ab) {
  const gf::FieldSpec& spec = ab.a.spec();
  if (s.dim() != spec.size()) throw std::invalid_argument("state dimension does not match the field");
  const std::uint32_t a = ab.a.bits();
  const std::uint32_t b = ab.b.bits();
  return apply_monomial(s, qudit, [&](std::uint32_t i) {
    const double sign = (spec.trace_bits(spec.mul_bits(i, b)) & 1U) ? -1.0 : 1.0;
    return std::pair{i ^ a, sign};
  });
}

/// Applies a general local unitary to one qudit.
inline StateVector apply_local(const StateVector& s, unsigned qudit, const LocalUnitary& u) {
  if (u.dim() != s.dim()) throw std::invalid_argument("unitary dimension mismatch");
  if (qudit >= s.num_qudits()) throw std::out_of_range("qudit index out of range");
  StateVector out(s.dim(), s.num_qudits());
  for (const auto& [key, amp] : s.entries()) {
    const std::uint32_t col = s.qudit_value(key, qudit);
    for (std::uint32_t row = 0; row < s.dim(); ++row) {
      const Amplitude m = u(row, col);
      if (m != Amplitude{}) out.accumulate(s.with_qudit(key, qudit, row), m * amp);
    }
  }
  out.prune();
  return out;
}

// ---------------------------------------------------------------------------
// Overlaps and measurement

/// <s1|s2>, antilinear in s1.
inline Amplitude inner_product(const StateVector& s1, const StateVector& s2) {
  if (!s1.same_shape(s2)) throw std::invalid_argument("inner product of states with different shapes");
  const auto& small = s1.nnz() <= s2.nnz() ? s1 : s2;
  const auto& large = s1.nnz() <= s2.nnz() ? s2 : s1;
  Amplitude acc{};
  for (const auto& [key, amp] : small.entries()) {
    const Amplitude other = large.amplitude(key);
    acc += (&small == &s1) ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return acc;
}

/// |<s1|s2>|^2.
inline double fidelity(const StateVector& s1, const StateVector& s2) { return std::norm(inner_product(s1, s2)); }

/// Throws unless `basis` is an orthonormal basis of the given single-block shape.
inline void validate_orthonormal_basis(std::span<const StateVector> basis, unsigned dim, unsigned num_qudits) {
  std::size_t expected = 1;
  for (unsigned i = 0; i < num_qudits; ++i) expected *= dim;
  if (basis.size() != expected) {
    throw std::invalid_argument("measurement basis has " + std::to_string(basis.size()) + " vectors, expected " +
                                std::to_string(expected));
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].dim() != dim || basis[i].num_qudits() != num_qudits) {
      throw std::invalid_argument("measurement basis vector has the wrong shape");
    }
    for (std::size_t j = i; j < basis.size(); ++j) {
      const Amplitude g = inner_product(basis[i], basis[j]);
      if (std::abs(g - Amplitude(i == j ? 1.0 : 0.0)) > kTolerance) {
        throw std::invalid_argument("measurement basis is not orthonormal");
      }
    }
  }
}

/// One branch of a projective measurement.
struct Branch {
  /// Normalized state of the unmeasured qudits; zero qudits leave a phase-only scalar.
  StateVector posterior;
  double probability;
};

namespace detail {

/// Splits each stored label into (measured sub-label, remaining label).
class Partition {
 public:
  Partition(const StateVector& s, std::span<const unsigned> measured) : s_(s), measured_(measured.begin(), measured.end()) {
    std::vector<bool> used(s.num_qudits(), false);
    for (unsigned q : measured_) {
      if (q >= s.num_qudits()) throw std::out_of_range("qudit index out of range");
      if (used[q]) throw std::invalid_argument("qudit index repeated in measurement");
      used[q] = true;
    }
    for (unsigned q = 0; q < s.num_qudits(); ++q) {
      if (!used[q]) rest_.push_back(q);
    }
    const unsigned b = s.bits_per_qudit();
    for (const auto& [key, amp] : s.entries()) {
      std::uint64_t sub = 0;
      for (unsigned q : measured_) sub = (sub << b) | s.qudit_value(key, q);
      std::uint64_t rest = 0;
      for (unsigned q : rest_) rest = (rest << b) | s.qudit_value(key, q);
      groups_[sub].emplace_back(rest, amp);
    }
  }

  [[nodiscard]] unsigned measured_count() const { return static_cast<unsigned>(measured_.size()); }

  /// Unnormalized (<beta| (x) I) |s> on the remaining qudits.
  [[nodiscard]] StateVector project(const StateVector& beta) const {
    StateVector out(s_.dim(), static_cast<unsigned>(rest_.size()));
    for (const auto& [sub, bamp] : beta.entries()) {
      auto it = groups_.find(sub);
      if (it == groups_.end()) continue;
      const Amplitude c = std::conj(bamp);
      for (const auto& [rest, amp] : it->second) out.accumulate(rest, c * amp);
    }
    out.prune();
    return out;
  }

 private:
  const StateVector& s_;
  std::vector<unsigned> measured_;
  std::vector<unsigned> rest_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, Amplitude>>> groups_;
};

inline Branch make_branch(StateVector unnormalized) {
  const double p = unnormalized.norm_squared();
  if (p <= 0.0) return {std::move(unnormalized), 0.0};
  return {unnormalized.normalized(), p};
}

}  // namespace detail

/// Projects the listed qudits onto `beta`. The branch probability is exact; the
/// posterior is normalized unless the probability is zero.
inline Branch project(const StateVector& s, std::span<const unsigned> qudits, const StateVector& beta) {
  detail::Partition part(s, qudits);
  if (beta.dim() != s.dim() || beta.num_qudits() != part.measured_count()) {
    throw std::invalid_argument("projector shape does not match measured qudits");
  }
  return detail::make_branch(part.project(beta));
}

/// All branches of a measurement, in basis order, without sampling.
inline std::vector<Branch> measurement_branches(const StateVector& s, std::span<const unsigned> qudits,
                                                std::span<const StateVector> basis) {
  detail::Partition part(s, qudits);
  validate_orthonormal_basis(basis, s.dim(), part.measured_count());
  std::vector<Branch> out;
  out.reserve(basis.size());
  for (const auto& beta : basis) out.push_back(detail::make_branch(part.project(beta)));
  return out;
}

struct MeasurementResult {
  std::size_t outcome;
  StateVector posterior;
  double probability;
};

/// Samples a projective measurement by the Born rule.
inline MeasurementResult measure_in_basis(const StateVector& s, std::span<const unsigned> qudits,
                                          std::span<const StateVector> basis, Rng& rng) {
  auto branches = measurement_branches(s, qudits, basis);
  double total = 0.0;
  for (const auto& b : branches) total += b.probability;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t pick = branches.size();
  for (std::size_t i = 0; i < branches.size(); ++i) {
    if (branches[i].probability <= 0.0) continue;
    acc += branches[i].probability;
    pick = i;
    if (u < acc) break;
  }
  if (pick == branches.size()) throw std::domain_error("measurement of the zero vector");
  return {pick, std::move(branches[pick].posterior), branches[pick].probability};
}

// ---------------------------------------------------------------------------
// Debug output

/// One line per stored label: "<hex label> <re> <im>", sorted by label.
inline std::string dump(const StateVector& s) {
  std::string out;
  char line[96];
  const int width = static_cast<int>((s.bits_per_qudit() * s.num_qudits() + 3) / 4);
  for (const auto& [key, amp] : s.entries()) {
    std::snprintf(line, sizeof line, "%0*llx %.17g %.17g\n", width > 0 ? width : 1,
                  static_cast<unsigned long long>(key), amp.real(), amp.imag());
    out += line;
  }
  return out;
}

}  // namespace mdiqkd
