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

/// @file gf.hpp
/// Arithmetic in the binary extension fields GF(2^n), 1 <= n <= 8.
///
/// Elements are stored as the coefficient vector of a polynomial over GF(2),
/// bit i holding the coefficient of x^i. Multiplication reduces modulo a fixed
/// irreducible polynomial chosen per degree (see default_modulus()).

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdiqkd::gf {

inline constexpr unsigned kMaxDegree = 8;

namespace detail {

// Carry-less product of two polynomials of degree < 16.
constexpr std::uint32_t clmul(std::uint32_t x, std::uint32_t y) {
  std::uint32_t acc = 0;
  for (; y != 0; y >>= 1, x <<= 1) {
    if (y & 1U) acc ^= x;
  }
  return acc;
}

constexpr unsigned degree(std::uint32_t poly) {
  return poly == 0 ? 0 : static_cast<unsigned>(std::bit_width(poly)) - 1;
}

// Remainder of `poly` modulo `mod` (mod != 0).
constexpr std::uint32_t poly_mod(std::uint32_t poly, std::uint32_t mod) {
  const unsigned d = degree(mod);
  while (poly != 0 && degree(poly) >= d) {
    poly ^= mod << (degree(poly) - d);
  }
  return poly;
}

}  // namespace detail

/// Conventional low-weight irreducible modulus for GF(2^n).
/// n = 1 uses x + 1, under which GF(2) arithmetic is the plain bit arithmetic.
constexpr std::uint32_t default_modulus(unsigned n) {
  constexpr std::array<std::uint32_t, kMaxDegree + 1> table = {
      0,
      0b11,         // x + 1
      0b111,        // x^2 + x + 1
      0b1011,       // x^3 + x + 1
      0b10011,      // x^4 + x + 1
      0b100101,     // x^5 + x^2 + 1
      0b1000011,    // x^6 + x + 1
      0b10000011,   // x^7 + x + 1
      0b100011011,  // x^8 + x^4 + x^3 + x + 1
  };
  return n <= kMaxDegree ? table[n] : 0;
}

/// True iff `modulus` has degree exactly n and no factor of degree 1..n/2.
constexpr bool is_irreducible(std::uint32_t modulus, unsigned n) {
  if (n == 0 || detail::degree(modulus) != n) return false;
  for (std::uint32_t f = 2; detail::degree(f) <= n / 2; ++f) {
    if (detail::poly_mod(modulus, f) == 0) return false;
  }
  return true;
}

/// The degree and modulus of a field GF(2^n).
class FieldSpec {
 public:
  /// Field with the default modulus for degree n.
  explicit FieldSpec(unsigned n) : FieldSpec(n, default_modulus(n)) {}

  FieldSpec(unsigned n, std::uint32_t modulus) : n_(n), modulus_(modulus) {
    if (n < 1 || n > kMaxDegree) {
      throw std::invalid_argument("field degree must be in [1, 8], got " + std::to_string(n));
    }
    if (!is_irreducible(modulus, n)) {
      throw std::invalid_argument("modulus " + std::to_string(modulus) +
                                  " is not an irreducible polynomial of degree " + std::to_string(n));
    }
  }

  /// Skips the irreducibility check. Only for fault-injection tests; arithmetic
  /// over a reducible modulus is a ring, not a field.
  static FieldSpec unchecked(unsigned n, std::uint32_t modulus) {
    FieldSpec spec;
    spec.n_ = n;
    spec.modulus_ = modulus;
    return spec;
  }

  [[nodiscard]] unsigned degree() const { return n_; }
  [[nodiscard]] std::uint32_t modulus() const { return modulus_; }
  [[nodiscard]] std::uint32_t size() const { return 1U << n_; }

  /// Raw multiplication on bit patterns below size().
  [[nodiscard]] std::uint32_t mul_bits(std::uint32_t x, std::uint32_t y) const {
    return detail::poly_mod(detail::clmul(x, y), modulus_);
  }

  /// Absolute trace x + x^2 + x^4 + ... + x^(N/2) of a raw bit pattern.
  [[nodiscard]] std::uint32_t trace_bits(std::uint32_t x) const {
    std::uint32_t sum = 0;
    std::uint32_t term = x;
    for (unsigned i = 0; i < n_; ++i) {
      sum ^= term;
      term = mul_bits(term, term);
    }
    // Lands in the prime subfield {0, 1} whenever the modulus is irreducible.
    return sum;
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldSpec() = default;
  unsigned n_ = 1;
  std::uint32_t modulus_ = 0b11;
};

/// An element of GF(2^n). Value type; carries its field.
class FieldElement {
 public:
  FieldElement(const FieldSpec& spec, std::uint32_t bits) : spec_(spec), bits_(bits) {
    if (bits >= spec.size()) {
      throw std::out_of_range("element " + std::to_string(bits) + " outside GF(" +
                              std::to_string(spec.size()) + ")");
    }
  }

  [[nodiscard]] std::uint32_t bits() const { return bits_; }
  [[nodiscard]] const FieldSpec& spec() const { return spec_; }
  [[nodiscard]] bool is_zero() const { return bits_ == 0; }

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

 private:
  FieldSpec spec_;
  std::uint32_t bits_;
};

namespace detail {
inline void require_same_field(const FieldElement& x, const FieldElement& y) {
  if (!(x.spec() == y.spec())) {
    throw std::invalid_argument("field elements belong to different fields");
  }
}
}  // namespace detail

/// Field addition (XOR). Subtraction is the same operation.
inline FieldElement add(const FieldElement& x, const FieldElement& y) {
  detail::require_same_field(x, y);
  return {x.spec(), x.bits() ^ y.bits()};
}

inline FieldElement mul(const FieldElement& x, const FieldElement& y) {
  detail::require_same_field(x, y);
  return {x.spec(), x.spec().mul_bits(x.bits(), y.bits())};
}

/// Multiplicative inverse, via x^(N-2).
inline FieldElement inv(const FieldElement& x) {
  if (x.is_zero()) throw std::domain_error("zero has no multiplicative inverse");
  const FieldSpec& spec = x.spec();
  std::uint32_t result = 1;
  std::uint32_t base = x.bits();
  for (std::uint32_t e = spec.size() - 2; e != 0; e >>= 1) {
    if (e & 1U) result = spec.mul_bits(result, base);
    base = spec.mul_bits(base, base);
  }
  return {spec, result};
}

/// Absolute trace onto GF(2). Returns 0 or 1 for every valid field.
inline std::uint32_t trace(const FieldElement& x) { return x.spec().trace_bits(x.bits()); }

/// All elements in increasing bit-value order.
inline std::vector<FieldElement> enumerate(const FieldSpec& spec) {
  std::vector<FieldElement> out;
  out.reserve(spec.size());
  for (std::uint32_t v = 0; v < spec.size(); ++v) out.emplace_back(spec, v);
  return out;
}

/// Parses a binary-coefficient modulus such as "0b10011", "0x13" or "19".
inline std::uint32_t parse_modulus(const std::string& text) {
  std::size_t pos = 0;
  unsigned long value = 0;
  try {
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'b' || text[1] == 'B')) {
      value = std::stoul(text.substr(2), &pos, 2);
      pos += 2;
    } else {
      value = std::stoul(text, &pos, 0);
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse modulus '" + text + "'");
  }
  if (pos != text.size() || value > 0x1FF) {
    throw std::invalid_argument("cannot parse modulus '" + text + "'");
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace mdiqkd::gf
