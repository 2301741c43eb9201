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


#include <gtest/gtest.h>

#include "mdiqkd/gf.hpp"
#include "mdiqkd/random.hpp"
#include "oracles.hpp"

namespace {

using namespace mdiqkd::gf;

TEST(GfTest, SmallFieldExamples) {
  const FieldSpec f4(2);
  const FieldElement w(f4, 0b10);
  EXPECT_EQ(mul(w, w).bits(), 0b11U);
  EXPECT_EQ(inv(w).bits(), 0b11U);
  EXPECT_EQ(trace(w), 1U);
  EXPECT_EQ(trace(FieldElement(f4, 1)), 0U);

  const FieldSpec f8(3);
  EXPECT_EQ(inv(FieldElement(f8, 0b010)).bits(), 0b101U);
}

TEST(GfTest, AgreesWithCoefficientOracle) {
  for (unsigned n = 1; n <= 6; ++n) {
    const FieldSpec f(n);
    for (std::uint32_t x = 0; x < f.size(); ++x) {
      EXPECT_EQ(f.trace_bits(x), oracle::gf_trace(x, f.modulus(), static_cast<int>(n))) << "n=" << n << " x=" << x;
      if (x != 0) {
        EXPECT_EQ(inv(FieldElement(f, x)).bits(), oracle::gf_inv(x, f.modulus(), static_cast<int>(n)));
      }
      for (std::uint32_t y = 0; y < f.size(); ++y) {
        ASSERT_EQ(f.mul_bits(x, y), oracle::gf_mul(x, y, f.modulus(), static_cast<int>(n)));
      }
    }
  }
}

TEST(GfTest, AxiomsExhaustiveUpToSixteen) {
  for (unsigned n = 1; n <= 4; ++n) {
    const FieldSpec f(n);
    for (std::uint32_t x = 0; x < f.size(); ++x) {
      for (std::uint32_t y = 0; y < f.size(); ++y) {
        ASSERT_EQ(f.mul_bits(x, y), f.mul_bits(y, x));
        for (std::uint32_t z = 0; z < f.size(); ++z) {
          ASSERT_EQ(f.mul_bits(f.mul_bits(x, y), z), f.mul_bits(x, f.mul_bits(y, z)));
          ASSERT_EQ(f.mul_bits(x, y ^ z), f.mul_bits(x, y) ^ f.mul_bits(x, z));
        }
      }
      if (x) {
        ASSERT_EQ(f.mul_bits(x, inv(FieldElement(f, x)).bits()), 1U);
      }
    }
  }
}

TEST(GfTest, AxiomsRandomizedLargeFields) {
  mdiqkd::Rng rng(11);
  for (unsigned n = 5; n <= 8; ++n) {
    const FieldSpec f(n);
    for (int i = 0; i < 5000; ++i) {
      const auto x = static_cast<std::uint32_t>(rng.below(f.size()));
      const auto y = static_cast<std::uint32_t>(rng.below(f.size()));
      const auto z = static_cast<std::uint32_t>(rng.below(f.size()));
      ASSERT_EQ(f.mul_bits(f.mul_bits(x, y), z), f.mul_bits(x, f.mul_bits(y, z)));
      ASSERT_EQ(f.mul_bits(x, y ^ z), f.mul_bits(x, y) ^ f.mul_bits(x, z));
      if (x) {
        ASSERT_EQ(f.mul_bits(x, inv(FieldElement(f, x)).bits()), 1U);
      }
    }
  }
}

TEST(GfTest, TraceIsLinearBalancedAndFrobeniusInvariant) {
  for (unsigned n = 1; n <= 8; ++n) {
    const FieldSpec f(n);
    std::uint32_t ones = 0;
    for (std::uint32_t x = 0; x < f.size(); ++x) {
      const auto t = f.trace_bits(x);
      ASSERT_LE(t, 1U);
      ones += t;
      ASSERT_EQ(f.trace_bits(f.mul_bits(x, x)), t);
      for (std::uint32_t y = 0; y < f.size(); y += 7) ASSERT_EQ(f.trace_bits(x ^ y), t ^ f.trace_bits(y));
    }
    EXPECT_EQ(ones, f.size() / 2) << "n=" << n;
  }
}

TEST(GfTest, RejectsBadInput) {
  EXPECT_THROW(FieldSpec(0), std::invalid_argument);
  EXPECT_THROW(FieldSpec(9), std::invalid_argument);
  EXPECT_THROW(FieldSpec(4, 0b10001), std::invalid_argument);  // (x + 1)^4
  EXPECT_THROW(FieldElement(FieldSpec(2), 4), std::out_of_range);
  EXPECT_THROW(inv(FieldElement(FieldSpec(3), 0)), std::domain_error);
  EXPECT_THROW(add(FieldElement(FieldSpec(2), 1), FieldElement(FieldSpec(3), 1)), std::invalid_argument);
  EXPECT_THROW(mul(FieldElement(FieldSpec(2), 1), FieldElement(FieldSpec(3), 1)), std::invalid_argument);
}

TEST(GfTest, AlternateModulusAndParsing) {
  EXPECT_EQ(parse_modulus("0b11001"), 0b11001U);
  EXPECT_EQ(parse_modulus("0x11b"), 0x11bU);
  EXPECT_EQ(parse_modulus("19"), 19U);
  EXPECT_THROW(parse_modulus("banana"), std::invalid_argument);
  const FieldSpec f(4, 0b11001);  // x^4 + x^3 + 1
  for (std::uint32_t x = 1; x < 16; ++x) EXPECT_EQ(f.mul_bits(x, inv(FieldElement(f, x)).bits()), 1U);
  EXPECT_EQ(enumerate(f).size(), 16U);
}

}  // namespace
