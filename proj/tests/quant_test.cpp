// Copyright 2026 The mqnt Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "mqnt/errors.hpp"
#include "mqnt/quant/grid.hpp"
#include "mqnt/quant/packing.hpp"
#include "mqnt/quant/quantized_tensor.hpp"
#include "mqnt/quant/rtn.hpp"
#include "test_util.hpp"

namespace mqnt {
namespace {

using testing::random_matrix;

QuantConfig config(int bits, std::size_t group, Scheme scheme = Scheme::asymmetric) {
  QuantConfig c;
  c.w_bits = bits;
  c.group_size = group;
  c.scheme = scheme;
  return c;
}

TEST(FitGroup, HandExamples) {
  const std::vector<double> ramp{0, 1, 2, 3};
  const GroupParams p = fit_group(ramp, 2, Scheme::asymmetric);
  EXPECT_DOUBLE_EQ(p.scale, 1.0);
  EXPECT_EQ(p.zero_point, 0);

  const std::vector<double> sym{-3, 3};
  const GroupParams s = fit_group(sym, 4, Scheme::symmetric);
  EXPECT_DOUBLE_EQ(s.scale, 3.0 / 7.0);
  EXPECT_EQ(s.zero_point, 0);
}

TEST(FitGroup, AllZerosUsesScaleFloor) {
  const std::vector<double> z(5, 0.0);
  for (Scheme scheme : {Scheme::asymmetric, Scheme::symmetric}) {
    const GroupParams p = fit_group(z, 4, scheme);
    EXPECT_EQ(p.scale, kScaleFloor);
    EXPECT_EQ(p.zero_point, 0);
    EXPECT_EQ(dequantize_value(quantize_value(0.0, p, 4, scheme), p, 4, scheme), 0.0);
  }
}

TEST(FitGroup, ParamsInRange) {
  SplitMix64 rng(1);
  for (int bits : {2, 3, 4, 8}) {
    for (int t = 0; t < 200; ++t) {
      std::vector<double> v(1 + rng.uniform_below(40));
      const double shift = 3 * rng.normal();
      for (double& x : v) x = rng.normal() + shift;
      const GroupParams a = fit_group(v, bits, Scheme::asymmetric);
      EXPECT_GT(a.scale, 0);
      EXPECT_TRUE(std::isfinite(a.scale));
      EXPECT_GE(a.zero_point, 0);
      EXPECT_LE(a.zero_point, static_cast<std::int32_t>(max_code(bits)));
      EXPECT_EQ(fit_group(v, bits, Scheme::symmetric).zero_point, 0);
    }
  }
}

TEST(QuantizeValue, HandExamples) {
  const GroupParams unit{1.0, 0};
  EXPECT_EQ(quantize_value(0.0, unit, 2), 0u);
  EXPECT_EQ(quantize_value(2.4, unit, 2), 2u);
  EXPECT_EQ(quantize_value(100.0, unit, 2), 3u);
  EXPECT_EQ(quantize_value(-100.0, unit, 2), 0u);
  // Ties round away from zero.
  EXPECT_EQ(quantize_value(1.5, unit, 2), 2u);
  EXPECT_EQ(quantize_value(0.5, unit, 2), 1u);
}

TEST(QuantizeValue, MonotoneInInput) {
  SplitMix64 rng(2);
  for (int bits : {2, 3, 4, 8}) {
    for (Scheme scheme : {Scheme::asymmetric, Scheme::symmetric}) {
      const GroupParams p{0.1 + rng.uniform01(), scheme == Scheme::symmetric ? 0 : static_cast<std::int32_t>(rng.uniform_below(max_code(bits) + 1))};
      std::vector<double> xs(500);
      for (double& x : xs) x = 5 * rng.normal();
      std::sort(xs.begin(), xs.end());
      for (std::size_t i = 1; i < xs.size(); ++i) {
        EXPECT_LE(quantize_value(xs[i - 1], p, bits, scheme), quantize_value(xs[i], p, bits, scheme));
      }
    }
  }
}

TEST(QuantizeValue, HalfStepBound) {
  SplitMix64 rng(3);
  for (int bits : {2, 3, 4, 8}) {
    for (Scheme scheme : {Scheme::asymmetric, Scheme::symmetric}) {
      for (int t = 0; t < 100; ++t) {
        std::vector<double> v(16);
        for (double& x : v) x = rng.normal();
        const GroupParams p = fit_group(v, bits, scheme);
        const double lo = grid_min(p, bits, scheme), hi = grid_max(p, bits, scheme);
        for (double x : v) {
          const double dq = dequantize_value(quantize_value(x, p, bits, scheme), p, bits, scheme);
          EXPECT_LE(std::abs(dq - std::clamp(x, lo, hi)), p.scale / 2 * (1 + 1e-12));
          if (x >= lo && x <= hi) {
            EXPECT_LE(std::abs(dq - x), p.scale / 2 * (1 + 1e-12));
          }
        }
      }
    }
  }
}

TEST(QuantizeValue, NearestCodeByBruteForce) {
  SplitMix64 rng(4);
  for (int bits : {2, 3, 4}) {
    std::vector<double> v(32);
    for (double& x : v) x = rng.normal();
    const GroupParams p = fit_group(v, bits, Scheme::asymmetric);
    for (double x : v) {
      const double err = std::abs(dequantize_value(quantize_value(x, p, bits), p, bits) - x);
      for (std::uint32_t c = 0; c <= max_code(bits); ++c) {
        EXPECT_LE(err, std::abs(dequantize_value(c, p, bits) - x) + 1e-12);
      }
    }
  }
}

TEST(Packing, RoundTripAllLengths) {
  SplitMix64 rng(5);
  for (int bits : {2, 3, 4, 8}) {
    for (std::size_t n = 1; n <= 257; ++n) {
      std::vector<std::uint32_t> codes(n);
      for (auto& c : codes) c = static_cast<std::uint32_t>(rng.uniform_below(max_code(bits) + 1));
      const auto bytes = pack_codes(codes, bits);
      ASSERT_EQ(bytes.size(), packed_group_bytes(n, bits));
      EXPECT_EQ(unpack_codes(bytes, bits, n), codes) << "bits=" << bits << " n=" << n;
    }
  }
}

TEST(Packing, ThreeBitLayout) {
  // Eight 3-bit codes fill exactly three bytes, little-endian bit order.
  const std::vector<std::uint32_t> codes{1, 2, 3, 4, 5, 6, 7, 0};
  const auto bytes = pack_codes(codes, 3);
  ASSERT_EQ(bytes.size(), 3u);
  std::uint32_t word = bytes[0] | (bytes[1] << 8) | (bytes[2] << 16);
  for (std::size_t i = 0; i < codes.size(); ++i) EXPECT_EQ((word >> (3 * i)) & 7u, codes[i]);
  EXPECT_EQ(padded_code_count(9), 16u);
  EXPECT_EQ(packed_group_bytes(9, 3), 6u);
  EXPECT_EQ(packed_group_bytes(128, 4), 64u);
}

TEST(Rtn, RampRowRecoversExactly) {
  const Matrix w = Matrix::from_rows({{0, 1, 2, 3}});
  const QuantizedTensor q = rtn_quantize(w, config(2, 4));
  EXPECT_EQ(q.unpack(), (std::vector<std::uint32_t>{0, 1, 2, 3}));
  EXPECT_EQ(dequantize(q), w);
}

TEST(Rtn, ConstantMatrixRecoversExactly) {
  Matrix w(3, 10);
  for (double& v : w.values()) v = 0.75;
  EXPECT_EQ(dequantize(rtn_quantize(w, config(3, 4))), w);
}

TEST(Rtn, PassthroughAtSixteenBits) {
  SplitMix64 rng(6);
  const Matrix w = random_matrix(5, 9, rng);
  const QuantizedTensor q = rtn_quantize(w, config(16, 4));
  EXPECT_TRUE(q.is_passthrough());
  EXPECT_EQ(dequantize(q), w);
}

TEST(Rtn, PerGroupHalfStepAgainstElementwiseRecomputation) {
  SplitMix64 rng(7);
  const Matrix w = random_matrix(4, 4, rng);
  const QuantizedTensor q = rtn_quantize(w, config(4, 4));
  const Matrix d = dequantize(q);
  for (std::size_t r = 0; r < 4; ++r) {
    const auto row = w.row(r);
    double lo = 0, hi = 0;
    for (double v : row) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double scale = (hi - lo) / 15.0;
    const double zp = std::clamp(std::round(-lo / scale), 0.0, 15.0);
    for (std::size_t c = 0; c < 4; ++c) {
      const double code = std::clamp(std::round(row[c] / scale) + zp, 0.0, 15.0);
      EXPECT_DOUBLE_EQ(d(r, c), (code - zp) * scale);
      EXPECT_LE(std::abs(d(r, c) - row[c]), scale / 2 + 1e-12);
    }
  }
}

TEST(Rtn, ShortLastGroupAndParamsLayout) {
  SplitMix64 rng(8);
  const Matrix w = random_matrix(3, 10, rng);
  const QuantizedTensor q = rtn_quantize(w, config(4, 4));
  EXPECT_EQ(q.groups_per_row(), 3u);
  EXPECT_EQ(q.group_length(2), 2u);
  EXPECT_EQ(q.params().size(), 9u);
  for (std::uint32_t c : q.unpack()) EXPECT_LT(c, 16u);
  const Matrix d = dequantize(q);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 10; ++c) {
      EXPECT_LE(std::abs(d(r, c) - w(r, c)), q.params(r, c / 4).scale / 2 + 1e-12);
    }
  }
}

TEST(Rtn, OnGridMatrixHasNoError) {
  SplitMix64 rng(9);
  const Matrix w = random_matrix(6, 16, rng);
  const Matrix once = dequantize(rtn_quantize(w, config(3, 8)));
  EXPECT_EQ(dequantize(rtn_quantize(once, config(3, 8))), once);
}

TEST(QuantizedTensor, OutliersOverrideCodes) {
  const std::vector<std::uint32_t> codes{0, 1, 2, 3};
  const auto q = QuantizedTensor::from_codes(1, 4, 2, 4, Scheme::asymmetric, codes, {{1.0, 0}}, {{0, 2, 42.5}});
  const Matrix d = dequantize(q);
  EXPECT_EQ(d(0, 2), 42.5);
  EXPECT_EQ(d(0, 3), 3.0);
}

TEST(QuantizedTensor, RejectsMalformedInput) {
  const std::vector<std::uint32_t> codes{0, 1, 2, 3};
  EXPECT_ANY_THROW(QuantizedTensor::from_codes(1, 4, 2, 4, Scheme::asymmetric, codes, {{1.0, 0}},
                                               {{0, 2, 1.0}, {0, 2, 2.0}}));
  EXPECT_ANY_THROW(QuantizedTensor::from_codes(1, 4, 2, 4, Scheme::asymmetric, codes, {{1.0, 0}}, {{1, 0, 1.0}}));
  const std::vector<std::uint32_t> big{0, 1, 2, 4};
  EXPECT_ANY_THROW(QuantizedTensor::from_codes(1, 4, 2, 4, Scheme::asymmetric, big, {{1.0, 0}}));
  EXPECT_ANY_THROW(QuantizedTensor::from_codes(1, 4, 2, 4, Scheme::asymmetric, codes, {}));
  EXPECT_ANY_THROW(QuantizedTensor::from_packed(1, 4, 2, 4, Scheme::asymmetric, {0x00}, {{1.0, 0}}, {}, {}));
}

TEST(QuantizedTensor, InputScalesDivideColumns) {
  const Matrix w = Matrix::from_rows({{2, 4}, {6, 8}});
  const auto q = QuantizedTensor::passthrough(w, {2.0, 4.0});
  EXPECT_EQ(dequantize(q), w);
  EXPECT_EQ(effective_weights(q), Matrix::from_rows({{1, 1}, {3, 2}}));
  EXPECT_TRUE(q.with_input_scales({}).input_scales().empty());
  EXPECT_ANY_THROW(q.with_input_scales({1.0}));
}

TEST(QuantConfig, Validation) {
  EXPECT_NO_THROW(config(4, 128).validate());
  EXPECT_THROW(config(5, 128).validate(), ShapeError);
  EXPECT_THROW(config(4, 0).validate(), ShapeError);
  QuantConfig c = config(4, 128);
  c.a_bits = 4;
  EXPECT_THROW(c.validate(), ShapeError);
}

TEST(ActivationQuant, PerTokenExamples) {
  const Matrix x = Matrix::from_rows({{1, -2, 4}, {0, 0, 0}});
  const Matrix q = quantize_activations_dynamic(x, 8);
  const double step = 4.0 / 127.0;
  for (std::size_t c = 0; c < 3; ++c) {
    EXPECT_LE(std::abs(q(0, c) - x(0, c)), step / 2 + 1e-15);
    EXPECT_NEAR(std::round(q(0, c) / step) * step, q(0, c), 1e-12);
    EXPECT_EQ(q(1, c), 0.0);
  }
  EXPECT_EQ(q(0, 2), 4.0);
  EXPECT_EQ(quantize_activations_dynamic(x, 16), x);
  EXPECT_THROW(quantize_activations_dynamic(x, 4), ShapeError);
}

}  // namespace
}  // namespace mqnt
