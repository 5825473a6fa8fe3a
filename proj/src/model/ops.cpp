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

#include "mqnt/model/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mqnt/errors.hpp"

namespace mqnt::ops {

Matrix rmsnorm(const Matrix& x, std::span<const double> gain, std::vector<double>* inv_rms) {
  if (gain.size() != x.cols()) throw ShapeError("rmsnorm: gain length mismatch");
  Matrix y(x.rows(), x.cols());
  if (inv_rms) inv_rms->assign(x.rows(), 0.0);
  const double d = static_cast<double>(x.cols());
  for (std::size_t t = 0; t < x.rows(); ++t) {
    const auto xr = x.row(t);
    double ss = 0.0;
    for (double v : xr) ss += v * v;
    const double r = 1.0 / std::sqrt(ss / d + kNormEps);
    if (inv_rms) (*inv_rms)[t] = r;
    auto yr = y.row(t);
    for (std::size_t j = 0; j < x.cols(); ++j) yr[j] = gain[j] * (xr[j] * r);
  }
  return y;
}

Matrix rmsnorm_backward(const Matrix& x, std::span<const double> gain, std::span<const double> inv_rms,
                        const Matrix& dy, std::span<double> dgain) {
  Matrix dx(x.rows(), x.cols());
  const double d = static_cast<double>(x.cols());
  for (std::size_t t = 0; t < x.rows(); ++t) {
    const auto xr = x.row(t);
    const auto dyr = dy.row(t);
    const double r = inv_rms[t];
    double dot = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      dgain[j] += dyr[j] * xr[j] * r;
      dot += gain[j] * dyr[j] * xr[j];
    }
    const double coef = r * r * r * dot / d;
    auto dxr = dx.row(t);
    for (std::size_t j = 0; j < x.cols(); ++j) dxr[j] = r * gain[j] * dyr[j] - coef * xr[j];
  }
  return dx;
}

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;
}  // namespace

double gelu(double u) { return 0.5 * u * (1.0 + std::tanh(kGeluC * (u + kGeluA * u * u * u))); }

double gelu_grad(double u) {
  const double t = std::tanh(kGeluC * (u + kGeluA * u * u * u));
  return 0.5 * (1.0 + t) + 0.5 * u * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * u * u);
}

Matrix gelu(const Matrix& u) {
  Matrix z(u.rows(), u.cols());
  for (std::size_t i = 0; i < u.size(); ++i) z.values()[i] = gelu(u.values()[i]);
  return z;
}

Matrix causal_attention(const Matrix& q, const Matrix& k, const Matrix& v, std::size_t n_heads,
                        std::vector<Matrix>* probs) {
  const std::size_t t_len = q.rows();
  const std::size_t d = q.cols();
  if (n_heads == 0 || d % n_heads != 0) throw ShapeError("attention: d_model not divisible by heads");
  const std::size_t hd = d / n_heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hd));
  Matrix out(t_len, d);
  if (probs) probs->assign(n_heads, Matrix(t_len, t_len));
  std::vector<double> p(t_len);
  for (std::size_t h = 0; h < n_heads; ++h) {
    const std::size_t off = h * hd;
    for (std::size_t i = 0; i < t_len; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < hd; ++c) s += q(i, off + c) * k(j, off + c);
        p[j] = s * inv_sqrt;
        mx = std::max(mx, p[j]);
      }
      double z = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        p[j] = std::exp(p[j] - mx);
        z += p[j];
      }
      for (std::size_t j = 0; j <= i; ++j) {
        p[j] /= z;
        if (probs) (*probs)[h](i, j) = p[j];
        for (std::size_t c = 0; c < hd; ++c) out(i, off + c) += p[j] * v(j, off + c);
      }
    }
  }
  return out;
}

AttentionGrads causal_attention_backward(const Matrix& q, const Matrix& k, const Matrix& v,
                                         const std::vector<Matrix>& probs, const Matrix& dout, std::size_t n_heads) {
  const std::size_t t_len = q.rows();
  const std::size_t d = q.cols();
  const std::size_t hd = d / n_heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hd));
  AttentionGrads g{Matrix(t_len, d), Matrix(t_len, d), Matrix(t_len, d)};
  std::vector<double> dp(t_len);
  for (std::size_t h = 0; h < n_heads; ++h) {
    const std::size_t off = h * hd;
    const Matrix& p = probs[h];
    for (std::size_t i = 0; i < t_len; ++i) {
      double row_dot = 0.0;
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < hd; ++c) s += dout(i, off + c) * v(j, off + c);
        dp[j] = s;
        row_dot += s * p(i, j);
        for (std::size_t c = 0; c < hd; ++c) g.dv(j, off + c) += p(i, j) * dout(i, off + c);
      }
      for (std::size_t j = 0; j <= i; ++j) {
        const double ds = p(i, j) * (dp[j] - row_dot) * inv_sqrt;
        for (std::size_t c = 0; c < hd; ++c) {
          g.dq(i, off + c) += ds * k(j, off + c);
          g.dk(j, off + c) += ds * q(i, off + c);
        }
      }
    }
  }
  return g;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : logits) mx = std::max(mx, v);
  double z = 0.0;
  for (double v : logits) z += std::exp(v - mx);
  const double lz = mx + std::log(z);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lz;
  return out;
}

}  // namespace mqnt::ops
