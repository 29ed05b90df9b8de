// Copyright 2026 The nightbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-loop reference evaluations of the attention stack, kept free of
// Eigen arithmetic so they share no code path with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nightbench/attention.hpp"
#include "nightbench/spm.hpp"

namespace nightbench::testing {

using Rows = std::vector<std::vector<double>>;

inline Rows to_rows(const Eigen::MatrixXd& m) {
  Rows out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  }
  return out;
}

inline Eigen::MatrixXd to_matrix(const Rows& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.at(0).size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

namespace oracle {

inline Rows depthwise(const TokenSeq& seq, const DepthwiseKernel& k) {
  const Rows x = to_rows(seq.tokens);
  const Rows taps = to_rows(k.taps);
  const int d = seq.dim(), half = k.size / 2;
  Rows out(x.size(), std::vector<double>(d, 0.0));
  for (int r = 0; r < seq.rows; ++r) {
    for (int c = 0; c < seq.cols; ++c) {
      for (int ch = 0; ch < d; ++ch) {
        double acc = 0.0;
        for (int i = -half; i <= half; ++i) {
          for (int j = -half; j <= half; ++j) {
            const int rr = r + i, cc = c + j;
            if (rr < 0 || cc < 0 || rr >= seq.rows || cc >= seq.cols) continue;
            acc += taps[ch][(i + half) * k.size + (j + half)] * x[rr * seq.cols + cc][ch];
          }
        }
        out[r * seq.cols + c][ch] = acc;
      }
    }
  }
  return out;
}

inline Rows affine(const Rows& x, const Eigen::MatrixXd& w, const Eigen::MatrixXd& b) {
  const Rows wr = to_rows(w);
  Rows out(x.size(), std::vector<double>(static_cast<std::size_t>(w.cols()), 0.0));
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (std::size_t e = 0; e < out[n].size(); ++e) {
      double acc = b(0, static_cast<Eigen::Index>(e));
      for (std::size_t ch = 0; ch < x[n].size(); ++ch) acc += x[n][ch] * wr[ch][e];
      out[n][e] = acc;
    }
  }
  return out;
}

inline Rows project(const TokenSeq& seq, const Projection& p) { return affine(depthwise(seq, p.depthwise), p.weight, p.bias); }

inline Rows attend(const Rows& q, const Rows& k, const Rows& v) {
  const double scale = 1.0 / std::sqrt(double(q.at(0).size()));
  Rows out(q.size(), std::vector<double>(v.at(0).size(), 0.0));
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::vector<double> logits(k.size());
    double peak = -INFINITY;
    for (std::size_t j = 0; j < k.size(); ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < q[i].size(); ++c) dot += q[i][c] * k[j][c];
      logits[j] = dot * scale;
      peak = std::max(peak, logits[j]);
    }
    double total = 0.0;
    for (double& l : logits) total += (l = std::exp(l - peak));
    for (std::size_t j = 0; j < k.size(); ++j) {
      for (std::size_t c = 0; c < v[j].size(); ++c) out[i][c] += logits[j] / total * v[j][c];
    }
  }
  return out;
}

struct MixedOutput {
  Rows target;
  Rows search;
};

inline MixedOutput mixed_attention(const TokenSeq& t, const TokenSeq& s, const MamParams& p) {
  Rows k = project(t, p.key), v = project(t, p.value);
  const Rows ks = project(s, p.key), vs = project(s, p.value);
  k.insert(k.end(), ks.begin(), ks.end());
  v.insert(v.end(), vs.begin(), vs.end());
  return {affine(attend(project(t, p.query), k, v), p.out_weight, p.out_bias),
          affine(attend(project(s, p.query), k, v), p.out_weight, p.out_bias)};
}

inline Rows score_block(const Rows& z, const Rows& x, const ScoreAttentionBlock& b) {
  const Rows a = affine(attend(affine(z, b.wq, b.bq), affine(x, b.wk, b.bk), affine(x, b.wv, b.bv)), b.wo, b.bo);
  Rows out = z;
  for (std::size_t c = 0; c < out[0].size(); ++c) out[0][c] += a[0][c];
  return out;
}

inline double spm_score(const SpmParams& p, const TokenSeq& roi, const TokenSeq& init) {
  const auto gelu = [](Rows m) {
    for (double& v : m[0]) v = 0.5 * v * (1.0 + std::erf(v / std::sqrt(2.0)));
    return m;
  };
  Rows z = score_block(to_rows(p.score_token), to_rows(roi.tokens), p.search_block);
  z = score_block(z, to_rows(init.tokens), p.target_block);
  const Rows h = gelu(affine(gelu(affine(z, p.w1, p.b1)), p.w2, p.b2));
  const double logit = affine(h, p.w3, p.b3)[0][0];
  return 1.0 / (1.0 + std::exp(-logit));
}

}  // namespace oracle
}  // namespace nightbench::testing
