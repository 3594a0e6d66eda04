// numerics/ops.cc

// Copyright 2026  The sparch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sparch/numerics/ops.h"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "sparch/base/error.h"

namespace sparch {

namespace {

using internal::TensorNode;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;

MapMat View(std::vector<double> &v, int rows, int cols) { return MapMat(v.data(), rows, cols); }


// Wraps a freshly computed value; records inputs and backward only when a
// gradient can flow.
Tensor MakeResult(Shape shape, std::vector<double> value, const char *op,
                  std::vector<Tensor> inputs, std::function<void(TensorNode &)> backward) {
  auto node = std::make_shared<TensorNode>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  node->op = op;
  bool track = false;
  if (GradEnabled())
    for (const Tensor &t : inputs) track = track || t.requires_grad();
  if (track) {
    node->requires_grad = true;
    node->inputs.reserve(inputs.size());
    for (const Tensor &t : inputs) node->inputs.push_back(t.node());
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

TensorNode &In(TensorNode &self, size_t i) { return *self.inputs[i]; }

void RequireMatrix(const Tensor &t, const char *op) {
  if (!t.defined()) SPARCH_ERR(kDimension) << op << ": undefined tensor";
  if (t.rank() > 2) SPARCH_ERR(kDimension) << op << ": expected a matrix, got " << ShapeString(t.shape());
}

void RequireSameShape(const Tensor &a, const Tensor &b, const char *op) {
  if (a.shape() != b.shape())
    SPARCH_ERR(kDimension) << op << ": shape mismatch " << ShapeString(a.shape()) << " vs "
                           << ShapeString(b.shape());
}

}  // namespace

Tensor MatMul(const Tensor &a, const Tensor &b) {
  RequireMatrix(a, "matmul");
  RequireMatrix(b, "matmul");
  const int m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k)
    SPARCH_ERR(kDimension) << "matmul: inner dimensions disagree " << ShapeString(a.shape())
                           << " x " << ShapeString(b.shape());
  std::vector<double> out(static_cast<size_t>(m) * n);
  View(out, m, n).noalias() = View(a.node()->value, m, k) * View(b.node()->value, k, n);
  return MakeResult({m, n}, std::move(out), "matmul", {a, b}, [m, k, n](TensorNode &self) {
    auto g = View(self.grad, m, n);
    TensorNode &A = In(self, 0), &B = In(self, 1);
    if (A.requires_grad) View(A.MutableGrad(), m, k).noalias() += g * View(B.value, k, n).transpose();
    if (B.requires_grad) View(B.MutableGrad(), k, n).noalias() += View(A.value, m, k).transpose() * g;
  });
}

Tensor MatMulTransposed(const Tensor &a, const Tensor &b) {
  RequireMatrix(a, "matmul_nt");
  RequireMatrix(b, "matmul_nt");
  const int m = a.rows(), k = a.cols(), n = b.rows();
  if (b.cols() != k)
    SPARCH_ERR(kDimension) << "matmul_nt: inner dimensions disagree " << ShapeString(a.shape())
                           << " x " << ShapeString(b.shape()) << "^T";
  std::vector<double> out(static_cast<size_t>(m) * n);
  View(out, m, n).noalias() = View(a.node()->value, m, k) * View(b.node()->value, n, k).transpose();
  return MakeResult({m, n}, std::move(out), "matmul_nt", {a, b}, [m, k, n](TensorNode &self) {
    auto g = View(self.grad, m, n);
    TensorNode &A = In(self, 0), &B = In(self, 1);
    if (A.requires_grad) View(A.MutableGrad(), m, k).noalias() += g * View(B.value, n, k);
    if (B.requires_grad) View(B.MutableGrad(), n, k).noalias() += g.transpose() * View(A.value, m, k);
  });
}

Tensor Add(const Tensor &a, const Tensor &b) {
  RequireSameShape(a, b, "add");
  std::vector<double> out(a.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
  return MakeResult(a.shape(), std::move(out), "add", {a, b}, [](TensorNode &self) {
    for (size_t j = 0; j < 2; ++j) {
      TensorNode &x = In(self, j);
      if (!x.requires_grad) continue;
      auto &g = x.MutableGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

Tensor Sub(const Tensor &a, const Tensor &b) {
  RequireSameShape(a, b, "sub");
  std::vector<double> out(a.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] - b.data()[i];
  return MakeResult(a.shape(), std::move(out), "sub", {a, b}, [](TensorNode &self) {
    TensorNode &A = In(self, 0), &B = In(self, 1);
    if (A.requires_grad) {
      auto &g = A.MutableGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
    if (B.requires_grad) {
      auto &g = B.MutableGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] -= self.grad[i];
    }
  });
}

Tensor Mul(const Tensor &a, const Tensor &b) {
  RequireSameShape(a, b, "mul");
  std::vector<double> out(a.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
  return MakeResult(a.shape(), std::move(out), "mul", {a, b}, [](TensorNode &self) {
    TensorNode &A = In(self, 0), &B = In(self, 1);
    if (A.requires_grad) {
      auto &g = A.MutableGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * B.value[i];
    }
    if (B.requires_grad) {
      auto &g = B.MutableGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * A.value[i];
    }
  });
}

Tensor Scale(const Tensor &x, double factor) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = x.data()[i] * factor;
  return MakeResult(x.shape(), std::move(out), "scale", {x}, [factor](TensorNode &self) {
    auto &g = In(self, 0).MutableGrad();
    for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * factor;
  });
}

Tensor AddBias(const Tensor &x, const Tensor &bias) {
  RequireMatrix(x, "add_bias");
  const int m = x.rows(), n = x.cols();
  if (bias.size() != static_cast<size_t>(n))
    SPARCH_ERR(kDimension) << "add_bias: bias of size " << bias.size() << " for " << n << " columns";
  std::vector<double> out(x.data().begin(), x.data().end());
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) out[static_cast<size_t>(r) * n + c] += bias.data()[c];
  return MakeResult(x.shape(), std::move(out), "add_bias", {x, bias}, [m, n](TensorNode &self) {
    TensorNode &X = In(self, 0), &B = In(self, 1);
    if (X.requires_grad) {
      auto &g = X.MutableGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
    if (B.requires_grad) {
      auto &g = B.MutableGrad();
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) g[c] += self.grad[static_cast<size_t>(r) * n + c];
    }
  });
}

Tensor Gelu(const Tensor &x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) {
    const double v = x.data()[i];
    out[i] = 0.5 * v * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
  }
  return MakeResult(x.shape(), std::move(out), "gelu", {x}, [](TensorNode &self) {
    TensorNode &X = In(self, 0);
    auto &g = X.MutableGrad();
    const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
    for (size_t i = 0; i < g.size(); ++i) {
      const double v = X.value[i];
      const double cdf = 0.5 * (1.0 + std::erf(v * std::numbers::sqrt2 / 2.0));
      const double pdf = inv_sqrt_2pi * std::exp(-0.5 * v * v);
      g[i] += self.grad[i] * (cdf + v * pdf);
    }
  });
}

Tensor Softmax(const Tensor &x) {
  RequireMatrix(x, "softmax");
  const int m = x.rows(), n = x.cols();
  std::vector<double> out(x.size());
  for (int r = 0; r < m; ++r) {
    const double *in = x.data().data() + static_cast<size_t>(r) * n;
    double *o = out.data() + static_cast<size_t>(r) * n;
    const double mx = *std::max_element(in, in + n);
    double total = 0.0;
    for (int c = 0; c < n; ++c) total += (o[c] = std::exp(in[c] - mx));
    for (int c = 0; c < n; ++c) o[c] /= total;
  }
  return MakeResult(x.shape(), std::move(out), "softmax", {x}, [m, n](TensorNode &self) {
    auto &g = In(self, 0).MutableGrad();
    for (int r = 0; r < m; ++r) {
      const size_t off = static_cast<size_t>(r) * n;
      double inner = 0.0;
      for (int c = 0; c < n; ++c) inner += self.grad[off + c] * self.value[off + c];
      for (int c = 0; c < n; ++c) g[off + c] += self.value[off + c] * (self.grad[off + c] - inner);
    }
  });
}

Tensor LayerNorm(const Tensor &x, const Tensor &gamma, const Tensor &beta, double eps) {
  RequireMatrix(x, "layer_norm");
  const int m = x.rows(), n = x.cols();
  if (gamma.size() != static_cast<size_t>(n) || beta.size() != static_cast<size_t>(n))
    SPARCH_ERR(kDimension) << "layer_norm: affine size does not match " << n << " columns";
  std::vector<double> out(x.size());
  auto normalized = std::make_shared<std::vector<double>>(x.size());
  auto inv_std = std::make_shared<std::vector<double>>(m);
  for (int r = 0; r < m; ++r) {
    const double *in = x.data().data() + static_cast<size_t>(r) * n;
    double mean = 0.0;
    for (int c = 0; c < n; ++c) mean += in[c];
    mean /= n;
    double var = 0.0;
    for (int c = 0; c < n; ++c) var += (in[c] - mean) * (in[c] - mean);
    var /= n;
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (int c = 0; c < n; ++c) {
      const size_t i = static_cast<size_t>(r) * n + c;
      (*normalized)[i] = (in[c] - mean) * is;
      out[i] = (*normalized)[i] * gamma.data()[c] + beta.data()[c];
    }
  }
  return MakeResult(x.shape(), std::move(out), "layer_norm", {x, gamma, beta},
                    [m, n, normalized, inv_std](TensorNode &self) {
    TensorNode &X = In(self, 0), &G = In(self, 1), &B = In(self, 2);
    const auto &xhat = *normalized;
    if (G.requires_grad || B.requires_grad) {
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) {
          const size_t i = static_cast<size_t>(r) * n + c;
          if (G.requires_grad) G.MutableGrad()[c] += self.grad[i] * xhat[i];
          if (B.requires_grad) B.MutableGrad()[c] += self.grad[i];
        }
    }
    if (!X.requires_grad) return;
    auto &gx = X.MutableGrad();
    std::vector<double> dxhat(n);
    for (int r = 0; r < m; ++r) {
      double mean_d = 0.0, mean_dx = 0.0;
      for (int c = 0; c < n; ++c) {
        const size_t i = static_cast<size_t>(r) * n + c;
        dxhat[c] = self.grad[i] * G.value[c];
        mean_d += dxhat[c];
        mean_dx += dxhat[c] * xhat[i];
      }
      mean_d /= n;
      mean_dx /= n;
      for (int c = 0; c < n; ++c) {
        const size_t i = static_cast<size_t>(r) * n + c;
        gx[i] += (*inv_std)[r] * (dxhat[c] - mean_d - xhat[i] * mean_dx);
      }
    }
  });
}

Tensor InstanceNorm(const Tensor &x, double eps) {
  if (!x.defined() || x.rank() != 2) SPARCH_ERR(kDimension) << "instance_norm expects [T x D]";
  const int t = x.rows(), d = x.cols();
  std::vector<double> out(x.size());
  std::vector<double> inv_std(d);
  for (int c = 0; c < d; ++c) {
    double mean = 0.0;
    for (int r = 0; r < t; ++r) mean += x.at(r, c);
    mean /= t;
    double var = 0.0;
    for (int r = 0; r < t; ++r) var += (x.at(r, c) - mean) * (x.at(r, c) - mean);
    var /= t;
    inv_std[c] = 1.0 / std::sqrt(var + eps);
    for (int r = 0; r < t; ++r) out[static_cast<size_t>(r) * d + c] = (x.at(r, c) - mean) * inv_std[c];
  }
  return MakeResult(x.shape(), std::move(out), "instance_norm", {x},
                    [t, d, inv_std = std::move(inv_std)](TensorNode &self) {
    auto &gx = In(self, 0).MutableGrad();
    for (int c = 0; c < d; ++c) {
      double mean_d = 0.0, mean_dx = 0.0;
      for (int r = 0; r < t; ++r) {
        const size_t i = static_cast<size_t>(r) * d + c;
        mean_d += self.grad[i];
        mean_dx += self.grad[i] * self.value[i];
      }
      mean_d /= t;
      mean_dx /= t;
      for (int r = 0; r < t; ++r) {
        const size_t i = static_cast<size_t>(r) * d + c;
        gx[i] += inv_std[c] * (self.grad[i] - mean_d - self.value[i] * mean_dx);
      }
    }
  });
}

int Conv1dOutputLength(int num_frames, int kernel_size, int stride) {
  if (num_frames < kernel_size) return 0;
  return (num_frames - kernel_size) / stride + 1;
}

Tensor Conv1d(const Tensor &x, const Tensor &kernel, int stride) {
  if (!x.defined() || x.rank() != 2) SPARCH_ERR(kDimension) << "conv1d expects x of shape [T x D_in]";
  if (!kernel.defined() || kernel.rank() != 3)
    SPARCH_ERR(kDimension) << "conv1d expects kernel of shape [k x D_in x D_out]";
  if (stride < 1) SPARCH_ERR(kConfig) << "conv1d stride must be >= 1, got " << stride;
  const int t = x.rows(), din = x.cols();
  const int k = kernel.dim(0), dout = kernel.dim(2);
  if (kernel.dim(1) != din)
    SPARCH_ERR(kDimension) << "conv1d: kernel expects " << kernel.dim(1) << " input channels, got " << din;
  if (t < k)
    SPARCH_ERR(kSequenceTooShort) << "conv1d: " << t << " frames is shorter than kernel size " << k;
  const int tout = Conv1dOutputLength(t, k, stride);
  const int window = k * din;
  // Window j is the contiguous block of k rows starting at row j*stride.
  using Strided = Eigen::Map<const RowMat, 0, Eigen::OuterStride<>>;
  Strided windows(x.data().data(), tout, window, Eigen::OuterStride<>(stride * din));
  std::vector<double> out(static_cast<size_t>(tout) * dout);
  View(out, tout, dout).noalias() = windows * View(kernel.node()->value, window, dout);
  return MakeResult({tout, dout}, std::move(out), "conv1d", {x, kernel},
                    [tout, din, dout, window, stride](TensorNode &self) {
    TensorNode &X = In(self, 0), &K = In(self, 1);
    auto g = View(self.grad, tout, dout);
    if (K.requires_grad) {
      Strided windows(X.value.data(), tout, window, Eigen::OuterStride<>(stride * din));
      View(K.MutableGrad(), window, dout).noalias() += windows.transpose() * g;
    }
    if (X.requires_grad) {
      RowMat gw = g * View(K.value, window, dout).transpose();
      auto &gx = X.MutableGrad();
      for (int j = 0; j < tout; ++j) {
        double *dst = gx.data() + static_cast<size_t>(j) * stride * din;
        for (int i = 0; i < window; ++i) dst[i] += gw(j, i);
      }
    }
  });
}

Tensor EmbeddingLookup(const Tensor &table, std::span<const int> ids) {
  if (!table.defined() || table.rank() != 2) SPARCH_ERR(kDimension) << "embedding table must be [V x d]";
  if (ids.empty()) SPARCH_ERR(kEmptyInput) << "embedding lookup of empty id list";
  const int vocab = table.rows(), d = table.cols();
  const int n = static_cast<int>(ids.size());
  std::vector<double> out(static_cast<size_t>(n) * d);
  for (int i = 0; i < n; ++i) {
    if (ids[i] < 0 || ids[i] >= vocab)
      SPARCH_ERR(kDimension) << "embedding id " << ids[i] << " outside [0, " << vocab << ")";
    std::copy_n(table.data().data() + static_cast<size_t>(ids[i]) * d, d,
                out.data() + static_cast<size_t>(i) * d);
  }
  return MakeResult({n, d}, std::move(out), "embedding", {table},
                    [ids = std::vector<int>(ids.begin(), ids.end()), d](TensorNode &self) {
    auto &g = In(self, 0).MutableGrad();
    for (size_t i = 0; i < ids.size(); ++i)
      for (int c = 0; c < d; ++c) g[static_cast<size_t>(ids[i]) * d + c] += self.grad[i * d + c];
  });
}

Tensor SliceRows(const Tensor &x, int start, int count) {
  RequireMatrix(x, "slice_rows");
  const int n = x.cols();
  if (start < 0 || count < 1 || start + count > x.rows())
    SPARCH_ERR(kDimension) << "slice_rows [" << start << ", " << start + count << ") of "
                           << x.rows() << " rows";
  const size_t off = static_cast<size_t>(start) * n;
  std::vector<double> out(x.data().begin() + off, x.data().begin() + off + static_cast<size_t>(count) * n);
  return MakeResult({count, n}, std::move(out), "slice_rows", {x}, [off](TensorNode &self) {
    auto &g = In(self, 0).MutableGrad();
    for (size_t i = 0; i < self.grad.size(); ++i) g[off + i] += self.grad[i];
  });
}

Tensor SliceCols(const Tensor &x, int start, int count) {
  RequireMatrix(x, "slice_cols");
  const int m = x.rows(), n = x.cols();
  if (start < 0 || count < 1 || start + count > n)
    SPARCH_ERR(kDimension) << "slice_cols [" << start << ", " << start + count << ") of " << n << " cols";
  std::vector<double> out(static_cast<size_t>(m) * count);
  for (int r = 0; r < m; ++r)
    std::copy_n(x.data().data() + static_cast<size_t>(r) * n + start, count,
                out.data() + static_cast<size_t>(r) * count);
  return MakeResult({m, count}, std::move(out), "slice_cols", {x}, [m, n, start, count](TensorNode &self) {
    auto &g = In(self, 0).MutableGrad();
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < count; ++c)
        g[static_cast<size_t>(r) * n + start + c] += self.grad[static_cast<size_t>(r) * count + c];
  });
}

Tensor SelectRow(const Tensor &x, int r) {
  RequireMatrix(x, "select_row");
  const int n = x.cols();
  if (r < 0 || r >= x.rows()) SPARCH_ERR(kDimension) << "select_row " << r << " of " << x.rows();
  const size_t off = static_cast<size_t>(r) * n;
  std::vector<double> out(x.data().begin() + off, x.data().begin() + off + n);
  return MakeResult({n}, std::move(out), "select_row", {x}, [off](TensorNode &self) {
    auto &g = In(self, 0).MutableGrad();
    for (size_t i = 0; i < self.grad.size(); ++i) g[off + i] += self.grad[i];
  });
}

Tensor ConcatRows(std::span<const Tensor> parts) {
  if (parts.empty()) SPARCH_ERR(kEmptyInput) << "concat_rows of nothing";
  const int n = parts[0].cols();
  int m = 0;
  for (const Tensor &p : parts) {
    RequireMatrix(p, "concat_rows");
    if (p.cols() != n) SPARCH_ERR(kDimension) << "concat_rows: column mismatch " << p.cols() << " vs " << n;
    m += p.rows();
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>(m) * n);
  for (const Tensor &p : parts) out.insert(out.end(), p.data().begin(), p.data().end());
  return MakeResult({m, n}, std::move(out), "concat_rows", std::vector<Tensor>(parts.begin(), parts.end()),
                    [](TensorNode &self) {
    size_t off = 0;
    for (auto &in : self.inputs) {
      if (in->requires_grad) {
        auto &g = in->MutableGrad();
        for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[off + i];
      }
      off += in->value.size();
    }
  });
}

Tensor ConcatCols(std::span<const Tensor> parts) {
  if (parts.empty()) SPARCH_ERR(kEmptyInput) << "concat_cols of nothing";
  const int m = parts[0].rows();
  int n = 0;
  for (const Tensor &p : parts) {
    RequireMatrix(p, "concat_cols");
    if (p.rows() != m) SPARCH_ERR(kDimension) << "concat_cols: row mismatch " << p.rows() << " vs " << m;
    n += p.cols();
  }
  std::vector<double> out(static_cast<size_t>(m) * n);
  int c0 = 0;
  for (const Tensor &p : parts) {
    const int w = p.cols();
    for (int r = 0; r < m; ++r)
      std::copy_n(p.data().data() + static_cast<size_t>(r) * w, w, out.data() + static_cast<size_t>(r) * n + c0);
    c0 += w;
  }
  return MakeResult({m, n}, std::move(out), "concat_cols", std::vector<Tensor>(parts.begin(), parts.end()),
                    [m, n](TensorNode &self) {
    int c0 = 0;
    for (auto &in : self.inputs) {
      const int w = static_cast<int>(in->value.size() / m);
      if (in->requires_grad) {
        auto &g = in->MutableGrad();
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < w; ++c)
            g[static_cast<size_t>(r) * w + c] += self.grad[static_cast<size_t>(r) * n + c0 + c];
      }
      c0 += w;
    }
  });
}

Tensor Sum(const Tensor &x) {
  double total = 0.0;
  for (double v : x.data()) total += v;
  return MakeResult({1}, {total}, "sum", {x}, [](TensorNode &self) {
    auto &g = In(self, 0).MutableGrad();
    for (double &v : g) v += self.grad[0];
  });
}

Tensor Dot(const Tensor &a, const Tensor &b) {
  if (a.size() != b.size())
    SPARCH_ERR(kDimension) << "dot: sizes " << a.size() << " and " << b.size() << " differ";
  double total = 0.0;
  for (size_t i = 0; i < a.size(); ++i) total += a.data()[i] * b.data()[i];
  return MakeResult({1}, {total}, "dot", {a, b}, [](TensorNode &self) {
    TensorNode &A = In(self, 0), &B = In(self, 1);
    if (A.requires_grad) {
      auto &g = A.MutableGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[0] * B.value[i];
    }
    if (B.requires_grad) {
      auto &g = B.MutableGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[0] * A.value[i];
    }
  });
}

Tensor CrossEntropyRows(const Tensor &logits, std::span<const int> targets) {
  RequireMatrix(logits, "cross_entropy");
  const int m = logits.rows(), n = logits.cols();
  if (targets.size() != static_cast<size_t>(m))
    SPARCH_ERR(kDimension) << "cross_entropy: " << targets.size() << " targets for " << m << " rows";
  auto probs = std::make_shared<std::vector<double>>(logits.size());
  double total = 0.0;
  for (int r = 0; r < m; ++r) {
    const double *z = logits.data().data() + static_cast<size_t>(r) * n;
    for (int c = 0; c < n; ++c)
      if (!std::isfinite(z[c])) SPARCH_ERR(kNonFinite) << "cross_entropy: non-finite score in row " << r;
    if (targets[r] < 0 || targets[r] >= n)
      SPARCH_ERR(kDimension) << "cross_entropy: target " << targets[r] << " out of range";
    const double mx = *std::max_element(z, z + n);
    double sum = 0.0;
    for (int c = 0; c < n; ++c) sum += std::exp(z[c] - mx);
    const double lse = mx + std::log(sum);
    for (int c = 0; c < n; ++c) (*probs)[static_cast<size_t>(r) * n + c] = std::exp(z[c] - lse);
    total += lse - z[targets[r]];
  }
  return MakeResult({1}, {total / m}, "cross_entropy", {logits},
                    [m, n, probs, t = std::vector<int>(targets.begin(), targets.end())](TensorNode &self) {
    auto &g = In(self, 0).MutableGrad();
    const double scale = self.grad[0] / m;
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < n; ++c) {
        const size_t i = static_cast<size_t>(r) * n + c;
        g[i] += scale * ((*probs)[i] - (c == t[r] ? 1.0 : 0.0));
      }
    }
  });
}

void CheckFinite(const Tensor &x, std::string_view what) {
  for (size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x.data()[i]))
      SPARCH_ERR(kNonFinite) << what << ": non-finite value at flat index " << i << " (op "
                             << x.op_name() << ")";
}

std::string FindNonFiniteOp(const Tensor &root) {
  if (!root.defined()) return {};
  std::vector<TensorNode *> order;
  std::unordered_set<TensorNode *> visited{root.node().get()};
  std::vector<std::pair<TensorNode *, size_t>> stack{{root.node().get(), 0}};
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->inputs.size()) {
      TensorNode *child = node->inputs[next++].get();
      if (visited.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (TensorNode *node : order)
    for (double v : node->value)
      if (!std::isfinite(v)) return node->op;
  return {};
}

}  // namespace sparch
