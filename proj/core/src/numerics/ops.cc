// Copyright 2026 The TwinTower Authors
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

#include "twintower/numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>

#include "twintower/error.h"

namespace twintower::numerics {

using internal::Storage;
using StoragePtr = std::shared_ptr<Storage>;

struct Tape::Record {
  OpKind kind;
  std::vector<StoragePtr> inputs;
  StoragePtr output;
  std::vector<std::size_t> indices;  // lookup rows or concat widths
  std::vector<double> labels;
  double scalar = 0.0;
  bool flag = false;
};

namespace {

thread_local Tape* active_tape = nullptr;

[[noreturn]] void ShapeMismatch(OpKind kind, const Tensor& a,
                                const Tensor& b) {
  throw ShapeError(std::string(OpKindName(kind)) + ": incompatible shapes " +
                   ShapeToString(a.shape()) + " and " +
                   ShapeToString(b.shape()));
}

bool AnyRequiresGrad(std::initializer_list<const Tensor*> inputs) {
  if (active_tape == nullptr) return false;
  for (const Tensor* t : inputs) {
    if (t->requires_grad()) return true;
  }
  return false;
}

Tensor MakeOutput(Shape shape, std::vector<double> values, bool track) {
  return Tensor(std::move(shape), std::move(values), track);
}

std::vector<double>& GradOf(Storage& s) {
  if (s.grad.empty()) s.grad.assign(s.values.size(), 0.0);
  return s.grad;
}

// c[n,m] += a[n,k] * b[k,m]; zero entries of `a` are skipped, which keeps
// multi-hot inputs cheap and is exact for finite operands.
void GemmNN(const double* a, const double* b, double* c, std::size_t n,
            std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    double* crow = c + i * m;
    const double* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

// c[n,m] += a[n,k] * b[m,k]^T
void GemmNT(const double* a, const double* b, double* c, std::size_t n,
            std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a + i * k;
    for (std::size_t j = 0; j < m; ++j) {
      const double* brow = b + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      c[i * m + j] += acc;
    }
  }
}

// c[k,m] += a[n,k]^T * b[n,m]
void GemmTN(const double* a, const double* b, double* c, std::size_t n,
            std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a + i * k;
    const double* brow = b + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      double av = arow[p];
      if (av == 0.0) continue;
      double* crow = c + p * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

double StableSigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

bool IsRowVectorOf(const Tensor& b, const Tensor& a) {
  if (a.rank() != 2) return false;
  if (b.rank() == 1) return b.shape()[0] == a.cols();
  return b.rank() == 2 && b.shape()[0] == 1 && b.cols() == a.cols();
}

void Backprop(const Tape::Record& r) {
  const Storage& out = *r.output;
  if (out.grad.empty()) return;
  const std::vector<double>& g = out.grad;
  switch (r.kind) {
    case OpKind::kMatMul: {
      Storage& a = *r.inputs[0];
      Storage& b = *r.inputs[1];
      std::size_t n = a.shape[0], k = a.shape[1];
      std::size_t m = r.flag ? b.shape[0] : b.shape[1];
      if (a.requires_grad) {
        // dA = G * B^T  (or G * B when b was transposed)
        if (r.flag) {
          GemmNN(g.data(), b.values.data(), GradOf(a).data(), n, m, k);
        } else {
          GemmNT(g.data(), b.values.data(), GradOf(a).data(), n, m, k);
        }
      }
      if (b.requires_grad) {
        if (r.flag) {
          // dB[m,k] = G^T * A
          GemmTN(g.data(), a.values.data(), GradOf(b).data(), n, m, k);
        } else {
          GemmTN(a.values.data(), g.data(), GradOf(b).data(), n, k, m);
        }
      }
      break;
    }
    case OpKind::kAdd: {
      Storage& a = *r.inputs[0];
      Storage& b = *r.inputs[1];
      if (a.requires_grad) {
        auto& ga = GradOf(a);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
      }
      if (b.requires_grad) {
        auto& gb = GradOf(b);
        std::size_t w = gb.size();
        for (std::size_t i = 0; i < g.size(); ++i) gb[i % w] += g[i];
      }
      break;
    }
    case OpKind::kMul: {
      Storage& a = *r.inputs[0];
      Storage& b = *r.inputs[1];
      if (a.requires_grad) {
        auto& ga = GradOf(a);
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * b.values[i];
      }
      if (b.requires_grad) {
        auto& gb = GradOf(b);
        for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * a.values[i];
      }
      break;
    }
    case OpKind::kConcat: {
      std::size_t total = out.shape.back();
      std::size_t outer = out.values.size() / total;
      std::size_t offset = 0;
      for (std::size_t p = 0; p < r.inputs.size(); ++p) {
        std::size_t w = r.indices[p];
        Storage& in = *r.inputs[p];
        if (in.requires_grad) {
          auto& gi = GradOf(in);
          for (std::size_t row = 0; row < outer; ++row) {
            for (std::size_t j = 0; j < w; ++j) {
              gi[row * w + j] += g[row * total + offset + j];
            }
          }
        }
        offset += w;
      }
      break;
    }
    case OpKind::kTanh: {
      Storage& x = *r.inputs[0];
      auto& gx = GradOf(x);
      for (std::size_t i = 0; i < g.size(); ++i) {
        double y = out.values[i];
        gx[i] += g[i] * (1.0 - y * y);
      }
      break;
    }
    case OpKind::kSigmoid: {
      Storage& x = *r.inputs[0];
      auto& gx = GradOf(x);
      for (std::size_t i = 0; i < g.size(); ++i) {
        double y = out.values[i];
        gx[i] += g[i] * y * (1.0 - y);
      }
      break;
    }
    case OpKind::kSoftmax: {
      Storage& x = *r.inputs[0];
      auto& gx = GradOf(x);
      std::size_t w = out.shape.back();
      std::size_t outer = out.values.size() / w;
      for (std::size_t row = 0; row < outer; ++row) {
        const double* y = out.values.data() + row * w;
        const double* gy = g.data() + row * w;
        double inner = 0.0;
        for (std::size_t j = 0; j < w; ++j) inner += gy[j] * y[j];
        for (std::size_t j = 0; j < w; ++j) {
          gx[row * w + j] += y[j] * (gy[j] - inner);
        }
      }
      break;
    }
    case OpKind::kEmbeddingLookup: {
      Storage& table = *r.inputs[0];
      auto& gt = GradOf(table);
      std::size_t w = table.shape[1];
      for (std::size_t i = 0; i < r.indices.size(); ++i) {
        std::size_t row = r.indices[i];
        if (row == kZeroRow) continue;
        for (std::size_t j = 0; j < w; ++j) gt[row * w + j] += g[i * w + j];
      }
      break;
    }
    case OpKind::kDot: {
      Storage& a = *r.inputs[0];
      Storage& b = *r.inputs[1];
      std::size_t w = a.shape.back();
      if (a.requires_grad) {
        auto& ga = GradOf(a);
        for (std::size_t i = 0; i < ga.size(); ++i) {
          ga[i] += g[i / w] * b.values[i];
        }
      }
      if (b.requires_grad) {
        auto& gb = GradOf(b);
        for (std::size_t i = 0; i < gb.size(); ++i) {
          gb[i] += g[i / w] * a.values[i];
        }
      }
      break;
    }
    case OpKind::kMean: {
      Storage& x = *r.inputs[0];
      auto& gx = GradOf(x);
      double share = g[0] / static_cast<double>(x.values.size());
      for (double& v : gx) v += share;
      break;
    }
    case OpKind::kScale: {
      Storage& x = *r.inputs[0];
      auto& gx = GradOf(x);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * r.scalar;
      break;
    }
    case OpKind::kBinaryCrossEntropy: {
      Storage& p = *r.inputs[0];
      auto& gp = GradOf(p);
      double n = static_cast<double>(p.values.size());
      for (std::size_t i = 0; i < gp.size(); ++i) {
        double pi = p.values[i];
        if (pi < kProbabilityClamp || pi > 1.0 - kProbabilityClamp) continue;
        double y = r.labels[i];
        gp[i] += g[0] * (-y / pi + (1.0 - y) / (1.0 - pi)) / n;
      }
      break;
    }
  }
}

}  // namespace

void RecordOp(Tape::Record record) {
  active_tape->records_.push_back(std::move(record));
}

namespace {

void Record(OpKind kind, std::vector<StoragePtr> inputs, const Tensor& output,
            std::vector<std::size_t> indices = {},
            std::vector<double> labels = {}, double scalar = 0.0,
            bool flag = false) {
  Tape::Record r{kind,    std::move(inputs),  output.storage(),
                 std::move(indices), std::move(labels), scalar, flag};
  RecordOp(std::move(r));
}

}  // namespace

const char* OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kMatMul: return "matmul";
    case OpKind::kAdd: return "add";
    case OpKind::kMul: return "elementwise-multiply";
    case OpKind::kConcat: return "concat";
    case OpKind::kTanh: return "tanh";
    case OpKind::kSigmoid: return "sigmoid";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kEmbeddingLookup: return "embedding-lookup";
    case OpKind::kDot: return "dot-product";
    case OpKind::kMean: return "mean";
    case OpKind::kScale: return "scalar-scale";
    case OpKind::kBinaryCrossEntropy: return "binary-cross-entropy";
  }
  return "unknown";
}

Tape::Tape() = default;
Tape::~Tape() = default;

std::size_t Tape::size() const { return records_.size(); }

void Tape::Backward(const Tensor& loss) {
  if (consumed_) throw Error("backward called twice on the same tape");
  if (loss.size() != 1) {
    throw ShapeError("backward requires a scalar loss, got shape " +
                     ShapeToString(loss.shape()));
  }
  consumed_ = true;

  std::unordered_set<Storage*> reached;
  for (const auto& r : records_) {
    reached.insert(r.output.get());
    for (const auto& in : r.inputs) {
      if (in->requires_grad) reached.insert(in.get());
    }
  }
  reached.insert(loss.storage().get());
  for (Storage* s : reached) s->grad.assign(s->values.size(), 0.0);

  loss.storage()->grad[0] = 1.0;
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) Backprop(*it);

  // Intermediates are released; only caller-held tensors keep storage alive.
  records_.clear();
}

TapeScope::TapeScope(Tape& tape) : previous_(active_tape) {
  active_tape = &tape;
}

TapeScope::~TapeScope() { active_tape = previous_; }

Tape* ActiveTape() { return active_tape; }

Tensor MatMul(const Tensor& a, const Tensor& b, bool transpose_b) {
  if (a.rank() != 2 || b.rank() != 2) ShapeMismatch(OpKind::kMatMul, a, b);
  std::size_t n = a.shape()[0], k = a.shape()[1];
  std::size_t kb = transpose_b ? b.shape()[1] : b.shape()[0];
  std::size_t m = transpose_b ? b.shape()[0] : b.shape()[1];
  if (k != kb) ShapeMismatch(OpKind::kMatMul, a, b);
  std::vector<double> c(n * m, 0.0);
  if (transpose_b) {
    GemmNT(a.values().data(), b.values().data(), c.data(), n, k, m);
  } else {
    GemmNN(a.values().data(), b.values().data(), c.data(), n, k, m);
  }
  bool track = AnyRequiresGrad({&a, &b});
  Tensor out = MakeOutput({n, m}, std::move(c), track);
  if (track) {
    Record(OpKind::kMatMul, {a.storage(), b.storage()}, out, {}, {}, 0.0,
           transpose_b);
  }
  return out;
}

Tensor Add(const Tensor& a, const Tensor& b) {
  bool broadcast = a.shape() != b.shape();
  if (broadcast && !IsRowVectorOf(b, a)) ShapeMismatch(OpKind::kAdd, a, b);
  std::vector<double> c(a.values().begin(), a.values().end());
  std::size_t w = b.size();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[broadcast ? i % w : i];
  bool track = AnyRequiresGrad({&a, &b});
  Tensor out = MakeOutput(a.shape(), std::move(c), track);
  if (track) Record(OpKind::kAdd, {a.storage(), b.storage()}, out);
  return out;
}

Tensor Mul(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) ShapeMismatch(OpKind::kMul, a, b);
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] * b[i];
  bool track = AnyRequiresGrad({&a, &b});
  Tensor out = MakeOutput(a.shape(), std::move(c), track);
  if (track) Record(OpKind::kMul, {a.storage(), b.storage()}, out);
  return out;
}

Tensor Concat(std::initializer_list<Tensor> parts) {
  return Concat(std::span<const Tensor>(parts.begin(), parts.size()));
}

Tensor Concat(std::span<const Tensor> parts) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  const Tensor& first = parts.front();
  Shape lead(first.shape().begin(), first.shape().end() - 1);
  std::size_t total = 0;
  std::vector<std::size_t> widths;
  bool track = false;
  for (const Tensor& p : parts) {
    Shape plead(p.shape().begin(), p.shape().end() - 1);
    if (plead != lead) ShapeMismatch(OpKind::kConcat, first, p);
    widths.push_back(p.cols());
    total += p.cols();
    track = track || (active_tape != nullptr && p.requires_grad());
  }
  std::size_t outer = first.size() / first.cols();
  std::vector<double> c(outer * total);
  std::size_t offset = 0;
  for (const Tensor& p : parts) {
    std::size_t w = p.cols();
    for (std::size_t row = 0; row < outer; ++row) {
      std::copy_n(p.values().data() + row * w, w,
                  c.data() + row * total + offset);
    }
    offset += w;
  }
  Shape shape = lead;
  shape.push_back(total);
  Tensor out = MakeOutput(std::move(shape), std::move(c), track);
  if (track) {
    std::vector<StoragePtr> inputs;
    for (const Tensor& p : parts) inputs.push_back(p.storage());
    Record(OpKind::kConcat, std::move(inputs), out, std::move(widths));
  }
  return out;
}

Tensor Tanh(const Tensor& x) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::tanh(x[i]);
  bool track = AnyRequiresGrad({&x});
  Tensor out = MakeOutput(x.shape(), std::move(y), track);
  if (track) Record(OpKind::kTanh, {x.storage()}, out);
  return out;
}

Tensor Sigmoid(const Tensor& x) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = StableSigmoid(x[i]);
  bool track = AnyRequiresGrad({&x});
  Tensor out = MakeOutput(x.shape(), std::move(y), track);
  if (track) Record(OpKind::kSigmoid, {x.storage()}, out);
  return out;
}

Tensor Softmax(const Tensor& x) {
  std::size_t w = x.cols();
  std::size_t outer = x.size() / w;
  std::vector<double> y(x.size());
  for (std::size_t row = 0; row < outer; ++row) {
    const double* in = x.values().data() + row * w;
    double* o = y.data() + row * w;
    double mx = *std::max_element(in, in + w);
    double sum = 0.0;
    for (std::size_t j = 0; j < w; ++j) {
      o[j] = std::exp(in[j] - mx);
      sum += o[j];
    }
    for (std::size_t j = 0; j < w; ++j) o[j] /= sum;
  }
  bool track = AnyRequiresGrad({&x});
  Tensor out = MakeOutput(x.shape(), std::move(y), track);
  if (track) Record(OpKind::kSoftmax, {x.storage()}, out);
  return out;
}

Tensor EmbeddingLookup(const Tensor& table,
                       std::span<const std::size_t> rows) {
  if (table.rank() != 2) {
    throw ShapeError("embedding-lookup: table must be rank 2, got " +
                     ShapeToString(table.shape()));
  }
  if (rows.empty()) throw ShapeError("embedding-lookup: no rows requested");
  std::size_t w = table.cols();
  std::vector<double> y(rows.size() * w, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t row = rows[i];
    if (row == kZeroRow) continue;
    if (row >= table.rows()) {
      throw ShapeError("embedding-lookup: index " + std::to_string(row) +
                       " out of range for table " +
                       ShapeToString(table.shape()));
    }
    std::copy_n(table.values().data() + row * w, w, y.data() + i * w);
  }
  bool track = AnyRequiresGrad({&table});
  Tensor out = MakeOutput({rows.size(), w}, std::move(y), track);
  if (track) {
    Record(OpKind::kEmbeddingLookup, {table.storage()}, out,
           std::vector<std::size_t>(rows.begin(), rows.end()));
  }
  return out;
}

Tensor Dot(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape() || a.rank() > 2) {
    ShapeMismatch(OpKind::kDot, a, b);
  }
  std::size_t w = a.cols();
  std::size_t n = a.size() / w;
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < w; ++j) acc += a[i * w + j] * b[i * w + j];
    y[i] = acc;
  }
  bool track = AnyRequiresGrad({&a, &b});
  Tensor out = MakeOutput({n}, std::move(y), track);
  if (track) Record(OpKind::kDot, {a.storage(), b.storage()}, out);
  return out;
}

Tensor Mean(const Tensor& x) {
  double sum = 0.0;
  for (double v : x.values()) sum += v;
  bool track = AnyRequiresGrad({&x});
  Tensor out =
      MakeOutput({1}, {sum / static_cast<double>(x.size())}, track);
  if (track) Record(OpKind::kMean, {x.storage()}, out);
  return out;
}

Tensor Scale(const Tensor& x, double factor) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] * factor;
  bool track = AnyRequiresGrad({&x});
  Tensor out = MakeOutput(x.shape(), std::move(y), track);
  if (track) Record(OpKind::kScale, {x.storage()}, out, {}, {}, factor);
  return out;
}

Tensor BinaryCrossEntropy(const Tensor& p, std::span<const double> labels) {
  if (labels.size() != p.size()) {
    throw ShapeError("binary-cross-entropy: " + std::to_string(labels.size()) +
                     " labels for predictions of shape " +
                     ShapeToString(p.shape()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double pi = std::clamp(p[i], kProbabilityClamp, 1.0 - kProbabilityClamp);
    double y = labels[i];
    sum -= y * std::log(pi) + (1.0 - y) * std::log(1.0 - pi);
  }
  bool track = AnyRequiresGrad({&p});
  Tensor out =
      MakeOutput({1}, {sum / static_cast<double>(p.size())}, track);
  if (track) {
    Record(OpKind::kBinaryCrossEntropy, {p.storage()}, out, {},
           std::vector<double>(labels.begin(), labels.end()));
  }
  return out;
}

}  // namespace twintower::numerics
