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

// The closed set of differentiable primitives used by both towers.

#ifndef TWINTOWER_NUMERICS_OPS_H_
#define TWINTOWER_NUMERICS_OPS_H_

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "twintower/numerics/tensor.h"

namespace twintower::numerics {

enum class OpKind {
  kMatMul,
  kAdd,
  kMul,
  kConcat,
  kTanh,
  kSigmoid,
  kSoftmax,
  kEmbeddingLookup,
  kDot,
  kMean,
  kScale,
  kBinaryCrossEntropy,
};

const char* OpKindName(OpKind kind);

// Records executed ops so gradients can be replayed in reverse order.
// A tape is single-use: Backward() consumes it.
class Tape {
 public:
  Tape();
  ~Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Fills grad() of every tensor reached from `loss`. Gradients of reached
  // tensors are reset before accumulation. `loss` must hold one element.
  void Backward(const Tensor& loss);

  std::size_t size() const;
  bool consumed() const { return consumed_; }

  struct Record;

 private:
  friend void RecordOp(Record record);
  std::vector<Record> records_;
  bool consumed_ = false;
};

// Makes `tape` the active tape of the calling thread for the scope lifetime.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* previous_;
};

Tape* ActiveTape();

// Row index that makes EmbeddingLookup emit an all-zero row with no
// gradient path.
inline constexpr std::size_t kZeroRow = std::numeric_limits<std::size_t>::max();

// [n,k] x [k,m] -> [n,m]. With transpose_b, b is [m,k].
Tensor MatMul(const Tensor& a, const Tensor& b, bool transpose_b = false);
// Same shapes, or b a row vector ([m] or [1,m]) added to every row of a.
Tensor Add(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
// Concatenation along the last axis; leading extents must agree.
Tensor Concat(std::span<const Tensor> parts);
Tensor Concat(std::initializer_list<Tensor> parts);
Tensor Tanh(const Tensor& x);
Tensor Sigmoid(const Tensor& x);
// Softmax over the last axis, max-subtracted.
Tensor Softmax(const Tensor& x);
// Selects rows of a rank-2 table. kZeroRow yields zeros.
Tensor EmbeddingLookup(const Tensor& table, std::span<const std::size_t> rows);
// Vectors -> [1]; rank-2 [n,m] -> row-wise dots [n].
Tensor Dot(const Tensor& a, const Tensor& b);
Tensor Mean(const Tensor& x);
Tensor Scale(const Tensor& x, double factor);
// Mean of -[y ln p + (1-y) ln(1-p)] with p clamped to [eps, 1-eps].
Tensor BinaryCrossEntropy(const Tensor& p, std::span<const double> labels);

inline constexpr double kProbabilityClamp = 1e-12;

}  // namespace twintower::numerics

#endif  // TWINTOWER_NUMERICS_OPS_H_
