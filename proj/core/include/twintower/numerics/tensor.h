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

// Dense row-major f64 tensors with a tape-based reverse pass.
//
// A Tensor is a cheap handle onto shared storage; copying a Tensor aliases
// it. Use Clone() for a deep copy. Operations in ops.h record themselves on
// the thread's active Tape whenever one of their inputs requires a gradient.

#ifndef TWINTOWER_NUMERICS_TENSOR_H_
#define TWINTOWER_NUMERICS_TENSOR_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace twintower::numerics {

using Shape = std::vector<std::size_t>;

std::size_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

namespace internal {

struct Storage {
  Shape shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until the reverse pass touches it
  bool requires_grad = false;
};

}  // namespace internal

class Tensor {
 public:
  Tensor();
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

  static Tensor Zeros(Shape shape, bool requires_grad = false);
  static Tensor Filled(Shape shape, double value);
  static Tensor Scalar(double value);
  static Tensor Vector(std::vector<double> values);
  static Tensor Matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values);

  const Shape& shape() const { return impl_->shape; }
  std::size_t rank() const { return impl_->shape.size(); }
  std::size_t size() const { return impl_->values.size(); }
  // Leading extent for rank-2 tensors, 1 for vectors.
  std::size_t rows() const;
  // Trailing extent.
  std::size_t cols() const;

  std::span<const double> values() const { return impl_->values; }
  std::span<double> mutable_values() { return impl_->values; }
  double operator[](std::size_t i) const { return impl_->values[i]; }
  double at(std::size_t row, std::size_t col) const;
  double item() const;

  bool requires_grad() const { return impl_->requires_grad; }
  void set_requires_grad(bool flag) { impl_->requires_grad = flag; }

  // Gradient accumulated by the last reverse pass; all zeros if the tensor
  // was not reached.
  std::vector<double> grad() const;
  bool has_grad() const { return !impl_->grad.empty(); }
  void ZeroGrad();

  Tensor Clone() const;
  bool SameStorage(const Tensor& other) const { return impl_ == other.impl_; }

  const std::shared_ptr<internal::Storage>& storage() const { return impl_; }

 private:
  explicit Tensor(std::shared_ptr<internal::Storage> impl);
  friend Tensor WrapStorage(std::shared_ptr<internal::Storage> impl);

  std::shared_ptr<internal::Storage> impl_;
};

Tensor WrapStorage(std::shared_ptr<internal::Storage> impl);

// Bitwise equality of shape and values.
bool BitwiseEqual(const Tensor& a, const Tensor& b);

// Splits a tensor along its last axis into pieces of the given widths.
// Values only; not recorded on any tape.
std::vector<Tensor> SplitLastAxis(const Tensor& t,
                                  std::span<const std::size_t> widths);

}  // namespace twintower::numerics

#endif  // TWINTOWER_NUMERICS_TENSOR_H_
