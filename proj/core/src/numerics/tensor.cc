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

#include "twintower/numerics/tensor.h"

#include <cstring>
#include <numeric>
#include <sstream>
#include <utility>

#include "twintower/error.h"

namespace twintower::numerics {

std::size_t NumElements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out << ',';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

Tensor::Tensor() : impl_(std::make_shared<internal::Storage>()) {
  impl_->shape = Shape{0};
}

Tensor::Tensor(Shape shape, std::vector<double> values, bool requires_grad)
    : impl_(std::make_shared<internal::Storage>()) {
  if (shape.empty()) throw ShapeError("tensor rank must be at least 1");
  for (std::size_t extent : shape) {
    if (extent == 0) {
      throw ShapeError("tensor extents must be positive: " +
                       ShapeToString(shape));
    }
  }
  if (NumElements(shape) != values.size()) {
    throw ShapeError("tensor shape " + ShapeToString(shape) +
                     " does not match " + std::to_string(values.size()) +
                     " values");
  }
  impl_->shape = std::move(shape);
  impl_->values = std::move(values);
  impl_->requires_grad = requires_grad;
}

Tensor::Tensor(std::shared_ptr<internal::Storage> impl)
    : impl_(std::move(impl)) {}

Tensor WrapStorage(std::shared_ptr<internal::Storage> impl) {
  return Tensor(std::move(impl));
}

Tensor Tensor::Zeros(Shape shape, bool requires_grad) {
  std::size_t n = NumElements(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0), requires_grad);
}

Tensor Tensor::Filled(Shape shape, double value) {
  std::size_t n = NumElements(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value));
}

Tensor Tensor::Scalar(double value) { return Tensor({1}, {value}); }

Tensor Tensor::Vector(std::vector<double> values) {
  std::size_t n = values.size();
  return Tensor({n}, std::move(values));
}

Tensor Tensor::Matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> values) {
  return Tensor({rows, cols}, std::move(values));
}

std::size_t Tensor::rows() const {
  return rank() >= 2 ? impl_->shape[rank() - 2] : 1;
}

std::size_t Tensor::cols() const {
  return rank() == 0 ? 0 : impl_->shape.back();
}

double Tensor::at(std::size_t row, std::size_t col) const {
  return impl_->values[row * cols() + col];
}

double Tensor::item() const {
  if (size() != 1) {
    throw ShapeError("item() on tensor of shape " + ShapeToString(shape()));
  }
  return impl_->values[0];
}

std::vector<double> Tensor::grad() const {
  if (impl_->grad.empty()) return std::vector<double>(size(), 0.0);
  return impl_->grad;
}

void Tensor::ZeroGrad() { impl_->grad.clear(); }

Tensor Tensor::Clone() const {
  return Tensor(impl_->shape, impl_->values, impl_->requires_grad);
}

bool BitwiseEqual(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return false;
  if (a.size() == 0) return true;
  return std::memcmp(a.values().data(), b.values().data(),
                     a.size() * sizeof(double)) == 0;
}

std::vector<Tensor> SplitLastAxis(const Tensor& t,
                                  std::span<const std::size_t> widths) {
  std::size_t total = std::accumulate(widths.begin(), widths.end(),
                                      std::size_t{0});
  if (total != t.cols()) {
    throw ShapeError("split widths sum to " + std::to_string(total) +
                     " but last axis is " + std::to_string(t.cols()));
  }
  std::size_t outer = t.size() / t.cols();
  std::vector<Tensor> parts;
  std::size_t offset = 0;
  for (std::size_t w : widths) {
    Shape shape = t.shape();
    shape.back() = w;
    std::vector<double> values(outer * w);
    for (std::size_t r = 0; r < outer; ++r) {
      std::memcpy(values.data() + r * w,
                  t.values().data() + r * t.cols() + offset,
                  w * sizeof(double));
    }
    parts.emplace_back(std::move(shape), std::move(values));
    offset += w;
  }
  return parts;
}

}  // namespace twintower::numerics
