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

#ifndef TWINTOWER_ERROR_H_
#define TWINTOWER_ERROR_H_

#include <stdexcept>
#include <string>

namespace twintower {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Bad user input: missing or malformed files, invalid configuration,
// mismatched checkpoints. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// Training diverged (non-finite loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace twintower

#endif  // TWINTOWER_ERROR_H_
