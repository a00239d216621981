// Copyright 2026 The Carryover Authors.
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

#ifndef CARRYOVER_ERROR_H_
#define CARRYOVER_ERROR_H_

#include <stdexcept>
#include <string>

namespace carryover {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes or lengths do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A scalar argument lies outside its admissible interval.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A precondition on the call itself was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

// NaN or Inf encountered where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Training or evaluation data is unusable (empty split, missing labels).
class DataError : public Error {
 public:
  using Error::Error;
};

// An external corpus could not be read; the message names the file.
class IngestionError : public Error {
 public:
  using Error::Error;
};

}  // namespace carryover

#endif  // CARRYOVER_ERROR_H_
