// Copyright 2026 the qtree-ladder authors
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

#ifndef QTL_ERROR_H_
#define QTL_ERROR_H_

#include <stdexcept>
#include <string>

namespace qtl {

// Malformed or truncated input in one of the container formats
// (Y4M, QLDM luma dumps, QLDP depth-map streams, model files).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a model cannot be calibrated (no usable samples).
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qtl

#endif  // QTL_ERROR_H_
