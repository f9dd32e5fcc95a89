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

#ifndef QTL_RNG_H_
#define QTL_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace qtl {

// mt19937_64 with explicit value mappings. The engine's output sequence is
// fixed by the standard and the mappings below avoid the library-defined
// distribution adaptors, so draws reproduce bit for bit everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes two uniforms per draw.
  double next_normal() {
    double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  bool next_bernoulli(double p) { return next_unit() < p; }

 private:
  std::mt19937_64 eng_;
};

// splitmix64-style mixing for deriving independent stream seeds.
uint64_t mix64(uint64_t x);
uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0);

}  // namespace qtl

#endif  // QTL_RNG_H_
