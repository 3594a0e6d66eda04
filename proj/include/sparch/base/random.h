// sparch/base/random.h

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

#ifndef SPARCH_BASE_RANDOM_H_
#define SPARCH_BASE_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace sparch {

/// Seeded generator with platform-stable distributions. The standard
/// distribution classes are implementation-defined, which would break
/// byte-identical corpora across toolchains, so only the engine is reused.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  /// Uniform in [0, 1).
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Uniform integer in [0, n).
  int Index(int n);
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  template <typename T>
  void Shuffle(std::vector<T> *items) {
    for (int i = static_cast<int>(items->size()) - 1; i > 0; --i)
      std::swap((*items)[i], (*items)[Index(i + 1)]);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sparch

#endif  // SPARCH_BASE_RANDOM_H_
