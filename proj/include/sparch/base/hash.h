// sparch/base/hash.h

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

#ifndef SPARCH_BASE_HASH_H_
#define SPARCH_BASE_HASH_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace sparch {

/// Incremental 64-bit FNV-1a. Used for model fingerprints and config hashes,
/// so the byte order fed in must be platform-independent.
class Fnv1a64 {
 public:
  Fnv1a64() = default;
  void Update(std::span<const unsigned char> bytes);
  void Update(std::string_view text);
  void Update(std::span<const double> values);  // little-endian IEEE bytes
  void Update(uint64_t value);
  uint64_t Digest() const { return state_; }

 private:
  uint64_t state_ = 14695981039346656037ull;
};

std::string HexDigest(uint64_t digest);

/// splitmix64 finalizer; derives independent seeds from (base, salt).
uint64_t MixSeed(uint64_t base, uint64_t salt);

}  // namespace sparch

#endif  // SPARCH_BASE_HASH_H_
