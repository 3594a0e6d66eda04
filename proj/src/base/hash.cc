// base/hash.cc

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

#include "sparch/base/hash.h"

#include <bit>
#include <cstdio>
#include <cstring>

namespace sparch {

void Fnv1a64::Update(std::span<const unsigned char> bytes) {
  for (unsigned char b : bytes) {
    state_ ^= b;
    state_ *= 1099511628211ull;
  }
}

void Fnv1a64::Update(std::string_view text) {
  Update(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char *>(text.data()), text.size()));
}

void Fnv1a64::Update(uint64_t value) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  Update(std::span<const unsigned char>(bytes, 8));
}

void Fnv1a64::Update(std::span<const double> values) {
  for (double v : values) Update(std::bit_cast<uint64_t>(v));
}

std::string HexDigest(uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

uint64_t MixSeed(uint64_t base, uint64_t salt) {
  uint64_t z = base + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace sparch
