// sparch/corpus/error-channel.h

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

#ifndef SPARCH_CORPUS_ERROR_CHANNEL_H_
#define SPARCH_CORPUS_ERROR_CHANNEL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sparch/base/random.h"

namespace sparch {

/// Token-level stand-in for an unsupervised recognizer.
struct ErrorChannelConfig {
  double sub_rate = 0.0;
  double del_rate = 0.0;
  double ins_rate = 0.0;
  /// Sorted ids that are never recognized; they always come out as unk.
  std::vector<int> oov_token_ids;
  int vocab_size = 2;
  int unk_id = 0;
  uint64_t seed = 0;

  /// Throws kConfig unless every rate is in [0,1] and their sum is <= 1.
  void Validate() const;
  bool IsOov(int token) const;
};

/// Channel output. source_positions[i] is the reference position that
/// produced tokens[i]; an inserted token reuses its left neighbour's.
struct Transcript {
  std::vector<int> tokens;
  std::vector<int> source_positions;
  bool operator==(const Transcript &) const = default;
};

/// One independent draw per input token: substitute (uniform over the
/// other non-unk ids), delete, keep and insert a uniform token after it, or
/// keep. OOV tokens become unk whatever the draw.
Transcript CorruptTranscript(std::span<const int> tokens, const ErrorChannelConfig &channel,
                             Rng *rng);
/// Same, with a generator seeded from channel.seed.
Transcript CorruptTranscript(std::span<const int> tokens, const ErrorChannelConfig &channel);

}  // namespace sparch

#endif  // SPARCH_CORPUS_ERROR_CHANNEL_H_
