// corpus/error-channel.cc

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

#include "sparch/corpus/error-channel.h"

#include <algorithm>

#include "sparch/base/error.h"

namespace sparch {

void ErrorChannelConfig::Validate() const {
  for (double r : {sub_rate, del_rate, ins_rate})
    if (!(r >= 0.0 && r <= 1.0)) SPARCH_ERR(kConfig) << "channel rate " << r << " outside [0, 1]";
  if (sub_rate + del_rate + ins_rate > 1.0 + 1e-12)
    SPARCH_ERR(kConfig) << "channel rates sum to " << sub_rate + del_rate + ins_rate << " > 1";
  if (vocab_size < 2) SPARCH_ERR(kConfig) << "channel vocabulary must have at least 2 ids";
  if (!std::is_sorted(oov_token_ids.begin(), oov_token_ids.end()))
    SPARCH_ERR(kConfig) << "oov_token_ids must be sorted";
}

bool ErrorChannelConfig::IsOov(int token) const {
  return std::binary_search(oov_token_ids.begin(), oov_token_ids.end(), token);
}

namespace {

// Uniform over non-unk ids other than `avoid` (pass -1 to allow all).
int RandomToken(const ErrorChannelConfig &ch, int avoid, Rng *rng) {
  std::vector<int> skip{ch.unk_id};
  if (avoid >= 0 && avoid < ch.vocab_size && avoid != ch.unk_id) skip.push_back(avoid);
  std::sort(skip.begin(), skip.end());
  const int choices = ch.vocab_size - static_cast<int>(skip.size());
  if (choices <= 0) return ch.unk_id;
  int id = rng->Index(choices);
  for (int s : skip)
    if (id >= s) ++id;
  return id;
}

}  // namespace

Transcript CorruptTranscript(std::span<const int> tokens, const ErrorChannelConfig &ch, Rng *rng) {
  ch.Validate();
  Transcript out;
  out.tokens.reserve(tokens.size() + tokens.size() / 4 + 1);
  out.source_positions.reserve(out.tokens.capacity());
  const double sub_end = ch.sub_rate;
  const double del_end = sub_end + ch.del_rate;
  const double ins_end = del_end + ch.ins_rate;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const int pos = static_cast<int>(i);
    const double u = rng->Uniform();
    if (ch.IsOov(tokens[i])) {
      out.tokens.push_back(ch.unk_id);
      out.source_positions.push_back(pos);
      continue;
    }
    if (u < sub_end) {
      out.tokens.push_back(RandomToken(ch, tokens[i], rng));
      out.source_positions.push_back(pos);
    } else if (u < del_end) {
      // dropped
    } else if (u < ins_end) {
      out.tokens.push_back(tokens[i]);
      out.source_positions.push_back(pos);
      out.tokens.push_back(RandomToken(ch, -1, rng));
      out.source_positions.push_back(pos);
    } else {
      out.tokens.push_back(tokens[i]);
      out.source_positions.push_back(pos);
    }
  }
  return out;
}

Transcript CorruptTranscript(std::span<const int> tokens, const ErrorChannelConfig &channel) {
  Rng rng(channel.seed);
  return CorruptTranscript(tokens, channel, &rng);
}

}  // namespace sparch
