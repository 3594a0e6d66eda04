// corpus/wer.cc

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

#include "sparch/corpus/wer.h"

#include <algorithm>
#include <vector>

#include "sparch/base/error.h"

namespace sparch {

EditCounts AlignEditCounts(std::span<const int> ref, std::span<const int> hyp) {
  const size_t n = ref.size(), m = hyp.size();
  const size_t width = m + 1;
  thread_local std::vector<int> cost;
  cost.assign((n + 1) * width, 0);
  for (size_t i = 0; i <= n; ++i) cost[i * width] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) cost[j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const int diag = cost[(i - 1) * width + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const int del = cost[(i - 1) * width + j] + 1;
      const int ins = cost[i * width + j - 1] + 1;
      cost[i * width + j] = std::min({diag, del, ins});
    }
  }

  EditCounts counts;
  counts.reference_length = static_cast<int>(n);
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const int here = cost[i * width + j];
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (cost[(i - 1) * width + j - 1] + (same ? 0 : 1) == here) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[(i - 1) * width + j] + 1 == here) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

double WordErrorRate(std::span<const int> reference, std::span<const int> hypothesis) {
  if (reference.empty()) SPARCH_ERR(kUndefined) << "WER is undefined for an empty reference";
  const EditCounts counts = AlignEditCounts(reference, hypothesis);
  return static_cast<double>(counts.errors()) / static_cast<double>(counts.reference_length);
}

}  // namespace sparch
