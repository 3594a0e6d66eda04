// sparch/corpus/wer.h

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

#ifndef SPARCH_CORPUS_WER_H_
#define SPARCH_CORPUS_WER_H_

#include <span>

namespace sparch {

struct EditCounts {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int reference_length = 0;
  int errors() const { return substitutions + deletions + insertions; }
};

/// Unit-cost Levenshtein alignment of hyp against ref, recovered by
/// backtrace. On ties the backtrace prefers match/substitution, then
/// deletion, then insertion.
EditCounts AlignEditCounts(std::span<const int> reference, std::span<const int> hypothesis);

/// (S + D + I) / N. Throws kUndefined for an empty reference.
double WordErrorRate(std::span<const int> reference, std::span<const int> hypothesis);

}  // namespace sparch

#endif  // SPARCH_CORPUS_WER_H_
