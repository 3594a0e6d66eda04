// sparch/eval/wer-buckets.h

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

#ifndef SPARCH_EVAL_WER_BUCKETS_H_
#define SPARCH_EVAL_WER_BUCKETS_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sparch {

inline constexpr int kNumWerBuckets = 10;

/// [0,0.1), [0.1,0.2), ..., [0.9,1.0]; WER above 1 lands in the last bucket.
int WerBucketIndex(double wer);

struct WerBucket {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
  std::vector<std::optional<double>> accuracy;  // per retriever; nullopt when n == 0
  double midpoint() const { return 0.5 * (lo + hi); }
};

struct WerBucketReport {
  std::vector<std::string> retrievers;
  std::vector<WerBucket> buckets;
};

/// hits[r][q] is retriever r's top-K hit for question q.
WerBucketReport MakeWerBucketReport(std::span<const double> question_wer,
                                    const std::vector<std::string> &retrievers,
                                    const std::vector<std::vector<bool>> &hits);

/// <dir>/wer-buckets.jsonl, <dir>/wer-buckets.txt and one
/// <dir>/wer-<retriever>.csv (midpoint,accuracy) per retriever.
void WriteWerBucketReport(const WerBucketReport &report, const std::filesystem::path &dir);
std::string FormatWerBucketTable(const WerBucketReport &report);

}  // namespace sparch

#endif  // SPARCH_EVAL_WER_BUCKETS_H_
