// eval/wer-buckets.cc

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

#include "sparch/eval/wer-buckets.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sparch/base/error.h"

namespace sparch {

using nlohmann::ordered_json;

int WerBucketIndex(double wer) {
  if (!(wer >= 0.0)) SPARCH_ERR(kData) << "WER must be a non-negative number, got " << wer;
  const int b = static_cast<int>(std::floor(wer * kNumWerBuckets + 1e-9));
  return std::min(b, kNumWerBuckets - 1);
}

WerBucketReport MakeWerBucketReport(std::span<const double> question_wer, const std::vector<std::string> &retrievers,
                                    const std::vector<std::vector<bool>> &hits) {
  if (hits.size() != retrievers.size())
    SPARCH_ERR(kDimension) << hits.size() << " hit lists for " << retrievers.size() << " retrievers";
  for (size_t r = 0; r < hits.size(); ++r)
    if (hits[r].size() != question_wer.size())
      SPARCH_ERR(kDimension) << "retriever " << retrievers[r] << " has " << hits[r].size() << " hits for "
                             << question_wer.size() << " questions";
  WerBucketReport report;
  report.retrievers = retrievers;
  std::vector<std::vector<int>> correct(kNumWerBuckets, std::vector<int>(retrievers.size(), 0));
  report.buckets.resize(kNumWerBuckets);
  for (int b = 0; b < kNumWerBuckets; ++b) {
    report.buckets[b].lo = static_cast<double>(b) / kNumWerBuckets;
    report.buckets[b].hi = static_cast<double>(b + 1) / kNumWerBuckets;
  }
  for (size_t q = 0; q < question_wer.size(); ++q) {
    const int b = WerBucketIndex(question_wer[q]);
    ++report.buckets[b].n;
    for (size_t r = 0; r < retrievers.size(); ++r) correct[b][r] += hits[r][q];
  }
  for (int b = 0; b < kNumWerBuckets; ++b) {
    WerBucket &bucket = report.buckets[b];
    for (size_t r = 0; r < retrievers.size(); ++r) {
      if (bucket.n == 0)
        bucket.accuracy.push_back(std::nullopt);
      else
        bucket.accuracy.push_back(static_cast<double>(correct[b][r]) / bucket.n);
    }
  }
  return report;
}

std::string FormatWerBucketTable(const WerBucketReport &report) {
  std::ostringstream os;
  char buf[64];
  os << "wer_bucket      n";
  for (const auto &name : report.retrievers) {
    std::snprintf(buf, sizeof(buf), " %10s", name.c_str());
    os << buf;
  }
  os << "\n";
  for (const WerBucket &b : report.buckets) {
    std::snprintf(buf, sizeof(buf), "[%.1f,%.1f%c %5d", b.lo, b.hi, b.hi >= 1.0 ? ']' : ')', b.n);
    os << buf;
    for (const auto &acc : b.accuracy) {
      if (acc)
        std::snprintf(buf, sizeof(buf), " %10.4f", *acc);
      else
        std::snprintf(buf, sizeof(buf), " %10s", "-");
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

namespace {

std::ofstream OpenOut(const std::filesystem::path &path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) SPARCH_ERR(kIo) << "cannot open " << path << " for writing";
  return os;
}

}  // namespace

void WriteWerBucketReport(const WerBucketReport &report, const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) SPARCH_ERR(kIo) << "cannot create " << dir << ": " << ec.message();
  {
    std::ofstream os = OpenOut(dir / "wer-buckets.jsonl");
    for (const WerBucket &b : report.buckets) {
      ordered_json acc = ordered_json::object();
      for (size_t r = 0; r < report.retrievers.size(); ++r)
        acc[report.retrievers[r]] = b.accuracy[r] ? ordered_json(*b.accuracy[r]) : ordered_json(nullptr);
      os << ordered_json{{"lo", b.lo}, {"hi", b.hi}, {"midpoint", b.midpoint()}, {"n", b.n}, {"accuracy", acc}}.dump()
         << "\n";
    }
  }
  OpenOut(dir / "wer-buckets.txt") << FormatWerBucketTable(report);
  for (size_t r = 0; r < report.retrievers.size(); ++r) {
    std::ofstream os = OpenOut(dir / ("wer-" + report.retrievers[r] + ".csv"));
    os << "midpoint,accuracy\n";
    char buf[64];
    for (const WerBucket &b : report.buckets) {
      std::snprintf(buf, sizeof(buf), "%.2f,", b.midpoint());
      os << buf;
      if (b.accuracy[r]) {
        std::snprintf(buf, sizeof(buf), "%.6f", *b.accuracy[r]);
        os << buf;
      }
      os << "\n";
    }
    if (!os) SPARCH_ERR(kIo) << "write failed for retriever " << report.retrievers[r];
  }
}

}  // namespace sparch
