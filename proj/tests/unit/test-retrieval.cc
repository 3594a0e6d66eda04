// tests/unit/test-retrieval.cc

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

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <numeric>

#include "doctest.h"
#include "sparch/base/error.h"
#include "sparch/retrieval/ensemble.h"
#include "sparch/retrieval/index.h"
#include "test-util.h"

namespace sparch {
namespace {

std::string Id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%05d", i);
  return buf;
}

PassageIndex RandomIndex(int n, int d, Rng *rng) {
  Matrix v(n, d);
  for (double &x : v.data) x = rng->Normal();
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back(Id(i));
  return BuildIndex(ids, v, "fp");
}

// Full scan, sort by (score desc, id asc), truncate.
std::vector<std::pair<std::string, double>> NaiveSearch(const PassageIndex &index, std::span<const double> q, int k) {
  std::vector<std::pair<std::string, double>> all;
  for (int p = 0; p < index.size(); ++p) {
    double s = 0.0;
    for (int j = 0; j < index.dim(); ++j) s += q[j] * index.vectors(p, j);
    all.emplace_back(index.ids[p], s);
  }
  std::sort(all.begin(), all.end(), [](const auto &a, const auto &b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  all.resize(std::min<size_t>(all.size(), k));
  return all;
}

TEST_CASE("orthonormal index and trivial searches") {
  Matrix eye(4, 4);
  for (int i = 0; i < 4; ++i) eye(i, i) = 1.0;
  PassageIndex index = BuildIndex({"p1", "p2", "p3", "p4"}, eye, "fp");
  const double q[] = {0, 0, 1, 0};
  SearchResult r = SearchTopK(index, q, 1);
  REQUIRE(r.hits.size() == 1);
  CHECK(r.hits[0].id == "p3");
  CHECK(r.hits[0].score == 1.0);

  SearchResult full = SearchTopK(index, q, 4);
  std::vector<std::string> ids;
  for (const auto &h : full.hits) ids.push_back(h.id);
  CHECK(ids == std::vector<std::string>{"p3", "p1", "p2", "p4"});  // zero-score ties by id
  CHECK(SearchTopK(index, q, 10).hits.size() == 4);

  Matrix one(1, 2);
  one(0, 0) = 0.5;
  PassageIndex single = BuildIndex({"only"}, one, "fp");
  const double q2[] = {1, 1};
  CHECK(SearchTopK(single, q2, 5).hits.at(0).id == "only");

  CHECK_THROWS_AS(SearchTopK(index, q, 0), Error);
  const double bad[] = {1, 2};
  CHECK_THROWS_AS(SearchTopK(index, bad, 1), Error);
}

TEST_CASE("build index sorts and rejects bad input") {
  Matrix v(3, 1);
  v.data = {3.0, 1.0, 2.0};
  PassageIndex index = BuildIndex({"c", "a", "b"}, v, "fp");
  CHECK(index.ids == std::vector<std::string>{"a", "b", "c"});
  CHECK(index.vectors.data == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_THROWS_AS(BuildIndex({"a", "a", "b"}, v, "fp"), Error);
  CHECK_THROWS_AS(BuildIndex({}, Matrix(0, 1), "fp"), Error);
}

TEST_CASE("search matches the naive full scan") {
  Rng rng(11);
  PassageIndex index = RandomIndex(1000, 16, &rng);
  int mismatches = 0;
  for (int k : {1, 5, 20}) {
    for (int t = 0; t < 50; ++t) {
      std::vector<double> q(16);
      for (double &x : q) x = rng.Normal();
      const SearchResult got = SearchTopK(index, q, k);
      const auto want = NaiveSearch(index, q, k);
      if (got.hits.size() != want.size()) ++mismatches;
      for (size_t i = 0; i < std::min(got.hits.size(), want.size()); ++i)
        mismatches += got.hits[i].id != want[i].first || got.hits[i].score != want[i].second;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("ties are broken by ascending id") {
  Matrix v(5, 1);
  v.data = {1.0, 2.0, 2.0, 1.0, 2.0};
  PassageIndex index = BuildIndex({"e", "d", "c", "b", "a"}, v, "fp");
  const double q[] = {1.0};
  std::vector<std::string> ids;
  for (const auto &h : SearchTopK(index, q, 5).hits) ids.push_back(h.id);
  CHECK(ids == std::vector<std::string>{"a", "c", "d", "b", "e"});
}

TEST_CASE("index save and load is lossless") {
  Rng rng(12);
  PassageIndex index = RandomIndex(50, 7, &rng);
  index.encoder_fingerprint = "abc123";
  const auto dir = std::filesystem::temp_directory_path() / "sparch-index-test";
  std::filesystem::remove_all(dir);
  SaveIndex(index, dir, "m");
  PassageIndex back = LoadIndex(dir, "m");
  CHECK(back.ids == index.ids);
  CHECK(back.encoder_fingerprint == "abc123");
  CHECK(std::memcmp(back.vectors.data.data(), index.vectors.data.data(), index.vectors.data.size() * sizeof(double)) ==
        0);
  CHECK_THROWS_AS(LoadIndex(dir, "missing"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("index from a model is deterministic across threads") {
  const Corpus corpus = GenerateCorpus(testing::TinyCorpusConfig(3));
  for (InputKind kind : {InputKind::kTokens, InputKind::kFrames}) {
    RetrieverModel model(testing::TinyRetrieverConfig(kind, corpus.vocab_size(), corpus.config.feature_dim));
    PassageIndex a = BuildIndex(corpus, model, 1);
    PassageIndex b = BuildIndex(corpus, model, 1);
    PassageIndex c = BuildIndex(corpus, model, 3);
    CHECK(a.size() == corpus.config.num_passages);
    CHECK(a.vectors == b.vectors);
    CHECK(a.vectors == c.vectors);
    CHECK(a.encoder_fingerprint == model.Fingerprint());
    const std::vector<int> qs = corpus.QuestionIndices(Split::kDev);
    CHECK(EncodeQuestions(corpus, model, qs, 1) == EncodeQuestions(corpus, model, qs, 2));
  }
}

std::vector<std::string> Ranking(const ScoreMap &m) {
  std::vector<std::pair<std::string, double>> v(m.begin(), m.end());
  std::stable_sort(v.begin(), v.end(), [](const auto &a, const auto &b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (const auto &p : v) out.push_back(p.first);
  return out;
}

TEST_CASE("ensemble scores") {
  Rng rng(13);
  ScoreMap a, b;
  for (int i = 0; i < 30; ++i) {
    a[Id(i)] = rng.Normal();
    b[Id(i)] = rng.Normal();
  }
  CHECK(Ranking(EnsembleScores(a, b, {1.0, 0.0})) == Ranking(a));
  CHECK(Ranking(EnsembleScores(a, a, {0.3, 0.9})) == Ranking(a));
  for (double c : {0.5, 3.0, 100.0})
    CHECK(Ranking(EnsembleScores(a, b, {0.3 * c, 0.7 * c})) == Ranking(EnsembleScores(a, b, {0.3, 0.7})));
  const ScoreMap mixed = EnsembleScores(a, b, {0.25, 0.75});
  for (const auto &[id, s] : mixed) CHECK(s == 0.25 * a[id] + 0.75 * b[id]);

  ScoreMap short_b = b;
  short_b.erase(Id(4));
  try {
    EnsembleScores(a, short_b, {0.5, 0.5});
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kData);
    CHECK(std::string(e.what()).find(Id(4)) != std::string::npos);
  }
  CHECK_THROWS_AS(EnsembleScores(a, b, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(EnsembleScores(a, b, {NAN, 1.0}), Error);
}

TEST_CASE("ensemble tuning") {
  Rng rng(14);
  const int nq = 40, np = 60;
  ScoreTable a{{}, Matrix(nq, np)}, zero{{}, Matrix(nq, np)};
  for (int p = 0; p < np; ++p) a.passage_ids.push_back(Id(p));
  zero.passage_ids = a.passage_ids;
  for (double &x : a.scores.data) x = rng.Normal();
  std::vector<int> gold(nq);
  for (int &g : gold) g = rng.Index(np);

  const double alone = EnsembleTopKAccuracy(a, zero, {1.0, 0.0}, gold, 5);
  EnsembleTuning t = TuneEnsembleWeights(a, zero, gold, 5);
  CHECK(t.best_accuracy == alone);
  CHECK(t.best.w_a > 0.0);  // every w_a > 0 ranks like A alone
  CHECK(t.grid.size() == 21);

  EnsembleTuning same = TuneEnsembleWeights(a, a, gold, 5);
  CHECK(same.best.w_a == 0.5);
  CHECK(same.best.w_b == 0.5);
  CHECK_THROWS_AS(TuneEnsembleWeights(a, a, {}, 5), Error);

  // Oracle: accuracy from an explicit ranking of the mixed scores.
  ScoreTable b{a.passage_ids, Matrix(nq, np)};
  for (double &x : b.scores.data) x = rng.Normal();
  int hits = 0;
  for (int q = 0; q < nq; ++q) {
    std::vector<double> mixed(np);
    for (int p = 0; p < np; ++p) mixed[p] = 0.3 * a.scores(q, p) + 0.7 * b.scores(q, p);
    for (int p : TopKIndices(mixed, 5)) hits += p == gold[q];
  }
  CHECK(EnsembleTopKAccuracy(a, b, {0.3, 0.7}, gold, 5) == static_cast<double>(hits) / nq);
}

}  // namespace
}  // namespace sparch
