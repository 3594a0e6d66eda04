// retrieval/index.cc

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

#include "sparch/retrieval/index.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <thread>

#include "sparch/base/error.h"
#include "sparch/numerics/tensor.h"

namespace sparch {

namespace {

const int kUnkOnly[] = {0};

std::span<const int> NonEmpty(const std::vector<int> &tokens) {
  // A transcript the channel deleted entirely is read as a lone unk.
  if (tokens.empty()) return kUnkOnly;
  return tokens;
}

// Rows of the result are fn(i) for i in [0, n), computed on up to
// num_threads workers.
Matrix EncodeRows(int n, int dim, int num_threads, const std::function<Tensor(int)> &fn) {
  Matrix out(n, dim);
  auto work = [&](int first, int step) {
    NoGradGuard no_grad;
    for (int i = first; i < n; i += step) {
      Tensor v = fn(i);
      if (static_cast<int>(v.size()) != dim) SPARCH_ERR(kDimension) << "encoder width changed";
      std::copy(v.data().begin(), v.data().end(), out.Row(i).begin());
    }
  };
  num_threads = std::clamp(num_threads, 1, std::max(1, n));
  if (num_threads == 1) {
    work(0, 1);
    return out;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(num_threads);
  for (int t = 0; t < num_threads; ++t)
    workers.emplace_back([&, t] {
      try {
        work(t, num_threads);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto &w : workers) w.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace

Utterance PassageUtterance(const Corpus &corpus, const RetrieverModel &model, int i) {
  const Passage &p = corpus.passages.at(i);
  if (model.input() == InputKind::kTokens) return {p.id, NonEmpty(corpus.passage_transcripts.at(i).tokens)};
  return {p.id, {}, &corpus.passage_frames.at(i)};
}

Utterance QuestionUtterance(const Corpus &corpus, const RetrieverModel &model, int i) {
  const Question &q = corpus.questions.at(i);
  if (model.input() == InputKind::kTokens)
    return {q.id, NonEmpty(corpus.question_transcripts.at(i).tokens)};
  return {q.id, {}, &corpus.question_frames.at(i)};
}

PassageIndex BuildIndex(std::vector<std::string> ids, Matrix vectors, std::string fingerprint) {
  if (ids.empty()) SPARCH_ERR(kEmptyInput) << "cannot index an empty passage set";
  if (static_cast<int>(ids.size()) != vectors.rows)
    SPARCH_ERR(kDimension) << ids.size() << " ids for " << vectors.rows << " vectors";
  std::vector<int> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ids[a] < ids[b]; });
  PassageIndex index;
  index.vectors = Matrix(vectors.rows, vectors.cols);
  index.encoder_fingerprint = std::move(fingerprint);
  for (size_t r = 0; r < order.size(); ++r) {
    if (r > 0 && ids[order[r]] == ids[order[r - 1]])
      SPARCH_ERR(kData) << "duplicate passage id " << ids[order[r]];
    index.ids.push_back(ids[order[r]]);
    std::copy(vectors.Row(order[r]).begin(), vectors.Row(order[r]).end(), index.vectors.Row(r).begin());
  }
  return index;
}

PassageIndex BuildIndex(const Corpus &corpus, const RetrieverModel &model, int num_threads) {
  const int n = static_cast<int>(corpus.passages.size());
  Matrix vectors = EncodeRows(n, model.config().encoder.dim, num_threads, [&](int i) {
    try {
      return model.EncodePassage(PassageUtterance(corpus, model, i));
    } catch (const Error &e) {
      SPARCH_ERR(kData) << "encoding passage " << corpus.passages[i].id << " failed: " << e.what();
    }
  });
  std::vector<std::string> ids;
  for (const Passage &p : corpus.passages) ids.push_back(p.id);
  return BuildIndex(std::move(ids), std::move(vectors), model.Fingerprint());
}

Matrix EncodeQuestions(const Corpus &corpus, const RetrieverModel &model,
                       std::span<const int> question_indices, int num_threads) {
  return EncodeRows(static_cast<int>(question_indices.size()), model.config().encoder.dim, num_threads,
                    [&](int i) {
                      return model.EncodeQuestion(QuestionUtterance(corpus, model, question_indices[i]));
                    });
}

std::vector<double> ScoreAll(const PassageIndex &index, std::span<const double> query) {
  if (static_cast<int>(query.size()) != index.dim())
    SPARCH_ERR(kDimension) << "query has " << query.size() << " dims, index has " << index.dim();
  std::vector<double> scores(index.size());
  for (int p = 0; p < index.size(); ++p) {
    const double *v = index.vectors.Row(p).data();
    double s = 0.0;
    for (size_t k = 0; k < query.size(); ++k) s += query[k] * v[k];
    scores[p] = s;
  }
  return scores;
}

std::vector<int> TopKIndices(std::span<const double> scores, int k) {
  if (k < 1) SPARCH_ERR(kConfig) << "K must be at least 1, got " << k;
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  const int depth = std::min<int>(k, static_cast<int>(order.size()));
  // Index order equals id order, so the lower position wins a tie.
  std::partial_sort(order.begin(), order.begin() + depth, order.end(), [&](int a, int b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  });
  order.resize(depth);
  return order;
}

SearchResult SearchTopK(const PassageIndex &index, std::span<const double> query, int k) {
  if (k < 1) SPARCH_ERR(kConfig) << "K must be at least 1, got " << k;
  const std::vector<double> scores = ScoreAll(index, query);
  SearchResult result;
  result.k = k;
  for (int p : TopKIndices(scores, k)) result.hits.push_back({index.ids[p], scores[p]});
  return result;
}

void SaveIndex(const PassageIndex &index, const std::filesystem::path &dir, const std::string &name) {
  std::filesystem::create_directories(dir);
  WriteMatrixFile(dir / (name + ".vecs"), index.vectors, MatrixPrecision::kFloat64);
  std::ofstream os(dir / (name + ".manifest"), std::ios::trunc);
  if (!os) SPARCH_ERR(kIo) << "cannot write " << dir / (name + ".manifest");
  os << index.encoder_fingerprint << "\n";
  for (const std::string &id : index.ids) os << id << "\n";
  if (!os) SPARCH_ERR(kIo) << "write failed for " << dir / (name + ".manifest");
}

PassageIndex LoadIndex(const std::filesystem::path &dir, const std::string &name,
                       const std::optional<std::string> &expected_fingerprint) {
  PassageIndex index;
  index.vectors = ReadMatrixFile(dir / (name + ".vecs"));
  std::ifstream is(dir / (name + ".manifest"));
  if (!is) SPARCH_ERR(kIo) << "cannot open " << dir / (name + ".manifest");
  if (!std::getline(is, index.encoder_fingerprint))
    SPARCH_ERR(kData) << "empty index manifest " << dir / (name + ".manifest");
  for (std::string line; std::getline(is, line);)
    if (!line.empty()) index.ids.push_back(line);
  if (index.size() != index.vectors.rows)
    SPARCH_ERR(kData) << "index manifest lists " << index.size() << " ids for " << index.vectors.rows
                      << " vectors";
  for (int i = 1; i < index.size(); ++i)
    if (!(index.ids[i - 1] < index.ids[i])) SPARCH_ERR(kData) << "index ids not sorted/unique near " << index.ids[i];
  if (expected_fingerprint && *expected_fingerprint != index.encoder_fingerprint)
    SPARCH_WARN << "index " << name << " was built by model " << index.encoder_fingerprint
                << ", querying with " << *expected_fingerprint;
  return index;
}

}  // namespace sparch
