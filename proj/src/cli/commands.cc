// cli/commands.cc

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

#include "sparch/cli/commands.h"

#include <Eigen/Core>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>

#include "json.hpp"
#include "sparch/corpus/corpus-io.h"
#include "sparch/corpus/wer.h"
#include "sparch/eval/metrics.h"
#include "sparch/eval/open-sqa.h"
#include "sparch/eval/wer-buckets.h"
#include "sparch/retrieval/ensemble.h"
#include "sparch/retrieval/index.h"
#include "sparch/trainer/checkpoint.h"
#include "sparch/trainer/trainer.h"

#ifndef SPARCH_VERSION
#define SPARCH_VERSION "0.0.0"
#endif

namespace sparch {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string UtcNow() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream OpenOut(const fs::path &path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc);
  if (!os) SPARCH_ERR(kIo) << "cannot open " << path << " for writing";
  return os;
}

void WriteJson(const fs::path &path, const ordered_json &doc) {
  std::ofstream os = OpenOut(path);
  os << doc.dump(2) << "\n";
  if (!os) SPARCH_ERR(kIo) << "write failed for " << path;
}

// Records what produced an artifact. Only started_at / finished_at vary
// between identical runs.
class RunManifest {
 public:
  RunManifest(std::string subcommand, const RunConfig &config)
      : subcommand_(std::move(subcommand)), config_(config), started_(UtcNow()) {}

  void Write(const fs::path &path, const std::string &artifact, const ordered_json &outputs = {}) const {
    ordered_json settings = config_.Settings();
    for (const char *k : {"paths.corpus", "paths.checkpoints", "paths.index", "paths.reports"}) settings.erase(k);
    char eigen[32];
    std::snprintf(eigen, sizeof(eigen), "%d.%d.%d", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
    ordered_json doc = {{"subcommand", subcommand_},
                        {"artifact", artifact},
                        {"profile", config_.profile},
                        {"seed", config_.seed},
                        {"config_hash", config_.Hash()},
                        {"versions", {{"sparch", SPARCH_VERSION}, {"eigen", eigen}, {"compiler", __VERSION__}}},
                        {"outputs", outputs.is_null() ? ordered_json::array() : outputs},
                        {"settings", settings},
                        {"started_at", started_},
                        {"finished_at", UtcNow()}};
    WriteJson(path, doc);
  }

 private:
  std::string subcommand_;
  const RunConfig &config_;
  std::string started_;
};

Corpus OpenCorpus(const RunConfig &config) {
  if (!fs::exists(config.paths.corpus / "corpus.json"))
    SPARCH_ERR(kIo) << "no corpus at " << config.paths.corpus << " (run gen-corpus first)";
  return LoadCorpus(config.paths.corpus);
}

fs::path CheckpointStem(const RunConfig &config, const std::string &name) { return config.paths.checkpoints / name; }

RetrieverModel OpenCheckpoint(const RunConfig &config, const std::string &name, CheckpointInfo *info = nullptr) {
  const fs::path stem = CheckpointStem(config, name);
  if (!fs::exists(fs::path(stem).concat(".json")))
    SPARCH_ERR(kIo) << "no checkpoint '" << name << "' in " << config.paths.checkpoints;
  return LoadCheckpoint(stem, info);
}

// Model plus its index; the index must have been built by this model.
struct Retriever {
  std::string name;
  RetrieverModel model;
  PassageIndex index;
};

Retriever OpenRetriever(const RunConfig &config, const std::string &name) {
  Retriever r{name, OpenCheckpoint(config, name), {}};
  if (!fs::exists(config.paths.index / (name + ".manifest")))
    SPARCH_ERR(kIo) << "no index '" << name << "' in " << config.paths.index << " (run index --model " << name
                    << ")";
  r.index = LoadIndex(config.paths.index, name);
  const std::string fp = r.model.Fingerprint();
  if (r.index.encoder_fingerprint != fp)
    SPARCH_ERR(kFingerprint) << "index '" << name << "' was built by model " << r.index.encoder_fingerprint
                             << " but checkpoint '" << name << "' is " << fp;
  return r;
}

int TopK(const RunConfig &config, const CommandOptions &options) { return options.k > 0 ? options.k : config.k; }

// Per-question archive scores, one row per question, columns in index order.
ScoreTable ScoreQuestions(const Corpus &corpus, const Retriever &r, std::span<const int> questions, int threads) {
  const Matrix qv = EncodeQuestions(corpus, r.model, questions, threads);
  ScoreTable table;
  table.passage_ids = r.index.ids;
  table.scores = Matrix(qv.rows, r.index.size());
  for (int i = 0; i < qv.rows; ++i) {
    const std::vector<double> s = ScoreAll(r.index, qv.Row(i));
    std::copy(s.begin(), s.end(), table.scores.Row(i).begin());
  }
  return table;
}

SearchResult RowTopK(const ScoreTable &table, int row, int k) {
  SearchResult result;
  result.k = k;
  const auto scores = table.scores.Row(row);
  for (int p : TopKIndices(scores, k)) result.hits.push_back({table.passage_ids[p], scores[p]});
  return result;
}

std::vector<int> GoldColumns(const Corpus &corpus, const ScoreTable &table, std::span<const int> questions) {
  std::map<std::string_view, int> column;
  for (size_t i = 0; i < table.passage_ids.size(); ++i) column[table.passage_ids[i]] = static_cast<int>(i);
  std::vector<int> out;
  for (int q : questions) {
    auto it = column.find(corpus.questions[q].gold_passage_id);
    if (it == column.end()) SPARCH_ERR(kData) << "gold passage of " << corpus.questions[q].id << " is not indexed";
    out.push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------- commands

void GenCorpus(const RunConfig &config, const CommandOptions &, std::ostream &out) {
  const fs::path dir = config.paths.corpus;
  if (fs::exists(dir) && !fs::is_empty(dir)) {
    if (!fs::exists(dir / "corpus.json"))
      SPARCH_ERR(kIo) << dir << " is not empty and holds no corpus; refusing to overwrite it";
    fs::remove_all(dir);
  }
  RunManifest manifest("gen-corpus", config);
  const Corpus corpus = GenerateCorpus(config.corpus);
  SaveCorpus(corpus, dir);
  double wer = 0.0;
  for (size_t i = 0; i < corpus.questions.size(); ++i)
    wer += WordErrorRate(corpus.questions[i].tokens, corpus.question_transcripts[i].tokens);
  wer /= static_cast<double>(corpus.questions.size());
  manifest.Write(dir / "run.json", "corpus", {"corpus.json", "manifest.jsonl", "transcripts", "features"});
  out << "corpus: " << corpus.passages.size() << " passages, " << corpus.QuestionIndices(Split::kTrain).size() << "/"
      << corpus.QuestionIndices(Split::kDev).size() << "/" << corpus.QuestionIndices(Split::kTest).size()
      << " train/dev/test questions, vocabulary " << corpus.vocab_size() << ", mean question WER " << wer << "\n";
}

void Train(const RunConfig &config, const std::string &name, const std::string &role, TrainResult result,
           const TrainConfig &train, const RunManifest &manifest, std::ostream &out) {
  const fs::path stem = CheckpointStem(config, name);
  SaveCheckpoint(stem, result.model, train,
                 {result.best_step, result.best_dev_topk, result.model.Fingerprint(), config.Hash(), role});
  manifest.Write(fs::path(stem).concat(".run.json"), name,
                 {name + ".params", name + ".json", name + ".log.jsonl"});
  out << role << " '" << name << "': best dev top-" << train.top_k << " " << result.best_dev_topk << " at step "
      << result.best_step << " of " << result.steps.size() << "\n";
}

void TrainTeacherCommand(const RunConfig &config, const CommandOptions &options, std::ostream &out) {
  const std::string name = options.name.empty() ? "teacher" : options.name;
  RunManifest manifest("train-teacher", config);
  const Corpus corpus = OpenCorpus(config);
  std::ofstream log = OpenOut(fs::path(CheckpointStem(config, name)).concat(".log.jsonl"));
  TrainConfig train = config.teacher;
  train.top_k = TopK(config, options);
  TrainResult result = TrainTeacher(corpus, config.model, train, &log);
  Train(config, name, "teacher", std::move(result), train, manifest, out);
}

void TrainStudentCommand(const RunConfig &config, const CommandOptions &options, std::ostream &out) {
  TrainConfig train = config.student;
  train.top_k = TopK(config, options);
  if (options.no_kd) train.alpha = train.beta = 0.0;
  const bool distill = train.alpha > 0.0 || train.beta > 0.0;
  std::string name = options.name;
  if (name.empty()) {
    name = config.student_input == InputKind::kTokens ? "cascading-student" : "student";
    if (!distill) name += "-nokd";
  }
  RunManifest manifest("train-student", config);
  const Corpus corpus = OpenCorpus(config);
  std::optional<RetrieverModel> teacher;
  if (distill) teacher = OpenCheckpoint(config, options.model.empty() ? "teacher" : options.model);
  RetrieverConfig model = config.model;
  model.input = config.student_input;
  std::ofstream log = OpenOut(fs::path(CheckpointStem(config, name)).concat(".log.jsonl"));
  TrainResult result = TrainStudent(corpus, teacher ? &*teacher : nullptr, model, train, &log);
  Train(config, name, "student", std::move(result), train, manifest, out);
}

void IndexCommand(const RunConfig &config, const CommandOptions &options, std::ostream &out) {
  const std::string name = options.model.empty() ? "teacher" : options.model;
  RunManifest manifest("index", config);
  const Corpus corpus = OpenCorpus(config);
  const RetrieverModel model = OpenCheckpoint(config, name);
  const PassageIndex index = BuildIndex(corpus, model, config.threads);
  SaveIndex(index, config.paths.index, name);
  manifest.Write(config.paths.index / (name + ".run.json"), name, {name + ".vecs", name + ".manifest"});
  out << "index '" << name << "': " << index.size() << " passages x " << index.dim() << " dims, model "
      << index.encoder_fingerprint << "\n";
}

void SearchCommand(const RunConfig &config, const CommandOptions &options, std::ostream &out) {
  if (options.question.empty()) SPARCH_ERR(kConfig) << "search needs --question <id>";
  const Corpus corpus = OpenCorpus(config);
  const Retriever r = OpenRetriever(config, options.model.empty() ? "student" : options.model);
  int q = -1;
  for (size_t i = 0; i < corpus.questions.size(); ++i)
    if (corpus.questions[i].id == options.question) q = static_cast<int>(i);
  if (q < 0) SPARCH_ERR(kData) << "unknown question id '" << options.question << "'";
  const std::vector<int> one{q};
  const Matrix qv = EncodeQuestions(corpus, r.model, one);
  const SearchResult result = SearchTopK(r.index, qv.Row(0), TopK(config, options));
  char buf[96];
  for (size_t i = 0; i < result.hits.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu\t%s\t%.6f\n", i + 1, result.hits[i].id.c_str(), result.hits[i].score);
    out << buf;
  }
}

void EvalCommand(const RunConfig &config, const CommandOptions &options, std::ostream &out) {
  const std::string name = options.model.empty() ? "student" : options.model;
  const Split split = ParseSplit(options.split);
  const int k = TopK(config, options);
  RunManifest manifest("eval", config);
  const Corpus corpus = OpenCorpus(config);
  const Retriever r = OpenRetriever(config, name);

  const std::vector<int> dev = corpus.QuestionIndices(Split::kDev);
  const std::vector<int> questions = corpus.QuestionIndices(split);
  if (questions.empty()) SPARCH_ERR(kEmptyInput) << "split " << options.split << " has no questions";
  const ScoreTable dev_table = ScoreQuestions(corpus, r, dev, config.threads);
  const ScoreTable table = ScoreQuestions(corpus, r, questions, config.threads);

  std::map<std::string, SearchResult> results;
  std::map<std::string, std::string> gold;
  std::vector<std::vector<AnswerCandidate>> candidates, dev_candidates;
  for (size_t i = 0; i < questions.size(); ++i) {
    const Question &q = corpus.questions[questions[i]];
    results[q.id] = RowTopK(table, static_cast<int>(i), k);
    gold[q.id] = q.gold_passage_id;
    candidates.push_back(ReadRetrieved(corpus, questions[i], results[q.id]));
  }
  for (size_t i = 0; i < dev.size(); ++i)
    dev_candidates.push_back(ReadRetrieved(corpus, dev[i], RowTopK(dev_table, static_cast<int>(i), k)));

  ordered_json accuracy = ordered_json::object();
  std::vector<int> depths;
  for (int d : {1, 5, 10, 20, 50, 100})
    if (d < k) depths.push_back(d);
  depths.push_back(k);
  for (int d : depths) accuracy["top_" + std::to_string(d)] = TopKAccuracy(results, gold, d).top_k_accuracy;

  const AnswerTuning tuning = TuneAnswerWeights(corpus, dev, dev_candidates);
  const AnswerWeights span_only{0.0, 1.0};
  const double ff1_tuned = MeanAnswerFf1(corpus, questions, candidates, tuning.best);
  const double ff1_span = MeanAnswerFf1(corpus, questions, candidates, span_only);
  const double ff1_gold = GoldPassageFf1(corpus, questions);

  const std::string stem = "eval-" + name + "-" + options.split;
  {
    std::ofstream os = OpenOut(config.paths.reports / (stem + ".jsonl"));
    for (size_t i = 0; i < questions.size(); ++i) {
      const Question &q = corpus.questions[questions[i]];
      const SearchResult &res = results[q.id];
      ordered_json rank = nullptr;
      for (size_t h = 0; h < res.hits.size(); ++h)
        if (res.hits[h].id == q.gold_passage_id) rank = h + 1;
      ordered_json answer = nullptr;
      if (auto pick = SelectAnswer(candidates[i], tuning.best)) {
        const AnswerCandidate &c = candidates[i][*pick];
        answer = {{"passage", c.passage_id},
                  {"start_s", c.span.start_s},
                  {"end_s", c.span.end_s},
                  {"ff1", Ff1(c.span, q.answer_span, c.passage_id == q.gold_passage_id)}};
      }
      os << ordered_json{{"question", q.id}, {"gold", q.gold_passage_id}, {"gold_rank", rank},
                         {"hit", !rank.is_null()}, {"answer", answer}}.dump()
         << "\n";
    }
  }
  ordered_json grid = ordered_json::array();
  for (const auto &[w, f] : tuning.grid) grid.push_back({{"w_r", w}, {"dev_ff1", f}});
  const ordered_json summary = {{"model", name},
                                {"split", options.split},
                                {"k", k},
                                {"num_questions", questions.size()},
                                {"accuracy", accuracy},
                                {"open_sqa",
                                 {{"weights", {{"w_r", tuning.best.w_r}, {"w_s", tuning.best.w_s}}},
                                  {"dev_ff1", tuning.best_ff1},
                                  {"ff1", ff1_tuned},
                                  {"ff1_span_only", ff1_span},
                                  {"ff1_gold_passage", ff1_gold},
                                  {"grid", grid}}}};
  WriteJson(config.paths.reports / (stem + ".json"), summary);
  std::ostringstream text;
  text << "model " << name << ", split " << options.split << ", " << questions.size() << " questions\n";
  char buf[128];
  for (const auto &[key, value] : accuracy.items()) {
    std::snprintf(buf, sizeof(buf), "%-22s %.4f\n", key.c_str(), value.get<double>());
    text << buf;
  }
  std::snprintf(buf, sizeof(buf), "%-22s %.4f (w_r=%.2f w_s=%.2f, tuned on dev)\n", "ff1", ff1_tuned,
                tuning.best.w_r, tuning.best.w_s);
  text << buf;
  std::snprintf(buf, sizeof(buf), "%-22s %.4f\n%-22s %.4f\n", "ff1_span_only", ff1_span, "ff1_gold_passage", ff1_gold);
  text << buf;
  OpenOut(config.paths.reports / (stem + ".txt")) << text.str();
  manifest.Write(config.paths.reports / (stem + ".run.json"), stem, {stem + ".jsonl", stem + ".json", stem + ".txt"});
  out << text.str();
}

void EnsembleCommand(const RunConfig &config, const CommandOptions &options, std::ostream &out) {
  const int k = TopK(config, options);
  RunManifest manifest("ensemble-tune", config);
  const Corpus corpus = OpenCorpus(config);
  const Retriever a = OpenRetriever(config, options.a);
  const Retriever b = OpenRetriever(config, options.b);
  if (a.index.ids != b.index.ids) SPARCH_ERR(kData) << "indices '" << a.name << "' and '" << b.name << "' differ";
  ordered_json splits = ordered_json::object();
  std::optional<EnsembleTuning> tuning;
  for (Split split : {Split::kDev, Split::kTest}) {
    const std::vector<int> qs = corpus.QuestionIndices(split);
    if (qs.empty()) continue;
    const ScoreTable ta = ScoreQuestions(corpus, a, qs, config.threads);
    const ScoreTable tb = ScoreQuestions(corpus, b, qs, config.threads);
    const std::vector<int> gold = GoldColumns(corpus, ta, qs);
    if (split == Split::kDev) tuning = TuneEnsembleWeights(ta, tb, gold, k);
    if (!tuning) SPARCH_ERR(kEmptyInput) << "ensemble tuning needs a non-empty dev split";
    splits[SplitName(split)] = {{a.name, EnsembleTopKAccuracy(ta, tb, {1.0, 0.0}, gold, k)},
                                {b.name, EnsembleTopKAccuracy(ta, tb, {0.0, 1.0}, gold, k)},
                                {"ensemble", EnsembleTopKAccuracy(ta, tb, tuning->best, gold, k)}};
  }
  if (!tuning) SPARCH_ERR(kEmptyInput) << "ensemble tuning needs a non-empty dev split";
  ordered_json grid = ordered_json::array();
  for (const auto &[w, acc] : tuning->grid) grid.push_back({{"w_a", w}, {"dev_accuracy", acc}});
  const std::string stem = "ensemble-" + a.name + "-" + b.name;
  WriteJson(config.paths.reports / (stem + ".json"),
            {{"a", a.name},
             {"b", b.name},
             {"k", k},
             {"weights", {{"w_a", tuning->best.w_a}, {"w_b", tuning->best.w_b}}},
             {"accuracy", splits},
             {"grid", grid}});
  std::ostringstream text;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "ensemble %s + %s, top-%d, w_a=%.2f w_b=%.2f\n", a.name.c_str(), b.name.c_str(), k,
                tuning->best.w_a, tuning->best.w_b);
  text << buf;
  std::snprintf(buf, sizeof(buf), "%-6s %12s %12s %12s\n", "split", a.name.c_str(), b.name.c_str(), "ensemble");
  text << buf;
  for (const auto &[split, acc] : splits.items()) {
    std::snprintf(buf, sizeof(buf), "%-6s %12.4f %12.4f %12.4f\n", split.c_str(), acc[a.name].get<double>(),
                  acc[b.name].get<double>(), acc["ensemble"].get<double>());
    text << buf;
  }
  OpenOut(config.paths.reports / (stem + ".txt")) << text.str();
  manifest.Write(config.paths.reports / (stem + ".run.json"), stem, {stem + ".json", stem + ".txt"});
  out << text.str();
}

void WerReportCommand(const RunConfig &config, const CommandOptions &options, std::ostream &out) {
  const int k = TopK(config, options);
  const Split split = ParseSplit(options.split);
  std::vector<std::string> names = options.retrievers;
  if (names.empty()) names = {"teacher", "student"};
  if (names.size() < 2) SPARCH_ERR(kConfig) << "wer-report compares at least two retrievers";
  RunManifest manifest("wer-report", config);
  const Corpus corpus = OpenCorpus(config);
  const std::vector<int> qs = corpus.QuestionIndices(split);
  if (qs.empty()) SPARCH_ERR(kEmptyInput) << "split " << options.split << " has no questions";
  std::vector<double> wer;
  for (int q : qs) wer.push_back(WordErrorRate(corpus.questions[q].tokens, corpus.question_transcripts[q].tokens));
  std::vector<std::vector<bool>> hits;
  for (const std::string &name : names) {
    const Retriever r = OpenRetriever(config, name);
    const ScoreTable table = ScoreQuestions(corpus, r, qs, config.threads);
    const std::vector<int> gold = GoldColumns(corpus, table, qs);
    std::vector<bool> h;
    for (size_t i = 0; i < qs.size(); ++i) {
      bool hit = false;
      for (int p : TopKIndices(table.scores.Row(static_cast<int>(i)), k)) hit = hit || p == gold[i];
      h.push_back(hit);
    }
    hits.push_back(std::move(h));
  }
  const WerBucketReport report = MakeWerBucketReport(wer, names, hits);
  const fs::path dir = config.paths.reports / ("wer-" + options.split);
  WriteWerBucketReport(report, dir);
  ordered_json outputs = {"wer-buckets.jsonl", "wer-buckets.txt"};
  for (const auto &n : names) outputs.push_back("wer-" + n + ".csv");
  manifest.Write(dir / "run.json", "wer-" + options.split, outputs);
  out << "top-" << k << " accuracy by question WER, split " << options.split << "\n" << FormatWerBucketTable(report);
}

}  // namespace

const std::vector<std::string> &SubcommandNames() {
  static const std::vector<std::string> names = {"gen-corpus", "train-teacher", "train-student", "index",
                                                 "search",     "eval",          "ensemble-tune", "wer-report"};
  return names;
}

void RunSubcommand(const std::string &name, const RunConfig &config, const CommandOptions &options,
                   std::ostream &out) {
  using Fn = void (*)(const RunConfig &, const CommandOptions &, std::ostream &);
  static const std::map<std::string, Fn> table = {
      {"gen-corpus", GenCorpus},        {"train-teacher", TrainTeacherCommand},
      {"train-student", TrainStudentCommand}, {"index", IndexCommand},
      {"search", SearchCommand},        {"eval", EvalCommand},
      {"ensemble-tune", EnsembleCommand}, {"wer-report", WerReportCommand}};
  auto it = table.find(name);
  if (it == table.end()) SPARCH_ERR(kConfig) << "unknown subcommand '" << name << "'";
  it->second(config, options, out);
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return 2;
    case ErrorKind::kIo:
      return 3;
    case ErrorKind::kDimension:
    case ErrorKind::kSequenceTooShort:
    case ErrorKind::kLength:
    case ErrorKind::kEmptyInput:
    case ErrorKind::kNonFinite:
    case ErrorKind::kUndefined:
    case ErrorKind::kData:
    case ErrorKind::kFingerprint:
      return 4;
    case ErrorKind::kDivergence:
      return 5;
  }
  return 6;
}

}  // namespace sparch
