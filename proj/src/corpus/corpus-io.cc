// corpus/corpus-io.cc

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

#include "sparch/corpus/corpus-io.h"

#include <fstream>

#include "sparch/base/error.h"
#include "sparch/base/hash.h"

namespace sparch {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    CorpusConfig, seed, num_passages, passages_per_document, num_train, num_dev, num_test,
    num_function_words, num_topics, words_per_topic, num_entities, entities_per_passage,
    oov_fraction, passage_length, passage_function_prob, passage_topic_prob, passage_duration_s,
    question_length, answer_length, answer_cues, entity_cues, topic_cues, num_passage_speakers,
    question_speakers_per_split, frames_per_token, feature_dim, noise_std, sub_rate, del_rate,
    ins_rate, rate_min, rate_max)

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ofstream OpenOut(const fs::path &path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) SPARCH_ERR(kIo) << "cannot open " << path << " for writing";
  return os;
}

std::vector<json> ReadJsonLines(const fs::path &path) {
  std::ifstream is(path);
  if (!is) SPARCH_ERR(kIo) << "cannot open " << path;
  std::vector<json> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception &e) {
      SPARCH_ERR(kData) << path << ":" << lineno << ": " << e.what();
    }
  }
  return out;
}

json TranscriptRecord(const std::string &id, const Transcript &t) {
  return {{"id", id}, {"tokens", t.tokens}, {"source_positions", t.source_positions}};
}

}  // namespace

json CorpusConfigToJson(const CorpusConfig &config) { return config; }

CorpusConfig CorpusConfigFromJson(const json &j) {
  const json defaults = CorpusConfig{};
  for (const auto &[key, value] : j.items())
    if (!defaults.contains(key)) SPARCH_ERR(kConfig) << "unknown corpus setting '" << key << "'";
  try {
    return j.get<CorpusConfig>();
  } catch (const json::exception &e) {
    SPARCH_ERR(kConfig) << "bad corpus config: " << e.what();
  }
}

void SaveCorpus(const Corpus &corpus, const fs::path &dir) {
  fs::create_directories(dir / "transcripts");
  fs::create_directories(dir / "features");
  {
    auto os = OpenOut(dir / "corpus.json");
    os << json{{"config", CorpusConfigToJson(corpus.config)},
               {"vocab_size", corpus.vocab_size()},
               {"oov_token_ids", corpus.oov_token_ids}}
              .dump(2)
       << "\n";
  }
  auto manifest = OpenOut(dir / "manifest.jsonl");
  for (const Passage &p : corpus.passages) {
    manifest << json{{"type", "passage"},   {"id", p.id},           {"tokens", p.tokens},
                     {"duration_s", p.duration_s}, {"topic", p.topic}, {"speaker", p.speaker},
                     {"document", p.document}}
                    .dump()
             << "\n";
  }
  for (const Question &q : corpus.questions) {
    manifest << json{{"type", "question"},
                     {"id", q.id},
                     {"split", SplitName(q.split)},
                     {"tokens", q.tokens},
                     {"gold_passage_id", q.gold_passage_id},
                     {"answer_span_s", {q.answer_span.start_s, q.answer_span.end_s}},
                     {"answer_tokens", q.answer_tokens},
                     {"speaker", q.speaker}}
                    .dump()
             << "\n";
  }
  if (!manifest) SPARCH_ERR(kIo) << "write failed for " << dir / "manifest.jsonl";

  auto pt = OpenOut(dir / "transcripts" / "passages.jsonl");
  for (size_t i = 0; i < corpus.passages.size(); ++i)
    pt << TranscriptRecord(corpus.passages[i].id, corpus.passage_transcripts[i]).dump() << "\n";
  auto qt = OpenOut(dir / "transcripts" / "questions.jsonl");
  for (size_t i = 0; i < corpus.questions.size(); ++i)
    qt << TranscriptRecord(corpus.questions[i].id, corpus.question_transcripts[i]).dump() << "\n";

  for (size_t i = 0; i < corpus.passages.size(); ++i)
    WriteMatrixFile(dir / "features" / (corpus.passages[i].id + ".feats"), corpus.passage_frames[i]);
  for (size_t i = 0; i < corpus.questions.size(); ++i)
    WriteMatrixFile(dir / "features" / (corpus.questions[i].id + ".feats"), corpus.question_frames[i]);
}

Corpus LoadCorpus(const fs::path &dir) {
  if (!fs::is_directory(dir)) SPARCH_ERR(kIo) << "corpus directory " << dir << " not found";
  Corpus corpus;
  std::ifstream header(dir / "corpus.json");
  if (!header) SPARCH_ERR(kIo) << "cannot open " << dir / "corpus.json";
  try {
    const json h = json::parse(header);
    corpus.config = CorpusConfigFromJson(h.at("config"));
    corpus.oov_token_ids = h.at("oov_token_ids").get<std::vector<int>>();
  } catch (const json::exception &e) {
    SPARCH_ERR(kData) << dir / "corpus.json" << ": " << e.what();
  }
  const CorpusConfig &c = corpus.config;
  corpus.featurizer = MakeFeaturizer(c.VocabSize(), c.frames_per_token, c.feature_dim, c.noise_std,
                                     MixSeed(c.seed, 3));

  try {
    for (const json &r : ReadJsonLines(dir / "manifest.jsonl")) {
      if (r.at("type") == "passage") {
        Passage p;
        p.id = r.at("id").get<std::string>();
        p.tokens = r.at("tokens").get<std::vector<int>>();
        p.duration_s = r.at("duration_s").get<double>();
        p.topic = r.at("topic").get<int>();
        p.speaker = r.at("speaker").get<int>();
        p.document = r.at("document").get<int>();
        corpus.passages.push_back(std::move(p));
      } else {
        Question q;
        q.id = r.at("id").get<std::string>();
        q.split = ParseSplit(r.at("split").get<std::string>());
        q.tokens = r.at("tokens").get<std::vector<int>>();
        q.gold_passage_id = r.at("gold_passage_id").get<std::string>();
        q.answer_span = {r.at("answer_span_s").at(0).get<double>(),
                         r.at("answer_span_s").at(1).get<double>()};
        q.answer_tokens = r.at("answer_tokens").get<std::vector<int>>();
        q.speaker = r.at("speaker").get<int>();
        corpus.questions.push_back(std::move(q));
      }
    }
    auto load_transcripts = [&](const fs::path &path, auto &items, std::vector<Transcript> *out) {
      std::vector<json> rows = ReadJsonLines(path);
      if (rows.size() != items.size())
        SPARCH_ERR(kData) << path << " has " << rows.size() << " records, expected " << items.size();
      for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].at("id") != items[i].id)
          SPARCH_ERR(kData) << path << ": record " << i << " is " << rows[i].at("id") << ", expected "
                            << items[i].id;
        out->push_back({rows[i].at("tokens").get<std::vector<int>>(),
                        rows[i].at("source_positions").get<std::vector<int>>()});
      }
    };
    load_transcripts(dir / "transcripts" / "passages.jsonl", corpus.passages, &corpus.passage_transcripts);
    load_transcripts(dir / "transcripts" / "questions.jsonl", corpus.questions,
                     &corpus.question_transcripts);
  } catch (const json::exception &e) {
    SPARCH_ERR(kData) << "malformed corpus record in " << dir << ": " << e.what();
  }
  for (const Passage &p : corpus.passages)
    corpus.passage_frames.push_back(ReadMatrixFile(dir / "features" / (p.id + ".feats")));
  for (const Question &q : corpus.questions)
    corpus.question_frames.push_back(ReadMatrixFile(dir / "features" / (q.id + ".feats")));
  corpus.BuildLookup();
  for (const Question &q : corpus.questions) corpus.PassageIndex(q.gold_passage_id);
  return corpus;
}

}  // namespace sparch
