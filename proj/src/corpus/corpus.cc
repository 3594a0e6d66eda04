// corpus/corpus.cc

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

#include "sparch/corpus/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "sparch/base/error.h"
#include "sparch/base/hash.h"
#include "sparch/base/random.h"

namespace sparch {

namespace {

enum SeedStream : uint64_t { kLayout = 1, kQuestions = 2, kFeatures = 3, kChannel = 4, kRates = 5 };

std::string NumberedId(const char *prefix, int n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, n);
  return buf;
}

// k distinct values from [lo, lo + n).
std::vector<int> SampleDistinct(int lo, int n, int k, Rng *rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), lo);
  for (int i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng->Index(n - i)]);
  pool.resize(k);
  return pool;
}

}  // namespace

const char *SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "?";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  SPARCH_ERR(kData) << "unknown split '" << name << "'";
}

int CorpusConfig::VocabSize() const {
  return 1 + num_function_words + num_topics * words_per_topic + num_entities;
}

void CorpusConfig::Validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok) SPARCH_ERR(kConfig) << "infeasible corpus config: " << what;
  };
  require(num_topics >= 1 && words_per_topic >= 1, "need at least one topic with one word");
  require(num_function_words >= 0 && num_entities >= 0, "negative vocabulary block");
  require(VocabSize() >= 2, "vocabulary size must be at least 2");
  require(num_passages >= 1 && passages_per_document >= 1, "need passages");
  require(num_train >= 0 && num_dev >= 0 && num_test >= 0, "negative question count");
  const int total = num_train + num_dev + num_test;
  require(num_passages >= total, "every question needs its own gold passage");
  require(num_passages >= 2 * std::max({num_train, num_dev, num_test}),
          "passages must be at least twice the largest split");
  require(passage_length >= 1 && answer_length >= 1 && answer_length <= passage_length,
          "answer window must fit in a passage");
  require(passage_function_prob >= 0 && passage_topic_prob >= 0 &&
              passage_function_prob + passage_topic_prob <= 1.0,
          "passage token mixture must be a distribution");
  require(passage_function_prob == 0 || num_function_words >= 1, "function words requested but none exist");
  const bool uses_entities = passage_function_prob + passage_topic_prob < 1.0 || entity_cues > 0;
  require(!uses_entities || (entities_per_passage >= 1 && entities_per_passage <= num_entities),
          "entities_per_passage must be in [1, num_entities]");
  require(answer_cues >= 0 && answer_cues <= answer_length, "answer_cues exceeds answer_length");
  require(entity_cues >= 0 && entity_cues <= entities_per_passage, "entity_cues exceeds entities_per_passage");
  require(topic_cues >= 0, "negative topic_cues");
  require(answer_cues + entity_cues + topic_cues <= question_length, "cues exceed question length");
  require(question_length >= 1, "questions need tokens");
  require(answer_cues + entity_cues + topic_cues == question_length || num_function_words >= 1,
          "question filler needs function words");
  require(num_passage_speakers >= 1 && question_speakers_per_split >= 1, "need speakers");
  require(passage_duration_s > 0.0, "passage duration must be positive");
  require(frames_per_token >= 1 && feature_dim >= 1 && noise_std >= 0.0, "invalid featurizer settings");
  require(oov_fraction >= 0.0 && oov_fraction <= 1.0, "oov_fraction outside [0, 1]");
  require(rate_min >= 0.0 && rate_max >= 0.0 && rate_min <= rate_max && rate_max <= 1.0,
          "per-utterance rate range must satisfy 0 <= min <= max <= 1");
  ErrorChannelConfig ch;
  ch.sub_rate = sub_rate;
  ch.del_rate = del_rate;
  ch.ins_rate = ins_rate;
  ch.vocab_size = VocabSize();
  ch.Validate();
  require(rate_max == 0.0 || sub_rate + del_rate + ins_rate > 0.0,
          "per-utterance rates need non-zero sub:del:ins proportions");
}

int Corpus::PassageIndex(std::string_view id) const {
  auto it = passage_lookup.find(id);
  if (it == passage_lookup.end()) SPARCH_ERR(kData) << "unknown passage id " << id;
  return it->second;
}

int Corpus::GoldPassageIndex(int question_index) const {
  return PassageIndex(questions.at(question_index).gold_passage_id);
}

std::vector<int> Corpus::QuestionIndices(Split split) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(questions.size()); ++i)
    if (questions[i].split == split) out.push_back(i);
  return out;
}

void Corpus::BuildLookup() {
  passage_lookup.clear();
  for (int i = 0; i < static_cast<int>(passages.size()); ++i) {
    if (!passage_lookup.emplace(passages[i].id, i).second)
      SPARCH_ERR(kData) << "duplicate passage id " << passages[i].id;
  }
}

ErrorChannelConfig Corpus::ChannelFor(int ordinal) const {
  ErrorChannelConfig ch;
  ch.sub_rate = config.sub_rate;
  ch.del_rate = config.del_rate;
  ch.ins_rate = config.ins_rate;
  if (config.rate_max > 0.0) {
    Rng rng(MixSeed(MixSeed(config.seed, kRates), static_cast<uint64_t>(ordinal)));
    const double total = rng.Uniform(config.rate_min, config.rate_max);
    const double base = config.sub_rate + config.del_rate + config.ins_rate;
    ch.sub_rate = total * config.sub_rate / base;
    ch.del_rate = total * config.del_rate / base;
    ch.ins_rate = total * config.ins_rate / base;
  }
  ch.oov_token_ids = oov_token_ids;
  ch.vocab_size = config.VocabSize();
  ch.unk_id = 0;
  ch.seed = MixSeed(MixSeed(config.seed, kChannel), static_cast<uint64_t>(ordinal));
  return ch;
}

void ApplyChannel(Corpus *corpus) {
  const int np = static_cast<int>(corpus->passages.size());
  corpus->passage_transcripts.clear();
  corpus->question_transcripts.clear();
  for (int i = 0; i < np; ++i)
    corpus->passage_transcripts.push_back(
        CorruptTranscript(corpus->passages[i].tokens, corpus->ChannelFor(i)));
  for (int i = 0; i < static_cast<int>(corpus->questions.size()); ++i)
    corpus->question_transcripts.push_back(
        CorruptTranscript(corpus->questions[i].tokens, corpus->ChannelFor(np + i)));
}

Corpus GenerateCorpus(const CorpusConfig &config) {
  config.Validate();
  Corpus corpus;
  corpus.config = config;
  const int vocab = config.VocabSize();
  Rng layout(MixSeed(config.seed, kLayout));

  const int num_oov = static_cast<int>(std::lround(config.oov_fraction * config.num_entities));
  corpus.oov_token_ids = SampleDistinct(config.FirstEntity(), config.num_entities, num_oov, &layout);
  std::sort(corpus.oov_token_ids.begin(), corpus.oov_token_ids.end());

  auto function_word = [&](Rng *rng) { return 1 + rng->Index(config.num_function_words); };
  auto topic_word = [&](int topic, Rng *rng) {
    return config.FirstTopicWord() + topic * config.words_per_topic + rng->Index(config.words_per_topic);
  };

  // Passages, grouped into single-topic, single-speaker documents.
  std::vector<std::vector<int>> passage_entities(config.num_passages);
  int topic = 0, speaker = 0;
  for (int p = 0; p < config.num_passages; ++p) {
    const int document = p / config.passages_per_document;
    if (p % config.passages_per_document == 0) {
      topic = layout.Index(config.num_topics);
      speaker = layout.Index(config.num_passage_speakers);
    }
    Passage passage;
    passage.id = NumberedId("p", p, 5);
    passage.duration_s = config.passage_duration_s;
    passage.topic = topic;
    passage.speaker = speaker;
    passage.document = document;
    if (config.num_entities > 0 && config.entities_per_passage > 0)
      passage_entities[p] = SampleDistinct(config.FirstEntity(), config.num_entities,
                                           config.entities_per_passage, &layout);
    for (int t = 0; t < config.passage_length; ++t) {
      const double u = layout.Uniform();
      if (u < config.passage_function_prob)
        passage.tokens.push_back(function_word(&layout));
      else if (u < config.passage_function_prob + config.passage_topic_prob)
        passage.tokens.push_back(topic_word(topic, &layout));
      else
        passage.tokens.push_back(passage_entities[p][layout.Index(config.entities_per_passage)]);
    }
    corpus.passages.push_back(std::move(passage));
  }
  corpus.BuildLookup();

  // Questions: paraphrases of a distinct gold passage each.
  Rng qrng(MixSeed(config.seed, kQuestions));
  const int total_questions = config.num_train + config.num_dev + config.num_test;
  const std::vector<int> gold = SampleDistinct(0, config.num_passages, total_questions, &qrng);
  const double token_duration = config.passage_duration_s / config.passage_length;
  const Split splits[] = {Split::kTrain, Split::kDev, Split::kTest};
  const int counts[] = {config.num_train, config.num_dev, config.num_test};
  const int first_question_speaker = config.num_passage_speakers;
  int next = 0;
  for (int s = 0; s < 3; ++s) {
    for (int i = 0; i < counts[s]; ++i, ++next) {
      const Passage &passage = corpus.passages[gold[next]];
      Question q;
      q.id = NumberedId((std::string(SplitName(splits[s])) + "-").c_str(), i, 4);
      q.split = splits[s];
      q.gold_passage_id = passage.id;
      q.speaker = first_question_speaker + s * config.question_speakers_per_split +
                  qrng.Index(config.question_speakers_per_split);
      const int start = qrng.Index(config.passage_length - config.answer_length + 1);
      q.answer_span = {start * token_duration, (start + config.answer_length) * token_duration};
      for (int offset : SampleDistinct(0, config.answer_length, config.answer_cues, &qrng))
        q.answer_tokens.push_back(passage.tokens[start + offset]);
      q.tokens = q.answer_tokens;
      for (int e : SampleDistinct(0, config.entities_per_passage, config.entity_cues, &qrng))
        q.tokens.push_back(passage_entities[gold[next]][e]);
      for (int t = 0; t < config.topic_cues; ++t) q.tokens.push_back(topic_word(passage.topic, &qrng));
      while (static_cast<int>(q.tokens.size()) < config.question_length)
        q.tokens.push_back(function_word(&qrng));
      qrng.Shuffle(&q.tokens);
      corpus.questions.push_back(std::move(q));
    }
  }

  corpus.featurizer = MakeFeaturizer(vocab, config.frames_per_token, config.feature_dim,
                                     config.noise_std, MixSeed(config.seed, kFeatures));
  const int np = config.num_passages;
  for (int p = 0; p < np; ++p)
    corpus.passage_frames.push_back(Featurize(corpus.passages[p].tokens, corpus.featurizer,
                                              UtteranceSeed(corpus.featurizer, corpus.passages[p].speaker, p)));
  for (int i = 0; i < static_cast<int>(corpus.questions.size()); ++i)
    corpus.question_frames.push_back(
        Featurize(corpus.questions[i].tokens, corpus.featurizer,
                  UtteranceSeed(corpus.featurizer, corpus.questions[i].speaker, np + i)));
  // Features are stored as float32; keep the in-memory copy identical.
  for (auto *frames : {&corpus.passage_frames, &corpus.question_frames})
    for (FrameSequence &f : *frames)
      for (double &v : f.data) v = static_cast<float>(v);
  ApplyChannel(&corpus);
  return corpus;
}

}  // namespace sparch
