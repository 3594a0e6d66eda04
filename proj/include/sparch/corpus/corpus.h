// sparch/corpus/corpus.h

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

#ifndef SPARCH_CORPUS_CORPUS_H_
#define SPARCH_CORPUS_CORPUS_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sparch/base/matrix.h"
#include "sparch/corpus/error-channel.h"
#include "sparch/corpus/featurizer.h"

namespace sparch {

enum class Split { kTrain, kDev, kTest };
const char *SplitName(Split split);
Split ParseSplit(std::string_view name);

struct TimeSpan {
  double start_s = 0.0;
  double end_s = 0.0;
  double length() const { return end_s - start_s; }
  bool operator==(const TimeSpan &) const = default;
};

struct Passage {
  std::string id;
  std::vector<int> tokens;
  double duration_s = 40.0;
  int topic = 0;
  int speaker = 0;
  int document = 0;
};

struct Question {
  std::string id;
  Split split = Split::kTrain;
  std::vector<int> tokens;
  std::string gold_passage_id;
  TimeSpan answer_span;  // seconds into the gold passage
  /// Question tokens copied from the answer window of the gold passage.
  std::vector<int> answer_tokens;
  int speaker = 0;
};

/// Knobs for the generator. Vocabulary layout: id 0 is unk, then function
/// words, then num_topics blocks of topic words, then the entity pool.
struct CorpusConfig {
  uint64_t seed = 0;
  int num_passages = 2000;
  int passages_per_document = 4;
  int num_train = 500;
  int num_dev = 100;
  int num_test = 150;

  int num_function_words = 20;
  int num_topics = 20;
  int words_per_topic = 10;
  int num_entities = 200;
  int entities_per_passage = 4;
  double oov_fraction = 0.2;

  int passage_length = 24;
  double passage_function_prob = 0.3;
  double passage_topic_prob = 0.4;  // remainder: the passage's entities
  double passage_duration_s = 40.0;

  int question_length = 10;
  int answer_length = 3;
  int answer_cues = 2;  // tokens copied from the answer window
  int entity_cues = 2;  // other entities of the gold passage
  int topic_cues = 3;   // drawn from the gold topic, not from the passage
  int num_passage_speakers = 60;
  int question_speakers_per_split = 30;

  int frames_per_token = 12;
  int feature_dim = 64;
  double noise_std = 0.1;

  double sub_rate = 0.12;
  double del_rate = 0.05;
  double ins_rate = 0.03;
  /// When rate_max > 0, every utterance draws its total error rate
  /// uniformly from [rate_min, rate_max] and splits it in the
  /// sub:del:ins proportions above.
  double rate_min = 0.0;
  double rate_max = 0.0;

  int VocabSize() const;
  int FirstTopicWord() const { return 1 + num_function_words; }
  int FirstEntity() const { return 1 + num_function_words + num_topics * words_per_topic; }
  void Validate() const;
};

struct Corpus {
  CorpusConfig config;
  std::vector<int> oov_token_ids;  // sorted
  FeaturizerConfig featurizer;

  std::vector<Passage> passages;    // sorted by id
  std::vector<Question> questions;  // train, then dev, then test
  std::vector<Transcript> passage_transcripts;
  std::vector<Transcript> question_transcripts;
  std::vector<FrameSequence> passage_frames;
  std::vector<FrameSequence> question_frames;

  int vocab_size() const { return config.VocabSize(); }
  /// Index into `passages`; throws kData for unknown ids.
  int PassageIndex(std::string_view id) const;
  int GoldPassageIndex(int question_index) const;
  std::vector<int> QuestionIndices(Split split) const;
  /// Channel settings for utterance `ordinal` (passages first, then questions).
  ErrorChannelConfig ChannelFor(int ordinal) const;

  // Rebuilt by BuildLookup() after loading or generation.
  std::map<std::string, int, std::less<>> passage_lookup;
  void BuildLookup();
};

/// Deterministic in config.seed. Throws kConfig for infeasible settings.
Corpus GenerateCorpus(const CorpusConfig &config);

/// Recomputes transcripts (e.g. under a different channel) in place.
void ApplyChannel(Corpus *corpus);

}  // namespace sparch

#endif  // SPARCH_CORPUS_CORPUS_H_
