// Copyright 2026 The histocr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "histocr/error_model.hpp"
#include "histocr/language_model.hpp"
#include "histocr/text.hpp"

namespace histocr {

// A trained corrector. correct() must be deterministic for a fixed model.
class Corrector {
 public:
  virtual ~Corrector() = default;
  virtual Text correct(TextView noisy) const = 0;
};

std::vector<Text> correct_lines(const Corrector& corrector, std::span<const Text> noisy,
                                unsigned jobs = 1);

// Fraction of lines whose correction equals gold exactly.
double validation_accuracy(const Corrector& corrector, const Corpus& corpus,
                           unsigned jobs = 1);

struct NoisyChannelHyper {
  int ngram_order = 3;
  double channel_weight = 1.0;
  int beam_width = 4;
  int max_edits_per_word = 2;
  double smoothing_k = 0.1;

  // Throws ArgumentError on out-of-range values.
  void validate() const;

  // Keys: ngram_order, channel_weight, beam_width, max_edits_per_word,
  // smoothing_k. Missing keys keep their defaults; unknown keys throw.
  static NoisyChannelHyper from_assignment(const std::map<std::string, std::string>& values);
  std::map<std::string, std::string> to_assignment() const;

  friend bool operator==(const NoisyChannelHyper&, const NoisyChannelHyper&) = default;
};

// Noisy-channel word corrector. Each space-separated token is replaced by a
// vocabulary word within max_edits_per_word edits (or kept); a sentence-level
// beam maximizes
//   sum of char n-gram log P_lm + channel_weight * sum log P_channel(noisy | candidate).
// The channel scores a unit-cost alignment of candidate against noisy token:
// Match and Substitute use the learned confusion counts per gold character,
// Insert and Delete fall back to the smoothing floor.
class NoisyChannelModel final : public Corrector {
 public:
  struct Decoded {
    Text text;
    double score = 0.0;
  };

  static NoisyChannelModel train(const Corpus& train, const NoisyChannelHyper& hyper,
                                 unsigned jobs = 1);

  Text correct(TextView noisy) const override { return decode(noisy).text; }

  // Best hypothesis found by beams of every width up to `beam_width`
  // (defaults to the trained hyperparameter), so the achieved score never
  // drops when the width grows.
  Decoded decode(TextView noisy, int beam_width = 0) const;

  // A single beam search of exactly `beam_width`.
  Decoded beam_search(TextView noisy, int beam_width) const;

  // Vocabulary words within max_edits_per_word of `word`, plus `word` itself,
  // in lexicographic order.
  std::vector<Text> candidates(TextView word) const;

  double channel_log_prob(TextView noisy_word, TextView candidate) const;

  // Full objective of reading `noisy` as `candidate`; both must have the same
  // number of space-separated tokens.
  double score(TextView noisy, TextView candidate) const;

  const NoisyChannelHyper& hyper() const { return hyper_; }
  const ErrorProfile& channel() const { return channel_; }
  const CharNgramModel& language_model() const { return lm_; }
  const std::vector<Text>& vocabulary() const { return vocabulary_; }
  bool in_vocabulary(TextView word) const;

  // Directory with hyper.cfg, vocabulary.txt, ngrams.tsv and channel.tsv.
  void save(const std::filesystem::path& dir) const;
  static NoisyChannelModel load(const std::filesystem::path& dir);

 private:
  void index_vocabulary();
  void index_channel();
  double match_log_prob(char32_t gold) const;
  double substitute_log_prob(char32_t gold, char32_t error) const;
  double gap_log_prob(char32_t c) const;

  NoisyChannelHyper hyper_;
  CharNgramModel lm_;
  ErrorProfile channel_;
  std::vector<Text> vocabulary_;
  std::map<std::size_t, std::vector<std::size_t>> by_length_;  // length -> vocabulary indices
  std::map<std::pair<char32_t, char32_t>, std::uint64_t> sub_counts_;  // (gold, error)
  std::map<char32_t, std::uint64_t> errors_per_gold_;
};

std::vector<Text> tokenize_spaces(TextView line);

}  // namespace histocr
