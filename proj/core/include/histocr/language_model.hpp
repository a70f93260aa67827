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
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "histocr/text.hpp"

namespace histocr {

inline constexpr char32_t kSentenceStart = U'\U0010FFFE';
inline constexpr char32_t kSentenceEnd = U'\U0010FFFF';

// Character n-gram language model with additive smoothing and no backoff:
//   P(c | h) = (C(h, c) + k) / (C(h) + k * V)
// where h is the previous order-1 characters (padded with kSentenceStart) and
// V counts the observed alphabet plus the end marker and one unknown slot.
class CharNgramModel {
 public:
  CharNgramModel() = default;
  CharNgramModel(int order, double smoothing_k);

  void add_sentence(TextView sentence);

  int order() const { return order_; }
  double smoothing_k() const { return k_; }
  std::size_t vocabulary_size() const { return alphabet_.size() + 2; }

  double log_prob(TextView history, char32_t next) const;

  // Log-probability of `text` following `history`; returns the updated
  // history (last order-1 characters) through `history_out` when non-null.
  double extend(const Text& history, TextView text, Text* history_out) const;
  double end_log_prob(const Text& history) const { return log_prob(history, kSentenceEnd); }
  Text start_history() const { return Text(static_cast<std::size_t>(order_ - 1), kSentenceStart); }

  double sentence_log_prob(TextView sentence) const;

  // Count of character c over all contexts.
  std::uint64_t unigram_count(char32_t c) const;
  std::uint64_t total_chars() const { return total_chars_; }
  std::size_t alphabet_size() const { return alphabet_.size(); }

  // TSV `context<TAB>char<TAB>count`, escaped.
  void save(const std::filesystem::path& path) const;
  static CharNgramModel load(const std::filesystem::path& path, int order, double smoothing_k);

  const std::unordered_map<Text, std::unordered_map<char32_t, std::uint64_t>>& counts() const {
    return counts_;
  }

 private:
  void add_count(const Text& context, char32_t c, std::uint64_t n);

  int order_ = 3;
  double k_ = 0.1;
  std::unordered_map<Text, std::unordered_map<char32_t, std::uint64_t>> counts_;
  std::unordered_map<Text, std::uint64_t> context_totals_;
  std::map<char32_t, std::uint64_t> unigrams_;
  std::map<char32_t, bool> alphabet_;
  std::uint64_t total_chars_ = 0;
};

}  // namespace histocr
