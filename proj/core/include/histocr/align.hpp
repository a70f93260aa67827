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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "histocr/text.hpp"

namespace histocr {

// Orientation throughout: the first sequence is the gold (reference) line and
// the second is the "other" line (OCR output, injected noise, or a corrector's
// hypothesis). Insert means a character present only in the other line.
enum class EditKind : std::uint8_t { Match, Substitute, Insert, Delete };

class EditOp {
 public:
  static EditOp match(char32_t c) { return {EditKind::Match, c, c}; }
  static EditOp substitute(char32_t gold, char32_t other);
  static EditOp insert(char32_t other) { return {EditKind::Insert, std::nullopt, other}; }
  static EditOp erase(char32_t gold) { return {EditKind::Delete, gold, std::nullopt}; }

  EditKind kind() const { return kind_; }
  std::optional<char32_t> gold_char() const { return gold_; }
  std::optional<char32_t> other_char() const { return other_; }

  bool consumes_gold() const { return kind_ != EditKind::Insert; }
  bool consumes_other() const { return kind_ != EditKind::Delete; }

  friend bool operator==(const EditOp&, const EditOp&) = default;

 private:
  EditOp(EditKind kind, std::optional<char32_t> gold, std::optional<char32_t> other)
      : kind_(kind), gold_(gold), other_(other) {}

  EditKind kind_;
  std::optional<char32_t> gold_;
  std::optional<char32_t> other_;
};

struct Alignment {
  std::vector<EditOp> ops;
  std::int64_t score = 0;

  std::size_t edit_count() const;
};

struct Scoring {
  int match = 0;
  int mismatch = -1;
  int gap = -1;

  // Unit costs: the optimal score is exactly -levenshtein.
  static constexpr Scoring unit() { return {0, -1, -1}; }
  // The textbook +1/-1/-1 weights. Not Levenshtein-consistent.
  static constexpr Scoring classic() { return {1, -1, -1}; }
};

std::size_t levenshtein(TextView a, TextView b);

// Levenshtein distance if it is <= bound, otherwise bound + 1. Runs in a band
// of width 2*bound+1.
std::size_t bounded_levenshtein(TextView a, TextView b, std::size_t bound);

// Optimal global score only, in linear space.
std::int64_t global_alignment_score(TextView gold, TextView other, Scoring scoring = {});

// Global alignment with full traceback. On ties the traceback prefers the
// diagonal (Match/Substitute), then Delete, then Insert. Throws ArgumentError
// when mismatch or gap is not strictly below match.
Alignment needleman_wunsch(TextView gold, TextView other, Scoring scoring = {});

// Applies the ops to `gold`, producing the other line. Throws ArgumentError if
// the ops do not fit the gold line.
Text replay(TextView gold, const std::vector<EditOp>& ops);
Text other_side(const std::vector<EditOp>& ops);
Text gold_side(const std::vector<EditOp>& ops);

// Compact debugging form: space-separated `M`, `S:g:o`, `I:o`, `D:g` tokens.
// Characters are escaped as \: \\ \s \t \n. `M` carries no character, so
// parsing needs the gold line to restore Match ops; throws ArgumentError if
// the script does not fit it.
std::string format_edit_script(const std::vector<EditOp>& ops);
std::vector<EditOp> parse_edit_script(std::string_view script, TextView gold);

struct WordAlignmentCounts {
  std::size_t n_words = 0;
  std::size_t substituted = 0;
  std::size_t inserted = 0;
  std::size_t deleted = 0;

  std::size_t errors() const { return substituted + inserted + deleted; }
  WordAlignmentCounts& operator+=(const WordAlignmentCounts& o);
  friend bool operator==(const WordAlignmentCounts&, const WordAlignmentCounts&) = default;
};

// Character-level counts from an alignment; n_words holds the gold length.
WordAlignmentCounts char_alignment_counts(const Alignment& alignment);

// Space, tab and . , : ; ! ? ' " ( )
const std::u32string& default_delimiters();

// Word-level counts for the two sides of a character alignment. Each side is
// split into maximal non-delimiter runs and the word sequences are aligned
// with unit costs (same tie-break order as needleman_wunsch), so two words
// merged by a lost space count as one substitution plus one deletion.
// Throws ArgumentError for an empty delimiter set.
WordAlignmentCounts word_align_counts(const Alignment& alignment,
                                      std::u32string_view delimiters = default_delimiters());

// Splits a line into maximal non-delimiter runs.
std::vector<Text> split_words(TextView line, std::u32string_view delimiters = default_delimiters());

}  // namespace histocr
