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
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace histocr {

// Lines are handled as sequences of Unicode code points so that alignment and
// edit distance operate on characters rather than UTF-8 bytes.
using Text = std::u32string;
using TextView = std::u32string_view;

Text decode_utf8(std::string_view utf8);
std::string encode_utf8(TextView text);

// NFC composition, tab -> space, other line-break characters -> space,
// trailing whitespace stripped. Idempotent.
Text normalize_line(std::string_view utf8);
Text normalize_line(TextView text);

bool is_whitespace(char32_t c);

struct SentencePair {
  Text noisy;
  Text gold;
  std::size_t id = 0;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

struct Corpus {
  std::string name;
  std::vector<SentencePair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }

  // Builds a corpus from parallel line lists; ids are assigned 0..n-1.
  static Corpus from_lines(std::string name, std::span<const Text> noisy,
                           std::span<const Text> gold);
};

// Two side-by-side files, line i of each forms pair i.
Corpus load_parallel_corpus(const std::filesystem::path& noisy_path,
                            const std::filesystem::path& gold_path);

// Single TSV file with `noisy<TAB>gold` per line.
Corpus load_tsv_corpus(const std::filesystem::path& tsv_path);

void write_parallel_corpus(const Corpus& corpus,
                           const std::filesystem::path& noisy_path,
                           const std::filesystem::path& gold_path);

// Streams a plain corpus one normalized, non-blank line at a time.
class PlainCorpusReader {
 public:
  explicit PlainCorpusReader(const std::filesystem::path& path);

  // Returns false at end of input.
  bool next(Text& line);

  std::size_t lines_read() const { return emitted_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string buffer_;
  std::size_t emitted_ = 0;
};

// Materializes a plain corpus; throws StructuralError when no non-blank line
// exists.
std::vector<Text> load_plain_corpus(const std::filesystem::path& gold_path);

void write_lines(std::span<const Text> lines, const std::filesystem::path& path);

class CharFrequencyTable {
 public:
  CharFrequencyTable() = default;

  // Counts are converted to relative frequencies. Throws StructuralError if
  // every count is zero.
  static CharFrequencyTable from_counts(const std::map<char32_t, std::uint64_t>& counts);

  double frequency(char32_t c) const;
  bool contains(char32_t c) const { return freq_.contains(c); }
  double min_frequency() const { return min_; }
  std::size_t size() const { return freq_.size(); }
  bool empty() const { return freq_.empty(); }

  // Entries ordered by code point.
  const std::vector<std::pair<char32_t, double>>& entries() const { return ordered_; }

  // Inverse-CDF lookup: maps u in [0,1) to a character.
  char32_t sample(double u) const;

 private:
  std::map<char32_t, double> freq_;
  std::vector<std::pair<char32_t, double>> ordered_;
  std::vector<double> cumulative_;
  double min_ = 0.0;
};

// Incremental counter for corpora too large to materialize.
class CharCounter {
 public:
  void add(TextView line);
  void merge(const CharCounter& other);
  const std::map<char32_t, std::uint64_t>& counts() const { return counts_; }
  CharFrequencyTable table() const { return CharFrequencyTable::from_counts(counts_); }

 private:
  std::map<char32_t, std::uint64_t> counts_;
};

// Whitespace is excluded from the counts.
CharFrequencyTable build_char_frequency_table(std::span<const Text> lines);

// Deterministic shuffled partition; train receives round(fraction * N) pairs.
// Pair order inside each partition follows the input order and ids are
// re-assigned densely from 0.
std::pair<Corpus, Corpus> split_train_valid(const Corpus& corpus, double train_fraction,
                                            std::uint64_t seed);

}  // namespace histocr
