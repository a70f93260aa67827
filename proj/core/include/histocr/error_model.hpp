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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "histocr/align.hpp"
#include "histocr/random.hpp"
#include "histocr/text.hpp"

namespace histocr {

// One confusion pair. error_char is what the OCR produced, correct_char what
// the gold text holds.
struct ConfusionEntry {
  char32_t error_char = 0;
  char32_t correct_char = 0;
  double probability = 0.0;

  friend bool operator==(const ConfusionEntry&, const ConfusionEntry&) = default;
};

class ErrorProfile {
 public:
  ErrorProfile() = default;

  // Validates every entry (error != correct, probability in (0,1]) and sorts
  // by descending probability, ties by (correct_char, error_char).
  ErrorProfile(std::vector<ConfusionEntry> entries, std::uint64_t total_substitutions,
               std::string source_label);

  const std::vector<ConfusionEntry>& entries() const { return entries_; }
  std::uint64_t total_substitutions() const { return total_; }
  const std::string& source_label() const { return label_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  std::optional<double> probability(char32_t error_char, char32_t correct_char) const;

  // Substitution count behind an entry: round(probability * total).
  std::uint64_t count(const ConfusionEntry& entry) const;

 private:
  std::vector<ConfusionEntry> entries_;
  std::uint64_t total_ = 0;
  std::string label_;
};

struct ProfileLoad {
  ErrorProfile profile;
  // One message per rejected row (e.g. a character paired with itself).
  std::vector<std::string> warnings;
};

// TSV `error_char<TAB>correct_char<TAB>probability`. Lines of the form
// `# key=value` carry total_substitutions and source.
void write_profile(const ErrorProfile& profile, std::ostream& out);
void write_profile(const ErrorProfile& profile, const std::filesystem::path& path);
ProfileLoad read_profile(std::istream& in, std::string source_label = {});
ProfileLoad read_profile(const std::filesystem::path& path);

// Aligns every (gold, noisy) pair with unit costs and tallies Substitute ops
// as (error=noisy char, correct=gold char).
ErrorProfile extract_confusions(const Corpus& corpus, unsigned jobs = 1);

enum class ErrorType : std::uint8_t {
  CharReplacement,
  CharSwap,
  MissingSpace,
  RedundantSpace,
  RedundantChar,
  MissingChar,
};
inline constexpr std::size_t kErrorTypeCount = 6;

std::string_view error_type_name(ErrorType type);

struct ErrorTypeHistogram {
  std::array<std::uint64_t, kErrorTypeCount> counts{};

  std::uint64_t operator[](ErrorType t) const { return counts[static_cast<std::size_t>(t)]; }
  std::uint64_t& operator[](ErrorType t) { return counts[static_cast<std::size_t>(t)]; }
  std::uint64_t total() const;
  ErrorTypeHistogram& operator+=(const ErrorTypeHistogram& o);
};

ErrorTypeHistogram classify_errors(const Alignment& alignment);
ErrorTypeHistogram classify_corpus(const Corpus& corpus, unsigned jobs = 1);

// TSV `error_type<TAB>count<TAB>fraction`.
void write_histogram(const ErrorTypeHistogram& histogram, std::ostream& out);

struct NoiseConfig {
  double noise_ratio = 0.2;
  CharFrequencyTable char_freq;
  std::optional<ErrorProfile> profile;
  std::uint64_t seed = 42;
  int max_swaps = 2;
  // Off: only the period-specific replacement step runs.
  bool generic_noise = true;

  // Throws ArgumentError unless 0 < noise_ratio < 1, max_swaps >= 1 and, with
  // generic noise on, the frequency table is non-empty.
  void validate() const;
};

// Which steps fired for one line.
struct InjectionEvents {
  bool deleted = false;
  bool inserted = false;
  int swaps = 0;
  int replacements = 0;
};

struct InjectionStats {
  std::uint64_t lines = 0;
  std::uint64_t deletion_events = 0;
  std::uint64_t insertion_events = 0;
  std::uint64_t swap_events = 0;
  std::uint64_t swaps = 0;
  std::uint64_t replacements = 0;

  void add(const InjectionEvents& e);
  InjectionStats& operator+=(const InjectionStats& o);
};

// One pass of the generation procedure over a single gold line:
//   1. with probability NR delete one character, weighted by char_freq;
//   2. with probability NR insert a char_freq-sampled character at a
//      uniform position;
//   3. with probability NR perform k adjacent swaps, k uniform in
//      {1..max_swaps};
//   4. for each profile entry in order, if the line holds correct_char and a
//      fresh draw < NR * EP, replace one uniformly chosen occurrence with
//      error_char.
Text inject_line(TextView line, const NoiseConfig& config, RandomStream& rng,
                 InjectionEvents* events = nullptr);

// Stream seeded for line `index` of a corpus under `seed`.
EngineStream line_stream(std::uint64_t seed, std::uint64_t index);

// Pair i = (inject_line(gold[i], rng_i), gold[i]) with rng_i derived from
// (seed, first_index + i). Output does not depend on `jobs`.
Corpus inject_corpus(std::span<const Text> gold_lines, const NoiseConfig& config,
                     unsigned jobs = 1, InjectionStats* stats = nullptr,
                     std::uint64_t first_index = 0);

struct SweepRow {
  double noise_ratio = 0.0;
  double score = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Reported, never enforced.
  bool non_decreasing = true;
};

using CorpusEvaluator = std::function<double(const Corpus&)>;

// Re-injects the same lines at each ratio with the base seed and scores each
// corpus with `evaluator`.
SweepResult noise_sweep(std::span<const Text> gold_lines, const NoiseConfig& base,
                        std::span<const double> ratios, const CorpusEvaluator& evaluator,
                        unsigned jobs = 1);

}  // namespace histocr
