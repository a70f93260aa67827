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
#include <span>
#include <string>
#include <string_view>

#include "histocr/align.hpp"
#include "histocr/text.hpp"

namespace histocr {

// Piecewise added-accuracy from two distances:
//   (lev_ocred - lev_fixed) / lev_ocred * 100  if lev_ocred >= lev_fixed
//   0                                          otherwise
// With lev_ocred == 0 the result is 100 when lev_fixed == 0 and 0 otherwise.
double acc_char_from_distances(std::uint64_t lev_ocred, std::uint64_t lev_fixed);

double acc_char(TextView gs, TextView ocred, TextView fixed);

// Corpus-level: distances are summed over units before the formula is applied.
double acc_char(std::span<const Text> gs, std::span<const Text> ocred,
                std::span<const Text> fixed);

// Word counts of `hypothesis` against `gold` over a unit-cost alignment.
WordAlignmentCounts word_counts(TextView gold, TextView hypothesis,
                                std::u32string_view delimiters = default_delimiters());
WordAlignmentCounts char_counts(TextView gold, TextView hypothesis);

// (I + S + D) / N. Throws StructuralError when N == 0.
double error_rate(const WordAlignmentCounts& counts);

double wer(TextView gold, TextView hypothesis,
           std::u32string_view delimiters = default_delimiters());
double wer(std::span<const Text> gold, std::span<const Text> hypothesis,
           std::u32string_view delimiters = default_delimiters());
double cer(TextView gold, TextView hypothesis);
double cer(std::span<const Text> gold, std::span<const Text> hypothesis);

// Fraction of hypothesis lines exactly equal to gold.
double sequence_accuracy(std::span<const Text> gold, std::span<const Text> hypothesis);

struct McNemarResult {
  double chi_square = 0.0;
  double p_value = 1.0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
  // Two-sided exact binomial p-value, present when b + c < 25.
  std::optional<double> exact_p_value;
};

// Continuity-corrected statistic (|b - c| - 1)^2 / (b + c) with the
// chi-square(1) tail as p-value. Throws StructuralError when b + c == 0.
McNemarResult mcnemar(std::uint64_t b, std::uint64_t c);

// Discordant counts of two correctors on per-line exact correctness:
// b = A right and B wrong, c = A wrong and B right.
McNemarResult mcnemar(std::span<const Text> gold, std::span<const Text> fixed_a,
                      std::span<const Text> fixed_b);

struct CorrectionEval {
  double acc_char = 0.0;
  double wer = 0.0;
  double cer = 0.0;
  double sequence_accuracy = 0.0;
  std::uint64_t lev_ocred = 0;
  std::uint64_t lev_fixed = 0;
  std::size_t units = 0;
  WordAlignmentCounts word_counts;
  WordAlignmentCounts char_counts;
};

// Throws StructuralError when the three inputs are not parallel.
CorrectionEval evaluate_corrector(std::span<const Text> gs, std::span<const Text> ocred,
                                  std::span<const Text> fixed, unsigned jobs = 1,
                                  std::u32string_view delimiters = default_delimiters());

inline constexpr std::string_view kAccCharColumn = "Character-based Accuracy Increase (in %)";
inline constexpr std::string_view kOneMinusWerColumn = "1-WER (in %)";
inline constexpr std::string_view kOneMinusCerColumn = "1-CER (in %)";

// Header + one row, tab-separated, Table-4 column names first.
std::string format_eval_tsv(const CorrectionEval& eval);
std::string format_eval_table(const CorrectionEval& eval);
std::string format_p_value(double p);

}  // namespace histocr
