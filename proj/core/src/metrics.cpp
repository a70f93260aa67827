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

#include "histocr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "histocr/error.hpp"
#include "histocr/parallel.hpp"

namespace histocr {

namespace {

void require_parallel(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw StructuralError(std::string(what) + ": inputs are not parallel (" + std::to_string(a) +
                          " vs " + std::to_string(b) + " units)");
  }
}

}  // namespace

double acc_char_from_distances(std::uint64_t lev_ocred, std::uint64_t lev_fixed) {
  if (lev_ocred == 0) return lev_fixed == 0 ? 100.0 : 0.0;
  if (lev_ocred < lev_fixed) return 0.0;
  return static_cast<double>(lev_ocred - lev_fixed) / static_cast<double>(lev_ocred) * 100.0;
}

double acc_char(TextView gs, TextView ocred, TextView fixed) {
  return acc_char_from_distances(levenshtein(gs, ocred), levenshtein(gs, fixed));
}

double acc_char(std::span<const Text> gs, std::span<const Text> ocred, std::span<const Text> fixed) {
  require_parallel(gs.size(), ocred.size(), "acc_char");
  require_parallel(gs.size(), fixed.size(), "acc_char");
  std::uint64_t lev_ocred = 0, lev_fixed = 0;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    lev_ocred += levenshtein(gs[i], ocred[i]);
    lev_fixed += levenshtein(gs[i], fixed[i]);
  }
  return acc_char_from_distances(lev_ocred, lev_fixed);
}

WordAlignmentCounts word_counts(TextView gold, TextView hypothesis, std::u32string_view delimiters) {
  return word_align_counts(needleman_wunsch(gold, hypothesis), delimiters);
}

WordAlignmentCounts char_counts(TextView gold, TextView hypothesis) {
  return char_alignment_counts(needleman_wunsch(gold, hypothesis));
}

double error_rate(const WordAlignmentCounts& counts) {
  if (counts.n_words == 0) throw StructuralError("error rate undefined: reference has no units");
  return static_cast<double>(counts.errors()) / static_cast<double>(counts.n_words);
}

double wer(TextView gold, TextView hypothesis, std::u32string_view delimiters) {
  return error_rate(word_counts(gold, hypothesis, delimiters));
}

double wer(std::span<const Text> gold, std::span<const Text> hypothesis,
           std::u32string_view delimiters) {
  require_parallel(gold.size(), hypothesis.size(), "wer");
  WordAlignmentCounts total;
  for (std::size_t i = 0; i < gold.size(); ++i) total += word_counts(gold[i], hypothesis[i], delimiters);
  return error_rate(total);
}

double cer(TextView gold, TextView hypothesis) { return error_rate(char_counts(gold, hypothesis)); }

double cer(std::span<const Text> gold, std::span<const Text> hypothesis) {
  require_parallel(gold.size(), hypothesis.size(), "cer");
  WordAlignmentCounts total;
  for (std::size_t i = 0; i < gold.size(); ++i) total += char_counts(gold[i], hypothesis[i]);
  return error_rate(total);
}

double sequence_accuracy(std::span<const Text> gold, std::span<const Text> hypothesis) {
  require_parallel(gold.size(), hypothesis.size(), "sequence_accuracy");
  if (gold.empty()) throw StructuralError("sequence accuracy of an empty corpus");
  std::size_t exact = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) exact += gold[i] == hypothesis[i] ? 1 : 0;
  return static_cast<double>(exact) / static_cast<double>(gold.size());
}

namespace {

// Two-sided exact binomial test with p = 1/2.
double exact_binomial_p(std::uint64_t b, std::uint64_t c) {
  const std::uint64_t n = b + c;
  const std::uint64_t k = std::min(b, c);
  double tail = 0.0;
  for (std::uint64_t i = 0; i <= k; ++i) {
    tail += std::exp(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(i) + 1) -
                     std::lgamma(static_cast<double>(n - i) + 1) - static_cast<double>(n) * std::log(2.0));
  }
  return std::min(1.0, 2.0 * tail);
}

}  // namespace

McNemarResult mcnemar(std::uint64_t b, std::uint64_t c) {
  if (b + c == 0) throw StructuralError("McNemar test needs at least one discordant pair");
  McNemarResult r;
  r.b = b;
  r.c = c;
  const double diff = std::fabs(static_cast<double>(b) - static_cast<double>(c)) - 1.0;
  r.chi_square = diff * diff / static_cast<double>(b + c);
  // Survival function of chi-square with one degree of freedom.
  r.p_value = std::erfc(std::sqrt(r.chi_square / 2.0));
  if (b + c < 25) r.exact_p_value = exact_binomial_p(b, c);
  return r;
}

McNemarResult mcnemar(std::span<const Text> gold, std::span<const Text> fixed_a,
                      std::span<const Text> fixed_b) {
  require_parallel(gold.size(), fixed_a.size(), "mcnemar");
  require_parallel(gold.size(), fixed_b.size(), "mcnemar");
  std::uint64_t b = 0, c = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool a_ok = fixed_a[i] == gold[i];
    const bool b_ok = fixed_b[i] == gold[i];
    if (a_ok && !b_ok) ++b;
    if (!a_ok && b_ok) ++c;
  }
  return mcnemar(b, c);
}

CorrectionEval evaluate_corrector(std::span<const Text> gs, std::span<const Text> ocred,
                                  std::span<const Text> fixed, unsigned jobs,
                                  std::u32string_view delimiters) {
  require_parallel(gs.size(), ocred.size(), "evaluate");
  require_parallel(gs.size(), fixed.size(), "evaluate");
  if (gs.empty()) throw StructuralError("evaluate: empty corpus");

  struct Unit {
    std::uint64_t lev_ocred = 0, lev_fixed = 0;
    WordAlignmentCounts words, chars;
    bool exact = false;
  };
  std::vector<Unit> units(gs.size());
  parallel_for(gs.size(), jobs, [&](std::size_t i) {
    Unit& u = units[i];
    u.lev_ocred = levenshtein(gs[i], ocred[i]);
    const Alignment fixed_alignment = needleman_wunsch(gs[i], fixed[i]);
    u.lev_fixed = fixed_alignment.edit_count();
    u.words = word_align_counts(fixed_alignment, delimiters);
    u.chars = char_alignment_counts(fixed_alignment);
    u.exact = gs[i] == fixed[i];
  });

  CorrectionEval eval;
  eval.units = gs.size();
  std::size_t exact = 0;
  for (const auto& u : units) {
    eval.lev_ocred += u.lev_ocred;
    eval.lev_fixed += u.lev_fixed;
    eval.word_counts += u.words;
    eval.char_counts += u.chars;
    exact += u.exact ? 1 : 0;
  }
  eval.acc_char = acc_char_from_distances(eval.lev_ocred, eval.lev_fixed);
  eval.wer = error_rate(eval.word_counts);
  eval.cer = error_rate(eval.char_counts);
  eval.sequence_accuracy = static_cast<double>(exact) / static_cast<double>(gs.size());
  return eval;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_eval_tsv(const CorrectionEval& e) {
  std::ostringstream out;
  out << kAccCharColumn << '\t' << kOneMinusWerColumn << '\t' << kOneMinusCerColumn
      << "\tWER\tCER\tsequence_accuracy\tunits\tN_w\tS_w\tI_w\tD_w\tN_c\tS_c\tI_c\tD_c"
         "\tlev_ocred\tlev_fixed\n";
  const auto& w = e.word_counts;
  const auto& c = e.char_counts;
  out << fixed(e.acc_char, 6) << '\t' << fixed((1.0 - e.wer) * 100.0, 6) << '\t'
      << fixed((1.0 - e.cer) * 100.0, 6) << '\t' << fixed(e.wer, 9) << '\t' << fixed(e.cer, 9)
      << '\t' << fixed(e.sequence_accuracy, 6) << '\t' << e.units << '\t' << w.n_words << '\t'
      << w.substituted << '\t' << w.inserted << '\t' << w.deleted << '\t' << c.n_words << '\t'
      << c.substituted << '\t' << c.inserted << '\t' << c.deleted << '\t' << e.lev_ocred << '\t'
      << e.lev_fixed << '\n';
  return out.str();
}

std::string format_eval_table(const CorrectionEval& e) {
  const std::string h1(kAccCharColumn), h2(kOneMinusWerColumn), h3(kOneMinusCerColumn);
  const std::string v1 = fixed(e.acc_char, 2), v2 = fixed((1.0 - e.wer) * 100.0, 2),
                    v3 = fixed((1.0 - e.cer) * 100.0, 2);
  auto pad = [](const std::string& s, std::size_t width) {
    return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
  };
  std::ostringstream out;
  out << pad(h1, h1.size()) << " | " << pad(h2, h2.size()) << " | " << h3 << '\n';
  out << std::string(h1.size(), '-') << "-+-" << std::string(h2.size(), '-') << "-+-"
      << std::string(h3.size(), '-') << '\n';
  out << pad(v1, h1.size()) << " | " << pad(v2, h2.size()) << " | " << v3 << '\n';
  return out.str();
}

std::string format_p_value(double p) { return fixed(p, 3); }

}  // namespace histocr
