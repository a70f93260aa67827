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

#include <cstdio>
#include <numeric>
#include <ostream>

#include "histocr/error_model.hpp"
#include "histocr/parallel.hpp"

namespace histocr {

std::string_view error_type_name(ErrorType type) {
  switch (type) {
    case ErrorType::CharReplacement: return "char_replacement";
    case ErrorType::CharSwap: return "char_swap";
    case ErrorType::MissingSpace: return "missing_space";
    case ErrorType::RedundantSpace: return "redundant_space";
    case ErrorType::RedundantChar: return "redundant_char";
    case ErrorType::MissingChar: return "missing_char";
  }
  return "unknown";
}

std::uint64_t ErrorTypeHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ErrorTypeHistogram& ErrorTypeHistogram::operator+=(const ErrorTypeHistogram& o) {
  for (std::size_t i = 0; i < kErrorTypeCount; ++i) counts[i] += o.counts[i];
  return *this;
}

ErrorTypeHistogram classify_errors(const Alignment& alignment) {
  ErrorTypeHistogram h;
  const auto& ops = alignment.ops;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const EditOp& op = ops[k];
    switch (op.kind()) {
      case EditKind::Match:
        break;
      case EditKind::Delete:
        ++h[is_whitespace(*op.gold_char()) ? ErrorType::MissingSpace : ErrorType::MissingChar];
        break;
      case EditKind::Insert:
        ++h[is_whitespace(*op.other_char()) ? ErrorType::RedundantSpace : ErrorType::RedundantChar];
        break;
      case EditKind::Substitute: {
        if (k + 1 < ops.size()) {
          const EditOp& next = ops[k + 1];
          if (next.kind() == EditKind::Substitute && next.gold_char() == op.other_char() &&
              next.other_char() == op.gold_char()) {
            ++h[ErrorType::CharSwap];
            ++k;
            break;
          }
        }
        ++h[ErrorType::CharReplacement];
        break;
      }
    }
  }
  return h;
}

ErrorTypeHistogram classify_corpus(const Corpus& corpus, unsigned jobs) {
  std::vector<ErrorTypeHistogram> per_pair(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    per_pair[i] = classify_errors(needleman_wunsch(corpus.pairs[i].gold, corpus.pairs[i].noisy));
  });
  ErrorTypeHistogram total;
  for (const auto& h : per_pair) total += h;
  return total;
}

void write_histogram(const ErrorTypeHistogram& histogram, std::ostream& out) {
  const auto total = histogram.total();
  out << "error_type\tcount\tfraction\n";
  for (std::size_t i = 0; i < kErrorTypeCount; ++i) {
    const double fraction =
        total == 0 ? 0.0 : static_cast<double>(histogram.counts[i]) / static_cast<double>(total);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", fraction);
    out << error_type_name(static_cast<ErrorType>(i)) << '\t' << histogram.counts[i] << '\t' << buf
        << '\n';
  }
}

}  // namespace histocr
