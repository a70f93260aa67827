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

#include "histocr/language_model.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "histocr/error.hpp"

namespace histocr {

namespace {

void append_escaped(std::string& out, char32_t c) {
  switch (c) {
    case U'\\': out += "\\\\"; break;
    case U'\t': out += "\\t"; break;
    case U'\n': out += "\\n"; break;
    case kSentenceStart: out += "\\^"; break;
    case kSentenceEnd: out += "\\$"; break;
    default: out += encode_utf8(TextView(&c, 1));
  }
}

Text unescape(std::string_view field) {
  const Text raw = decode_utf8(field);
  Text out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != U'\\') {
      out.push_back(raw[i]);
      continue;
    }
    if (++i >= raw.size()) throw StructuralError("n-gram file: dangling escape");
    switch (raw[i]) {
      case U'\\': out.push_back(U'\\'); break;
      case U't': out.push_back(U'\t'); break;
      case U'n': out.push_back(U'\n'); break;
      case U'^': out.push_back(kSentenceStart); break;
      case U'$': out.push_back(kSentenceEnd); break;
      default: throw StructuralError("n-gram file: unknown escape");
    }
  }
  return out;
}

}  // namespace

CharNgramModel::CharNgramModel(int order, double smoothing_k) : order_(order), k_(smoothing_k) {
  if (order < 1) throw ArgumentError("n-gram order must be >= 1");
  if (!(smoothing_k > 0.0)) throw ArgumentError("smoothing constant must be > 0");
}

void CharNgramModel::add_count(const Text& context, char32_t c, std::uint64_t n) {
  counts_[context][c] += n;
  context_totals_[context] += n;
  if (c != kSentenceEnd) {
    unigrams_[c] += n;
    alphabet_[c] = true;
    total_chars_ += n;
  }
}

void CharNgramModel::add_sentence(TextView sentence) {
  Text history = start_history();
  auto push = [&](char32_t c) {
    add_count(history, c, 1);
    if (!history.empty()) {
      history.erase(history.begin());
      history.push_back(c);
    }
  };
  for (char32_t c : sentence) push(c);
  push(kSentenceEnd);
}

double CharNgramModel::log_prob(TextView history, char32_t next) const {
  const double v = static_cast<double>(vocabulary_size());
  const Text key(history);
  auto ctx = context_totals_.find(key);
  if (ctx == context_totals_.end()) return -std::log(v);
  std::uint64_t count = 0;
  const auto& row = counts_.at(key);
  if (auto it = row.find(next); it != row.end()) count = it->second;
  return std::log((static_cast<double>(count) + k_) / (static_cast<double>(ctx->second) + k_ * v));
}

double CharNgramModel::extend(const Text& history, TextView text, Text* history_out) const {
  Text h = history;
  double total = 0.0;
  for (char32_t c : text) {
    total += log_prob(h, c);
    if (!h.empty()) {
      h.erase(h.begin());
      h.push_back(c);
    }
  }
  if (history_out) *history_out = std::move(h);
  return total;
}

double CharNgramModel::sentence_log_prob(TextView sentence) const {
  Text h;
  const double body = extend(start_history(), sentence, &h);
  return body + end_log_prob(h);
}

std::uint64_t CharNgramModel::unigram_count(char32_t c) const {
  auto it = unigrams_.find(c);
  return it == unigrams_.end() ? 0 : it->second;
}

void CharNgramModel::save(const std::filesystem::path& path) const {
  // Sorted output keeps model directories byte-stable.
  std::map<Text, std::map<char32_t, std::uint64_t>> sorted;
  for (const auto& [ctx, row] : counts_) sorted[ctx].insert(row.begin(), row.end());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  std::string line;
  for (const auto& [ctx, row] : sorted) {
    for (const auto& [c, n] : row) {
      line.clear();
      for (char32_t h : ctx) append_escaped(line, h);
      line += '\t';
      append_escaped(line, c);
      line += '\t';
      line += std::to_string(n);
      out << line << '\n';
    }
  }
  if (!out) throw IoError("write failed: " + path.string());
}

CharNgramModel CharNgramModel::load(const std::filesystem::path& path, int order, double smoothing_k) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  CharNgramModel model(order, smoothing_k);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw StructuralError("n-gram file: expected context<TAB>char<TAB>count");
    }
    Text ctx = unescape(std::string_view(line).substr(0, t1));
    const Text c = unescape(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    if (c.size() != 1 || ctx.size() != static_cast<std::size_t>(order - 1)) {
      throw StructuralError("n-gram file does not match order " + std::to_string(order));
    }
    model.add_count(ctx, c[0], std::stoull(line.substr(t2 + 1)));
  }
  return model;
}

}  // namespace histocr
