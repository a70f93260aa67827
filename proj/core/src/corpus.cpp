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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "histocr/error.hpp"
#include "histocr/text.hpp"

namespace histocr {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void strip_bom(std::string& line) {
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
}

std::vector<Text> read_all_lines(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<Text> lines;
  std::string buffer;
  while (std::getline(in, buffer)) {
    if (lines.empty()) strip_bom(buffer);
    lines.push_back(normalize_line(buffer));
  }
  if (in.bad()) throw IoError("read failed: " + path.string());
  return lines;
}

}  // namespace

Corpus Corpus::from_lines(std::string name, std::span<const Text> noisy,
                          std::span<const Text> gold) {
  if (noisy.size() != gold.size()) {
    throw StructuralError("line count mismatch " + std::to_string(noisy.size()) + "≠" +
                          std::to_string(gold.size()));
  }
  Corpus corpus;
  corpus.name = std::move(name);
  corpus.pairs.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    corpus.pairs.push_back({noisy[i], gold[i], i});
  }
  return corpus;
}

Corpus load_parallel_corpus(const std::filesystem::path& noisy_path,
                            const std::filesystem::path& gold_path) {
  const auto noisy = read_all_lines(noisy_path);
  const auto gold = read_all_lines(gold_path);
  if (noisy.size() != gold.size()) {
    throw StructuralError("line count mismatch " + std::to_string(noisy.size()) + "≠" +
                          std::to_string(gold.size()) + " (" + noisy_path.string() + " vs " +
                          gold_path.string() + ")");
  }
  return Corpus::from_lines(gold_path.stem().string(), noisy, gold);
}

Corpus load_tsv_corpus(const std::filesystem::path& tsv_path) {
  auto in = open_input(tsv_path);
  Corpus corpus;
  corpus.name = tsv_path.stem().string();
  std::string buffer;
  std::size_t line_no = 0;
  while (std::getline(in, buffer)) {
    ++line_no;
    if (line_no == 1) strip_bom(buffer);
    if (!buffer.empty() && buffer.back() == '\r') buffer.pop_back();
    const auto tab = buffer.find('\t');
    if (tab == std::string::npos || buffer.find('\t', tab + 1) != std::string::npos) {
      throw StructuralError(tsv_path.string() + ":" + std::to_string(line_no) +
                            ": expected exactly one TAB (noisy<TAB>gold)");
    }
    corpus.pairs.push_back({normalize_line(std::string_view(buffer).substr(0, tab)),
                            normalize_line(std::string_view(buffer).substr(tab + 1)),
                            corpus.pairs.size()});
  }
  return corpus;
}

void write_lines(std::span<const Text> lines, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& line : lines) out << encode_utf8(line) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_parallel_corpus(const Corpus& corpus, const std::filesystem::path& noisy_path,
                           const std::filesystem::path& gold_path) {
  auto noisy = open_output(noisy_path);
  auto gold = open_output(gold_path);
  for (const auto& pair : corpus.pairs) {
    noisy << encode_utf8(pair.noisy) << '\n';
    gold << encode_utf8(pair.gold) << '\n';
  }
  if (!noisy || !gold) throw IoError("write failed: " + noisy_path.string());
}

PlainCorpusReader::PlainCorpusReader(const std::filesystem::path& path)
    : path_(path), in_(open_input(path)) {}

bool PlainCorpusReader::next(Text& line) {
  while (std::getline(in_, buffer_)) {
    if (emitted_ == 0) strip_bom(buffer_);
    Text normalized = normalize_line(buffer_);
    if (normalized.empty()) continue;
    line = std::move(normalized);
    ++emitted_;
    return true;
  }
  if (in_.bad()) throw IoError("read failed: " + path_.string());
  return false;
}

std::vector<Text> load_plain_corpus(const std::filesystem::path& gold_path) {
  PlainCorpusReader reader(gold_path);
  std::vector<Text> lines;
  Text line;
  while (reader.next(line)) lines.push_back(std::move(line));
  if (lines.empty()) throw StructuralError("plain corpus has no non-blank lines: " + gold_path.string());
  return lines;
}

std::pair<Corpus, Corpus> split_train_valid(const Corpus& corpus, double train_fraction,
                                            std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ArgumentError("train fraction must lie in (0,1), got " + std::to_string(train_fraction));
  }
  if (corpus.empty()) throw StructuralError("cannot split an empty corpus");

  const std::size_t n = corpus.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 engine(seed);
  std::shuffle(order.begin(), order.end(), engine);

  const auto train_n = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  std::vector<std::size_t> train_idx(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_n));
  std::vector<std::size_t> valid_idx(order.begin() + static_cast<std::ptrdiff_t>(train_n), order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(valid_idx.begin(), valid_idx.end());

  auto gather = [&](const std::vector<std::size_t>& idx, std::string suffix) {
    Corpus part;
    part.name = corpus.name + suffix;
    part.pairs.reserve(idx.size());
    for (std::size_t i : idx) {
      SentencePair p = corpus.pairs[i];
      p.id = part.pairs.size();
      part.pairs.push_back(std::move(p));
    }
    return part;
  };
  return {gather(train_idx, ".train"), gather(valid_idx, ".valid")};
}

}  // namespace histocr
