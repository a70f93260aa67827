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
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "histocr/error.hpp"
#include "histocr/error_model.hpp"
#include "histocr/parallel.hpp"

namespace histocr {

ErrorProfile::ErrorProfile(std::vector<ConfusionEntry> entries, std::uint64_t total_substitutions,
                           std::string source_label)
    : entries_(std::move(entries)), total_(total_substitutions), label_(std::move(source_label)) {
  for (const auto& e : entries_) {
    if (e.error_char == e.correct_char) {
      throw ArgumentError("confusion entry pairs a character with itself");
    }
    if (!(e.probability > 0.0 && e.probability <= 1.0)) {
      throw ArgumentError("confusion probability must lie in (0,1]");
    }
  }
  std::sort(entries_.begin(), entries_.end(), [](const ConfusionEntry& a, const ConfusionEntry& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    if (a.correct_char != b.correct_char) return a.correct_char < b.correct_char;
    return a.error_char < b.error_char;
  });
}

std::optional<double> ErrorProfile::probability(char32_t error_char, char32_t correct_char) const {
  for (const auto& e : entries_) {
    if (e.error_char == error_char && e.correct_char == correct_char) return e.probability;
  }
  return std::nullopt;
}

std::uint64_t ErrorProfile::count(const ConfusionEntry& entry) const {
  return static_cast<std::uint64_t>(std::llround(entry.probability * static_cast<double>(total_)));
}

// ---------------------------------------------------------------------------
// TSV

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

char32_t single_char(std::string_view field, const std::string& where) {
  const Text t = decode_utf8(field);
  if (t.size() != 1) throw StructuralError(where + ": expected a single character, got '" + std::string(field) + "'");
  return t[0];
}

}  // namespace

void write_profile(const ErrorProfile& profile, std::ostream& out) {
  if (!profile.source_label().empty()) out << "# source=" << profile.source_label() << '\n';
  out << "# total_substitutions=" << profile.total_substitutions() << '\n';
  for (const auto& e : profile.entries()) {
    out << encode_utf8(TextView(&e.error_char, 1)) << '\t'
        << encode_utf8(TextView(&e.correct_char, 1)) << '\t' << format_double(e.probability)
        << '\n';
  }
}

void write_profile(const ErrorProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_profile(profile, out);
  if (!out) throw IoError("write failed: " + path.string());
}

ProfileLoad read_profile(std::istream& in, std::string source_label) {
  ProfileLoad result;
  std::vector<ConfusionEntry> entries;
  std::uint64_t total = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "profile line " + std::to_string(line_no);
    // A row always has a TAB right after its first character; "#\t..." is a
    // row whose error character is '#'.
    if (line[0] == '#' && (line.size() < 2 || line[1] != '\t')) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      const std::string value = line.substr(eq + 1);
      if (key == "total_substitutions") {
        total = std::stoull(value);
      } else if (key == "source" && source_label.empty()) {
        source_label = value;
      }
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 3) throw StructuralError(where + ": expected error_char<TAB>correct_char<TAB>probability");
    ConfusionEntry e;
    e.error_char = single_char(fields[0], where);
    e.correct_char = single_char(fields[1], where);
    std::string_view prob = fields[2];
    const bool percent = !prob.empty() && prob.back() == '%';
    if (percent) prob.remove_suffix(1);
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(prob.data(), prob.data() + prob.size(), p);
    if (ec != std::errc() || ptr != prob.data() + prob.size()) {
      throw StructuralError(where + ": bad probability '" + std::string(fields[2]) + "'");
    }
    if (percent) p /= 100.0;
    if (e.error_char == e.correct_char) {
      result.warnings.push_back(where + ": rejected degenerate pair '" + std::string(fields[0]) +
                                "' -> itself");
      continue;
    }
    if (!(p > 0.0 && p <= 1.0)) throw StructuralError(where + ": probability outside (0,1]");
    e.probability = p;
    entries.push_back(e);
  }
  result.profile = ErrorProfile(std::move(entries), total, std::move(source_label));
  return result;
}

ProfileLoad read_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_profile(in, path.stem().string());
}

// ---------------------------------------------------------------------------

ErrorProfile extract_confusions(const Corpus& corpus, unsigned jobs) {
  using PairCounts = std::map<std::pair<char32_t, char32_t>, std::uint64_t>;  // (error, correct)
  constexpr std::size_t kChunk = 512;
  const std::size_t chunks = (corpus.size() + kChunk - 1) / kChunk;
  std::vector<PairCounts> partial(chunks);

  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::size_t end = std::min(corpus.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const auto& pair = corpus.pairs[i];
      for (const auto& op : needleman_wunsch(pair.gold, pair.noisy).ops) {
        if (op.kind() == EditKind::Substitute) ++partial[c][{*op.other_char(), *op.gold_char()}];
      }
    }
  });

  PairCounts counts;
  std::uint64_t total = 0;
  for (const auto& part : partial) {
    for (const auto& [key, n] : part) {
      counts[key] += n;
      total += n;
    }
  }
  std::vector<ConfusionEntry> entries;
  entries.reserve(counts.size());
  for (const auto& [key, n] : counts) {
    entries.push_back({key.first, key.second, static_cast<double>(n) / static_cast<double>(total)});
  }
  return ErrorProfile(std::move(entries), total, corpus.name);
}

}  // namespace histocr
