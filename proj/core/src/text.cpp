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

#include "histocr/random.hpp"
#include "histocr/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <numeric>

#include "histocr/error.hpp"

namespace histocr {

namespace {

icu::UnicodeString to_unicode(TextView text) {
  icu::UnicodeString out;
  for (char32_t c : text) out.append(static_cast<UChar32>(c));
  return out;
}

Text from_unicode(const icu::UnicodeString& s) {
  Text out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

bool is_line_break(char32_t c) {
  switch (c) {
    case U'\n':
    case U'\r':
    case U'\v':
    case U'\f':
    case U'\u0085':
    case U'\u2028':
    case U'\u2029':
      return true;
    default:
      return false;
  }
}

Text finish_normalization(const icu::UnicodeString& decoded) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString composed = nfc->normalize(decoded, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");

  Text out = from_unicode(composed);
  for (char32_t& c : out) {
    if (c == U'\t' || is_line_break(c)) c = U' ';
  }
  while (!out.empty() && is_whitespace(out.back())) out.pop_back();
  return out;
}

}  // namespace

Text decode_utf8(std::string_view utf8) {
  return from_unicode(icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size()))));
}

std::string encode_utf8(TextView text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

bool is_whitespace(char32_t c) {
  return c == U' ' || c == U'\t' || is_line_break(c) || u_isUWhiteSpace(static_cast<UChar32>(c));
}

Text normalize_line(std::string_view utf8) {
  return finish_normalization(icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size()))));
}

Text normalize_line(TextView text) { return finish_normalization(to_unicode(text)); }

// ---------------------------------------------------------------------------

CharFrequencyTable CharFrequencyTable::from_counts(
    const std::map<char32_t, std::uint64_t>& counts) {
  const std::uint64_t total = std::accumulate(
      counts.begin(), counts.end(), std::uint64_t{0},
      [](std::uint64_t acc, const auto& kv) { return acc + kv.second; });
  if (total == 0) throw StructuralError("no countable characters for a frequency table");

  CharFrequencyTable table;
  double running = 0.0;
  table.min_ = 1.0;
  for (const auto& [c, n] : counts) {
    if (n == 0) continue;
    const double f = static_cast<double>(n) / static_cast<double>(total);
    table.freq_.emplace(c, f);
    table.ordered_.emplace_back(c, f);
    running += f;
    table.cumulative_.push_back(running);
    table.min_ = std::min(table.min_, f);
  }
  return table;
}

double CharFrequencyTable::frequency(char32_t c) const {
  auto it = freq_.find(c);
  return it == freq_.end() ? 0.0 : it->second;
}

char32_t CharFrequencyTable::sample(double u) const {
  if (ordered_.empty()) throw ArgumentError("sampling from an empty frequency table");
  return ordered_[pick_cumulative(cumulative_, u)].first;
}

void CharCounter::add(TextView line) {
  for (char32_t c : line) {
    if (!is_whitespace(c)) ++counts_[c];
  }
}

void CharCounter::merge(const CharCounter& other) {
  for (const auto& [c, n] : other.counts_) counts_[c] += n;
}

CharFrequencyTable build_char_frequency_table(std::span<const Text> lines) {
  CharCounter counter;
  for (const auto& line : lines) counter.add(line);
  return counter.table();
}

}  // namespace histocr
