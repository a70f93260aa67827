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

#include "histocr/align.hpp"

#include <algorithm>
#include <numeric>

#include "histocr/error.hpp"

namespace histocr {

EditOp EditOp::substitute(char32_t gold, char32_t other) {
  if (gold == other) throw ArgumentError("Substitute requires two different characters");
  return {EditKind::Substitute, gold, other};
}

std::size_t Alignment::edit_count() const {
  return static_cast<std::size_t>(std::count_if(
      ops.begin(), ops.end(), [](const EditOp& op) { return op.kind() != EditKind::Match; }));
}

std::size_t levenshtein(TextView a, TextView b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t bounded_levenshtein(TextView a, TextView b, std::size_t bound) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  const std::size_t too_far = bound + 1;
  if ((n > m ? n - m : m - n) > bound) return too_far;

  // Cells outside the diagonal band |i - j| <= bound stay at too_far.
  std::vector<std::size_t> prev(m + 1, too_far), cur(m + 1, too_far);
  for (std::size_t j = 0; j <= std::min(m, bound); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > bound ? i - bound : 0;
    const std::size_t hi = std::min(m, i + bound);
    std::fill(cur.begin(), cur.end(), too_far);
    if (lo == 0) cur[0] = i;
    std::size_t row_min = lo == 0 ? cur[0] : too_far;
    for (std::size_t j = std::max<std::size_t>(lo, 1); j <= hi; ++j) {
      std::size_t v = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      v = std::min(v, prev[j] + 1);
      v = std::min(v, cur[j - 1] + 1);
      cur[j] = std::min(v, too_far);
      row_min = std::min(row_min, cur[j]);
    }
    if (row_min > bound) return too_far;
    std::swap(prev, cur);
  }
  return std::min(prev[m], too_far);
}

namespace {

void check_scoring(const Scoring& s) {
  if (!(s.mismatch < s.match) || !(s.gap < s.match)) {
    throw ArgumentError("degenerate scoring: mismatch and gap must be below match");
  }
}

}  // namespace

std::int64_t global_alignment_score(TextView gold, TextView other, Scoring scoring) {
  check_scoring(scoring);
  const std::size_t m = other.size();
  std::vector<std::int64_t> row(m + 1);
  for (std::size_t j = 0; j <= m; ++j) row[j] = static_cast<std::int64_t>(j) * scoring.gap;
  for (std::size_t i = 1; i <= gold.size(); ++i) {
    std::int64_t diag = row[0];
    row[0] = static_cast<std::int64_t>(i) * scoring.gap;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int64_t up = row[j];
      const int w = gold[i - 1] == other[j - 1] ? scoring.match : scoring.mismatch;
      row[j] = std::max({diag + w, up + scoring.gap, row[j - 1] + scoring.gap});
      diag = up;
    }
  }
  return row[m];
}

Alignment needleman_wunsch(TextView gold, TextView other, Scoring scoring) {
  check_scoring(scoring);
  const std::size_t n = gold.size();
  const std::size_t m = other.size();
  const std::size_t stride = m + 1;
  std::vector<std::int64_t> score((n + 1) * stride);
  auto at = [&](std::size_t i, std::size_t j) -> std::int64_t& { return score[i * stride + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<std::int64_t>(i) * scoring.gap;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::int64_t>(j) * scoring.gap;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int w = gold[i - 1] == other[j - 1] ? scoring.match : scoring.mismatch;
      at(i, j) = std::max({at(i - 1, j - 1) + w, at(i - 1, j) + scoring.gap,
                           at(i, j - 1) + scoring.gap});
    }
  }

  Alignment result;
  result.score = at(n, m);
  result.ops.reserve(n + m);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = gold[i - 1] == other[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? scoring.match : scoring.mismatch)) {
        result.ops.push_back(same ? EditOp::match(gold[i - 1])
                                  : EditOp::substitute(gold[i - 1], other[j - 1]));
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + scoring.gap) {
      result.ops.push_back(EditOp::erase(gold[i - 1]));
      --i;
    } else {
      result.ops.push_back(EditOp::insert(other[j - 1]));
      --j;
    }
  }
  std::reverse(result.ops.begin(), result.ops.end());
  return result;
}

Text replay(TextView gold, const std::vector<EditOp>& ops) {
  Text out;
  out.reserve(gold.size());
  std::size_t gi = 0;
  for (const auto& op : ops) {
    if (op.consumes_gold()) {
      if (gi >= gold.size() || gold[gi] != *op.gold_char()) {
        throw ArgumentError("edit script does not fit the gold line");
      }
      ++gi;
    }
    if (op.consumes_other()) out.push_back(*op.other_char());
  }
  if (gi != gold.size()) throw ArgumentError("edit script leaves gold characters unconsumed");
  return out;
}

Text other_side(const std::vector<EditOp>& ops) {
  Text out;
  for (const auto& op : ops) {
    if (op.consumes_other()) out.push_back(*op.other_char());
  }
  return out;
}

Text gold_side(const std::vector<EditOp>& ops) {
  Text out;
  for (const auto& op : ops) {
    if (op.consumes_gold()) out.push_back(*op.gold_char());
  }
  return out;
}

namespace {

void append_escaped(std::string& out, char32_t c) {
  switch (c) {
    case U':': out += "\\:"; return;
    case U'\\': out += "\\\\"; return;
    case U' ': out += "\\s"; return;
    case U'\t': out += "\\t"; return;
    case U'\n': out += "\\n"; return;
    default: out += encode_utf8(TextView(&c, 1));
  }
}

// Reads one escaped character from `s` at `pos`.
char32_t read_escaped(const Text& s, std::size_t& pos) {
  if (pos >= s.size()) throw ArgumentError("edit script: missing character");
  char32_t c = s[pos++];
  if (c != U'\\') return c;
  if (pos >= s.size()) throw ArgumentError("edit script: dangling escape");
  switch (s[pos++]) {
    case U':': return U':';
    case U'\\': return U'\\';
    case U's': return U' ';
    case U't': return U'\t';
    case U'n': return U'\n';
    default: throw ArgumentError("edit script: unknown escape");
  }
}

void expect_colon(const Text& s, std::size_t& pos) {
  if (pos >= s.size() || s[pos] != U':') throw ArgumentError("edit script: expected ':'");
  ++pos;
}

}  // namespace

std::string format_edit_script(const std::vector<EditOp>& ops) {
  std::string out;
  for (const auto& op : ops) {
    if (!out.empty()) out.push_back(' ');
    switch (op.kind()) {
      case EditKind::Match:
        out += 'M';
        break;
      case EditKind::Substitute:
        out += "S:";
        append_escaped(out, *op.gold_char());
        out += ':';
        append_escaped(out, *op.other_char());
        break;
      case EditKind::Insert:
        out += "I:";
        append_escaped(out, *op.other_char());
        break;
      case EditKind::Delete:
        out += "D:";
        append_escaped(out, *op.gold_char());
        break;
    }
  }
  return out;
}

std::vector<EditOp> parse_edit_script(std::string_view script, TextView gold) {
  const Text s = decode_utf8(script);
  std::vector<EditOp> ops;
  std::size_t pos = 0;
  std::size_t gold_pos = 0;
  while (pos < s.size()) {
    if (s[pos] == U' ') {
      ++pos;
      continue;
    }
    const char32_t tag = s[pos++];
    switch (tag) {
      case U'M':
        if (gold_pos >= gold.size()) throw ArgumentError("edit script: Match past the end of gold");
        ops.push_back(EditOp::match(gold[gold_pos]));
        break;
      case U'S': {
        expect_colon(s, pos);
        const char32_t g = read_escaped(s, pos);
        expect_colon(s, pos);
        const char32_t o = read_escaped(s, pos);
        ops.push_back(EditOp::substitute(g, o));
        break;
      }
      case U'I':
        expect_colon(s, pos);
        ops.push_back(EditOp::insert(read_escaped(s, pos)));
        break;
      case U'D':
        expect_colon(s, pos);
        ops.push_back(EditOp::erase(read_escaped(s, pos)));
        break;
      default:
        throw ArgumentError("edit script: unknown token");
    }
    if (pos < s.size() && s[pos] != U' ') throw ArgumentError("edit script: trailing characters in token");
    if (ops.back().consumes_gold()) ++gold_pos;
  }
  replay(gold, ops);
  return ops;
}

WordAlignmentCounts& WordAlignmentCounts::operator+=(const WordAlignmentCounts& o) {
  n_words += o.n_words;
  substituted += o.substituted;
  inserted += o.inserted;
  deleted += o.deleted;
  return *this;
}

WordAlignmentCounts char_alignment_counts(const Alignment& alignment) {
  WordAlignmentCounts counts;
  for (const auto& op : alignment.ops) {
    switch (op.kind()) {
      case EditKind::Match: ++counts.n_words; break;
      case EditKind::Substitute: ++counts.n_words; ++counts.substituted; break;
      case EditKind::Delete: ++counts.n_words; ++counts.deleted; break;
      case EditKind::Insert: ++counts.inserted; break;
    }
  }
  return counts;
}

const std::u32string& default_delimiters() {
  static const std::u32string delims = U" \t.,:;!?'\"()";
  return delims;
}

std::vector<Text> split_words(TextView line, std::u32string_view delimiters) {
  std::vector<Text> words;
  Text current;
  for (char32_t c : line) {
    if (delimiters.find(c) != std::u32string_view::npos) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

WordAlignmentCounts word_align_counts(const Alignment& alignment, std::u32string_view delimiters) {
  if (delimiters.empty()) throw ArgumentError("word alignment needs a non-empty delimiter set");

  // The character alignment fixes both sides; the words themselves are then
  // aligned as tokens with unit costs so that a word is correct only when it
  // reappears intact.
  const auto gold = split_words(gold_side(alignment.ops), delimiters);
  const auto other = split_words(other_side(alignment.ops), delimiters);
  const std::size_t n = gold.size(), m = other.size();

  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [m, &d](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (gold[i - 1] == other[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  WordAlignmentCounts counts;
  counts.n_words = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = gold[i - 1] == other[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++counts.substituted;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deleted;
      --i;
    } else {
      ++counts.inserted;
      --j;
    }
  }
  return counts;
}

}  // namespace histocr
