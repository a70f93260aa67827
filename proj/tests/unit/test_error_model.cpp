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

#include <doctest.h>

#include <sstream>

#include "histocr/align.hpp"
#include "histocr/error.hpp"
#include "histocr/error_model.hpp"
#include "histocr/metrics.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace histocr;

namespace {

const char* kReferenceProfile =
    "# source=JPress\n"
    "\xD7\x97\t\xD7\x94\t8.17%\n"
    "\xD7\x93\t\xD7\xA8\t5.01%\n"
    "\xD7\x92\t\xD7\xA0\t4.19%\n"
    "\xD7\x91\t\xD7\x9B\t3.44%\n"
    "'\t,\t3.39%\n"
    "\xD7\x9D\t\xD7\x9D\t3.18%\n"
    "\xD7\x97\t\xD7\xAA\t2.65%\n"
    "\xD7\x9C\t'\t2.65%\n";

NoiseConfig config_for(const std::vector<Text>& lines, double nr) {
  NoiseConfig c;
  c.noise_ratio = nr;
  c.char_freq = build_char_frequency_table(lines);
  return c;
}

}  // namespace

TEST_CASE("profile construction validates and sorts") {
  ErrorProfile p({{U'x', U'y', 0.2}, {U'b', U'a', 0.5}, {U'c', U'a', 0.2}}, 10, "t");
  REQUIRE(p.size() == 3);
  CHECK(p.entries()[0].probability == 0.5);
  // Equal probabilities: ordered by correct char, then error char.
  CHECK(p.entries()[1] == ConfusionEntry{U'c', U'a', 0.2});
  CHECK(p.entries()[2] == ConfusionEntry{U'x', U'y', 0.2});
  CHECK(p.probability(U'b', U'a') == 0.5);
  CHECK_FALSE(p.probability(U'a', U'b').has_value());
  CHECK(p.count(p.entries()[0]) == 5);
  CHECK_THROWS_AS(ErrorProfile({{U'a', U'a', 0.1}}, 1, ""), ArgumentError);
  CHECK_THROWS_AS(ErrorProfile({{U'a', U'b', 0.0}}, 1, ""), ArgumentError);
  CHECK_THROWS_AS(ErrorProfile({{U'a', U'b', 1.5}}, 1, ""), ArgumentError);
}

TEST_CASE("reading the reference confusion profile") {
  std::istringstream in(kReferenceProfile);
  ProfileLoad load = read_profile(in);
  CHECK(load.profile.size() == 7);
  REQUIRE(load.warnings.size() == 1);
  CHECK(load.warnings[0].find("line 7") != std::string::npos);
  CHECK(load.profile.source_label() == "JPress");
  const auto& top = load.profile.entries()[0];
  CHECK(top.error_char == U'ח');
  CHECK(top.correct_char == U'ה');
  CHECK(top.probability == doctest::Approx(0.0817));
  // Tied 2.65% rows: ' (U+0027) sorts before ת.
  CHECK(load.profile.entries()[5].correct_char == U'\'');
  CHECK(load.profile.entries()[6].correct_char == U'ת');
}

TEST_CASE("profile TSV round trip") {
  ErrorProfile p({{U'#', U'a', 0.25}, {U'ח', U'ה', 0.75}}, 4, "src");
  std::stringstream buf;
  write_profile(p, buf);
  auto back = read_profile(buf).profile;
  CHECK(back.entries() == p.entries());
  CHECK(back.total_substitutions() == 4);
  CHECK(back.source_label() == "src");

  std::istringstream bad("a\tb\n");
  CHECK_THROWS_AS(read_profile(bad), StructuralError);
  std::istringstream range("a\tb\t1.5\n");
  CHECK_THROWS_AS(read_profile(range), StructuralError);
  std::istringstream wide("ab\tc\t0.5\n");
  CHECK_THROWS_AS(read_profile(wide), StructuralError);
}

TEST_CASE("extract_confusions") {
  Corpus single = Corpus::from_lines("s", std::vector<Text>{U"ax"}, std::vector<Text>{U"ay"});
  auto p = extract_confusions(single);
  REQUIRE(p.size() == 1);
  CHECK(p.entries()[0] == ConfusionEntry{U'x', U'y', 1.0});
  CHECK(p.total_substitutions() == 1);

  Corpus clean = Corpus::from_lines("c", std::vector<Text>{U"abc"}, std::vector<Text>{U"abc"});
  auto e = extract_confusions(clean);
  CHECK(e.empty());
  CHECK(e.total_substitutions() == 0);

  // ה -> ח as 8.17% of all substitutions (817 of 10000).
  std::vector<Text> noisy, gold;
  for (int i = 0; i < 817; ++i) {
    gold.push_back(U"הלום");
    noisy.push_back(U"חלום");
  }
  for (int i = 0; i < 9183; ++i) {
    gold.push_back(U"abc");
    noisy.push_back(Text(1, U'x') + U"bc");
  }
  auto heb = extract_confusions(Corpus::from_lines("h", noisy, gold), 4);
  CHECK(heb.entries()[0].probability == doctest::Approx(0.9183));
  CHECK(heb.entries()[1] == ConfusionEntry{U'ח', U'ה', 0.0817});
  CHECK(heb.total_substitutions() == 10000);
}

TEST_CASE("error type classification fixtures") {
  CHECK(classify_errors(needleman_wunsch(U"abc", U"abc")).total() == 0);
  const std::vector<EditOp> swap{EditOp::substitute(U'a', U'b'), EditOp::substitute(U'b', U'a')};
  auto h = classify_errors(Alignment{swap, -2});
  CHECK(h[ErrorType::CharSwap] == 1);
  CHECK(h.total() == 1);
  CHECK(classify_errors(needleman_wunsch(U"a b", U"ab"))[ErrorType::MissingSpace] == 1);
  CHECK(classify_errors(needleman_wunsch(U"ab", U"a b"))[ErrorType::RedundantSpace] == 1);
  CHECK(classify_errors(needleman_wunsch(U"ab", U"axb"))[ErrorType::RedundantChar] == 1);
  CHECK(classify_errors(needleman_wunsch(U"abc", U"ac"))[ErrorType::MissingChar] == 1);
  CHECK(classify_errors(needleman_wunsch(U"abc", U"axc"))[ErrorType::CharReplacement] == 1);

  std::ostringstream out;
  write_histogram(h, out);
  CHECK(out.str() ==
        "error_type\tcount\tfraction\n"
        "char_replacement\t0\t0.000000\n"
        "char_swap\t1\t1.000000\n"
        "missing_space\t0\t0.000000\n"
        "redundant_space\t0\t0.000000\n"
        "redundant_char\t0\t0.000000\n"
        "missing_char\t0\t0.000000\n");
}

TEST_CASE("a single event of known type is classified as exactly that type") {
  oracle::Gen gen(17);
  const std::u32string letters = U"abcdefghijklmnop";
  for (int i = 0; i < 2000; ++i) {
    // Distinct letters so no event can be re-explained more cheaply.
    Text letters_perm = letters;
    std::shuffle(letters_perm.begin(), letters_perm.end(), gen.engine());
    Text gold = letters_perm.substr(0, 3 + gen.below(8));
    const std::size_t cut = 1 + gen.below(gold.size() - 1);
    gold.insert(cut, 1, U' ');
    Text other = gold;
    ErrorType expected{};
    switch (gen.below(6)) {
      case 0: {
        std::size_t pos;
        do pos = gen.below(other.size()); while (other[pos] == U' ');
        other[pos] = U'Z';
        expected = ErrorType::CharReplacement;
        break;
      }
      case 1: {
        std::size_t pos;
        do pos = gen.below(other.size() - 1); while (other[pos] == U' ' || other[pos + 1] == U' ');
        std::swap(other[pos], other[pos + 1]);
        expected = ErrorType::CharSwap;
        break;
      }
      case 2:
        other.erase(cut, 1);
        expected = ErrorType::MissingSpace;
        break;
      case 3:
        other.insert(1 + gen.below(other.size() - 1), 1, U' ');
        if (other.find(U"  ") != Text::npos) continue;
        expected = ErrorType::RedundantSpace;
        break;
      case 4:
        other.insert(gen.below(other.size() + 1), 1, U'Z');
        expected = ErrorType::RedundantChar;
        break;
      default: {
        std::size_t pos;
        do pos = gen.below(other.size()); while (other[pos] == U' ');
        other.erase(pos, 1);
        expected = ErrorType::MissingChar;
        break;
      }
    }
    const auto h = classify_errors(needleman_wunsch(gold, other));
    CHECK(h.total() == 1);
    CHECK(h[expected] == 1);
  }
}

TEST_CASE("noise config validation") {
  NoiseConfig c = config_for({U"abc"}, 0.2);
  CHECK_NOTHROW(c.validate());
  for (double bad : {0.0, 1.0, 1.2, -0.1}) {
    c.noise_ratio = bad;
    try {
      c.validate();
      FAIL("accepted NR " << bad);
    } catch (const ArgumentError& e) {
      CHECK(std::string(e.what()).find("0 < NR < 1") != std::string::npos);
    }
  }
  c.noise_ratio = 0.2;
  c.max_swaps = 0;
  CHECK_THROWS_AS(c.validate(), ArgumentError);
  NoiseConfig no_table;
  CHECK_THROWS_AS(no_table.validate(), ArgumentError);
  no_table.generic_noise = false;
  CHECK_NOTHROW(no_table.validate());
}

TEST_CASE("inject_line with every gate failing leaves the line intact") {
  NoiseConfig c = config_for({U"אבגד"}, 0.5);
  oracle::ScriptedStream rng({}, {}, 0.99);
  InjectionEvents ev;
  CHECK(inject_line(U"אבגד", c, rng, &ev) == U"אבגד");
  CHECK_FALSE(ev.deleted);
  CHECK_FALSE(ev.inserted);
  CHECK(ev.swaps == 0);
}

TEST_CASE("inject_line applies deletion, insertion and swap in order") {
  // Hand trace with every uniform draw 0.0:
  //   delete: u=0 picks the first occurrence     "abcd" -> "bcd"
  //   insert: u=0 samples 'a', position 3        -> "bcda"
  //   swap:   k = 1 + 0, position 1              -> "bdca"
  NoiseConfig c = config_for({U"abcd"}, 0.5);
  oracle::ScriptedStream rng({}, {3, 0, 1}, 0.0);
  InjectionEvents ev;
  const Text out = inject_line(U"abcd", c, rng, &ev);
  CHECK(out == U"bdca");
  CHECK(out.size() == 4);
  CHECK(ev.deleted);
  CHECK(ev.inserted);
  CHECK(ev.swaps == 1);
}

TEST_CASE("deletion is weighted by character frequency") {
  // 'a' has frequency 0.9, 'b' 0.1: for "ab" the cumulative weights are
  // {0.9, 1.0}, so u = 0.95 deletes 'b' and u = 0.85 deletes 'a'.
  NoiseConfig c;
  c.noise_ratio = 0.5;
  c.char_freq = CharFrequencyTable::from_counts({{U'a', 9}, {U'b', 1}});
  oracle::ScriptedStream hi({0.0, 0.95}, {}, 0.99);
  CHECK(inject_line(U"ab", c, hi) == U"a");
  oracle::ScriptedStream lo({0.0, 0.85}, {}, 0.99);
  CHECK(inject_line(U"ab", c, lo) == U"b");
  // Unknown characters fall back to the table minimum (0.1).
  oracle::ScriptedStream floor({0.0, 0.6}, {}, 0.99);
  CHECK(inject_line(U"zb", c, floor) == U"z");
  // A single character is never deleted.
  oracle::ScriptedStream one({0.0}, {}, 0.99);
  CHECK(inject_line(U"a", c, one) == U"a");
}

TEST_CASE("period-specific replacement") {
  NoiseConfig c;
  c.noise_ratio = 0.5;
  c.generic_noise = false;
  c.profile = ErrorProfile({{U'ח', U'ה', 0.9}}, 1, "");
  oracle::ScriptedStream rng({0.0}, {1});
  InjectionEvents ev;
  CHECK(inject_line(U"ההה", c, rng, &ev) == U"החה");
  CHECK(ev.replacements == 1);
  // Gate is NR * EP = 0.45.
  oracle::ScriptedStream miss({0.46}, {1});
  CHECK(inject_line(U"ההה", c, miss) == U"ההה");
  // Lines without the correct character consume no draw.
  oracle::ScriptedStream none({0.0}, {});
  CHECK(inject_line(U"abc", c, none) == U"abc");
  CHECK(none.uniforms_used() == 0);
}

TEST_CASE("inject_corpus is deterministic and independent of jobs") {
  oracle::Gen gen(1);
  std::vector<Text> lines;
  for (int i = 0; i < 5000; ++i) lines.push_back(gen.word(1, 30, U"abcdefgה "));
  NoiseConfig c = config_for(lines, 0.3);
  c.profile = ErrorProfile({{U'ח', U'ה', 0.5}}, 1, "");
  InjectionStats s1, s8;
  auto one = inject_corpus(lines, c, 1, &s1);
  auto eight = inject_corpus(lines, c, 8, &s8);
  CHECK(one.pairs == eight.pairs);
  CHECK(s1.deletion_events == s8.deletion_events);
  CHECK(s1.replacements == s8.replacements);
  CHECK(s1.lines == 5000);
  // Offsetting first_index reproduces a slice.
  auto tail = inject_corpus(std::span(lines).subspan(1000), c, 2, nullptr, 1000);
  CHECK(tail.pairs[0].noisy == one.pairs[1000].noisy);
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(one.pairs[i].gold == lines[i]);
}

TEST_CASE("period-specific gate calibration") {
  // Every line holds the correct character; the firing fraction converges to
  // NR * EP = 0.12 (sd ~0.0023 at 20k lines).
  std::vector<Text> lines(20000, U"xהyה");
  NoiseConfig c;
  c.noise_ratio = 0.4;
  c.generic_noise = false;
  c.profile = ErrorProfile({{U'ח', U'ה', 0.3}}, 1, "");
  InjectionStats stats;
  inject_corpus(lines, c, 4, &stats);
  const double rate = static_cast<double>(stats.replacements) / 20000.0;
  CHECK(rate > 0.12 - 5 * 0.0023);
  CHECK(rate < 0.12 + 5 * 0.0023);
}

TEST_CASE("noise sweep") {
  oracle::Gen gen(2);
  std::vector<Text> lines;
  for (int i = 0; i < 2000; ++i) lines.push_back(gen.word(5, 30, U"abcdef "));
  NoiseConfig base = config_for(lines, 0.2);
  auto raw_cer = [](const Corpus& c) {
    std::vector<Text> g, n;
    for (auto& p : c.pairs) {
      g.push_back(p.gold);
      n.push_back(p.noisy);
    }
    return cer(std::span<const Text>(g), std::span<const Text>(n));
  };
  const std::vector<double> ratios{0.1, 0.2, 0.3, 0.4, 0.5};
  auto sweep = noise_sweep(lines, base, ratios, raw_cer, 4);
  REQUIRE(sweep.rows.size() == 5);
  CHECK(sweep.rows[2].noise_ratio == 0.3);
  CHECK(sweep.non_decreasing);
  const std::vector<double> single{0.2};
  CHECK(noise_sweep(lines, base, single, raw_cer).rows[0].score > 0.0);
  CHECK_THROWS_AS(noise_sweep(lines, base, std::vector<double>{}, raw_cer), ArgumentError);
  CHECK_THROWS_AS(noise_sweep(lines, base, std::vector<double>{0.2, 1.0}, raw_cer), ArgumentError);
}
