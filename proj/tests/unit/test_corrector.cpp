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

#include <algorithm>
#include <cmath>

#include "histocr/corrector.hpp"
#include "histocr/error.hpp"
#include "histocr/language_model.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace histocr;

namespace {

using Lines = std::vector<Text>;

Corpus pairs(const Lines& noisy, const Lines& gold) { return Corpus::from_lines("t", noisy, gold); }

// Every combination of per-token candidates, scored with the full objective.
NoisyChannelModel::Decoded exhaustive_best(const NoisyChannelModel& m, const Text& noisy) {
  const auto tokens = tokenize_spaces(noisy);
  std::vector<std::vector<Text>> cands;
  for (const auto& t : tokens) cands.push_back(t.empty() ? std::vector<Text>{Text()} : m.candidates(t));
  std::vector<std::size_t> pick(tokens.size(), 0);
  NoisyChannelModel::Decoded best{Text(), -INFINITY};
  for (;;) {
    std::vector<Text> words;
    for (std::size_t i = 0; i < tokens.size(); ++i) words.push_back(cands[i][pick[i]]);
    const Text line = oracle::join(words);
    const double s = m.score(noisy, line);
    if (s > best.score || (s == best.score && line < best.text)) best = {line, s};
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == cands[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return best;
}

// Gold text whose ה occurrences are mostly read as ח.
Corpus he_het_corpus() {
  const Lines sentences{U"הלום הוא בית", U"הם שם עם בית", U"הלום שם", U"לום בית הוא", U"הם הלום",
                        U"שם הלום עם", U"בית הם"};
  Lines noisy, gold;
  for (int rep = 0; rep < 20; ++rep) {
    for (const auto& s : sentences) {
      gold.push_back(s);
      Text n = s;
      // Corrupt the first ה in four of every five copies.
      if (rep % 5 != 0) {
        if (auto p = n.find(U'ה'); p != Text::npos) n[p] = U'ח';
      }
      noisy.push_back(n);
    }
  }
  return pairs(noisy, gold);
}

}  // namespace

TEST_CASE("char n-gram model") {
  CharNgramModel lm(2, 0.5);
  lm.add_sentence(U"ab");
  lm.add_sentence(U"aa");
  CHECK(lm.alphabet_size() == 2);
  CHECK(lm.vocabulary_size() == 4);
  CHECK(lm.unigram_count(U'a') == 3);
  CHECK(lm.total_chars() == 4);
  // Context "a" is followed by b, a and the end marker once each.
  const Text a = U"a";
  CHECK(std::exp(lm.log_prob(a, U'b')) == doctest::Approx((1 + 0.5) / (3 + 0.5 * 4)));
  CHECK(std::exp(lm.log_prob(U"z", U'b')) == doctest::Approx(0.25));

  // Probabilities over the alphabet, the end marker and one unknown slot sum
  // to one in every context.
  for (const Text& ctx : {Text(U"a"), Text(U"b"), Text(1, kSentenceStart), Text(U"q")}) {
    double sum = std::exp(lm.log_prob(ctx, U'a')) + std::exp(lm.log_prob(ctx, U'b')) +
                 std::exp(lm.log_prob(ctx, kSentenceEnd)) + std::exp(lm.log_prob(ctx, U'?'));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(lm.sentence_log_prob(U"ab") > lm.sentence_log_prob(U"bb"));
  CHECK_THROWS_AS(CharNgramModel(0, 0.1), ArgumentError);
  CHECK_THROWS_AS(CharNgramModel(2, 0.0), ArgumentError);
}

TEST_CASE("n-gram model save and load") {
  histocr::testing::TempDir dir;
  CharNgramModel lm(3, 0.1);
  lm.add_sentence(U"a\\b\tc");
  lm.add_sentence(U"הלום");
  lm.save(dir / "ng.tsv");
  auto back = CharNgramModel::load(dir / "ng.tsv", 3, 0.1);
  CHECK(back.counts() == lm.counts());
  CHECK(back.sentence_log_prob(U"הלום") == lm.sentence_log_prob(U"הלום"));
  CHECK(back.alphabet_size() == lm.alphabet_size());
}

TEST_CASE("hyperparameters") {
  NoisyChannelHyper h;
  CHECK(h.ngram_order == 3);
  CHECK(h.beam_width == 4);
  CHECK(h.max_edits_per_word == 2);
  CHECK(h.smoothing_k == 0.1);
  CHECK(NoisyChannelHyper::from_assignment(h.to_assignment()) == h);
  auto a = NoisyChannelHyper::from_assignment({{"channel_weight", "0.5"}, {"beam_width", "8"}});
  CHECK(a.channel_weight == 0.5);
  CHECK(a.beam_width == 8);
  CHECK(a.to_assignment().at("channel_weight") == "0.5");
  CHECK_THROWS_AS(NoisyChannelHyper::from_assignment({{"colour", "red"}}), ArgumentError);
  CHECK_THROWS_AS(NoisyChannelHyper::from_assignment({{"beam_width", "0"}}), ArgumentError);
  CHECK_THROWS_AS(NoisyChannelHyper::from_assignment({{"ngram_order", "3x"}}), ArgumentError);
  CHECK_THROWS_AS(NoisyChannelHyper::from_assignment({{"smoothing_k", "0"}}), ArgumentError);
}

TEST_CASE("tokenize_spaces keeps empty tokens") {
  CHECK(tokenize_spaces(U"a b") == Lines{U"a", U"b"});
  CHECK(tokenize_spaces(U"a  b") == Lines{U"a", U"", U"b"});
  CHECK(tokenize_spaces(U"") == Lines{U""});
}

TEST_CASE("training on a noiseless corpus learns no channel") {
  const Lines gold{U"the cat sat", U"on the mat", U"a cat on a mat"};
  auto m = NoisyChannelModel::train(pairs(gold, gold), {});
  CHECK(m.channel().empty());
  CHECK(m.vocabulary().size() == 6);
  CHECK(m.in_vocabulary(U"cat"));
  CHECK_FALSE(m.in_vocabulary(U"dog"));
  for (const auto& line : gold) CHECK(m.correct(line) == line);
  CHECK(validation_accuracy(m, pairs(gold, gold)) == 1.0);
  CHECK_THROWS_AS(NoisyChannelModel::train(Corpus{}, {}), StructuralError);
  NoisyChannelHyper bad;
  bad.beam_width = 0;
  CHECK_THROWS_AS(NoisyChannelModel::train(pairs(gold, gold), bad), ArgumentError);
}

TEST_CASE("beam 1 with no edits is the identity") {
  auto corpus = he_het_corpus();
  NoisyChannelHyper h;
  h.beam_width = 1;
  h.max_edits_per_word = 0;
  auto m = NoisyChannelModel::train(corpus, h);
  for (const auto& p : corpus.pairs) CHECK(m.correct(p.noisy) == p.noisy);
  CHECK(m.correct(U"xyz  q") == U"xyz  q");
}

TEST_CASE("a single learned confusion is inverted") {
  auto corpus = he_het_corpus();
  auto m = NoisyChannelModel::train(corpus, {});
  REQUIRE(m.channel().size() == 1);
  CHECK(m.channel().entries()[0].error_char == U'ח');
  CHECK(m.channel().entries()[0].correct_char == U'ה');
  CHECK(m.correct(U"חלום הוא בית") == U"הלום הוא בית");
  // Unknown words pass through untouched.
  CHECK(m.correct(U"ירושלים") == U"ירושלים");
  CHECK(m.correct(U"הלום") == U"הלום");

  const auto best = exhaustive_best(m, U"חלום הוא בית");
  CHECK(best.text == U"הלום הוא בית");
  CHECK(m.decode(U"חלום הוא בית", 64).score == doctest::Approx(best.score).epsilon(1e-12));
}

TEST_CASE("large channel weight only applies the learned inverse substitution") {
  auto corpus = he_het_corpus();
  NoisyChannelHyper h;
  h.channel_weight = 1e6;
  auto m = NoisyChannelModel::train(corpus, h);
  for (const auto& p : corpus.pairs) {
    const Text out = m.correct(p.noisy);
    REQUIRE(out.size() == p.noisy.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i] != p.noisy[i]) {
        CHECK(p.noisy[i] == U'ח');
        CHECK(out[i] == U'ה');
      }
    }
  }
}

TEST_CASE("decode matches exhaustive scoring with a wide beam") {
  auto corpus = he_het_corpus();
  NoisyChannelHyper h;
  h.max_edits_per_word = 1;
  auto m = NoisyChannelModel::train(corpus, h);
  for (const Text& line : {Text(U"חלום חם"), Text(U"חם שם עם"), Text(U"בית לום חוא")}) {
    const auto oracle_best = exhaustive_best(m, line);
    const auto d = m.decode(line, 512);
    CHECK(d.text == oracle_best.text);
    CHECK(d.score == doctest::Approx(oracle_best.score).epsilon(1e-12));
    CHECK(m.score(line, d.text) == doctest::Approx(d.score).epsilon(1e-12));
  }
}

TEST_CASE("decode score never drops as the beam widens") {
  auto corpus = he_het_corpus();
  auto m = NoisyChannelModel::train(corpus, {});
  oracle::Gen gen(9);
  const std::u32string alphabet = U"הםלובתיחשע";
  for (int i = 0; i < 200; ++i) {
    std::vector<Text> words;
    for (std::size_t k = 1 + gen.below(4); k > 0; --k) words.push_back(gen.word(2, 4, alphabet));
    const Text line = oracle::join(words);
    double prev = -INFINITY;
    for (int w = 1; w <= 8; ++w) {
      const double s = m.decode(line, w).score;
      CHECK(s >= prev);
      prev = s;
    }
    CHECK(m.correct(line) == m.correct(line));
  }
}

TEST_CASE("candidates") {
  auto m = NoisyChannelModel::train(he_het_corpus(), {});
  const auto c = m.candidates(U"חלום");
  CHECK(std::is_sorted(c.begin(), c.end()));
  CHECK(std::find(c.begin(), c.end(), Text(U"חלום")) != c.end());
  CHECK(std::find(c.begin(), c.end(), Text(U"הלום")) != c.end());
  CHECK(std::find(c.begin(), c.end(), Text(U"לום")) != c.end());
  for (const auto& w : c) {
    if (w != U"חלום") {
      CHECK(m.in_vocabulary(w));
      CHECK(levenshtein(w, U"חלום") <= 2);
    }
  }
}

TEST_CASE("model directory round trip") {
  histocr::testing::TempDir dir;
  auto corpus = he_het_corpus();
  NoisyChannelHyper h;
  h.channel_weight = 2;
  h.smoothing_k = 0.01;
  auto m = NoisyChannelModel::train(corpus, h);
  m.save(dir / "model");
  for (const char* f : {"hyper.cfg", "vocabulary.txt", "ngrams.tsv", "channel.tsv"}) {
    CHECK(std::filesystem::exists(dir / "model" / f));
  }
  auto back = NoisyChannelModel::load(dir / "model");
  CHECK(back.hyper() == m.hyper());
  CHECK(back.vocabulary() == m.vocabulary());
  CHECK(back.channel().entries() == m.channel().entries());
  for (const auto& p : corpus.pairs) {
    const auto a = m.decode(p.noisy), b = back.decode(p.noisy);
    CHECK(a.text == b.text);
    CHECK(a.score == b.score);
  }
  CHECK_THROWS_AS(NoisyChannelModel::load(dir / "nope"), IoError);
}

TEST_CASE("correct_lines is independent of jobs") {
  auto corpus = he_het_corpus();
  auto m = NoisyChannelModel::train(corpus, {});
  Lines noisy;
  for (const auto& p : corpus.pairs) noisy.push_back(p.noisy);
  CHECK(correct_lines(m, noisy, 1) == correct_lines(m, noisy, 4));
}
