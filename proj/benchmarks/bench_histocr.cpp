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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "histocr/align.hpp"
#include "histocr/corrector.hpp"
#include "histocr/error_model.hpp"
#include "histocr/text.hpp"

namespace {

constexpr std::u32string_view kAlphabet = U"אבגדהוזחטיכלמנסעפצקרשת";

histocr::Text random_text(std::mt19937_64& rng, std::size_t length) {
  std::uniform_int_distribution<std::size_t> pick(0, kAlphabet.size() - 1);
  histocr::Text s(length, U' ');
  for (auto& c : s) c = kAlphabet[pick(rng)];
  return s;
}

std::vector<histocr::Text> sentences(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<histocr::Text> vocab;
  for (int i = 0; i < 200; ++i) vocab.push_back(random_text(rng, 2 + rng() % 5));
  std::vector<histocr::Text> lines;
  for (std::size_t i = 0; i < n; ++i) {
    histocr::Text line;
    const auto words = 4 + rng() % 6;
    for (std::size_t w = 0; w < words; ++w) {
      if (w) line += U' ';
      line += vocab[rng() % vocab.size()];
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

void BM_Levenshtein(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto a = random_text(rng, len);
  const auto b = random_text(rng, len);
  for (auto _ : state) benchmark::DoNotOptimize(histocr::levenshtein(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Levenshtein)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_NeedlemanWunsch(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto a = random_text(rng, len);
  const auto b = random_text(rng, len);
  for (auto _ : state) benchmark::DoNotOptimize(histocr::needleman_wunsch(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NeedlemanWunsch)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_InjectCorpus(benchmark::State& state) {
  const auto gold = sentences(static_cast<std::size_t>(state.range(0)), 3);
  histocr::NoiseConfig config;
  config.char_freq = histocr::build_char_frequency_table(gold);
  for (auto _ : state) benchmark::DoNotOptimize(histocr::inject_corpus(gold, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_InjectCorpus)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CorrectLine(benchmark::State& state) {
  const auto gold = sentences(2000, 4);
  histocr::NoiseConfig config;
  config.noise_ratio = 0.1;
  config.char_freq = histocr::build_char_frequency_table(gold);
  const auto train = histocr::inject_corpus(gold, config);
  histocr::NoisyChannelHyper hyper;
  hyper.beam_width = static_cast<int>(state.range(0));
  const auto model = histocr::NoisyChannelModel::train(train, hyper);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.correct(train.pairs[i].noisy));
    i = (i + 1) % train.size();
  }
}
BENCHMARK(BM_CorrectLine)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
