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
#include <string>

#include "histocr/error.hpp"
#include "histocr/error_model.hpp"
#include "histocr/parallel.hpp"

namespace histocr {

void NoiseConfig::validate() const {
  if (!(noise_ratio > 0.0 && noise_ratio < 1.0)) {
    throw ArgumentError("noise ratio must satisfy 0 < NR < 1, got " + std::to_string(noise_ratio));
  }
  if (max_swaps < 1) throw ArgumentError("max_swaps must be >= 1");
  if (generic_noise && char_freq.empty()) {
    throw ArgumentError("generic noise needs a non-empty character frequency table");
  }
}

void InjectionStats::add(const InjectionEvents& e) {
  ++lines;
  deletion_events += e.deleted ? 1 : 0;
  insertion_events += e.inserted ? 1 : 0;
  swap_events += e.swaps > 0 ? 1 : 0;
  swaps += static_cast<std::uint64_t>(e.swaps);
  replacements += static_cast<std::uint64_t>(e.replacements);
}

InjectionStats& InjectionStats::operator+=(const InjectionStats& o) {
  lines += o.lines;
  deletion_events += o.deletion_events;
  insertion_events += o.insertion_events;
  swap_events += o.swap_events;
  swaps += o.swaps;
  replacements += o.replacements;
  return *this;
}

Text inject_line(TextView line, const NoiseConfig& config, RandomStream& rng,
                 InjectionEvents* events) {
  config.validate();
  InjectionEvents local;
  Text out(line);
  const double nr = config.noise_ratio;

  if (config.generic_noise) {
    // Deletion, weighted by the global frequency of each occurrence's
    // character. Never empties the line.
    if (rng.uniform() < nr && out.size() >= 2) {
      std::vector<double> cumulative(out.size());
      double running = 0.0;
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double f = config.char_freq.frequency(out[i]);
        running += f > 0.0 ? f : config.char_freq.min_frequency();
        cumulative[i] = running;
      }
      out.erase(pick_cumulative(cumulative, rng.uniform()), 1);
      local.deleted = true;
    }

    if (rng.uniform() < nr) {
      const char32_t c = config.char_freq.sample(rng.uniform());
      out.insert(rng.index(out.size() + 1), 1, c);
      local.inserted = true;
    }

    if (rng.uniform() < nr && out.size() >= 2) {
      const std::size_t k = 1 + rng.index(static_cast<std::size_t>(config.max_swaps));
      for (std::size_t s = 0; s < k; ++s) {
        const std::size_t pos = rng.index(out.size() - 1);
        std::swap(out[pos], out[pos + 1]);
      }
      local.swaps = static_cast<int>(k);
    }
  }

  if (config.profile) {
    std::vector<std::size_t> positions;
    for (const auto& entry : config.profile->entries()) {
      positions.clear();
      for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == entry.correct_char) positions.push_back(i);
      }
      if (positions.empty()) continue;
      if (rng.uniform() < nr * entry.probability) {
        out[positions[rng.index(positions.size())]] = entry.error_char;
        ++local.replacements;
      }
    }
  }

  if (events) *events = local;
  return out;
}

EngineStream line_stream(std::uint64_t seed, std::uint64_t index) {
  return EngineStream(derive_seed(seed, index));
}

Corpus inject_corpus(std::span<const Text> gold_lines, const NoiseConfig& config, unsigned jobs,
                     InjectionStats* stats, std::uint64_t first_index) {
  config.validate();
  Corpus corpus;
  corpus.pairs.resize(gold_lines.size());
  std::vector<InjectionEvents> events(stats ? gold_lines.size() : 0);

  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (gold_lines.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::size_t end = std::min(gold_lines.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      EngineStream rng = line_stream(config.seed, first_index + i);
      auto& pair = corpus.pairs[i];
      pair.noisy = inject_line(gold_lines[i], config, rng, stats ? &events[i] : nullptr);
      pair.gold = gold_lines[i];
      pair.id = i;
    }
  });

  if (stats) {
    for (const auto& e : events) stats->add(e);
  }
  return corpus;
}

SweepResult noise_sweep(std::span<const Text> gold_lines, const NoiseConfig& base,
                        std::span<const double> ratios, const CorpusEvaluator& evaluator,
                        unsigned jobs) {
  if (ratios.empty()) throw ArgumentError("noise sweep needs at least one ratio");
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) throw ArgumentError("sweep ratio outside 0 < NR < 1: " + std::to_string(r));
  }
  SweepResult result;
  for (double r : ratios) {
    NoiseConfig config = base;
    config.noise_ratio = r;
    const Corpus corpus = inject_corpus(gold_lines, config, jobs);
    result.rows.push_back({r, evaluator(corpus)});
  }
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].score < result.rows[i - 1].score) result.non_decreasing = false;
  }
  return result;
}

}  // namespace histocr
