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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace histocr {

// Finalizer from SplitMix64. Used to derive independent per-line seeds so the
// stream for line i does not depend on how lines are scheduled.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Source of randomness consumed by the injector. Abstract so tests can script
// exact draws.
class RandomStream {
 public:
  virtual ~RandomStream() = default;
  // Uniform in [0, 1).
  virtual double uniform() = 0;
  // Uniform integer in [0, n); n > 0.
  virtual std::size_t index(std::size_t n) = 0;
};

class EngineStream final : public RandomStream {
 public:
  explicit EngineStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() override { return std::generate_canonical<double, 53>(engine_); }

  std::size_t index(std::size_t n) override {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

// Position of u * total in a cumulative weight array. Entries with zero
// weight are never selected.
inline std::size_t pick_cumulative(std::span<const double> cumulative, double u) {
  const double target = u * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace histocr
