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

// Independent reference implementations used by the unit and acceptance
// tests. They favour obviousness over speed and share no code with core.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "histocr/random.hpp"
#include "histocr/text.hpp"

namespace histocr::oracle {

// Memoized recursion straight from the edit-distance recurrence.
inline std::size_t recursive_edit_distance(const Text& a, const Text& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, go(i + 1, j) + 1);
    best = std::min(best, go(i, j + 1) + 1);
    return memo[key] = best;
  };
  return go(0, 0);
}

// Plain edit distance over token sequences.
template <typename T>
std::size_t token_edit_distance(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

// Words as maximal runs outside `delims`, by a character-by-character scan.
inline std::vector<Text> words(const Text& line, const std::u32string& delims) {
  std::vector<Text> out;
  Text cur;
  for (char32_t c : line) {
    if (delims.find(c) != std::u32string::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// Chi-square(1) upper tail by Simpson integration of the density after the
// substitution x = t^2, which removes the singularity at 0:
//   P(X > x) = 1 - 2 * integral_0^sqrt(x) phi(t) dt.
inline double chi_square1_tail(double x) {
  if (x <= 0) return 1.0;
  const double upper = std::sqrt(x);
  const int n = 20000;
  const double h = upper / n;
  auto phi = [](double t) { return std::exp(-t * t / 2) / std::sqrt(2 * std::numbers::pi); };
  double sum = phi(0) + phi(upper);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * phi(i * h);
  return std::clamp(1.0 - 2.0 * sum * h / 3.0, 0.0, 1.0);
}

// Two-sided exact binomial p for min(b,c) successes in b+c trials at 1/2.
inline double exact_binomial_two_sided(std::uint64_t b, std::uint64_t c) {
  const std::uint64_t n = b + c, k = std::min(b, c);
  double tail = 0;
  for (std::uint64_t i = 0; i <= k; ++i) {
    double term = 1;
    for (std::uint64_t j = 0; j < i; ++j) term *= static_cast<double>(n - j) / static_cast<double>(j + 1);
    tail += term * std::pow(0.5, static_cast<double>(n));
  }
  return std::min(1.0, 2 * tail);
}

inline std::map<char32_t, std::uint64_t> naive_char_counts(const std::vector<Text>& lines) {
  std::map<char32_t, std::uint64_t> counts;
  for (const auto& line : lines)
    for (char32_t c : line)
      if (c != U' ' && c != U'\t') ++counts[c];
  return counts;
}

// Replays a fixed list of draws; index(n) consumes the next scripted integer
// and uniform() the next scripted double.
class ScriptedStream final : public RandomStream {
 public:
  ScriptedStream(std::vector<double> uniforms, std::vector<std::size_t> indices, double fallback = 0.0)
      : uniforms_(std::move(uniforms)), indices_(std::move(indices)), fallback_(fallback) {}

  double uniform() override { return u_ < uniforms_.size() ? uniforms_[u_++] : fallback_; }
  std::size_t index(std::size_t n) override {
    const std::size_t v = i_ < indices_.size() ? indices_[i_++] : 0;
    return std::min(v, n - 1);
  }

  std::size_t uniforms_used() const { return u_; }

 private:
  std::vector<double> uniforms_;
  std::vector<std::size_t> indices_;
  double fallback_;
  std::size_t u_ = 0, i_ = 0;
};

// Hand-rolled generators for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  bool coin(double p = 0.5) { return unit() < p; }

  Text string(std::size_t max_len, std::u32string_view alphabet) {
    Text s(below(max_len + 1), U'?');
    for (auto& c : s) c = alphabet[below(alphabet.size())];
    return s;
  }

  Text word(std::size_t min_len, std::size_t max_len, std::u32string_view alphabet) {
    Text s(min_len + below(max_len - min_len + 1), U'?');
    for (auto& c : s) c = alphabet[below(alphabet.size())];
    return s;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Text join(const std::vector<Text>& words, char32_t sep = U' ') {
  Text out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += sep;
    out += words[i];
  }
  return out;
}

}  // namespace histocr::oracle
