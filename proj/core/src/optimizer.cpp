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

#include <chrono>
#include <cmath>
#include <sstream>

#include "histocr/error.hpp"
#include "histocr/optimizer.hpp"
#include "histocr/parallel.hpp"

namespace histocr {

namespace {

std::string describe_failures(const std::string& stage, const std::vector<TrialRecord>& trials) {
  std::ostringstream out;
  out << "stage '" << stage << "': all " << trials.size() << " values failed";
  for (const auto& t : trials) {
    auto it = t.config.find(stage);
    out << "; " << (it == t.config.end() ? "?" : it->second) << ": " << t.message;
  }
  return out.str();
}

// Evaluates `configs` (possibly concurrently) and returns one record per
// config in input order.
std::vector<TrialRecord> run_trials(const std::vector<Assignment>& configs, const std::string& stage,
                                    const Evaluator& evaluate, unsigned jobs) {
  std::vector<TrialRecord> records(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) {
    TrialRecord& r = records[i];
    r.config = configs[i];
    r.stage = stage;
    const auto start = std::chrono::steady_clock::now();
    try {
      const double score = evaluate(configs[i]);
      if (std::isfinite(score) && score >= 0.0 && score <= 1.0) {
        r.score = score;
      } else {
        r.score = kFailedScore;
        r.message = "score outside [0,1]";
      }
    } catch (const ProtocolError&) {
      throw;
    } catch (const std::exception& e) {
      r.score = kFailedScore;
      r.message = e.what();
      if (r.message.empty()) r.message = "evaluation failed";
    } catch (...) {
      r.score = kFailedScore;
      r.message = "evaluation failed";
    }
    r.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return records;
}

}  // namespace

SearchAborted::SearchAborted(std::string stage, std::vector<TrialRecord> stage_trials)
    : std::runtime_error(describe_failures(stage, stage_trials)),
      stage_(std::move(stage)),
      trials_(std::move(stage_trials)) {}

GreedyResult greedy_search(const HyperParamSpace& space, const Evaluator& evaluate,
                           const SearchOptions& options) {
  GreedyResult result;
  Assignment current = space.defaults();
  std::map<std::string, double> cache;
  if (options.cache) cache = options.warm_cache;

  for (const auto& param : space.params()) {
    std::vector<Assignment> configs;
    configs.reserve(param.values.size());
    for (const auto& v : param.values) {
      Assignment cfg = current;
      cfg[param.name] = v;
      configs.push_back(std::move(cfg));
    }

    std::vector<double> scores(configs.size(), kFailedScore);
    std::vector<Assignment> pending;
    std::vector<std::size_t> pending_index;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      if (options.cache) {
        if (auto it = cache.find(fingerprint(configs[i])); it != cache.end()) {
          scores[i] = it->second;
          continue;
        }
      }
      pending.push_back(configs[i]);
      pending_index.push_back(i);
    }

    auto records = run_trials(pending, param.name, evaluate, options.jobs);
    std::vector<TrialRecord> stage_records;
    for (std::size_t k = 0; k < records.size(); ++k) {
      scores[pending_index[k]] = records[k].score;
      if (options.cache) cache[fingerprint(records[k].config)] = records[k].score;
      if (options.on_trial) options.on_trial(records[k]);
      stage_records.push_back(records[k]);
      result.trials.push_back(std::move(records[k]));
    }

    std::size_t best = configs.size();
    for (std::size_t i = 0; i < configs.size(); ++i) {
      if (scores[i] == kFailedScore) continue;
      if (best == configs.size() || scores[i] > scores[best]) best = i;
    }
    if (best == configs.size()) throw SearchAborted(param.name, std::move(stage_records));

    current[param.name] = param.values[best];
    result.best_score = scores[best];
    result.stage_choices.emplace_back(param.name, param.values[best]);
  }
  result.best_config = current;
  return result;
}

GreedyResult grid_search(const HyperParamSpace& space, const Evaluator& evaluate, std::size_t cap,
                         unsigned jobs) {
  const std::size_t total = space.grid_size();
  if (total > cap) {
    throw ArgumentError("grid of " + std::to_string(total) + " configurations exceeds the cap of " +
                        std::to_string(cap));
  }
  const auto& params = space.params();
  std::vector<Assignment> configs;
  configs.reserve(total);
  std::vector<std::size_t> digit(params.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    Assignment cfg;
    for (std::size_t p = 0; p < params.size(); ++p) cfg[params[p].name] = params[p].values[digit[p]];
    configs.push_back(std::move(cfg));
    // Last parameter varies fastest.
    for (std::size_t p = params.size(); p-- > 0;) {
      if (++digit[p] < params[p].values.size()) break;
      digit[p] = 0;
    }
  }

  GreedyResult result;
  result.trials = run_trials(configs, "grid", evaluate, jobs);
  const TrialRecord* best = nullptr;
  for (const auto& t : result.trials) {
    if (t.failed()) continue;
    if (!best || t.score > best->score) best = &t;
  }
  if (!best) throw SearchAborted("grid", result.trials);
  result.best_config = best->config;
  result.best_score = best->score;
  return result;
}

}  // namespace histocr
