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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace histocr {

// Full hyperparameter assignment, name -> value token.
using Assignment = std::map<std::string, std::string>;

struct HyperParam {
  std::string name;
  std::vector<std::string> values;
  std::string default_value;
  int cost_rank = 0;
};

// Parameters ordered by descending cost_rank; equal ranks keep declaration
// order.
class HyperParamSpace {
 public:
  HyperParamSpace() = default;
  explicit HyperParamSpace(std::vector<HyperParam> params);

  const std::vector<HyperParam>& params() const { return params_; }
  std::size_t size() const { return params_.size(); }
  const HyperParam& at(std::string_view name) const;

  Assignment defaults() const;
  // Sum of value counts: the greedy budget without caching.
  std::size_t greedy_budget() const;
  // Product of value counts; saturates at SIZE_MAX.
  std::size_t grid_size() const;

 private:
  std::vector<HyperParam> params_;
};

// Seven-parameter recurrent-network space with the baseline structure as
// defaults: layers, layer_type, bidirectional, dropout, units, batch_size,
// epoch_size.
HyperParamSpace paper_default_space();

// Five-parameter space of the noisy-channel corrector.
HyperParamSpace noisy_channel_space();

// Key-value file: blocks opened by `[param]` with `name`, `values` (comma
// list), `default` and `cost_rank` keys; `#` starts a comment line.
HyperParamSpace read_space(std::istream& in);
HyperParamSpace read_space(const std::filesystem::path& path);
void write_space(const HyperParamSpace& space, std::ostream& out);

// JSON object with sorted keys. Value tokens that parse as JSON numbers or
// booleans are emitted as such, everything else as strings.
std::string fingerprint(const Assignment& config);
std::string assignment_to_json(const Assignment& config);
Assignment assignment_from_json(const std::string& json);

inline constexpr double kFailedScore = -std::numeric_limits<double>::infinity();

struct TrialRecord {
  Assignment config;
  double score = kFailedScore;
  double duration_seconds = 0.0;
  std::string stage;
  std::string message;  // failure reason, empty on success

  bool failed() const { return score == kFailedScore; }
};

struct GreedyResult {
  Assignment best_config;
  double best_score = kFailedScore;
  std::vector<TrialRecord> trials;
  // Chosen value per stage, in stage order.
  std::vector<std::pair<std::string, std::string>> stage_choices;
};

// Returns a score in [0,1]. Exceptions mark the trial failed, except
// ProtocolError which aborts the search.
using Evaluator = std::function<double(const Assignment&)>;

struct SearchOptions {
  bool cache = true;
  unsigned jobs = 1;
  // Scores known in advance (e.g. from a previous trial log); consulted only
  // when cache is on.
  std::map<std::string, double> warm_cache;
  // Called after every new trial in log order.
  std::function<void(const TrialRecord&)> on_trial;
};

// One parameter at a time in space order: stage k scores every value of
// parameter k with earlier parameters at their chosen optima and later ones
// at defaults, then fixes the argmax (ties: first declared value). Throws
// SearchAborted when every value of a stage fails.
GreedyResult greedy_search(const HyperParamSpace& space, const Evaluator& evaluate,
                           const SearchOptions& options = {});

inline constexpr std::size_t kDefaultGridCap = 10000;

// Exhaustive search; throws ArgumentError naming the grid size when it
// exceeds `cap`.
GreedyResult grid_search(const HyperParamSpace& space, const Evaluator& evaluate,
                         std::size_t cap = kDefaultGridCap, unsigned jobs = 1);

class SearchAborted : public std::runtime_error {
 public:
  SearchAborted(std::string stage, std::vector<TrialRecord> stage_trials);
  const std::string& stage() const { return stage_; }
  const std::vector<TrialRecord>& stage_trials() const { return trials_; }

 private:
  std::string stage_;
  std::vector<TrialRecord> trials_;
};

// Line-delimited JSON: {"stage":..,"config":{..},"score":..,"duration":..}.
// Failed trials carry "score":null and a "message".
std::string trial_to_json(const TrialRecord& trial);
TrialRecord trial_from_json(const std::string& line);
std::vector<TrialRecord> read_trial_log(const std::filesystem::path& path);
// fingerprint -> score of successful trials.
std::map<std::string, double> cache_from_trials(const std::vector<TrialRecord>& trials);

}  // namespace histocr
