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
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "histocr/error.hpp"
#include "histocr/optimizer.hpp"

namespace histocr {

HyperParamSpace::HyperParamSpace(std::vector<HyperParam> params) : params_(std::move(params)) {
  if (params_.empty()) throw ArgumentError("hyperparameter space has no parameters");
  std::set<std::string> names;
  for (const auto& p : params_) {
    if (p.name.empty()) throw ArgumentError("hyperparameter with an empty name");
    if (!names.insert(p.name).second) throw ArgumentError("duplicate hyperparameter '" + p.name + "'");
    if (p.values.empty()) throw ArgumentError("hyperparameter '" + p.name + "' has no values");
    std::set<std::string> seen(p.values.begin(), p.values.end());
    if (seen.size() != p.values.size()) throw ArgumentError("hyperparameter '" + p.name + "' repeats a value");
    if (!seen.contains(p.default_value)) {
      throw ArgumentError("default '" + p.default_value + "' of '" + p.name + "' is not among its values");
    }
  }
  std::stable_sort(params_.begin(), params_.end(),
                   [](const HyperParam& a, const HyperParam& b) { return a.cost_rank > b.cost_rank; });
}

const HyperParam& HyperParamSpace::at(std::string_view name) const {
  for (const auto& p : params_) {
    if (p.name == name) return p;
  }
  throw ArgumentError("unknown hyperparameter '" + std::string(name) + "'");
}

Assignment HyperParamSpace::defaults() const {
  Assignment a;
  for (const auto& p : params_) a[p.name] = p.default_value;
  return a;
}

std::size_t HyperParamSpace::greedy_budget() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += p.values.size();
  return total;
}

std::size_t HyperParamSpace::grid_size() const {
  std::size_t product = 1;
  for (const auto& p : params_) {
    if (product > SIZE_MAX / p.values.size()) return SIZE_MAX;
    product *= p.values.size();
  }
  return product;
}

HyperParamSpace paper_default_space() {
  return HyperParamSpace({
      {"layers", {"2", "4"}, "2", 7},
      {"layer_type", {"gru-like", "lstm-like"}, "gru-like", 6},
      {"bidirectional", {"no", "yes"}, "no", 6},
      {"dropout", {"0", "0.2", "0.35", "0.5"}, "0.2", 5},
      {"units", {"200", "500", "1000"}, "500", 4},
      {"batch_size", {"32", "64", "100", "256", "512"}, "100", 3},
      {"epoch_size", {"5000", "20000", "100000", "250000"}, "20000", 2},
  });
}

HyperParamSpace noisy_channel_space() {
  return HyperParamSpace({
      {"beam_width", {"1", "2", "4", "8"}, "4", 5},
      {"max_edits_per_word", {"1", "2"}, "2", 4},
      {"ngram_order", {"2", "3", "4", "5"}, "3", 3},
      {"channel_weight", {"0.5", "1", "2", "4"}, "1", 2},
      {"smoothing_k", {"0.01", "0.1", "1"}, "0.1", 1},
  });
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r"));
  const auto end = s.find_last_not_of(" \t\r");
  s.erase(end == std::string::npos ? 0 : end + 1);
  return s;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

HyperParamSpace read_space(std::istream& in) {
  std::vector<HyperParam> params;
  std::vector<std::set<std::string>> keys_seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const std::string where = "space line " + std::to_string(line_no) + ": ";
    if (line == "[param]") {
      params.emplace_back();
      params.back().cost_rank = 0;
      keys_seen.emplace_back();
      continue;
    }
    if (params.empty()) throw StructuralError(where + "expected a [param] block first");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw StructuralError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!keys_seen.back().insert(key).second) throw StructuralError(where + "repeated key '" + key + "'");
    HyperParam& p = params.back();
    if (key == "name") {
      p.name = value;
    } else if (key == "values") {
      p.values = split_commas(value);
    } else if (key == "default") {
      p.default_value = value;
    } else if (key == "cost_rank") {
      try {
        std::size_t used = 0;
        p.cost_rank = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw StructuralError(where + "cost_rank must be an integer");
      }
    } else {
      throw StructuralError(where + "unknown key '" + key + "'");
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (const char* required : {"name", "values", "default"}) {
      if (!keys_seen[i].contains(required)) {
        throw StructuralError("space block " + std::to_string(i + 1) + " lacks '" + required + "'");
      }
    }
  }
  try {
    return HyperParamSpace(std::move(params));
  } catch (const ArgumentError& e) {
    throw StructuralError(std::string("invalid space: ") + e.what());
  }
}

HyperParamSpace read_space(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_space(in);
}

void write_space(const HyperParamSpace& space, std::ostream& out) {
  bool first = true;
  for (const auto& p : space.params()) {
    if (!first) out << '\n';
    first = false;
    out << "[param]\nname = " << p.name << "\nvalues = ";
    for (std::size_t i = 0; i < p.values.size(); ++i) out << (i ? "," : "") << p.values[i];
    out << "\ndefault = " << p.default_value << "\ncost_rank = " << p.cost_rank << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json token_to_json(const std::string& token) {
  if (token == "true") return true;
  if (token == "false") return false;
  auto parsed = nlohmann::json::parse(token, nullptr, false);
  if (!parsed.is_discarded() && parsed.is_number()) return parsed;
  return token;
}

std::string json_to_token(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean() || v.is_number()) return v.dump();
  throw ProtocolError("config values must be strings, numbers or booleans");
}

nlohmann::json config_json(const Assignment& config) {
  nlohmann::json obj = nlohmann::json::object();
  for (const auto& [k, v] : config) obj[k] = token_to_json(v);
  return obj;
}

}  // namespace

std::string fingerprint(const Assignment& config) { return config_json(config).dump(); }

std::string assignment_to_json(const Assignment& config) { return fingerprint(config); }

Assignment assignment_from_json(const std::string& json) {
  auto parsed = nlohmann::json::parse(json, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) throw ProtocolError("config is not a JSON object");
  Assignment a;
  for (const auto& [k, v] : parsed.items()) a[k] = json_to_token(v);
  return a;
}

std::string trial_to_json(const TrialRecord& trial) {
  nlohmann::ordered_json j;
  j["stage"] = trial.stage;
  j["config"] = config_json(trial.config);
  if (trial.failed()) j["score"] = nullptr;
  else j["score"] = trial.score;
  j["duration"] = trial.duration_seconds;
  if (!trial.message.empty()) j["message"] = trial.message;
  return j.dump();
}

TrialRecord trial_from_json(const std::string& line) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw StructuralError("trial log: malformed record");
  TrialRecord t;
  try {
    t.stage = j.at("stage").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) t.config[k] = json_to_token(v);
    const auto& score = j.at("score");
    t.score = score.is_null() ? kFailedScore : score.get<double>();
    t.duration_seconds = j.value("duration", 0.0);
    t.message = j.value("message", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("trial log: ") + e.what());
  } catch (const ProtocolError& e) {
    throw StructuralError(std::string("trial log: ") + e.what());
  }
  return t;
}

std::vector<TrialRecord> read_trial_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<TrialRecord> trials;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    trials.push_back(trial_from_json(line));
  }
  return trials;
}

std::map<std::string, double> cache_from_trials(const std::vector<TrialRecord>& trials) {
  std::map<std::string, double> cache;
  for (const auto& t : trials) {
    if (!t.failed()) cache[fingerprint(t.config)] = t.score;
  }
  return cache;
}

}  // namespace histocr
