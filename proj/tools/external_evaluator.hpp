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

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "histocr/optimizer.hpp"

namespace histocr::cli {

// One request per process: the command reads a JSON object on stdin and
// writes exactly one JSON object on stdout.
struct EvaluatorRequest {
  std::string mode = "train_eval";
  Assignment config;
  std::filesystem::path train_path;
  std::filesystem::path valid_path;
  std::filesystem::path model_path;
};

struct EvaluatorResponse {
  bool ok = false;
  std::optional<double> validation_accuracy;
  std::string message;
};

std::string request_to_json(const EvaluatorRequest& request);

// Throws ProtocolError unless `output` is a single JSON object with status
// "ok" or "error"; an ok train_eval response must carry an accuracy in [0,1].
EvaluatorResponse parse_response(std::string_view output, bool require_accuracy = true);

// Wraps a shell command as an optimizer Evaluator. A status-error response
// fails the trial; anything else off-protocol throws ProtocolError.
class ExternalEvaluator {
 public:
  ExternalEvaluator(std::string command, std::filesystem::path train_path,
                    std::filesystem::path valid_path, std::filesystem::path work_dir);

  double operator()(const Assignment& config) const;

 private:
  std::string command_;
  std::filesystem::path train_path_;
  std::filesystem::path valid_path_;
  std::filesystem::path work_dir_;
  mutable std::atomic<unsigned> counter_{0};
};

std::string shell_quote(std::string_view text);

}  // namespace histocr::cli
