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

#include "external_evaluator.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "histocr/error.hpp"

namespace histocr::cli {

namespace {

using nlohmann::json;

std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
  return s;
}

// FNV-1a: stable across platforms, unlike std::hash.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct PipeCloser {
  void operator()(FILE* f) const {
    if (f) pclose(f);
  }
};

}  // namespace

std::string shell_quote(std::string_view text) {
  std::string quoted = "'";
  for (char c : text) {
    if (c == '\'') {
      quoted += "'\\''";
    } else {
      quoted += c;
    }
  }
  quoted += '\'';
  return quoted;
}

std::string request_to_json(const EvaluatorRequest& request) {
  nlohmann::ordered_json j;
  j["mode"] = request.mode;
  j["config"] = json::parse(assignment_to_json(request.config));
  j["train_path"] = request.train_path.string();
  j["valid_path"] = request.valid_path.string();
  j["model_path"] = request.model_path.string();
  return j.dump();
}

EvaluatorResponse parse_response(std::string_view output, bool require_accuracy) {
  json j;
  try {
    j = json::parse(output);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("evaluator output is not a single JSON document: ") +
                        e.what());
  }
  if (!j.is_object()) throw ProtocolError("evaluator response is not a JSON object");
  const auto status = j.find("status");
  if (status == j.end() || !status->is_string()) {
    throw ProtocolError("evaluator response lacks a string \"status\"");
  }
  EvaluatorResponse response;
  if (const auto m = j.find("message"); m != j.end()) {
    if (!m->is_string()) throw ProtocolError("evaluator \"message\" is not a string");
    response.message = m->get<std::string>();
  }
  const auto& s = status->get_ref<const std::string&>();
  if (s == "error") return response;
  if (s != "ok") throw ProtocolError("unknown evaluator status \"" + s + "\"");
  response.ok = true;
  const auto acc = j.find("validation_accuracy");
  if (acc == j.end() || acc->is_null()) {
    if (require_accuracy) throw ProtocolError("ok response without validation_accuracy");
    return response;
  }
  if (!acc->is_number()) throw ProtocolError("validation_accuracy is not a number");
  const double v = acc->get<double>();
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ProtocolError("validation_accuracy " + acc->dump() + " outside [0,1]");
  }
  response.validation_accuracy = v;
  return response;
}

ExternalEvaluator::ExternalEvaluator(std::string command, std::filesystem::path train_path,
                                     std::filesystem::path valid_path,
                                     std::filesystem::path work_dir)
    : command_(std::move(command)),
      train_path_(std::filesystem::absolute(train_path)),
      valid_path_(std::filesystem::absolute(valid_path)),
      work_dir_(std::filesystem::absolute(work_dir)) {
  if (command_.empty()) throw ArgumentError("external evaluator command is empty");
  std::filesystem::create_directories(work_dir_ / "requests");
  std::filesystem::create_directories(work_dir_ / "models");
}

double ExternalEvaluator::operator()(const Assignment& config) const {
  const std::string tag = hex64(fnv1a(fingerprint(config)));
  EvaluatorRequest request;
  request.config = config;
  request.train_path = train_path_;
  request.valid_path = valid_path_;
  request.model_path = work_dir_ / "models" / tag;

  const auto request_path =
      work_dir_ / "requests" / (tag + "-" + std::to_string(counter_.fetch_add(1)) + ".json");
  {
    std::ofstream out(request_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + request_path.string());
    out << request_to_json(request) << '\n';
  }

  const std::string command = command_ + " < " + shell_quote(request_path.string());
  std::unique_ptr<FILE, PipeCloser> pipe(popen(command.c_str(), "r"));
  if (!pipe) throw ProtocolError("cannot start evaluator: " + command_);
  std::string output;
  char buffer[4096];
  std::size_t n;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe.get())) > 0) output.append(buffer, n);
  const int status = pclose(pipe.release());
  std::filesystem::remove(request_path);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    throw ProtocolError("evaluator exited with status " + std::to_string(code) + ": " +
                        command_);
  }

  const auto response = parse_response(output);
  if (!response.ok) {
    throw std::runtime_error(response.message.empty() ? "evaluator reported an error"
                                                      : response.message);
  }
  return *response.validation_accuracy;
}

}  // namespace histocr::cli
