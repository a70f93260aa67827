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
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "histocr/align.hpp"
#include "histocr/corrector.hpp"
#include "histocr/error.hpp"
#include "histocr/parallel.hpp"

namespace histocr {

std::vector<Text> correct_lines(const Corrector& corrector, std::span<const Text> noisy, unsigned jobs) {
  std::vector<Text> out(noisy.size());
  parallel_for(noisy.size(), jobs, [&](std::size_t i) { out[i] = corrector.correct(noisy[i]); });
  return out;
}

double validation_accuracy(const Corrector& corrector, const Corpus& corpus, unsigned jobs) {
  if (corpus.empty()) throw StructuralError("validation corpus is empty");
  std::vector<char> exact(corpus.size(), 0);
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    exact[i] = corrector.correct(corpus.pairs[i].noisy) == corpus.pairs[i].gold ? 1 : 0;
  });
  const auto hits = std::count(exact.begin(), exact.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(corpus.size());
}

// ---------------------------------------------------------------------------

void NoisyChannelHyper::validate() const {
  if (ngram_order < 2 || ngram_order > 12) throw ArgumentError("ngram_order must lie in [2,12]");
  if (!(channel_weight >= 0.0) || !std::isfinite(channel_weight)) {
    throw ArgumentError("channel_weight must be finite and >= 0");
  }
  if (beam_width < 1) throw ArgumentError("beam_width must be >= 1");
  if (max_edits_per_word < 0) throw ArgumentError("max_edits_per_word must be >= 0");
  if (!(smoothing_k > 0.0) || !std::isfinite(smoothing_k)) throw ArgumentError("smoothing_k must be > 0");
}

namespace {

int parse_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw ArgumentError(key + ": expected an integer, got '" + value + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw ArgumentError(key + ": expected a number, got '" + value + "'");
  return v;
}

std::string shortest(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  // Prefer the short form when it round-trips.
  for (int p = 1; p <= 17; ++p) {
    std::ostringstream s;
    s.precision(p);
    s << v;
    if (std::stod(s.str()) == v) return s.str();
  }
  return out.str();
}

}  // namespace

NoisyChannelHyper NoisyChannelHyper::from_assignment(const std::map<std::string, std::string>& values) {
  NoisyChannelHyper h;
  for (const auto& [key, value] : values) {
    if (key == "ngram_order") h.ngram_order = parse_int(key, value);
    else if (key == "channel_weight") h.channel_weight = parse_double(key, value);
    else if (key == "beam_width") h.beam_width = parse_int(key, value);
    else if (key == "max_edits_per_word") h.max_edits_per_word = parse_int(key, value);
    else if (key == "smoothing_k") h.smoothing_k = parse_double(key, value);
    else throw ArgumentError("unknown noisy-channel hyperparameter '" + key + "'");
  }
  h.validate();
  return h;
}

std::map<std::string, std::string> NoisyChannelHyper::to_assignment() const {
  return {{"beam_width", std::to_string(beam_width)},
          {"channel_weight", shortest(channel_weight)},
          {"max_edits_per_word", std::to_string(max_edits_per_word)},
          {"ngram_order", std::to_string(ngram_order)},
          {"smoothing_k", shortest(smoothing_k)}};
}

// ---------------------------------------------------------------------------

std::vector<Text> tokenize_spaces(TextView line) {
  std::vector<Text> tokens;
  std::size_t start = 0;
  for (;;) {
    const auto sp = line.find(U' ', start);
    tokens.emplace_back(line.substr(start, sp - start));
    if (sp == TextView::npos) break;
    start = sp + 1;
  }
  return tokens;
}

NoisyChannelModel NoisyChannelModel::train(const Corpus& train, const NoisyChannelHyper& hyper,
                                           unsigned jobs) {
  hyper.validate();
  if (train.empty()) throw StructuralError("cannot train on an empty corpus");

  NoisyChannelModel model;
  model.hyper_ = hyper;
  model.lm_ = CharNgramModel(hyper.ngram_order, hyper.smoothing_k);
  std::set<Text> vocab;
  for (const auto& pair : train.pairs) {
    model.lm_.add_sentence(pair.gold);
    for (auto& tok : tokenize_spaces(pair.gold)) {
      if (!tok.empty()) vocab.insert(std::move(tok));
    }
  }
  model.vocabulary_.assign(vocab.begin(), vocab.end());
  model.channel_ = extract_confusions(train, jobs);
  model.index_vocabulary();
  model.index_channel();
  return model;
}

void NoisyChannelModel::index_vocabulary() {
  by_length_.clear();
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) by_length_[vocabulary_[i].size()].push_back(i);
}

void NoisyChannelModel::index_channel() {
  sub_counts_.clear();
  errors_per_gold_.clear();
  for (const auto& e : channel_.entries()) {
    const auto n = channel_.count(e);
    sub_counts_[{e.correct_char, e.error_char}] = n;
    errors_per_gold_[e.correct_char] += n;
  }
}

bool NoisyChannelModel::in_vocabulary(TextView word) const {
  return std::binary_search(vocabulary_.begin(), vocabulary_.end(), word,
                            [](const auto& a, const auto& b) { return TextView(a) < TextView(b); });
}

std::vector<Text> NoisyChannelModel::candidates(TextView word) const {
  std::vector<Text> out{Text(word)};
  const auto bound = static_cast<std::size_t>(hyper_.max_edits_per_word);
  if (bound > 0) {
    const std::size_t lo = word.size() > bound ? word.size() - bound : 0;
    for (auto it = by_length_.lower_bound(lo);
         it != by_length_.end() && it->first <= word.size() + bound; ++it) {
      for (std::size_t i : it->second) {
        if (bounded_levenshtein(vocabulary_[i], word, bound) <= bound) out.push_back(vocabulary_[i]);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double NoisyChannelModel::match_log_prob(char32_t gold) const {
  const double k = hyper_.smoothing_k;
  const double a = static_cast<double>(lm_.alphabet_size() + 1);
  const double n = static_cast<double>(lm_.unigram_count(gold));
  double errors = 0.0;
  if (auto it = errors_per_gold_.find(gold); it != errors_per_gold_.end()) {
    errors = std::min(n, static_cast<double>(it->second));
  }
  return std::log((n - errors + k) / (n + k * a));
}

double NoisyChannelModel::substitute_log_prob(char32_t gold, char32_t error) const {
  const double k = hyper_.smoothing_k;
  const double a = static_cast<double>(lm_.alphabet_size() + 1);
  const double n = static_cast<double>(lm_.unigram_count(gold));
  double count = 0.0;
  if (auto it = sub_counts_.find({gold, error}); it != sub_counts_.end()) {
    count = static_cast<double>(it->second);
  }
  return std::log((count + k) / (n + k * a));
}

double NoisyChannelModel::gap_log_prob(char32_t c) const {
  const double k = hyper_.smoothing_k;
  const double a = static_cast<double>(lm_.alphabet_size() + 1);
  const double n = static_cast<double>(lm_.unigram_count(c));
  return std::log(k / (n + k * a));
}

double NoisyChannelModel::channel_log_prob(TextView noisy_word, TextView candidate) const {
  double total = 0.0;
  if (noisy_word == candidate) {
    for (char32_t c : candidate) total += match_log_prob(c);
    return total;
  }
  for (const auto& op : needleman_wunsch(candidate, noisy_word).ops) {
    switch (op.kind()) {
      case EditKind::Match: total += match_log_prob(*op.gold_char()); break;
      case EditKind::Substitute: total += substitute_log_prob(*op.gold_char(), *op.other_char()); break;
      case EditKind::Delete: total += gap_log_prob(*op.gold_char()); break;
      case EditKind::Insert: total += gap_log_prob(*op.other_char()); break;
    }
  }
  return total;
}

double NoisyChannelModel::score(TextView noisy, TextView candidate) const {
  const auto noisy_tokens = tokenize_spaces(noisy);
  const auto cand_tokens = tokenize_spaces(candidate);
  if (noisy_tokens.size() != cand_tokens.size()) {
    throw ArgumentError("score: candidate and noisy line differ in token count");
  }
  double channel = 0.0;
  for (std::size_t i = 0; i < noisy_tokens.size(); ++i) {
    channel += channel_log_prob(noisy_tokens[i], cand_tokens[i]);
  }
  return lm_.sentence_log_prob(candidate) + hyper_.channel_weight * channel;
}

namespace {

struct Hypothesis {
  Text text;
  Text history;
  double score = 0.0;
};

bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.text < b.text;
}

}  // namespace

NoisyChannelModel::Decoded NoisyChannelModel::beam_search(TextView noisy, int beam_width) const {
  if (beam_width < 1) throw ArgumentError("beam width must be >= 1");
  const auto tokens = tokenize_spaces(noisy);
  std::vector<Hypothesis> beam{{Text(), lm_.start_history(), 0.0}};
  std::vector<Hypothesis> next;

  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const Text& token = tokens[t];
    const std::vector<Text> cands = token.empty() ? std::vector<Text>{Text()} : candidates(token);
    std::vector<double> channel(cands.size());
    for (std::size_t c = 0; c < cands.size(); ++c) {
      channel[c] = hyper_.channel_weight * channel_log_prob(token, cands[c]);
    }
    next.clear();
    for (const auto& hyp : beam) {
      for (std::size_t c = 0; c < cands.size(); ++c) {
        Text piece = t > 0 ? Text(U" ") + cands[c] : cands[c];
        Hypothesis h;
        const double lm = lm_.extend(hyp.history, piece, &h.history);
        h.text = hyp.text + piece;
        h.score = hyp.score + lm + channel[c];
        next.push_back(std::move(h));
      }
    }
    const auto keep = std::min(next.size(), static_cast<std::size_t>(beam_width));
    std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(keep), next.end(), better);
    next.resize(keep);
    std::swap(beam, next);
  }

  for (auto& hyp : beam) hyp.score += lm_.end_log_prob(hyp.history);
  const auto best = std::min_element(beam.begin(), beam.end(), better);
  return {best->text, best->score};
}

NoisyChannelModel::Decoded NoisyChannelModel::decode(TextView noisy, int beam_width) const {
  if (beam_width <= 0) beam_width = hyper_.beam_width;
  Decoded best = beam_search(noisy, 1);
  for (int w = 2; w <= beam_width; ++w) {
    Decoded d = beam_search(noisy, w);
    if (d.score > best.score || (d.score == best.score && d.text < best.text)) best = std::move(d);
  }
  return best;
}

// ---------------------------------------------------------------------------

void NoisyChannelModel::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "hyper.cfg", std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / "hyper.cfg").string());
    for (const auto& [k, v] : hyper_.to_assignment()) out << k << " = " << v << '\n';
  }
  write_lines(vocabulary_, dir / "vocabulary.txt");
  lm_.save(dir / "ngrams.tsv");
  write_profile(channel_, dir / "channel.tsv");
}

NoisyChannelModel NoisyChannelModel::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("model directory not found: " + dir.string());
  std::map<std::string, std::string> values;
  {
    std::ifstream in(dir / "hyper.cfg", std::ios::binary);
    if (!in) throw IoError("cannot open " + (dir / "hyper.cfg").string());
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
      };
      values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
  }
  NoisyChannelModel model;
  model.hyper_ = NoisyChannelHyper::from_assignment(values);
  model.lm_ = CharNgramModel::load(dir / "ngrams.tsv", model.hyper_.ngram_order, model.hyper_.smoothing_k);
  {
    std::ifstream in(dir / "vocabulary.txt", std::ios::binary);
    if (!in) throw IoError("cannot open " + (dir / "vocabulary.txt").string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) model.vocabulary_.push_back(decode_utf8(line));
    }
    std::sort(model.vocabulary_.begin(), model.vocabulary_.end());
  }
  model.channel_ = read_profile(dir / "channel.tsv").profile;
  model.index_vocabulary();
  model.index_channel();
  return model;
}

}  // namespace histocr
