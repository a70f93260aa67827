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

#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "external_evaluator.hpp"
#include "histocr/corrector.hpp"
#include "histocr/error.hpp"
#include "histocr/error_model.hpp"
#include "histocr/metrics.hpp"
#include "histocr/optimizer.hpp"
#include "histocr/parallel.hpp"
#include "histocr/text.hpp"

namespace histocr::cli {

namespace fs = std::filesystem;

namespace {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::size_t kBlockLines = 1 << 14;

// Noisy/gold inputs given either as two parallel files or one TSV.
struct PairInputs {
  std::string noisy;
  std::string gold;
  std::string tsv;

  bool given() const { return !noisy.empty() || !gold.empty() || !tsv.empty(); }
};

void add_pair_options(CLI::App* app, PairInputs& in, const std::string& prefix,
                      const std::string& what) {
  app->add_option("--" + prefix + "noisy", in.noisy, "Noisy side of the " + what)
      ->check(CLI::ExistingFile);
  app->add_option("--" + prefix + "gold", in.gold, "Gold side of the " + what)
      ->check(CLI::ExistingFile);
  app->add_option("--" + prefix + "tsv", in.tsv, what + " as noisy<TAB>gold lines")
      ->check(CLI::ExistingFile);
}

Corpus load_pairs(const PairInputs& in, const std::string& prefix) {
  const bool files = !in.noisy.empty() || !in.gold.empty();
  if (files == !in.tsv.empty() || (files && (in.noisy.empty() || in.gold.empty()))) {
    throw ArgumentError("give either --" + prefix + "noisy with --" + prefix + "gold, or --" +
                        prefix + "tsv");
  }
  return files ? load_parallel_corpus(in.noisy, in.gold) : load_tsv_corpus(in.tsv);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// "\t", "\s", "\n" and "\\" escapes make whitespace delimiters typeable.
Text parse_delimiters(const std::string& spec) {
  std::string raw;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec[i] == '\\' && i + 1 < spec.size()) {
      const char e = spec[++i];
      raw += e == 't' ? '\t' : e == 's' ? ' ' : e == 'n' ? '\n' : e;
    } else {
      raw += spec[i];
    }
  }
  Text delimiters = decode_utf8(raw);
  if (delimiters.empty()) throw ArgumentError("--delimiters must list at least one character");
  return delimiters;
}

std::vector<Text> texts(const Corpus& corpus, bool noisy) {
  std::vector<Text> lines;
  lines.reserve(corpus.size());
  for (const auto& p : corpus.pairs) lines.push_back(noisy ? p.noisy : p.gold);
  return lines;
}

std::vector<Text> read_parallel_side(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Text> lines;
  std::string buffer;
  while (std::getline(in, buffer)) {
    if (lines.empty() && buffer.rfind("\xEF\xBB\xBF", 0) == 0) buffer.erase(0, 3);
    lines.push_back(normalize_line(buffer));
  }
  return lines;
}

std::optional<ErrorProfile> load_profile_option(const std::string& path, std::ostream& err) {
  if (path.empty()) return std::nullopt;
  auto loaded = read_profile(fs::path(path));
  for (const auto& w : loaded.warnings) err << "warning: " << path << ": " << w << '\n';
  return std::move(loaded.profile);
}

CharFrequencyTable frequencies_of(const fs::path& path) {
  PlainCorpusReader reader(path);
  CharCounter counter;
  Text line;
  while (reader.next(line)) counter.add(line);
  if (counter.counts().empty()) throw StructuralError("no characters in " + path.string());
  return counter.table();
}

void check_noise_ratio(double nr) {
  if (!(nr > 0.0 && nr < 1.0)) {
    throw ArgumentError("--noise-ratio must satisfy 0 < NR < 1, got " + fixed(nr, 4));
  }
}

// ---------------------------------------------------------------------------

struct ProfileArgs {
  PairInputs data;
  std::string out;
  std::string types;
  unsigned jobs = default_jobs();
};

int cmd_profile(const ProfileArgs& a, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_pairs(a.data, "");
  const ErrorProfile profile = extract_confusions(corpus, a.jobs);
  write_profile(profile, fs::path(a.out));
  {
    auto types = open_out(a.types.empty() ? a.out + ".types.tsv" : a.types);
    write_histogram(classify_corpus(corpus, a.jobs), types);
  }
  if (profile.empty()) {
    err << "warning: no character substitutions found; wrote an empty profile\n";
    return 0;
  }
  out << "Character\tFix\tDistribution\n";
  const std::size_t shown = std::min<std::size_t>(8, profile.size());
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& e = profile.entries()[i];
    out << encode_utf8(Text(1, e.error_char)) << '\t' << encode_utf8(Text(1, e.correct_char))
        << '\t' << fixed(100.0 * e.probability, 2) << "%\n";
  }
  out << profile.size() << " confusion pairs from " << profile.total_substitutions()
      << " substitutions in " << corpus.size() << " lines\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct InjectArgs {
  std::string input;
  std::string profile;
  std::string frequencies;
  std::string out;
  double noise_ratio = 0.2;
  std::uint64_t seed = kDefaultSeed;
  int max_swaps = 2;
  bool no_generic = false;
  unsigned jobs = default_jobs();
};

int cmd_inject(const InjectArgs& a, std::ostream& out, std::ostream& err) {
  check_noise_ratio(a.noise_ratio);
  NoiseConfig config;
  config.noise_ratio = a.noise_ratio;
  config.seed = a.seed;
  config.max_swaps = a.max_swaps;
  config.generic_noise = !a.no_generic;
  config.profile = load_profile_option(a.profile, err);
  if (config.generic_noise) {
    config.char_freq = frequencies_of(a.frequencies.empty() ? a.input : a.frequencies);
  }
  config.validate();

  auto noisy_out = open_out(a.out + ".noisy.txt");
  auto gold_out = open_out(a.out + ".gold.txt");
  PlainCorpusReader reader{fs::path(a.input)};
  InjectionStats stats;
  std::vector<Text> block;
  std::uint64_t index = 0;
  auto flush = [&] {
    if (block.empty()) return;
    InjectionStats part;
    const Corpus injected = inject_corpus(block, config, a.jobs, &part, index);
    for (const auto& p : injected.pairs) {
      noisy_out << encode_utf8(p.noisy) << '\n';
      gold_out << encode_utf8(p.gold) << '\n';
    }
    stats += part;
    index += block.size();
    block.clear();
  };
  Text line;
  while (reader.next(line)) {
    block.push_back(std::move(line));
    if (block.size() == kBlockLines) flush();
  }
  flush();
  if (!noisy_out || !gold_out) throw IoError("write failed under " + a.out);
  if (stats.lines == 0) throw StructuralError("no non-blank lines in " + a.input);

  const double n = static_cast<double>(stats.lines);
  out << "event\tcount\trate\n";
  out << "deletion\t" << stats.deletion_events << '\t' << fixed(stats.deletion_events / n, 4)
      << '\n';
  out << "insertion\t" << stats.insertion_events << '\t'
      << fixed(stats.insertion_events / n, 4) << '\n';
  out << "swap\t" << stats.swap_events << '\t' << fixed(stats.swap_events / n, 4) << '\n';
  out << "replacement\t" << stats.replacements << '\t' << fixed(stats.replacements / n, 4)
      << '\n';
  out << "lines\t" << stats.lines << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string gold;
  std::string ocred;
  std::string fixed_path;
  std::string compare;
  std::optional<std::string> delimiters;
  std::string out;
  bool no_timestamp = false;
  unsigned jobs = default_jobs();
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream&) {
  const Text delimiters =
      a.delimiters ? parse_delimiters(*a.delimiters) : Text(default_delimiters());
  const auto gold = read_parallel_side(a.gold);
  const auto ocred = read_parallel_side(a.ocred);
  const auto fixed_lines = read_parallel_side(a.fixed_path);
  auto check_len = [&](const std::vector<Text>& side, const std::string& path) {
    if (side.size() != gold.size()) {
      throw StructuralError("line count mismatch " + std::to_string(side.size()) + "≠" +
                            std::to_string(gold.size()) + " (" + path + " vs " + a.gold + ")");
    }
  };
  check_len(ocred, a.ocred);
  check_len(fixed_lines, a.fixed_path);
  if (gold.empty()) throw StructuralError("empty evaluation corpus: " + a.gold);

  const CorrectionEval eval = evaluate_corrector(gold, ocred, fixed_lines, a.jobs, delimiters);
  std::optional<McNemarResult> test;
  if (!a.compare.empty()) {
    const auto other = read_parallel_side(a.compare);
    check_len(other, a.compare);
    test = mcnemar(gold, fixed_lines, other);
  }

  std::string tsv = format_eval_tsv(eval);
  if (test) {
    std::ostringstream extra;
    extra << "mcnemar_b\t" << test->b << "\nmcnemar_c\t" << test->c << "\nmcnemar_chi2\t"
          << fixed(test->chi_square, 4) << "\nmcnemar_p\t" << format_p_value(test->p_value)
          << '\n';
    if (test->exact_p_value) {
      extra << "mcnemar_exact_p\t" << format_p_value(*test->exact_p_value) << '\n';
    }
    tsv += extra.str();
  }
  if (!a.out.empty()) {
    auto file = open_out(a.out);
    file << tsv;
  }

  if (!a.no_timestamp) out << "# generated " << utc_timestamp() << '\n';
  out << format_eval_table(eval);
  out << "Sequence accuracy (in %): " << fixed(100.0 * eval.sequence_accuracy, 2) << '\n';
  if (test) {
    out << "McNemar vs " << a.compare << ": b=" << test->b << " c=" << test->c
        << " chi2=" << fixed(test->chi_square, 4) << " p=" << format_p_value(test->p_value);
    if (test->exact_p_value) out << " exact p=" << format_p_value(*test->exact_p_value);
    out << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct HyperArgs {
  std::string config;
  std::optional<int> ngram_order;
  std::optional<double> channel_weight;
  std::optional<int> beam_width;
  std::optional<int> max_edits;
  std::optional<double> smoothing_k;
};

void add_hyper_options(CLI::App* app, HyperArgs& h) {
  app->add_option("--config", h.config, "best_config.json from optimize")
      ->check(CLI::ExistingFile);
  app->add_option("--ngram-order", h.ngram_order, "Character n-gram order");
  app->add_option("--channel-weight", h.channel_weight, "Weight of the error model");
  app->add_option("--beam-width", h.beam_width, "Decoder beam width");
  app->add_option("--max-edits", h.max_edits, "Edits allowed per word candidate");
  app->add_option("--smoothing-k", h.smoothing_k, "Add-k smoothing constant");
}

NoisyChannelHyper resolve_hyper(const HyperArgs& h) {
  NoisyChannelHyper hyper;
  if (!h.config.empty()) {
    std::ifstream in(h.config, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    Assignment values;
    try {
      values = assignment_from_json(text.str());
    } catch (const ProtocolError& e) {
      throw StructuralError(h.config + ": " + e.what());
    }
    hyper = NoisyChannelHyper::from_assignment(values);
  }
  if (h.ngram_order) hyper.ngram_order = *h.ngram_order;
  if (h.channel_weight) hyper.channel_weight = *h.channel_weight;
  if (h.beam_width) hyper.beam_width = *h.beam_width;
  if (h.max_edits) hyper.max_edits_per_word = *h.max_edits;
  if (h.smoothing_k) hyper.smoothing_k = *h.smoothing_k;
  hyper.validate();
  return hyper;
}

struct TrainArgs {
  PairInputs data;
  HyperArgs hyper;
  std::string model;
  unsigned jobs = default_jobs();
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream&) {
  const NoisyChannelHyper hyper = resolve_hyper(a.hyper);
  const Corpus corpus = load_pairs(a.data, "");
  if (corpus.empty()) throw StructuralError("training corpus is empty");
  const auto model = NoisyChannelModel::train(corpus, hyper, a.jobs);
  model.save(a.model);
  out << "trained on " << corpus.size() << " lines: " << model.vocabulary().size()
      << " vocabulary words, " << model.channel().size() << " confusion pairs\n";
  out << "model written to " << a.model << '\n';
  return 0;
}

struct CorrectArgs {
  std::string model;
  std::string input;
  std::string output;
  unsigned jobs = default_jobs();
};

int cmd_correct(const CorrectArgs& a, std::ostream& out, std::ostream&) {
  const auto model = NoisyChannelModel::load(a.model);
  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw IoError("cannot open " + a.input);
  auto sink = open_out(a.output);

  // Line-by-line in ordered blocks; blank lines pass through so the output
  // stays parallel to the input.
  std::vector<Text> block;
  std::uint64_t lines = 0;
  std::uint64_t changed = 0;
  auto flush = [&] {
    const auto fixed_lines = correct_lines(model, block, a.jobs);
    for (std::size_t i = 0; i < block.size(); ++i) {
      sink << encode_utf8(fixed_lines[i]) << '\n';
      changed += fixed_lines[i] != block[i];
    }
    lines += block.size();
    block.clear();
  };
  std::string buffer;
  while (std::getline(in, buffer)) {
    if (lines == 0 && block.empty() && buffer.rfind("\xEF\xBB\xBF", 0) == 0) buffer.erase(0, 3);
    block.push_back(normalize_line(buffer));
    if (block.size() == kBlockLines) flush();
  }
  flush();
  if (!sink) throw IoError("write failed: " + a.output);
  out << "corrected " << lines << " lines, " << changed << " changed\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct OptimizeArgs {
  PairInputs train;
  PairInputs valid;
  std::string space = "noisy-channel";
  std::string evaluator = "builtin";
  std::string out;
  double valid_fraction = 0.2;
  std::uint64_t seed = kDefaultSeed;
  bool resume = false;
  bool no_cache = false;
  bool no_timestamp = false;
  unsigned jobs = default_jobs();
};

HyperParamSpace resolve_space(const std::string& spec) {
  if (spec == "noisy-channel") return noisy_channel_space();
  if (spec == "paper-default") return paper_default_space();
  if (!fs::exists(spec)) {
    throw ArgumentError("--space: no such file and not a built-in space: " + spec);
  }
  return read_space(fs::path(spec));
}

void write_tsv(const Corpus& corpus, const fs::path& path) {
  auto file = open_out(path);
  for (const auto& p : corpus.pairs) {
    file << encode_utf8(p.noisy) << '\t' << encode_utf8(p.gold) << '\n';
  }
}

int cmd_optimize(const OptimizeArgs& a, std::ostream& out, std::ostream& err) {
  const HyperParamSpace space = resolve_space(a.space);
  const bool external = a.evaluator.rfind("cmd:", 0) == 0;
  if (!external && a.evaluator != "builtin") {
    throw ArgumentError("--evaluator must be 'builtin' or 'cmd:<command>', got " + a.evaluator);
  }
  if (!external) NoisyChannelHyper::from_assignment(space.defaults());

  Corpus train;
  Corpus valid;
  if (a.valid.given()) {
    train = load_pairs(a.train, "");
    valid = load_pairs(a.valid, "valid-");
  } else {
    std::tie(train, valid) =
        split_train_valid(load_pairs(a.train, ""), 1.0 - a.valid_fraction, a.seed);
  }
  if (train.empty() || valid.empty()) throw StructuralError("empty training or validation set");

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const fs::path log_path = dir / "trials.jsonl";

  SearchOptions options;
  options.cache = !a.no_cache;
  options.jobs = a.jobs;
  if (a.resume && fs::exists(log_path)) {
    options.warm_cache = cache_from_trials(read_trial_log(log_path));
    err << "resuming with " << options.warm_cache.size() << " cached configurations\n";
  }
  std::ofstream log(log_path, std::ios::binary | (a.resume ? std::ios::app : std::ios::trunc));
  if (!log) throw IoError("cannot write " + log_path.string());
  options.on_trial = [&](const TrialRecord& t) {
    TrialRecord logged = t;
    if (a.no_timestamp) logged.duration_seconds = 0.0;
    log << trial_to_json(logged) << '\n';
    log.flush();
    out << t.stage << '\t' << fingerprint(t.config) << '\t'
        << (t.failed() ? "failed: " + t.message : fixed(t.score, 4)) << '\n';
  };

  Evaluator evaluate;
  std::optional<ExternalEvaluator> runner;
  if (external) {
    write_tsv(train, dir / "train.tsv");
    write_tsv(valid, dir / "valid.tsv");
    runner.emplace(a.evaluator.substr(4), dir / "train.tsv", dir / "valid.tsv", dir / "work");
    evaluate = [&runner](const Assignment& c) { return (*runner)(c); };
  } else {
    evaluate = [&train, &valid](const Assignment& c) {
      const auto model = NoisyChannelModel::train(train, NoisyChannelHyper::from_assignment(c));
      return validation_accuracy(model, valid);
    };
  }

  if (!a.no_timestamp) out << "# generated " << utc_timestamp() << '\n';
  out << "stage\tconfig\tscore\n";
  const GreedyResult result = greedy_search(space, evaluate, options);
  {
    auto best = open_out(dir / "best_config.json");
    best << assignment_to_json(result.best_config) << '\n';
  }

  const std::size_t grid = space.grid_size();
  out << "best\t" << fingerprint(result.best_config) << '\t' << fixed(result.best_score, 4)
      << '\n';
  out << "greedy trials: " << result.trials.size() << " (bound " << space.greedy_budget()
      << "); grid: " << grid << " configurations; ratio "
      << fixed(static_cast<double>(grid) / std::max<std::size_t>(1, result.trials.size()), 1)
      << "x\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct SplitArgs {
  PairInputs data;
  std::string out;
  double train_fraction = 0.8;
  std::uint64_t seed = kDefaultSeed;
};

int cmd_split(const SplitArgs& a, std::ostream& out, std::ostream&) {
  const auto [train, valid] = split_train_valid(load_pairs(a.data, ""), a.train_fraction, a.seed);
  write_parallel_corpus(train, a.out + ".train.noisy.txt", a.out + ".train.gold.txt");
  write_parallel_corpus(valid, a.out + ".valid.noisy.txt", a.out + ".valid.gold.txt");
  out << "train\t" << train.size() << "\nvalid\t" << valid.size() << '\n';
  return 0;
}

struct SweepArgs {
  std::string input;
  std::string profile;
  std::string out;
  std::vector<double> ratios{0.1, 0.2, 0.3, 0.4, 0.5};
  std::uint64_t seed = kDefaultSeed;
  bool no_generic = false;
  unsigned jobs = default_jobs();
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  for (double r : a.ratios) check_noise_ratio(r);
  const auto gold = load_plain_corpus(a.input);
  if (gold.empty()) throw StructuralError("no non-blank lines in " + a.input);
  NoiseConfig base;
  base.seed = a.seed;
  base.generic_noise = !a.no_generic;
  base.profile = load_profile_option(a.profile, err);
  if (base.generic_noise) base.char_freq = build_char_frequency_table(gold);
  const auto result = noise_sweep(gold, base, a.ratios, [](const Corpus& c) {
    return cer(texts(c, false), texts(c, true));
  }, a.jobs);

  std::ostringstream tsv;
  tsv << "noise_ratio\traw_cer\n";
  for (const auto& row : result.rows) {
    tsv << fixed(row.noise_ratio, 2) << '\t' << fixed(row.score, 6) << '\n';
  }
  tsv << "non_decreasing\t" << (result.non_decreasing ? "yes" : "no") << '\n';
  if (!a.out.empty()) {
    auto file = open_out(a.out);
    file << tsv.str();
  }
  out << tsv.str();
  return 0;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ProtocolError*>(&e)) return 3;
  if (dynamic_cast<const ArgumentError*>(&e) || dynamic_cast<const StructuralError*>(&e) ||
      dynamic_cast<const IoError*>(&e)) {
    return 2;
  }
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Historical OCR post-correction toolkit", "histocr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "histocr 0.3.0");

  ProfileArgs profile;
  auto* p = app.add_subcommand("profile", "Extract a confusion profile from a parallel corpus");
  add_pair_options(p, profile.data, "", "corpus");
  p->add_option("--out", profile.out, "Profile TSV to write")->required();
  p->add_option("--types", profile.types, "Error-type histogram TSV (default <out>.types.tsv)");
  p->add_option("--jobs", profile.jobs)->check(CLI::PositiveNumber);

  InjectArgs inject;
  auto* i = app.add_subcommand("inject", "Inject synthetic OCR errors into clean text");
  i->add_option("--input", inject.input, "Clean text, one line per sentence")
      ->required()
      ->check(CLI::ExistingFile);
  i->add_option("--profile", inject.profile, "Confusion profile TSV")->check(CLI::ExistingFile);
  i->add_option("--frequencies", inject.frequencies,
                "Text whose character frequencies drive generic noise (default --input)")
      ->check(CLI::ExistingFile);
  i->add_option("--noise-ratio", inject.noise_ratio, "NR, 0 < NR < 1")->capture_default_str();
  i->add_option("--seed", inject.seed)->capture_default_str();
  i->add_option("--max-swaps", inject.max_swaps)->capture_default_str();
  i->add_flag("--no-generic", inject.no_generic, "Only apply profile replacements");
  i->add_option("--out", inject.out, "Output prefix for <out>.noisy.txt and <out>.gold.txt")
      ->required();
  i->add_option("--jobs", inject.jobs)->check(CLI::PositiveNumber);

  EvaluateArgs evaluate;
  auto* e = app.add_subcommand("evaluate", "Score a corrector against gold text");
  e->add_option("--gold", evaluate.gold)->required()->check(CLI::ExistingFile);
  e->add_option("--ocred", evaluate.ocred, "Uncorrected OCR output")
      ->required()
      ->check(CLI::ExistingFile);
  e->add_option("--fixed", evaluate.fixed_path, "Corrected output")
      ->required()
      ->check(CLI::ExistingFile);
  e->add_option("--compare", evaluate.compare, "Second corrected output for McNemar's test")
      ->check(CLI::ExistingFile);
  e->add_option("--delimiters", evaluate.delimiters,
                "Word delimiter characters; \\s is space, \\t is tab (default: space and tab)");
  e->add_option("--out", evaluate.out, "Report TSV to write");
  e->add_flag("--no-timestamp", evaluate.no_timestamp);
  e->add_option("--jobs", evaluate.jobs)->check(CLI::PositiveNumber);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train the noisy-channel corrector");
  add_pair_options(t, train.data, "", "training corpus");
  add_hyper_options(t, train.hyper);
  t->add_option("--model", train.model, "Model directory to write")->required();
  t->add_option("--jobs", train.jobs)->check(CLI::PositiveNumber);

  CorrectArgs correct;
  auto* c = app.add_subcommand("correct", "Correct OCR text line by line");
  c->add_option("--model", correct.model)->required()->check(CLI::ExistingDirectory);
  c->add_option("--input", correct.input)->required()->check(CLI::ExistingFile);
  c->add_option("--output", correct.output)->required();
  c->add_option("--jobs", correct.jobs)->check(CLI::PositiveNumber);

  OptimizeArgs optimize;
  auto* o = app.add_subcommand("optimize", "Greedy hyperparameter search");
  add_pair_options(o, optimize.train, "", "training corpus");
  add_pair_options(o, optimize.valid, "valid-", "validation corpus");
  o->add_option("--space", optimize.space,
                "Space file, or 'noisy-channel' / 'paper-default'")
      ->capture_default_str();
  o->add_option("--evaluator", optimize.evaluator, "'builtin' or 'cmd:<command>'")
      ->capture_default_str();
  o->add_option("--valid-fraction", optimize.valid_fraction,
                "Held-out share when no validation corpus is given")
      ->capture_default_str();
  o->add_option("--seed", optimize.seed)->capture_default_str();
  o->add_option("--out", optimize.out, "Directory for trials.jsonl and best_config.json")
      ->required();
  o->add_flag("--resume", optimize.resume, "Reuse scores from an existing trials.jsonl");
  o->add_flag("--no-cache", optimize.no_cache);
  o->add_flag("--no-timestamp", optimize.no_timestamp,
              "Omit the timestamp line and log zero durations");
  o->add_option("--jobs", optimize.jobs)->check(CLI::PositiveNumber);

  SplitArgs split;
  auto* s = app.add_subcommand("split", "Seeded train/validation split of a parallel corpus");
  add_pair_options(s, split.data, "", "corpus");
  s->add_option("--train-fraction", split.train_fraction)->capture_default_str();
  s->add_option("--seed", split.seed)->capture_default_str();
  s->add_option("--out", split.out, "Output prefix")->required();

  SweepArgs sweep;
  auto* w = app.add_subcommand("sweep", "Raw CER of injected text across noise ratios");
  w->add_option("--input", sweep.input)->required()->check(CLI::ExistingFile);
  w->add_option("--profile", sweep.profile)->check(CLI::ExistingFile);
  w->add_option("--noise-ratio", sweep.ratios, "Ratios to sweep")->delimiter(',');
  w->add_option("--seed", sweep.seed)->capture_default_str();
  w->add_flag("--no-generic", sweep.no_generic);
  w->add_option("--out", sweep.out, "Report TSV to write");
  w->add_option("--jobs", sweep.jobs)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (p->parsed()) return cmd_profile(profile, out, err);
    if (i->parsed()) return cmd_inject(inject, out, err);
    if (e->parsed()) return cmd_evaluate(evaluate, out, err);
    if (t->parsed()) return cmd_train(train, out, err);
    if (c->parsed()) return cmd_correct(correct, out, err);
    if (o->parsed()) return cmd_optimize(optimize, out, err);
    if (s->parsed()) return cmd_split(split, out, err);
    if (w->parsed()) return cmd_sweep(sweep, out, err);
  } catch (const SearchAborted& error) {
    err << "error: " << error.what() << '\n';
    return 1;
  } catch (const std::exception& error) {
    err << "error: " << error.what() << '\n';
    return exit_code_for(error);
  }
  return 2;
}

}  // namespace histocr::cli
