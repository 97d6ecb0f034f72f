// Copyright 2026 The popekit Authors.
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

// Command-line entry point wiring the pipeline:
//   ingest -> stats -> build-pope -> poll|synth -> score|chair|consist -> report
// Exit codes: 0 success, 1 validation error, 2 I/O or transport error,
// 64 usage error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pope/builder.hpp"
#include "pope/chair.hpp"
#include "pope/client.hpp"
#include "pope/corpus.hpp"
#include "pope/errors.hpp"
#include "pope/format.hpp"
#include "pope/jsonl.hpp"
#include "pope/scorer.hpp"
#include "pope/stats.hpp"
#include "pope/synth.hpp"
#include "pope/templates.hpp"
#include "pope/text.hpp"

namespace fs = std::filesystem;
using pope::Json;
using Kind = pope::ValidationError::Kind;

namespace {

// JSON config files with keys matching long option names. Values fill in
// options the command line left unset, so explicit flags always win.
std::string config_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

void apply_json_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(pope::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw CLI::FileError(path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw CLI::FileError(path + ": config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    CLI::Option* option = cmd->get_option_no_throw("--" + key);
    if (option == nullptr) {
      throw CLI::ConfigError::Extras(key);
    }
    if (option->count() > 0) continue;  // command line wins
    if (value.is_array()) {
      for (const auto& element : value) option->add_result(config_scalar(element));
    } else {
      option->add_result(config_scalar(value));
    }
    option->run_callback();
  }
}

struct ConfigurableCommand {
  CLI::App* cmd;
  std::shared_ptr<std::string> config_path = std::make_shared<std::string>();

  explicit ConfigurableCommand(CLI::App* command) : cmd(command) {
    cmd->add_option("--config", *config_path,
                    "JSON config file; keys match long option names");
  }

  // Runs the config merge and the post-merge required check, then the body.
  void on_run(std::initializer_list<const char*> required, std::function<void()> body) {
    CLI::App* command = cmd;
    auto path = config_path;
    std::vector<std::string> needed;
    for (const char* name : required) needed.emplace_back(name);
    cmd->callback([command, path, needed, body] {
      apply_json_config(command, *path);
      for (const std::string& name : needed) {
        if (command->get_option(name)->count() == 0) {
          throw CLI::RequiredError(name);
        }
      }
      body();
    });
  }
};

void check_probe_fingerprint(const pope::ProbeSet& probe, const std::string& embedded,
                             bool force) {
  if (force || embedded.empty() || embedded == probe.fingerprint) return;
  throw pope::ValidationError(Kind::kFingerprintMismatch,
                              "answers were produced against probe fingerprint " + embedded +
                                  " but this probe is " + probe.fingerprint +
                                  " (pass --force to score anyway)");
}

pope::SynonymLexicon lexicon_or_identity(const std::string& path,
                                         const pope::ObjectVocabulary& vocab) {
  if (path.empty()) return pope::SynonymLexicon::identity(vocab);
  return pope::load_lexicon(path, vocab);
}

std::vector<int> default_ks(std::size_t vocab_size) {
  std::vector<int> ks;
  for (int k : {10, 20, 30}) {
    if (static_cast<std::size_t>(k) <= vocab_size) ks.push_back(k);
  }
  if (ks.empty()) ks.push_back(static_cast<int>(vocab_size));
  return ks;
}

// --- ingest ---------------------------------------------------------------

struct IngestOptions {
  std::string coco;
  std::string object_lists;
  std::string vocab;
  std::string lexicon;
  std::string out;
  bool allow_skip = false;
};

void run_ingest(const IngestOptions& opt) {
  pope::Corpus corpus;
  if (!opt.coco.empty()) {
    corpus = pope::load_coco_instances(opt.coco);
  } else {
    if (opt.vocab.empty()) {
      throw pope::ValidationError(Kind::kPrecondition,
                                  "--object-lists requires --vocab (name list or corpus file)");
    }
    corpus.vocabulary = pope::load_vocabulary_file(opt.vocab);
    std::optional<pope::SynonymLexicon> aliases;
    if (!opt.lexicon.empty()) aliases = pope::load_lexicon(opt.lexicon, corpus.vocabulary);

    std::vector<std::string> warnings;
    corpus.images = pope::load_object_lists(
        opt.object_lists, corpus.vocabulary, aliases ? &*aliases : nullptr,
        opt.allow_skip ? pope::UnknownNamePolicy::kSkip : pope::UnknownNamePolicy::kReject,
        &warnings);
    corpus.source = pope::Source::kSegmentation;
    corpus.fingerprint =
        pope::compute_corpus_fingerprint(corpus.vocabulary, corpus.images, corpus.source);
    for (const std::string& warning : warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
  }
  pope::save_corpus_jsonl(corpus, opt.out);
  std::cerr << "wrote " << opt.out << " (" << corpus.images.size() << " images, "
            << corpus.vocabulary.size() << " objects, fingerprint " << corpus.fingerprint
            << ")\n";
}

// --- stats ----------------------------------------------------------------

struct StatsOptions {
  std::string corpus;
  std::string captions;
  std::string lexicon;
  std::string out;
  std::string histogram_csv;
  std::string hr_anchor;
  std::vector<int> hr_ks;
};

void run_stats(const StatsOptions& opt) {
  const pope::Corpus corpus = pope::load_corpus_jsonl(opt.corpus);
  const pope::FrequencyTable freq = pope::build_frequency(corpus.images, corpus.vocabulary);
  const pope::CooccurrenceMatrix cooc =
      pope::build_cooccurrence(corpus.images, corpus.vocabulary);

  Json out;
  out["type"] = "stats";
  out["corpus_fingerprint"] = corpus.fingerprint;
  out["frequency"] = pope::frequency_json(freq, corpus.vocabulary);
  out["cooccurrence"] = pope::cooccurrence_json(cooc, corpus.vocabulary);

  std::vector<std::int64_t> hallucinations;
  if (!opt.captions.empty()) {
    const auto captions = pope::load_captions_jsonl(opt.captions);
    const auto lexicon = lexicon_or_identity(opt.lexicon, corpus.vocabulary);
    const auto mentions = pope::extract_mention_sets(captions, corpus, lexicon);
    hallucinations = pope::hallucination_counts(mentions, corpus.vocabulary);

    Json hall;
    Json counts = Json::object();
    std::int64_t total = 0;
    for (std::size_t i = 0; i < hallucinations.size(); ++i) {
      counts[corpus.vocabulary.names()[i]] = hallucinations[i];
      total += hallucinations[i];
    }
    hall["counts"] = std::move(counts);
    hall["total"] = total;
    if (total > 0) {
      std::vector<int> share_ks;
      for (int k = 10; static_cast<std::size_t>(k) <= corpus.vocabulary.size(); k += 10) {
        share_ks.push_back(k);
      }
      if (share_ks.empty() ||
          static_cast<std::size_t>(share_ks.back()) != corpus.vocabulary.size()) {
        share_ks.push_back(static_cast<int>(corpus.vocabulary.size()));
      }
      Json shares = Json::object();
      for (const auto& [k, share] :
           pope::cumulative_hallucination_share(hallucinations, freq.ranking, share_ks)) {
        shares[std::to_string(k)] = share;
      }
      hall["cumulative_share_by_frequency"] = std::move(shares);
    }
    out["hallucinations"] = std::move(hall);

    const std::vector<int> ks = opt.hr_ks.empty() ? default_ks(corpus.vocabulary.size())
                                                  : opt.hr_ks;
    out["hr_appearing"] =
        pope::hit_ratio_json(pope::hr_appearing(mentions, freq, corpus.vocabulary, ks),
                             corpus.vocabulary);
    if (!opt.hr_anchor.empty()) {
      const auto anchor = corpus.vocabulary.find(pope::normalize_phrase(opt.hr_anchor));
      if (!anchor) {
        throw pope::ValidationError(Kind::kReferential, "anchor object '" + opt.hr_anchor +
                                                            "' is not in the vocabulary");
      }
      out["hr_cooccurring"] = pope::hit_ratio_json(
          pope::hr_cooccurring(mentions, corpus.images, cooc, corpus.vocabulary, *anchor, ks),
          corpus.vocabulary);
    }
  }

  pope::write_text_file(opt.out, out.dump(2) + "\n");
  std::cerr << "wrote " << opt.out << "\n";

  if (!opt.histogram_csv.empty()) {
    std::string csv = "rank,object,images";
    if (!hallucinations.empty()) csv += ",hallucinations";
    csv += "\n";
    for (std::size_t i = 0; i < freq.ranking.size(); ++i) {
      const pope::ObjectId id = freq.ranking[i];
      csv += std::to_string(i + 1) + "," + corpus.vocabulary.name(id) + "," +
             std::to_string(freq.counts[static_cast<std::size_t>(id)]);
      if (!hallucinations.empty()) {
        csv += "," + std::to_string(hallucinations[static_cast<std::size_t>(id)]);
      }
      csv += "\n";
    }
    pope::write_text_file(opt.histogram_csv, csv);
    std::cerr << "wrote " << opt.histogram_csv << "\n";
  }
}

// --- build-pope -------------------------------------------------------------

struct BuildOptions {
  std::string corpus;
  std::string out;
  std::string mode = "random";
  std::string adversarial_aggregate = "sum";
  pope::ProbeConfig config;
};

void run_build(const BuildOptions& opt) {
  const pope::Corpus corpus = pope::load_corpus_jsonl(opt.corpus);
  pope::ProbeConfig config = opt.config;
  config.mode = pope::sample_mode_from_string(opt.mode);
  config.adversarial_aggregate =
      pope::adversarial_aggregate_from_string(opt.adversarial_aggregate);

  std::optional<pope::FrequencyTable> freq;
  std::optional<pope::CooccurrenceMatrix> cooc;
  if (config.mode == pope::SampleMode::kPopular) {
    freq = pope::build_frequency(corpus.images, corpus.vocabulary);
  } else if (config.mode == pope::SampleMode::kAdversarial) {
    cooc = pope::build_cooccurrence(corpus.images, corpus.vocabulary);
  }

  const pope::ProbeSet probe =
      pope::build_probe_set(corpus, config, freq ? &*freq : nullptr, cooc ? &*cooc : nullptr);
  pope::save_probe_jsonl(probe, opt.out);
  std::cerr << "wrote " << opt.out << " (" << probe.questions.size()
            << " questions, fingerprint " << probe.fingerprint << ")\n";
}

// --- poll --------------------------------------------------------------------

struct PollOptions {
  std::string endpoint;
  std::string probe;
  std::string template_id;
  std::string out;
  bool resume = false;
};

void run_poll(const PollOptions& opt) {
  const pope::EndpointConfig endpoint = pope::load_endpoint_config(opt.endpoint);
  const pope::ProbeSet probe = pope::load_probe_jsonl(opt.probe);
  const std::string template_id =
      opt.template_id.empty() ? probe.config.template_id : opt.template_id;
  const pope::PromptTemplate& tmpl = pope::require_template(template_id);

  std::size_t start = 0;
  if (opt.resume && fs::exists(opt.out)) {
    const pope::AnswersFile existing = pope::load_answers_jsonl(opt.out);
    if (!existing.probe_fingerprint.empty() &&
        existing.probe_fingerprint != probe.fingerprint) {
      throw pope::ValidationError(Kind::kFingerprintMismatch,
                                  "existing answers in " + opt.out +
                                      " belong to a different probe set");
    }
    start = existing.records.size();
    if (start >= probe.questions.size()) {
      std::cerr << opt.out << " already covers all " << probe.questions.size()
                << " questions\n";
      return;
    }
    std::cerr << "resuming from question " << start << "\n";
  }

  const pope::PollResult result = pope::poll(endpoint, probe, tmpl, start);

  if (start == 0) {
    pope::AnswersFile file;
    file.probe_fingerprint = probe.fingerprint;
    file.model_id = endpoint.base_url;
    file.records = result.records;
    pope::save_answers_jsonl(file, opt.out);
  } else {
    pope::AnswersFile tail;
    tail.records = result.records;
    std::string lines = pope::answers_to_jsonl(tail);
    lines.erase(0, lines.find('\n') + 1);  // drop the header line
    pope::append_text_file(opt.out, lines);
  }

  std::cerr << "wrote " << result.records.size() << " answers to " << opt.out << "\n";
  if (result.aborted) {
    throw pope::IoError("poll aborted (" + result.abort_reason + "); " +
                        std::to_string(result.resume_cursor) + " of " +
                        std::to_string(probe.questions.size()) +
                        " answers flushed, re-run with --resume to continue");
  }
}

// --- synth ---------------------------------------------------------------------

struct SynthOptions {
  std::string corpus;
  std::string probe;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed_override;
};

pope::SynthConfig load_synth_config(const SynthOptions& opt) {
  pope::SynthConfig config;
  if (!opt.config.empty()) {
    config = pope::synth_config_from_json(pope::parse_json_file(opt.config));
  }
  if (opt.seed_override) config.seed = *opt.seed_override;
  return config;
}

void run_synth_answers(const SynthOptions& opt) {
  const pope::Corpus corpus = pope::load_corpus_jsonl(opt.corpus);
  const pope::ProbeSet probe = pope::load_probe_jsonl(opt.probe);
  const pope::SynthConfig config = load_synth_config(opt);

  std::optional<pope::FrequencyTable> freq;
  std::optional<pope::CooccurrenceMatrix> cooc;
  if (config.bias_mode == pope::BiasMode::kFrequency) {
    freq = pope::build_frequency(corpus.images, corpus.vocabulary);
  } else if (config.bias_mode == pope::BiasMode::kCooccurrence) {
    cooc = pope::build_cooccurrence(corpus.images, corpus.vocabulary);
  }

  pope::AnswersFile file;
  file.probe_fingerprint = probe.fingerprint;
  file.model_id = "synth";
  file.records = pope::synth_answers(probe, config, corpus, freq ? &*freq : nullptr,
                                     cooc ? &*cooc : nullptr);
  pope::save_answers_jsonl(file, opt.out);
  std::cerr << "wrote " << file.records.size() << " answers to " << opt.out << "\n";
}

void run_synth_captions(const SynthOptions& opt) {
  const pope::Corpus corpus = pope::load_corpus_jsonl(opt.corpus);
  const pope::SynthConfig config = load_synth_config(opt);

  std::optional<pope::FrequencyTable> freq;
  std::optional<pope::CooccurrenceMatrix> cooc;
  if (config.bias_mode == pope::BiasMode::kFrequency) {
    freq = pope::build_frequency(corpus.images, corpus.vocabulary);
  } else if (config.bias_mode == pope::BiasMode::kCooccurrence) {
    cooc = pope::build_cooccurrence(corpus.images, corpus.vocabulary);
  }

  const auto captions = pope::synth_captions(corpus, config, freq ? &*freq : nullptr,
                                             cooc ? &*cooc : nullptr);
  pope::save_captions_jsonl(captions, opt.out,
                            pope::synth_fingerprint(config, corpus.fingerprint));
  std::cerr << "wrote " << captions.size() << " captions to " << opt.out << "\n";
}

// --- score -----------------------------------------------------------------------

struct ScoreOptions {
  std::string probe;
  std::string answers;
  std::string out;
  std::string policy = "as_no";
  bool force = false;
};

void run_score(const ScoreOptions& opt) {
  const pope::ProbeSet probe = pope::load_probe_jsonl(opt.probe);
  const pope::AnswersFile answers = pope::load_answers_jsonl(opt.answers);
  check_probe_fingerprint(probe, answers.probe_fingerprint, opt.force);

  const pope::UnparsedPolicy policy = opt.policy == "exclude"
                                          ? pope::UnparsedPolicy::kExclude
                                          : pope::UnparsedPolicy::kAsNo;
  const pope::ScoreReport report = pope::score(probe, answers.records, policy);

  std::printf("accuracy   %s\n", pope::percent2_or(report.accuracy).c_str());
  std::printf("precision  %s\n", pope::percent2_or(report.precision).c_str());
  std::printf("recall     %s\n", pope::percent2_or(report.recall).c_str());
  std::printf("f1         %s\n", pope::percent2_or(report.f1).c_str());
  std::printf("yes_ratio  %s\n", pope::percent2_or(report.yes_ratio).c_str());
  std::printf("unparsed   %lld\n", static_cast<long long>(report.unparsed));

  if (!opt.out.empty()) {
    pope::write_text_file(opt.out,
                          pope::score_report_json(report, probe.fingerprint).dump(2) + "\n");
    std::cerr << "wrote " << opt.out << "\n";
  }
}

// --- chair -------------------------------------------------------------------------

struct ChairOptions {
  std::string corpus;
  std::string captions;
  std::string lexicon;
  std::string out;
};

void run_chair(const ChairOptions& opt) {
  const pope::Corpus corpus = pope::load_corpus_jsonl(opt.corpus);
  const auto captions = pope::load_captions_jsonl(opt.captions);
  if (captions.empty()) {
    throw pope::ValidationError(Kind::kEmptyInput, "no captions in " + opt.captions);
  }
  const auto lexicon = lexicon_or_identity(opt.lexicon, corpus.vocabulary);
  const pope::ChairReport report = pope::chair_scores(captions, corpus, lexicon);

  const Json j = pope::chair_report_json(report);
  std::printf("chair_i  %s\n", j["rendered"]["chair_i"].get<std::string>().c_str());
  std::printf("chair_s  %s\n", j["rendered"]["chair_s"].get<std::string>().c_str());
  std::printf("len      %s\n", j["rendered"]["len"].get<std::string>().c_str());
  std::printf("captions %lld (%lld with hallucinations)\n",
              static_cast<long long>(report.captions),
              static_cast<long long>(report.hallucinated_captions));
  std::printf("mentions %lld (%lld hallucinated)\n", static_cast<long long>(report.mentions),
              static_cast<long long>(report.hallucinated_mentions));

  if (!opt.out.empty()) {
    pope::write_text_file(opt.out, j.dump(2) + "\n");
    std::cerr << "wrote " << opt.out << "\n";
  }
}

// --- consist -----------------------------------------------------------------------

struct ConsistOptions {
  std::string corpus;
  std::string probe;
  std::string answers;
  std::string captions;
  std::string lexicon;
  std::string out;
  bool force = false;
};

void run_consist(const ConsistOptions& opt) {
  const pope::Corpus corpus = pope::load_corpus_jsonl(opt.corpus);
  const pope::ProbeSet probe = pope::load_probe_jsonl(opt.probe);
  const pope::AnswersFile answers = pope::load_answers_jsonl(opt.answers);
  check_probe_fingerprint(probe, answers.probe_fingerprint, opt.force);

  const auto captions = pope::load_captions_jsonl(opt.captions);
  const auto lexicon = lexicon_or_identity(opt.lexicon, corpus.vocabulary);
  const auto mentions = pope::extract_mention_sets(captions, corpus, lexicon);

  const pope::ConsistencyReport report =
      pope::consistency(probe, answers.records, mentions, corpus.vocabulary);
  std::printf("no_answered_objects               %lld\n",
              static_cast<long long>(report.no_answered_objects));
  std::printf("no_answered_mentioned_in_caption  %lld\n",
              static_cast<long long>(report.no_answered_mentioned_in_caption));
  std::printf("caption_mentioned_objects         %lld\n",
              static_cast<long long>(report.caption_mentioned_objects));
  std::printf("caption_mentioned_answered_yes    %lld\n",
              static_cast<long long>(report.caption_mentioned_answered_yes));

  if (!opt.out.empty()) {
    pope::write_text_file(
        opt.out, pope::consistency_report_json(report, probe.fingerprint).dump(2) + "\n");
    std::cerr << "wrote " << opt.out << "\n";
  }
}

// --- report ------------------------------------------------------------------------

struct ReportOptions {
  std::string score;
  std::string chair;
  std::string stats;
  std::string consist;
  std::string out;
  std::string csv;
};

void run_report(const ReportOptions& opt) {
  Json merged;
  merged["type"] = "report";
  if (!opt.score.empty()) merged["score"] = pope::parse_json_file(opt.score);
  if (!opt.chair.empty()) merged["chair"] = pope::parse_json_file(opt.chair);
  if (!opt.stats.empty()) merged["stats"] = pope::parse_json_file(opt.stats);
  if (!opt.consist.empty()) merged["consistency"] = pope::parse_json_file(opt.consist);
  pope::write_text_file(opt.out, merged.dump(2) + "\n");
  std::cerr << "wrote " << opt.out << "\n";

  if (!opt.csv.empty()) {
    std::string csv = "section,metric,value\n";
    if (merged.contains("score")) {
      for (const auto& [metric, value] : merged["score"]["rendered"].items()) {
        csv += "score," + metric + "," + value.get<std::string>() + "\n";
      }
      csv += "score,unparsed," + merged["score"]["unparsed"].dump() + "\n";
    }
    if (merged.contains("chair")) {
      for (const auto& [metric, value] : merged["chair"]["rendered"].items()) {
        csv += "chair," + metric + "," + value.get<std::string>() + "\n";
      }
    }
    if (merged.contains("stats")) {
      for (const char* section : {"hr_appearing", "hr_cooccurring"}) {
        if (!merged["stats"].contains(section)) continue;
        for (const auto& [k, value] : merged["stats"][section]["values"].items()) {
          csv += std::string(section) + ",@" + k + "," + value.dump() + "\n";
        }
      }
    }
    if (merged.contains("consistency")) {
      for (const char* field :
           {"no_answered_objects", "no_answered_mentioned_in_caption",
            "caption_mentioned_objects", "caption_mentioned_answered_yes"}) {
        csv += "consistency," + std::string(field) + "," +
               merged["consistency"][field].dump() + "\n";
      }
    }
    pope::write_text_file(opt.csv, csv);
    std::cerr << "wrote " << opt.csv << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"POPE toolkit: balanced object-probing sets, answer scoring, and caption "
               "hallucination metrics for vision-language models"};
  app.require_subcommand(1);

  auto ingest = std::make_shared<IngestOptions>();
  ConfigurableCommand ingest_cmd(app.add_subcommand(
      "ingest", "Convert COCO instances or object-list JSONL into the corpus format"));
  auto* coco_opt = ingest_cmd.cmd->add_option("--coco", ingest->coco, "COCO instances JSON");
  auto* lists_opt =
      ingest_cmd.cmd->add_option("--object-lists", ingest->object_lists,
                                 "JSONL of {\"image_id\", \"objects\": [names]} records");
  coco_opt->excludes(lists_opt);
  lists_opt->excludes(coco_opt);
  ingest_cmd.cmd->add_option(
      "--vocab", ingest->vocab,
      "vocabulary (name-per-line file or corpus JSONL), for --object-lists");
  ingest_cmd.cmd->add_option("--lexicon", ingest->lexicon,
                             "synonym lexicon TSV applied to names");
  ingest_cmd.cmd->add_flag("--allow-skip", ingest->allow_skip,
                           "drop unknown object names instead of rejecting the file");
  ingest_cmd.cmd->add_option("--out", ingest->out, "output corpus JSONL");
  ingest_cmd.on_run({"--out"}, [ingest] {
    if (ingest->coco.empty() && ingest->object_lists.empty()) {
      throw CLI::RequiredError("one of --coco / --object-lists");
    }
    run_ingest(*ingest);
  });

  auto stats = std::make_shared<StatsOptions>();
  ConfigurableCommand stats_cmd(app.add_subcommand(
      "stats", "Frequency/co-occurrence tables, hallucination histograms, hit ratios"));
  stats_cmd.cmd->add_option("--corpus", stats->corpus, "corpus JSONL");
  stats_cmd.cmd->add_option("--captions", stats->captions,
                            "captions JSONL for hallucination statistics");
  stats_cmd.cmd->add_option("--lexicon", stats->lexicon, "synonym lexicon TSV");
  stats_cmd.cmd->add_option("--hr-ks", stats->hr_ks, "k values for hit ratios")->delimiter(',');
  stats_cmd.cmd->add_option("--hr-anchor", stats->hr_anchor,
                            "object name anchoring the co-occurrence hit ratio");
  stats_cmd.cmd->add_option("--histogram-csv", stats->histogram_csv,
                            "CSV of per-object frequency/hallucination counts");
  stats_cmd.cmd->add_option("--out", stats->out, "output stats JSON");
  stats_cmd.on_run({"--corpus", "--out"}, [stats] { run_stats(*stats); });

  auto build = std::make_shared<BuildOptions>();
  ConfigurableCommand build_cmd(
      app.add_subcommand("build-pope", "Construct a balanced probe set from a corpus"));
  build_cmd.cmd->add_option("--corpus", build->corpus, "corpus JSONL");
  build_cmd.cmd->add_option("--mode", build->mode, "negative sampling mode")
      ->check(CLI::IsMember({"random", "popular", "adversarial"}));
  build_cmd.cmd
      ->add_option("--adversarial-agg", build->adversarial_aggregate,
                   "co-occurrence aggregation over ground-truth objects")
      ->check(CLI::IsMember({"sum", "max"}));
  build_cmd.cmd->add_option("--l", build->config.questions_per_image,
                            "questions per image (even)");
  build_cmd.cmd->add_option("--n", build->config.images, "number of images to select");
  build_cmd.cmd->add_option("--min-objects", build->config.min_objects,
                            "minimum ground-truth objects per eligible image");
  build_cmd.cmd->add_option("--seed", build->config.seed, "sampling seed");
  build_cmd.cmd->add_option("--template", build->config.template_id, "prompt template id");
  build_cmd.cmd->add_option("--out", build->out, "output probe JSONL");
  build_cmd.on_run({"--corpus", "--out"}, [build] { run_build(*build); });

  auto poll = std::make_shared<PollOptions>();
  ConfigurableCommand poll_cmd(
      app.add_subcommand("poll", "Send probe questions to an HTTP endpoint"));
  poll_cmd.cmd->add_option("--endpoint", poll->endpoint, "endpoint config JSON");
  poll_cmd.cmd->add_option("--probe", poll->probe, "probe JSONL");
  poll_cmd.cmd->add_option("--template", poll->template_id,
                           "prompt template id (defaults to the probe's)");
  poll_cmd.cmd->add_option("--out", poll->out, "output answers JSONL");
  poll_cmd.cmd->add_flag("--resume", poll->resume, "continue an interrupted run");
  poll_cmd.on_run({"--endpoint", "--probe", "--out"}, [poll] { run_poll(*poll); });

  auto synth = std::make_shared<SynthOptions>();
  CLI::App* synth_cmd = app.add_subcommand("synth", "Synthetic biased responders and captioners");
  synth_cmd->require_subcommand(1);

  ConfigurableCommand synth_answers_cmd(
      synth_cmd->add_subcommand("answers", "Answer a probe with a biased synthetic responder"));
  synth_answers_cmd.cmd->add_option("--corpus", synth->corpus, "corpus JSONL");
  synth_answers_cmd.cmd->add_option("--probe", synth->probe, "probe JSONL");
  synth_answers_cmd.cmd->add_option("--synth-config", synth->config,
                                    "synthetic responder config JSON");
  synth_answers_cmd.cmd->add_option("--seed", synth->seed_override, "override the config seed");
  synth_answers_cmd.cmd->add_option("--out", synth->out, "output answers JSONL");
  synth_answers_cmd.on_run({"--corpus", "--probe", "--out"},
                           [synth] { run_synth_answers(*synth); });

  ConfigurableCommand synth_captions_cmd(synth_cmd->add_subcommand(
      "captions", "Generate biased synthetic captions for every corpus image"));
  synth_captions_cmd.cmd->add_option("--corpus", synth->corpus, "corpus JSONL");
  synth_captions_cmd.cmd->add_option("--synth-config", synth->config,
                                     "synthetic captioner config JSON");
  synth_captions_cmd.cmd->add_option("--seed", synth->seed_override,
                                     "override the config seed");
  synth_captions_cmd.cmd->add_option("--out", synth->out, "output captions JSONL");
  synth_captions_cmd.on_run({"--corpus", "--out"}, [synth] { run_synth_captions(*synth); });

  auto score = std::make_shared<ScoreOptions>();
  ConfigurableCommand score_cmd(app.add_subcommand(
      "score", "Accuracy/precision/recall/F1/yes-ratio for probe answers"));
  score_cmd.cmd->add_option("--probe", score->probe, "probe JSONL");
  score_cmd.cmd->add_option("--answers", score->answers, "answers JSONL");
  score_cmd.cmd->add_option("--policy", score->policy, "unparsed answer policy")
      ->check(CLI::IsMember({"as_no", "exclude"}));
  score_cmd.cmd->add_flag("--force", score->force, "ignore a probe fingerprint mismatch");
  score_cmd.cmd->add_option("--out", score->out, "output report JSON");
  score_cmd.on_run({"--probe", "--answers"}, [score] { run_score(*score); });

  auto chair = std::make_shared<ChairOptions>();
  ConfigurableCommand chair_cmd(
      app.add_subcommand("chair", "Caption hallucination rates over a caption file"));
  chair_cmd.cmd->add_option("--corpus", chair->corpus, "corpus JSONL");
  chair_cmd.cmd->add_option("--captions", chair->captions, "captions JSONL");
  chair_cmd.cmd->add_option("--lexicon", chair->lexicon, "synonym lexicon TSV");
  chair_cmd.cmd->add_option("--out", chair->out, "output report JSON");
  chair_cmd.on_run({"--corpus", "--captions"}, [chair] { run_chair(*chair); });

  auto consist = std::make_shared<ConsistOptions>();
  ConfigurableCommand consist_cmd(app.add_subcommand(
      "consist", "Consistency audit between probe answers and caption mentions"));
  consist_cmd.cmd->add_option("--corpus", consist->corpus, "corpus JSONL");
  consist_cmd.cmd->add_option("--probe", consist->probe, "probe JSONL");
  consist_cmd.cmd->add_option("--answers", consist->answers, "answers JSONL");
  consist_cmd.cmd->add_option("--captions", consist->captions, "captions JSONL");
  consist_cmd.cmd->add_option("--lexicon", consist->lexicon, "synonym lexicon TSV");
  consist_cmd.cmd->add_flag("--force", consist->force, "ignore a probe fingerprint mismatch");
  consist_cmd.cmd->add_option("--out", consist->out, "output report JSON");
  consist_cmd.on_run({"--corpus", "--probe", "--answers", "--captions"},
                     [consist] { run_consist(*consist); });

  auto report = std::make_shared<ReportOptions>();
  ConfigurableCommand report_cmd(
      app.add_subcommand("report", "Merge score/chair/stats/consistency reports"));
  report_cmd.cmd->add_option("--score", report->score, "score report JSON");
  report_cmd.cmd->add_option("--chair", report->chair, "chair report JSON");
  report_cmd.cmd->add_option("--stats", report->stats, "stats JSON");
  report_cmd.cmd->add_option("--consist", report->consist, "consistency report JSON");
  report_cmd.cmd->add_option("--out", report->out, "merged report JSON");
  report_cmd.cmd->add_option("--csv", report->csv, "flattened CSV export");
  report_cmd.on_run({"--out"}, [report] { run_report(*report); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  } catch (const pope::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const pope::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
