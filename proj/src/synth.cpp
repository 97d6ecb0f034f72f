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

#include "pope/synth.hpp"

#include <algorithm>
#include <unordered_map>

#include "pope/errors.hpp"
#include "pope/fingerprint.hpp"
#include "pope/rng.hpp"

namespace pope {

namespace {

using Kind = ValidationError::Kind;

// At most this many hallucinated objects per synthetic caption, so that
// desk-scale fixtures stay readable.
constexpr std::size_t kMaxHallucinationsPerCaption = 3;

// One independent uniform draw per (seed, image, purpose, object). Keying
// by content rather than draw order keeps outputs identical across modes
// when bias_strength is zero.
double unit_draw(std::uint64_t seed, std::string_view image_id, std::string_view purpose,
                 std::string_view object_name) {
  std::string salt;
  salt.reserve(purpose.size() + object_name.size() + 1);
  salt.append(purpose);
  salt.push_back(':');
  salt.append(object_name);
  return Rng(seed, fnv1a64(image_id), fnv1a64(salt)).unit();
}

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError(Kind::kPrecondition,
                          std::string(name) + " must be in [0, 1], got " + std::to_string(value));
  }
}

void check_config(const SynthConfig& config, const FrequencyTable* freq,
                  const CooccurrenceMatrix* cooc) {
  check_probability(config.yes_bias, "yes_bias");
  check_probability(config.recall, "recall");
  if (config.bias_strength < 0.0) {
    throw ValidationError(Kind::kPrecondition, "bias_strength must be non-negative");
  }
  if (config.bias_mode == BiasMode::kFrequency && freq == nullptr) {
    throw ValidationError(Kind::kPrecondition,
                          "frequency bias mode requires a frequency table");
  }
  if (config.bias_mode == BiasMode::kCooccurrence && cooc == nullptr) {
    throw ValidationError(Kind::kPrecondition,
                          "cooccurrence bias mode requires a co-occurrence matrix");
  }
}

// Normalized per-object statistic in [0, 1] controlling the extra
// false-affirm probability.
class BiasStat {
 public:
  BiasStat(const SynthConfig& config, const ObjectVocabulary& vocab, const FrequencyTable* freq,
           const CooccurrenceMatrix* cooc)
      : config_(config), vocab_(vocab), freq_(freq), cooc_(cooc) {
    if (config.bias_mode == BiasMode::kFrequency) {
      for (std::int64_t c : freq_->counts) max_freq_ = std::max(max_freq_, c);
    }
  }

  double value(ObjectId object, const ImageRecord& image) {
    switch (config_.bias_mode) {
      case BiasMode::kUniform:
        return 0.0;
      case BiasMode::kFrequency:
        return max_freq_ == 0 ? 0.0
                              : static_cast<double>(
                                    freq_->counts[static_cast<std::size_t>(object)]) /
                                    static_cast<double>(max_freq_);
      case BiasMode::kCooccurrence: {
        const std::int64_t max_sum = image_max(image);
        return max_sum == 0 ? 0.0
                            : static_cast<double>(cooc_->sum_with(object, image.ground_truth)) /
                                  static_cast<double>(max_sum);
      }
    }
    return 0.0;
  }

 private:
  std::int64_t image_max(const ImageRecord& image) {
    auto it = image_max_.find(image.image_id);
    if (it != image_max_.end()) return it->second;
    std::int64_t best = 0;
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
      best = std::max(best, cooc_->sum_with(static_cast<ObjectId>(i), image.ground_truth));
    }
    image_max_.emplace(image.image_id, best);
    return best;
  }

  const SynthConfig& config_;
  const ObjectVocabulary& vocab_;
  const FrequencyTable* freq_;
  const CooccurrenceMatrix* cooc_;
  std::int64_t max_freq_ = 0;
  std::unordered_map<std::string, std::int64_t> image_max_;
};

}  // namespace

std::string_view to_string(BiasMode mode) {
  switch (mode) {
    case BiasMode::kUniform:
      return "uniform";
    case BiasMode::kFrequency:
      return "frequency";
    default:
      return "cooccurrence";
  }
}

BiasMode bias_mode_from_string(std::string_view s) {
  if (s == "uniform") return BiasMode::kUniform;
  if (s == "frequency") return BiasMode::kFrequency;
  if (s == "cooccurrence") return BiasMode::kCooccurrence;
  throw ValidationError(Kind::kSchema, "unknown bias mode '" + std::string(s) + "'");
}

SynthConfig synth_config_from_json(const Json& j) {
  SynthConfig config;
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("yes_bias")) config.yes_bias = j.at("yes_bias").get<double>();
  if (j.contains("bias_mode")) {
    config.bias_mode = bias_mode_from_string(j.at("bias_mode").get<std::string>());
  }
  if (j.contains("bias_strength")) config.bias_strength = j.at("bias_strength").get<double>();
  if (j.contains("recall")) config.recall = j.at("recall").get<double>();
  return config;
}

Json synth_config_to_json(const SynthConfig& config) {
  Json j;
  j["seed"] = config.seed;
  j["yes_bias"] = config.yes_bias;
  j["bias_mode"] = std::string(to_string(config.bias_mode));
  j["bias_strength"] = config.bias_strength;
  j["recall"] = config.recall;
  return j;
}

std::string synth_fingerprint(const SynthConfig& config, std::string_view upstream_fingerprint) {
  Fingerprinter fp;
  fp.add("synth/v1")
      .add(upstream_fingerprint)
      .add(config.seed)
      .add(to_string(config.bias_mode))
      .add(synth_config_to_json(config).dump())
      .add(kRngVersion);
  return fp.hex();
}

std::vector<AnswerRecord> synth_answers(const ProbeSet& probe, const SynthConfig& config,
                                        const Corpus& corpus, const FrequencyTable* freq,
                                        const CooccurrenceMatrix* cooc) {
  check_config(config, freq, cooc);
  BiasStat stat(config, corpus.vocabulary, freq, cooc);
  const ImageIndex index(corpus.images);

  std::vector<AnswerRecord> answers;
  answers.reserve(probe.questions.size());
  for (const ProbeQuestion& q : probe.questions) {
    const ImageRecord* image = index.find(q.image_id);
    if (image == nullptr) {
      throw ValidationError(Kind::kReferential,
                            "probe references unknown image_id '" + q.image_id + "'");
    }
    const std::optional<ObjectId> object = corpus.vocabulary.find(q.object_name);
    if (!object) {
      throw ValidationError(Kind::kReferential,
                            "probe object '" + q.object_name + "' is not in the vocabulary");
    }
    const double u = unit_draw(config.seed, q.image_id, "answer", q.object_name);
    const double p =
        q.expected_yes
            ? config.recall
            : std::min(1.0, config.yes_bias + config.bias_strength * stat.value(*object, *image));
    const bool yes = u < p;
    answers.push_back({q.image_id, q.object_name, yes ? "Yes" : "No",
                       yes ? ParsedAnswer::kYes : ParsedAnswer::kNo, ""});
  }
  return answers;
}

std::vector<CaptionRecord> synth_captions(const Corpus& corpus, const SynthConfig& config,
                                          const FrequencyTable* freq,
                                          const CooccurrenceMatrix* cooc,
                                          const SynonymLexicon* lexicon) {
  check_config(config, freq, cooc);
  BiasStat stat(config, corpus.vocabulary, freq, cooc);
  const std::string prompt_id = "synth:" + std::string(to_string(config.bias_mode));

  std::vector<CaptionRecord> captions;
  captions.reserve(corpus.images.size());
  for (const ImageRecord& image : corpus.images) {
    struct Draw {
      double priority;
      ObjectId object;
    };
    std::vector<Draw> accepted;
    for (std::size_t i = 0; i < corpus.vocabulary.size(); ++i) {
      const ObjectId object = static_cast<ObjectId>(i);
      if (image.contains(object)) continue;
      const std::string& name = corpus.vocabulary.name(object);
      const double u = unit_draw(config.seed, image.image_id, "caption", name);
      const double p =
          std::min(1.0, config.yes_bias + config.bias_strength * stat.value(object, image));
      // u/p is uniform on [0,1) for every accepted object, so capping on it
      // keeps an unbiased subsample of the accepted set.
      if (u < p) accepted.push_back({u / p, object});
    }
    if (accepted.size() > kMaxHallucinationsPerCaption) {
      std::sort(accepted.begin(), accepted.end(),
                [](const Draw& a, const Draw& b) { return a.priority < b.priority; });
      accepted.resize(kMaxHallucinationsPerCaption);
    }
    std::vector<ObjectId> hallucinated;
    hallucinated.reserve(accepted.size());
    for (const Draw& d : accepted) hallucinated.push_back(d.object);
    std::sort(hallucinated.begin(), hallucinated.end());

    std::string text;
    auto append_name = [&](ObjectId id) {
      const std::string& name = corpus.vocabulary.name(id);
      if (lexicon != nullptr) {
        const std::optional<ObjectId> resolved = lexicon->lookup(name);
        if (!resolved || *resolved != id) {
          throw ValidationError(Kind::kConflict,
                                "lexicon does not map canonical name '" + name +
                                    "' back to its own object");
        }
      }
      if (!text.empty()) text += ", ";
      text += name;
    };
    for (ObjectId id : image.ground_truth) append_name(id);
    for (ObjectId id : hallucinated) append_name(id);

    captions.push_back({image.image_id, "synth", prompt_id, std::move(text)});
  }
  return captions;
}

}  // namespace pope
