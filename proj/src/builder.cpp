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

#include "pope/builder.hpp"

#include <algorithm>
#include <map>

#include "pope/errors.hpp"
#include "pope/fingerprint.hpp"
#include "pope/jsonl.hpp"
#include "pope/rng.hpp"

namespace pope {

namespace {

using Kind = ValidationError::Kind;

// Stream salts keep the per-image draws for selection, positives, negatives
// and question order independent of each other.
constexpr std::uint64_t kSaltSelect = fnv1a64("select-images");
constexpr std::uint64_t kSaltPositive = fnv1a64("sample-positives");
constexpr std::uint64_t kSaltNegative = fnv1a64("sample-negatives");
constexpr std::uint64_t kSaltOrder = fnv1a64("question-order");

std::vector<ObjectId> absent_objects(const ImageRecord& image, const ObjectVocabulary& vocab) {
  std::vector<ObjectId> absent;
  absent.reserve(vocab.size() - image.ground_truth.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const ObjectId id = static_cast<ObjectId>(i);
    if (!image.contains(id)) absent.push_back(id);
  }
  return absent;
}

}  // namespace

std::string_view to_string(SampleMode mode) {
  switch (mode) {
    case SampleMode::kRandom:
      return "random";
    case SampleMode::kPopular:
      return "popular";
    default:
      return "adversarial";
  }
}

SampleMode sample_mode_from_string(std::string_view s) {
  if (s == "random") return SampleMode::kRandom;
  if (s == "popular") return SampleMode::kPopular;
  if (s == "adversarial") return SampleMode::kAdversarial;
  throw ValidationError(Kind::kSchema, "unknown sampling mode '" + std::string(s) + "'");
}

std::string_view to_string(QuestionStrategy strategy) {
  switch (strategy) {
    case QuestionStrategy::kPositive:
      return "positive";
    case QuestionStrategy::kRandom:
      return "random";
    case QuestionStrategy::kPopular:
      return "popular";
    default:
      return "adversarial";
  }
}

QuestionStrategy question_strategy_from_string(std::string_view s) {
  if (s == "positive") return QuestionStrategy::kPositive;
  if (s == "random") return QuestionStrategy::kRandom;
  if (s == "popular") return QuestionStrategy::kPopular;
  if (s == "adversarial") return QuestionStrategy::kAdversarial;
  throw ValidationError(Kind::kSchema, "unknown question strategy '" + std::string(s) + "'");
}

std::string_view to_string(AdversarialAggregate aggregate) {
  return aggregate == AdversarialAggregate::kSum ? "sum" : "max";
}

AdversarialAggregate adversarial_aggregate_from_string(std::string_view s) {
  if (s == "sum") return AdversarialAggregate::kSum;
  if (s == "max") return AdversarialAggregate::kMax;
  throw ValidationError(Kind::kSchema,
                        "unknown adversarial aggregate '" + std::string(s) + "'");
}

std::vector<ImageRecord> select_images(const std::vector<ImageRecord>& images, int min_objects,
                                       int n, std::uint64_t seed) {
  if (n < 1) {
    throw ValidationError(Kind::kPrecondition, "number of images must be >= 1");
  }
  std::vector<ImageRecord> eligible;
  for (const ImageRecord& image : images) {
    if (static_cast<int>(image.ground_truth.size()) >= min_objects) eligible.push_back(image);
  }
  std::sort(eligible.begin(), eligible.end(),
            [](const ImageRecord& a, const ImageRecord& b) { return a.image_id < b.image_id; });
  if (static_cast<int>(eligible.size()) < n) {
    throw ValidationError(Kind::kInsufficientCorpus,
                          "requested " + std::to_string(n) + " images but only " +
                              std::to_string(eligible.size()) + " of " +
                              std::to_string(images.size()) + " have at least " +
                              std::to_string(min_objects) + " ground-truth objects");
  }
  Rng rng(seed, 0, kSaltSelect);
  std::vector<ImageRecord> selected =
      rng.sample(std::move(eligible), static_cast<std::size_t>(n));
  std::sort(selected.begin(), selected.end(),
            [](const ImageRecord& a, const ImageRecord& b) { return a.image_id < b.image_id; });
  return selected;
}

std::vector<ObjectId> sample_positives(const ImageRecord& image, int count, std::uint64_t seed) {
  if (count < 0) {
    throw ValidationError(Kind::kPrecondition, "positive count must be >= 0");
  }
  if (static_cast<int>(image.ground_truth.size()) < count) {
    throw ValidationError(Kind::kPrecondition,
                          "image '" + image.image_id + "' has " +
                              std::to_string(image.ground_truth.size()) +
                              " ground-truth objects, need " + std::to_string(count));
  }
  Rng rng(seed, fnv1a64(image.image_id), kSaltPositive);
  return rng.sample(image.ground_truth, static_cast<std::size_t>(count));
}

std::vector<ObjectId> adversarial_ranking(const ImageRecord& image,
                                          const CooccurrenceMatrix& cooc,
                                          const ObjectVocabulary& vocab,
                                          AdversarialAggregate aggregate) {
  struct Scored {
    ObjectId id;
    std::int64_t score;
  };
  std::vector<Scored> scored;
  for (ObjectId id : absent_objects(image, vocab)) {
    std::int64_t score = 0;
    if (aggregate == AdversarialAggregate::kSum) {
      score = cooc.sum_with(id, image.ground_truth);
    } else {
      for (ObjectId present : image.ground_truth) {
        if (present != id) score = std::max(score, cooc.at(id, present));
      }
    }
    if (score > 0) scored.push_back({id, score});
  }
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return vocab.name(a.id) < vocab.name(b.id);
  });
  std::vector<ObjectId> ranking;
  ranking.reserve(scored.size());
  for (const Scored& s : scored) ranking.push_back(s.id);
  return ranking;
}

std::vector<NegativeSample> sample_negatives(const ImageRecord& image, SampleMode mode, int count,
                                             const ObjectVocabulary& vocab,
                                             const FrequencyTable* freq,
                                             const CooccurrenceMatrix* cooc, std::uint64_t seed,
                                             AdversarialAggregate aggregate) {
  if (count < 0) {
    throw ValidationError(Kind::kPrecondition, "negative count must be >= 0");
  }
  std::vector<ObjectId> absent = absent_objects(image, vocab);
  if (static_cast<int>(absent.size()) < count) {
    throw ValidationError(Kind::kPrecondition,
                          "vocabulary too small: " + std::to_string(absent.size()) +
                              " objects absent from image '" + image.image_id + "', need " +
                              std::to_string(count));
  }

  std::vector<NegativeSample> negatives;
  negatives.reserve(static_cast<std::size_t>(count));

  if (mode == SampleMode::kPopular) {
    if (freq == nullptr) {
      throw ValidationError(Kind::kPrecondition,
                            "popular sampling requires a frequency table");
    }
    // Only objects actually observed in the dataset are "popular"; the
    // zero-count tail is handled by the random fallback below.
    for (ObjectId id : freq->ranking) {
      if (static_cast<int>(negatives.size()) == count) break;
      if (freq->counts[static_cast<std::size_t>(id)] <= 0) break;
      if (image.contains(id)) continue;
      negatives.push_back({id, QuestionStrategy::kPopular});
    }
  } else if (mode == SampleMode::kAdversarial) {
    if (cooc == nullptr) {
      throw ValidationError(Kind::kPrecondition,
                            "adversarial sampling requires a co-occurrence matrix");
    }
    for (ObjectId id : adversarial_ranking(image, *cooc, vocab, aggregate)) {
      if (static_cast<int>(negatives.size()) == count) break;
      negatives.push_back({id, QuestionStrategy::kAdversarial});
    }
  }

  if (static_cast<int>(negatives.size()) < count) {
    // Random mode, or the informative ranking ran out: draw the remainder
    // uniformly from the still-unused absent objects, flagged as random.
    std::vector<ObjectId> remaining;
    remaining.reserve(absent.size());
    for (ObjectId id : absent) {
      const bool used = std::any_of(negatives.begin(), negatives.end(),
                                    [id](const NegativeSample& s) { return s.object == id; });
      if (!used) remaining.push_back(id);
    }
    Rng rng(seed, fnv1a64(image.image_id), kSaltNegative);
    const std::size_t needed = static_cast<std::size_t>(count) - negatives.size();
    for (ObjectId id : rng.sample(std::move(remaining), needed)) {
      negatives.push_back({id, QuestionStrategy::kRandom});
    }
  }
  return negatives;
}

std::string compute_probe_fingerprint(const ProbeConfig& config,
                                      std::string_view corpus_fingerprint) {
  Fingerprinter fp;
  fp.add("probe/v1")
      .add(corpus_fingerprint)
      .add(static_cast<std::uint64_t>(config.questions_per_image))
      .add(static_cast<std::uint64_t>(config.images))
      .add(static_cast<std::uint64_t>(config.min_objects))
      .add(to_string(config.mode))
      .add(to_string(config.adversarial_aggregate))
      .add(config.seed)
      .add(config.template_id)
      .add(kRngVersion);
  return fp.hex();
}

ProbeSet build_probe_set(const Corpus& corpus, const ProbeConfig& config,
                         const FrequencyTable* freq, const CooccurrenceMatrix* cooc) {
  const int l = config.questions_per_image;
  if (l < 2 || l % 2 != 0) {
    throw ValidationError(Kind::kPrecondition,
                          "questions per image must be even and >= 2, got " + std::to_string(l));
  }
  if (config.min_objects < l / 2) {
    throw ValidationError(Kind::kPrecondition,
                          "min_objects (" + std::to_string(config.min_objects) +
                              ") must be at least half the questions per image (" +
                              std::to_string(l / 2) + ")");
  }
  const PromptTemplate& tmpl = require_template(config.template_id);
  if (tmpl.kind != TemplateKind::kPope) {
    throw ValidationError(Kind::kPrecondition,
                          "template '" + config.template_id + "' is not a probing template");
  }

  ProbeSet probe;
  probe.config = config;
  probe.corpus_fingerprint = corpus.fingerprint;
  probe.fingerprint = compute_probe_fingerprint(config, corpus.fingerprint);

  const std::vector<ImageRecord> selected =
      select_images(corpus.images, config.min_objects, config.images, config.seed);
  const int half = l / 2;
  probe.questions.reserve(static_cast<std::size_t>(config.images) * static_cast<std::size_t>(l));

  for (const ImageRecord& image : selected) {
    std::vector<ProbeQuestion> questions;
    questions.reserve(static_cast<std::size_t>(l));
    for (ObjectId id : sample_positives(image, half, config.seed)) {
      const std::string& name = corpus.vocabulary.name(id);
      questions.push_back({image.image_id, name, render_prompt(tmpl, name), true,
                           QuestionStrategy::kPositive, config.template_id});
    }
    for (const NegativeSample& negative :
         sample_negatives(image, config.mode, half, corpus.vocabulary, freq, cooc, config.seed,
                          config.adversarial_aggregate)) {
      const std::string& name = corpus.vocabulary.name(negative.object);
      questions.push_back({image.image_id, name, render_prompt(tmpl, name), false,
                           negative.strategy, config.template_id});
    }
    Rng order(config.seed, fnv1a64(image.image_id), kSaltOrder);
    order.shuffle(questions);
    for (ProbeQuestion& q : questions) probe.questions.push_back(std::move(q));
  }
  return probe;
}

// --- Probe JSONL -----------------------------------------------------------

std::string probe_set_to_jsonl(const ProbeSet& probe) {
  std::string out;
  Json header;
  header["type"] = "probe";
  header["l"] = probe.config.questions_per_image;
  header["n"] = probe.config.images;
  header["min_objects"] = probe.config.min_objects;
  header["mode"] = to_string(probe.config.mode);
  header["adversarial_aggregate"] = to_string(probe.config.adversarial_aggregate);
  header["seed"] = probe.config.seed;
  header["template_id"] = probe.config.template_id;
  header["rng"] = kRngVersion;
  header["corpus_fingerprint"] = probe.corpus_fingerprint;
  header["fingerprint"] = probe.fingerprint;
  out += header.dump();
  out.push_back('\n');

  for (const ProbeQuestion& q : probe.questions) {
    Json line;
    line["image_id"] = q.image_id;
    line["object"] = q.object_name;
    line["question"] = q.question;
    line["expected"] = q.expected_yes ? "yes" : "no";
    line["strategy"] = to_string(q.strategy);
    line["template_id"] = q.template_id;
    out += line.dump();
    out.push_back('\n');
  }
  return out;
}

void save_probe_jsonl(const ProbeSet& probe, const std::filesystem::path& path) {
  write_text_file(path, probe_set_to_jsonl(probe));
}

ProbeSet load_probe_jsonl(const std::filesystem::path& path) {
  ProbeSet probe;
  bool have_header = false;

  for_each_jsonl_line(path, [&](std::size_t line_no, const Json& record) {
    const std::string where = "line " + std::to_string(line_no);
    if (!have_header) {
      const std::string type = require_string(record, "type", where);
      if (type != "probe") {
        throw ValidationError(Kind::kSchema, path.string() + " " + where +
                                                 ": expected a probe header, got type '" + type +
                                                 "'");
      }
      probe.config.questions_per_image =
          static_cast<int>(require_int(record, "l", where));
      probe.config.images = static_cast<int>(require_int(record, "n", where));
      probe.config.min_objects = static_cast<int>(require_int(record, "min_objects", where));
      probe.config.mode = sample_mode_from_string(require_string(record, "mode", where));
      if (record.contains("adversarial_aggregate")) {
        probe.config.adversarial_aggregate = adversarial_aggregate_from_string(
            require_string(record, "adversarial_aggregate", where));
      }
      const Json& seed = require_field(record, "seed", where);
      if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
        throw ValidationError(Kind::kSchema, path.string() + " " + where + ": seed must be an integer");
      }
      probe.config.seed = seed.get<std::uint64_t>();
      probe.config.template_id = require_string(record, "template_id", where);
      probe.corpus_fingerprint = require_string(record, "corpus_fingerprint", where);
      probe.fingerprint = require_string(record, "fingerprint", where);
      have_header = true;
      return;
    }

    ProbeQuestion q;
    q.image_id = require_id_string(record, "image_id", where);
    q.object_name = require_string(record, "object", where);
    q.question = require_string(record, "question", where);
    const std::string expected = require_string(record, "expected", where);
    if (expected != "yes" && expected != "no") {
      throw ValidationError(Kind::kSchema, path.string() + " " + where +
                                               ": expected must be 'yes' or 'no'");
    }
    q.expected_yes = expected == "yes";
    q.strategy = question_strategy_from_string(require_string(record, "strategy", where));
    q.template_id = require_string(record, "template_id", where);
    if (q.expected_yes != (q.strategy == QuestionStrategy::kPositive)) {
      throw ValidationError(Kind::kSchema,
                            path.string() + " " + where +
                                ": expected=yes must coincide with strategy=positive");
    }
    probe.questions.push_back(std::move(q));
  });

  if (!have_header) {
    throw ValidationError(Kind::kSchema, path.string() + ": missing probe header line");
  }

  // Per-image balance check: exactly l questions, half expected-yes.
  const int l = probe.config.questions_per_image;
  std::map<std::string, std::pair<int, int>> per_image;  // image -> (yes, no)
  for (const ProbeQuestion& q : probe.questions) {
    auto& [yes, no] = per_image[q.image_id];
    (q.expected_yes ? yes : no) += 1;
  }
  for (const auto& [image_id, counts] : per_image) {
    if (counts.first != l / 2 || counts.second != l / 2) {
      throw ValidationError(Kind::kSchema,
                            path.string() + ": image '" + image_id + "' carries " +
                                std::to_string(counts.first) + " yes / " +
                                std::to_string(counts.second) + " no questions, expected " +
                                std::to_string(l / 2) + " each");
    }
  }
  if (static_cast<int>(per_image.size()) != probe.config.images) {
    throw ValidationError(Kind::kSchema,
                          path.string() + ": header declares " +
                              std::to_string(probe.config.images) + " images but " +
                              std::to_string(per_image.size()) + " are present");
  }
  return probe;
}

}  // namespace pope
