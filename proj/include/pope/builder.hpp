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

#ifndef POPE_BUILDER_HPP_
#define POPE_BUILDER_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pope/corpus.hpp"
#include "pope/stats.hpp"
#include "pope/templates.hpp"

namespace pope {

enum class SampleMode { kRandom, kPopular, kAdversarial };

std::string_view to_string(SampleMode mode);
SampleMode sample_mode_from_string(std::string_view s);

// How an absent object's co-occurrence score aggregates over the image's
// ground-truth objects: summed pairwise counts (default) or the maximum.
enum class AdversarialAggregate { kSum, kMax };

std::string_view to_string(AdversarialAggregate aggregate);
AdversarialAggregate adversarial_aggregate_from_string(std::string_view s);

// Per-question provenance. Negatives normally carry the probe's sampling
// mode; when a popular/adversarial ranking runs out of informative entries
// the remainder is drawn uniformly and flagged kRandom.
enum class QuestionStrategy { kPositive, kRandom, kPopular, kAdversarial };

std::string_view to_string(QuestionStrategy strategy);
QuestionStrategy question_strategy_from_string(std::string_view s);

struct ProbeQuestion {
  std::string image_id;
  std::string object_name;
  std::string question;
  bool expected_yes = false;
  QuestionStrategy strategy = QuestionStrategy::kPositive;
  std::string template_id;
};

struct ProbeConfig {
  int questions_per_image = 6;  // must be even and >= 2; half yes, half no
  int images = 500;
  int min_objects = 4;  // eligibility: at least this many ground-truth objects
  SampleMode mode = SampleMode::kRandom;
  AdversarialAggregate adversarial_aggregate = AdversarialAggregate::kSum;
  std::uint64_t seed = 0;
  std::string template_id = std::string(kDefaultPopeTemplateId);
};

struct ProbeSet {
  ProbeConfig config;
  std::string corpus_fingerprint;
  std::string fingerprint;
  std::vector<ProbeQuestion> questions;  // grouped by image, image_id ascending
};

// Uniform sample of n images having at least min_objects ground-truth
// objects; deterministic under seed, output sorted by image_id.
std::vector<ImageRecord> select_images(const std::vector<ImageRecord>& images, int min_objects,
                                       int n, std::uint64_t seed);

// Uniform draw from the image's ground truth, keyed by (seed, image_id).
std::vector<ObjectId> sample_positives(const ImageRecord& image, int count, std::uint64_t seed);

struct NegativeSample {
  ObjectId object;
  QuestionStrategy strategy;
};

// Absent objects with a positive aggregated co-occurrence score against the
// image's ground truth, score descending, ties by name.
std::vector<ObjectId> adversarial_ranking(
    const ImageRecord& image, const CooccurrenceMatrix& cooc, const ObjectVocabulary& vocab,
    AdversarialAggregate aggregate = AdversarialAggregate::kSum);

std::vector<NegativeSample> sample_negatives(
    const ImageRecord& image, SampleMode mode, int count, const ObjectVocabulary& vocab,
    const FrequencyTable* freq, const CooccurrenceMatrix* cooc, std::uint64_t seed,
    AdversarialAggregate aggregate = AdversarialAggregate::kSum);

// Full probe construction: image selection, balanced positive/negative
// sampling, per-image seed-shuffled question order, fingerprinting.
// Statistics are required for popular/adversarial modes.
ProbeSet build_probe_set(const Corpus& corpus, const ProbeConfig& config,
                         const FrequencyTable* freq = nullptr,
                         const CooccurrenceMatrix* cooc = nullptr);

std::string compute_probe_fingerprint(const ProbeConfig& config,
                                      std::string_view corpus_fingerprint);

std::string probe_set_to_jsonl(const ProbeSet& probe);
void save_probe_jsonl(const ProbeSet& probe, const std::filesystem::path& path);
ProbeSet load_probe_jsonl(const std::filesystem::path& path);

}  // namespace pope

#endif  // POPE_BUILDER_HPP_
