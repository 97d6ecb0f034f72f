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

#ifndef POPE_SYNTH_HPP_
#define POPE_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pope/builder.hpp"
#include "pope/corpus.hpp"
#include "pope/jsonl.hpp"
#include "pope/stats.hpp"

namespace pope {

enum class BiasMode { kUniform, kFrequency, kCooccurrence };

std::string_view to_string(BiasMode mode);
BiasMode bias_mode_from_string(std::string_view s);

// Controllable hallucination bias. A present object is affirmed with
// probability `recall`; an absent object is falsely affirmed (or inserted
// into a caption) with probability
//   min(1, yes_bias + bias_strength * stat(object))
// where stat is 0 (uniform), the object's image frequency relative to the
// most frequent object (frequency), or its summed co-occurrence with the
// image's ground truth relative to the vocabulary maximum (cooccurrence).
struct SynthConfig {
  std::uint64_t seed = 0;
  double yes_bias = 0.0;
  BiasMode bias_mode = BiasMode::kUniform;
  double bias_strength = 0.0;
  double recall = 1.0;
};

SynthConfig synth_config_from_json(const Json& j);
Json synth_config_to_json(const SynthConfig& config);

// One answer per probe question, bit-deterministic under (config, corpus,
// statistics). Draws are keyed by (seed, image_id, object), so with
// bias_strength = 0 all three modes produce identical output.
std::vector<AnswerRecord> synth_answers(const ProbeSet& probe, const SynthConfig& config,
                                        const Corpus& corpus,
                                        const FrequencyTable* freq = nullptr,
                                        const CooccurrenceMatrix* cooc = nullptr);

// Caption per image: every ground-truth object plus at most three biased
// hallucinations, rendered as comma-joined canonical names. When a lexicon
// is supplied, emitted names are checked to resolve back to their objects.
std::vector<CaptionRecord> synth_captions(const Corpus& corpus, const SynthConfig& config,
                                          const FrequencyTable* freq = nullptr,
                                          const CooccurrenceMatrix* cooc = nullptr,
                                          const SynonymLexicon* lexicon = nullptr);

std::string synth_fingerprint(const SynthConfig& config, std::string_view upstream_fingerprint);

}  // namespace pope

#endif  // POPE_SYNTH_HPP_
