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

#ifndef POPE_SCORER_HPP_
#define POPE_SCORER_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pope/builder.hpp"
#include "pope/chair.hpp"
#include "pope/corpus.hpp"
#include "pope/jsonl.hpp"

namespace pope {

// Matching-based label extraction: if the first alphabetic token is
// yes/no, that wins; otherwise the first sentence must contain exactly one
// of the two tokens as a whole word. Everything else is unparsed.
ParsedAnswer parse_answer(std::string_view raw);

enum class UnparsedPolicy { kAsNo, kExclude };

std::string_view to_string(UnparsedPolicy policy);

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
};

// Positive class is "yes". Fields stay unset when their denominator is
// zero (never fabricated as 0); f1 is 0 by convention when tp == 0.
struct ScoreReport {
  Confusion confusion;
  std::int64_t unparsed = 0;
  UnparsedPolicy policy = UnparsedPolicy::kAsNo;
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> yes_ratio;
};

// Requires answers to cover every probe question exactly once (matching on
// image_id + object); lists offending references otherwise.
ScoreReport score(const ProbeSet& probe, const std::vector<AnswerRecord>& answers,
                  UnparsedPolicy policy = UnparsedPolicy::kAsNo);

struct ConsistencyReport {
  std::int64_t no_answered_objects = 0;
  std::int64_t no_answered_mentioned_in_caption = 0;
  std::int64_t caption_mentioned_objects = 0;
  std::int64_t caption_mentioned_answered_yes = 0;
};

// Cross-checks probe answers against caption mentions for the same images:
// (a) how many "No"-answered objects the captions nevertheless mention, and
// (b) how many caption-mentioned probed objects received a "Yes".
ConsistencyReport consistency(const ProbeSet& probe, const std::vector<AnswerRecord>& answers,
                              const std::vector<MentionSet>& mentions,
                              const ObjectVocabulary& vocab);

// --- Answers JSONL --------------------------------------------------------

struct AnswersFile {
  std::string probe_fingerprint;  // empty when the file carries no header
  std::string model_id;
  std::vector<AnswerRecord> records;
};

AnswersFile load_answers_jsonl(const std::filesystem::path& path);
std::string answers_to_jsonl(const AnswersFile& answers);
void save_answers_jsonl(const AnswersFile& answers, const std::filesystem::path& path);

Json score_report_json(const ScoreReport& report, std::string_view probe_fingerprint);
Json consistency_report_json(const ConsistencyReport& report,
                             std::string_view probe_fingerprint);

}  // namespace pope

#endif  // POPE_SCORER_HPP_
