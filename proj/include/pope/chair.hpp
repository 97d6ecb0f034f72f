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

#ifndef POPE_CHAIR_HPP_
#define POPE_CHAIR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pope/corpus.hpp"
#include "pope/jsonl.hpp"

namespace pope {

struct MentionSet {
  std::string image_id;
  std::vector<ObjectId> mentioned;     // sorted, unique
  std::vector<ObjectId> hallucinated;  // mentioned minus ground truth

  friend bool operator==(const MentionSet&, const MentionSet&) = default;
};

// Matching rules: lowercase, token-boundary only (no substring hits),
// longest phrase first, left to right, each token consumed by at most one
// match, trailing-'s' fallback on the final token, per-caption dedup.
MentionSet extract_mentions(std::string_view caption, const SynonymLexicon& lexicon,
                            const ImageRecord& image);

struct ChairReport {
  std::optional<double> chair_i;  // hallucinated mentions / mentions
  std::optional<double> chair_s;  // hallucinated captions / captions
  std::optional<double> avg_len;  // mean whitespace-token caption length
  std::int64_t mentions = 0;
  std::int64_t hallucinated_mentions = 0;
  std::int64_t captions = 0;
  std::int64_t hallucinated_captions = 0;
  std::int64_t caption_tokens = 0;
};

// Mentions are deduplicated within a caption and counted once per caption
// across the list. Captions referencing unknown images are an error; empty
// denominators leave the corresponding field unset rather than zero.
ChairReport chair_scores(const std::vector<CaptionRecord>& captions, const Corpus& corpus,
                         const SynonymLexicon& lexicon);

// One MentionSet per caption, in caption order.
std::vector<MentionSet> extract_mention_sets(const std::vector<CaptionRecord>& captions,
                                             const Corpus& corpus,
                                             const SynonymLexicon& lexicon);

Json chair_report_json(const ChairReport& report);

}  // namespace pope

#endif  // POPE_CHAIR_HPP_
