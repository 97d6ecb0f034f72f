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

#ifndef POPE_STATS_HPP_
#define POPE_STATS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pope/chair.hpp"
#include "pope/corpus.hpp"
#include "pope/jsonl.hpp"

namespace pope {

// Image-level presence counts. Ranking is always a full permutation of the
// vocabulary: count descending, ties by canonical name ascending.
struct FrequencyTable {
  std::vector<std::int64_t> counts;  // indexed by object id
  std::vector<ObjectId> ranking;
};

FrequencyTable build_frequency(const std::vector<ImageRecord>& images,
                               const ObjectVocabulary& vocab);

// Symmetric image-level pair counts; the diagonal is unused.
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;
  explicit CooccurrenceMatrix(std::size_t vocab_size)
      : n_(vocab_size), counts_(vocab_size * vocab_size, 0) {}

  std::size_t dimension() const { return n_; }
  std::int64_t at(ObjectId a, ObjectId b) const {
    return counts_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)];
  }
  void bump(ObjectId a, ObjectId b) {
    counts_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)] += 1;
    counts_[static_cast<std::size_t>(b) * n_ + static_cast<std::size_t>(a)] += 1;
  }

  // Sum of co-occurrence counts between `object` and every id in `others`.
  std::int64_t sum_with(ObjectId object, const std::vector<ObjectId>& others) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::int64_t> counts_;
};

CooccurrenceMatrix build_cooccurrence(const std::vector<ImageRecord>& images,
                                      const ObjectVocabulary& vocab);

// Per-object number of mention sets in which the object was hallucinated.
std::vector<std::int64_t> hallucination_counts(const std::vector<MentionSet>& mentions,
                                               const ObjectVocabulary& vocab);

// All ids except the anchor, ordered by co-occurrence count with the anchor
// descending, ties by canonical name ascending.
std::vector<ObjectId> cooccurrence_ranking(const CooccurrenceMatrix& cooc,
                                           const ObjectVocabulary& vocab, ObjectId anchor);

enum class HitRatioKind { kAppearing, kCooccurring };

struct HitRatioReport {
  HitRatioKind kind = HitRatioKind::kAppearing;
  std::optional<ObjectId> anchor;
  std::map<int, double> values;  // k -> mean hit fraction
  std::int64_t images_used = 0;  // mention sets with at least one hallucination
};

// Mean over mention sets with hallucinations of the fraction of their
// hallucinated objects that land in the top-k of the frequency ranking.
HitRatioReport hr_appearing(const std::vector<MentionSet>& mentions,
                            const FrequencyTable& freq, const ObjectVocabulary& vocab,
                            const std::vector<int>& ks);

// Same, restricted to images whose ground truth contains the anchor, with
// top-k taken from the anchor's co-occurrence ranking.
HitRatioReport hr_cooccurring(const std::vector<MentionSet>& mentions,
                              const std::vector<ImageRecord>& images,
                              const CooccurrenceMatrix& cooc, const ObjectVocabulary& vocab,
                              ObjectId anchor, const std::vector<int>& ks);

// Share of all hallucination counts covered by the first k objects of a
// ranking, for each requested k.
std::map<int, double> cumulative_hallucination_share(const std::vector<std::int64_t>& counts,
                                                     const std::vector<ObjectId>& ranking,
                                                     const std::vector<int>& ks);

Json frequency_json(const FrequencyTable& freq, const ObjectVocabulary& vocab);
Json cooccurrence_json(const CooccurrenceMatrix& cooc, const ObjectVocabulary& vocab);
Json hit_ratio_json(const HitRatioReport& report, const ObjectVocabulary& vocab);

}  // namespace pope

#endif  // POPE_STATS_HPP_
