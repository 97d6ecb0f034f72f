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

#ifndef POPE_TESTS_SUPPORT_HR_REFERENCE_HPP_
#define POPE_TESTS_SUPPORT_HR_REFERENCE_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pope/chair.hpp"
#include "pope/corpus.hpp"

namespace pope::testing {

// Brute-force top-k hit ratios recomputed from raw sets: own frequency and
// co-occurrence counting, own ranking, no shared code with the library
// statistics. Mention sets without hallucinations are skipped; callers must
// guarantee at least one qualifying set.

inline std::vector<std::string> ref_ranked_names(const std::map<std::string, long>& counts,
                                                 const std::vector<std::string>& names) {
  std::vector<std::string> ranked = names;
  for (std::size_t pass = 0; pass + 1 < ranked.size(); ++pass) {
    for (std::size_t i = 0; i + 1 < ranked.size() - pass; ++i) {
      const long a = counts.count(ranked[i]) ? counts.at(ranked[i]) : 0;
      const long b = counts.count(ranked[i + 1]) ? counts.at(ranked[i + 1]) : 0;
      const bool out_of_order = a < b || (a == b && ranked[i] > ranked[i + 1]);
      if (out_of_order) std::swap(ranked[i], ranked[i + 1]);
    }
  }
  return ranked;
}

inline double ref_hr_appearing_at_k(const std::vector<pope::MentionSet>& mentions,
                                    const pope::Corpus& corpus, int k) {
  std::map<std::string, long> frequency;
  for (const pope::ImageRecord& image : corpus.images) {
    for (pope::ObjectId id : image.ground_truth) {
      frequency[corpus.vocabulary.name(id)] += 1;
    }
  }
  const std::vector<std::string> ranked =
      ref_ranked_names(frequency, corpus.vocabulary.names());
  std::set<std::string> top;
  for (int i = 0; i < k && static_cast<std::size_t>(i) < ranked.size(); ++i) {
    top.insert(ranked[static_cast<std::size_t>(i)]);
  }

  double sum = 0.0;
  long used = 0;
  for (const pope::MentionSet& mention : mentions) {
    if (mention.hallucinated.empty()) continue;
    long hits = 0;
    for (pope::ObjectId id : mention.hallucinated) {
      if (top.count(corpus.vocabulary.name(id))) ++hits;
    }
    sum += static_cast<double>(hits) / static_cast<double>(mention.hallucinated.size());
    ++used;
  }
  return sum / static_cast<double>(used);
}

inline double ref_hr_cooccurring_at_k(const std::vector<pope::MentionSet>& mentions,
                                      const pope::Corpus& corpus, const std::string& anchor,
                                      int k) {
  std::map<std::string, long> cooc_with_anchor;
  for (const pope::ImageRecord& image : corpus.images) {
    std::set<std::string> present;
    for (pope::ObjectId id : image.ground_truth) present.insert(corpus.vocabulary.name(id));
    if (!present.count(anchor)) continue;
    for (const std::string& name : present) {
      if (name != anchor) cooc_with_anchor[name] += 1;
    }
  }
  std::vector<std::string> candidates;
  for (const std::string& name : corpus.vocabulary.names()) {
    if (name != anchor) candidates.push_back(name);
  }
  const std::vector<std::string> ranked = ref_ranked_names(cooc_with_anchor, candidates);
  std::set<std::string> top;
  for (int i = 0; i < k && static_cast<std::size_t>(i) < ranked.size(); ++i) {
    top.insert(ranked[static_cast<std::size_t>(i)]);
  }

  double sum = 0.0;
  long used = 0;
  for (const pope::MentionSet& mention : mentions) {
    if (mention.hallucinated.empty()) continue;
    const pope::ImageRecord* image = nullptr;
    for (const pope::ImageRecord& candidate : corpus.images) {
      if (candidate.image_id == mention.image_id) {
        image = &candidate;
        break;
      }
    }
    if (image == nullptr) continue;
    bool has_anchor = false;
    for (pope::ObjectId id : image->ground_truth) {
      if (corpus.vocabulary.name(id) == anchor) has_anchor = true;
    }
    if (!has_anchor) continue;

    long hits = 0;
    for (pope::ObjectId id : mention.hallucinated) {
      if (top.count(corpus.vocabulary.name(id))) ++hits;
    }
    sum += static_cast<double>(hits) / static_cast<double>(mention.hallucinated.size());
    ++used;
  }
  return used == 0 ? -1.0 : sum / static_cast<double>(used);
}

}  // namespace pope::testing

#endif  // POPE_TESTS_SUPPORT_HR_REFERENCE_HPP_
