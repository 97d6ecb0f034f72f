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

#include "pope/stats.hpp"

#include <algorithm>
#include <numeric>

#include "pope/errors.hpp"

namespace pope {

namespace {

using Kind = ValidationError::Kind;

void check_not_empty(const std::vector<ImageRecord>& images, const char* op) {
  if (images.empty()) {
    throw ValidationError(Kind::kEmptyInput, std::string(op) + " requires a non-empty corpus");
  }
}

void check_ks(const std::vector<int>& ks, std::size_t vocab_size) {
  if (ks.empty()) {
    throw ValidationError(Kind::kPrecondition, "at least one k value is required");
  }
  for (int k : ks) {
    if (k < 1 || static_cast<std::size_t>(k) > vocab_size) {
      throw ValidationError(Kind::kPrecondition,
                            "k = " + std::to_string(k) + " outside [1, " +
                                std::to_string(vocab_size) + "]");
    }
  }
}

// count descending, canonical name ascending
std::vector<ObjectId> ranked_ids(const std::vector<std::int64_t>& counts,
                                 const ObjectVocabulary& vocab) {
  std::vector<ObjectId> ids(vocab.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](ObjectId a, ObjectId b) {
    const std::int64_t ca = counts[static_cast<std::size_t>(a)];
    const std::int64_t cb = counts[static_cast<std::size_t>(b)];
    if (ca != cb) return ca > cb;
    return vocab.name(a) < vocab.name(b);
  });
  return ids;
}

std::vector<std::size_t> rank_positions(const std::vector<ObjectId>& ranking,
                                        std::size_t vocab_size) {
  std::vector<std::size_t> position(vocab_size, vocab_size);
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    position[static_cast<std::size_t>(ranking[i])] = i;
  }
  return position;
}

}  // namespace

FrequencyTable build_frequency(const std::vector<ImageRecord>& images,
                               const ObjectVocabulary& vocab) {
  check_not_empty(images, "build_frequency");
  FrequencyTable table;
  table.counts.assign(vocab.size(), 0);
  for (const ImageRecord& image : images) {
    for (ObjectId id : image.ground_truth) {
      table.counts[static_cast<std::size_t>(id)] += 1;
    }
  }
  table.ranking = ranked_ids(table.counts, vocab);
  return table;
}

std::int64_t CooccurrenceMatrix::sum_with(ObjectId object,
                                          const std::vector<ObjectId>& others) const {
  std::int64_t sum = 0;
  for (ObjectId other : others) {
    if (other != object) sum += at(object, other);
  }
  return sum;
}

CooccurrenceMatrix build_cooccurrence(const std::vector<ImageRecord>& images,
                                      const ObjectVocabulary& vocab) {
  check_not_empty(images, "build_cooccurrence");
  CooccurrenceMatrix matrix(vocab.size());
  for (const ImageRecord& image : images) {
    const auto& objects = image.ground_truth;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      for (std::size_t j = i + 1; j < objects.size(); ++j) {
        matrix.bump(objects[i], objects[j]);
      }
    }
  }
  return matrix;
}

std::vector<std::int64_t> hallucination_counts(const std::vector<MentionSet>& mentions,
                                               const ObjectVocabulary& vocab) {
  std::vector<std::int64_t> counts(vocab.size(), 0);
  for (const MentionSet& mention : mentions) {
    for (ObjectId id : mention.hallucinated) {
      counts.at(static_cast<std::size_t>(id)) += 1;
    }
  }
  return counts;
}

std::vector<ObjectId> cooccurrence_ranking(const CooccurrenceMatrix& cooc,
                                           const ObjectVocabulary& vocab, ObjectId anchor) {
  if (anchor < 0 || static_cast<std::size_t>(anchor) >= vocab.size()) {
    throw ValidationError(Kind::kPrecondition,
                          "anchor id " + std::to_string(anchor) + " outside vocabulary");
  }
  std::vector<std::int64_t> counts(vocab.size(), 0);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (static_cast<ObjectId>(i) != anchor) {
      counts[i] = cooc.at(anchor, static_cast<ObjectId>(i));
    }
  }
  std::vector<ObjectId> ranking = ranked_ids(counts, vocab);
  ranking.erase(std::remove(ranking.begin(), ranking.end(), anchor), ranking.end());
  return ranking;
}

namespace {

HitRatioReport average_hit_ratios(const std::vector<std::vector<std::size_t>>& hallucinated_ranks,
                                  const std::vector<int>& ks) {
  HitRatioReport report;
  report.images_used = static_cast<std::int64_t>(hallucinated_ranks.size());
  for (int k : ks) {
    double sum = 0.0;
    for (const auto& ranks : hallucinated_ranks) {
      std::size_t hits = 0;
      for (std::size_t position : ranks) {
        if (position < static_cast<std::size_t>(k)) ++hits;
      }
      sum += static_cast<double>(hits) / static_cast<double>(ranks.size());
    }
    report.values[k] = sum / static_cast<double>(hallucinated_ranks.size());
  }
  return report;
}

}  // namespace

HitRatioReport hr_appearing(const std::vector<MentionSet>& mentions, const FrequencyTable& freq,
                            const ObjectVocabulary& vocab, const std::vector<int>& ks) {
  check_ks(ks, vocab.size());
  const std::vector<std::size_t> position = rank_positions(freq.ranking, vocab.size());

  std::vector<std::vector<std::size_t>> hallucinated_ranks;
  for (const MentionSet& mention : mentions) {
    if (mention.hallucinated.empty()) continue;
    std::vector<std::size_t> ranks;
    ranks.reserve(mention.hallucinated.size());
    for (ObjectId id : mention.hallucinated) {
      ranks.push_back(position.at(static_cast<std::size_t>(id)));
    }
    hallucinated_ranks.push_back(std::move(ranks));
  }
  if (hallucinated_ranks.empty()) {
    throw ValidationError(Kind::kUndefinedRatio,
                          "hit ratio undefined: no mention set has a hallucinated object");
  }
  HitRatioReport report = average_hit_ratios(hallucinated_ranks, ks);
  report.kind = HitRatioKind::kAppearing;
  return report;
}

HitRatioReport hr_cooccurring(const std::vector<MentionSet>& mentions,
                              const std::vector<ImageRecord>& images,
                              const CooccurrenceMatrix& cooc, const ObjectVocabulary& vocab,
                              ObjectId anchor, const std::vector<int>& ks) {
  check_ks(ks, vocab.size());
  const std::vector<ObjectId> ranking = cooccurrence_ranking(cooc, vocab, anchor);
  const std::vector<std::size_t> position = rank_positions(ranking, vocab.size());
  const ImageIndex index(images);

  std::vector<std::vector<std::size_t>> hallucinated_ranks;
  for (const MentionSet& mention : mentions) {
    const ImageRecord* image = index.find(mention.image_id);
    if (image == nullptr) {
      throw ValidationError(Kind::kReferential,
                            "mention set references unknown image_id '" + mention.image_id + "'");
    }
    if (!image->contains(anchor) || mention.hallucinated.empty()) continue;
    std::vector<std::size_t> ranks;
    ranks.reserve(mention.hallucinated.size());
    for (ObjectId id : mention.hallucinated) {
      ranks.push_back(position.at(static_cast<std::size_t>(id)));
    }
    hallucinated_ranks.push_back(std::move(ranks));
  }
  if (hallucinated_ranks.empty()) {
    throw ValidationError(Kind::kUndefinedRatio,
                          "hit ratio undefined: no qualifying image contains '" +
                              vocab.name(anchor) + "' and a hallucinated object");
  }
  HitRatioReport report = average_hit_ratios(hallucinated_ranks, ks);
  report.kind = HitRatioKind::kCooccurring;
  report.anchor = anchor;
  return report;
}

std::map<int, double> cumulative_hallucination_share(const std::vector<std::int64_t>& counts,
                                                     const std::vector<ObjectId>& ranking,
                                                     const std::vector<int>& ks) {
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  if (total == 0) {
    throw ValidationError(Kind::kUndefinedRatio,
                          "cumulative share undefined: zero hallucination counts");
  }
  std::map<int, double> shares;
  for (int k : ks) {
    if (k < 1 || static_cast<std::size_t>(k) > ranking.size()) {
      throw ValidationError(Kind::kPrecondition,
                            "k = " + std::to_string(k) + " outside [1, " +
                                std::to_string(ranking.size()) + "]");
    }
    std::int64_t covered = 0;
    for (int i = 0; i < k; ++i) {
      covered += counts.at(static_cast<std::size_t>(ranking[static_cast<std::size_t>(i)]));
    }
    shares[k] = static_cast<double>(covered) / static_cast<double>(total);
  }
  return shares;
}

Json frequency_json(const FrequencyTable& freq, const ObjectVocabulary& vocab) {
  Json j;
  Json counts = Json::object();
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    counts[vocab.names()[i]] = freq.counts[i];
  }
  j["counts"] = std::move(counts);
  Json ranking = Json::array();
  for (ObjectId id : freq.ranking) ranking.push_back(vocab.name(id));
  j["ranking"] = std::move(ranking);
  return j;
}

Json cooccurrence_json(const CooccurrenceMatrix& cooc, const ObjectVocabulary& vocab) {
  Json j;
  j["objects"] = vocab.names();
  Json rows = Json::array();
  for (std::size_t a = 0; a < vocab.size(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < vocab.size(); ++b) {
      row.push_back(a == b ? 0 : cooc.at(static_cast<ObjectId>(a), static_cast<ObjectId>(b)));
    }
    rows.push_back(std::move(row));
  }
  j["counts"] = std::move(rows);
  return j;
}

Json hit_ratio_json(const HitRatioReport& report, const ObjectVocabulary& vocab) {
  Json j;
  j["kind"] = report.kind == HitRatioKind::kAppearing ? "appearing" : "cooccurring";
  if (report.anchor) j["anchor"] = vocab.name(*report.anchor);
  Json values = Json::object();
  for (const auto& [k, value] : report.values) {
    values[std::to_string(k)] = value;
  }
  j["values"] = std::move(values);
  j["images_used"] = report.images_used;
  return j;
}

}  // namespace pope
