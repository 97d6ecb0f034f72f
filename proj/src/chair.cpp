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

#include "pope/chair.hpp"

#include <algorithm>
#include <set>

#include "pope/errors.hpp"
#include "pope/format.hpp"
#include "pope/text.hpp"

namespace pope {

namespace {
using Kind = ValidationError::Kind;
}

MentionSet extract_mentions(std::string_view caption, const SynonymLexicon& lexicon,
                            const ImageRecord& image) {
  const std::vector<std::string> tokens = tokenize_alnum(caption);
  const std::size_t max_len =
      std::max<std::size_t>(1, static_cast<std::size_t>(lexicon.max_phrase_tokens()));

  std::set<ObjectId> found;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t advance = 1;
    for (std::size_t len = std::min(max_len, tokens.size() - i); len >= 1; --len) {
      const std::string phrase = join_tokens(tokens, i, len);
      if (auto id = lexicon.lookup_singularized(phrase)) {
        found.insert(*id);
        advance = len;
        break;
      }
    }
    i += advance;
  }

  MentionSet mentions;
  mentions.image_id = image.image_id;
  mentions.mentioned.assign(found.begin(), found.end());
  std::set_difference(mentions.mentioned.begin(), mentions.mentioned.end(),
                      image.ground_truth.begin(), image.ground_truth.end(),
                      std::back_inserter(mentions.hallucinated));
  return mentions;
}

std::vector<MentionSet> extract_mention_sets(const std::vector<CaptionRecord>& captions,
                                             const Corpus& corpus,
                                             const SynonymLexicon& lexicon) {
  const ImageIndex index(corpus.images);
  std::vector<MentionSet> out;
  out.reserve(captions.size());
  for (std::size_t i = 0; i < captions.size(); ++i) {
    const ImageRecord* image = index.find(captions[i].image_id);
    if (image == nullptr) {
      throw ValidationError(Kind::kReferential,
                            "captions[" + std::to_string(i) + "] references unknown image_id '" +
                                captions[i].image_id + "'");
    }
    out.push_back(extract_mentions(captions[i].text, lexicon, *image));
  }
  return out;
}

ChairReport chair_scores(const std::vector<CaptionRecord>& captions, const Corpus& corpus,
                         const SynonymLexicon& lexicon) {
  ChairReport report;
  const std::vector<MentionSet> mentions = extract_mention_sets(captions, corpus, lexicon);
  for (std::size_t i = 0; i < captions.size(); ++i) {
    report.captions += 1;
    report.caption_tokens += static_cast<std::int64_t>(whitespace_token_count(captions[i].text));
    report.mentions += static_cast<std::int64_t>(mentions[i].mentioned.size());
    report.hallucinated_mentions += static_cast<std::int64_t>(mentions[i].hallucinated.size());
    report.hallucinated_captions += mentions[i].hallucinated.empty() ? 0 : 1;
  }
  if (report.mentions > 0) {
    report.chair_i =
        static_cast<double>(report.hallucinated_mentions) / static_cast<double>(report.mentions);
  }
  if (report.captions > 0) {
    report.chair_s = static_cast<double>(report.hallucinated_captions) /
                     static_cast<double>(report.captions);
    report.avg_len =
        static_cast<double>(report.caption_tokens) / static_cast<double>(report.captions);
  }
  return report;
}

Json chair_report_json(const ChairReport& report) {
  Json j;
  j["type"] = "chair_report";
  Json totals;
  totals["captions"] = report.captions;
  totals["mentions"] = report.mentions;
  totals["hallucinated_mentions"] = report.hallucinated_mentions;
  totals["captions_with_hallucination"] = report.hallucinated_captions;
  j["totals"] = std::move(totals);
  j["chair_i"] = report.chair_i ? Json(*report.chair_i) : Json(nullptr);
  j["chair_s"] = report.chair_s ? Json(*report.chair_s) : Json(nullptr);
  j["avg_len"] = report.avg_len ? Json(*report.avg_len) : Json(nullptr);
  Json rendered;
  rendered["chair_i"] = report.chair_i ? percent1(*report.chair_i) : "n/a";
  rendered["chair_s"] = report.chair_s ? percent1(*report.chair_s) : "n/a";
  rendered["len"] = report.avg_len ? fixed(*report.avg_len, 1) : "n/a";
  j["rendered"] = std::move(rendered);
  Json flags;
  flags["no_captions"] = report.captions == 0;
  flags["no_mentions"] = report.mentions == 0;
  j["flags"] = std::move(flags);
  return j;
}

}  // namespace pope
