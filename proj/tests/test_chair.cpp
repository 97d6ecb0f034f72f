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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pope/chair.hpp"
#include "pope/corpus.hpp"
#include "pope/errors.hpp"
#include "pope/format.hpp"

#include "support/chair_fixtures.hpp"
#include "support/chair_reference.hpp"

using pope::CaptionRecord;
using pope::ChairReport;
using pope::Corpus;
using pope::ImageRecord;
using pope::MentionSet;
using pope::ObjectId;
using pope::ObjectVocabulary;
using pope::SynonymLexicon;
using pope::ValidationError;

namespace {

Corpus make_corpus(const std::vector<std::string>& names,
                   const std::vector<std::pair<std::string, std::vector<std::string>>>& images) {
  Corpus corpus;
  corpus.vocabulary = ObjectVocabulary::from_names(names);
  for (const auto& [image_id, objects] : images) {
    ImageRecord record;
    record.image_id = image_id;
    for (const std::string& name : objects) {
      record.ground_truth.push_back(*corpus.vocabulary.find(name));
    }
    std::sort(record.ground_truth.begin(), record.ground_truth.end());
    corpus.images.push_back(std::move(record));
  }
  corpus.fingerprint =
      pope::compute_corpus_fingerprint(corpus.vocabulary, corpus.images, corpus.source);
  return corpus;
}

std::set<std::string> mentioned_names(const Corpus& corpus, const MentionSet& mentions) {
  std::set<std::string> names;
  for (ObjectId id : mentions.mentioned) names.insert(corpus.vocabulary.name(id));
  return names;
}

std::set<std::string> hallucinated_names(const Corpus& corpus, const MentionSet& mentions) {
  std::set<std::string> names;
  for (ObjectId id : mentions.hallucinated) names.insert(corpus.vocabulary.name(id));
  return names;
}

}  // namespace

TEST_CASE("extract_mentions basics") {
  const Corpus corpus = make_corpus({"dog", "cat"}, {{"img1", {"dog"}}});
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);

  SUBCASE("membership split between mentioned and hallucinated") {
    const MentionSet m = pope::extract_mentions("A dog and a cat.", lexicon, corpus.images[0]);
    CHECK(mentioned_names(corpus, m) == std::set<std::string>{"cat", "dog"});
    CHECK(hallucinated_names(corpus, m) == std::set<std::string>{"cat"});
  }

  SUBCASE("empty caption gives empty sets") {
    const MentionSet m = pope::extract_mentions("", lexicon, corpus.images[0]);
    CHECK(m.mentioned.empty());
    CHECK(m.hallucinated.empty());
  }

  SUBCASE("hallucinated is always a subset of mentioned") {
    const MentionSet m =
        pope::extract_mentions("dog cat dog cat", lexicon, corpus.images[0]);
    for (ObjectId id : m.hallucinated) {
      CHECK(std::count(m.mentioned.begin(), m.mentioned.end(), id) == 1);
    }
  }
}

TEST_CASE("extract_mentions longest-phrase-first with duplicate collapse") {
  const Corpus corpus = make_corpus({"person", "dining table"}, {{"img1", {}}});
  SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  lexicon.add_mapping("man", *corpus.vocabulary.find("person"));
  lexicon.add_mapping("table", *corpus.vocabulary.find("dining table"));

  const MentionSet m = pope::extract_mentions("A man at a dining table near a table.", lexicon,
                                              corpus.images[0]);
  CHECK(mentioned_names(corpus, m) == std::set<std::string>{"dining table", "person"});
}

TEST_CASE("extract_mentions respects token boundaries") {
  const Corpus corpus = make_corpus({"car", "bus", "cat"}, {{"img1", {}}});
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);

  const MentionSet none = pope::extract_mentions(
      "A cartoon about a busy catalog.", lexicon, corpus.images[0]);
  CHECK(none.mentioned.empty());

  const MentionSet hit =
      pope::extract_mentions("A car, a bus and a cat!", lexicon, corpus.images[0]);
  CHECK(mentioned_names(corpus, hit) == std::set<std::string>{"bus", "car", "cat"});
}

TEST_CASE("extract_mentions strips a trailing s when the exact token misses") {
  const Corpus corpus = make_corpus({"dog", "dining table", "bus", "skis"}, {{"img1", {}}});
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);

  const MentionSet m = pope::extract_mentions(
      "Dogs under dining tables on a bus with skis.", lexicon, corpus.images[0]);
  CHECK(mentioned_names(corpus, m) ==
        std::set<std::string>{"bus", "dining table", "dog", "skis"});
}

TEST_CASE("extract_mentions is idempotent on its canonical rendering") {
  const Corpus corpus = make_corpus({"person", "car", "dog", "dining table"},
                                    {{"img1", {"person", "dog"}}});
  SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  lexicon.add_mapping("automobile", *corpus.vocabulary.find("car"));

  const std::vector<std::string> captions = {
      "A person and an automobile near a dining table.",
      "dogs dogs dogs",
      "Nothing to see here.",
  };
  for (const std::string& caption : captions) {
    const MentionSet first = pope::extract_mentions(caption, lexicon, corpus.images[0]);
    std::string rendered;
    for (ObjectId id : first.mentioned) {
      if (!rendered.empty()) rendered += ", ";
      rendered += corpus.vocabulary.name(id);
    }
    const MentionSet second = pope::extract_mentions(rendered, lexicon, corpus.images[0]);
    CHECK(second.mentioned == first.mentioned);
    CHECK(second.hallucinated == first.hallucinated);
  }
}

using pope::testing::fixture_captions;
using pope::testing::fixture_corpus;
using pope::testing::fixture_lexicon;
using pope::testing::fixture_reference;
using pope::testing::ten_caption_fixture;
using pope::testing::twenty_caption_fixture;

TEST_CASE("chair_scores on the ten-caption fixture: 0.125 / 0.3") {
  const Corpus corpus = fixture_corpus(ten_caption_fixture());
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  const ChairReport report =
      pope::chair_scores(fixture_captions(ten_caption_fixture()), corpus, lexicon);

  CHECK(report.mentions == 40);
  CHECK(report.hallucinated_mentions == 5);
  CHECK(report.captions == 10);
  CHECK(report.hallucinated_captions == 3);
  REQUIRE(report.chair_i.has_value());
  REQUIRE(report.chair_s.has_value());
  CHECK(*report.chair_i == 0.125);
  CHECK(*report.chair_s == 0.3);

  // Independent brute-force reference agrees exactly.
  const auto ref = fixture_reference(ten_caption_fixture());
  CHECK(ref.mentions == report.mentions);
  CHECK(ref.hallucinated_mentions == report.hallucinated_mentions);
  CHECK(*report.chair_i == ref.chair_i);
  CHECK(*report.chair_s == ref.chair_s);
  CHECK(*report.avg_len == ref.avg_len);
}

TEST_CASE("chair_scores on the twenty-caption alias/plural fixture matches the reference") {
  const auto& fixture = twenty_caption_fixture();
  const Corpus corpus = fixture_corpus(fixture);
  const SynonymLexicon lexicon = fixture_lexicon(fixture, corpus.vocabulary);
  const ChairReport report = pope::chair_scores(fixture_captions(fixture), corpus, lexicon);

  // Hand count: 47 mentions, 8 hallucinated across 8 of 20 captions.
  CHECK(report.mentions == 47);
  CHECK(report.hallucinated_mentions == 8);
  CHECK(report.captions == 20);
  CHECK(report.hallucinated_captions == 8);

  const auto ref = fixture_reference(fixture);
  CHECK(ref.mentions == report.mentions);
  CHECK(ref.hallucinated_mentions == report.hallucinated_mentions);
  CHECK(ref.hallucinated_captions == report.hallucinated_captions);
  CHECK(*report.chair_i == ref.chair_i);
  CHECK(*report.chair_s == ref.chair_s);
  CHECK(*report.avg_len == ref.avg_len);
}

TEST_CASE("chair report renders percentages with one decimal") {
  CHECK(pope::percent1(0.025) == "2.5");
  CHECK(pope::percent1(0.125) == "12.5");
  CHECK(pope::percent1(0.3) == "30.0");

  const Corpus corpus = fixture_corpus(ten_caption_fixture());
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  const ChairReport report =
      pope::chair_scores(fixture_captions(ten_caption_fixture()), corpus, lexicon);
  const pope::Json j = pope::chair_report_json(report);
  CHECK(j["rendered"]["chair_i"] == "12.5");
  CHECK(j["rendered"]["chair_s"] == "30.0");
}

TEST_CASE("truth-only corpus scores zero on both ratios") {
  const Corpus corpus = make_corpus({"dog", "cat"}, {{"img1", {"dog", "cat"}}});
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  const std::vector<CaptionRecord> captions = {
      {"img1", "m", "p", "A dog and a cat."},
      {"img1", "m", "p", "The cat."},
  };
  const ChairReport report = pope::chair_scores(captions, corpus, lexicon);
  CHECK(*report.chair_i == 0.0);
  CHECK(*report.chair_s == 0.0);
}

TEST_CASE("chair_i is zero exactly when chair_s is zero") {
  const Corpus corpus = fixture_corpus(ten_caption_fixture());
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);

  for (std::size_t take = 1; take <= ten_caption_fixture().rows.size(); ++take) {
    std::vector<CaptionRecord> captions = fixture_captions(ten_caption_fixture());
    captions.resize(take);
    const ChairReport report = pope::chair_scores(captions, corpus, lexicon);
    if (report.mentions == 0) continue;
    CHECK((*report.chair_i == 0.0) == (*report.chair_s == 0.0));
  }
}

TEST_CASE("adding a truth-only caption never raises the numerators") {
  const Corpus corpus = fixture_corpus(ten_caption_fixture());
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);

  std::vector<CaptionRecord> captions = fixture_captions(ten_caption_fixture());
  const ChairReport before = pope::chair_scores(captions, corpus, lexicon);
  captions.push_back({"img01", "m", "p", "A person and a dog."});
  const ChairReport after = pope::chair_scores(captions, corpus, lexicon);

  CHECK(after.hallucinated_mentions == before.hallucinated_mentions);
  CHECK(after.hallucinated_captions == before.hallucinated_captions);
  CHECK(*after.chair_i <= *before.chair_i);
  CHECK(*after.chair_s <= *before.chair_s);
}

TEST_CASE("avg_len counts whitespace tokens of the raw caption") {
  const Corpus corpus = make_corpus({"dog"}, {{"img1", {"dog"}}});
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  const std::vector<CaptionRecord> captions = {
      {"img1", "m", "p", "one two three"},
      {"img1", "m", "p", "  spaced   out caption here  "},
  };
  const ChairReport report = pope::chair_scores(captions, corpus, lexicon);
  CHECK(*report.avg_len == doctest::Approx(3.5));
}

TEST_CASE("unknown image id in captions is a referential error") {
  const Corpus corpus = make_corpus({"dog"}, {{"img1", {"dog"}}});
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  const std::vector<CaptionRecord> captions = {{"ghost", "m", "p", "A dog."}};
  try {
    pope::chair_scores(captions, corpus, lexicon);
    FAIL("expected referential error");
  } catch (const ValidationError& e) {
    CHECK(e.kind() == ValidationError::Kind::kReferential);
    CHECK(std::string(e.what()).find("ghost") != std::string::npos);
  }
}

TEST_CASE("no captions leaves every ratio unset") {
  const Corpus corpus = make_corpus({"dog"}, {{"img1", {"dog"}}});
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  const ChairReport report = pope::chair_scores({}, corpus, lexicon);
  CHECK_FALSE(report.chair_i.has_value());
  CHECK_FALSE(report.chair_s.has_value());
  CHECK_FALSE(report.avg_len.has_value());
  const pope::Json j = pope::chair_report_json(report);
  CHECK(j["chair_i"].is_null());
  CHECK(j["flags"]["no_captions"] == true);
}

TEST_CASE("ratios stay within [0,1] on varied slices") {
  const Corpus corpus = fixture_corpus(ten_caption_fixture());
  const SynonymLexicon lexicon = SynonymLexicon::identity(corpus.vocabulary);
  std::vector<CaptionRecord> captions = fixture_captions(ten_caption_fixture());
  for (std::size_t begin = 0; begin < captions.size(); ++begin) {
    std::vector<CaptionRecord> slice(captions.begin() + static_cast<long>(begin), captions.end());
    const ChairReport report = pope::chair_scores(slice, corpus, lexicon);
    if (report.chair_i) {
      CHECK(*report.chair_i >= 0.0);
      CHECK(*report.chair_i <= 1.0);
    }
    if (report.chair_s) {
      CHECK(*report.chair_s >= 0.0);
      CHECK(*report.chair_s <= 1.0);
    }
  }
}
