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

#ifndef POPE_TESTS_SUPPORT_CHAIR_FIXTURES_HPP_
#define POPE_TESTS_SUPPORT_CHAIR_FIXTURES_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pope/corpus.hpp"

#include "support/chair_reference.hpp"

namespace pope::testing {

// Hand-authored caption corpora with known mention and hallucination
// counts, shared by the unit tests and the acceptance gate.
struct ChairFixture {
  struct Row {
    std::string image_id;
    std::vector<std::string> ground_truth;
    std::string caption;
  };

  std::vector<std::string> vocabulary;
  std::vector<std::pair<std::string, std::string>> lexicon;  // surface -> canonical
  std::vector<Row> rows;
};

// Ten captions, four distinct objects each: 40 mentions, 5 hallucinated,
// 3 captions with at least one hallucination -> chair_i 0.125, chair_s 0.3.
inline const ChairFixture& ten_caption_fixture() {
  static const ChairFixture kFixture = {
      {"person", "car", "dog", "cat", "chair", "bird", "boat", "horse", "sheep", "cow", "bus",
       "train"},
      {},
      {
          {"img01", {"person", "dog", "chair", "car"},
           "A person with a dog sits on a chair near a car."},
          {"img02", {"horse", "cow", "bird", "sheep"},
           "A horse and a cow graze while a bird watches a sheep."},
          {"img03", {"bus", "train", "boat", "car"},
           "A bus and a train pass a boat and a car."},
          {"img04", {"cat", "dog", "chair", "person"},
           "A cat chases a dog around a chair and a person."},
          {"img05", {"person", "horse", "car", "bus"},
           "A person rides a horse past a car and a bus."},
          {"img06", {"bird", "boat", "cow", "sheep"},
           "A bird lands on a boat beside a cow and a sheep."},
          {"img07", {"dog", "cat", "train", "chair"},
           "A dog and a cat nap near a train and a chair."},
          {"img08", {"person", "dog"}, "A person walks a dog past a car and a boat."},
          {"img09", {"cat", "bird"}, "A cat and a bird sit by a bus and a train."},
          {"img10", {"horse", "cow", "sheep"},
           "A horse stands near a cow, a sheep, and a chair."},
      }};
  return kFixture;
}

// Twenty captions exercising aliases, plural stripping, multi-word names
// and near-miss tokens. Hand count: 47 mentions, 8 hallucinated, 8 captions
// with a hallucination.
inline const ChairFixture& twenty_caption_fixture() {
  static const ChairFixture kFixture = {
      {"person", "car", "dog", "cat", "chair", "bird", "boat", "horse", "sheep", "cow", "bus",
       "train", "couch", "tv", "dining table", "bicycle"},
      {
          {"man", "person"},
          {"woman", "person"},
          {"puppy", "dog"},
          {"kitten", "cat"},
          {"sofa", "couch"},
          {"automobile", "car"},
          {"television", "tv"},
          {"kitchen table", "dining table"},
          {"bike", "bicycle"},
          {"table", "dining table"},
      },
      {
          {"img11", {"person", "dog"}, "A man walks his dogs past parked cars."},
          {"img12", {"couch", "tv", "cat"},
           "A kitten sleeps on the sofa in front of the television."},
          {"img13", {"dining table", "chair"}, "Two chairs stand near a kitchen table."},
          {"img14", {"bus"}, "A cartoon bus drives by a busy carpet store."},
          {"img15", {"horse", "cow", "sheep"},
           "Horses and cows graze beside a sheep and a bicycle."},
          {"img16", {"boat", "bird"}, "A bird lands on the boat."},
          {"img17", {"person", "bicycle"}, "A woman rides her bike past a train."},
          {"img18", {"car"}, "An automobile is parked."},
          {"img19", {"dog", "person"}, "A puppy chases a man around a dining table."},
          {"img20", {"tv", "couch"}, "A television above a couch shows a boat race."},
          {"img21", {"train", "person"}, "A man waits as a train passes the station."},
          {"img22", {"cat", "chair"}, "Cats nap on chairs."},
          {"img23", {"sheep", "cow"}, "A sheep and a cow share a field with a horse."},
          {"img24", {"bus", "person"}, "People crowd onto a bus."},
          {"img25", {"dining table", "person", "chair"},
           "A man sits on a chair at a dining table near a table."},
          {"img26", {"boat"}, "Boats docked in rows."},
          {"img27", {"bird", "cat"}, "A bird watches a kitten from a tree."},
          {"img28", {"car", "person"},
           "A man polishes his automobile while a puppy plays."},
          {"img29", {"horse"}, "A horse gallops."},
          {"img30", {"cow", "sheep", "bird"},
           "Cows, sheep, and birds gather by a dining table."},
      }};
  return kFixture;
}

inline pope::Corpus fixture_corpus(const ChairFixture& fixture) {
  pope::Corpus corpus;
  corpus.vocabulary = pope::ObjectVocabulary::from_names(fixture.vocabulary);
  for (const ChairFixture::Row& row : fixture.rows) {
    pope::ImageRecord image;
    image.image_id = row.image_id;
    for (const std::string& name : row.ground_truth) {
      image.ground_truth.push_back(*corpus.vocabulary.find(name));
    }
    std::sort(image.ground_truth.begin(), image.ground_truth.end());
    corpus.images.push_back(std::move(image));
  }
  corpus.fingerprint =
      pope::compute_corpus_fingerprint(corpus.vocabulary, corpus.images, corpus.source);
  return corpus;
}

inline pope::SynonymLexicon fixture_lexicon(const ChairFixture& fixture,
                                            const pope::ObjectVocabulary& vocab) {
  pope::SynonymLexicon lexicon = pope::SynonymLexicon::identity(vocab);
  for (const auto& [surface, canonical] : fixture.lexicon) {
    lexicon.add_mapping(surface, *vocab.find(canonical));
  }
  return lexicon;
}

inline std::vector<pope::CaptionRecord> fixture_captions(const ChairFixture& fixture) {
  std::vector<pope::CaptionRecord> captions;
  for (const ChairFixture::Row& row : fixture.rows) {
    captions.push_back({row.image_id, "fixture", "caption-short", row.caption});
  }
  return captions;
}

inline RefChairResult fixture_reference(const ChairFixture& fixture) {
  std::vector<RefCaption> captions;
  std::map<std::string, std::set<std::string>> truth;
  for (const ChairFixture::Row& row : fixture.rows) {
    captions.push_back({row.image_id, row.caption});
    truth[row.image_id] = {row.ground_truth.begin(), row.ground_truth.end()};
  }
  std::map<std::string, std::string> lexicon(fixture.lexicon.begin(), fixture.lexicon.end());
  return ref_chair(captions, truth, fixture.vocabulary, lexicon);
}

}  // namespace pope::testing

#endif  // POPE_TESTS_SUPPORT_CHAIR_FIXTURES_HPP_
