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

#ifndef POPE_CORPUS_HPP_
#define POPE_CORPUS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pope {

using ObjectId = std::int32_t;

enum class Source { kAnnotation, kSegmentation };

std::string_view to_string(Source source);
Source source_from_string(std::string_view s);

// The probed-object universe: dense ids 0..n-1 mapped to unique, non-empty,
// lowercase canonical names.
class ObjectVocabulary {
 public:
  ObjectVocabulary() = default;

  // Validates uniqueness and normalization; names keep their given order.
  static ObjectVocabulary from_names(std::vector<std::string> canonical_names);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::string& name(ObjectId id) const;
  const std::vector<std::string>& names() const { return names_; }
  std::optional<ObjectId> find(std::string_view canonical_name) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ObjectId> ids_;
};

struct ImageRecord {
  std::string image_id;
  std::vector<ObjectId> ground_truth;  // sorted, unique
  Source source = Source::kAnnotation;

  bool contains(ObjectId id) const;
};

struct Corpus {
  ObjectVocabulary vocabulary;
  std::vector<ImageRecord> images;
  Source source = Source::kAnnotation;
  std::string fingerprint;
};

// Lookup of image records by id; records must outlive the index.
class ImageIndex {
 public:
  explicit ImageIndex(const std::vector<ImageRecord>& images);
  const ImageRecord* find(std::string_view image_id) const;

 private:
  std::unordered_map<std::string_view, const ImageRecord*> by_id_;
};

// Surface phrases (lowercase tokens joined by single spaces) mapped to
// object ids. Always contains the identity mapping for every canonical
// name; no phrase may map to two different objects.
class SynonymLexicon {
 public:
  static SynonymLexicon identity(const ObjectVocabulary& vocab);

  void add_mapping(std::string_view phrase, ObjectId target);
  std::optional<ObjectId> lookup(std::string_view phrase) const;

  // Exact lookup first; on a miss, retries with a trailing 's' stripped
  // from the final token ("dining tables" -> "dining table").
  std::optional<ObjectId> lookup_singularized(std::string_view phrase) const;

  std::size_t size() const { return by_phrase_.size(); }
  int max_phrase_tokens() const { return max_phrase_tokens_; }
  const std::unordered_map<std::string, ObjectId>& mappings() const { return by_phrase_; }

 private:
  std::unordered_map<std::string, ObjectId> by_phrase_;
  int max_phrase_tokens_ = 0;
};

struct CaptionRecord {
  std::string image_id;
  std::string model_id;
  std::string prompt_id;
  std::string text;

  friend bool operator==(const CaptionRecord&, const CaptionRecord&) = default;
};

enum class ParsedAnswer { kYes, kNo, kUnparsed };

std::string_view to_string(ParsedAnswer parsed);

struct AnswerRecord {
  std::string image_id;
  std::string object_name;
  std::string raw_text;
  ParsedAnswer parsed = ParsedAnswer::kUnparsed;
  std::string note;  // transport diagnostics, empty on clean responses
};

// --- Loaders -------------------------------------------------------------

// COCO-style instances JSON: images[].id, annotations[].{image_id,
// category_id}, categories[].{id,name}. Category names are lowercased and
// whitespace-normalized; ids are re-densified in category order.
Corpus load_coco_instances(const std::filesystem::path& path);

enum class UnknownNamePolicy { kReject, kSkip };

// Segmentation-derived object lists: one {"image_id", "objects": [...]}
// per line. Names resolve through `aliases` when given (identity included),
// otherwise directly against the vocabulary.
std::vector<ImageRecord> load_object_lists(const std::filesystem::path& path,
                                           const ObjectVocabulary& vocab,
                                           const SynonymLexicon* aliases = nullptr,
                                           UnknownNamePolicy policy = UnknownNamePolicy::kReject,
                                           std::vector<std::string>* warnings = nullptr);

// Tab-separated `surface<TAB>canonical` lines; '#' comments ignored. The
// result always includes identity mappings for the whole vocabulary.
SynonymLexicon load_lexicon(const std::filesystem::path& path, const ObjectVocabulary& vocab);

// Plain text file with one canonical name per line, or a corpus JSONL file
// whose header carries the vocabulary.
ObjectVocabulary load_vocabulary_file(const std::filesystem::path& path);

// --- Toolkit corpus format ----------------------------------------------

std::string corpus_to_jsonl(const Corpus& corpus);
void save_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus_jsonl(const std::filesystem::path& path);

std::string compute_corpus_fingerprint(const ObjectVocabulary& vocab,
                                       const std::vector<ImageRecord>& images, Source source);

// --- Captions ------------------------------------------------------------

std::vector<CaptionRecord> load_captions_jsonl(const std::filesystem::path& path);
void save_captions_jsonl(const std::vector<CaptionRecord>& captions,
                         const std::filesystem::path& path,
                         std::string_view producer_fingerprint = {});

}  // namespace pope

#endif  // POPE_CORPUS_HPP_
