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

#include "pope/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "pope/errors.hpp"
#include "pope/fingerprint.hpp"
#include "pope/jsonl.hpp"
#include "pope/text.hpp"

namespace pope {

namespace {

using Kind = ValidationError::Kind;

std::vector<ObjectId> sorted_unique(std::vector<ObjectId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

std::string_view to_string(Source source) {
  return source == Source::kAnnotation ? "annotation" : "segmentation";
}

Source source_from_string(std::string_view s) {
  if (s == "annotation") return Source::kAnnotation;
  if (s == "segmentation") return Source::kSegmentation;
  throw ValidationError(Kind::kSchema, "unknown source '" + std::string(s) + "'");
}

std::string_view to_string(ParsedAnswer parsed) {
  switch (parsed) {
    case ParsedAnswer::kYes:
      return "yes";
    case ParsedAnswer::kNo:
      return "no";
    default:
      return "unparsed";
  }
}

// --- ObjectVocabulary ------------------------------------------------------

ObjectVocabulary ObjectVocabulary::from_names(std::vector<std::string> canonical_names) {
  ObjectVocabulary vocab;
  vocab.names_ = std::move(canonical_names);
  vocab.ids_.reserve(vocab.names_.size());
  for (std::size_t i = 0; i < vocab.names_.size(); ++i) {
    const std::string& name = vocab.names_[i];
    if (name.empty()) {
      throw ValidationError(Kind::kSchema,
                            "vocabulary entry " + std::to_string(i) + " has an empty name");
    }
    if (name != normalize_phrase(name)) {
      throw ValidationError(Kind::kSchema, "vocabulary name '" + name +
                                               "' is not in canonical lowercase form");
    }
    auto [it, inserted] = vocab.ids_.emplace(name, static_cast<ObjectId>(i));
    if (!inserted) {
      throw ValidationError(Kind::kSchema, "duplicate vocabulary name '" + name + "'");
    }
  }
  return vocab;
}

const std::string& ObjectVocabulary::name(ObjectId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= names_.size()) {
    throw ValidationError(Kind::kReferential,
                          "object id " + std::to_string(id) + " outside vocabulary of size " +
                              std::to_string(names_.size()));
  }
  return names_[static_cast<std::size_t>(id)];
}

std::optional<ObjectId> ObjectVocabulary::find(std::string_view canonical_name) const {
  auto it = ids_.find(std::string(canonical_name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

// --- ImageRecord / ImageIndex ----------------------------------------------

bool ImageRecord::contains(ObjectId id) const {
  return std::binary_search(ground_truth.begin(), ground_truth.end(), id);
}

ImageIndex::ImageIndex(const std::vector<ImageRecord>& images) {
  by_id_.reserve(images.size());
  for (const ImageRecord& image : images) by_id_.emplace(image.image_id, &image);
}

const ImageRecord* ImageIndex::find(std::string_view image_id) const {
  auto it = by_id_.find(image_id);
  return it == by_id_.end() ? nullptr : it->second;
}

// --- SynonymLexicon ---------------------------------------------------------

SynonymLexicon SynonymLexicon::identity(const ObjectVocabulary& vocab) {
  SynonymLexicon lexicon;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    lexicon.add_mapping(vocab.names()[i], static_cast<ObjectId>(i));
  }
  return lexicon;
}

void SynonymLexicon::add_mapping(std::string_view phrase, ObjectId target) {
  std::string key(phrase);
  if (key.empty()) {
    throw ValidationError(Kind::kSchema, "empty surface phrase in lexicon");
  }
  auto [it, inserted] = by_phrase_.emplace(key, target);
  if (!inserted && it->second != target) {
    throw ValidationError(Kind::kConflict, "surface phrase '" + key +
                                               "' already maps to a different object");
  }
  int tokens = 1;
  for (char c : key) tokens += (c == ' ');
  max_phrase_tokens_ = std::max(max_phrase_tokens_, tokens);
}

std::optional<ObjectId> SynonymLexicon::lookup(std::string_view phrase) const {
  auto it = by_phrase_.find(std::string(phrase));
  if (it == by_phrase_.end()) return std::nullopt;
  return it->second;
}

std::optional<ObjectId> SynonymLexicon::lookup_singularized(std::string_view phrase) const {
  if (auto hit = lookup(phrase)) return hit;
  const std::size_t last = phrase.rfind(' ');
  const std::string_view tail = last == std::string_view::npos ? phrase : phrase.substr(last + 1);
  if (tail.size() >= 2 && tail.back() == 's') {
    return lookup(std::string(phrase.substr(0, phrase.size() - 1)));
  }
  return std::nullopt;
}

// --- COCO instances ----------------------------------------------------------

Corpus load_coco_instances(const std::filesystem::path& path) {
  const Json doc = parse_json_file(path);
  const Json& images = require_array(doc, "images", "$");
  const Json& annotations = require_array(doc, "annotations", "$");
  const Json& categories = require_array(doc, "categories", "$");

  std::vector<std::string> names;
  std::unordered_map<std::int64_t, ObjectId> category_ids;
  names.reserve(categories.size());
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const std::string where = "categories[" + std::to_string(i) + "]";
    const std::int64_t id = require_int(categories[i], "id", where);
    const std::string raw_name = require_string(categories[i], "name", where);
    const std::string name = normalize_phrase(raw_name);
    if (name.empty()) {
      throw ValidationError(Kind::kSchema, "empty category name at " + where + ".name");
    }
    if (!category_ids.emplace(id, static_cast<ObjectId>(names.size())).second) {
      throw ValidationError(Kind::kSchema,
                            "duplicate category id " + std::to_string(id) + " at " + where);
    }
    names.push_back(name);
  }

  Corpus corpus;
  corpus.vocabulary = ObjectVocabulary::from_names(std::move(names));
  corpus.source = Source::kAnnotation;

  std::unordered_map<std::string, std::size_t> image_slots;
  corpus.images.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string where = "images[" + std::to_string(i) + "]";
    std::string image_id = require_id_string(images[i], "id", where);
    if (!image_slots.emplace(image_id, corpus.images.size()).second) {
      throw ValidationError(Kind::kSchema,
                            "duplicate image id '" + image_id + "' at " + where);
    }
    corpus.images.push_back(ImageRecord{std::move(image_id), {}, Source::kAnnotation});
  }

  for (std::size_t i = 0; i < annotations.size(); ++i) {
    const std::string where = "annotations[" + std::to_string(i) + "]";
    const std::string image_id = require_id_string(annotations[i], "image_id", where);
    const std::int64_t category = require_int(annotations[i], "category_id", where);

    auto slot = image_slots.find(image_id);
    if (slot == image_slots.end()) {
      throw ValidationError(Kind::kReferential, where + ".image_id '" + image_id +
                                                    "' does not match any entry in images");
    }
    auto object = category_ids.find(category);
    if (object == category_ids.end()) {
      throw ValidationError(Kind::kReferential,
                            where + ".category_id " + std::to_string(category) +
                                " does not match any entry in categories");
    }
    corpus.images[slot->second].ground_truth.push_back(object->second);
  }

  for (ImageRecord& image : corpus.images) {
    image.ground_truth = sorted_unique(std::move(image.ground_truth));
  }
  corpus.fingerprint = compute_corpus_fingerprint(corpus.vocabulary, corpus.images, corpus.source);
  return corpus;
}

// --- Object lists -------------------------------------------------------------

std::vector<ImageRecord> load_object_lists(const std::filesystem::path& path,
                                           const ObjectVocabulary& vocab,
                                           const SynonymLexicon* aliases,
                                           UnknownNamePolicy policy,
                                           std::vector<std::string>* warnings) {
  std::vector<ImageRecord> records;
  std::set<std::string> seen_ids;
  for_each_jsonl_line(path, [&](std::size_t line_no, const Json& record) {
    const std::string where = "line " + std::to_string(line_no);
    std::string image_id = require_id_string(record, "image_id", where);
    if (!seen_ids.insert(image_id).second) {
      throw ValidationError(Kind::kSchema,
                            path.string() + " " + where + ": duplicate image_id '" +
                                image_id + "'");
    }
    const Json& objects = require_array(record, "objects", where);

    ImageRecord image{std::move(image_id), {}, Source::kSegmentation};
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (!objects[i].is_string()) {
        throw ValidationError(Kind::kSchema, path.string() + " " + where + ".objects[" +
                                                 std::to_string(i) + "]: expected a string");
      }
      const std::string name = normalize_phrase(objects[i].get<std::string>());
      std::optional<ObjectId> id =
          aliases != nullptr ? aliases->lookup(name) : vocab.find(name);
      if (!id) {
        if (policy == UnknownNamePolicy::kReject) {
          throw ValidationError(Kind::kReferential,
                                path.string() + " " + where + ": object name '" + name +
                                    "' is not in the vocabulary");
        }
        if (warnings != nullptr) {
          warnings->push_back(where + ": skipped unknown object name '" + name + "'");
        }
        continue;
      }
      image.ground_truth.push_back(*id);
    }
    image.ground_truth = sorted_unique(std::move(image.ground_truth));
    records.push_back(std::move(image));
  });
  return records;
}

// --- Lexicon --------------------------------------------------------------------

SynonymLexicon load_lexicon(const std::filesystem::path& path, const ObjectVocabulary& vocab) {
  SynonymLexicon lexicon = SynonymLexicon::identity(vocab);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError(Kind::kSchema, path.string() + " line " + std::to_string(line_no) +
                                               ": expected 'surface<TAB>canonical'");
    }
    const std::string surface = normalize_phrase(line.substr(0, tab));
    const std::string canonical = normalize_phrase(line.substr(tab + 1));
    if (surface.empty() || canonical.empty()) {
      throw ValidationError(Kind::kSchema, path.string() + " line " + std::to_string(line_no) +
                                               ": empty surface or canonical name");
    }
    const std::optional<ObjectId> target = vocab.find(canonical);
    if (!target) {
      throw ValidationError(Kind::kSchema, path.string() + " line " + std::to_string(line_no) +
                                               ": canonical name '" + canonical +
                                               "' is not in the vocabulary");
    }
    try {
      lexicon.add_mapping(surface, *target);
    } catch (const ValidationError& e) {
      throw ValidationError(e.kind(), path.string() + " line " + std::to_string(line_no) +
                                          ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
  return lexicon;
}

ObjectVocabulary load_vocabulary_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const std::size_t first_content = text.find_first_not_of(" \t\r\n");
  if (first_content != std::string::npos && text[first_content] == '{') {
    return load_corpus_jsonl(path).vocabulary;
  }

  std::vector<std::string> names;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string name = normalize_phrase(line);
    if (!name.empty()) names.push_back(name);
  }
  return ObjectVocabulary::from_names(std::move(names));
}

// --- Toolkit corpus format --------------------------------------------------------

std::string compute_corpus_fingerprint(const ObjectVocabulary& vocab,
                                       const std::vector<ImageRecord>& images, Source source) {
  Fingerprinter fp;
  fp.add("corpus/v1").add(to_string(source));
  fp.add(static_cast<std::uint64_t>(vocab.size()));
  for (const std::string& name : vocab.names()) fp.add(name);
  fp.add(static_cast<std::uint64_t>(images.size()));
  for (const ImageRecord& image : images) {
    fp.add(image.image_id);
    fp.add(static_cast<std::uint64_t>(image.ground_truth.size()));
    for (ObjectId id : image.ground_truth) fp.add(static_cast<std::uint64_t>(id));
  }
  return fp.hex();
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  Json header;
  header["type"] = "corpus";
  header["source"] = to_string(corpus.source);
  header["vocabulary"] = corpus.vocabulary.names();
  header["fingerprint"] = corpus.fingerprint;
  out += header.dump();
  out.push_back('\n');

  for (const ImageRecord& image : corpus.images) {
    Json line;
    line["image_id"] = image.image_id;
    Json names = Json::array();
    for (ObjectId id : image.ground_truth) names.push_back(corpus.vocabulary.name(id));
    line["objects"] = std::move(names);
    out += line.dump();
    out.push_back('\n');
  }
  return out;
}

void save_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  write_text_file(path, corpus_to_jsonl(corpus));
}

Corpus load_corpus_jsonl(const std::filesystem::path& path) {
  Corpus corpus;
  bool have_header = false;
  std::set<std::string> seen_ids;

  for_each_jsonl_line(path, [&](std::size_t line_no, const Json& record) {
    const std::string where = "line " + std::to_string(line_no);
    if (!have_header) {
      const std::string type = require_string(record, "type", where);
      if (type != "corpus") {
        throw ValidationError(Kind::kSchema, path.string() + " " + where +
                                                 ": expected a corpus header, got type '" +
                                                 type + "'");
      }
      corpus.source = source_from_string(require_string(record, "source", where));
      const Json& names = require_array(record, "vocabulary", where);
      std::vector<std::string> vocab_names;
      vocab_names.reserve(names.size());
      for (const Json& name : names) {
        if (!name.is_string()) {
          throw ValidationError(Kind::kSchema,
                                path.string() + " " + where + ": vocabulary entries must be strings");
        }
        vocab_names.push_back(name.get<std::string>());
      }
      corpus.vocabulary = ObjectVocabulary::from_names(std::move(vocab_names));
      have_header = true;
      return;
    }

    std::string image_id = require_id_string(record, "image_id", where);
    if (!seen_ids.insert(image_id).second) {
      throw ValidationError(Kind::kSchema, path.string() + " " + where +
                                               ": duplicate image_id '" + image_id + "'");
    }
    const Json& objects = require_array(record, "objects", where);
    ImageRecord image{std::move(image_id), {}, corpus.source};
    for (const Json& name : objects) {
      if (!name.is_string()) {
        throw ValidationError(Kind::kSchema,
                              path.string() + " " + where + ": objects entries must be strings");
      }
      const std::optional<ObjectId> id = corpus.vocabulary.find(name.get<std::string>());
      if (!id) {
        throw ValidationError(Kind::kReferential,
                              path.string() + " " + where + ": object name '" +
                                  name.get<std::string>() + "' is not in the header vocabulary");
      }
      image.ground_truth.push_back(*id);
    }
    image.ground_truth = sorted_unique(std::move(image.ground_truth));
    corpus.images.push_back(std::move(image));
  });

  if (!have_header) {
    throw ValidationError(Kind::kSchema, path.string() + ": missing corpus header line");
  }
  corpus.fingerprint = compute_corpus_fingerprint(corpus.vocabulary, corpus.images, corpus.source);
  return corpus;
}

// --- Captions ------------------------------------------------------------------------

std::vector<CaptionRecord> load_captions_jsonl(const std::filesystem::path& path) {
  std::vector<CaptionRecord> captions;
  bool first = true;
  for_each_jsonl_line(path, [&](std::size_t line_no, const Json& record) {
    if (first && record.is_object() && record.contains("type")) {
      first = false;  // producer header; schema is per-line otherwise
      return;
    }
    first = false;
    const std::string where = "line " + std::to_string(line_no);
    CaptionRecord caption;
    caption.image_id = require_id_string(record, "image_id", where);
    caption.model_id = require_string(record, "model_id", where);
    caption.prompt_id = require_string(record, "prompt_id", where);
    caption.text = require_string(record, "text", where);
    captions.push_back(std::move(caption));
  });
  return captions;
}

void save_captions_jsonl(const std::vector<CaptionRecord>& captions,
                         const std::filesystem::path& path,
                         std::string_view producer_fingerprint) {
  std::string out;
  if (!producer_fingerprint.empty()) {
    Json header;
    header["type"] = "captions";
    header["fingerprint"] = std::string(producer_fingerprint);
    out += header.dump();
    out.push_back('\n');
  }
  for (const CaptionRecord& caption : captions) {
    Json line;
    line["image_id"] = caption.image_id;
    line["model_id"] = caption.model_id;
    line["prompt_id"] = caption.prompt_id;
    line["text"] = caption.text;
    out += line.dump();
    out.push_back('\n');
  }
  write_text_file(path, out);
}

}  // namespace pope
