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

#include "pope/scorer.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "pope/errors.hpp"
#include "pope/format.hpp"
#include "pope/text.hpp"

namespace pope {

namespace {

using Kind = ValidationError::Kind;

std::string question_key(std::string_view image_id, std::string_view object_name) {
  std::string key;
  key.reserve(image_id.size() + object_name.size() + 1);
  key.append(image_id);
  key.push_back('\x1f');
  key.append(object_name);
  return key;
}

std::string ref_label(std::string_view image_id, std::string_view object_name) {
  return std::string(image_id) + "/" + std::string(object_name);
}

std::string list_refs(const std::vector<std::string>& refs) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(refs.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += ", ";
    out += refs[i];
  }
  if (refs.size() > shown) {
    out += " (+" + std::to_string(refs.size() - shown) + " more)";
  }
  return out;
}

// One answer per probe question, matched on (image_id, object).
std::vector<const AnswerRecord*> match_answers(const ProbeSet& probe,
                                               const std::vector<AnswerRecord>& answers) {
  std::unordered_map<std::string, std::size_t> slots;
  slots.reserve(probe.questions.size());
  for (std::size_t i = 0; i < probe.questions.size(); ++i) {
    const ProbeQuestion& q = probe.questions[i];
    if (!slots.emplace(question_key(q.image_id, q.object_name), i).second) {
      throw ValidationError(Kind::kSchema, "probe contains duplicate question for " +
                                               ref_label(q.image_id, q.object_name));
    }
  }

  std::vector<const AnswerRecord*> matched(probe.questions.size(), nullptr);
  std::vector<std::string> duplicates;
  std::vector<std::string> unknown;
  for (const AnswerRecord& answer : answers) {
    auto it = slots.find(question_key(answer.image_id, answer.object_name));
    if (it == slots.end()) {
      unknown.push_back(ref_label(answer.image_id, answer.object_name));
      continue;
    }
    if (matched[it->second] != nullptr) {
      duplicates.push_back(ref_label(answer.image_id, answer.object_name));
      continue;
    }
    matched[it->second] = &answer;
  }

  std::vector<std::string> missing;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (matched[i] == nullptr) {
      missing.push_back(ref_label(probe.questions[i].image_id, probe.questions[i].object_name));
    }
  }

  if (!missing.empty() || !duplicates.empty() || !unknown.empty()) {
    std::string message = "answers do not cover the probe exactly once;";
    if (!missing.empty()) message += " missing: " + list_refs(missing) + ";";
    if (!duplicates.empty()) message += " duplicated: " + list_refs(duplicates) + ";";
    if (!unknown.empty()) message += " not in probe: " + list_refs(unknown) + ";";
    throw ValidationError(Kind::kCoverage, message);
  }
  return matched;
}

}  // namespace

ParsedAnswer parse_answer(std::string_view raw) {
  const std::string lowered = to_lower(raw);

  // First alphabetic token wins outright.
  std::string first_token;
  for (char c : lowered) {
    const bool alpha = c >= 'a' && c <= 'z';
    if (alpha) {
      first_token.push_back(c);
    } else if (!first_token.empty()) {
      break;
    }
  }
  if (first_token == "yes") return ParsedAnswer::kYes;
  if (first_token == "no") return ParsedAnswer::kNo;

  // Otherwise the first sentence must contain exactly one of the labels.
  std::size_t end = lowered.find_first_of(".!?");
  if (end == std::string::npos) end = lowered.size();
  bool saw_yes = false;
  bool saw_no = false;
  std::string token;
  auto flush = [&] {
    if (token == "yes") saw_yes = true;
    if (token == "no") saw_no = true;
    token.clear();
  };
  for (std::size_t i = 0; i < end; ++i) {
    const char c = lowered[i];
    if (c >= 'a' && c <= 'z') {
      token.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  if (saw_yes != saw_no) return saw_yes ? ParsedAnswer::kYes : ParsedAnswer::kNo;
  return ParsedAnswer::kUnparsed;
}

std::string_view to_string(UnparsedPolicy policy) {
  return policy == UnparsedPolicy::kAsNo ? "as_no" : "exclude";
}

ScoreReport score(const ProbeSet& probe, const std::vector<AnswerRecord>& answers,
                  UnparsedPolicy policy) {
  const std::vector<const AnswerRecord*> matched = match_answers(probe, answers);

  ScoreReport report;
  report.policy = policy;
  for (std::size_t i = 0; i < probe.questions.size(); ++i) {
    ParsedAnswer parsed = parse_answer(matched[i]->raw_text);
    if (parsed == ParsedAnswer::kUnparsed) {
      report.unparsed += 1;
      if (policy == UnparsedPolicy::kExclude) continue;
      parsed = ParsedAnswer::kNo;
    }
    const bool said_yes = parsed == ParsedAnswer::kYes;
    if (probe.questions[i].expected_yes) {
      (said_yes ? report.confusion.tp : report.confusion.fn) += 1;
    } else {
      (said_yes ? report.confusion.fp : report.confusion.tn) += 1;
    }
  }

  const Confusion& c = report.confusion;
  const std::int64_t scored = c.total();
  if (scored > 0) {
    report.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(scored);
    report.yes_ratio = static_cast<double>(c.tp + c.fp) / static_cast<double>(scored);
    if (c.tp + c.fp > 0) {
      report.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    }
    if (c.tp + c.fn > 0) {
      report.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    }
    if (c.tp == 0) {
      report.f1 = 0.0;
    } else {
      const double p = *report.precision;
      const double r = *report.recall;
      report.f1 = 2.0 * p * r / (p + r);
    }
  }
  return report;
}

ConsistencyReport consistency(const ProbeSet& probe, const std::vector<AnswerRecord>& answers,
                              const std::vector<MentionSet>& mentions,
                              const ObjectVocabulary& vocab) {
  const std::vector<const AnswerRecord*> matched = match_answers(probe, answers);

  std::unordered_map<std::string, std::set<ObjectId>> mentioned_by_image;
  for (const MentionSet& mention : mentions) {
    auto& bucket = mentioned_by_image[mention.image_id];
    bucket.insert(mention.mentioned.begin(), mention.mentioned.end());
  }

  ConsistencyReport report;
  for (std::size_t i = 0; i < probe.questions.size(); ++i) {
    const ProbeQuestion& q = probe.questions[i];
    auto bucket = mentioned_by_image.find(q.image_id);
    if (bucket == mentioned_by_image.end()) {
      throw ValidationError(Kind::kReferential, "image '" + q.image_id +
                                                    "' present in answers but absent from mentions");
    }
    const std::optional<ObjectId> id = vocab.find(q.object_name);
    if (!id) {
      throw ValidationError(Kind::kReferential,
                            "probe object '" + q.object_name + "' is not in the vocabulary");
    }
    const bool in_caption = bucket->second.count(*id) > 0;
    const ParsedAnswer parsed = parse_answer(matched[i]->raw_text);
    if (parsed == ParsedAnswer::kNo) {
      report.no_answered_objects += 1;
      if (in_caption) report.no_answered_mentioned_in_caption += 1;
    }
    if (in_caption) {
      report.caption_mentioned_objects += 1;
      if (parsed == ParsedAnswer::kYes) report.caption_mentioned_answered_yes += 1;
    }
  }
  return report;
}

// --- Answers JSONL -----------------------------------------------------------

AnswersFile load_answers_jsonl(const std::filesystem::path& path) {
  AnswersFile file;
  bool first = true;
  for_each_jsonl_line(path, [&](std::size_t line_no, const Json& record) {
    const std::string where = "line " + std::to_string(line_no);
    if (first && record.is_object() && record.contains("type")) {
      first = false;
      const std::string type = require_string(record, "type", where);
      if (type != "answers") {
        throw ValidationError(Kind::kSchema, path.string() + " " + where +
                                                 ": expected an answers header, got type '" +
                                                 type + "'");
      }
      if (record.contains("probe_fingerprint")) {
        file.probe_fingerprint = require_string(record, "probe_fingerprint", where);
      }
      if (record.contains("model_id")) {
        file.model_id = require_string(record, "model_id", where);
      }
      return;
    }
    first = false;
    AnswerRecord answer;
    answer.image_id = require_id_string(record, "image_id", where);
    answer.object_name = require_string(record, "object", where);
    answer.raw_text = require_string(record, "raw_text", where);
    if (record.contains("note")) answer.note = require_string(record, "note", where);
    answer.parsed = parse_answer(answer.raw_text);
    file.records.push_back(std::move(answer));
  });
  return file;
}

std::string answers_to_jsonl(const AnswersFile& answers) {
  std::string out;
  Json header;
  header["type"] = "answers";
  header["probe_fingerprint"] = answers.probe_fingerprint;
  header["model_id"] = answers.model_id;
  out += header.dump();
  out.push_back('\n');
  for (const AnswerRecord& answer : answers.records) {
    Json line;
    line["image_id"] = answer.image_id;
    line["object"] = answer.object_name;
    line["raw_text"] = answer.raw_text;
    if (!answer.note.empty()) line["note"] = answer.note;
    out += line.dump();
    out.push_back('\n');
  }
  return out;
}

void save_answers_jsonl(const AnswersFile& answers, const std::filesystem::path& path) {
  write_text_file(path, answers_to_jsonl(answers));
}

// --- Report JSON ----------------------------------------------------------------

Json score_report_json(const ScoreReport& report, std::string_view probe_fingerprint) {
  Json j;
  j["type"] = "score_report";
  j["probe_fingerprint"] = std::string(probe_fingerprint);
  j["unparsed_policy"] = std::string(to_string(report.policy));
  Json confusion;
  confusion["tp"] = report.confusion.tp;
  confusion["fp"] = report.confusion.fp;
  confusion["tn"] = report.confusion.tn;
  confusion["fn"] = report.confusion.fn;
  j["confusion"] = std::move(confusion);
  j["unparsed"] = report.unparsed;
  j["scored_questions"] = report.confusion.total();

  Json metrics;
  auto metric = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  metrics["accuracy"] = metric(report.accuracy);
  metrics["precision"] = metric(report.precision);
  metrics["recall"] = metric(report.recall);
  metrics["f1"] = metric(report.f1);
  metrics["yes_ratio"] = metric(report.yes_ratio);
  j["metrics"] = std::move(metrics);

  Json rendered;
  rendered["accuracy"] = percent2_or(report.accuracy);
  rendered["precision"] = percent2_or(report.precision);
  rendered["recall"] = percent2_or(report.recall);
  rendered["f1"] = percent2_or(report.f1);
  rendered["yes_ratio"] = percent2_or(report.yes_ratio);
  j["rendered"] = std::move(rendered);
  return j;
}

Json consistency_report_json(const ConsistencyReport& report,
                             std::string_view probe_fingerprint) {
  Json j;
  j["type"] = "consistency_report";
  j["probe_fingerprint"] = std::string(probe_fingerprint);
  j["no_answered_objects"] = report.no_answered_objects;
  j["no_answered_mentioned_in_caption"] = report.no_answered_mentioned_in_caption;
  j["caption_mentioned_objects"] = report.caption_mentioned_objects;
  j["caption_mentioned_answered_yes"] = report.caption_mentioned_answered_yes;
  return j;
}

}  // namespace pope
