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

#include "pope/templates.hpp"

#include "pope/errors.hpp"

namespace pope {

namespace {
using Kind = ValidationError::Kind;

constexpr std::string_view kPlaceholder = "<object>";
constexpr std::string_view kArticleSlot = "a/an <object>";

bool starts_with_vowel(std::string_view word) {
  if (word.empty()) return false;
  switch (word.front()) {
    case 'a': case 'e': case 'i': case 'o': case 'u':
    case 'A': case 'E': case 'I': case 'O': case 'U':
      return true;
    default:
      return false;
  }
}
}  // namespace

const std::vector<PromptTemplate>& builtin_templates() {
  static const std::vector<PromptTemplate> kTemplates = {
      {"is-there-a", TemplateKind::kPope, "Is there a <object> in the image?"},
      {"is-there-aan", TemplateKind::kPope, "Is there a/an <object> in the image?"},
      {"does-contain", TemplateKind::kPope, "Does the image contain a <object>?"},
      {"noticed", TemplateKind::kPope, "Have you noticed a <object> in the image?"},
      {"can-see", TemplateKind::kPope, "Can you see a <object> in the image?"},
      {"caption-short", TemplateKind::kCaption, "Generate a short caption of the image."},
      {"caption-brief", TemplateKind::kCaption, "Provide a brief description of the given image."},
      {"caption-concise", TemplateKind::kCaption,
       "Generate a concise description for the image."},
      {"caption-summary", TemplateKind::kCaption,
       "Create a short textual summary for the image."},
  };
  return kTemplates;
}

const PromptTemplate* find_template(std::string_view id) {
  for (const PromptTemplate& tmpl : builtin_templates()) {
    if (tmpl.id == id) return &tmpl;
  }
  return nullptr;
}

const PromptTemplate& require_template(std::string_view id) {
  const PromptTemplate* tmpl = find_template(id);
  if (tmpl == nullptr) {
    throw ValidationError(Kind::kPrecondition, "unknown template id '" + std::string(id) + "'");
  }
  return *tmpl;
}

std::string render_prompt(const PromptTemplate& tmpl, std::string_view object_name) {
  if (tmpl.kind != TemplateKind::kPope) {
    throw ValidationError(Kind::kPrecondition,
                          "template '" + tmpl.id + "' has no <object> placeholder");
  }
  if (object_name.empty()) {
    throw ValidationError(Kind::kPrecondition, "object name must be non-empty");
  }

  std::string text = tmpl.text;
  const std::size_t article = text.find(kArticleSlot);
  if (article != std::string::npos) {
    text.replace(article, 4, starts_with_vowel(object_name) ? "an" : "a");
  }

  const std::size_t slot = text.find(kPlaceholder);
  if (slot == std::string::npos ||
      text.find(kPlaceholder, slot + kPlaceholder.size()) != std::string::npos) {
    throw ValidationError(Kind::kPrecondition, "template '" + tmpl.id +
                                                   "' must contain exactly one <object> placeholder");
  }
  text.replace(slot, kPlaceholder.size(), object_name);
  return text;
}

}  // namespace pope
