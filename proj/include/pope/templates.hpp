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

#ifndef POPE_TEMPLATES_HPP_
#define POPE_TEMPLATES_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace pope {

enum class TemplateKind { kPope, kCaption };

// Probe templates carry exactly one `<object>` placeholder; caption
// templates carry none. An `a/an <object>` slot resolves its article from
// the object's leading letter at render time.
struct PromptTemplate {
  std::string id;
  TemplateKind kind = TemplateKind::kPope;
  std::string text;
};

inline constexpr std::string_view kDefaultPopeTemplateId = "is-there-a";

const std::vector<PromptTemplate>& builtin_templates();
const PromptTemplate* find_template(std::string_view id);
const PromptTemplate& require_template(std::string_view id);

std::string render_prompt(const PromptTemplate& tmpl, std::string_view object_name);

}  // namespace pope

#endif  // POPE_TEMPLATES_HPP_
