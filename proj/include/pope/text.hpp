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

#ifndef POPE_TEXT_HPP_
#define POPE_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pope {

std::string to_lower(std::string_view s);

// Maximal runs of ASCII alphanumerics, lowercased. "A dog-house." ->
// {"a", "dog", "house"}.
std::vector<std::string> tokenize_alnum(std::string_view s);

// Number of whitespace-separated chunks in the raw text.
std::size_t whitespace_token_count(std::string_view s);

// Canonical phrase form: lowercased tokens joined by single spaces.
std::string normalize_phrase(std::string_view s);

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t first,
                        std::size_t count);

}  // namespace pope

#endif  // POPE_TEXT_HPP_
