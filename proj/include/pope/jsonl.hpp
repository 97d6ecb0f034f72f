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

#ifndef POPE_JSONL_HPP_
#define POPE_JSONL_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace pope {

// Key order follows insertion order so emitted artifacts read naturally
// and serialize deterministically.
using Json = nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);
void append_text_file(const std::filesystem::path& path, std::string_view contents);

Json parse_json_file(const std::filesystem::path& path);
Json parse_json_line(std::string_view line, const std::filesystem::path& path,
                     std::size_t line_no);

// Calls fn(line_no, record) for every non-blank line; line_no is 1-based.
void for_each_jsonl_line(
    const std::filesystem::path& path,
    const std::function<void(std::size_t, const Json&)>& fn);

// Field accessors that raise schema errors naming the field and the JSON
// path ("where") they were reached from.
const Json& require_field(const Json& obj, std::string_view field, std::string_view where);
std::string require_string(const Json& obj, std::string_view field, std::string_view where);
std::int64_t require_int(const Json& obj, std::string_view field, std::string_view where);
const Json& require_array(const Json& obj, std::string_view field, std::string_view where);

// Accepts JSON strings and integers; COCO files use integer ids while the
// toolkit keys everything by string.
std::string require_id_string(const Json& obj, std::string_view field, std::string_view where);

}  // namespace pope

#endif  // POPE_JSONL_HPP_
