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

#include "pope/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "pope/errors.hpp"

namespace pope {

namespace {
std::string schema_where(std::string_view where, std::string_view field) {
  std::string out;
  out.reserve(where.size() + field.size() + 1);
  out.append(where);
  if (!where.empty() && !field.empty()) out.push_back('.');
  out.append(field);
  return out;
}
}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failure on " + path.string());
}

void append_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open " + path.string() + " for appending");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failure on " + path.string());
}

Json parse_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(ValidationError::Kind::kSchema,
                          path.string() + ": invalid JSON: " + e.what());
  }
}

Json parse_json_line(std::string_view line, const std::filesystem::path& path,
                     std::size_t line_no) {
  try {
    return Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(ValidationError::Kind::kSchema,
                          path.string() + " line " + std::to_string(line_no) +
                              ": invalid JSON: " + e.what());
  }
}

void for_each_jsonl_line(const std::filesystem::path& path,
                         const std::function<void(std::size_t, const Json&)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    fn(line_no, parse_json_line(line, path, line_no));
  }
  if (in.bad()) throw IoError("read failure on " + path.string());
}

const Json& require_field(const Json& obj, std::string_view field, std::string_view where) {
  if (!obj.is_object() || !obj.contains(field)) {
    throw ValidationError(ValidationError::Kind::kSchema,
                          "missing required field '" + std::string(field) + "' at " +
                              schema_where(where, field));
  }
  return obj.at(std::string(field));
}

std::string require_string(const Json& obj, std::string_view field, std::string_view where) {
  const Json& value = require_field(obj, field, where);
  if (!value.is_string()) {
    throw ValidationError(ValidationError::Kind::kSchema,
                          "expected a string at " + schema_where(where, field));
  }
  return value.get<std::string>();
}

std::int64_t require_int(const Json& obj, std::string_view field, std::string_view where) {
  const Json& value = require_field(obj, field, where);
  if (!value.is_number_integer()) {
    throw ValidationError(ValidationError::Kind::kSchema,
                          "expected an integer at " + schema_where(where, field));
  }
  return value.get<std::int64_t>();
}

const Json& require_array(const Json& obj, std::string_view field, std::string_view where) {
  const Json& value = require_field(obj, field, where);
  if (!value.is_array()) {
    throw ValidationError(ValidationError::Kind::kSchema,
                          "expected an array at " + schema_where(where, field));
  }
  return value;
}

std::string require_id_string(const Json& obj, std::string_view field, std::string_view where) {
  const Json& value = require_field(obj, field, where);
  if (value.is_string()) {
    std::string s = value.get<std::string>();
    if (s.empty()) {
      throw ValidationError(ValidationError::Kind::kSchema,
                            "empty id at " + schema_where(where, field));
    }
    return s;
  }
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  throw ValidationError(ValidationError::Kind::kSchema,
                        "expected a string or integer id at " + schema_where(where, field));
}

}  // namespace pope
