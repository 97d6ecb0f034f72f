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

#ifndef POPE_CLIENT_HPP_
#define POPE_CLIENT_HPP_

#include <cstddef>
#include <filesystem>
#include <string>

#include "pope/builder.hpp"
#include "pope/jsonl.hpp"
#include "pope/templates.hpp"

namespace pope {

// Generic JSON completion endpoint. Serving APIs differ, so the request and
// response shapes are field mappings instead of a fixed vendor schema.
// Authentication comes from the named environment variable only.
struct EndpointConfig {
  std::string base_url;                  // e.g. "http://127.0.0.1:8080"
  std::string path = "/v1/complete";
  std::string auth_token_env;            // empty = unauthenticated
  double timeout_seconds = 30.0;
  int max_retries = 2;
  int max_concurrency = 1;
  int backoff_base_ms = 250;             // doubled per retry
  std::string prompt_field = "prompt";
  std::string image_field = "image";
  std::string image_ref_pattern;         // "{image_id}" placeholder; empty = no image field
  bool inline_base64 = false;            // read image_ref as a file, send base64
  std::string response_text_path = "text";  // dotted path into the response JSON
  Json extra_request_fields = Json::object();
};

EndpointConfig load_endpoint_config(const std::filesystem::path& path);

struct PollResult {
  // Contiguous answers for questions [start_index, start_index + records.size()).
  std::vector<AnswerRecord> records;
  bool aborted = false;
  std::string abort_reason;
  std::size_t resume_cursor = 0;  // absolute index of the next question to poll
};

// Polls one request per question with at most max_concurrency in flight.
// Retryable failures (transport, 408/429/5xx) back off exponentially and,
// once retries are exhausted, are recorded as unparsed answers with a note.
// Non-retryable failures (other 4xx) abort the run; the contiguous prefix
// of finished answers is returned together with a resume cursor.
PollResult poll(const EndpointConfig& endpoint, const ProbeSet& probe,
                const PromptTemplate& tmpl, std::size_t start_index = 0);

}  // namespace pope

#endif  // POPE_CLIENT_HPP_
