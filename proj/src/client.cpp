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

#include "pope/client.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <thread>

#include "httplib.h"

#include "pope/errors.hpp"
#include "pope/jsonl.hpp"
#include "pope/scorer.hpp"

namespace pope {

namespace {

using Kind = ValidationError::Kind;

std::string base64_encode(std::string_view bytes) {
  static const char* kTable =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 3 <= bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kTable[(v >> 18) & 63]);
    out.push_back(kTable[(v >> 12) & 63]);
    out.push_back(kTable[(v >> 6) & 63]);
    out.push_back(kTable[v & 63]);
    i += 3;
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(kTable[(v >> 18) & 63]);
    out.push_back(kTable[(v >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(kTable[(v >> 18) & 63]);
    out.push_back(kTable[(v >> 12) & 63]);
    out.push_back(kTable[(v >> 6) & 63]);
    out += "=";
  }
  return out;
}

std::string expand_pattern(std::string_view pattern, std::string_view image_id) {
  std::string out(pattern);
  const std::string placeholder = "{image_id}";
  std::size_t pos = 0;
  while ((pos = out.find(placeholder, pos)) != std::string::npos) {
    out.replace(pos, placeholder.size(), image_id);
    pos += image_id.size();
  }
  return out;
}

const Json* json_at_path(const Json& root, std::string_view dotted) {
  const Json* current = &root;
  std::size_t start = 0;
  while (start <= dotted.size()) {
    const std::size_t dot = dotted.find('.', start);
    const std::string_view segment =
        dotted.substr(start, dot == std::string_view::npos ? dotted.size() - start : dot - start);
    if (segment.empty()) return nullptr;
    if (current->is_array()) {
      std::size_t index = 0;
      for (char c : segment) {
        if (c < '0' || c > '9') return nullptr;
        index = index * 10 + static_cast<std::size_t>(c - '0');
      }
      if (index >= current->size()) return nullptr;
      current = &(*current)[index];
    } else if (current->is_object()) {
      auto it = current->find(std::string(segment));
      if (it == current->end()) return nullptr;
      current = &*it;
    } else {
      return nullptr;
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return current;
}

bool is_retryable_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status < 600);
}

struct RequestOutcome {
  enum class State { kOk, kRecordedFailure, kAbort };
  State state = State::kOk;
  std::string text;  // response text or failure note / abort reason
};

}  // namespace

EndpointConfig load_endpoint_config(const std::filesystem::path& path) {
  const Json j = parse_json_file(path);
  EndpointConfig config;
  config.base_url = require_string(j, "base_url", "$");
  if (j.contains("path")) config.path = j.at("path").get<std::string>();
  if (j.contains("auth_token_env")) config.auth_token_env = j.at("auth_token_env").get<std::string>();
  if (j.contains("timeout_seconds")) config.timeout_seconds = j.at("timeout_seconds").get<double>();
  if (j.contains("max_retries")) config.max_retries = j.at("max_retries").get<int>();
  if (j.contains("max_concurrency")) config.max_concurrency = j.at("max_concurrency").get<int>();
  if (j.contains("backoff_base_ms")) config.backoff_base_ms = j.at("backoff_base_ms").get<int>();
  if (j.contains("request")) {
    const Json& request = j.at("request");
    if (request.contains("prompt_field")) config.prompt_field = request.at("prompt_field").get<std::string>();
    if (request.contains("image_field")) config.image_field = request.at("image_field").get<std::string>();
    if (request.contains("image_ref")) config.image_ref_pattern = request.at("image_ref").get<std::string>();
    if (request.contains("inline_base64")) config.inline_base64 = request.at("inline_base64").get<bool>();
    if (request.contains("extra")) config.extra_request_fields = request.at("extra");
  }
  if (j.contains("response")) {
    const Json& response = j.at("response");
    if (response.contains("text_field")) config.response_text_path = response.at("text_field").get<std::string>();
  }

  if (config.timeout_seconds <= 0.0) {
    throw ValidationError(Kind::kSchema, "endpoint timeout_seconds must be > 0");
  }
  if (config.max_retries < 0) {
    throw ValidationError(Kind::kSchema, "endpoint max_retries must be >= 0");
  }
  if (config.max_concurrency < 1) {
    throw ValidationError(Kind::kSchema, "endpoint max_concurrency must be >= 1");
  }
  return config;
}

namespace {

class Poller {
 public:
  Poller(const EndpointConfig& config, const ProbeSet& probe, const PromptTemplate& tmpl,
         std::size_t start_index)
      : config_(config), probe_(probe), tmpl_(tmpl), start_(start_index) {
    if (!config_.auth_token_env.empty()) {
      const char* token = std::getenv(config_.auth_token_env.c_str());
      if (token == nullptr) {
        throw ValidationError(Kind::kPrecondition, "auth environment variable '" +
                                                       config_.auth_token_env + "' is not set");
      }
      auth_header_ = std::string("Bearer ") + token;
    }
  }

  PollResult run() {
    const std::size_t total = probe_.questions.size();
    slots_.assign(total - start_, std::nullopt);
    next_.store(start_);

    const std::size_t workers = std::min<std::size_t>(
        static_cast<std::size_t>(config_.max_concurrency), slots_.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([this] { worker(); });
    }
    for (std::thread& t : pool) t.join();

    PollResult result;
    std::size_t done = 0;
    while (done < slots_.size() && slots_[done].has_value()) {
      result.records.push_back(std::move(*slots_[done]));
      ++done;
    }
    result.resume_cursor = start_ + done;
    result.aborted = aborted_.load();
    if (result.aborted) {
      std::lock_guard<std::mutex> lock(abort_mutex_);
      result.abort_reason = abort_reason_;
    }
    return result;
  }

 private:
  void worker() {
    httplib::Client client(config_.base_url);
    const time_t timeout_sec = static_cast<time_t>(config_.timeout_seconds);
    const time_t timeout_usec =
        static_cast<time_t>((config_.timeout_seconds - static_cast<double>(timeout_sec)) * 1e6);
    client.set_connection_timeout(timeout_sec, timeout_usec);
    client.set_read_timeout(timeout_sec, timeout_usec);
    client.set_write_timeout(timeout_sec, timeout_usec);

    for (;;) {
      if (aborted_.load()) return;
      const std::size_t index = next_.fetch_add(1);
      if (index >= probe_.questions.size()) return;
      const ProbeQuestion& question = probe_.questions[index];
      RequestOutcome outcome = request_one(client, question);
      switch (outcome.state) {
        case RequestOutcome::State::kOk:
          slots_[index - start_] = AnswerRecord{question.image_id, question.object_name,
                                                outcome.text, parse_answer(outcome.text), ""};
          break;
        case RequestOutcome::State::kRecordedFailure:
          slots_[index - start_] =
              AnswerRecord{question.image_id, question.object_name, "",
                           ParsedAnswer::kUnparsed, outcome.text};
          break;
        case RequestOutcome::State::kAbort: {
          std::lock_guard<std::mutex> lock(abort_mutex_);
          if (!aborted_.exchange(true)) abort_reason_ = outcome.text;
          return;
        }
      }
    }
  }

  RequestOutcome request_one(httplib::Client& client, const ProbeQuestion& question) {
    Json body = config_.extra_request_fields.is_object() ? config_.extra_request_fields
                                                         : Json::object();
    body[config_.prompt_field] = render_prompt(tmpl_, question.object_name);
    if (!config_.image_ref_pattern.empty()) {
      const std::string ref = expand_pattern(config_.image_ref_pattern, question.image_id);
      if (config_.inline_base64) {
        body[config_.image_field] = base64_encode(read_text_file(ref));
      } else {
        body[config_.image_field] = ref;
      }
    }
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!auth_header_.empty()) headers.emplace("Authorization", auth_header_);

    std::string last_note;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        const auto delay = std::chrono::milliseconds(
            static_cast<std::int64_t>(config_.backoff_base_ms) << (attempt - 1));
        std::this_thread::sleep_for(delay);
      }
      // Another worker hit a non-retryable failure; leave this slot empty
      // so a resumed run re-polls the question instead of inheriting a
      // fabricated answer.
      if (aborted_.load()) {
        return {RequestOutcome::State::kAbort, "run aborted"};
      }

      auto res = client.Post(config_.path, headers, payload, "application/json");
      if (!res) {
        last_note = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 200 && res->status < 300) {
        Json parsed;
        try {
          parsed = Json::parse(res->body);
        } catch (const nlohmann::json::parse_error&) {
          return {RequestOutcome::State::kRecordedFailure, "response is not valid JSON"};
        }
        const Json* text = json_at_path(parsed, config_.response_text_path);
        if (text == nullptr || !text->is_string()) {
          return {RequestOutcome::State::kRecordedFailure,
                  "response missing text field '" + config_.response_text_path + "'"};
        }
        return {RequestOutcome::State::kOk, text->get<std::string>()};
      }
      if (is_retryable_status(res->status)) {
        last_note = "HTTP " + std::to_string(res->status);
        continue;
      }
      return {RequestOutcome::State::kAbort,
              "non-retryable HTTP " + std::to_string(res->status) + " from " + config_.base_url +
                  config_.path};
    }
    return {RequestOutcome::State::kRecordedFailure,
            last_note + " after " + std::to_string(config_.max_retries + 1) + " attempts"};
  }

  const EndpointConfig& config_;
  const ProbeSet& probe_;
  const PromptTemplate& tmpl_;
  const std::size_t start_;
  std::string auth_header_;
  std::vector<std::optional<AnswerRecord>> slots_;
  std::atomic<std::size_t> next_{0};
  std::atomic<bool> aborted_{false};
  std::mutex abort_mutex_;
  std::string abort_reason_;
};

}  // namespace

PollResult poll(const EndpointConfig& endpoint, const ProbeSet& probe,
                const PromptTemplate& tmpl, std::size_t start_index) {
  if (start_index > probe.questions.size()) {
    throw ValidationError(Kind::kPrecondition,
                          "start index " + std::to_string(start_index) +
                              " beyond probe size " + std::to_string(probe.questions.size()));
  }
  if (start_index == probe.questions.size()) {
    PollResult done;
    done.resume_cursor = start_index;
    return done;
  }
  Poller poller(endpoint, probe, tmpl, start_index);
  return poller.run();
}

}  // namespace pope
