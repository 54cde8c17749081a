// Copyright 2026 The Contramine Authors
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

#include "contramine/remote.h"

#include <algorithm>
#include <cmath>
#include <future>

#include "contramine/common.h"
#include "httplib.h"

namespace contramine {

using nlohmann::ordered_json;

namespace {

std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw ConfigError("backend endpoint must look like http://host:port, got \"" + endpoint + "\"");
  }
  auto slash = endpoint.find('/', scheme + 3);
  if (slash == std::string::npos) return {endpoint, ""};
  auto path = endpoint.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {endpoint.substr(0, slash), path};
}

}  // namespace

ordered_json score_request_json(std::span<const TextPair> pairs) {
  auto arr = ordered_json::array();
  for (const auto& p : pairs) {
    ordered_json j;
    j["premise"] = p.premise;
    j["hypothesis"] = p.hypothesis;
    arr.push_back(std::move(j));
  }
  ordered_json body;
  body["pairs"] = std::move(arr);
  return body;
}

std::vector<ScoreDistribution> parse_score_response(const std::string& body, std::size_t expected,
                                                    std::size_t offset, double sum_tolerance) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("score response is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("scores") || !j["scores"].is_array()) {
    throw ProtocolError("score response lacks a \"scores\" array");
  }
  const auto& scores = j["scores"];
  if (scores.size() != expected) {
    throw ProtocolError("score response has " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(expected) + " pairs");
  }
  std::vector<ScoreDistribution> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& s = scores[i];
    const auto index = std::to_string(offset + i);
    auto field = [&](const char* key) {
      if (!s.is_object() || !s.contains(key) || !s[key].is_number()) {
        throw ProtocolError("score " + index + ": missing numeric \"" + key + "\"");
      }
      return s[key].get<double>();
    };
    ScoreDistribution d{field("entailment"), field("neutral"), field("contradiction")};
    try {
      d.validate(sum_tolerance);
    } catch (const ValidationError& e) {
      throw ValidationError("score " + index + ": " + e.what());
    }
    const double total = d.sum();
    d.entailment /= total;
    d.neutral /= total;
    d.contradiction /= total;
    out.push_back(d);
  }
  return out;
}

RemoteScorer::RemoteScorer(RemoteOptions options) : options_(std::move(options)) {
  if (options_.batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (options_.max_in_flight < 1) throw ConfigError("max in-flight batches must be >= 1");
  if (options_.retries < 0) throw ConfigError("retries must be >= 0");
  std::tie(host_, base_path_) = split_endpoint(options_.endpoint);
}

std::vector<ScoreDistribution> RemoteScorer::post_batch(std::span<const TextPair> pairs,
                                                        std::size_t offset) const {
  const auto body = score_request_json(pairs).dump();
  const int attempts = options_.retries + 1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client cli(host_);
    const auto secs = static_cast<time_t>(options_.timeout_seconds);
    const auto usecs = static_cast<time_t>((options_.timeout_seconds - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    auto res = cli.Post(base_path_ + "/v1/score", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError("scorer answered HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    return parse_score_response(res->body, pairs.size(), offset, options_.sum_tolerance);
  }
  throw TransportError("scorer at " + options_.endpoint + " failed after " +
                           std::to_string(attempts) + " attempts (" + last_error + ")",
                       attempts);
}

std::vector<ScoreDistribution> RemoteScorer::score_batch(std::span<const TextPair> pairs) {
  std::vector<ScoreDistribution> out(pairs.size());
  const std::size_t bs = options_.batch_size;
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s < pairs.size(); s += bs) starts.push_back(s);

  for (std::size_t wave = 0; wave < starts.size(); wave += options_.max_in_flight) {
    const std::size_t wave_end = std::min(starts.size(), wave + options_.max_in_flight);
    std::vector<std::future<std::vector<ScoreDistribution>>> futures;
    for (std::size_t b = wave; b < wave_end; ++b) {
      const auto s = starts[b];
      const auto len = std::min(bs, pairs.size() - s);
      futures.push_back(std::async(std::launch::async, [this, pairs, s, len] {
        return post_batch(pairs.subspan(s, len), s);
      }));
    }
    // Drain every future before rethrowing so no request outlives this call.
    std::exception_ptr first_error;
    for (std::size_t f = 0; f < futures.size(); ++f) {
      try {
        auto scores = futures[f].get();
        std::copy(scores.begin(), scores.end(), out.begin() + static_cast<std::ptrdiff_t>(starts[wave + f]));
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  }
  return out;
}

HealthStatus RemoteScorer::health() const {
  const int attempts = options_.retries + 1;
  std::string last_error;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client cli(host_);
    const auto secs = static_cast<time_t>(std::max(1.0, options_.timeout_seconds));
    cli.set_connection_timeout(secs, 0);
    cli.set_read_timeout(secs, 0);
    auto res = cli.Get(base_path_ + "/v1/health");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      auto j = nlohmann::json::parse(res->body);
      return HealthStatus{j.at("status").get<std::string>(), j.value("model_id", std::string())};
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("health response: ") + e.what());
    }
  }
  throw TransportError("scorer at " + options_.endpoint + " unhealthy after " +
                           std::to_string(attempts) + " attempts (" + last_error + ")",
                       attempts);
}

std::vector<ScoreDistribution> remote_score_batch(const RemoteOptions& options,
                                                  std::span<const TextPair> pairs) {
  if (pairs.empty()) return {};
  RemoteScorer scorer(options);
  return scorer.score_batch(pairs);
}

}  // namespace contramine
