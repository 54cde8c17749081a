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

#ifndef CONTRAMINE_REMOTE_H_
#define CONTRAMINE_REMOTE_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "contramine/classifiers.h"
#include "json.hpp"

namespace contramine {

// Client side of the scoring wire protocol:
//   POST {base}/v1/score   {"pairs": [{"premise", "hypothesis"}]}
//                       -> {"scores": [{"entailment", "neutral", "contradiction"}]}
//   GET  {base}/v1/health -> {"status": "ok", "model_id": str}
struct RemoteOptions {
  std::string endpoint;  // e.g. "http://127.0.0.1:8080"
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 4;
  int retries = 2;  // extra attempts after the first
  double timeout_seconds = 30.0;
  // Remote models often compute in single precision; sums within this
  // tolerance are accepted and renormalised.
  double sum_tolerance = 1e-6;
};

struct HealthStatus {
  std::string status;
  std::string model_id;
};

// Request body for one batch.
nlohmann::ordered_json score_request_json(std::span<const TextPair> pairs);

// Parses and validates a response body for a batch of `expected` pairs whose
// first pair has global index `offset`. Malformed shapes raise ProtocolError
// naming the offending index; invalid distributions raise ValidationError.
std::vector<ScoreDistribution> parse_score_response(const std::string& body, std::size_t expected,
                                                    std::size_t offset, double sum_tolerance);

class RemoteScorer final : public Scorer {
 public:
  explicit RemoteScorer(RemoteOptions options);

  // Order-preserving. Batches run concurrently, at most max_in_flight at a
  // time. Throws TransportError after exhausting retries.
  std::vector<ScoreDistribution> score_batch(std::span<const TextPair> pairs) override;
  std::string id() const override { return "remote:" + options_.endpoint; }

  HealthStatus health() const;
  const RemoteOptions& options() const { return options_; }

 private:
  std::vector<ScoreDistribution> post_batch(std::span<const TextPair> pairs,
                                            std::size_t offset) const;

  RemoteOptions options_;
  std::string host_;  // scheme://host:port
  std::string base_path_;
};

std::vector<ScoreDistribution> remote_score_batch(const RemoteOptions& options,
                                                  std::span<const TextPair> pairs);

}  // namespace contramine

#endif  // CONTRAMINE_REMOTE_H_
