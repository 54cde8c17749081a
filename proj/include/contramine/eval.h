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

#ifndef CONTRAMINE_EVAL_H_
#define CONTRAMINE_EVAL_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contramine/annotation.h"
#include "json.hpp"

namespace contramine {

// Gold rows, predicted columns, indexed entailment / neutral / contradiction.
using ConfusionMatrix = std::array<std::array<std::uint64_t, 3>, 3>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  ConfusionMatrix confusion{};
  std::array<ClassMetrics, 3> per_class{};
  double macro_f1 = 0.0;
  double contradiction_recall = 0.0;
  double accuracy = 0.0;
  std::uint64_t n = 0;

  nlohmann::ordered_json to_json() const;
  static EvalReport from_json(const nlohmann::json& j);
};

// All metrics from the confusion matrix alone. Undefined precision or recall
// count as 0 and a class with precision + recall = 0 gets F1 = 0.
EvalReport metrics_from_confusion(const ConfusionMatrix& confusion);

// Throws ConfigError on a length mismatch or empty input.
EvalReport evaluate(std::span<const Label3> preds, std::span<const Label3> golds);

struct SummaryRow {
  std::string tag;
  std::string group;
  double macro_f1 = 0.0;
  double contradiction_recall = 0.0;
  std::uint64_t n = 0;
};

struct GroupMean {
  std::string group;
  std::size_t runs = 0;
  double macro_f1 = 0.0;
  double contradiction_recall = 0.0;
};

struct SummaryTable {
  std::vector<SummaryRow> rows;
  // Means over rows sharing a non-empty group, sorted by group name.
  std::vector<GroupMean> group_means;

  std::string to_csv() const;
  std::string to_markdown() const;
};

struct TaggedReport {
  std::string tag;
  EvalReport report;
  std::string group;  // empty: ungrouped
};

// Throws ConfigError on an empty list.
SummaryTable aggregate_runs(const std::vector<TaggedReport>& reports);

}  // namespace contramine

#endif  // CONTRAMINE_EVAL_H_
