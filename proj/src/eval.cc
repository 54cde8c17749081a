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

#include "contramine/eval.h"

#include <cstdio>
#include <map>
#include <sstream>

#include "contramine/common.h"

namespace contramine {

using nlohmann::ordered_json;

EvalReport metrics_from_confusion(const ConfusionMatrix& confusion) {
  EvalReport r;
  r.confusion = confusion;
  std::uint64_t diag = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      row += confusion[c][k];
      col += confusion[k][c];
      r.n += confusion[c][k];
    }
    const auto tp = confusion[c][c];
    diag += tp;
    auto& m = r.per_class[c];
    m.precision = col == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(col);
    m.recall = row == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(row);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  r.macro_f1 = (r.per_class[0].f1 + r.per_class[1].f1 + r.per_class[2].f1) / 3.0;
  r.contradiction_recall = r.per_class[index_of(Label3::kContradiction)].recall;
  r.accuracy = r.n == 0 ? 0.0 : static_cast<double>(diag) / static_cast<double>(r.n);
  return r;
}

EvalReport evaluate(std::span<const Label3> preds, std::span<const Label3> golds) {
  if (preds.size() != golds.size()) {
    throw ConfigError("prediction and gold counts differ (" + std::to_string(preds.size()) +
                      " vs " + std::to_string(golds.size()) + ")");
  }
  if (preds.empty()) throw ConfigError("nothing to evaluate");
  ConfusionMatrix cm{};
  for (std::size_t i = 0; i < preds.size(); ++i) ++cm[index_of(golds[i])][index_of(preds[i])];
  return metrics_from_confusion(cm);
}

ordered_json EvalReport::to_json() const {
  ordered_json j;
  j["n"] = n;
  j["macro_f1"] = macro_f1;
  j["contradiction_recall"] = contradiction_recall;
  j["accuracy"] = accuracy;
  ordered_json pc;
  for (std::size_t c = 0; c < 3; ++c) {
    ordered_json m;
    m["precision"] = per_class[c].precision;
    m["recall"] = per_class[c].recall;
    m["f1"] = per_class[c].f1;
    pc[to_string(label3_at(c))] = std::move(m);
  }
  j["per_class"] = std::move(pc);
  auto cm = ordered_json::array();
  for (const auto& row : confusion) cm.push_back(row);
  j["confusion"] = std::move(cm);
  j["labels"] = {"entailment", "neutral", "contradiction"};
  return j;
}

EvalReport EvalReport::from_json(const nlohmann::json& j) {
  try {
    ConfusionMatrix cm{};
    const auto& rows = j.at("confusion");
    if (rows.size() != 3) throw ParseError("eval report: confusion must be 3x3");
    for (std::size_t r = 0; r < 3; ++r) {
      auto row = rows[r].get<std::vector<std::uint64_t>>();
      if (row.size() != 3) throw ParseError("eval report: confusion must be 3x3");
      for (std::size_t c = 0; c < 3; ++c) cm[r][c] = row[c];
    }
    return metrics_from_confusion(cm);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("eval report: ") + e.what());
  }
}

SummaryTable aggregate_runs(const std::vector<TaggedReport>& reports) {
  if (reports.empty()) throw ConfigError("no reports to aggregate");
  SummaryTable t;
  std::map<std::string, GroupMean> groups;
  for (const auto& r : reports) {
    t.rows.push_back(SummaryRow{r.tag, r.group, r.report.macro_f1, r.report.contradiction_recall,
                                r.report.n});
    if (r.group.empty()) continue;
    auto& g = groups[r.group];
    g.group = r.group;
    ++g.runs;
    g.macro_f1 += r.report.macro_f1;
    g.contradiction_recall += r.report.contradiction_recall;
  }
  for (auto& [name, g] : groups) {
    g.macro_f1 /= static_cast<double>(g.runs);
    g.contradiction_recall /= static_cast<double>(g.runs);
    t.group_means.push_back(g);
  }
  return t;
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string SummaryTable::to_csv() const {
  std::ostringstream os;
  os << "tag,group,n,macro_f1,contradiction_recall\n";
  for (const auto& r : rows) {
    os << csv_field(r.tag) << ',' << csv_field(r.group) << ',' << r.n << ',' << fixed3(r.macro_f1)
       << ',' << fixed3(r.contradiction_recall) << '\n';
  }
  for (const auto& g : group_means) {
    os << csv_field("mean(" + g.group + ")") << ',' << csv_field(g.group) << ",," << fixed3(g.macro_f1)
       << ',' << fixed3(g.contradiction_recall) << '\n';
  }
  return os.str();
}

std::string SummaryTable::to_markdown() const {
  std::ostringstream os;
  os << "| Run | Group | n | Macro F1 | Contradiction recall |\n";
  os << "|---|---|---:|---:|---:|\n";
  for (const auto& r : rows) {
    os << "| " << r.tag << " | " << r.group << " | " << r.n << " | " << fixed3(r.macro_f1) << " | "
       << fixed3(r.contradiction_recall) << " |\n";
  }
  for (const auto& g : group_means) {
    os << "| mean of " << g.runs << " | " << g.group << " |  | " << fixed3(g.macro_f1) << " | "
       << fixed3(g.contradiction_recall) << " |\n";
  }
  return os.str();
}

}  // namespace contramine
