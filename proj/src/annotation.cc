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

#include "contramine/annotation.h"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include "contramine/common.h"

namespace contramine {

using nlohmann::ordered_json;

namespace {

// Lowercase with spaces and dashes folded into underscores.
std::string canonical_name(std::string_view s) {
  std::string out = to_lower(trim(s));
  for (char& c : out) {
    if (c == ' ' || c == '-') c = '_';
  }
  return out;
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return false;
}

const std::unordered_set<std::string>& hedge_cues() {
  static const std::unordered_set<std::string> kCues = {
      "may",     "might",   "could",    "possibly", "possible", "potentially", "unclear",
      "uncertain", "unknown", "suggest", "suggests", "suggested", "warrant",   "warrants",
      "whether", "perhaps", "likely",   "unlikely", "hypothesize", "speculate",
  };
  return kCues;
}

std::vector<SpanAnnotation> spans_from_json(const nlohmann::json& j) {
  std::vector<SpanAnnotation> out;
  if (j.is_null()) return out;
  for (const auto& s : j) {
    SpanAnnotation a;
    a.kind = parse_span_kind(s.at("kind").get<std::string>());
    a.start = s.at("start").get<std::size_t>();
    a.end = s.at("end").get<std::size_t>();
    a.value = s.value("value", std::string());
    out.push_back(std::move(a));
  }
  return out;
}

ordered_json spans_to_json(const std::vector<SpanAnnotation>& spans) {
  auto arr = ordered_json::array();
  for (const auto& s : spans) {
    ordered_json j;
    j["kind"] = to_string(s.kind);
    j["start"] = s.start;
    j["end"] = s.end;
    j["value"] = s.value;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

std::string to_string(Label6 l) {
  switch (l) {
    case Label6::kStrictEntailment: return "strict_entailment";
    case Label6::kEntailment: return "entailment";
    case Label6::kPossibleEntailment: return "possible_entailment";
    case Label6::kStrictContradiction: return "strict_contradiction";
    case Label6::kContradiction: return "contradiction";
    case Label6::kNeutral: return "neutral";
  }
  return "neutral";
}

std::string to_string(Label3 l) {
  switch (l) {
    case Label3::kEntailment: return "entailment";
    case Label3::kNeutral: return "neutral";
    case Label3::kContradiction: return "contradiction";
  }
  return "neutral";
}

Label6 parse_label6(std::string_view s) {
  const auto n = canonical_name(s);
  if (n == "strict_entailment") return Label6::kStrictEntailment;
  if (n == "entailment") return Label6::kEntailment;
  if (n == "possible_entailment") return Label6::kPossibleEntailment;
  if (n == "strict_contradiction") return Label6::kStrictContradiction;
  if (n == "contradiction") return Label6::kContradiction;
  if (n == "neutral") return Label6::kNeutral;
  throw ParseError("unknown six-way label \"" + std::string(s) + "\"");
}

Label3 parse_label3(std::string_view s) {
  const auto n = canonical_name(s);
  if (n == "entailment") return Label3::kEntailment;
  if (n == "neutral") return Label3::kNeutral;
  if (n == "contradiction") return Label3::kContradiction;
  throw ParseError("unknown label \"" + std::string(s) + "\"");
}

Label3 collapse_label(Label6 l) {
  switch (l) {
    case Label6::kStrictEntailment:
    case Label6::kEntailment:
    case Label6::kPossibleEntailment:
      return Label3::kEntailment;
    case Label6::kStrictContradiction:
    case Label6::kContradiction:
      return Label3::kContradiction;
    case Label6::kNeutral:
      return Label3::kNeutral;
  }
  return Label3::kNeutral;
}

std::string to_string(SpanKind k) {
  switch (k) {
    case SpanKind::kDrug: return "drug";
    case SpanKind::kSentiment: return "sentiment";
    case SpanKind::kContext: return "context";
    case SpanKind::kUncertainty: return "uncertainty";
  }
  return "drug";
}

SpanKind parse_span_kind(std::string_view s) {
  const auto n = canonical_name(s);
  if (n == "drug") return SpanKind::kDrug;
  if (n == "sentiment") return SpanKind::kSentiment;
  if (n == "context") return SpanKind::kContext;
  if (n == "uncertainty" || n == "expression_of_uncertainty") return SpanKind::kUncertainty;
  throw ParseError("unknown span kind \"" + std::string(s) + "\"");
}

void validate_span(const SpanAnnotation& span, std::string_view text) {
  if (!(span.start < span.end && span.end <= text.size())) {
    throw ValidationError("span [" + std::to_string(span.start) + ", " +
                          std::to_string(span.end) + ") outside text of length " +
                          std::to_string(text.size()));
  }
}

ClaimFeatures features_from_spans(std::string_view text,
                                  const std::vector<SpanAnnotation>& spans) {
  ClaimFeatures f;
  if (spans.empty()) return f;
  f.annotated = true;
  for (const auto& s : spans) {
    validate_span(s, text);
    const auto covered = text.substr(s.start, s.end - s.start);
    switch (s.kind) {
      case SpanKind::kDrug:
        f.drugs.insert(to_lower(trim(s.value.empty() ? covered : s.value)));
        break;
      case SpanKind::kSentiment: {
        const auto v = canonical_name(s.value);
        if (v == "positive") {
          f.positive = true;
        } else if (v == "negative") {
          f.negative = true;
        } else {
          throw ValidationError("sentiment span value must be POSITIVE or NEGATIVE, got \"" +
                                s.value + "\"");
        }
        break;
      }
      case SpanKind::kContext:
        f.context.insert(to_lower(trim(s.value.empty() ? covered : s.value)));
        break;
      case SpanKind::kUncertainty:
        f.uncertainty = true;
        break;
    }
  }
  return f;
}

ClaimFeatures features_from_text(std::string_view text, const DrugLexicon& drugs,
                                 const PolarityLexicon& lexicon,
                                 std::set<std::string> context_tags) {
  ClaimFeatures f;
  f.annotated = true;
  for (auto& d : find_drug_mentions(text, drugs)) f.drugs.insert(std::move(d));
  const double pol = polarity(text, lexicon).value;
  f.positive = pol > 0.0;
  f.negative = pol < 0.0;
  for (const auto& tok : tokenize(text)) {
    if (hedge_cues().count(tok) != 0) {
      f.uncertainty = true;
      break;
    }
  }
  f.context = std::move(context_tags);
  return f;
}

Label6 guideline_label(const ClaimFeatures& a, const ClaimFeatures& b) {
  if (!a.annotated || !b.annotated) throw ValidationError("unannotated pair");

  const bool all_drugs = !a.drugs.empty() && a.drugs == b.drugs;
  const bool any_drug = intersects(a.drugs, b.drugs);
  const bool context_match = !a.context.empty() && a.context == b.context;
  const bool similar_context = intersects(a.context, b.context);
  const bool same_sentiment = a.signed_statement() && b.signed_statement() &&
                              a.positive == b.positive && a.negative == b.negative;
  const bool opposing = a.signed_statement() && b.signed_statement() && !a.mixed() &&
                        !b.mixed() && a.positive != b.positive;
  const auto has_stance = [](const ClaimFeatures& f) {
    return f.signed_statement() || f.uncertainty;
  };
  const auto uncertain_only = [](const ClaimFeatures& f) {
    return f.uncertainty && !f.signed_statement();
  };

  if (all_drugs && context_match && same_sentiment) return Label6::kStrictEntailment;
  if (any_drug && same_sentiment && similar_context) return Label6::kEntailment;
  if (all_drugs && context_match && opposing) return Label6::kStrictContradiction;
  if (any_drug && opposing && similar_context) return Label6::kContradiction;
  if (!similar_context || !has_stance(a) || !has_stance(b)) return Label6::kNeutral;
  if (!any_drug) return Label6::kNeutral;
  if ((a.mixed() && b.signed_statement() && !b.mixed()) ||
      (b.mixed() && a.signed_statement() && !a.mixed())) {
    return Label6::kContradiction;
  }
  if ((a.signed_statement() && uncertain_only(b)) ||
      (b.signed_statement() && uncertain_only(a))) {
    return Label6::kNeutral;
  }
  if (uncertain_only(a) && uncertain_only(b)) return Label6::kEntailment;
  return Label6::kNeutral;
}

ordered_json annotated_pair_to_json(const AnnotatedPair& p) {
  ordered_json j = pair_to_json(p.pair);
  if (p.label6) j["label6"] = to_string(*p.label6);
  j["spans_a"] = spans_to_json(p.spans_a);
  j["spans_b"] = spans_to_json(p.spans_b);
  return j;
}

AnnotatedPair annotated_pair_from_json(const nlohmann::json& j) {
  AnnotatedPair p;
  // The raw (x, y) order may differ from the canonical one; spans follow
  // their claim.
  std::string x;
  try {
    x = j.at("a_id").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("annotated pair: ") + e.what());
  }
  p.pair = pair_from_json(j);
  try {
    if (auto it = j.find("label6"); it != j.end() && !it->is_null()) {
      p.label6 = parse_label6(it->get<std::string>());
    }
    p.spans_a = spans_from_json(j.value("spans_a", nlohmann::json()));
    p.spans_b = spans_from_json(j.value("spans_b", nlohmann::json()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("annotated pair: ") + e.what());
  }
  if (p.pair.a_id != x) std::swap(p.spans_a, p.spans_b);
  return p;
}

std::vector<AnnotatedPair> parse_annotated_pairs(std::string_view jsonl) {
  std::vector<AnnotatedPair> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(annotated_pair_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

AgreementMatrix::AgreementMatrix(std::vector<std::vector<std::size_t>> counts)
    : counts_(std::move(counts)) {
  if (counts_.empty()) throw ValidationError("agreement matrix has no items");
  const std::size_t cats = counts_.front().size();
  if (cats == 0) throw ValidationError("agreement matrix has no categories");
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const auto& row = counts_[i];
    if (row.size() != cats) {
      throw ValidationError("agreement matrix row " + std::to_string(i + 1) +
                            " has the wrong number of categories");
    }
    std::size_t sum = 0;
    for (auto c : row) sum += c;
    if (i == 0) raters_ = sum;
    if (sum != raters_) {
      throw ValidationError("agreement matrix row " + std::to_string(i + 1) + " sums to " +
                            std::to_string(sum) + ", expected " + std::to_string(raters_));
    }
  }
  if (raters_ < 2) throw ValidationError("Fleiss' kappa needs at least two raters");
}

AgreementMatrix AgreementMatrix::from_csv(std::string_view csv) {
  std::vector<std::vector<std::size_t>> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::size_t> row;
    std::istringstream ls(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ls, cell, ',')) {
      const auto t = trim(cell);
      if (t.empty() || !std::all_of(t.begin(), t.end(),
                                    [](unsigned char c) { return std::isdigit(c) != 0; })) {
        numeric = false;
        break;
      }
      row.push_back(static_cast<std::size_t>(std::stoull(t)));
    }
    if (!numeric) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw ParseError("agreement CSV line " + std::to_string(lineno) +
                       ": expected non-negative integer counts");
    }
    rows.push_back(std::move(row));
  }
  return AgreementMatrix(std::move(rows));
}

double fleiss_kappa(const AgreementMatrix& m) {
  const auto n_items = static_cast<double>(m.items());
  const auto n = static_cast<double>(m.raters());
  std::vector<double> column(m.categories(), 0.0);
  double p_bar = 0.0;
  for (const auto& row : m.counts()) {
    double sq = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto c = static_cast<double>(row[j]);
      sq += c * c;
      column[j] += c;
    }
    p_bar += (sq - n) / (n * (n - 1.0));
  }
  p_bar /= n_items;
  double p_e = 0.0;
  for (double c : column) {
    const double pj = c / (n_items * n);
    p_e += pj * pj;
  }
  if (p_e >= 1.0) throw ValidationError("undefined kappa: all ratings fall in one category");
  return (p_bar - p_e) / (1.0 - p_e);
}

}  // namespace contramine
