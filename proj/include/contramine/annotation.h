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

#ifndef CONTRAMINE_ANNOTATION_H_
#define CONTRAMINE_ANNOTATION_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "contramine/corpus.h"
#include "contramine/pairgen.h"
#include "contramine/textrep.h"
#include "json.hpp"

namespace contramine {

enum class Label6 {
  kStrictEntailment,
  kEntailment,
  kPossibleEntailment,
  kStrictContradiction,
  kContradiction,
  kNeutral,
};

// Index order matches ScoreDistribution: entailment, neutral, contradiction.
enum class Label3 { kEntailment = 0, kNeutral = 1, kContradiction = 2 };

inline constexpr std::size_t kNumLabels3 = 3;

// "strict_entailment", "entailment", "possible_entailment",
// "strict_contradiction", "contradiction", "neutral".
std::string to_string(Label6 l);
// "entailment", "neutral", "contradiction".
std::string to_string(Label3 l);
// Case-insensitive; spaces, dashes and underscores are interchangeable.
// Throws ParseError on unknown names.
Label6 parse_label6(std::string_view s);
Label3 parse_label3(std::string_view s);

inline std::size_t index_of(Label3 l) { return static_cast<std::size_t>(l); }
inline Label3 label3_at(std::size_t i) { return static_cast<Label3>(i); }

// Six-way annotation -> three-way NLI label. Possible entailment folds into
// entailment.
Label3 collapse_label(Label6 l);

enum class SpanKind { kDrug, kSentiment, kContext, kUncertainty };

struct SpanAnnotation {
  SpanKind kind = SpanKind::kDrug;
  std::size_t start = 0;
  std::size_t end = 0;
  // POSITIVE / NEGATIVE for sentiment spans, a tag for context spans, the
  // drug name for drug spans (falls back to the covered text when empty).
  std::string value;
};

std::string to_string(SpanKind k);
SpanKind parse_span_kind(std::string_view s);

// Throws ValidationError unless 0 <= start < end <= text.size().
void validate_span(const SpanAnnotation& span, std::string_view text);

// What the guideline rules look at for one claim.
struct ClaimFeatures {
  bool annotated = false;
  std::set<std::string> drugs;
  bool positive = false;
  bool negative = false;
  std::set<std::string> context;
  bool uncertainty = false;

  bool signed_statement() const { return positive || negative; }
  bool mixed() const { return positive && negative; }
};

// Features from span annotations. An empty span list yields an unannotated
// feature set.
ClaimFeatures features_from_spans(std::string_view text,
                                  const std::vector<SpanAnnotation>& spans);

// Features from raw text: drug mentions from the lexicon, sentiment from the
// polarity sign, uncertainty from hedge cues, context from caller tags.
ClaimFeatures features_from_text(std::string_view text, const DrugLexicon& drugs,
                                 const PolarityLexicon& lexicon,
                                 std::set<std::string> context_tags);

// Applies the annotation guideline table top to bottom, first match wins.
// "Match" is set equality and "similar context" a non-empty intersection of
// context tags. Throws ValidationError("unannotated pair") when either side
// lacks annotations. Symmetric in its arguments.
Label6 guideline_label(const ClaimFeatures& a, const ClaimFeatures& b);

// A claim pair with optional gold label and per-claim spans.
struct AnnotatedPair {
  ClaimPair pair;
  std::optional<Label6> label6;
  std::vector<SpanAnnotation> spans_a;
  std::vector<SpanAnnotation> spans_b;
};

nlohmann::ordered_json annotated_pair_to_json(const AnnotatedPair& p);
AnnotatedPair annotated_pair_from_json(const nlohmann::json& j);
std::vector<AnnotatedPair> parse_annotated_pairs(std::string_view jsonl);

// Items x categories rater counts; every row sums to the same rater count.
class AgreementMatrix {
 public:
  // Throws ValidationError on ragged rows, unequal rater counts, fewer than
  // two raters, or no items.
  explicit AgreementMatrix(std::vector<std::vector<std::size_t>> counts);

  // One row per item, one column per category. A non-numeric first row is
  // taken as a header.
  static AgreementMatrix from_csv(std::string_view csv);

  std::size_t items() const { return counts_.size(); }
  std::size_t categories() const { return counts_.front().size(); }
  std::size_t raters() const { return raters_; }
  const std::vector<std::vector<std::size_t>>& counts() const { return counts_; }

 private:
  std::vector<std::vector<std::size_t>> counts_;
  std::size_t raters_ = 0;
};

// Fleiss' kappa (P - Pe) / (1 - Pe). Throws ValidationError("undefined
// kappa") when Pe == 1.
double fleiss_kappa(const AgreementMatrix& m);

}  // namespace contramine

#endif  // CONTRAMINE_ANNOTATION_H_
