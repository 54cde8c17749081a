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

#ifndef CONTRAMINE_CURRICULUM_H_
#define CONTRAMINE_CURRICULUM_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "contramine/annotation.h"
#include "contramine/corpus.h"
#include "json.hpp"

namespace contramine {

enum class Split { kTrain, kVal, kTest };

std::string to_string(Split s);
Split parse_split(std::string_view s);

struct NLIItem {
  std::string premise;
  std::string hypothesis;
  Label3 label = Label3::kNeutral;

  friend bool operator==(const NLIItem&, const NLIItem&) = default;
};

// Dataset names used by the adapters: multinli, mednli, mancon, covid.
// Anything else is a custom dataset.
struct NLIDataset {
  std::string name;
  Split split = Split::kTrain;
  std::vector<NLIItem> items;
};

// Our own interchange format: {"premise", "hypothesis", "label"}.
std::string serialize_nli(const NLIDataset& ds);

// Field mapping for third-party NLI JSONL distributions. Rows whose label is
// not in `labels` (e.g. MultiNLI's "-") are skipped.
struct FieldMap {
  std::string premise = "premise";
  std::string hypothesis = "hypothesis";
  std::string label = "label";
  std::map<std::string, std::string> labels = {
      {"entailment", "entailment"}, {"neutral", "neutral"}, {"contradiction", "contradiction"}};

  static FieldMap native();
  // sentence1 / sentence2 / gold_label, as shipped by MultiNLI and MedNLI.
  static FieldMap multinli();
  static FieldMap mednli();
  // {"premise": ..., "hypothesis": ..., "label": ..., "labels": {...}}
  static FieldMap from_json(const nlohmann::json& j);
};

NLIDataset parse_nli_jsonl(std::string_view jsonl, const FieldMap& fields, std::string name,
                           Split split);
NLIDataset load_nli_jsonl(const std::filesystem::path& path, const FieldMap& fields,
                          std::string name, Split split);

// COVID adapter: annotated pairs with a gold six-way label become three-way
// items (first claim premise, second hypothesis). Unlabelled pairs are
// skipped.
NLIDataset covid_nli_from_annotated(const std::vector<AnnotatedPair>& pairs,
                                    const ClaimSet& claims, Split split);

// ---------------------------------------------------------------------------
// Systematic-review stance claims.

struct PicoReviewClaim {
  std::string question_id;
  bool yes = true;
  std::string text;
};

// JSONL {"question_id", "stance": "yes"|"no", "text"}.
std::vector<PicoReviewClaim> parse_pico_claims(std::string_view jsonl);

using QuestionSplit = std::map<std::string, Split>;

// Seeded assignment of the distinct question ids to train/val/test with the
// given counts. The counts must add up to the number of distinct questions;
// otherwise ConfigError.
QuestionSplit assign_question_splits(const std::vector<PicoReviewClaim>& claims,
                                     std::size_t n_train, std::size_t n_val,
                                     std::size_t n_test, std::uint64_t seed);

struct ManconSplits {
  NLIDataset train;
  NLIDataset val;
  NLIDataset test;
};

// Within each split: same question and stance -> entailment, same question
// and opposite stance -> contradiction, different questions -> neutral. The
// neutral class is then downsampled (seeded, uniform) to the size of the
// larger of the other two classes.
ManconSplits build_mancon_nli(const std::vector<PicoReviewClaim>& claims,
                              const QuestionSplit& question_split, std::uint64_t seed);

// Seeded halving; the first half gets the extra item when |items| is odd.
std::pair<NLIDataset, NLIDataset> split_validation_half(const NLIDataset& ds,
                                                        std::uint64_t seed);

// Uniform subsample without replacement, in original order. n >= |items|
// returns everything.
std::vector<NLIItem> subsample(const NLIDataset& ds, std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Curriculum planning.

enum class CurriculumKind { kForward, kReverse, kShuffled, kCombined, kSubsequence };

std::string to_string(CurriculumKind k);
CurriculumKind parse_curriculum_kind(std::string_view s);

struct OrderSpec {
  CurriculumKind kind = CurriculumKind::kForward;
  std::size_t n_shuffled = 1;
  std::uint64_t seed = 0;
};

// forward: the given order. reverse: reversed. shuffled: n_shuffled seeded
// draws without replacement from the len! - 2 permutations other than
// forward and reverse. combined: the names once, as a single marker sequence.
std::vector<std::vector<std::string>> enumerate_orders(const std::vector<std::string>& names,
                                                       const OrderSpec& spec);

// Every permutation except the identity and its reversal, in lexicographic
// order of positions.
std::vector<std::vector<std::string>> eligible_shuffles(const std::vector<std::string>& names);

// The full sequence, both contiguous triples, the three contiguous pairs,
// and the four singletons.
std::vector<std::vector<std::string>> forward_subsequences(const std::vector<std::string>& forward);

struct TrainParams {
  int epochs = 4;
  double learning_rate = 1e-5;
  int batch_size = 8;

  friend bool operator==(const TrainParams&, const TrainParams&) = default;
};

struct StepPart {
  std::string dataset;
  std::size_t sample_size = 0;

  friend bool operator==(const StepPart&, const StepPart&) = default;
};

struct ManifestStep {
  std::string dataset;
  Split split = Split::kTrain;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
  // Only set for the single step of a combined curriculum.
  std::vector<StepPart> parts;

  friend bool operator==(const ManifestStep&, const ManifestStep&) = default;
};

struct CurriculumManifest {
  CurriculumKind kind = CurriculumKind::kForward;
  std::vector<ManifestStep> steps;
  TrainParams train_params;

  // Throws ValidationError on an empty step list, a zero sample size, or a
  // combined manifest with more than one step.
  void validate() const;

  // Key order: curriculum_kind, steps, train_params.
  nlohmann::ordered_json to_json() const;
  std::string dump() const;
  static CurriculumManifest from_json(const nlohmann::json& j);

  friend bool operator==(const CurriculumManifest&, const CurriculumManifest&) = default;
};

// min(r^(k-i) * d, size) for the 1-indexed step i of a k-step curriculum.
std::size_t ratio_sample_size(double r, std::size_t d, std::size_t k, std::size_t i,
                              std::size_t dataset_size);

// One step per dataset in `order`, sized by ratio_sample_size. For the
// combined kind the per-dataset sizes become the parts of a single step.
// Throws ConfigError when r < 1, d < 1, the order is empty, or a name has no
// size.
CurriculumManifest plan_curriculum(const std::map<std::string, std::size_t>& train_sizes,
                                   const std::vector<std::string>& order, double r,
                                   std::size_t d, const TrainParams& params, std::uint64_t seed,
                                   CurriculumKind kind = CurriculumKind::kForward);

// Training items per step. The combined step concatenates each part's
// subsample and shuffles with the step seed.
std::vector<std::vector<NLIItem>> materialize(const CurriculumManifest& manifest,
                                              const std::map<std::string, NLIDataset>& datasets);

// Cartesian product, learning rate major.
std::vector<CurriculumManifest> plan_hyperparameter_grid(const std::vector<double>& lrs,
                                                         const std::vector<int>& batch_sizes,
                                                         const CurriculumManifest& base);

// The sweep used for model selection: 6 learning rates x 4 batch sizes.
std::vector<double> sweep_learning_rates();
std::vector<int> sweep_batch_sizes();

}  // namespace contramine

#endif  // CONTRAMINE_CURRICULUM_H_
