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

#ifndef CONTRAMINE_MINER_H_
#define CONTRAMINE_MINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "contramine/classifiers.h"
#include "contramine/corpus.h"
#include "contramine/pairgen.h"
#include "contramine/textrep.h"
#include "json.hpp"

namespace contramine {

struct MinerConfig {
  std::vector<std::string> drugs_of_interest;
  double sim_threshold = 0.5;
  // Restrict to a seeded sample of this many documents before pairing.
  std::optional<std::size_t> max_papers;
  // Keep pairs with p(contradiction) >= this instead of argmax filtering.
  std::optional<double> contradiction_threshold;

  // Throws ConfigError on an empty drug list, a threshold outside [0, 1] or
  // max_papers == 0.
  void validate() const;
};

// Unordered pairs of claims that both mention a drug of interest and whose
// sentence embeddings have cosine > sim_threshold. `drug` is the first drug of
// interest mentioned by both claims, or "x+y" when they mention different
// ones; `topic` is empty. Polarities come from text.lexicon when set.
// Output is sorted by pair key.
std::vector<ClaimPair> mine_candidates(const ClaimSet& claims, const MinerConfig& cfg,
                                       const TextResources& text, std::uint64_t seed);
std::vector<ClaimPair> mine_candidates_serial(const ClaimSet& claims, const MinerConfig& cfg,
                                              const TextResources& text, std::uint64_t seed);

// Claims eligible for pairing: drug-mentioning, then doc-sampled when
// cfg.max_papers is set. Order follows the claim set.
std::vector<const Claim*> miner_eligible_claims(const ClaimSet& claims, const MinerConfig& cfg,
                                                std::uint64_t seed);

struct ScoredPair {
  ClaimPair pair;
  ScoreDistribution scores;

  double p_contradiction() const { return scores.contradiction; }
  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

nlohmann::ordered_json scored_pair_to_json(const ScoredPair& s);
ScoredPair scored_pair_from_json(const nlohmann::json& j);

struct RankOptions {
  std::optional<double> contradiction_threshold;
  // JSONL of every scored pair. Existing entries are reused, so an
  // interrupted run resumes where it stopped.
  std::optional<std::filesystem::path> checkpoint;
  std::size_t checkpoint_every = 500;
};

// Scores each pair (premise = a, hypothesis = b) and keeps predicted
// contradictions, sorted by p(contradiction) descending then key ascending.
// Scorer failures propagate after completed chunks reach the checkpoint.
std::vector<ScoredPair> rank_contradictions(const std::vector<ClaimPair>& pairs,
                                            const ClaimSet& claims, Scorer& scorer,
                                            const RankOptions& options = {});

// Applies the argmax or threshold rule and the ranking order to already
// scored pairs.
std::vector<ScoredPair> select_contradictions(std::vector<ScoredPair> scored,
                                              std::optional<double> threshold);

struct ReportHit {
  Claim claim;
  double p_contradiction = 0.0;

  friend bool operator==(const ReportHit&, const ReportHit&) = default;
};

struct ContradictionReport {
  Claim query_claim;
  std::vector<ReportHit> hits;
  std::size_t unique_docs = 0;

  friend bool operator==(const ContradictionReport&, const ContradictionReport&) = default;
};

// One report per claim in at least one scored pair; each pair adds a hit to
// both members. Hits are ordered by probability descending then claim id;
// reports by unique_docs descending then query id.
std::vector<ContradictionReport> build_reports(const std::vector<ScoredPair>& scored,
                                               const ClaimSet& claims);

enum class ReportFormat { kMarkdown, kJson };

ReportFormat parse_report_format(std::string_view s);
std::string render_report(const std::vector<ContradictionReport>& reports, ReportFormat format);
std::vector<ContradictionReport> parse_reports_json(std::string_view doc);

}  // namespace contramine

#endif  // CONTRAMINE_MINER_H_
