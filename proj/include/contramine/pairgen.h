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

#ifndef CONTRAMINE_PAIRGEN_H_
#define CONTRAMINE_PAIRGEN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "contramine/corpus.h"
#include "contramine/textrep.h"
#include "json.hpp"

namespace contramine {

// Unordered claim pair, stored canonically with a_id < b_id. Downstream the
// first claim is the premise and the second the hypothesis.
struct ClaimPair {
  std::string a_id;
  std::string b_id;
  std::string drug;
  std::string topic;
  double a_pol = 0.0;
  double b_pol = 0.0;

  // "a_id::b_id"
  std::string key() const;

  friend bool operator==(const ClaimPair&, const ClaimPair&) = default;
};

// Orders the two claims canonically (swapping polarities along with ids).
// Throws ValidationError when both ids are equal.
ClaimPair make_claim_pair(std::string x_id, std::string y_id, std::string drug,
                          std::string topic, double x_pol, double y_pol);

std::string pair_key(std::string_view a_id, std::string_view b_id);

nlohmann::ordered_json pair_to_json(const ClaimPair& p);
ClaimPair pair_from_json(const nlohmann::json& j);
std::string serialize_pairs(const std::vector<ClaimPair>& pairs);
std::vector<ClaimPair> parse_pairs(std::string_view jsonl);

struct SamplerConfig {
  std::size_t k = 7;      // claims per (drug, topic, polarity sign)
  std::size_t n = 1000;   // total subsample size
  std::uint64_t seed = 0;
};

// Per-claim quantities the sampler needs, computed once per corpus.
struct ClaimFeatureTable {
  std::vector<std::string> lowered_text;
  std::vector<std::string> normalized_text;
  std::vector<double> polarity;
  std::vector<SentenceEmbedding> embedding;
};

ClaimFeatureTable compute_claim_features(const ClaimSet& claims, const TextResources& text);

// The union P over every (drug, topic) of the candidate pairs, before
// subsampling, sorted by key. A pair produced by several (drug, topic) cells
// keeps the first cell in drug-major, topic-minor order. The parallel version
// fans the cells out over OpenMP threads.
std::vector<ClaimPair> candidate_pair_pool(const ClaimSet& claims, const DrugLexicon& drugs,
                                           const TopicLexicon& topics,
                                           const TextResources& text, std::size_t k);
std::vector<ClaimPair> candidate_pair_pool_serial(const ClaimSet& claims,
                                                  const DrugLexicon& drugs,
                                                  const TopicLexicon& topics,
                                                  const TextResources& text, std::size_t k);

// Heuristic sampler for candidate non-trivial pairs: for every (drug, topic),
// take the k most topic-relevant claims mentioning the drug with positive
// polarity and the k most relevant with negative polarity, pair every two of
// them, drop pairs with identical text, and finally sample n pairs uniformly
// without replacement from the union. Output is sorted by key.
std::vector<ClaimPair> sample_candidate_pairs(const ClaimSet& claims, const DrugLexicon& drugs,
                                              const TopicLexicon& topics,
                                              const TextResources& text,
                                              const SamplerConfig& cfg);

// Uniform sample of n items without replacement (all of them if n >= size),
// returned in input order. sample_indices returns sorted indices.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                        std::uint64_t seed);

template <typename T>
std::vector<T> sample_without_replacement(const std::vector<T>& items, std::size_t n,
                                          std::uint64_t seed) {
  std::vector<T> out;
  for (std::size_t i : sample_indices(items.size(), n, seed)) out.push_back(items[i]);
  return out;
}

// ---------------------------------------------------------------------------

// Claims are nodes; every annotated pair is an undirected edge.
class ClaimGraph {
 public:
  ClaimGraph() = default;

  const std::vector<std::string>& nodes() const { return nodes_; }
  // Node index pairs (lo, hi), sorted and unique.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Index into nodes(), or npos.
  std::size_t index_of(std::string_view id) const;
  // Component label per node; labels are dense and ordered by first node.
  std::vector<std::size_t> components() const;
  std::size_t component_count() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  friend ClaimGraph build_claim_graph(const std::vector<ClaimPair>& pairs);
  std::vector<std::string> nodes_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

ClaimGraph build_claim_graph(const std::vector<ClaimPair>& pairs);

struct SplitRatios {
  double train = 0.7;
  double val = 0.15;
  double test = 0.15;
};

struct SplitAssignment {
  // Pair keys per split, sorted.
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;

  nlohmann::ordered_json to_json() const;
  static SplitAssignment from_json(const nlohmann::json& j);
};

// Assigns every connected component wholesale to one split: largest
// component first (seeded shuffle breaks size ties), each to the split with
// the largest remaining pair-count deficit (train, val, test on ties).
// Throws ValidationError with fewer than three components; the result is
// re-verified for disjointness before returning.
SplitAssignment split_by_components(const ClaimGraph& graph, const std::vector<ClaimPair>& pairs,
                                    const SplitRatios& ratios, std::uint64_t seed);

// Throws ValidationError if some claim lands in two splits or some pair is
// missing, duplicated, or unknown.
void verify_split(const SplitAssignment& split, const std::vector<ClaimPair>& pairs);

}  // namespace contramine

#endif  // CONTRAMINE_PAIRGEN_H_
