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

#ifndef CONTRAMINE_TEXTREP_H_
#define CONTRAMINE_TEXTREP_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "contramine/corpus.h"
#include "json.hpp"

namespace contramine {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Static word embeddings plus relative unigram frequencies.
class WordVectors {
 public:
  // `freq` may be empty, in which case every word gets 1/|vocab|. Throws
  // ValidationError on duplicate words or shape mismatches.
  WordVectors(std::vector<std::string> words, RowMatrix matrix,
              std::vector<double> freq = {});

  // Text format: header "N dim", then N lines "word v1 ... vdim". The
  // frequency sidecar holds "word value" lines; values are normalised to sum
  // to one. When `freq_path` is not given, "<path>.freq" is used if present.
  static WordVectors load(const std::filesystem::path& path,
                          const std::optional<std::filesystem::path>& freq_path = {});

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.cols()); }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const RowMatrix& matrix() const { return matrix_; }
  const std::vector<double>& frequencies() const { return freq_; }

  std::optional<std::size_t> index_of(std::string_view word) const;
  double frequency(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  RowMatrix matrix_;
  std::vector<double> freq_;
};

struct UsifParams {
  int n_components = 5;
  int avg_sentence_len = 11;
};

struct SentenceEmbedding {
  Eigen::VectorXd vector;
  double oov_fraction = 1.0;
};

// Top principal directions of an embedding matrix (uncentred), each carrying
// its share of the explained variance among the kept directions.
struct ComponentBasis {
  RowMatrix directions;  // m x dim, orthonormal rows
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  // Same directions, every weight set to 1 (full projection removal).
  ComponentBasis with_unit_weights() const;

  nlohmann::ordered_json to_json() const;
  static ComponentBasis from_json(const nlohmann::json& j);
};

// Smoothing constant `a` of the unsupervised smoothed inverse frequency
// scheme, derived from the vocabulary size and the expected sentence length.
double usif_smoothing(const WordVectors& wv, int avg_sentence_len);

// Order-free weighted mean of the in-vocabulary token vectors with weights
// a / (a + freq(w)). Texts without in-vocabulary tokens give the zero vector
// with oov_fraction 1. No component removal happens here.
SentenceEmbedding usif_embed(std::string_view text, const WordVectors& wv,
                             const UsifParams& params = {});

// Throws ConfigError when m exceeds the embedding count or the dimension.
ComponentBasis fit_common_components(std::span<const SentenceEmbedding> embeddings,
                                     std::size_t m);

// v - sum_i weight_i * (v . u_i) u_i
SentenceEmbedding remove_components(const SentenceEmbedding& emb,
                                    const ComponentBasis& basis);

// Standard cosine; 0 when either vector is zero. Throws ValidationError on a
// dimension mismatch.
double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Word vectors plus smoothing weights plus an optional fitted basis. Holds a
// reference to the WordVectors, which must outlive it.
class SentenceEncoder {
 public:
  SentenceEncoder(const WordVectors& wv, UsifParams params = {});

  const WordVectors& vectors() const { return *wv_; }
  const UsifParams& params() const { return params_; }
  double smoothing() const { return a_; }

  // Embeds `texts` and fits min(n_components, |texts|, dim) common
  // components. Fitting on an empty list clears the basis.
  void fit(std::span<const std::string> texts);
  void set_basis(std::optional<ComponentBasis> basis) { basis_ = std::move(basis); }
  const std::optional<ComponentBasis>& basis() const { return basis_; }

  SentenceEmbedding embed_raw(std::string_view text) const;
  // embed_raw followed by component removal when a basis is fitted.
  SentenceEmbedding embed(std::string_view text) const;

 private:
  const WordVectors* wv_;
  UsifParams params_;
  double a_;
  std::vector<double> weights_;
  std::optional<ComponentBasis> basis_;
};

// OpenMP batch embedding; row i of the result embeds texts[i].
std::vector<SentenceEmbedding> embed_batch(const SentenceEncoder& enc,
                                           std::span<const std::string> texts);
std::vector<SentenceEmbedding> embed_batch_serial(const SentenceEncoder& enc,
                                                  std::span<const std::string> texts);

// cosine(embed(claim.text), embed(topic)). Throws ConfigError on an empty
// topic.
double topic_relevance(const Claim& claim, std::string_view topic,
                       const SentenceEncoder& enc);

// ---------------------------------------------------------------------------
// Lexicon polarity.

struct PolarityScore {
  double value = 0.0;
};

// Token -> valence map (VADER scale, roughly [-4, 4]).
class PolarityLexicon {
 public:
  PolarityLexicon() = default;
  explicit PolarityLexicon(std::unordered_map<std::string, double> valence);

  // TSV "token<TAB>valence"; extra columns are ignored, '#' lines skipped.
  static PolarityLexicon load(const std::filesystem::path& path);
  // ~200 efficacy and safety terms for biomedical claims.
  static PolarityLexicon builtin();

  std::optional<double> valence(std::string_view token) const;
  std::size_t size() const { return valence_.size(); }

 private:
  std::unordered_map<std::string, double> valence_;
};

struct PolarityRules {
  int negation_window = 3;
  double negation_scalar = -0.74;
  double booster_increment = 0.293;
  double normalization_alpha = 15.0;
};

// Sum of token valences with negation flipping and intensifier scaling over
// the preceding window, squashed by s / sqrt(s^2 + alpha) into [-1, 1].
PolarityScore polarity(std::string_view text, const PolarityLexicon& lexicon,
                       const PolarityRules& rules = {});

const std::unordered_set<std::string>& negation_words();

// Everything the sampler and the miner need to embed and score claims.
struct TextResources {
  const SentenceEncoder* encoder = nullptr;
  const PolarityLexicon* lexicon = nullptr;
};

}  // namespace contramine

#endif  // CONTRAMINE_TEXTREP_H_
