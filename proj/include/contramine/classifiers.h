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

#ifndef CONTRAMINE_CLASSIFIERS_H_
#define CONTRAMINE_CLASSIFIERS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "contramine/annotation.h"
#include "contramine/curriculum.h"
#include "contramine/textrep.h"
#include "json.hpp"

namespace contramine {

// Probabilities over {entailment, neutral, contradiction}.
struct ScoreDistribution {
  double entailment = 1.0 / 3.0;
  double neutral = 1.0 / 3.0;
  double contradiction = 1.0 / 3.0;

  double operator[](Label3 l) const;
  // First maximum in entailment, neutral, contradiction order.
  Label3 argmax() const;
  double sum() const { return entailment + neutral + contradiction; }

  // Throws ValidationError unless every entry is finite and >= 0 and the
  // entries sum to 1 within `tolerance`.
  void validate(double tolerance = 1e-9) const;

  friend bool operator==(const ScoreDistribution&, const ScoreDistribution&) = default;
};

struct TextPair {
  std::string premise;
  std::string hypothesis;
};

// Anything that maps (premise, hypothesis) pairs to score distributions.
class Scorer {
 public:
  virtual ~Scorer() = default;
  // Output is aligned with `pairs`.
  virtual std::vector<ScoreDistribution> score_batch(std::span<const TextPair> pairs) = 0;
  virtual std::string id() const = 0;
};

ScoreDistribution score_pair(Scorer& scorer, std::string_view premise,
                             std::string_view hypothesis);

// ---------------------------------------------------------------------------
// Features.

// Sparse feature vector; entries sorted by index, indices < dim.
struct FeatureVector {
  std::size_t dim = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  double get(std::uint32_t index) const;
  std::size_t nnz() const { return entries.size(); }

  // Sorts, merges duplicate indices, and drops zeros.
  static FeatureVector from_map(std::size_t dim,
                                const std::unordered_map<std::uint32_t, double>& values);
};

// Sorted token vocabulary.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  // -1 when absent.
  std::int64_t index_of(std::string_view token) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

class Featurizer {
 public:
  virtual ~Featurizer() = default;

  virtual std::string kind() const = 0;
  // Learns the feature space from training items only.
  virtual void fit(std::span<const NLIItem> train) = 0;
  virtual bool fitted() const = 0;
  virtual std::size_t dim() const = 0;
  // Throws ConfigError when not fitted.
  virtual FeatureVector transform(std::string_view premise,
                                  std::string_view hypothesis) const = 0;
  virtual nlohmann::ordered_json to_json() const = 0;
};

// Token counts of the hypothesis; the premise is ignored.
class HypothesisUnigramFeaturizer final : public Featurizer {
 public:
  std::string kind() const override { return "hypothesis_unigrams"; }
  void fit(std::span<const NLIItem> train) override;
  bool fitted() const override { return fitted_; }
  std::size_t dim() const override { return vocab_.size(); }
  FeatureVector transform(std::string_view premise,
                          std::string_view hypothesis) const override;
  nlohmann::ordered_json to_json() const override;
  static std::unique_ptr<HypothesisUnigramFeaturizer> from_json(const nlohmann::json& j);

 private:
  Vocabulary vocab_;
  bool fitted_ = false;
};

// min(count in premise, count in hypothesis) per vocabulary token.
class WordOverlapFeaturizer final : public Featurizer {
 public:
  std::string kind() const override { return "word_overlap"; }
  void fit(std::span<const NLIItem> train) override;
  bool fitted() const override { return fitted_; }
  std::size_t dim() const override { return vocab_.size(); }
  FeatureVector transform(std::string_view premise,
                          std::string_view hypothesis) const override;
  nlohmann::ordered_json to_json() const override;
  static std::unique_ptr<WordOverlapFeaturizer> from_json(const nlohmann::json& j);

 private:
  Vocabulary vocab_;
  bool fitted_ = false;
};

// Counts of ordered (premise token, hypothesis token) pairs, restricted to
// the `max_pairs` most frequent pairs of the training split.
class WordCrossProductFeaturizer final : public Featurizer {
 public:
  explicit WordCrossProductFeaturizer(std::size_t max_pairs = 50000) : max_pairs_(max_pairs) {}

  std::string kind() const override { return "word_cross_product"; }
  void fit(std::span<const NLIItem> train) override;
  bool fitted() const override { return fitted_; }
  std::size_t dim() const override { return vocab_.size(); }
  FeatureVector transform(std::string_view premise,
                          std::string_view hypothesis) const override;
  nlohmann::ordered_json to_json() const override;
  static std::unique_ptr<WordCrossProductFeaturizer> from_json(const nlohmann::json& j);

  // "premise_token|hypothesis_token"
  static std::string pair_name(std::string_view p, std::string_view h);
  const Vocabulary& pair_vocabulary() const { return vocab_; }

 private:
  std::size_t max_pairs_;
  Vocabulary vocab_;
  bool fitted_ = false;
};

// Dense (cosine similarity, polarity(premise), polarity(hypothesis)).
class SimilarityPolarityFeaturizer final : public Featurizer {
 public:
  explicit SimilarityPolarityFeaturizer(TextResources text);

  std::string kind() const override { return "similarity_polarity"; }
  void fit(std::span<const NLIItem>) override {}
  bool fitted() const override { return true; }
  std::size_t dim() const override { return 3; }
  FeatureVector transform(std::string_view premise,
                          std::string_view hypothesis) const override;
  nlohmann::ordered_json to_json() const override;

 private:
  TextResources text_;
};

// Builds an unfitted featurizer by kind name. `text` is only consulted for
// similarity_polarity.
std::unique_ptr<Featurizer> make_featurizer(std::string_view kind, const TextResources& text,
                                            std::size_t max_cross_pairs = 50000);
std::unique_ptr<Featurizer> featurizer_from_json(const nlohmann::json& j,
                                                 const TextResources& text);

// ---------------------------------------------------------------------------
// Multinomial logistic regression.

struct SoftmaxHyperparams {
  int epochs = 1000;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

using WeightMatrix = Eigen::Matrix<double, 3, Eigen::Dynamic>;

struct SoftmaxModel {
  WeightMatrix weights;  // 3 x dim
  Eigen::Vector3d bias = Eigen::Vector3d::Zero();
  SoftmaxHyperparams hyperparams;
  double final_loss = 0.0;
  std::vector<double> loss_history;

  static SoftmaxModel zeros(std::size_t dim);
  std::size_t dim() const { return static_cast<std::size_t>(weights.cols()); }
  ScoreDistribution predict(const FeatureVector& x) const;
};

// Row- and column-compressed copies of a feature matrix, so the gradient can
// be accumulated per feature column in a fixed order.
class SparseDesign {
 public:
  SparseDesign(std::span<const FeatureVector> rows, std::size_t dim);

  std::size_t rows() const { return row_ptr_.size() - 1; }
  std::size_t dim() const { return dim_; }

  template <typename F>
  void for_row(std::size_t i, F&& f) const {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) f(row_idx_[k], row_val_[k]);
  }
  template <typename F>
  void for_col(std::size_t j, F&& f) const {
    for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) f(col_idx_[k], col_val_[k]);
  }

 private:
  std::size_t dim_;
  std::vector<std::size_t> row_ptr_, col_ptr_;
  std::vector<std::uint32_t> row_idx_, col_idx_;
  std::vector<double> row_val_, col_val_;
};

struct SoftmaxGradient {
  WeightMatrix weights;
  Eigen::Vector3d bias;
};

// Mean cross-entropy plus (l2 / 2) * ||W||^2 (bias unregularised) and its
// gradient. The parallel kernel splits per-example work and per-column
// gradient accumulation across OpenMP threads; its summation order does not
// depend on the thread count.
double softmax_loss_and_gradient(const SparseDesign& x, std::span<const Label3> y,
                                 const WeightMatrix& w, const Eigen::Vector3d& b, double l2,
                                 SoftmaxGradient* grad);
double softmax_loss_and_gradient_serial(std::span<const FeatureVector> x,
                                        std::span<const Label3> y, const WeightMatrix& w,
                                        const Eigen::Vector3d& b, double l2,
                                        SoftmaxGradient* grad);

// Full-batch gradient descent from all-zero weights. Throws DivergenceError
// on a non-finite loss and ConfigError on empty or mismatched inputs.
SoftmaxModel train_softmax(std::span<const FeatureVector> features, std::span<const Label3> labels,
                           const SoftmaxHyperparams& hp = {});

// Featurizer plus softmax weights; saved as schema-versioned JSON.
struct BaselineModel {
  std::unique_ptr<Featurizer> featurizer;
  SoftmaxModel softmax;

  ScoreDistribution predict(std::string_view premise, std::string_view hypothesis) const;

  nlohmann::ordered_json to_json() const;
  std::string dump() const;
  static BaselineModel from_json(const nlohmann::json& j, const TextResources& text);
  static BaselineModel load(const std::filesystem::path& path, const TextResources& text);
};

inline constexpr int kModelSchemaVersion = 1;

// Fits the featurizer on `train` and trains the softmax on its features.
BaselineModel train_baseline(std::unique_ptr<Featurizer> featurizer,
                             std::span<const NLIItem> train, const SoftmaxHyperparams& hp);

// Scores locally with a trained baseline. Batches fan out over OpenMP.
class BaselineScorer final : public Scorer {
 public:
  explicit BaselineScorer(const BaselineModel& model) : model_(&model) {}
  std::vector<ScoreDistribution> score_batch(std::span<const TextPair> pairs) override;
  std::string id() const override;

 private:
  const BaselineModel* model_;
};

}  // namespace contramine

#endif  // CONTRAMINE_CLASSIFIERS_H_
