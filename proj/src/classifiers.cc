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

#include "contramine/classifiers.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "contramine/common.h"

namespace contramine {

using nlohmann::ordered_json;

double ScoreDistribution::operator[](Label3 l) const {
  switch (l) {
    case Label3::kEntailment: return entailment;
    case Label3::kNeutral: return neutral;
    case Label3::kContradiction: return contradiction;
  }
  return 0.0;
}

Label3 ScoreDistribution::argmax() const {
  Label3 best = Label3::kEntailment;
  if (neutral > (*this)[best]) best = Label3::kNeutral;
  if (contradiction > (*this)[best]) best = Label3::kContradiction;
  return best;
}

void ScoreDistribution::validate(double tolerance) const {
  for (double p : {entailment, neutral, contradiction}) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError("score distribution has a negative or non-finite entry");
    }
  }
  if (std::abs(sum() - 1.0) > tolerance) {
    throw ValidationError("score distribution sums to " + std::to_string(sum()));
  }
}

ScoreDistribution score_pair(Scorer& scorer, std::string_view premise,
                             std::string_view hypothesis) {
  const TextPair pair{std::string(premise), std::string(hypothesis)};
  auto out = scorer.score_batch(std::span<const TextPair>(&pair, 1));
  if (out.size() != 1) throw ProtocolError("scorer returned the wrong number of scores");
  return out.front();
}

// ---------------------------------------------------------------------------

double FeatureVector::get(std::uint32_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const auto& e, std::uint32_t i) { return e.first < i; });
  return (it != entries.end() && it->first == index) ? it->second : 0.0;
}

FeatureVector FeatureVector::from_map(std::size_t dim,
                                      const std::unordered_map<std::uint32_t, double>& values) {
  FeatureVector fv;
  fv.dim = dim;
  fv.entries.reserve(values.size());
  for (const auto& [i, v] : values) {
    if (v != 0.0) fv.entries.emplace_back(i, v);
  }
  std::sort(fv.entries.begin(), fv.entries.end());
  return fv;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  std::sort(tokens_.begin(), tokens_.end());
  tokens_.erase(std::unique(tokens_.begin(), tokens_.end()), tokens_.end());
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<std::uint32_t>(i));
  }
}

std::int64_t Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

namespace {

void require_fitted(const Featurizer& f) {
  if (!f.fitted()) throw ConfigError(f.kind() + " featurizer used before fitting");
}

std::unordered_map<std::uint32_t, double> count_tokens(const Vocabulary& vocab,
                                                       std::string_view text) {
  std::unordered_map<std::uint32_t, double> counts;
  for (const auto& t : tokenize(text)) {
    auto i = vocab.index_of(t);
    if (i >= 0) counts[static_cast<std::uint32_t>(i)] += 1.0;
  }
  return counts;
}

Vocabulary vocabulary_from_json(const nlohmann::json& j, const char* key) {
  try {
    return Vocabulary(j.at(key).get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("featurizer: ") + e.what());
  }
}

}  // namespace

void HypothesisUnigramFeaturizer::fit(std::span<const NLIItem> train) {
  std::vector<std::string> tokens;
  for (const auto& it : train) {
    for (auto& t : tokenize(it.hypothesis)) tokens.push_back(std::move(t));
  }
  vocab_ = Vocabulary(std::move(tokens));
  fitted_ = true;
}

FeatureVector HypothesisUnigramFeaturizer::transform(std::string_view,
                                                     std::string_view hypothesis) const {
  require_fitted(*this);
  return FeatureVector::from_map(dim(), count_tokens(vocab_, hypothesis));
}

ordered_json HypothesisUnigramFeaturizer::to_json() const {
  ordered_json j;
  j["kind"] = kind();
  j["vocabulary"] = vocab_.tokens();
  return j;
}

std::unique_ptr<HypothesisUnigramFeaturizer> HypothesisUnigramFeaturizer::from_json(
    const nlohmann::json& j) {
  auto f = std::make_unique<HypothesisUnigramFeaturizer>();
  f->vocab_ = vocabulary_from_json(j, "vocabulary");
  f->fitted_ = true;
  return f;
}

void WordOverlapFeaturizer::fit(std::span<const NLIItem> train) {
  std::vector<std::string> tokens;
  for (const auto& it : train) {
    for (auto& t : tokenize(it.premise)) tokens.push_back(std::move(t));
    for (auto& t : tokenize(it.hypothesis)) tokens.push_back(std::move(t));
  }
  vocab_ = Vocabulary(std::move(tokens));
  fitted_ = true;
}

FeatureVector WordOverlapFeaturizer::transform(std::string_view premise,
                                               std::string_view hypothesis) const {
  require_fitted(*this);
  const auto p = count_tokens(vocab_, premise);
  const auto h = count_tokens(vocab_, hypothesis);
  std::unordered_map<std::uint32_t, double> overlap;
  for (const auto& [i, c] : p) {
    auto it = h.find(i);
    if (it != h.end()) overlap[i] = std::min(c, it->second);
  }
  return FeatureVector::from_map(dim(), overlap);
}

ordered_json WordOverlapFeaturizer::to_json() const {
  ordered_json j;
  j["kind"] = kind();
  j["vocabulary"] = vocab_.tokens();
  return j;
}

std::unique_ptr<WordOverlapFeaturizer> WordOverlapFeaturizer::from_json(const nlohmann::json& j) {
  auto f = std::make_unique<WordOverlapFeaturizer>();
  f->vocab_ = vocabulary_from_json(j, "vocabulary");
  f->fitted_ = true;
  return f;
}

std::string WordCrossProductFeaturizer::pair_name(std::string_view p, std::string_view h) {
  std::string s;
  s.reserve(p.size() + h.size() + 1);
  s.append(p).append("|").append(h);
  return s;
}

void WordCrossProductFeaturizer::fit(std::span<const NLIItem> train) {
  std::map<std::string, std::size_t> counts;
  for (const auto& it : train) {
    const auto p = tokenize(it.premise);
    const auto h = tokenize(it.hypothesis);
    for (const auto& a : p) {
      for (const auto& b : h) ++counts[pair_name(a, b)];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  if (ranked.size() > max_pairs_) ranked.resize(max_pairs_);
  std::vector<std::string> kept;
  kept.reserve(ranked.size());
  for (auto& [name, c] : ranked) kept.push_back(std::move(name));
  vocab_ = Vocabulary(std::move(kept));
  fitted_ = true;
}

FeatureVector WordCrossProductFeaturizer::transform(std::string_view premise,
                                                    std::string_view hypothesis) const {
  require_fitted(*this);
  const auto p = tokenize(premise);
  const auto h = tokenize(hypothesis);
  std::unordered_map<std::uint32_t, double> counts;
  for (const auto& a : p) {
    for (const auto& b : h) {
      auto i = vocab_.index_of(pair_name(a, b));
      if (i >= 0) counts[static_cast<std::uint32_t>(i)] += 1.0;
    }
  }
  return FeatureVector::from_map(dim(), counts);
}

ordered_json WordCrossProductFeaturizer::to_json() const {
  ordered_json j;
  j["kind"] = kind();
  j["max_pairs"] = max_pairs_;
  j["pairs"] = vocab_.tokens();
  return j;
}

std::unique_ptr<WordCrossProductFeaturizer> WordCrossProductFeaturizer::from_json(
    const nlohmann::json& j) {
  auto f = std::make_unique<WordCrossProductFeaturizer>(j.value("max_pairs", std::size_t{50000}));
  f->vocab_ = vocabulary_from_json(j, "pairs");
  f->fitted_ = true;
  return f;
}

SimilarityPolarityFeaturizer::SimilarityPolarityFeaturizer(TextResources text) : text_(text) {
  if (text_.encoder == nullptr || text_.lexicon == nullptr) {
    throw ConfigError("similarity_polarity features need word vectors and a polarity lexicon");
  }
}

FeatureVector SimilarityPolarityFeaturizer::transform(std::string_view premise,
                                                      std::string_view hypothesis) const {
  FeatureVector fv;
  fv.dim = 3;
  const double sim =
      cosine(text_.encoder->embed(premise).vector, text_.encoder->embed(hypothesis).vector);
  const double values[3] = {sim, polarity(premise, *text_.lexicon).value,
                            polarity(hypothesis, *text_.lexicon).value};
  for (std::uint32_t i = 0; i < 3; ++i) {
    if (values[i] != 0.0) fv.entries.emplace_back(i, values[i]);
  }
  return fv;
}

ordered_json SimilarityPolarityFeaturizer::to_json() const {
  ordered_json j;
  j["kind"] = kind();
  j["n_components"] = text_.encoder->params().n_components;
  j["avg_sentence_len"] = text_.encoder->params().avg_sentence_len;
  // The basis is recorded so a loader can rebuild the same encoder.
  if (text_.encoder->basis()) j["basis"] = text_.encoder->basis()->to_json();
  return j;
}

std::unique_ptr<Featurizer> make_featurizer(std::string_view kind, const TextResources& text,
                                            std::size_t max_cross_pairs) {
  const auto k = to_lower(kind);
  if (k == "hypothesis_unigrams" || k == "hypothesis-unigrams") {
    return std::make_unique<HypothesisUnigramFeaturizer>();
  }
  if (k == "word_overlap" || k == "overlap") return std::make_unique<WordOverlapFeaturizer>();
  if (k == "word_cross_product" || k == "cross-product" || k == "cross_product") {
    return std::make_unique<WordCrossProductFeaturizer>(max_cross_pairs);
  }
  if (k == "similarity_polarity" || k == "sim-polarity" || k == "sim_polarity") {
    return std::make_unique<SimilarityPolarityFeaturizer>(text);
  }
  throw ConfigError("unknown featurizer \"" + std::string(kind) + "\"");
}

std::unique_ptr<Featurizer> featurizer_from_json(const nlohmann::json& j,
                                                 const TextResources& text) {
  const auto kind = j.value("kind", std::string());
  if (kind == "hypothesis_unigrams") return HypothesisUnigramFeaturizer::from_json(j);
  if (kind == "word_overlap") return WordOverlapFeaturizer::from_json(j);
  if (kind == "word_cross_product") return WordCrossProductFeaturizer::from_json(j);
  if (kind == "similarity_polarity") return std::make_unique<SimilarityPolarityFeaturizer>(text);
  throw ParseError("unknown featurizer kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------

SoftmaxModel SoftmaxModel::zeros(std::size_t dim) {
  SoftmaxModel m;
  m.weights = WeightMatrix::Zero(3, static_cast<Eigen::Index>(dim));
  return m;
}

namespace {

// Stable softmax of three logits; returns log-sum-exp.
double softmax3(const Eigen::Vector3d& z, Eigen::Vector3d* p) {
  const double m = z.maxCoeff();
  const Eigen::Vector3d e = (z.array() - m).exp();
  const double s = e.sum();
  *p = e / s;
  return m + std::log(s);
}

Eigen::Vector3d logits(const WeightMatrix& w, const Eigen::Vector3d& b, const FeatureVector& x) {
  Eigen::Vector3d z = b;
  for (const auto& [i, v] : x.entries) {
    if (i < w.cols()) z += v * w.col(i);
  }
  return z;
}

}  // namespace

ScoreDistribution SoftmaxModel::predict(const FeatureVector& x) const {
  Eigen::Vector3d p;
  softmax3(logits(weights, bias, x), &p);
  return ScoreDistribution{p(0), p(1), p(2)};
}

SparseDesign::SparseDesign(std::span<const FeatureVector> rows, std::size_t dim) : dim_(dim) {
  row_ptr_.reserve(rows.size() + 1);
  row_ptr_.push_back(0);
  std::vector<std::size_t> col_count(dim + 1, 0);
  for (const auto& r : rows) {
    for (const auto& [i, v] : r.entries) {
      if (i >= dim) throw ValidationError("feature index outside the model dimension");
      if (!std::isfinite(v)) throw ValidationError("non-finite feature value");
      row_idx_.push_back(i);
      row_val_.push_back(v);
      ++col_count[i + 1];
    }
    row_ptr_.push_back(row_idx_.size());
  }
  col_ptr_.assign(dim + 1, 0);
  for (std::size_t j = 0; j < dim; ++j) col_ptr_[j + 1] = col_ptr_[j] + col_count[j + 1];
  col_idx_.resize(row_idx_.size());
  col_val_.resize(row_val_.size());
  std::vector<std::size_t> fill(col_ptr_.begin(), col_ptr_.end() - 1);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const auto j = row_idx_[k];
      col_idx_[fill[j]] = static_cast<std::uint32_t>(r);
      col_val_[fill[j]] = row_val_[k];
      ++fill[j];
    }
  }
}

double softmax_loss_and_gradient(const SparseDesign& x, std::span<const Label3> y,
                                 const WeightMatrix& w, const Eigen::Vector3d& b, double l2,
                                 SoftmaxGradient* grad) {
  const std::size_t n = x.rows();
  std::vector<double> loss_terms(n);
  Eigen::Matrix<double, 3, Eigen::Dynamic> residual(3, static_cast<Eigen::Index>(n));
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t si = 0; si < sn; ++si) {
    const auto i = static_cast<std::size_t>(si);
    Eigen::Vector3d z = b;
    x.for_row(i, [&](std::uint32_t j, double v) { z += v * w.col(j); });
    Eigen::Vector3d p;
    const double lse = softmax3(z, &p);
    const auto yi = index_of(y[i]);
    loss_terms[i] = lse - z(static_cast<Eigen::Index>(yi));
    p(static_cast<Eigen::Index>(yi)) -= 1.0;
    residual.col(si) = p;
  }
  double loss = 0.0;
  for (double t : loss_terms) loss += t;
  const double inv_n = 1.0 / static_cast<double>(n);
  loss = loss * inv_n + 0.5 * l2 * w.squaredNorm();

  if (grad != nullptr) {
    grad->weights.resize(3, static_cast<Eigen::Index>(x.dim()));
    const auto sd = static_cast<std::ptrdiff_t>(x.dim());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t sj = 0; sj < sd; ++sj) {
      Eigen::Vector3d g = Eigen::Vector3d::Zero();
      x.for_col(static_cast<std::size_t>(sj),
                [&](std::uint32_t i, double v) { g += v * residual.col(i); });
      grad->weights.col(sj) = g * inv_n + l2 * w.col(sj);
    }
    grad->bias = residual.rowwise().sum() * inv_n;
  }
  return loss;
}

double softmax_loss_and_gradient_serial(std::span<const FeatureVector> x,
                                        std::span<const Label3> y, const WeightMatrix& w,
                                        const Eigen::Vector3d& b, double l2,
                                        SoftmaxGradient* grad) {
  const std::size_t n = x.size();
  if (grad != nullptr) {
    grad->weights = WeightMatrix::Zero(3, w.cols());
    grad->bias.setZero();
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d z = logits(w, b, x[i]);
    Eigen::Vector3d p;
    const double lse = softmax3(z, &p);
    const auto yi = static_cast<Eigen::Index>(index_of(y[i]));
    loss += lse - z(yi);
    if (grad != nullptr) {
      p(yi) -= 1.0;
      for (const auto& [j, v] : x[i].entries) grad->weights.col(j) += v * p;
      grad->bias += p;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  if (grad != nullptr) {
    grad->weights = grad->weights * inv_n + l2 * w;
    grad->bias *= inv_n;
  }
  return loss * inv_n + 0.5 * l2 * w.squaredNorm();
}

SoftmaxModel train_softmax(std::span<const FeatureVector> features, std::span<const Label3> labels,
                           const SoftmaxHyperparams& hp) {
  if (features.empty()) throw ConfigError("cannot train on an empty feature list");
  if (features.size() != labels.size()) {
    throw ConfigError("feature and label counts differ (" + std::to_string(features.size()) +
                      " vs " + std::to_string(labels.size()) + ")");
  }
  if (hp.epochs < 0) throw ConfigError("epochs must be >= 0");
  const std::size_t dim = features.front().dim;
  for (const auto& f : features) {
    if (f.dim != dim) throw ConfigError("feature vectors have different dimensions");
  }
  const SparseDesign design(features, dim);
  SoftmaxModel m = SoftmaxModel::zeros(dim);
  m.hyperparams = hp;
  SoftmaxGradient g;
  for (int epoch = 0; epoch <= hp.epochs; ++epoch) {
    const bool last = epoch == hp.epochs;
    const double loss =
        softmax_loss_and_gradient(design, labels, m.weights, m.bias, hp.l2, last ? nullptr : &g);
    if (!std::isfinite(loss)) {
      throw DivergenceError("softmax training diverged at epoch " + std::to_string(epoch) +
                            "; try a smaller learning rate");
    }
    m.loss_history.push_back(loss);
    if (last) break;
    m.weights -= hp.learning_rate * g.weights;
    m.bias -= hp.learning_rate * g.bias;
  }
  m.final_loss = m.loss_history.back();
  return m;
}

// ---------------------------------------------------------------------------

ScoreDistribution BaselineModel::predict(std::string_view premise,
                                         std::string_view hypothesis) const {
  return softmax.predict(featurizer->transform(premise, hypothesis));
}

ordered_json BaselineModel::to_json() const {
  ordered_json j;
  j["schema_version"] = kModelSchemaVersion;
  j["kind"] = "softmax_baseline";
  j["featurizer"] = featurizer->to_json();
  j["dim"] = softmax.dim();
  auto w = ordered_json::array();
  for (Eigen::Index r = 0; r < 3; ++r) {
    std::vector<double> row(softmax.weights.row(r).begin(), softmax.weights.row(r).end());
    w.push_back(row);
  }
  j["weights"] = std::move(w);
  j["bias"] = {softmax.bias(0), softmax.bias(1), softmax.bias(2)};
  ordered_json t;
  t["epochs"] = softmax.hyperparams.epochs;
  t["learning_rate"] = softmax.hyperparams.learning_rate;
  t["l2"] = softmax.hyperparams.l2;
  t["seed"] = softmax.hyperparams.seed;
  t["final_loss"] = softmax.final_loss;
  j["training"] = std::move(t);
  return j;
}

std::string BaselineModel::dump() const { return to_json().dump() + "\n"; }

BaselineModel BaselineModel::from_json(const nlohmann::json& j, const TextResources& text) {
  BaselineModel m;
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion) {
      throw ParseError("unsupported model schema version " + std::to_string(version));
    }
    m.featurizer = featurizer_from_json(j.at("featurizer"), text);
    const auto dim = j.at("dim").get<std::size_t>();
    if (dim != m.featurizer->dim()) throw ParseError("model dim does not match its featurizer");
    m.softmax = SoftmaxModel::zeros(dim);
    const auto& w = j.at("weights");
    if (w.size() != 3) throw ParseError("model weights must have three rows");
    for (Eigen::Index r = 0; r < 3; ++r) {
      auto row = w[static_cast<std::size_t>(r)].get<std::vector<double>>();
      if (row.size() != dim) throw ParseError("model weight row has the wrong length");
      for (std::size_t c = 0; c < dim; ++c) m.softmax.weights(r, static_cast<Eigen::Index>(c)) = row[c];
    }
    auto bias = j.at("bias").get<std::vector<double>>();
    if (bias.size() != 3) throw ParseError("model bias must have three entries");
    m.softmax.bias = Eigen::Vector3d(bias[0], bias[1], bias[2]);
    const auto& t = j.at("training");
    m.softmax.hyperparams.epochs = t.at("epochs").get<int>();
    m.softmax.hyperparams.learning_rate = t.at("learning_rate").get<double>();
    m.softmax.hyperparams.l2 = t.at("l2").get<double>();
    m.softmax.hyperparams.seed = t.at("seed").get<std::uint64_t>();
    m.softmax.final_loss = t.at("final_loss").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  if (!m.softmax.weights.allFinite() || !m.softmax.bias.allFinite()) {
    throw ValidationError("model file holds non-finite parameters");
  }
  return m;
}

BaselineModel BaselineModel::load(const std::filesystem::path& path, const TextResources& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return from_json(j, text);
}

BaselineModel train_baseline(std::unique_ptr<Featurizer> featurizer,
                             std::span<const NLIItem> train, const SoftmaxHyperparams& hp) {
  if (train.empty()) throw ConfigError("training set is empty");
  featurizer->fit(train);
  std::vector<FeatureVector> x(train.size());
  std::vector<Label3> y(train.size());
  const auto n = static_cast<std::ptrdiff_t>(train.size());
  const Featurizer& f = *featurizer;
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    x[u] = f.transform(train[u].premise, train[u].hypothesis);
    y[u] = train[u].label;
  }
  BaselineModel m;
  m.softmax = train_softmax(x, y, hp);
  m.featurizer = std::move(featurizer);
  return m;
}

std::vector<ScoreDistribution> BaselineScorer::score_batch(std::span<const TextPair> pairs) {
  std::vector<ScoreDistribution> out(pairs.size());
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
  const BaselineModel& m = *model_;
#pragma omp parallel for schedule(dynamic, 32)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    out[u] = m.predict(pairs[u].premise, pairs[u].hypothesis);
  }
  return out;
}

std::string BaselineScorer::id() const { return "baseline:" + model_->featurizer->kind(); }

}  // namespace contramine
