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

#include "contramine/textrep.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "contramine/common.h"

namespace contramine {

namespace {

const std::unordered_map<std::string, double>& booster_words() {
  static const std::unordered_map<std::string, double> kBoosters = {
      {"very", 1},          {"highly", 1},       {"significantly", 1},
      {"markedly", 1},      {"substantially", 1}, {"strongly", 1},
      {"extremely", 1},     {"greatly", 1},      {"considerably", 1},
      {"remarkably", 1},    {"dramatically", 1}, {"profoundly", 1},
      {"most", 1},          {"more", 1},         {"particularly", 1},
      {"slightly", -1},     {"marginally", -1},  {"somewhat", -1},
      {"modestly", -1},     {"partially", -1},   {"barely", -1},
      {"hardly", -1},       {"minimally", -1},   {"less", -1},
      {"mildly", -1},
  };
  return kBoosters;
}

std::vector<double> read_frequencies(const std::filesystem::path& path,
                                     const std::vector<std::string>& words,
                                     const std::unordered_map<std::string, std::size_t>& index) {
  std::istringstream in(read_file(path));
  std::vector<double> freq(words.size(), 0.0);
  double total = 0.0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string word;
    double value = 0.0;
    if (!(ls >> word >> value) || value < 0.0 || !std::isfinite(value)) {
      throw ParseError(path.string() + " line " + std::to_string(lineno) +
                       ": expected \"word value\"");
    }
    total += value;
    if (auto it = index.find(word); it != index.end()) freq[it->second] += value;
  }
  if (total > 0.0) {
    for (double& f : freq) f /= total;
  }
  return freq;
}

}  // namespace

// ---------------------------------------------------------------------------

WordVectors::WordVectors(std::vector<std::string> words, RowMatrix matrix,
                         std::vector<double> freq)
    : words_(std::move(words)), matrix_(std::move(matrix)), freq_(std::move(freq)) {
  if (matrix_.cols() < 1) throw ValidationError("word vectors need dim >= 1");
  if (static_cast<std::size_t>(matrix_.rows()) != words_.size()) {
    throw ValidationError("word vector matrix rows do not match vocabulary size");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw ValidationError("duplicate word \"" + words_[i] + "\" in word vectors");
    }
  }
  if (freq_.empty()) {
    freq_.assign(words_.size(), words_.empty() ? 0.0 : 1.0 / static_cast<double>(words_.size()));
  } else if (freq_.size() != words_.size()) {
    throw ValidationError("frequency table size does not match vocabulary size");
  }
  double sum = 0.0;
  for (double f : freq_) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("word frequency outside [0, 1]");
    sum += f;
  }
  if (sum > 1.0 + 1e-9) throw ValidationError("word frequencies sum above 1");
}

WordVectors WordVectors::load(const std::filesystem::path& path,
                              const std::optional<std::filesystem::path>& freq_path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + " line 1: missing header");
  std::size_t n = 0;
  std::size_t dim = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> n >> dim) || dim == 0) {
      throw ParseError(path.string() + " line 1: expected header \"N dim\"");
    }
  }
  std::vector<std::string> words;
  words.reserve(n);
  RowMatrix matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  std::size_t lineno = 1;
  while (words.size() < n && std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<double> values;
    values.reserve(dim);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(path.string() + " line " + std::to_string(lineno) +
                         ": bad number \"" + tok + "\"");
      }
    }
    if (values.size() != dim) {
      throw ParseError(path.string() + " line " + std::to_string(lineno) + ": expected " +
                       std::to_string(dim) + " values, got " + std::to_string(values.size()));
    }
    const auto row = static_cast<Eigen::Index>(words.size());
    for (std::size_t k = 0; k < dim; ++k) matrix(row, static_cast<Eigen::Index>(k)) = values[k];
    words.push_back(std::move(word));
  }
  if (words.size() != n) {
    throw ParseError(path.string() + ": header promises " + std::to_string(n) +
                     " rows, found " + std::to_string(words.size()));
  }

  std::optional<std::filesystem::path> sidecar = freq_path;
  if (!sidecar) {
    auto guess = path;
    guess += ".freq";
    if (std::filesystem::exists(guess)) sidecar = guess;
  }
  std::vector<double> freq;
  if (sidecar) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);
    freq = read_frequencies(*sidecar, words, index);
  }
  return WordVectors(std::move(words), std::move(matrix), std::move(freq));
}

std::optional<std::size_t> WordVectors::index_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double WordVectors::frequency(std::string_view word) const {
  auto i = index_of(word);
  return i ? freq_[*i] : 0.0;
}

// ---------------------------------------------------------------------------

ComponentBasis ComponentBasis::with_unit_weights() const {
  ComponentBasis out = *this;
  std::fill(out.weights.begin(), out.weights.end(), 1.0);
  return out;
}

nlohmann::ordered_json ComponentBasis::to_json() const {
  nlohmann::ordered_json j;
  j["n_components"] = weights.size();
  j["dim"] = directions.cols();
  j["weights"] = weights;
  auto dirs = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < directions.rows(); ++r) {
    std::vector<double> row(directions.row(r).begin(), directions.row(r).end());
    dirs.push_back(row);
  }
  j["directions"] = std::move(dirs);
  return j;
}

ComponentBasis ComponentBasis::from_json(const nlohmann::json& j) {
  try {
    ComponentBasis b;
    b.weights = j.at("weights").get<std::vector<double>>();
    const auto dim = j.at("dim").get<Eigen::Index>();
    const auto& dirs = j.at("directions");
    if (dirs.size() != b.weights.size()) throw ParseError("component basis: size mismatch");
    b.directions.resize(static_cast<Eigen::Index>(dirs.size()), dim);
    for (std::size_t r = 0; r < dirs.size(); ++r) {
      auto row = dirs[r].get<std::vector<double>>();
      if (static_cast<Eigen::Index>(row.size()) != dim) {
        throw ParseError("component basis: direction has wrong dimension");
      }
      for (Eigen::Index c = 0; c < dim; ++c) {
        b.directions(static_cast<Eigen::Index>(r), c) = row[static_cast<std::size_t>(c)];
      }
    }
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("component basis: ") + e.what());
  }
}

double usif_smoothing(const WordVectors& wv, int avg_sentence_len) {
  if (avg_sentence_len < 1) throw ConfigError("avg_sentence_len must be positive");
  const auto v = static_cast<double>(wv.size());
  if (v <= 1.0) return 1.0;
  // A word is "frequent" when it is expected to show up at least once in a
  // sentence of the average length.
  const double threshold = 1.0 - std::pow(1.0 - 1.0 / v, avg_sentence_len);
  const auto& freq = wv.frequencies();
  const auto above = std::count_if(freq.begin(), freq.end(),
                                   [&](double f) { return f > threshold; });
  double alpha = static_cast<double>(above) / v;
  alpha = std::clamp(alpha, 1.0 / v, 1.0 - 1.0 / v);
  const double z = 0.5 * v;
  return (1.0 - alpha) / (alpha * z);
}

SentenceEmbedding usif_embed(std::string_view text, const WordVectors& wv,
                             const UsifParams& params) {
  if (params.n_components < 0) throw ConfigError("n_components must be >= 0");
  return SentenceEncoder(wv, params).embed_raw(text);
}

ComponentBasis fit_common_components(std::span<const SentenceEmbedding> embeddings,
                                     std::size_t m) {
  if (m > embeddings.size()) {
    throw ConfigError("cannot fit " + std::to_string(m) + " components from " +
                      std::to_string(embeddings.size()) + " embeddings");
  }
  ComponentBasis basis;
  if (m == 0) return basis;
  const auto dim = embeddings.front().vector.size();
  if (static_cast<std::size_t>(dim) < m) {
    throw ConfigError("cannot fit more components than the embedding dimension");
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& e : embeddings) {
    if (e.vector.size() != dim) throw ValidationError("embedding dimension mismatch");
    gram.selfadjointView<Eigen::Lower>().rankUpdate(e.vector);
  }
  gram = gram.selfadjointView<Eigen::Lower>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  const auto& values = solver.eigenvalues();   // ascending
  const auto& vectors = solver.eigenvectors();

  basis.directions.resize(static_cast<Eigen::Index>(m), dim);
  basis.weights.resize(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Index col = dim - 1 - static_cast<Eigen::Index>(i);
    Eigen::VectorXd u = vectors.col(col).normalized();
    Eigen::Index pivot = 0;
    u.cwiseAbs().maxCoeff(&pivot);
    if (u(pivot) < 0) u = -u;
    basis.directions.row(static_cast<Eigen::Index>(i)) = u.transpose();
    basis.weights[i] = std::max(values(col), 0.0);
    total += basis.weights[i];
  }
  for (double& w : basis.weights) w = total > 0.0 ? w / total : 0.0;
  return basis;
}

SentenceEmbedding remove_components(const SentenceEmbedding& emb,
                                    const ComponentBasis& basis) {
  SentenceEmbedding out = emb;
  if (basis.size() == 0) return out;
  if (basis.directions.cols() != emb.vector.size()) {
    throw ValidationError("component basis dimension does not match embedding");
  }
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto u = basis.directions.row(static_cast<Eigen::Index>(i)).transpose();
    out.vector -= basis.weights[i] * u.dot(emb.vector) * u;
  }
  return out;
}

double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) {
    throw ValidationError("cosine of vectors with different dimensions (" +
                          std::to_string(u.size()) + " vs " + std::to_string(v.size()) + ")");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

// ---------------------------------------------------------------------------

SentenceEncoder::SentenceEncoder(const WordVectors& wv, UsifParams params)
    : wv_(&wv), params_(params), a_(usif_smoothing(wv, params.avg_sentence_len)) {
  if (params_.n_components < 0) throw ConfigError("n_components must be >= 0");
  weights_.reserve(wv.size());
  for (double f : wv.frequencies()) weights_.push_back(a_ / (a_ + f));
}

void SentenceEncoder::fit(std::span<const std::string> texts) {
  basis_.reset();
  if (texts.empty()) return;
  auto raw = embed_batch(*this, texts);
  const std::size_t m = std::min({static_cast<std::size_t>(params_.n_components), raw.size(),
                                  wv_->dim()});
  if (m == 0) return;
  basis_ = fit_common_components(raw, m);
}

SentenceEmbedding SentenceEncoder::embed_raw(std::string_view text) const {
  SentenceEmbedding out;
  out.vector = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(wv_->dim()));
  const auto tokens = tokenize(text);
  if (tokens.empty()) return out;
  std::size_t found = 0;
  for (const auto& t : tokens) {
    auto i = wv_->index_of(t);
    if (!i) continue;
    out.vector += weights_[*i] * wv_->matrix().row(static_cast<Eigen::Index>(*i)).transpose();
    ++found;
  }
  if (found > 0) out.vector /= static_cast<double>(found);
  out.oov_fraction =
      static_cast<double>(tokens.size() - found) / static_cast<double>(tokens.size());
  return out;
}

SentenceEmbedding SentenceEncoder::embed(std::string_view text) const {
  auto raw = embed_raw(text);
  if (!basis_) return raw;
  return remove_components(raw, *basis_);
}

std::vector<SentenceEmbedding> embed_batch(const SentenceEncoder& enc,
                                           std::span<const std::string> texts) {
  std::vector<SentenceEmbedding> out(texts.size());
  const auto n = static_cast<std::ptrdiff_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = enc.embed(texts[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<SentenceEmbedding> embed_batch_serial(const SentenceEncoder& enc,
                                                  std::span<const std::string> texts) {
  std::vector<SentenceEmbedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(enc.embed(t));
  return out;
}

double topic_relevance(const Claim& claim, std::string_view topic,
                       const SentenceEncoder& enc) {
  if (trim(topic).empty()) throw ConfigError("topic must be non-empty");
  return cosine(enc.embed(claim.text).vector, enc.embed(topic).vector);
}

// ---------------------------------------------------------------------------

PolarityLexicon::PolarityLexicon(std::unordered_map<std::string, double> valence)
    : valence_(std::move(valence)) {
  for (const auto& [tok, v] : valence_) {
    if (!std::isfinite(v)) throw ValidationError("non-finite valence for \"" + tok + "\"");
  }
}

PolarityLexicon PolarityLexicon::load(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::unordered_map<std::string, double> valence;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string() + " line " + std::to_string(lineno) +
                       ": expected token<TAB>valence");
    }
    auto rest = line.substr(tab + 1);
    auto tab2 = rest.find('\t');
    if (tab2 != std::string::npos) rest.resize(tab2);
    try {
      valence[to_lower(trim(line.substr(0, tab)))] = std::stod(rest);
    } catch (const std::exception&) {
      throw ParseError(path.string() + " line " + std::to_string(lineno) + ": bad valence");
    }
  }
  return PolarityLexicon(std::move(valence));
}

std::optional<double> PolarityLexicon::valence(std::string_view token) const {
  auto it = valence_.find(std::string(token));
  if (it == valence_.end()) return std::nullopt;
  return it->second;
}

const std::unordered_set<std::string>& negation_words() {
  static const std::unordered_set<std::string> kNegations = {
      "not",    "no",      "never",  "none",   "nor",     "neither", "nobody",
      "nothing", "nowhere", "cannot", "without",
      "don",    "doesn",   "didn",    "isn",
      "wasn",   "aren",    "weren",  "hasn",   "haven",   "hadn",    "won",
      "wouldn", "shouldn", "couldn", "ain",    "neednt",  "absence",
  };
  return kNegations;
}

PolarityScore polarity(std::string_view text, const PolarityLexicon& lexicon,
                       const PolarityRules& rules) {
  const auto tokens = tokenize(text);
  const auto& negations = negation_words();
  const auto& boosters = booster_words();
  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto v = lexicon.valence(tokens[i]);
    if (!v || *v == 0.0) continue;
    double val = *v;
    bool negated = false;
    for (int d = 1; d <= rules.negation_window && static_cast<std::size_t>(d) <= i; ++d) {
      const auto& prev = tokens[i - static_cast<std::size_t>(d)];
      if (auto b = boosters.find(prev); b != boosters.end()) {
        // Boosters further away contribute less (1, 0.95, 0.9, ...).
        double scalar = rules.booster_increment * b->second * (1.0 - 0.05 * (d - 1));
        val += *v > 0 ? scalar : -scalar;
      }
      if (negations.count(prev) != 0) negated = true;
    }
    if (negated) val *= rules.negation_scalar;
    sum += val;
  }
  if (sum == 0.0) return {0.0};
  double score = sum / std::sqrt(sum * sum + rules.normalization_alpha);
  return {std::clamp(score, -1.0, 1.0)};
}

}  // namespace contramine
