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

#include "contramine/pairgen.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "contramine/common.h"

namespace contramine {

using nlohmann::ordered_json;

std::string pair_key(std::string_view a_id, std::string_view b_id) {
  std::string k;
  k.reserve(a_id.size() + b_id.size() + 2);
  k.append(a_id).append("::").append(b_id);
  return k;
}

std::string ClaimPair::key() const { return pair_key(a_id, b_id); }

ClaimPair make_claim_pair(std::string x_id, std::string y_id, std::string drug,
                          std::string topic, double x_pol, double y_pol) {
  if (x_id == y_id) throw ValidationError("pair of claim \"" + x_id + "\" with itself");
  if (y_id < x_id) {
    std::swap(x_id, y_id);
    std::swap(x_pol, y_pol);
  }
  return ClaimPair{std::move(x_id), std::move(y_id), std::move(drug), std::move(topic),
                   x_pol, y_pol};
}

ordered_json pair_to_json(const ClaimPair& p) {
  ordered_json j;
  j["a_id"] = p.a_id;
  j["b_id"] = p.b_id;
  j["drug"] = p.drug;
  j["topic"] = p.topic;
  j["a_pol"] = p.a_pol;
  j["b_pol"] = p.b_pol;
  return j;
}

ClaimPair pair_from_json(const nlohmann::json& j) {
  try {
    return make_claim_pair(j.at("a_id").get<std::string>(), j.at("b_id").get<std::string>(),
                           j.value("drug", std::string()), j.value("topic", std::string()),
                           j.value("a_pol", 0.0), j.value("b_pol", 0.0));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("claim pair: ") + e.what());
  }
}

std::string serialize_pairs(const std::vector<ClaimPair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += pair_to_json(p).dump();
    out += '\n';
  }
  return out;
}

std::vector<ClaimPair> parse_pairs(std::string_view jsonl) {
  std::vector<ClaimPair> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(pair_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                        std::uint64_t seed) {
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n >= population) return idx;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, population - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// ---------------------------------------------------------------------------

ClaimFeatureTable compute_claim_features(const ClaimSet& claims, const TextResources& text) {
  if (text.encoder == nullptr || text.lexicon == nullptr) {
    throw ConfigError("sampler needs both a sentence encoder and a polarity lexicon");
  }
  ClaimFeatureTable t;
  std::vector<std::string> texts;
  texts.reserve(claims.size());
  for (const auto& c : claims) {
    texts.push_back(c.text);
    t.lowered_text.push_back(to_lower(c.text));
    t.normalized_text.push_back(normalize_whitespace(c.text));
  }
  t.polarity.resize(claims.size());
  const auto n = static_cast<std::ptrdiff_t>(claims.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    t.polarity[u] = polarity(texts[u], *text.lexicon).value;
  }
  t.embedding = embed_batch(*text.encoder, texts);
  return t;
}

namespace {

struct Ranked {
  double relevance;
  std::size_t claim;
};

// Candidate pairs of one (drug, topic) cell.
std::vector<ClaimPair> cell_pairs(const ClaimSet& claims, const ClaimFeatureTable& t,
                                  const std::string& drug, const std::string& topic,
                                  const Eigen::VectorXd& topic_vec, std::size_t k) {
  std::vector<Ranked> pos;
  std::vector<Ranked> neg;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (!contains_ci(t.lowered_text[i], drug)) continue;
    const double pol = t.polarity[i];
    if (pol == 0.0) continue;
    Ranked r{cosine(t.embedding[i].vector, topic_vec), i};
    (pol > 0.0 ? pos : neg).push_back(r);
  }
  auto top_k = [&](std::vector<Ranked>& v) {
    std::sort(v.begin(), v.end(), [&](const Ranked& x, const Ranked& y) {
      if (x.relevance != y.relevance) return x.relevance > y.relevance;
      return claims[x.claim].id < claims[y.claim].id;
    });
    if (v.size() > k) v.resize(k);
  };
  top_k(pos);
  top_k(neg);

  std::vector<std::size_t> chosen;
  for (const auto& r : pos) chosen.push_back(r.claim);
  for (const auto& r : neg) chosen.push_back(r.claim);

  std::vector<ClaimPair> out;
  for (std::size_t x = 0; x < chosen.size(); ++x) {
    for (std::size_t y = x + 1; y < chosen.size(); ++y) {
      const auto i = chosen[x];
      const auto j = chosen[y];
      if (t.normalized_text[i] == t.normalized_text[j]) continue;
      out.push_back(make_claim_pair(claims[i].id, claims[j].id, drug, topic, t.polarity[i],
                                    t.polarity[j]));
    }
  }
  return out;
}

std::vector<ClaimPair> union_cells(std::vector<std::vector<ClaimPair>> cells) {
  std::map<std::string, ClaimPair> pool;
  for (auto& cell : cells) {
    for (auto& p : cell) {
      auto key = p.key();
      pool.try_emplace(std::move(key), std::move(p));
    }
  }
  std::vector<ClaimPair> out;
  out.reserve(pool.size());
  for (auto& [key, p] : pool) out.push_back(std::move(p));
  return out;
}

struct CellGrid {
  std::vector<std::pair<const std::string*, const std::string*>> cells;
  std::vector<Eigen::VectorXd> topic_vecs;
};

CellGrid make_grid(const DrugLexicon& drugs, const TopicLexicon& topics,
                   const TextResources& text) {
  CellGrid g;
  for (const auto& t : topics.topics()) g.topic_vecs.push_back(text.encoder->embed(t).vector);
  for (const auto& d : drugs.drugs()) {
    for (const auto& t : topics.topics()) g.cells.emplace_back(&d, &t);
  }
  return g;
}

}  // namespace

std::vector<ClaimPair> candidate_pair_pool(const ClaimSet& claims, const DrugLexicon& drugs,
                                           const TopicLexicon& topics,
                                           const TextResources& text, std::size_t k) {
  if (k < 1) throw ConfigError("sampler k must be >= 1");
  const auto table = compute_claim_features(claims, text);
  const auto grid = make_grid(drugs, topics, text);
  const std::size_t n_topics = topics.size();
  std::vector<std::vector<ClaimPair>> cells(grid.cells.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    const auto u = static_cast<std::size_t>(c);
    cells[u] = cell_pairs(claims, table, *grid.cells[u].first, *grid.cells[u].second,
                          grid.topic_vecs[u % n_topics], k);
  }
  return union_cells(std::move(cells));
}

std::vector<ClaimPair> candidate_pair_pool_serial(const ClaimSet& claims,
                                                  const DrugLexicon& drugs,
                                                  const TopicLexicon& topics,
                                                  const TextResources& text, std::size_t k) {
  if (k < 1) throw ConfigError("sampler k must be >= 1");
  const auto table = compute_claim_features(claims, text);
  const auto grid = make_grid(drugs, topics, text);
  const std::size_t n_topics = topics.size();
  std::vector<std::vector<ClaimPair>> cells;
  for (std::size_t c = 0; c < grid.cells.size(); ++c) {
    cells.push_back(cell_pairs(claims, table, *grid.cells[c].first, *grid.cells[c].second,
                               grid.topic_vecs[c % n_topics], k));
  }
  return union_cells(std::move(cells));
}

std::vector<ClaimPair> sample_candidate_pairs(const ClaimSet& claims, const DrugLexicon& drugs,
                                              const TopicLexicon& topics,
                                              const TextResources& text,
                                              const SamplerConfig& cfg) {
  if (cfg.n < 1) throw ConfigError("sampler n must be >= 1");
  if (drugs.size() == 0 || topics.size() == 0) {
    throw ConfigError("sampler needs non-empty drug and topic lexicons");
  }
  auto pool = candidate_pair_pool(claims, drugs, topics, text, cfg.k);
  return sample_without_replacement(pool, cfg.n, cfg.seed);
}

// ---------------------------------------------------------------------------

std::size_t ClaimGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == nodes_.end() || *it != id) return npos;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::size_t> ClaimGraph::components() const {
  std::vector<std::size_t> parent(nodes_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [a, b] : edges_) {
    auto ra = find(a);
    auto rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::vector<std::size_t> label(nodes_.size());
  std::unordered_map<std::size_t, std::size_t> dense;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto [it, fresh] = dense.emplace(find(i), dense.size());
    label[i] = it->second;
  }
  return label;
}

std::size_t ClaimGraph::component_count() const {
  auto labels = components();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

ClaimGraph build_claim_graph(const std::vector<ClaimPair>& pairs) {
  ClaimGraph g;
  std::set<std::string> ids;
  for (const auto& p : pairs) {
    if (p.a_id == p.b_id) throw ValidationError("self-loop on claim \"" + p.a_id + "\"");
    ids.insert(p.a_id);
    ids.insert(p.b_id);
  }
  g.nodes_.assign(ids.begin(), ids.end());
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& p : pairs) {
    auto a = g.index_of(p.a_id);
    auto b = g.index_of(p.b_id);
    edges.emplace(std::min(a, b), std::max(a, b));
  }
  g.edges_.assign(edges.begin(), edges.end());
  return g;
}

ordered_json SplitAssignment::to_json() const {
  ordered_json j;
  j["train"] = train;
  j["val"] = val;
  j["test"] = test;
  return j;
}

SplitAssignment SplitAssignment::from_json(const nlohmann::json& j) {
  try {
    SplitAssignment s;
    s.train = j.at("train").get<std::vector<std::string>>();
    s.val = j.at("val").get<std::vector<std::string>>();
    s.test = j.at("test").get<std::vector<std::string>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("split assignment: ") + e.what());
  }
}

SplitAssignment split_by_components(const ClaimGraph& graph, const std::vector<ClaimPair>& pairs,
                                    const SplitRatios& ratios, std::uint64_t seed) {
  const std::array<double, 3> target_share{ratios.train, ratios.val, ratios.test};
  for (double r : target_share) {
    if (!(r > 0.0)) throw ConfigError("split ratios must be positive");
  }
  if (std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }

  const auto label = graph.components();
  const std::size_t n_comp = graph.component_count();
  if (n_comp < 3) throw ValidationError("insufficient components for disjoint split");

  // Distinct pairs grouped by component.
  std::vector<std::vector<std::string>> comp_pairs(n_comp);
  std::set<std::string> seen;
  for (const auto& p : pairs) {
    const auto a = graph.index_of(p.a_id);
    const auto b = graph.index_of(p.b_id);
    if (a == ClaimGraph::npos || b == ClaimGraph::npos) {
      throw ValidationError("pair " + p.key() + " references a claim outside the graph");
    }
    if (!seen.insert(p.key()).second) continue;
    comp_pairs[label[a]].push_back(p.key());
  }

  std::vector<std::size_t> order(n_comp);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return comp_pairs[x].size() > comp_pairs[y].size();
  });

  const auto total = static_cast<double>(seen.size());
  std::array<double, 3> assigned{0.0, 0.0, 0.0};
  std::array<std::vector<std::string>*, 3> dest{};
  SplitAssignment out;
  dest = {&out.train, &out.val, &out.test};
  for (std::size_t c : order) {
    std::size_t best = 0;
    double best_deficit = target_share[0] * total - assigned[0];
    for (std::size_t s = 1; s < 3; ++s) {
      const double deficit = target_share[s] * total - assigned[s];
      if (deficit > best_deficit) {
        best = s;
        best_deficit = deficit;
      }
    }
    assigned[best] += static_cast<double>(comp_pairs[c].size());
    dest[best]->insert(dest[best]->end(), comp_pairs[c].begin(), comp_pairs[c].end());
  }
  for (auto* v : dest) std::sort(v->begin(), v->end());
  verify_split(out, pairs);
  return out;
}

void verify_split(const SplitAssignment& split, const std::vector<ClaimPair>& pairs) {
  std::unordered_map<std::string, const ClaimPair*> by_key;
  for (const auto& p : pairs) by_key.emplace(p.key(), &p);

  std::unordered_map<std::string, int> claim_split;
  std::unordered_set<std::string> placed;
  const std::array<const std::vector<std::string>*, 3> parts{&split.train, &split.val,
                                                             &split.test};
  for (int s = 0; s < 3; ++s) {
    for (const auto& key : *parts[static_cast<std::size_t>(s)]) {
      auto it = by_key.find(key);
      if (it == by_key.end()) throw ValidationError("split lists unknown pair " + key);
      if (!placed.insert(key).second) throw ValidationError("pair " + key + " placed twice");
      for (const auto* id : {&it->second->a_id, &it->second->b_id}) {
        auto [c, fresh] = claim_split.emplace(*id, s);
        if (!fresh && c->second != s) {
          throw ValidationError("claim \"" + *id + "\" appears in two splits");
        }
      }
    }
  }
  if (placed.size() != by_key.size()) throw ValidationError("split is missing pairs");
}

}  // namespace contramine
