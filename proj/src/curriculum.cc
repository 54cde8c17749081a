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

#include "contramine/curriculum.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "contramine/common.h"
#include "contramine/pairgen.h"

namespace contramine {

using nlohmann::ordered_json;

std::string to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(std::string_view s) {
  const auto n = to_lower(trim(s));
  if (n == "train") return Split::kTrain;
  if (n == "val" || n == "validation" || n == "dev") return Split::kVal;
  if (n == "test") return Split::kTest;
  throw ParseError("unknown split \"" + std::string(s) + "\"");
}

std::string serialize_nli(const NLIDataset& ds) {
  std::string out;
  for (const auto& it : ds.items) {
    ordered_json j;
    j["premise"] = it.premise;
    j["hypothesis"] = it.hypothesis;
    j["label"] = to_string(it.label);
    out += j.dump();
    out += '\n';
  }
  return out;
}

FieldMap FieldMap::native() { return FieldMap{}; }

FieldMap FieldMap::multinli() {
  FieldMap f;
  f.premise = "sentence1";
  f.hypothesis = "sentence2";
  f.label = "gold_label";
  return f;
}

FieldMap FieldMap::mednli() { return multinli(); }

FieldMap FieldMap::from_json(const nlohmann::json& j) {
  FieldMap f;
  f.premise = j.value("premise", f.premise);
  f.hypothesis = j.value("hypothesis", f.hypothesis);
  f.label = j.value("label", f.label);
  if (auto it = j.find("labels"); it != j.end()) {
    f.labels = it->get<std::map<std::string, std::string>>();
  }
  return f;
}

NLIDataset parse_nli_jsonl(std::string_view jsonl, const FieldMap& fields, std::string name,
                           Split split) {
  NLIDataset ds{std::move(name), split, {}};
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      const auto raw_label = j.at(fields.label).get<std::string>();
      auto mapped = fields.labels.find(raw_label);
      if (mapped == fields.labels.end()) continue;
      ds.items.push_back(NLIItem{j.at(fields.premise).get<std::string>(),
                                 j.at(fields.hypothesis).get<std::string>(),
                                 parse_label3(mapped->second)});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return ds;
}

NLIDataset load_nli_jsonl(const std::filesystem::path& path, const FieldMap& fields,
                          std::string name, Split split) {
  return parse_nli_jsonl(read_file(path), fields, std::move(name), split);
}

NLIDataset covid_nli_from_annotated(const std::vector<AnnotatedPair>& pairs,
                                    const ClaimSet& claims, Split split) {
  NLIDataset ds{"covid", split, {}};
  for (const auto& p : pairs) {
    if (!p.label6) continue;
    ds.items.push_back(NLIItem{claims.at(p.pair.a_id).text, claims.at(p.pair.b_id).text,
                               collapse_label(*p.label6)});
  }
  return ds;
}

// ---------------------------------------------------------------------------

std::vector<PicoReviewClaim> parse_pico_claims(std::string_view jsonl) {
  std::vector<PicoReviewClaim> out;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      const auto stance = to_lower(trim(j.at("stance").get<std::string>()));
      if (stance != "yes" && stance != "no") {
        throw ValidationError("line " + std::to_string(lineno) +
                              ": stance must be \"yes\" or \"no\"");
      }
      out.push_back(PicoReviewClaim{j.at("question_id").get<std::string>(), stance == "yes",
                                    j.at("text").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

QuestionSplit assign_question_splits(const std::vector<PicoReviewClaim>& claims,
                                     std::size_t n_train, std::size_t n_val,
                                     std::size_t n_test, std::uint64_t seed) {
  std::set<std::string> ids;
  for (const auto& c : claims) ids.insert(c.question_id);
  const std::size_t wanted = n_train + n_val + n_test;
  if (ids.size() != wanted) {
    throw ConfigError("question split " + std::to_string(n_train) + "/" +
                      std::to_string(n_val) + "/" + std::to_string(n_test) + " needs " +
                      std::to_string(wanted) + " distinct questions, found " +
                      std::to_string(ids.size()));
  }
  std::vector<std::string> order(ids.begin(), ids.end());
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  QuestionSplit out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out[order[i]] = i < n_train ? Split::kTrain : i < n_train + n_val ? Split::kVal : Split::kTest;
  }
  return out;
}

ManconSplits build_mancon_nli(const std::vector<PicoReviewClaim>& claims,
                              const QuestionSplit& question_split, std::uint64_t seed) {
  ManconSplits out{{"mancon", Split::kTrain, {}}, {"mancon", Split::kVal, {}},
                   {"mancon", Split::kTest, {}}};
  std::array<std::vector<const PicoReviewClaim*>, 3> members;
  for (const auto& c : claims) {
    auto it = question_split.find(c.question_id);
    if (it == question_split.end()) {
      throw ConfigError("question \"" + c.question_id + "\" has no split assignment");
    }
    members[static_cast<std::size_t>(it->second)].push_back(&c);
  }
  std::array<NLIDataset*, 3> dest{&out.train, &out.val, &out.test};
  for (std::size_t s = 0; s < 3; ++s) {
    const auto& m = members[s];
    std::vector<NLIItem> ent, con, neu;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        NLIItem item{m[i]->text, m[j]->text, Label3::kNeutral};
        if (m[i]->question_id != m[j]->question_id) {
          neu.push_back(std::move(item));
        } else if (m[i]->yes == m[j]->yes) {
          item.label = Label3::kEntailment;
          ent.push_back(std::move(item));
        } else {
          item.label = Label3::kContradiction;
          con.push_back(std::move(item));
        }
      }
    }
    const std::size_t cap = std::max(ent.size(), con.size());
    if (neu.size() > cap) neu = sample_without_replacement(neu, cap, derive_seed(seed, s));
    auto& items = dest[s]->items;
    items.insert(items.end(), ent.begin(), ent.end());
    items.insert(items.end(), con.begin(), con.end());
    items.insert(items.end(), neu.begin(), neu.end());
  }
  return out;
}

std::pair<NLIDataset, NLIDataset> split_validation_half(const NLIDataset& ds,
                                                        std::uint64_t seed) {
  if (ds.items.size() < 2) throw ConfigError("need at least two items to halve a dataset");
  const std::size_t first = (ds.items.size() + 1) / 2;
  const auto chosen = sample_indices(ds.items.size(), first, seed);
  std::vector<bool> in_first(ds.items.size(), false);
  for (auto i : chosen) in_first[i] = true;
  NLIDataset a{ds.name, Split::kVal, {}};
  NLIDataset b{ds.name, Split::kTest, {}};
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    (in_first[i] ? a : b).items.push_back(ds.items[i]);
  }
  return {std::move(a), std::move(b)};
}

std::vector<NLIItem> subsample(const NLIDataset& ds, std::size_t n, std::uint64_t seed) {
  return sample_without_replacement(ds.items, n, seed);
}

// ---------------------------------------------------------------------------

std::string to_string(CurriculumKind k) {
  switch (k) {
    case CurriculumKind::kForward: return "forward";
    case CurriculumKind::kReverse: return "reverse";
    case CurriculumKind::kShuffled: return "shuffled";
    case CurriculumKind::kCombined: return "combined";
    case CurriculumKind::kSubsequence: return "subsequence";
  }
  return "forward";
}

CurriculumKind parse_curriculum_kind(std::string_view s) {
  const auto n = to_lower(trim(s));
  if (n == "forward") return CurriculumKind::kForward;
  if (n == "reverse") return CurriculumKind::kReverse;
  if (n == "shuffled") return CurriculumKind::kShuffled;
  if (n == "combined") return CurriculumKind::kCombined;
  if (n == "subsequence") return CurriculumKind::kSubsequence;
  throw ParseError("unknown curriculum kind \"" + std::string(s) + "\"");
}

namespace {

void check_names(const std::vector<std::string>& names) {
  if (names.size() < 2) throw ConfigError("curriculum orders need at least two datasets");
  std::set<std::string> uniq(names.begin(), names.end());
  if (uniq.size() != names.size()) throw ConfigError("duplicate dataset name in curriculum");
}

}  // namespace

std::vector<std::vector<std::string>> eligible_shuffles(const std::vector<std::string>& names) {
  check_names(names);
  std::vector<std::size_t> perm(names.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::size_t> reversed(perm.rbegin(), perm.rend());
  const auto identity = perm;
  std::vector<std::vector<std::string>> out;
  do {
    if (perm == identity || perm == reversed) continue;
    std::vector<std::string> seq;
    seq.reserve(perm.size());
    for (auto i : perm) seq.push_back(names[i]);
    out.push_back(std::move(seq));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<std::vector<std::string>> enumerate_orders(const std::vector<std::string>& names,
                                                       const OrderSpec& spec) {
  check_names(names);
  switch (spec.kind) {
    case CurriculumKind::kForward:
    case CurriculumKind::kCombined:
      return {names};
    case CurriculumKind::kReverse:
      return {std::vector<std::string>(names.rbegin(), names.rend())};
    case CurriculumKind::kShuffled: {
      auto pool = eligible_shuffles(names);
      if (spec.n_shuffled > pool.size()) {
        throw ConfigError("requested " + std::to_string(spec.n_shuffled) +
                          " shuffled orders but only " + std::to_string(pool.size()) +
                          " are eligible");
      }
      return sample_without_replacement(pool, spec.n_shuffled, spec.seed);
    }
    case CurriculumKind::kSubsequence:
      return forward_subsequences(names);
  }
  return {};
}

std::vector<std::vector<std::string>> forward_subsequences(
    const std::vector<std::string>& forward) {
  if (forward.size() != 4) {
    throw ConfigError("forward subsequences need exactly four datasets, got " +
                      std::to_string(forward.size()));
  }
  std::vector<std::vector<std::string>> out;
  for (std::size_t len = forward.size(); len >= 1; --len) {
    for (std::size_t start = 0; start + len <= forward.size(); ++start) {
      out.emplace_back(forward.begin() + static_cast<std::ptrdiff_t>(start),
                       forward.begin() + static_cast<std::ptrdiff_t>(start + len));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void CurriculumManifest::validate() const {
  if (steps.empty()) throw ValidationError("manifest has no steps");
  for (const auto& s : steps) {
    if (s.sample_size < 1) throw ValidationError("manifest step has zero sample size");
  }
  if (kind == CurriculumKind::kCombined && steps.size() != 1) {
    throw ValidationError("combined manifest must have exactly one step");
  }
  if (train_params.epochs < 1 || train_params.batch_size < 1 ||
      !(train_params.learning_rate > 0.0)) {
    throw ValidationError("manifest training parameters must be positive");
  }
}

ordered_json CurriculumManifest::to_json() const {
  ordered_json j;
  j["curriculum_kind"] = to_string(kind);
  auto arr = ordered_json::array();
  for (const auto& s : steps) {
    ordered_json step;
    step["dataset"] = s.dataset;
    step["split"] = to_string(s.split);
    step["sample_size"] = s.sample_size;
    step["seed"] = s.seed;
    if (!s.parts.empty()) {
      auto parts = ordered_json::array();
      for (const auto& p : s.parts) {
        ordered_json pj;
        pj["dataset"] = p.dataset;
        pj["sample_size"] = p.sample_size;
        parts.push_back(std::move(pj));
      }
      step["parts"] = std::move(parts);
    }
    arr.push_back(std::move(step));
  }
  j["steps"] = std::move(arr);
  ordered_json tp;
  tp["epochs"] = train_params.epochs;
  tp["learning_rate"] = train_params.learning_rate;
  tp["batch_size"] = train_params.batch_size;
  j["train_params"] = std::move(tp);
  return j;
}

std::string CurriculumManifest::dump() const { return to_json().dump(2) + "\n"; }

CurriculumManifest CurriculumManifest::from_json(const nlohmann::json& j) {
  CurriculumManifest m;
  try {
    m.kind = parse_curriculum_kind(j.at("curriculum_kind").get<std::string>());
    for (const auto& s : j.at("steps")) {
      ManifestStep step;
      step.dataset = s.at("dataset").get<std::string>();
      step.split = parse_split(s.at("split").get<std::string>());
      step.sample_size = s.at("sample_size").get<std::size_t>();
      step.seed = s.at("seed").get<std::uint64_t>();
      if (auto it = s.find("parts"); it != s.end()) {
        for (const auto& p : *it) {
          step.parts.push_back(
              StepPart{p.at("dataset").get<std::string>(), p.at("sample_size").get<std::size_t>()});
        }
      }
      m.steps.push_back(std::move(step));
    }
    const auto& tp = j.at("train_params");
    m.train_params.epochs = tp.at("epochs").get<int>();
    m.train_params.learning_rate = tp.at("learning_rate").get<double>();
    m.train_params.batch_size = tp.at("batch_size").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  m.validate();
  return m;
}

std::size_t ratio_sample_size(double r, std::size_t d, std::size_t k, std::size_t i,
                              std::size_t dataset_size) {
  if (i < 1 || i > k) throw ConfigError("step index out of range");
  long double v = static_cast<long double>(d);
  for (std::size_t e = 0; e < k - i; ++e) {
    v *= static_cast<long double>(r);
    if (v >= static_cast<long double>(dataset_size)) return dataset_size;
  }
  return std::min(static_cast<std::size_t>(v), dataset_size);
}

CurriculumManifest plan_curriculum(const std::map<std::string, std::size_t>& train_sizes,
                                   const std::vector<std::string>& order, double r,
                                   std::size_t d, const TrainParams& params, std::uint64_t seed,
                                   CurriculumKind kind) {
  if (!(r >= 1.0)) throw ConfigError("data ratio r must be >= 1");
  if (d < 1) throw ConfigError("base size d must be >= 1");
  if (order.empty()) throw ConfigError("curriculum order is empty");
  for (const auto& name : order) {
    if (train_sizes.find(name) == train_sizes.end()) {
      throw ConfigError("unknown dataset \"" + name + "\"");
    }
  }
  CurriculumManifest m;
  m.kind = kind;
  m.train_params = params;
  const std::size_t k = order.size();
  for (std::size_t i = 1; i <= k; ++i) {
    const auto& name = order[i - 1];
    m.steps.push_back(ManifestStep{name, Split::kTrain,
                                   ratio_sample_size(r, d, k, i, train_sizes.at(name)),
                                   derive_seed(seed, i), {}});
  }
  if (kind == CurriculumKind::kCombined) {
    ManifestStep combined{"", Split::kTrain, 0, derive_seed(seed, 0), {}};
    for (const auto& s : m.steps) {
      if (!combined.dataset.empty()) combined.dataset += "+";
      combined.dataset += s.dataset;
      combined.sample_size += s.sample_size;
      combined.parts.push_back(StepPart{s.dataset, s.sample_size});
    }
    m.steps = {std::move(combined)};
  }
  m.validate();
  return m;
}

std::vector<std::vector<NLIItem>> materialize(const CurriculumManifest& manifest,
                                              const std::map<std::string, NLIDataset>& datasets) {
  auto lookup = [&](const std::string& name) -> const NLIDataset& {
    auto it = datasets.find(name);
    if (it == datasets.end()) throw ConfigError("manifest references unknown dataset \"" + name + "\"");
    return it->second;
  };
  std::vector<std::vector<NLIItem>> out;
  for (const auto& step : manifest.steps) {
    if (step.parts.empty()) {
      out.push_back(subsample(lookup(step.dataset), step.sample_size, step.seed));
      continue;
    }
    std::vector<NLIItem> items;
    for (std::size_t p = 0; p < step.parts.size(); ++p) {
      auto part = subsample(lookup(step.parts[p].dataset), step.parts[p].sample_size,
                            derive_seed(step.seed, p + 1));
      items.insert(items.end(), part.begin(), part.end());
    }
    std::mt19937_64 rng(step.seed);
    std::shuffle(items.begin(), items.end(), rng);
    out.push_back(std::move(items));
  }
  return out;
}

std::vector<CurriculumManifest> plan_hyperparameter_grid(const std::vector<double>& lrs,
                                                         const std::vector<int>& batch_sizes,
                                                         const CurriculumManifest& base) {
  if (lrs.empty() || batch_sizes.empty()) {
    throw ConfigError("hyperparameter grid needs at least one learning rate and batch size");
  }
  std::vector<CurriculumManifest> out;
  out.reserve(lrs.size() * batch_sizes.size());
  for (double lr : lrs) {
    for (int b : batch_sizes) {
      CurriculumManifest m = base;
      m.train_params.learning_rate = lr;
      m.train_params.batch_size = b;
      m.validate();
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<double> sweep_learning_rates() { return {5e-6, 1e-5, 3e-5, 5e-5, 1e-4, 3e-4}; }

std::vector<int> sweep_batch_sizes() { return {4, 8, 16, 32}; }

}  // namespace contramine
