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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "contramine/curriculum.h"
#include "oracles.h"

namespace contramine {
namespace {

using Orders = std::vector<std::vector<std::string>>;

std::size_t count_label(const NLIDataset& ds, Label3 l) {
  std::size_t n = 0;
  for (const auto& it : ds.items) n += it.label == l ? 1 : 0;
  return n;
}

TEST(Mancon, PairingRules) {
  const std::vector<PicoReviewClaim> claims = {
      {"q1", true, "yes one"}, {"q1", true, "yes two"}, {"q1", false, "no one"}};
  const QuestionSplit qs = {{"q1", Split::kTrain}};
  const auto out = build_mancon_nli(claims, qs, 0);
  ASSERT_EQ(out.train.items.size(), 3u);
  EXPECT_EQ(out.train.items[0], (NLIItem{"yes one", "yes two", Label3::kEntailment}));
  EXPECT_EQ(count_label(out.train, Label3::kContradiction), 2u);
  EXPECT_TRUE(out.val.items.empty());
}

TEST(Mancon, NeutralDownsampledToNextLargest) {
  // q1: 2 yes + 2 no -> E 2, C 4. q2: 1 yes + 1 no -> C 1. q3: 2 yes -> E 1.
  // So E = 3, C = 5 and 20 cross-question neutral pairs before downsampling.
  std::vector<PicoReviewClaim> claims = {
      {"q1", true, "a"}, {"q1", true, "b"}, {"q1", false, "c"}, {"q1", false, "d"},
      {"q2", true, "e"}, {"q2", false, "f"}, {"q3", true, "g"}, {"q3", true, "h"}};
  const QuestionSplit qs = {{"q1", Split::kTrain}, {"q2", Split::kTrain}, {"q3", Split::kTrain}};
  const auto out = build_mancon_nli(claims, qs, 5);
  EXPECT_EQ(count_label(out.train, Label3::kEntailment), 3u);
  EXPECT_EQ(count_label(out.train, Label3::kContradiction), 5u);
  EXPECT_EQ(count_label(out.train, Label3::kNeutral), 5u);
  EXPECT_EQ(build_mancon_nli(claims, qs, 5).train.items, out.train.items);
}

std::vector<PicoReviewClaim> synthetic_pico(std::size_t questions, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PicoReviewClaim> out;
  for (std::size_t q = 0; q < questions; ++q) {
    const std::size_t n = 2 + rng() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({"Q" + std::to_string(q), rng() % 2 == 0,
                     "claim " + std::to_string(q) + "." + std::to_string(i)});
    }
  }
  return out;
}

TEST(Mancon, TwentyQuestionsNoLeakage) {
  const auto claims = synthetic_pico(20, 8);
  const auto qs = assign_question_splits(claims, 12, 4, 4, 1);
  std::map<Split, std::size_t> per;
  for (const auto& [q, s] : qs) per[s] += 1;
  EXPECT_EQ(per[Split::kTrain], 12u);
  EXPECT_EQ(per[Split::kVal], 4u);
  EXPECT_EQ(per[Split::kTest], 4u);
  const auto out = build_mancon_nli(claims, qs, 2);
  std::map<std::string, std::string> text_to_q;
  for (const auto& c : claims) text_to_q[c.text] = c.question_id;
  std::map<std::string, std::set<Split>> where;
  for (const auto* ds : {&out.train, &out.val, &out.test}) {
    for (const auto& it : ds->items) {
      where[text_to_q.at(it.premise)].insert(ds->split);
      where[text_to_q.at(it.hypothesis)].insert(ds->split);
    }
    const auto e = count_label(*ds, Label3::kEntailment);
    const auto c = count_label(*ds, Label3::kContradiction);
    EXPECT_LE(count_label(*ds, Label3::kNeutral), std::max(e, c));
  }
  for (const auto& [q, s] : where) EXPECT_EQ(s.size(), 1u) << q;
  EXPECT_THROW(assign_question_splits(synthetic_pico(16, 8), 12, 4, 4, 1), ConfigError);
  EXPECT_THROW(assign_question_splits(synthetic_pico(21, 8), 12, 4, 4, 1), ConfigError);
  EXPECT_THROW(build_mancon_nli(claims, {}, 0), ConfigError);
}

TEST(Mancon, ParseClaims) {
  const auto c = parse_pico_claims(
      R"({"question_id":"q1","stance":"yes","text":"t"})"
      "\n"
      R"({"question_id":"q1","stance":"NO","text":"u"})"
      "\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_TRUE(c[0].yes);
  EXPECT_FALSE(c[1].yes);
  EXPECT_THROW(parse_pico_claims(R"({"question_id":"q","stance":"maybe","text":"t"})"), Error);
}

NLIDataset numbered(std::size_t n, std::string name = "d") {
  NLIDataset ds{std::move(name), Split::kTrain, {}};
  for (std::size_t i = 0; i < n; ++i) {
    ds.items.push_back({"p" + std::to_string(i), "h" + std::to_string(i),
                        static_cast<Label3>(i % 3)});
  }
  return ds;
}

TEST(Halves, SizesAndDeterminism) {
  auto [a, b] = split_validation_half(numbered(10), 3);
  EXPECT_EQ(a.items.size(), 5u);
  EXPECT_EQ(b.items.size(), 5u);
  auto [c, d] = split_validation_half(numbered(11), 3);
  EXPECT_EQ(c.items.size(), 6u);
  EXPECT_EQ(d.items.size(), 5u);
  EXPECT_EQ(split_validation_half(numbered(11), 3).first.items, c.items);
  std::set<std::string> all;
  for (const auto& it : c.items) all.insert(it.premise);
  for (const auto& it : d.items) all.insert(it.premise);
  EXPECT_EQ(all.size(), 11u);
  EXPECT_THROW(split_validation_half(numbered(1), 0), ConfigError);
}

const std::vector<std::string> kForward = {"multinli", "mednli", "mancon", "covid"};

TEST(Orders, ForwardReverseCombined) {
  EXPECT_EQ(enumerate_orders(kForward, {CurriculumKind::kForward}), Orders{kForward});
  EXPECT_EQ(enumerate_orders(kForward, {CurriculumKind::kReverse}),
            (Orders{{"covid", "mancon", "mednli", "multinli"}}));
  EXPECT_EQ(enumerate_orders(kForward, {CurriculumKind::kCombined}).size(), 1u);
  EXPECT_THROW(enumerate_orders({"a"}, {}), ConfigError);
}

TEST(Orders, TwentyTwoShuffles) {
  const auto pool = eligible_shuffles(kForward);
  EXPECT_EQ(pool.size(), 22u);
  std::set<std::vector<std::string>> uniq(pool.begin(), pool.end());
  EXPECT_EQ(uniq.size(), 22u);
  EXPECT_FALSE(uniq.count(kForward));
  EXPECT_FALSE(uniq.count({"covid", "mancon", "mednli", "multinli"}));
  const auto all = enumerate_orders(kForward, {CurriculumKind::kShuffled, 22, 4});
  EXPECT_EQ(std::set<std::vector<std::string>>(all.begin(), all.end()), uniq);
  const auto four = enumerate_orders(kForward, {CurriculumKind::kShuffled, 4, 9});
  EXPECT_EQ(four.size(), 4u);
  EXPECT_EQ(enumerate_orders(kForward, {CurriculumKind::kShuffled, 4, 9}), four);
  EXPECT_THROW(enumerate_orders(kForward, {CurriculumKind::kShuffled, 23, 0}), ConfigError);
  EXPECT_THROW(enumerate_orders({"a", "b"}, {CurriculumKind::kShuffled, 1, 0}), ConfigError);
}

TEST(Orders, Subsequences) {
  const auto subs = forward_subsequences({"A", "B", "C", "D"});
  EXPECT_EQ(subs, (Orders{{"A", "B", "C", "D"},
                          {"A", "B", "C"},
                          {"B", "C", "D"},
                          {"A", "B"},
                          {"B", "C"},
                          {"C", "D"},
                          {"A"},
                          {"B"},
                          {"C"},
                          {"D"}}));
  EXPECT_THROW(forward_subsequences({"A", "B", "C"}), ConfigError);
}

std::map<std::string, std::size_t> big_sizes() {
  return {{"multinli", 392702}, {"mednli", 11232}, {"mancon", 5000}, {"covid", 700}};
}

TEST(Plan, RatioTwo) {
  const auto m = plan_curriculum(big_sizes(), kForward, 2.0, 500, {}, 1);
  ASSERT_EQ(m.steps.size(), 4u);
  std::vector<std::size_t> sizes;
  for (const auto& s : m.steps) sizes.push_back(s.sample_size);
  EXPECT_EQ(sizes, (std::vector<std::size_t>{4000, 2000, 1000, 500}));
  EXPECT_EQ(m.steps[0].dataset, "multinli");
  EXPECT_EQ(m.train_params, TrainParams{});
}

TEST(Plan, RatioOneAndCaps) {
  auto sizes = big_sizes();
  sizes["covid"] = 321;
  const auto m = plan_curriculum(sizes, kForward, 1.0, 500, {}, 1);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(m.steps[i].sample_size, 500u);
  EXPECT_EQ(m.steps[3].sample_size, 321u);
  const auto one = plan_curriculum(sizes, {"covid"}, 2.0, 500, {}, 1);
  ASSERT_EQ(one.steps.size(), 1u);
  EXPECT_EQ(one.steps[0].sample_size, 321u);
}

TEST(Plan, MatchesDirectFormula) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    std::map<std::string, std::size_t> sizes;
    for (const auto& n : kForward) sizes[n] = 1 + rng() % 6000;
    for (std::size_t r : {1u, 2u}) {
      for (std::size_t k = 1; k <= 4; ++k) {
        const std::vector<std::string> order(kForward.begin(), kForward.begin() + k);
        const auto m = plan_curriculum(sizes, order, static_cast<double>(r), 500, {}, 3);
        for (std::size_t i = 1; i <= k; ++i) {
          EXPECT_EQ(m.steps[i - 1].sample_size,
                    oracle::ratio_size(r, 500, k, i, sizes[order[i - 1]]));
        }
      }
    }
  }
}

TEST(Plan, Errors) {
  EXPECT_THROW(plan_curriculum(big_sizes(), {"snli"}, 2.0, 500, {}, 0), ConfigError);
  EXPECT_THROW(plan_curriculum(big_sizes(), kForward, 0.5, 500, {}, 0), ConfigError);
  EXPECT_THROW(plan_curriculum(big_sizes(), kForward, 2.0, 0, {}, 0), ConfigError);
  EXPECT_THROW(plan_curriculum(big_sizes(), {}, 2.0, 500, {}, 0), ConfigError);
  EXPECT_THROW(ratio_sample_size(2.0, 500, 4, 5, 100), ConfigError);
}

TEST(Plan, CombinedSingleStepWithParts) {
  const auto m = plan_curriculum(big_sizes(), kForward, 2.0, 500, {}, 1, CurriculumKind::kCombined);
  ASSERT_EQ(m.steps.size(), 1u);
  EXPECT_EQ(m.steps[0].sample_size, 7500u);
  EXPECT_EQ(m.steps[0].parts.size(), 4u);
  EXPECT_EQ(m.steps[0].dataset, "multinli+mednli+mancon+covid");
}

TEST(Manifest, KeyOrderAndRoundTrip) {
  const auto m = plan_curriculum(big_sizes(), kForward, 2.0, 500, {}, 1);
  const auto j = m.to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"curriculum_kind", "steps", "train_params"}));
  std::vector<std::string> step_keys;
  for (const auto& [k, v] : j["steps"][0].items()) step_keys.push_back(k);
  EXPECT_EQ(step_keys, (std::vector<std::string>{"dataset", "split", "sample_size", "seed"}));
  EXPECT_EQ(CurriculumManifest::from_json(nlohmann::json::parse(m.dump())), m);
  const auto c = plan_curriculum(big_sizes(), kForward, 2.0, 500, {}, 1, CurriculumKind::kCombined);
  EXPECT_EQ(CurriculumManifest::from_json(nlohmann::json::parse(c.dump())), c);
  auto bad = m;
  bad.steps[1].sample_size = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  EXPECT_THROW(CurriculumManifest::from_json(nlohmann::json::parse("{}")), ParseError);
}

TEST(Grid, DefaultSweep) {
  const auto base = plan_curriculum(big_sizes(), kForward, 2.0, 500, {}, 1);
  const auto grid = plan_hyperparameter_grid(sweep_learning_rates(), sweep_batch_sizes(), base);
  EXPECT_EQ(grid.size(), 24u);
  bool found = false;
  for (const auto& g : grid) {
    EXPECT_EQ(g.steps, base.steps);
    found |= g.train_params.learning_rate == 3e-5 && g.train_params.batch_size == 4;
  }
  EXPECT_TRUE(found);
  const auto one = plan_hyperparameter_grid({2e-5}, {16}, base);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].train_params, (TrainParams{4, 2e-5, 16}));
  EXPECT_THROW(plan_hyperparameter_grid({}, {4}, base), ConfigError);
}

TEST(Subsample, SeededSubsetInOrder) {
  const auto ds = numbered(100);
  const auto s = subsample(ds, 10, 4);
  EXPECT_EQ(s.size(), 10u);
  EXPECT_EQ(subsample(ds, 10, 4), s);
  EXPECT_EQ(subsample(ds, 1000, 4), ds.items);
  std::size_t pos = 0;
  for (const auto& it : s) {
    while (pos < ds.items.size() && !(ds.items[pos] == it)) ++pos;
    EXPECT_LT(pos, ds.items.size());
  }
}

TEST(Materialize, StepsAndCombined) {
  std::map<std::string, NLIDataset> data;
  for (const auto& n : kForward) data[n] = numbered(3000, n);
  const auto m = plan_curriculum(big_sizes(), kForward, 2.0, 500, {}, 1);
  const auto steps = materialize(m, data);
  ASSERT_EQ(steps.size(), 4u);
  EXPECT_EQ(steps[0].size(), 3000u);  // capped by the available items
  EXPECT_EQ(steps[3].size(), 500u);
  const auto c = plan_curriculum(big_sizes(), kForward, 1.0, 100, {}, 1, CurriculumKind::kCombined);
  const auto comb = materialize(c, data);
  ASSERT_EQ(comb.size(), 1u);
  EXPECT_EQ(comb[0].size(), 400u);
  EXPECT_EQ(materialize(c, data), comb);
  data.erase("covid");
  EXPECT_THROW(materialize(m, data), ConfigError);
}

TEST(Adapters, FieldMaps) {
  const std::string multi =
      R"({"sentence1":"a","sentence2":"b","gold_label":"entailment"})"
      "\n"
      R"({"sentence1":"c","sentence2":"d","gold_label":"-"})"
      "\n"
      R"({"sentence1":"e","sentence2":"f","gold_label":"contradiction"})"
      "\n";
  const auto ds = parse_nli_jsonl(multi, FieldMap::multinli(), "multinli", Split::kTrain);
  ASSERT_EQ(ds.items.size(), 2u);
  EXPECT_EQ(ds.items[1], (NLIItem{"e", "f", Label3::kContradiction}));
  const auto native = parse_nli_jsonl(serialize_nli(ds), FieldMap::native(), "x", Split::kVal);
  EXPECT_EQ(native.items, ds.items);
  const auto fm = FieldMap::from_json(nlohmann::json::parse(
      R"({"premise":"p","hypothesis":"h","label":"y","labels":{"0":"entailment"}})"));
  const auto custom = parse_nli_jsonl(R"({"p":"x","h":"y","y":"0"})", fm, "c", Split::kTrain);
  ASSERT_EQ(custom.items.size(), 1u);
  EXPECT_THROW(parse_nli_jsonl("{\"premise\":1}", FieldMap::native(), "x", Split::kTrain),
               ParseError);
}

TEST(Adapters, CovidCollapsesLabels) {
  const ClaimSet claims({{"a", "d", "first", nullptr}, {"b", "d", "second", nullptr},
                         {"c", "d", "third", nullptr}});
  std::vector<AnnotatedPair> pairs(3);
  pairs[0].pair = make_claim_pair("a", "b", "x", "t", 0, 0);
  pairs[0].label6 = Label6::kStrictContradiction;
  pairs[1].pair = make_claim_pair("b", "c", "x", "t", 0, 0);
  pairs[1].label6 = Label6::kPossibleEntailment;
  pairs[2].pair = make_claim_pair("a", "c", "x", "t", 0, 0);
  const auto ds = covid_nli_from_annotated(pairs, claims, Split::kTest);
  ASSERT_EQ(ds.items.size(), 2u);
  EXPECT_EQ(ds.items[0], (NLIItem{"first", "second", Label3::kContradiction}));
  EXPECT_EQ(ds.items[1].label, Label3::kEntailment);
}

}  // namespace
}  // namespace contramine
