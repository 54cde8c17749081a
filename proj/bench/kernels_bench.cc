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

// Parallel kernels against their serial twins.

#include <benchmark/benchmark.h>

#include "contramine/classifiers.h"
#include "contramine/miner.h"
#include "contramine/textrep.h"
#include "test_support.h"

namespace contramine {
namespace {

const std::vector<std::string> kDrugs = {"remdesivir", "hydroxychloroquine", "tocilizumab",
                                         "dexamethasone"};

struct Corpus {
  WordVectors wv = testing::toy_vectors();
  PolarityLexicon lex = PolarityLexicon::builtin();
  SentenceEncoder enc{wv};
  ClaimSet claims;
  std::vector<std::string> texts;

  explicit Corpus(std::size_t n) : claims(testing::synthetic_claims(n, kDrugs, 5, n / 8 + 1)) {
    for (const auto& c : claims) texts.push_back(c.text);
    enc.fit(texts);
  }
};

void BM_EmbedBatch(benchmark::State& state, bool parallel) {
  const Corpus c(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto out = parallel ? embed_batch(c.enc, c.texts) : embed_batch_serial(c.enc, c.texts);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_EmbedBatch, parallel, true)->Arg(1000)->Arg(8000);
BENCHMARK_CAPTURE(BM_EmbedBatch, serial, false)->Arg(1000)->Arg(8000);

void BM_MineCandidates(benchmark::State& state, bool parallel) {
  const Corpus c(static_cast<std::size_t>(state.range(0)));
  MinerConfig cfg;
  cfg.drugs_of_interest = {"remdesivir", "hydroxychloroquine"};
  const TextResources text{&c.enc, &c.lex};
  for (auto _ : state) {
    auto out = parallel ? mine_candidates(c.claims, cfg, text, 0)
                        : mine_candidates_serial(c.claims, cfg, text, 0);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK_CAPTURE(BM_MineCandidates, parallel, true)->Arg(500)->Arg(2000);
BENCHMARK_CAPTURE(BM_MineCandidates, serial, false)->Arg(500)->Arg(2000);

struct Problem {
  std::vector<FeatureVector> x;
  std::vector<Label3> y;
  WeightMatrix w;
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  std::size_t dim;

  Problem(std::size_t n, std::size_t d) : w(WeightMatrix::Zero(3, static_cast<Eigen::Index>(d))),
                                          dim(d) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (std::size_t i = 0; i < n; ++i) {
      std::unordered_map<std::uint32_t, double> m;
      for (int k = 0; k < 30; ++k) m[static_cast<std::uint32_t>(rng() % d)] = g(rng);
      x.push_back(FeatureVector::from_map(d, m));
      y.push_back(static_cast<Label3>(rng() % 3));
    }
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = 0.1 * g(rng);
  }
};

void BM_SoftmaxGradient(benchmark::State& state, bool parallel) {
  const Problem p(static_cast<std::size_t>(state.range(0)), 5000);
  const SparseDesign design(p.x, p.dim);
  SoftmaxGradient grad;
  for (auto _ : state) {
    const double loss =
        parallel ? softmax_loss_and_gradient(design, p.y, p.w, p.b, 1e-4, &grad)
                 : softmax_loss_and_gradient_serial(p.x, p.y, p.w, p.b, 1e-4, &grad);
    benchmark::DoNotOptimize(loss);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_SoftmaxGradient, parallel, true)->Arg(2000)->Arg(20000);
BENCHMARK_CAPTURE(BM_SoftmaxGradient, serial, false)->Arg(2000)->Arg(20000);

}  // namespace
}  // namespace contramine

BENCHMARK_MAIN();
