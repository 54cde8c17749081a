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

// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "contramine/annotation.h"
#include "contramine/classifiers.h"
#include "contramine/cli.h"
#include "contramine/curriculum.h"
#include "contramine/eval.h"
#include "contramine/miner.h"
#include "contramine/pairgen.h"
#include "oracles.h"
#include "test_support.h"

namespace contramine {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Thrown by check() to abort a criterion with a reason.
struct Failed {
  std::string why;
};

void check(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void criterion(const std::string& name, const std::function<std::string()>& body) {
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const Failed& f) {
    ok = false;
    detail = f.why;
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  if (!ok) ++failures;
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

std::string sampler_fidelity() {
  const auto t0 = Clock::now();
  const auto wv = testing::toy_vectors();
  const auto lex = PolarityLexicon::builtin();
  SentenceEncoder enc(wv);
  const auto cs = testing::synthetic_claims(40, {"remdesivir", "tocilizumab"}, 2024);
  std::vector<std::string> texts;
  for (const auto& c : cs) texts.push_back(c.text);
  enc.fit(texts);
  const TextResources text{&enc, &lex};
  const DrugLexicon drugs({"remdesivir", "tocilizumab"});
  const TopicLexicon topics({"mortality", "toxicity"});
  std::size_t compared = 0;
  for (std::size_t k = 1; k <= 7; ++k) {
    const auto expect = oracle::sampler_pool(cs, drugs.drugs(), topics.topics(), enc, lex, k);
    SamplerConfig cfg{k, expect.size() + 1000, 7};
    const auto got = sample_candidate_pairs(cs, drugs, topics, text, cfg);
    check(got.size() == expect.size(), "k=" + std::to_string(k) + ": " +
                                           std::to_string(got.size()) + " pairs vs oracle " +
                                           std::to_string(expect.size()));
    for (const auto& p : got) {
      const auto it = expect.find(p.key());
      check(it != expect.end() && it->second == p, "pair " + p.key() + " differs from oracle");
    }
    compared += got.size();
  }
  check(compared > 0, "oracle pool is empty");
  const double s = seconds_since(t0);
  check(s < 5.0, fmt("runtime %.2f s >= 5 s", s));
  return std::to_string(compared) + " pairs equal the oracle over k=1..7, " + fmt("%.2f s", s);
}

std::string leakage_free_split() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(99);
  const SplitRatios ratios;
  std::size_t splits = 0, ratio_checked = 0;
  double worst = 0.0;
  while (splits < 200) {
    const int n = std::uniform_int_distribution<int>(20, 240)(rng);
    const int m = std::uniform_int_distribution<int>(n / 4, n / 2)(rng);
    std::vector<ClaimPair> pairs;
    std::set<std::string> seen;
    for (int i = 0; i < m; ++i) {
      const int a = std::uniform_int_distribution<int>(0, n - 1)(rng);
      int b = std::uniform_int_distribution<int>(0, n - 2)(rng);
      if (b >= a) ++b;
      auto p = make_claim_pair("c" + std::to_string(a), "c" + std::to_string(b), "d", "t", 0.5,
                               -0.5);
      if (seen.insert(p.key()).second) pairs.push_back(std::move(p));
    }
    const auto g = build_claim_graph(pairs);
    if (g.component_count() < 3) continue;
    const auto s = split_by_components(g, pairs, ratios, splits);
    const auto leak = oracle::check_split(s, pairs);
    check(leak.empty(), "set " + std::to_string(splits) + ": " + leak);
    verify_split(s, pairs);
    if (g.component_count() >= 20) {
      const double total = static_cast<double>(pairs.size());
      const double got[3] = {s.train.size() / total, s.val.size() / total, s.test.size() / total};
      const double want[3] = {ratios.train, ratios.val, ratios.test};
      for (int i = 0; i < 3; ++i) {
        const double dev = std::abs(got[i] - want[i]);
        worst = std::max(worst, dev);
        check(dev <= 0.10, "set " + std::to_string(splits) + fmt(": ratio off by %.3f", dev));
      }
      ++ratio_checked;
    }
    ++splits;
  }
  const double s = seconds_since(t0);
  check(s < 10.0, fmt("runtime %.2f s >= 10 s", s));
  return "200 sets leak-free; " + std::to_string(ratio_checked) +
         " with >=20 components, worst ratio deviation " + fmt("%.3f", worst) + ", " +
         fmt("%.2f s", s);
}

std::string data_ratio_formula() {
  const std::vector<std::string> names = {"multinli", "mednli", "mancon", "covid"};
  std::mt19937_64 rng(7);
  std::size_t checked = 0;
  for (int t = 0; t < 50; ++t) {
    std::map<std::string, std::size_t> sizes;
    for (const auto& n : names) sizes[n] = 1 + rng() % 10000;
    for (std::size_t r : {1, 2}) {
      for (std::size_t k = 1; k <= 4; ++k) {
        const std::vector<std::string> order(names.begin(), names.begin() + k);
        const auto m = plan_curriculum(sizes, order, static_cast<double>(r), 500, {}, t);
        check(m.steps.size() == k, "wrong step count");
        for (std::size_t i = 1; i <= k; ++i) {
          const auto want = oracle::ratio_size(r, 500, k, i, sizes[order[i - 1]]);
          check(m.steps[i - 1].sample_size == want,
                "r=" + std::to_string(r) + " k=" + std::to_string(k) + " i=" + std::to_string(i) +
                    ": " + std::to_string(m.steps[i - 1].sample_size) +
                    " != " + std::to_string(want));
          ++checked;
        }
      }
    }
  }
  return std::to_string(checked) + " step sizes equal min(r^(k-i)*d, |D|)";
}

std::string curriculum_enumeration() {
  using Orders = std::vector<std::vector<std::string>>;
  const std::vector<std::string> fwd = {"multinli", "mednli", "mancon", "covid"};
  const auto subs = forward_subsequences(fwd);
  const Orders want = {{"multinli", "mednli", "mancon", "covid"},
                       {"multinli", "mednli", "mancon"},
                       {"mednli", "mancon", "covid"},
                       {"multinli", "mednli"},
                       {"mednli", "mancon"},
                       {"mancon", "covid"},
                       {"multinli"},
                       {"mednli"},
                       {"mancon"},
                       {"covid"}};
  check(subs == want, "subsequences differ from the ten expected");
  const auto all = enumerate_orders(fwd, {CurriculumKind::kShuffled, 22, 0});
  check(all.size() == 22, std::to_string(all.size()) + " shuffled orders");
  const std::set<std::vector<std::string>> uniq(all.begin(), all.end());
  check(uniq.size() == 22, "duplicates among shuffled orders");
  check(!uniq.count(fwd), "forward order present");
  check(!uniq.count({fwd.rbegin(), fwd.rend()}), "reverse order present");
  for (const auto& o : all) {
    check(std::is_permutation(o.begin(), o.end(), fwd.begin(), fwd.end()), "not a permutation");
  }
  return "10 forward subsequences; 22 distinct shuffles without forward/reverse";
}

std::vector<PicoReviewClaim> pico_corpus(std::size_t questions, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PicoReviewClaim> out;
  for (std::size_t q = 0; q < questions; ++q) {
    const std::size_t n = 3 + rng() % 5;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({"Q" + std::to_string(q), rng() % 2 == 0,
                     "finding " + std::to_string(q) + "." + std::to_string(i)});
    }
  }
  return out;
}

// Leakage and neutral-size checks on one corpus; returns a short summary.
std::string mancon_checks(const std::vector<PicoReviewClaim>& claims, const QuestionSplit& qs) {
  std::map<std::string, std::string> text_q;
  for (const auto& c : claims) text_q[c.text] = c.question_id;
  const auto out = build_mancon_nli(claims, qs, 5);
  std::map<std::string, std::set<Split>> where;
  std::string sizes;
  for (const auto* ds : {&out.train, &out.val, &out.test}) {
    std::size_t cnt[3] = {0, 0, 0};
    for (const auto& it : ds->items) {
      where[text_q.at(it.premise)].insert(ds->split);
      where[text_q.at(it.hypothesis)].insert(ds->split);
      cnt[static_cast<int>(it.label)] += 1;
    }
    const auto e = cnt[static_cast<int>(Label3::kEntailment)];
    const auto c = cnt[static_cast<int>(Label3::kContradiction)];
    const auto n = cnt[static_cast<int>(Label3::kNeutral)];
    check(n == std::max(e, c), to_string(ds->split) + ": neutral " + std::to_string(n) +
                                   " != max(E, C) " + std::to_string(std::max(e, c)));
    sizes += " " + to_string(ds->split) + " E/C/N=" + std::to_string(e) + "/" +
             std::to_string(c) + "/" + std::to_string(n);
  }
  for (const auto& [q, s] : where) check(s.size() == 1, "question " + q + " leaks");
  return sizes;
}

std::string mancon_pairing() {
  // 12 + 4 + 4 questions cannot come from a 16-question corpus without
  // putting one question in two splits. Check the sixteen-question case as
  // stated, and report the disjoint case separately.
  const auto twenty = pico_corpus(20, 3);
  const auto qs20 = assign_question_splits(twenty, 12, 4, 4, 11);
  const auto detail20 = mancon_checks(twenty, qs20);
  const auto sixteen = pico_corpus(16, 3);
  try {
    const auto qs16 = assign_question_splits(sixteen, 12, 4, 4, 11);
    return "16 questions:" + mancon_checks(sixteen, qs16);
  } catch (const ConfigError& e) {
    throw Failed{std::string("16 questions: ") + e.what() +
                 "; with 20 questions: zero leakage," + detail20};
  }
}

std::string metrics() {
  using L = Label3;
  std::mt19937_64 rng(1000);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 80;
    std::vector<L> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<L>(rng() % 3);
      g[i] = static_cast<L>(rng() % 3);
    }
    const auto r = evaluate(p, g);
    const auto o = oracle::count_metrics(p, g);
    bool same = r.macro_f1 == o.macro_f1 && r.accuracy == o.accuracy &&
                r.contradiction_recall == o.recall[2];
    for (int c = 0; c < 3; ++c) {
      same = same && r.per_class[c].precision == o.precision[c] &&
             r.per_class[c].recall == o.recall[c] && r.per_class[c].f1 == o.f1[c];
    }
    check(same, "vector " + std::to_string(t) + " differs from the counting oracle");
  }
  const std::vector<L> gold = {L::kEntailment, L::kEntailment, L::kNeutral,
                               L::kNeutral,    L::kContradiction, L::kContradiction};
  const std::vector<L> one(6, L::kContradiction);
  const double f = evaluate(one, gold).macro_f1;
  check(std::abs(f - 1.0 / 6.0) <= 1e-12, fmt("all-one-class macro F1 %.17g", f));
  std::vector<L> g7(7, L::kContradiction), p7 = {L::kContradiction, L::kContradiction,
                                                 L::kContradiction, L::kContradiction,
                                                 L::kNeutral,       L::kEntailment,
                                                 L::kNeutral};
  const double rec = evaluate(p7, g7).contradiction_recall;
  check(std::abs(rec - 4.0 / 7.0) <= 1e-12, fmt("4-of-7 recall %.17g", rec));
  return "1000 vectors bit-identical; macro F1 " + fmt("%.15f", f) + "; recall " +
         fmt("%.15f", rec);
}

std::string kappa() {
  const AgreementMatrix unanimous({{3, 0, 0}, {0, 3, 0}, {0, 0, 3}, {3, 0, 0}});
  check(fleiss_kappa(unanimous) == 1.0, "unanimous kappa != 1.0");
  std::mt19937_64 rng(20);
  double worst = 0.0;
  int done = 0;
  while (done < 20) {
    const std::size_t items = 3 + rng() % 40, cats = 2 + rng() % 4, raters = 2 + rng() % 5;
    std::vector<std::vector<std::size_t>> m(items, std::vector<std::size_t>(cats, 0));
    for (auto& row : m) {
      for (std::size_t r = 0; r < raters; ++r) row[rng() % cats] += 1;
    }
    double k;
    try {
      k = fleiss_kappa(AgreementMatrix(m));
    } catch (const ValidationError&) {
      continue;  // chance agreement of 1 leaves kappa undefined
    }
    const double dev = std::abs(k - oracle::fleiss(m));
    worst = std::max(worst, dev);
    check(dev <= 1e-9, fmt("matrix deviates by %.3g", dev));
    ++done;
  }
  return "unanimous = 1.0 exactly; 20 random matrices, worst deviation " + fmt("%.2g", worst);
}

std::string baselines() {
  // Central finite differences of the softmax loss.
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const std::size_t dim = 3 + seed % 6, n = 8 + seed;
    std::vector<FeatureVector> x;
    std::vector<Label3> y;
    for (std::size_t i = 0; i < n; ++i) {
      std::unordered_map<std::uint32_t, double> m;
      for (std::uint32_t j = 0; j < dim; ++j) {
        if (rng() % 3 != 0) m[j] = gauss(rng);
      }
      x.push_back(FeatureVector::from_map(dim, m));
      y.push_back(static_cast<Label3>(rng() % 3));
    }
    WeightMatrix w(3, static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = 0.5 * gauss(rng);
    Eigen::Vector3d b(0.3 * gauss(rng), 0.3 * gauss(rng), 0.3 * gauss(rng));
    const double l2 = 0.01, h = 1e-5;
    SoftmaxGradient grad;
    softmax_loss_and_gradient(SparseDesign(x, dim), y, w, b, l2, &grad);
    auto loss = [&](const WeightMatrix& ww, const Eigen::Vector3d& bb) {
      return softmax_loss_and_gradient_serial(x, y, ww, bb, l2, nullptr);
    };
    auto rel = [](double fd, double an) { return std::abs(fd - an) / std::max(1.0, std::abs(fd)); };
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      auto wp = w, wm = w;
      wp.data()[i] += h;
      wm.data()[i] -= h;
      const double fd = (loss(wp, b) - loss(wm, b)) / (2 * h);
      worst = std::max(worst, rel(fd, grad.weights.data()[i]));
    }
    for (int i = 0; i < 3; ++i) {
      auto bp = b, bm = b;
      bp[i] += h;
      bm[i] -= h;
      const double fd = (loss(w, bp) - loss(w, bm)) / (2 * h);
      worst = std::max(worst, rel(fd, grad.bias[i]));
    }
  }
  check(worst <= 1e-5, fmt("gradient relative error %.3g", worst));

  // Linearly separable three-class set.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  std::vector<FeatureVector> x;
  std::vector<Label3> y;
  for (int i = 0; i < 90; ++i) {
    const auto c = static_cast<std::uint32_t>(i % 3);
    std::unordered_map<std::uint32_t, double> m{{0, u(rng)}, {1, u(rng)}, {2, u(rng)}};
    m[c] = 1.0 + u(rng);
    x.push_back(FeatureVector::from_map(3, m));
    y.push_back(static_cast<Label3>(c));
  }
  const auto model = train_softmax(x, y, {500, 0.5, 0.0, 0});
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) correct += model.predict(x[i]).argmax() == y[i];
  check(correct == x.size(), std::to_string(correct) + "/90 correct after 500 iterations");

  // Hypothesis-only featurizer ignores the premise.
  const auto claims = testing::synthetic_claims(80, {"remdesivir", "dexamethasone"}, 4);
  std::vector<NLIItem> train;
  for (std::size_t i = 0; i + 1 < claims.size(); i += 2) {
    train.push_back({claims[i].text, claims[i + 1].text, Label3::kNeutral});
  }
  HypothesisUnigramFeaturizer f;
  f.fit(train);
  std::mt19937_64 pick(8);
  for (int t = 0; t < 1000; ++t) {
    const auto& h = claims[pick() % claims.size()].text;
    const auto a = f.transform(claims[pick() % claims.size()].text, h);
    const auto b = f.transform(claims[pick() % claims.size()].text, h);
    check(a.entries == b.entries, "premise swap " + std::to_string(t) + " changed features");
  }
  return "gradient worst relative error " + fmt("%.2g", worst) +
         "; separable set 90/90 in 500 iterations; 1000 premise swaps invariant";
}

std::string miner() {
  const auto t0 = Clock::now();
  const auto wv = testing::toy_vectors();
  const auto lex = PolarityLexicon::builtin();
  SentenceEncoder enc(wv);
  const auto claims = testing::synthetic_claims(
      300, {"remdesivir", "hydroxychloroquine", "dexamethasone", "tocilizumab"}, 31, 60);
  std::vector<std::string> texts;
  for (const auto& c : claims) texts.push_back(c.text);
  enc.fit(texts);
  const TextResources text{&enc, &lex};
  MinerConfig cfg;
  cfg.drugs_of_interest = {"remdesivir", "hydroxychloroquine"};
  cfg.max_papers = 50;
  const auto pairs = mine_candidates(claims, cfg, text, 42);
  check(!pairs.empty(), "no candidate pairs");
  const DrugLexicon drugs(cfg.drugs_of_interest);
  for (const auto& p : pairs) {
    const auto& a = claims.at(p.a_id);
    const auto& b = claims.at(p.b_id);
    check(!find_drug_mentions(a, drugs).empty() && !find_drug_mentions(b, drugs).empty(),
          p.key() + " lacks a drug of interest");
    check(cosine(enc.embed(a.text).vector, enc.embed(b.text).vector) > cfg.sim_threshold,
          p.key() + " is below the similarity threshold");
  }
  testing::TempDir dir;
  testing::FunctionScorer stub(testing::hashed_distribution);
  RankOptions opts;
  opts.checkpoint = dir / "ckpt.jsonl";
  opts.checkpoint_every = 64;
  const auto ranked = rank_contradictions(pairs, claims, stub, opts);
  check(!ranked.empty(), "no contradictions surfaced");
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    check(ranked[i].scores.argmax() == Label3::kContradiction, "non-contradiction surfaced");
    if (i > 0) {
      check(ranked[i - 1].p_contradiction() >= ranked[i].p_contradiction(),
            "ranking not monotone at " + std::to_string(i));
    }
  }
  const auto reports = build_reports(ranked, claims);
  std::size_t hits = 0;
  for (const auto& r : reports) {
    hits += r.hits.size();
    for (std::size_t h = 1; h < r.hits.size(); ++h) {
      check(r.hits[h - 1].p_contradiction >= r.hits[h].p_contradiction,
            "report hits not monotone");
    }
  }
  check(hits == 2 * ranked.size(), std::to_string(hits) + " hits for " +
                                       std::to_string(ranked.size()) + " pairs");
  const auto md = render_report(reports, ReportFormat::kMarkdown);
  const auto js = render_report(reports, ReportFormat::kJson);
  check(parse_reports_json(js) == reports, "report JSON does not round-trip");
  const double s = seconds_since(t0);
  check(s < 30.0, fmt("runtime %.2f s >= 30 s", s));
  return std::to_string(pairs.size()) + " candidates pass both filters; " +
         std::to_string(ranked.size()) + " ranked monotone; hits = 2 x pairs = " +
         std::to_string(hits) + "; " + fmt("%.2f s", s);
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> pipeline_run(const fs::path& work, const fs::path& out) {
  fs::remove_all(out);
  const auto w = work.string();
  const auto o = out.string();
  const std::vector<std::vector<std::string>> steps = {
      {"ingest", "--input", w + "/claims.jsonl"},
      {"sample-pairs", "--claims", o + "/claims.jsonl", "--vectors", w + "/vectors.txt", "--k",
       "1", "--n", "40"},
      {"split", "--pairs", o + "/pairs.jsonl"},
      {"plan-curriculum", "--sizes", "multinli=5000,mednli=3000,mancon=2000,covid=60", "--ratio",
       "2"},
      {"train-baseline", "--train", w + "/nli.jsonl", "--featurizer", "word_cross_product",
       "--epochs", "40"},
      {"score", "--input", w + "/nli.jsonl", "--model", o + "/model.json"},
      {"evaluate", "--pred", o + "/scores.jsonl", "--gold", w + "/nli.jsonl"},
      {"mine", "--claims", o + "/claims.jsonl", "--vectors", w + "/vectors.txt", "--model",
       o + "/model.json", "--max-papers", "10", "--checkpoint-every", "5"},
  };
  for (const auto& s : steps) {
    std::vector<std::string> args = {"--out", o, "--seed", "17", "--log-level", "error"};
    args.insert(args.end(), s.begin(), s.end());
    std::ostringstream sout, serr;
    const int code = cli::run(args, sout, serr);
    check(code == 0, s[0] + " exited " + std::to_string(code) + ": " + serr.str());
  }
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), out).string();
    if (rel.rfind("logs", 0) == 0) continue;
    files[rel] = read_file(e.path());
  }
  return files;
}

std::string determinism() {
  testing::TempDir dir;
  const auto cs = testing::synthetic_claims(
      90, {"remdesivir", "hydroxychloroquine", "tocilizumab"}, 13, 12);
  std::ofstream(dir / "claims.jsonl") << serialize_claims(cs);
  testing::write_word_vectors(testing::toy_vectors(), dir / "vectors.txt");
  std::ofstream(dir / "nli.jsonl") << testing::toy_nli_jsonl(90, 3);
  const auto first = pipeline_run(dir.path(), dir / "run");
  const auto second = pipeline_run(dir.path(), dir / "run");
  check(first.size() == second.size(), "different file sets");
  std::size_t bytes = 0;
  for (const auto& [name, body] : first) {
    const auto it = second.find(name);
    check(it != second.end(), name + " missing in second run");
    check(it->second == body, name + " differs between runs");
    bytes += body.size();
  }
  for (const char* f : {"pairs.jsonl", "split.json", "model.json", "eval_report.json",
                        "mined_pairs.jsonl", "report.md"}) {
    check(first.count(f), std::string(f) + " not produced");
  }
  return std::to_string(first.size()) + " files, " + std::to_string(bytes) +
         " bytes identical across two runs";
}

}  // namespace
}  // namespace contramine

int main() {
  using namespace contramine;
  criterion("sampler_fidelity", sampler_fidelity);
  criterion("leakage_free_split", leakage_free_split);
  criterion("data_ratio_formula", data_ratio_formula);
  criterion("curriculum_enumeration", curriculum_enumeration);
  criterion("mancon_pairing", mancon_pairing);
  criterion("metrics", metrics);
  criterion("fleiss_kappa", kappa);
  criterion("baselines", baselines);
  criterion("miner", miner);
  criterion("determinism", determinism);
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
