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

#include "contramine/cli.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "contramine/annotation.h"
#include "contramine/classifiers.h"
#include "contramine/common.h"
#include "contramine/corpus.h"
#include "contramine/curriculum.h"
#include "contramine/eval.h"
#include "contramine/miner.h"
#include "contramine/pairgen.h"
#include "contramine/parallel.h"
#include "contramine/remote.h"
#include "contramine/textrep.h"
#include "json.hpp"

namespace contramine::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON config files. Top-level keys are global flags; an object value holds
// the flags of the subcommand with that name.

class JsonConfig final : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config: top level must be an object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void collect(const json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto p = parents;
        p.push_back(key);
        collect(value, p, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else if (!value.is_null()) {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

// ---------------------------------------------------------------------------

struct Globals {
  std::uint64_t seed = 0;
  std::string config;
  std::string out = ".";
  std::string log_level = "info";
  bool json_errors = false;
  int threads = 0;
};

struct Context {
  fs::path out_dir;
  std::uint64_t seed = 0;
  std::shared_ptr<spdlog::logger> log;
  std::ostream* out = nullptr;

  void write(const std::string& name, std::string_view data) const {
    const auto path = out_dir / name;
    write_file_atomic(path, data);
    log->info("wrote {} ({} bytes)", path.string(), data.size());
  }
};

// A subcommand: its CLI11 app, an optional per-command seed, and the action.
struct Command {
  CLI::App* app = nullptr;
  CLI::Option* seed_opt = nullptr;
  std::uint64_t seed = 0;
  std::function<void(const Context&)> action;
};

CLI::Option* add_seed(Command& c) {
  c.seed_opt = c.app->add_option("--seed", c.seed, "Seed override for this command")
                   ->default_str("");
  return c.seed_opt;
}

// ---------------------------------------------------------------------------
// Shared option groups.

struct TextOptions {
  std::string vectors;
  std::string freq;
  std::string lexicon;
  int components = 5;
  int avg_len = 11;

  void add(CLI::App* app, bool required) {
    auto* v = app->add_option("--vectors", vectors, "Word vectors (text format)");
    v->check(CLI::ExistingFile);
    if (required) v->required();
    app->add_option("--freq", freq, "Word frequency file (default: <vectors>.freq)")
        ->check(CLI::ExistingFile);
    app->add_option("--lexicon", lexicon, "Polarity lexicon TSV (default: built in)")
        ->check(CLI::ExistingFile);
    app->add_option("--components", components, "Common components to remove")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--avg-len", avg_len, "Expected sentence length for smoothing")
        ->check(CLI::PositiveNumber);
  }
};

// Owns word vectors, the encoder and the lexicon behind a TextResources.
struct TextBundle {
  std::unique_ptr<WordVectors> vectors;
  std::unique_ptr<SentenceEncoder> encoder;
  PolarityLexicon lexicon;

  TextResources resources() const { return TextResources{encoder.get(), &lexicon}; }
};

std::unique_ptr<TextBundle> load_text(const TextOptions& o, const Context& ctx) {
  auto b = std::make_unique<TextBundle>();
  b->lexicon = o.lexicon.empty() ? PolarityLexicon::builtin() : PolarityLexicon::load(o.lexicon);
  if (o.vectors.empty()) return b;
  std::optional<fs::path> freq;
  if (!o.freq.empty()) freq = fs::path(o.freq);
  b->vectors = std::make_unique<WordVectors>(WordVectors::load(o.vectors, freq));
  b->encoder = std::make_unique<SentenceEncoder>(*b->vectors, UsifParams{o.components, o.avg_len});
  ctx.log->debug("loaded {} word vectors of dimension {}", b->vectors->size(), b->vectors->dim());
  return b;
}

std::vector<std::string> lexicon_entries(const std::vector<std::string>& inline_list,
                                         const std::string& file,
                                         const std::vector<std::string>& fallback) {
  std::vector<std::string> out = inline_list;
  if (!file.empty()) {
    auto more = read_list_file(file);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out.empty() ? fallback : out;
}

struct ScorerOptions {
  std::string model;
  std::string backend;
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 4;
  int retries = 2;
  double timeout = 30.0;

  void add(CLI::App* app) {
    auto* m = app->add_option("--model", model, "Trained baseline model JSON")
                  ->check(CLI::ExistingFile);
    auto* b = app->add_option("--backend", backend, "Scoring service base URL")
                  ->envname("CONTRAMINE_BACKEND_URL");
    m->excludes(b);
    app->add_option("--batch-size", batch_size, "Pairs per backend request")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-in-flight", max_in_flight, "Concurrent backend requests")
        ->check(CLI::PositiveNumber);
    app->add_option("--retries", retries, "Extra attempts per backend request")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--timeout", timeout, "Backend timeout in seconds")
        ->check(CLI::PositiveNumber);
  }
};

struct ScorerHandle {
  std::unique_ptr<TextBundle> text;
  std::unique_ptr<BaselineModel> model;
  std::unique_ptr<Scorer> scorer;
};

// `text` may already hold a loaded bundle (the miner embeds with it); it is
// only reused when the model does not carry its own component basis.
ScorerHandle make_scorer(const ScorerOptions& o, const TextOptions& text_opts,
                         const Context& ctx) {
  ScorerHandle h;
  if (!o.model.empty()) {
    json j;
    try {
      j = json::parse(read_file(o.model));
    } catch (const json::parse_error& e) {
      throw ParseError(o.model + ": " + e.what());
    }
    h.text = load_text(text_opts, ctx);
    const auto& fj = j.contains("featurizer") ? j.at("featurizer") : json();
    if (fj.is_object() && fj.value("kind", "") == "similarity_polarity") {
      if (!h.text->encoder) throw ConfigError("this model needs --vectors");
      if (fj.contains("basis")) h.text->encoder->set_basis(ComponentBasis::from_json(fj.at("basis")));
    }
    h.model = std::make_unique<BaselineModel>(BaselineModel::from_json(j, h.text->resources()));
    h.scorer = std::make_unique<BaselineScorer>(*h.model);
  } else if (!o.backend.empty()) {
    RemoteOptions r;
    r.endpoint = o.backend;
    r.batch_size = o.batch_size;
    r.max_in_flight = o.max_in_flight;
    r.retries = o.retries;
    r.timeout_seconds = o.timeout;
    h.scorer = std::make_unique<RemoteScorer>(r);
  } else {
    throw ConfigError("no scorer: pass --model or --backend (or set CONTRAMINE_BACKEND_URL)");
  }
  ctx.log->info("scoring with {}", h.scorer->id());
  return h;
}

FieldMap field_map(const std::string& format) {
  const auto f = to_lower(format);
  if (f == "native") return FieldMap::native();
  if (f == "multinli") return FieldMap::multinli();
  if (f == "mednli") return FieldMap::mednli();
  throw ConfigError("unknown NLI format \"" + format + "\"");
}

std::string jsonl(const std::vector<ordered_json>& rows) {
  std::string s;
  for (const auto& r : rows) {
    s += r.dump();
    s += '\n';
  }
  return s;
}

template <typename F>
void for_each_json_line(const std::string& path, F&& f) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      f(json::parse(line), lineno);
    } catch (const json::exception& e) {
      throw ParseError(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

Label3 any_label(const std::string& s) {
  try {
    return parse_label3(s);
  } catch (const ParseError&) {
    return collapse_label(parse_label6(s));
  }
}

std::vector<Label3> read_labels(const std::string& path, const std::string& field) {
  std::vector<Label3> out;
  for_each_json_line(path, [&](const json& j, std::size_t lineno) {
    try {
      out.push_back(any_label(j.at(field).get<std::string>()));
    } catch (const ParseError& e) {
      throw ParseError(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands.

void add_ingest(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("ingest", "Validate and normalise a claim JSONL file");
  auto input = std::make_shared<std::string>();
  c.app->add_option("--input", *input, "Claim JSONL")->required()->check(CLI::ExistingFile);
  c.action = [input](const Context& ctx) {
    const auto claims = ingest_claims(*input);
    ctx.log->info("ingested {} claims", claims.size());
    ctx.write("claims.jsonl", serialize_claims(claims));
    *ctx.out << claims.size() << " claims\n";
  };
}

void add_filter(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("filter", "Keep claims that mention COVID-19");
  struct Opts {
    std::string input, terms_file;
    std::vector<std::string> terms;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--input", o->input, "Claim JSONL")->required()->check(CLI::ExistingFile);
  c.app->add_option("--terms", o->terms, "Search terms")->delimiter(',');
  c.app->add_option("--terms-file", o->terms_file, "One search term per line")
      ->check(CLI::ExistingFile);
  c.action = [o](const Context& ctx) {
    const auto claims = ingest_claims(o->input);
    const auto terms = lexicon_entries(o->terms, o->terms_file, default_covid_terms());
    const auto kept = filter_covid_claims(claims, terms);
    ctx.log->info("kept {} of {} claims", kept.size(), claims.size());
    ctx.write("covid_claims.jsonl", serialize_claims(kept));
    *ctx.out << kept.size() << " of " << claims.size() << " claims kept\n";
  };
}

void add_sample_pairs(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("sample-pairs", "Sample candidate claim pairs");
  struct Opts {
    std::string claims, drugs_file, topics_file;
    std::vector<std::string> drugs, topics;
    std::size_t k = 7, n = 1000;
    TextOptions text;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--claims", o->claims, "Claim JSONL")->required()->check(CLI::ExistingFile);
  c.app->add_option("--drugs", o->drugs, "Drug names")->delimiter(',');
  c.app->add_option("--drugs-file", o->drugs_file, "One drug per line")
      ->check(CLI::ExistingFile);
  c.app->add_option("--topics", o->topics, "Topic phrases")->delimiter(',');
  c.app->add_option("--topics-file", o->topics_file, "One topic per line")
      ->check(CLI::ExistingFile);
  c.app->add_option("--k", o->k, "Claims per drug, topic and polarity sign")
      ->check(CLI::PositiveNumber);
  c.app->add_option("--n", o->n, "Pairs to sample")->check(CLI::PositiveNumber);
  o->text.add(c.app, true);
  add_seed(c);
  c.action = [o](const Context& ctx) {
    const auto claims = ingest_claims(o->claims);
    const DrugLexicon drugs(
        lexicon_entries(o->drugs, o->drugs_file, DrugLexicon::treatment_candidates().drugs()));
    const TopicLexicon topics(
        lexicon_entries(o->topics, o->topics_file, TopicLexicon::default_topics().topics()));
    auto text = load_text(o->text, ctx);
    std::vector<std::string> texts;
    for (const auto& cl : claims) texts.push_back(cl.text);
    text->encoder->fit(texts);
    const auto pairs =
        sample_candidate_pairs(claims, drugs, topics, text->resources(),
                               SamplerConfig{o->k, o->n, ctx.seed});
    ctx.log->info("sampled {} pairs (k={}, n={}, seed={})", pairs.size(), o->k, o->n, ctx.seed);
    ctx.write("pairs.jsonl", serialize_pairs(pairs));
    *ctx.out << pairs.size() << " pairs\n";
  };
}

void add_split(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("split", "Leakage-free train/val/test split of claim pairs");
  struct Opts {
    std::string pairs;
    SplitRatios ratios;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--pairs", o->pairs, "Pair JSONL")->required()->check(CLI::ExistingFile);
  c.app->add_option("--train", o->ratios.train, "Train fraction")->check(CLI::Range(0.0, 1.0));
  c.app->add_option("--val", o->ratios.val, "Validation fraction")->check(CLI::Range(0.0, 1.0));
  c.app->add_option("--test", o->ratios.test, "Test fraction")->check(CLI::Range(0.0, 1.0));
  add_seed(c);
  c.action = [o](const Context& ctx) {
    const auto pairs = parse_pairs(read_file(o->pairs));
    const auto graph = build_claim_graph(pairs);
    const auto split = split_by_components(graph, pairs, o->ratios, ctx.seed);
    ctx.log->info("{} components; train {} / val {} / test {} pairs", graph.component_count(),
                  split.train.size(), split.val.size(), split.test.size());
    ctx.write("split.json", split.to_json().dump(2) + "\n");
    *ctx.out << "train " << split.train.size() << ", val " << split.val.size() << ", test "
             << split.test.size() << "\n";
  };
}

void add_guideline_label(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("guideline-label", "Label annotated pairs with the guideline rules");
  struct Opts {
    std::string pairs, claims, drugs_file, lexicon;
    std::vector<std::string> drugs;
    bool from_text = false;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--pairs", o->pairs, "Annotated pair JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  c.app->add_option("--claims", o->claims, "Claim JSONL")->required()->check(CLI::ExistingFile);
  c.app->add_flag("--from-text", o->from_text,
                  "Derive features from raw text for pairs without spans");
  c.app->add_option("--drugs", o->drugs, "Drug names for --from-text")->delimiter(',');
  c.app->add_option("--drugs-file", o->drugs_file, "One drug per line")
      ->check(CLI::ExistingFile);
  c.app->add_option("--lexicon", o->lexicon, "Polarity lexicon TSV")->check(CLI::ExistingFile);
  c.action = [o](const Context& ctx) {
    const auto claims = ingest_claims(o->claims);
    const auto pairs = parse_annotated_pairs(read_file(o->pairs));
    const DrugLexicon drugs(
        lexicon_entries(o->drugs, o->drugs_file, DrugLexicon::treatment_candidates().drugs()));
    const auto lexicon =
        o->lexicon.empty() ? PolarityLexicon::builtin() : PolarityLexicon::load(o->lexicon);
    auto features = [&](const std::string& id, const std::vector<SpanAnnotation>& spans) {
      const auto& text = claims.at(id).text;
      if (spans.empty() && o->from_text) return features_from_text(text, drugs, lexicon, {});
      return features_from_spans(text, spans);
    };
    std::vector<ordered_json> rows;
    std::size_t with_gold = 0, agree = 0;
    for (const auto& p : pairs) {
      const auto label =
          guideline_label(features(p.pair.a_id, p.spans_a), features(p.pair.b_id, p.spans_b));
      ordered_json r;
      r["a_id"] = p.pair.a_id;
      r["b_id"] = p.pair.b_id;
      r["label6"] = to_string(label);
      r["label"] = to_string(collapse_label(label));
      if (p.label6) {
        r["gold_label6"] = to_string(*p.label6);
        ++with_gold;
        agree += (*p.label6 == label);
      }
      rows.push_back(std::move(r));
    }
    ctx.write("guideline_labels.jsonl", jsonl(rows));
    *ctx.out << rows.size() << " pairs labelled";
    if (with_gold > 0) *ctx.out << "; " << agree << " of " << with_gold << " match the gold label";
    *ctx.out << "\n";
  };
}

void add_kappa(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("kappa", "Fleiss' kappa of a rater count matrix");
  auto matrix = std::make_shared<std::string>();
  c.app->add_option("--matrix", *matrix, "CSV: items x categories counts")
      ->required()
      ->check(CLI::ExistingFile);
  c.action = [matrix](const Context& ctx) {
    const auto m = AgreementMatrix::from_csv(read_file(*matrix));
    const double k = fleiss_kappa(m);
    ordered_json j;
    j["kappa"] = k;
    j["items"] = m.items();
    j["raters"] = m.raters();
    j["categories"] = m.categories();
    ctx.write("kappa.json", j.dump(2) + "\n");
    char buf[64];
    std::snprintf(buf, sizeof buf, "kappa = %.4f\n", k);
    *ctx.out << buf;
  };
}

void add_build_mancon(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("build-mancon", "Build the stance-pair NLI dataset");
  struct Opts {
    std::string claims;
    std::size_t train = 12, val = 4, test = 4;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--claims", o->claims, "Review claim JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  c.app->add_option("--train-questions", o->train, "Questions in train");
  c.app->add_option("--val-questions", o->val, "Questions in validation");
  c.app->add_option("--test-questions", o->test, "Questions in test");
  add_seed(c);
  c.action = [o](const Context& ctx) {
    const auto claims = parse_pico_claims(read_file(o->claims));
    const auto qs = assign_question_splits(claims, o->train, o->val, o->test, ctx.seed);
    const auto ds = build_mancon_nli(claims, qs, ctx.seed);
    ordered_json qj = ordered_json::object();
    for (const auto& [q, s] : qs) qj[q] = to_string(s);
    ctx.write("mancon_questions.json", qj.dump(2) + "\n");
    ctx.write("mancon_train.jsonl", serialize_nli(ds.train));
    ctx.write("mancon_val.jsonl", serialize_nli(ds.val));
    ctx.write("mancon_test.jsonl", serialize_nli(ds.test));
    *ctx.out << "train " << ds.train.items.size() << ", val " << ds.val.items.size()
             << ", test " << ds.test.items.size() << " items\n";
  };
}

TrainParams parse_train_params(int epochs, double lr, int batch) {
  if (epochs < 1 || batch < 1 || !(lr > 0.0)) throw ConfigError("invalid training parameters");
  return TrainParams{epochs, lr, batch};
}

void add_plan_curriculum(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("plan-curriculum", "Write curriculum manifests");
  struct Opts {
    std::vector<std::string> sizes;
    std::vector<std::string> order{"multinli", "mednli", "mancon", "covid"};
    std::string kind = "forward";
    double ratio = 1.0;
    std::size_t d = 500;
    std::size_t n_shuffled = 1;
    TrainParams params;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--sizes", o->sizes, "Train sizes as name=count")
      ->required()
      ->delimiter(',');
  c.app->add_option("--order", o->order, "Forward dataset order")->delimiter(',');
  c.app->add_option("--kind", o->kind,
                    "forward, reverse, shuffled, combined or subsequence");
  c.app->add_option("--ratio", o->ratio, "Data ratio r")->check(CLI::Range(1.0, 1e6));
  c.app->add_option("--d", o->d, "Examples in the last step")->check(CLI::PositiveNumber);
  c.app->add_option("--n-shuffled", o->n_shuffled, "Shuffled curricula to draw")
      ->check(CLI::PositiveNumber);
  c.app->add_option("--epochs", o->params.epochs, "Epochs per step");
  c.app->add_option("--lr", o->params.learning_rate, "Learning rate");
  c.app->add_option("--batch", o->params.batch_size, "Batch size");
  add_seed(c);
  c.action = [o](const Context& ctx) {
    std::map<std::string, std::size_t> sizes;
    for (const auto& s : o->sizes) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--sizes entry \"" + s + "\" is not name=count");
      try {
        sizes[trim(s.substr(0, eq))] = std::stoull(s.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw ConfigError("--sizes entry \"" + s + "\" has a bad count");
      }
    }
    const auto params =
        parse_train_params(o->params.epochs, o->params.learning_rate, o->params.batch_size);
    const auto kind = parse_curriculum_kind(o->kind);
    std::vector<std::vector<std::string>> orders;
    if (kind == CurriculumKind::kSubsequence) {
      orders = forward_subsequences(o->order);
    } else {
      orders = enumerate_orders(o->order, OrderSpec{kind, o->n_shuffled, ctx.seed});
    }
    const bool numbered = orders.size() > 1 || kind == CurriculumKind::kShuffled;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const auto m = plan_curriculum(sizes, orders[i], o->ratio, o->d, params, ctx.seed, kind);
      std::string name = "curriculum_" + to_string(kind);
      if (numbered) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "_%02zu", i + 1);
        name += buf;
      }
      ctx.write(name + ".json", m.dump());
    }
    *ctx.out << orders.size() << " manifest(s)\n";
  };
}

void add_hp_grid(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("hp-grid", "Expand a manifest over a learning-rate x batch grid");
  struct Opts {
    std::string manifest;
    std::vector<double> lrs = sweep_learning_rates();
    std::vector<int> batches = sweep_batch_sizes();
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--manifest", o->manifest, "Base manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  c.app->add_option("--lrs", o->lrs, "Learning rates")->delimiter(',');
  c.app->add_option("--batch-sizes", o->batches, "Batch sizes")->delimiter(',');
  c.action = [o](const Context& ctx) {
    json j;
    try {
      j = json::parse(read_file(o->manifest));
    } catch (const json::parse_error& e) {
      throw ParseError(o->manifest + ": " + e.what());
    }
    const auto base = CurriculumManifest::from_json(j);
    const auto grid = plan_hyperparameter_grid(o->lrs, o->batches, base);
    ordered_json index = ordered_json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "hp_grid_%02zu.json", i + 1);
      ctx.write(buf, grid[i].dump());
      ordered_json e;
      e["file"] = buf;
      e["learning_rate"] = grid[i].train_params.learning_rate;
      e["batch_size"] = grid[i].train_params.batch_size;
      index.push_back(std::move(e));
    }
    ctx.write("hp_grid.json", index.dump(2) + "\n");
    *ctx.out << grid.size() << " grid points\n";
  };
}

void add_train_baseline(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("train-baseline", "Train a softmax baseline classifier");
  struct Opts {
    std::string train, format = "native", featurizer = "hypothesis_unigrams";
    std::size_t max_cross_pairs = 50000;
    SoftmaxHyperparams hp;
    TextOptions text;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--train", o->train, "Training NLI JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  c.app->add_option("--format", o->format, "native, multinli or mednli");
  c.app->add_option("--featurizer", o->featurizer,
                    "hypothesis_unigrams, word_overlap, word_cross_product or "
                    "similarity_polarity");
  c.app->add_option("--max-cross-pairs", o->max_cross_pairs, "Cross-product vocabulary cap")
      ->check(CLI::PositiveNumber);
  c.app->add_option("--epochs", o->hp.epochs, "Gradient steps")->check(CLI::PositiveNumber);
  c.app->add_option("--lr", o->hp.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  c.app->add_option("--l2", o->hp.l2, "L2 penalty")->check(CLI::NonNegativeNumber);
  o->text.add(c.app, false);
  add_seed(c);
  c.action = [o](const Context& ctx) {
    const auto ds = load_nli_jsonl(o->train, field_map(o->format), "train", Split::kTrain);
    auto text = load_text(o->text, ctx);
    if (text->encoder) {
      std::vector<std::string> texts;
      for (const auto& it : ds.items) {
        texts.push_back(it.premise);
        texts.push_back(it.hypothesis);
      }
      text->encoder->fit(texts);
    }
    auto hp = o->hp;
    hp.seed = ctx.seed;
    auto f = make_featurizer(o->featurizer, text->resources(), o->max_cross_pairs);
    const auto model = train_baseline(std::move(f), ds.items, hp);
    ctx.log->info("trained {} on {} items, final loss {}", model.featurizer->kind(),
                  ds.items.size(), model.softmax.final_loss);
    ctx.write("model.json", model.dump());
    *ctx.out << "final loss " << model.softmax.final_loss << "\n";
  };
}

ordered_json score_json(const ScoreDistribution& s) {
  ordered_json j;
  j["entailment"] = s.entailment;
  j["neutral"] = s.neutral;
  j["contradiction"] = s.contradiction;
  j["label"] = to_string(s.argmax());
  return j;
}

void add_score(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("score", "Score premise/hypothesis pairs");
  struct Opts {
    std::string input, format = "native";
    ScorerOptions scorer;
    TextOptions text;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--input", o->input, "NLI JSONL (labels optional)")
      ->required()
      ->check(CLI::ExistingFile);
  c.app->add_option("--format", o->format, "native, multinli or mednli");
  o->scorer.add(c.app);
  o->text.add(c.app, false);
  c.action = [o](const Context& ctx) {
    const auto fm = field_map(o->format);
    std::vector<TextPair> pairs;
    for_each_json_line(o->input, [&](const json& j, std::size_t) {
      pairs.push_back(TextPair{j.at(fm.premise).get<std::string>(),
                               j.at(fm.hypothesis).get<std::string>()});
    });
    auto h = make_scorer(o->scorer, o->text, ctx);
    const auto scores = h.scorer->score_batch(pairs);
    std::vector<ordered_json> rows;
    for (const auto& s : scores) rows.push_back(score_json(s));
    ctx.write("scores.jsonl", jsonl(rows));
    *ctx.out << rows.size() << " pairs scored\n";
  };
}

void add_evaluate(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("evaluate", "Score predictions against gold labels");
  struct Opts {
    std::string pred, gold, tag = "run", label_field = "label";
    std::vector<std::string> aggregate;
  };
  auto o = std::make_shared<Opts>();
  auto* pred = c.app->add_option("--pred", o->pred, "Predictions JSONL")
                   ->check(CLI::ExistingFile);
  auto* gold = c.app->add_option("--gold", o->gold, "Gold JSONL")->check(CLI::ExistingFile);
  c.app->add_option("--tag", o->tag, "Run tag");
  c.app->add_option("--label-field", o->label_field, "Label field in both files");
  auto* agg = c.app->add_option("--aggregate", o->aggregate,
                                "Summarise reports given as tag=report.json[@group]")
                  ->delimiter(',');
  pred->needs(gold);
  gold->needs(pred);
  agg->excludes(pred);
  c.action = [o](const Context& ctx) {
    if (!o->aggregate.empty()) {
      std::vector<TaggedReport> reports;
      for (const auto& spec : o->aggregate) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw ConfigError("--aggregate wants tag=path[@group]");
        TaggedReport r;
        r.tag = spec.substr(0, eq);
        std::string path = spec.substr(eq + 1);
        if (const auto at = path.rfind('@'); at != std::string::npos) {
          r.group = path.substr(at + 1);
          path.resize(at);
        }
        try {
          r.report = EvalReport::from_json(json::parse(read_file(path)));
        } catch (const json::parse_error& e) {
          throw ParseError(path + ": " + e.what());
        }
        reports.push_back(std::move(r));
      }
      const auto table = aggregate_runs(reports);
      ctx.write("summary.csv", table.to_csv());
      ctx.write("summary.md", table.to_markdown());
      *ctx.out << table.to_markdown();
      return;
    }
    if (o->pred.empty()) throw ConfigError("evaluate needs --pred and --gold, or --aggregate");
    const auto preds = read_labels(o->pred, o->label_field);
    const auto golds = read_labels(o->gold, o->label_field);
    const auto report = evaluate(preds, golds);
    ordered_json j;
    j["tag"] = o->tag;
    const auto body = report.to_json();
    for (const auto& [k, v] : body.items()) j[k] = v;
    ctx.write("eval_report.json", j.dump(2) + "\n");
    char buf[128];
    std::snprintf(buf, sizeof buf, "macro F1 %.3f, contradiction recall %.3f (n = %llu)\n",
                  report.macro_f1, report.contradiction_recall,
                  static_cast<unsigned long long>(report.n));
    *ctx.out << buf;
  };
}

void add_mine(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("mine", "Find and rank contradicting claims");
  struct Opts {
    std::string claims, drugs_file;
    std::vector<std::string> drugs;
    double sim_threshold = 0.5;
    std::size_t max_papers = 0;
    double contradiction_threshold = -1.0;
    std::size_t checkpoint_every = 500;
    bool no_checkpoint = false;
    TextOptions text;
    ScorerOptions scorer;
    CLI::Option* max_papers_opt = nullptr;
    CLI::Option* threshold_opt = nullptr;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--claims", o->claims, "Claim JSONL")->required()->check(CLI::ExistingFile);
  c.app->add_option("--drugs", o->drugs, "Drugs of interest")->delimiter(',');
  c.app->add_option("--drugs-file", o->drugs_file, "One drug per line")
      ->check(CLI::ExistingFile);
  c.app->add_option("--sim-threshold", o->sim_threshold, "Minimum embedding cosine")
      ->check(CLI::Range(0.0, 1.0));
  o->max_papers_opt = c.app->add_option("--max-papers", o->max_papers, "Documents to sample")
                          ->check(CLI::PositiveNumber)
                          ->default_str("");
  o->threshold_opt =
      c.app->add_option("--contradiction-threshold", o->contradiction_threshold,
                        "Keep pairs with p(contradiction) at least this (default: argmax)")
          ->check(CLI::Range(0.0, 1.0))
          ->default_str("");
  c.app->add_option("--checkpoint-every", o->checkpoint_every, "Pairs per checkpoint flush")
      ->check(CLI::PositiveNumber);
  c.app->add_flag("--no-checkpoint", o->no_checkpoint, "Do not write or reuse a checkpoint");
  o->text.add(c.app, true);
  o->scorer.add(c.app);
  add_seed(c);
  c.action = [o](const Context& ctx) {
    const auto claims = ingest_claims(o->claims);
    MinerConfig cfg;
    cfg.drugs_of_interest =
        lexicon_entries(o->drugs, o->drugs_file, {"remdesivir", "hydroxychloroquine"});
    cfg.sim_threshold = o->sim_threshold;
    if (o->max_papers_opt->count() > 0) cfg.max_papers = o->max_papers;
    if (o->threshold_opt->count() > 0) cfg.contradiction_threshold = o->contradiction_threshold;
    cfg.validate();

    auto text = load_text(o->text, ctx);
    std::vector<std::string> texts;
    for (const auto& cl : claims) texts.push_back(cl.text);
    text->encoder->fit(texts);
    const auto pairs = mine_candidates(claims, cfg, text->resources(), ctx.seed);
    ctx.log->info("{} candidate pairs", pairs.size());
    ctx.write("mined_pairs.jsonl", serialize_pairs(pairs));

    auto h = make_scorer(o->scorer, o->text, ctx);
    RankOptions ro;
    ro.contradiction_threshold = cfg.contradiction_threshold;
    ro.checkpoint_every = o->checkpoint_every;
    if (!o->no_checkpoint) {
      fs::create_directories(ctx.out_dir);
      ro.checkpoint = ctx.out_dir / "mine_checkpoint.jsonl";
    }
    const auto ranked = rank_contradictions(pairs, claims, *h.scorer, ro);
    std::vector<ordered_json> rows;
    for (const auto& s : ranked) rows.push_back(scored_pair_to_json(s));
    ctx.write("contradictions.jsonl", jsonl(rows));
    const auto reports = build_reports(ranked, claims);
    ctx.write("report.md", render_report(reports, ReportFormat::kMarkdown));
    ctx.write("report.json", render_report(reports, ReportFormat::kJson));
    *ctx.out << pairs.size() << " candidate pairs, " << ranked.size()
             << " predicted contradictions, " << reports.size() << " query claims\n";
  };
}

void add_report(CLI::App& app, std::vector<Command>& cmds) {
  auto& c = cmds.emplace_back();
  c.app = app.add_subcommand("report", "Render contradiction reports from scored pairs");
  struct Opts {
    std::string scored, claims, format = "both";
    double threshold = -1.0;
    CLI::Option* threshold_opt = nullptr;
  };
  auto o = std::make_shared<Opts>();
  c.app->add_option("--scored", o->scored, "Scored pair JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  c.app->add_option("--claims", o->claims, "Claim JSONL")->required()->check(CLI::ExistingFile);
  c.app->add_option("--format", o->format, "markdown, json or both");
  o->threshold_opt = c.app->add_option("--contradiction-threshold", o->threshold,
                                       "Keep pairs with p(contradiction) at least this")
                         ->check(CLI::Range(0.0, 1.0))
                         ->default_str("");
  c.action = [o](const Context& ctx) {
    const auto claims = ingest_claims(o->claims);
    std::vector<ScoredPair> scored;
    for_each_json_line(o->scored, [&](const json& j, std::size_t) {
      scored.push_back(scored_pair_from_json(j));
    });
    std::optional<double> threshold;
    if (o->threshold_opt->count() > 0) threshold = o->threshold;
    const auto reports = build_reports(select_contradictions(scored, threshold), claims);
    const auto f = to_lower(o->format);
    if (f != "both") parse_report_format(f);
    if (f == "both" || parse_report_format(f) == ReportFormat::kMarkdown) {
      ctx.write("report.md", render_report(reports, ReportFormat::kMarkdown));
    }
    if (f == "both" || parse_report_format(f) == ReportFormat::kJson) {
      ctx.write("report.json", render_report(reports, ReportFormat::kJson));
    }
    *ctx.out << reports.size() << " query claims\n";
  };
}

// ---------------------------------------------------------------------------

ordered_json option_value(const CLI::Option* opt) {
  const bool flag = opt->get_expected_min() == 0;
  const bool multi = opt->get_items_expected_max() > 1;
  if (opt->count() == 0) {
    if (flag) return false;
    if (multi) return ordered_json::array();
    const auto d = opt->get_default_str();
    if (d.empty()) return nullptr;
    return d;
  }
  const auto& res = opt->results();
  if (flag) return opt->as<bool>();
  if (multi) return res;
  return res.empty() ? ordered_json(nullptr) : ordered_json(res.back());
}

ordered_json resolved_options(const CLI::App* app) {
  ordered_json j = ordered_json::object();
  for (const auto* opt : app->get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty()) continue;
    const auto& name = names.front();
    if (name == "help" || name == "config" || name == "out") continue;
    j[name] = option_value(opt);
  }
  return j;
}

spdlog::level::level_enum parse_level(const std::string& s) {
  const auto l = to_lower(s);
  if (l == "error") return spdlog::level::err;
  if (l == "warn" || l == "warning") return spdlog::level::warn;
  if (l == "info") return spdlog::level::info;
  if (l == "debug") return spdlog::level::debug;
  throw ConfigError("unknown log level \"" + s + "\"");
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

void report_error(std::ostream& err, bool as_json, const std::string& type,
                  const std::string& message, int code) {
  if (as_json) {
    ordered_json j;
    j["error"] = {{"type", type}, {"message", message}, {"exit_code", code}};
    err << j.dump() << "\n";
  } else {
    err << "error: " << message << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Claim-pair mining, curriculum planning and contradiction reports", "contramine"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.allow_config_extras(CLI::config_extras_mode::error);

  Globals g;
  app.add_option("--seed", g.seed, "Global seed for every stochastic step");
  app.set_config("--config", "", "JSON file mirroring the flags");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--log-level", g.log_level, "error, warn, info or debug");
  app.add_flag("--json-errors", g.json_errors, "Print errors as JSON on stderr");
  app.add_option("--threads", g.threads, "OpenMP threads (0: runtime default)")
      ->check(CLI::NonNegativeNumber);

  std::vector<Command> cmds;
  cmds.reserve(16);
  add_ingest(app, cmds);
  add_filter(app, cmds);
  add_sample_pairs(app, cmds);
  add_split(app, cmds);
  add_guideline_label(app, cmds);
  add_kappa(app, cmds);
  add_build_mancon(app, cmds);
  add_plan_curriculum(app, cmds);
  add_hp_grid(app, cmds);
  add_train_baseline(app, cmds);
  add_score(app, cmds);
  add_evaluate(app, cmds);
  add_mine(app, cmds);
  add_report(app, cmds);

  const bool json_errors =
      std::find(args.begin(), args.end(), "--json-errors") != args.end();
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, json_errors, "usage", e.what(), kExitUsage);
    if (!json_errors) err << "\n" << app.help();
    return kExitUsage;
  }

  Command* cmd = nullptr;
  for (auto& c : cmds) {
    if (c.app->parsed()) cmd = &c;
  }
  if (cmd == nullptr) {
    err << app.help();
    return kExitUsage;
  }

  Context ctx;
  ctx.out = &out;
  ctx.out_dir = g.out;
  ctx.seed = (cmd->seed_opt != nullptr && cmd->seed_opt->count() > 0) ? cmd->seed : g.seed;
  const std::string name = cmd->app->get_name();

  try {
    const auto level = parse_level(g.log_level);
    if (g.threads > 0) parallel::set_threads(g.threads);
    fs::create_directories(ctx.out_dir / "logs");
    auto console = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    console->set_level(level);
    console->set_pattern("%^%l%$: %v");
    const auto log_path =
        ctx.out_dir / "logs" / (name + "-" + timestamp() + "-" + std::to_string(::getpid()) + ".log");
    auto file = std::make_shared<spdlog::sinks::basic_file_sink_mt>(log_path.string(), true);
    file->set_level(spdlog::level::debug);
    ctx.log = std::make_shared<spdlog::logger>("contramine", spdlog::sinks_init_list{console, file});
    ctx.log->set_level(spdlog::level::debug);
    ctx.log->flush_on(spdlog::level::info);

    ordered_json rc;
    rc["subcommand"] = name;
    rc["seed"] = ctx.seed;
    rc["global"] = resolved_options(&app);
    rc["options"] = resolved_options(cmd->app);
    ctx.log->debug("resolved config: {}", rc.dump());
    ctx.write(name + ".run_config.json", rc.dump(2) + "\n");

    cmd->action(ctx);
    ctx.log->flush();
    return kExitOk;
  } catch (const TransportError& e) {
    report_error(err, json_errors, "transport", e.what(), kExitBackend);
    return kExitBackend;
  } catch (const ProtocolError& e) {
    report_error(err, json_errors, "protocol", e.what(), kExitBackend);
    return kExitBackend;
  } catch (const ValidationError& e) {
    report_error(err, json_errors, "validation", e.what(), kExitData);
    return kExitData;
  } catch (const ParseError& e) {
    report_error(err, json_errors, "parse", e.what(), kExitData);
    return kExitData;
  } catch (const ConfigError& e) {
    report_error(err, json_errors, "config", e.what(), kExitData);
    return kExitData;
  } catch (const Error& e) {
    report_error(err, json_errors, "data", e.what(), kExitData);
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, json_errors, "parse", e.what(), kExitData);
    return kExitData;
  } catch (const std::exception& e) {
    report_error(err, json_errors, "io", e.what(), kExitData);
    return kExitData;
  }
}

}  // namespace contramine::cli
