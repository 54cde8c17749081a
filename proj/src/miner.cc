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

#include "contramine/miner.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "contramine/common.h"

namespace contramine {

using nlohmann::json;
using nlohmann::ordered_json;

void MinerConfig::validate() const {
  if (drugs_of_interest.empty()) throw ConfigError("miner: no drugs of interest");
  if (!(sim_threshold >= 0.0 && sim_threshold <= 1.0)) {
    throw ConfigError("miner: sim_threshold must lie in [0, 1]");
  }
  if (max_papers && *max_papers == 0) throw ConfigError("miner: max_papers must be positive");
  if (contradiction_threshold &&
      !(*contradiction_threshold >= 0.0 && *contradiction_threshold <= 1.0)) {
    throw ConfigError("miner: contradiction_threshold must lie in [0, 1]");
  }
}

std::vector<const Claim*> miner_eligible_claims(const ClaimSet& claims, const MinerConfig& cfg,
                                                std::uint64_t seed) {
  cfg.validate();
  const DrugLexicon drugs(cfg.drugs_of_interest);
  std::vector<const Claim*> out;
  for (const auto& c : claims) {
    if (!find_drug_mentions(c, drugs).empty()) out.push_back(&c);
  }
  if (!cfg.max_papers) return out;

  std::vector<std::string> docs;
  for (const auto* c : out) docs.push_back(c->doc_id);
  std::sort(docs.begin(), docs.end());
  docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
  if (docs.size() <= *cfg.max_papers) return out;
  std::set<std::string> keep;
  for (auto i : sample_indices(docs.size(), *cfg.max_papers, seed)) keep.insert(docs[i]);
  std::erase_if(out, [&](const Claim* c) { return !keep.contains(c->doc_id); });
  return out;
}

namespace {

struct Eligible {
  std::vector<const Claim*> claims;
  std::vector<std::vector<std::string>> mentions;
  std::vector<double> pol;
  std::vector<SentenceEmbedding> emb;
};

Eligible prepare(const ClaimSet& claims, const MinerConfig& cfg, const TextResources& text,
                 std::uint64_t seed, bool parallel) {
  if (text.encoder == nullptr) throw ConfigError("miner: a sentence encoder is required");
  Eligible e;
  e.claims = miner_eligible_claims(claims, cfg, seed);
  const DrugLexicon drugs(cfg.drugs_of_interest);
  std::vector<std::string> texts;
  for (const auto* c : e.claims) {
    e.mentions.push_back(find_drug_mentions(*c, drugs));
    e.pol.push_back(text.lexicon ? polarity(c->text, *text.lexicon).value : 0.0);
    texts.push_back(c->text);
  }
  e.emb = parallel ? embed_batch(*text.encoder, texts) : embed_batch_serial(*text.encoder, texts);
  return e;
}

std::string pair_drug(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  // Mentions are in lexicon order, so the first shared one is the first
  // drug of interest both claims mention.
  for (const auto& d : x) {
    if (std::find(y.begin(), y.end(), d) != y.end()) return d;
  }
  return std::min(x.front(), y.front()) + "+" + std::max(x.front(), y.front());
}

void pairs_for_row(const Eligible& e, std::size_t i, double threshold,
                   std::vector<ClaimPair>& out) {
  for (std::size_t j = i + 1; j < e.claims.size(); ++j) {
    if (cosine(e.emb[i].vector, e.emb[j].vector) <= threshold) continue;
    out.push_back(make_claim_pair(e.claims[i]->id, e.claims[j]->id,
                                  pair_drug(e.mentions[i], e.mentions[j]), "", e.pol[i],
                                  e.pol[j]));
  }
}

void sort_by_key(std::vector<ClaimPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const ClaimPair& x, const ClaimPair& y) { return x.key() < y.key(); });
}

}  // namespace

std::vector<ClaimPair> mine_candidates(const ClaimSet& claims, const MinerConfig& cfg,
                                       const TextResources& text, std::uint64_t seed) {
  const Eligible e = prepare(claims, cfg, text, seed, true);
  const auto n = static_cast<std::ptrdiff_t>(e.claims.size());
  std::vector<std::vector<ClaimPair>> rows(e.claims.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    pairs_for_row(e, static_cast<std::size_t>(i), cfg.sim_threshold,
                  rows[static_cast<std::size_t>(i)]);
  }
  std::vector<ClaimPair> out;
  for (auto& r : rows) std::move(r.begin(), r.end(), std::back_inserter(out));
  sort_by_key(out);
  return out;
}

std::vector<ClaimPair> mine_candidates_serial(const ClaimSet& claims, const MinerConfig& cfg,
                                              const TextResources& text, std::uint64_t seed) {
  const Eligible e = prepare(claims, cfg, text, seed, false);
  std::vector<ClaimPair> out;
  for (std::size_t i = 0; i < e.claims.size(); ++i) pairs_for_row(e, i, cfg.sim_threshold, out);
  sort_by_key(out);
  return out;
}

// ---------------------------------------------------------------------------
// Ranking.

ordered_json scored_pair_to_json(const ScoredPair& s) {
  ordered_json j = pair_to_json(s.pair);
  j["scores"] = {{"entailment", s.scores.entailment},
                 {"neutral", s.scores.neutral},
                 {"contradiction", s.scores.contradiction}};
  return j;
}

ScoredPair scored_pair_from_json(const json& j) {
  ScoredPair s;
  s.pair = pair_from_json(j);
  try {
    const auto& sc = j.at("scores");
    s.scores.entailment = sc.at("entailment").get<double>();
    s.scores.neutral = sc.at("neutral").get<double>();
    s.scores.contradiction = sc.at("contradiction").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("scored pair: ") + e.what());
  }
  s.scores.validate(1e-6);
  return s;
}

std::vector<ScoredPair> select_contradictions(std::vector<ScoredPair> scored,
                                              std::optional<double> threshold) {
  std::erase_if(scored, [&](const ScoredPair& s) {
    if (threshold) return !(s.p_contradiction() >= *threshold);
    return s.scores.argmax() != Label3::kContradiction;
  });
  std::sort(scored.begin(), scored.end(), [](const ScoredPair& x, const ScoredPair& y) {
    if (x.p_contradiction() != y.p_contradiction()) return x.p_contradiction() > y.p_contradiction();
    return x.pair.key() < y.pair.key();
  });
  return scored;
}

namespace {

std::unordered_map<std::string, ScoredPair> load_checkpoint(const std::filesystem::path& path) {
  std::unordered_map<std::string, ScoredPair> done;
  if (!std::filesystem::exists(path)) return done;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  std::size_t lineno = 0;
  std::streamoff line_start = 0;
  std::optional<std::streamoff> torn_at;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line_start;
    line_start += static_cast<std::streamoff>(line.size()) + 1;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      // A torn final line from a killed run is dropped; anything earlier is
      // corruption.
      if (in.peek() == std::char_traits<char>::eof()) {
        torn_at = start;
        break;
      }
      throw ParseError("checkpoint " + path.string() + " line " + std::to_string(lineno) +
                       ": invalid JSON");
    }
    auto s = scored_pair_from_json(j);
    auto key = s.pair.key();
    done.insert_or_assign(std::move(key), std::move(s));
  }
  in.close();
  // Cut the torn tail so appended entries start on a fresh line.
  if (torn_at) std::filesystem::resize_file(path, static_cast<std::uintmax_t>(*torn_at));
  return done;
}

}  // namespace

std::vector<ScoredPair> rank_contradictions(const std::vector<ClaimPair>& pairs,
                                            const ClaimSet& claims, Scorer& scorer,
                                            const RankOptions& options) {
  if (options.checkpoint_every == 0) throw ConfigError("checkpoint_every must be positive");
  std::unordered_map<std::string, ScoredPair> done;
  std::ofstream ckpt;
  if (options.checkpoint) {
    done = load_checkpoint(*options.checkpoint);
    if (options.checkpoint->has_parent_path()) {
      std::filesystem::create_directories(options.checkpoint->parent_path());
    }
    bool needs_newline = false;
    if (std::filesystem::exists(*options.checkpoint) &&
        std::filesystem::file_size(*options.checkpoint) > 0) {
      std::ifstream tail(*options.checkpoint, std::ios::binary | std::ios::ate);
      tail.seekg(-1, std::ios::end);
      needs_newline = tail.get() != '\n';
    }
    ckpt.open(*options.checkpoint, std::ios::app);
    if (!ckpt) throw ConfigError("cannot open checkpoint " + options.checkpoint->string());
    if (needs_newline) ckpt << '\n';
  }

  std::vector<ScoredPair> scored;
  std::vector<const ClaimPair*> todo;
  for (const auto& p : pairs) {
    auto it = done.find(p.key());
    if (it != done.end() && it->second.pair == p) {
      scored.push_back(it->second);
    } else {
      todo.push_back(&p);
    }
  }

  for (std::size_t start = 0; start < todo.size(); start += options.checkpoint_every) {
    const std::size_t end = std::min(todo.size(), start + options.checkpoint_every);
    std::vector<TextPair> batch;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(TextPair{claims.at(todo[i]->a_id).text, claims.at(todo[i]->b_id).text});
    }
    auto dist = scorer.score_batch(batch);
    if (dist.size() != batch.size()) {
      throw ProtocolError("scorer returned " + std::to_string(dist.size()) + " scores for " +
                          std::to_string(batch.size()) + " pairs");
    }
    for (std::size_t i = start; i < end; ++i) {
      ScoredPair s{*todo[i], dist[i - start]};
      if (ckpt.is_open()) ckpt << scored_pair_to_json(s).dump() << '\n';
      scored.push_back(std::move(s));
    }
    if (ckpt.is_open()) ckpt.flush();
  }
  return select_contradictions(std::move(scored), options.contradiction_threshold);
}

// ---------------------------------------------------------------------------
// Reports.

std::vector<ContradictionReport> build_reports(const std::vector<ScoredPair>& scored,
                                               const ClaimSet& claims) {
  std::map<std::string, ContradictionReport> by_claim;
  auto add = [&](const std::string& query, const std::string& other, double p) {
    auto& r = by_claim[query];
    if (r.query_claim.id.empty()) r.query_claim = claims.at(query);
    r.hits.push_back(ReportHit{claims.at(other), p});
  };
  for (const auto& s : scored) {
    add(s.pair.a_id, s.pair.b_id, s.p_contradiction());
    add(s.pair.b_id, s.pair.a_id, s.p_contradiction());
  }
  std::vector<ContradictionReport> out;
  for (auto& [id, r] : by_claim) {
    std::sort(r.hits.begin(), r.hits.end(), [](const ReportHit& x, const ReportHit& y) {
      if (x.p_contradiction != y.p_contradiction) return x.p_contradiction > y.p_contradiction;
      return x.claim.id < y.claim.id;
    });
    std::set<std::string> docs;
    for (const auto& h : r.hits) docs.insert(h.claim.doc_id);
    r.unique_docs = docs.size();
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ContradictionReport& x, const ContradictionReport& y) {
                     return x.unique_docs > y.unique_docs;
                   });
  return out;
}

ReportFormat parse_report_format(std::string_view s) {
  const auto l = to_lower(s);
  if (l == "markdown" || l == "md") return ReportFormat::kMarkdown;
  if (l == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format \"" + std::string(s) + "\"");
}

namespace {

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : normalize_whitespace(s)) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string prob(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

std::string render_markdown(const std::vector<ContradictionReport>& reports) {
  std::ostringstream os;
  os << "# Contradiction report\n\n";
  if (reports.empty()) {
    os << "## No contradictions found\n\nNo claim pair was predicted to contradict.\n";
    return os.str();
  }
  std::size_t hits = 0;
  for (const auto& r : reports) hits += r.hits.size();
  os << reports.size() << " query claims, " << hits / 2 << " contradicting pairs.\n";
  for (const auto& r : reports) {
    os << "\n## " << md_cell(r.query_claim.id) << " (" << md_cell(r.query_claim.doc_id)
       << ")\n\n> " << md_cell(r.query_claim.text) << "\n\nUnique documents: " << r.unique_docs
       << "\n\n| Rank | Claim | Document | p(contradiction) | Text |\n|---:|---|---|---:|---|\n";
    for (std::size_t i = 0; i < r.hits.size(); ++i) {
      const auto& h = r.hits[i];
      os << "| " << i + 1 << " | " << md_cell(h.claim.id) << " | " << md_cell(h.claim.doc_id)
         << " | " << prob(h.p_contradiction) << " | " << md_cell(h.claim.text) << " |\n";
    }
  }
  return os.str();
}

ordered_json report_to_json(const ContradictionReport& r) {
  ordered_json j;
  j["query_claim"] = claim_to_json(r.query_claim);
  j["unique_docs"] = r.unique_docs;
  auto hits = ordered_json::array();
  for (const auto& h : r.hits) {
    ordered_json hj;
    hj["claim"] = claim_to_json(h.claim);
    hj["p_contradiction"] = h.p_contradiction;
    hj["doc_id"] = h.claim.doc_id;
    hits.push_back(std::move(hj));
  }
  j["hits"] = std::move(hits);
  return j;
}

Claim claim_from_json(const json& j) {
  Claim c;
  c.id = j.at("id").get<std::string>();
  c.doc_id = j.at("doc_id").get<std::string>();
  c.text = j.at("text").get<std::string>();
  if (j.contains("meta")) c.meta = ordered_json::parse(j.at("meta").dump());
  return c;
}

}  // namespace

std::string render_report(const std::vector<ContradictionReport>& reports, ReportFormat format) {
  if (format == ReportFormat::kMarkdown) return render_markdown(reports);
  ordered_json j;
  auto arr = ordered_json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  j["reports"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::vector<ContradictionReport> parse_reports_json(std::string_view doc) {
  std::vector<ContradictionReport> out;
  try {
    const auto j = json::parse(doc);
    for (const auto& rj : j.at("reports")) {
      ContradictionReport r;
      r.query_claim = claim_from_json(rj.at("query_claim"));
      r.unique_docs = rj.at("unique_docs").get<std::size_t>();
      for (const auto& hj : rj.at("hits")) {
        ReportHit h{claim_from_json(hj.at("claim")), hj.at("p_contradiction").get<double>()};
        if (hj.at("doc_id").get<std::string>() != h.claim.doc_id) {
          throw ParseError("report hit doc_id disagrees with its claim");
        }
        r.hits.push_back(std::move(h));
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  return out;
}

}  // namespace contramine
