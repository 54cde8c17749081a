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

#include "contramine/corpus.h"

#include <set>
#include <sstream>
#include <utility>

#include "contramine/common.h"

namespace contramine {

using nlohmann::ordered_json;

namespace {

std::string required_string(const ordered_json& obj, const char* key,
                            std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError("line " + std::to_string(line) + ": missing string field \"" +
                     key + "\"");
  }
  return it->get<std::string>();
}

template <typename Container>
void check_entries(const Container& entries, const char* what) {
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.empty()) throw ValidationError(std::string(what) + " lexicon has an empty entry");
    if (!seen.insert(e).second) {
      throw ValidationError(std::string(what) + " lexicon has duplicate entry \"" + e + "\"");
    }
  }
}

}  // namespace

ordered_json claim_to_json(const Claim& claim) {
  ordered_json j;
  j["id"] = claim.id;
  j["doc_id"] = claim.doc_id;
  j["text"] = claim.text;
  if (!claim.meta.is_null()) j["meta"] = claim.meta;
  return j;
}

ClaimSet::ClaimSet(std::vector<Claim> claims) : claims_(std::move(claims)) {
  index_.reserve(claims_.size());
  for (std::size_t i = 0; i < claims_.size(); ++i) {
    const auto& c = claims_[i];
    if (trim(c.text).empty()) {
      throw ValidationError("claim \"" + c.id + "\" has empty text");
    }
    if (!index_.emplace(c.id, i).second) {
      throw ValidationError("duplicate claim id \"" + c.id + "\"");
    }
  }
}

const Claim* ClaimSet::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &claims_[it->second];
}

const Claim& ClaimSet::at(std::string_view id) const {
  const Claim* c = find(id);
  if (c == nullptr) throw ValidationError("unknown claim id \"" + std::string(id) + "\"");
  return *c;
}

ClaimSet parse_claims(std::istream& in) {
  std::vector<Claim> claims;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object()) {
      throw ParseError("line " + std::to_string(lineno) + ": expected a JSON object");
    }
    Claim c;
    c.id = required_string(j, "id", lineno);
    c.doc_id = required_string(j, "doc_id", lineno);
    c.text = required_string(j, "text", lineno);
    if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
      if (!it->is_object()) {
        throw ParseError("line " + std::to_string(lineno) + ": \"meta\" must be an object");
      }
      c.meta = *it;
    }
    if (trim(c.text).empty()) {
      throw ValidationError("line " + std::to_string(lineno) + ": claim \"" + c.id +
                            "\" has empty text");
    }
    auto [it, inserted] = first_line.emplace(c.id, lineno);
    if (!inserted) {
      throw ValidationError("duplicate claim id \"" + c.id + "\" on lines " +
                            std::to_string(it->second) + " and " + std::to_string(lineno));
    }
    claims.push_back(std::move(c));
  }
  return ClaimSet(std::move(claims));
}

ClaimSet ingest_claims(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_claims(in);
}

std::string serialize_claims(const ClaimSet& claims) {
  std::string out;
  for (const auto& c : claims) {
    out += claim_to_json(c).dump();
    out += '\n';
  }
  return out;
}

ClaimSet filter_covid_claims(const ClaimSet& claims,
                             const std::vector<std::string>& terms) {
  if (terms.empty()) throw ConfigError("filter terms must be non-empty");
  std::vector<std::string> lowered;
  lowered.reserve(terms.size());
  for (const auto& t : terms) lowered.push_back(to_lower(t));

  std::vector<Claim> kept;
  for (const auto& c : claims) {
    const auto text = to_lower(c.text);
    for (const auto& t : lowered) {
      if (contains_ci(text, t)) {
        kept.push_back(c);
        break;
      }
    }
  }
  return ClaimSet(std::move(kept));
}

std::vector<std::string> default_covid_terms() {
  return {"covid-19", "covid19", "sars-cov-2", "2019-ncov", "coronavirus disease 2019",
          "novel coronavirus"};
}

DrugLexicon::DrugLexicon(std::vector<std::string> drugs) {
  drugs_.reserve(drugs.size());
  for (auto& d : drugs) drugs_.push_back(to_lower(trim(d)));
  check_entries(drugs_, "drug");
}

DrugLexicon DrugLexicon::load(const std::filesystem::path& path) {
  return DrugLexicon(read_list_file(path));
}

DrugLexicon DrugLexicon::treatment_candidates() {
  return DrugLexicon({"hydroxychloroquine", "chloroquine", "tocilizumab", "remdesivir",
                      "vitamin d", "lopinavir", "dexamethasone"});
}

TopicLexicon::TopicLexicon(std::vector<std::string> topics) {
  topics_.reserve(topics.size());
  for (auto& t : topics) topics_.push_back(trim(t));
  check_entries(topics_, "topic");
}

TopicLexicon TopicLexicon::load(const std::filesystem::path& path) {
  return TopicLexicon(read_list_file(path));
}

TopicLexicon TopicLexicon::default_topics() {
  return TopicLexicon({"mortality", "effective treatment", "toxicity"});
}

std::vector<std::string> find_drug_mentions(std::string_view text,
                                            const DrugLexicon& lexicon) {
  const auto lowered = to_lower(text);
  std::vector<std::string> out;
  for (const auto& d : lexicon.drugs()) {
    if (contains_ci(lowered, d)) out.push_back(d);
  }
  return out;
}

std::vector<std::string> find_drug_mentions(const Claim& claim,
                                            const DrugLexicon& lexicon) {
  return find_drug_mentions(claim.text, lexicon);
}

}  // namespace contramine
