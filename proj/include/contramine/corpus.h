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

#ifndef CONTRAMINE_CORPUS_H_
#define CONTRAMINE_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace contramine {

// One extracted research claim with its source document.
struct Claim {
  std::string id;
  std::string doc_id;
  std::string text;
  // Free-form provenance (title, date, venue, ...). Null when absent.
  nlohmann::ordered_json meta;

  friend bool operator==(const Claim&, const Claim&) = default;
};

nlohmann::ordered_json claim_to_json(const Claim& claim);

// An ordered, id-indexed collection of claims. Immutable once built; safe to
// share between concurrent readers.
class ClaimSet {
 public:
  ClaimSet() = default;
  // Throws ValidationError on a duplicate id or a blank text.
  explicit ClaimSet(std::vector<Claim> claims);

  const std::vector<Claim>& claims() const { return claims_; }
  std::size_t size() const { return claims_.size(); }
  bool empty() const { return claims_.empty(); }
  const Claim& operator[](std::size_t i) const { return claims_[i]; }

  auto begin() const { return claims_.begin(); }
  auto end() const { return claims_.end(); }

  // nullptr when the id is unknown.
  const Claim* find(std::string_view id) const;
  // Throws ValidationError when the id is unknown.
  const Claim& at(std::string_view id) const;

  friend bool operator==(const ClaimSet& a, const ClaimSet& b) {
    return a.claims_ == b.claims_;
  }

 private:
  std::vector<Claim> claims_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Parses claim JSONL: {"id": str, "doc_id": str, "text": str, "meta": obj?}.
// Blank lines are skipped. Malformed lines raise ParseError naming the line;
// duplicate ids raise ValidationError naming both lines.
ClaimSet parse_claims(std::istream& in);
ClaimSet ingest_claims(const std::filesystem::path& path);

std::string serialize_claims(const ClaimSet& claims);

// Keeps the claims whose lowercased text contains at least one lowercased
// term. Throws ConfigError when `terms` is empty.
ClaimSet filter_covid_claims(const ClaimSet& claims,
                             const std::vector<std::string>& terms);

std::vector<std::string> default_covid_terms();

// Lowercase, duplicate-free list of drug names, in the order given.
class DrugLexicon {
 public:
  // Entries are lowercased and trimmed. Throws ValidationError on empty or
  // duplicate entries.
  explicit DrugLexicon(std::vector<std::string> drugs);

  static DrugLexicon load(const std::filesystem::path& path);
  // hydroxychloroquine, chloroquine, tocilizumab, remdesivir, vitamin d,
  // lopinavir, dexamethasone.
  static DrugLexicon treatment_candidates();

  const std::vector<std::string>& drugs() const { return drugs_; }
  std::size_t size() const { return drugs_.size(); }

 private:
  std::vector<std::string> drugs_;
};

// Duplicate-free list of topic phrases.
class TopicLexicon {
 public:
  explicit TopicLexicon(std::vector<std::string> topics);

  static TopicLexicon load(const std::filesystem::path& path);
  // mortality, effective treatment, toxicity.
  static TopicLexicon default_topics();

  const std::vector<std::string>& topics() const { return topics_; }
  std::size_t size() const { return topics_.size(); }

 private:
  std::vector<std::string> topics_;
};

// Every lexicon drug that occurs as a case-insensitive substring of the claim
// text, in lexicon order. Raw substring semantics: "chloroquine" matches
// inside "hydroxychloroquine".
std::vector<std::string> find_drug_mentions(const Claim& claim,
                                            const DrugLexicon& lexicon);
std::vector<std::string> find_drug_mentions(std::string_view text,
                                            const DrugLexicon& lexicon);

}  // namespace contramine

#endif  // CONTRAMINE_CORPUS_H_
