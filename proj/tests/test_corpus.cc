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

#include <fstream>
#include <random>
#include <sstream>

#include "contramine/corpus.h"
#include "test_support.h"

namespace contramine {
namespace {

using testing::TempDir;

ClaimSet parse(const std::string& s) {
  std::istringstream in(s);
  return parse_claims(in);
}

TEST(Ingest, ThreeRecords) {
  const auto cs = parse(
      R"({"id":"c1","doc_id":"d1","text":"a"})"
      "\n"
      R"({"id":"c2","doc_id":"d1","text":"b","meta":{"title":"T"}})"
      "\n"
      R"({"id":"c3","doc_id":"d2","text":"c"})"
      "\n");
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs[0].id, "c1");
  EXPECT_EQ(cs[2].doc_id, "d2");
  EXPECT_EQ(cs.at("c2").meta["title"], "T");
  EXPECT_EQ(cs.find("zz"), nullptr);
  EXPECT_THROW(cs.at("zz"), ValidationError);
}

TEST(Ingest, EmptyFileGivesEmptySet) {
  TempDir dir;
  std::ofstream(dir / "e.jsonl") << "";
  EXPECT_TRUE(ingest_claims(dir / "e.jsonl").empty());
}

TEST(Ingest, DuplicateIdCitesBothLines) {
  const std::string s =
      R"({"id":"c0","doc_id":"d","text":"x"})"
      "\n"
      R"({"id":"c1","doc_id":"d","text":"x"})"
      "\n"
      R"({"id":"c2","doc_id":"d","text":"x"})"
      "\n"
      R"({"id":"c3","doc_id":"d","text":"x"})"
      "\n"
      R"({"id":"c1","doc_id":"d","text":"y"})"
      "\n";
  try {
    parse(s);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("c1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("5"), std::string::npos) << msg;
  }
}

TEST(Ingest, MalformedLineNamesLine) {
  try {
    parse(R"({"id":"c0","doc_id":"d","text":"x"})"
          "\n\n{not json}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse(R"({"id":"c0","text":"x"})"), ParseError);
  EXPECT_THROW(parse(R"({"id":"c0","doc_id":"d","text":"   "})"), ValidationError);
}

TEST(Ingest, RoundTrip) {
  const auto cs = testing::synthetic_claims(30, {"remdesivir"}, 3);
  const auto again = parse(serialize_claims(cs));
  EXPECT_EQ(again, cs);
  TempDir dir;
  std::ofstream(dir / "c.jsonl") << serialize_claims(cs);
  EXPECT_EQ(ingest_claims(dir / "c.jsonl"), cs);
}

TEST(Filter, DefaultTerms) {
  const ClaimSet cs({{"a", "d", "SARS-CoV-2 viral load declined", nullptr},
                     {"b", "d", "influenza treatment improved", nullptr}});
  const auto kept = filter_covid_claims(cs, {"sars-cov-2", "2019-ncov"});
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].id, "a");
  EXPECT_TRUE(filter_covid_claims(ClaimSet{}, {"x"}).empty());
  EXPECT_THROW(filter_covid_claims(cs, {}), ConfigError);
}

TEST(Filter, SubsetAndIdempotent) {
  const auto cs = testing::synthetic_claims(60, {"remdesivir", "tocilizumab"}, 5);
  const std::vector<std::string> terms = {"tocilizumab", "DEATH"};
  const auto once = filter_covid_claims(cs, terms);
  EXPECT_EQ(filter_covid_claims(once, terms), once);
  for (const auto& c : once) {
    ASSERT_NE(cs.find(c.id), nullptr);
    const auto low = to_lower(c.text);
    EXPECT_TRUE(low.find("tocilizumab") != std::string::npos ||
                low.find("death") != std::string::npos);
  }
  std::size_t expected = 0;
  for (const auto& c : cs) {
    const auto low = to_lower(c.text);
    expected += (low.find("tocilizumab") != std::string::npos ||
                 low.find("death") != std::string::npos);
  }
  EXPECT_EQ(once.size(), expected);
}

TEST(DrugMentions, SubstringSemantics) {
  const auto lex = DrugLexicon::treatment_candidates();
  EXPECT_EQ(find_drug_mentions("hydroxychloroquine reduced mortality", lex),
            (std::vector<std::string>{"hydroxychloroquine", "chloroquine"}));
  EXPECT_EQ(find_drug_mentions("Vitamin D supplementation helped", lex),
            (std::vector<std::string>{"vitamin d"}));
  EXPECT_TRUE(find_drug_mentions("the placebo arm fared worse", lex).empty());
}

TEST(DrugMentions, AgreesWithNaiveScan) {
  const auto lex = DrugLexicon::treatment_candidates();
  const std::vector<std::string> pieces = {"Remdesivir", "chloro", "quine", "hydroxy", " ",
                                           "vitamin", " D", "DEXAMETHASONE", "x", "lopinavir",
                                           "tocilizumab", "-"};
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(0, 8)(rng);
    for (int i = 0; i < n; ++i) {
      text += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
    }
    std::vector<std::string> expected;
    for (const auto& d : lex.drugs()) {
      bool hit = false;
      for (std::size_t s = 0; s + d.size() <= text.size() && !hit; ++s) {
        bool eq = true;
        for (std::size_t k = 0; k < d.size() && eq; ++k) {
          eq = std::tolower(static_cast<unsigned char>(text[s + k])) == d[k];
        }
        hit = eq;
      }
      if (hit) expected.push_back(d);
    }
    EXPECT_EQ(find_drug_mentions(text, lex), expected) << text;
  }
}

TEST(Lexicons, Validation) {
  EXPECT_THROW(DrugLexicon({"a", "A"}), ValidationError);
  EXPECT_THROW(DrugLexicon({" "}), ValidationError);
  EXPECT_EQ(DrugLexicon({"  Remdesivir "}).drugs(), std::vector<std::string>{"remdesivir"});
  EXPECT_EQ(DrugLexicon::treatment_candidates().size(), 7u);
  EXPECT_EQ(TopicLexicon::default_topics().topics(),
            (std::vector<std::string>{"mortality", "effective treatment", "toxicity"}));
  EXPECT_THROW(TopicLexicon({"x", "x"}), ValidationError);
  TempDir dir;
  std::ofstream(dir / "drugs.txt") << "# list\nremdesivir\nfavipiravir\n";
  EXPECT_EQ(DrugLexicon::load(dir / "drugs.txt").drugs(),
            (std::vector<std::string>{"remdesivir", "favipiravir"}));
}

TEST(Claims, IdenticalTextDifferentIdsAreKept) {
  const ClaimSet cs({{"a", "d1", "same", nullptr}, {"b", "d2", "same", nullptr}});
  EXPECT_EQ(cs.size(), 2u);
}

}  // namespace
}  // namespace contramine
