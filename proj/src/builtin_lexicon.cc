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

#include <string>
#include <unordered_map>
#include <utility>

#include "contramine/textrep.h"

namespace contramine {

namespace {

// Efficacy / safety vocabulary of treatment claims, on the VADER valence
// scale. Hand-curated for tests and small runs; load a full lexicon from file
// for real corpora.
constexpr std::pair<const char*, double> kEntries[] = {
    // Benefit.
    {"effective", 2.1}, {"effectively", 1.9}, {"efficacy", 1.6}, {"efficacious", 2.0},
    {"beneficial", 2.2}, {"benefit", 2.0}, {"benefits", 1.9}, {"benefited", 1.9},
    {"improve", 1.9}, {"improved", 2.0}, {"improves", 1.9}, {"improving", 1.8},
    {"improvement", 2.0}, {"improvements", 1.9}, {"reduce", 0.6}, {"reduced", 0.6},
    {"recovery", 2.1}, {"recovered", 1.9}, {"recover", 1.7}, {"cure", 2.6},
    {"cured", 2.6}, {"curative", 2.4}, {"successful", 2.6}, {"success", 2.5},
    {"successfully", 2.4}, {"protective", 1.8}, {"protect", 1.6}, {"protects", 1.6},
    {"protected", 1.5}, {"promising", 2.0}, {"favorable", 2.0}, {"favourable", 2.0},
    {"positive", 2.2}, {"safe", 1.9}, {"safely", 1.8}, {"safety", 1.8},
    {"tolerated", 1.4}, {"tolerable", 1.3}, {"well", 1.1}, {"superior", 2.1},
    {"better", 1.9}, {"best", 3.0}, {"good", 1.9}, {"great", 3.1},
    {"excellent", 2.7}, {"potent", 1.6}, {"significant", 1.0}, {"robust", 1.6},
    {"resolved", 1.6}, {"resolution", 1.5}, {"survival", 1.7}, {"survived", 1.7},
    {"survive", 1.6}, {"alleviate", 1.7}, {"alleviated", 1.7}, {"relief", 2.1},
    {"relieved", 1.9}, {"helpful", 1.9}, {"helped", 1.6}, {"help", 1.7},
    {"helps", 1.6}, {"support", 1.7}, {"supports", 1.6}, {"supported", 1.5},
    {"supportive", 1.8}, {"advantage", 1.8}, {"advantageous", 2.0}, {"gain", 1.6},
    {"enhanced", 1.6}, {"enhance", 1.6}, {"optimal", 2.0}, {"remission", 1.8},
    {"restored", 1.6}, {"restore", 1.5}, {"prevent", 1.2}, {"prevented", 1.3},
    {"prevention", 1.2}, {"preventive", 1.2}, {"inhibit", 0.6}, {"inhibited", 0.6},
    {"inhibits", 0.6}, {"suppressed", 0.4}, {"clearance", 1.2}, {"cleared", 1.2},
    {"effectiveness", 1.9}, {"encouraging", 2.1}, {"confirmed", 1.1}, {"confirm", 1.0},
    {"valuable", 2.1}, {"useful", 1.9}, {"reliable", 1.9}, {"stable", 1.2},
    {"stabilized", 1.2}, {"healing", 1.9}, {"healed", 1.9}, {"active", 0.8},
    {"activity", 0.6}, {"agree", 1.5}, {"consistent", 1.0}, {"strong", 2.3},
    {"stronger", 2.0}, {"strongest", 2.2}, {"win", 2.8}, {"hope", 1.9},
    {"hopeful", 2.0}, {"candidate", 0.4}, {"lower", 0.3}, {"decreased", 0.3},
    // Harm.
    {"ineffective", -2.1}, {"inefficacious", -2.0}, {"harmful", -2.4}, {"harm", -2.5},
    {"harms", -2.3}, {"worse", -2.1}, {"worsened", -2.2}, {"worsening", -2.1},
    {"worst", -3.1}, {"death", -2.9}, {"deaths", -2.8}, {"died", -2.6},
    {"die", -2.9}, {"dying", -2.8}, {"mortality", -1.9}, {"fatal", -3.0},
    {"fatality", -2.8}, {"lethal", -3.0}, {"toxic", -2.7}, {"toxicity", -2.5},
    {"toxicities", -2.4}, {"adverse", -2.1}, {"risk", -1.1}, {"risks", -1.1},
    {"risky", -1.4}, {"danger", -2.4}, {"dangerous", -2.1}, {"unsafe", -2.2},
    {"failure", -2.3}, {"failures", -2.2}, {"failed", -2.3}, {"fail", -2.5},
    {"fails", -2.1}, {"negative", -2.1}, {"poor", -2.1}, {"poorer", -2.0},
    {"severe", -1.6}, {"severity", -1.4}, {"serious", -0.8}, {"complication", -1.6},
    {"complications", -1.7}, {"side", -0.2}, {"arrhythmia", -1.7}, {"arrhythmias", -1.7},
    {"cardiotoxicity", -2.6}, {"prolongation", -1.0}, {"prolonged", -0.8}, {"injury", -2.3},
    {"damage", -2.2}, {"damaged", -2.1}, {"deterioration", -2.2}, {"deteriorated", -2.1},
    {"hospitalization", -1.0}, {"hospitalized", -0.9}, {"infection", -1.6}, {"infected", -1.6},
    {"disease", -1.5}, {"illness", -1.8}, {"sick", -1.9}, {"pain", -2.3},
    {"suffering", -2.5}, {"suffered", -2.2}, {"problem", -1.7}, {"problems", -1.7},
    {"concern", -1.2}, {"concerns", -1.2}, {"concerning", -1.3}, {"limited", -0.9},
    {"insufficient", -1.6}, {"inadequate", -1.7}, {"unable", -1.7}, {"lack", -1.3},
    {"lacked", -1.3}, {"lacking", -1.4}, {"controversial", -0.8}, {"disappointing", -2.1},
    {"unfavorable", -2.0}, {"unfavourable", -2.0}, {"inferior", -1.8}, {"weak", -1.9},
    {"weaker", -1.9}, {"useless", -1.8}, {"futile", -1.9}, {"futility", -1.9},
    {"contraindicated", -1.7}, {"discontinued", -1.1}, {"discontinuation", -1.1},
    {"withdrawn", -1.0}, {"stopped", -0.9}, {"halted", -1.2}, {"increased", -0.2},
    {"elevated", -0.6}, {"hypoxia", -1.8}, {"shock", -1.9},
    {"critical", -1.0}, {"collapse", -2.2}, {"loss", -1.3}, {"lost", -1.3},
    {"bias", -1.0}, {"unclear", -0.8}, {"doubt", -1.5}, {"doubtful", -1.5},
    {"uncertain", -1.2}, {"uncertainty", -1.0},
};

}  // namespace

PolarityLexicon PolarityLexicon::builtin() {
  std::unordered_map<std::string, double> valence;
  for (const auto& [token, v] : kEntries) valence.emplace(token, v);
  return PolarityLexicon(std::move(valence));
}

}  // namespace contramine
