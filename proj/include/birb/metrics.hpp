// Copyright 2026 The birb-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef BIRB_METRICS_HPP
#define BIRB_METRICS_HPP

#include <map>
#include <string>
#include <vector>

#include "birb/common.hpp"

namespace birb::metrics {

struct AucRecord {
  std::string species;
  std::string corpus;
  std::string provider_tag;
  int k = 0;
  int effective_k = 0;
  int sample_index = 0;
  double roc_auc = 0.0;
  int n_pos = 0;
  int n_neg = 0;
};

struct SkippedSpecies {
  std::string species;
  std::string corpus;
  std::string reason;
};

// Grouping keys used in the aggregated report.
struct GroupKey {
  std::string provider_tag;
  std::string corpus;
  int k = 0;

  bool operator<(const GroupKey& o) const {
    if (provider_tag != o.provider_tag) return provider_tag < o.provider_tag;
    if (corpus != o.corpus) return corpus < o.corpus;
    return k < o.k;
  }
};

struct EvalReport {
  std::vector<AucRecord> records;
  // (provider, corpus, k) -> species -> mean AUC over samples
  std::map<GroupKey, std::map<std::string, double>> per_species_mean;
  // (provider, corpus, k) -> geometric mean over species
  std::map<GroupKey, double> croc_auc;
  std::vector<SkippedSpecies> skipped_species;
};

// P(score(pos) > score(neg)) + 0.5 * P(tie), computed with Mann-Whitney rank
// statistics in O((P+N) log (P+N)). Equal to brute-force pair enumeration.
double roc_auc(const std::vector<double>& positive_scores,
               const std::vector<double>& negative_scores);

double average_over_samples(const std::vector<double>& values);

struct GeometricMeanResult {
  double value = 0.0;
  std::vector<std::string> skipped;  // species with non-positive values
};

// exp(mean(log v)) over species with v > 0. Throws DataError when every
// species is skipped.
GeometricMeanResult geometric_croc_auc(const std::map<std::string, double>& per_species);

// Aggregates raw records into per-species means and geometric cROC-AUC per
// (provider, corpus, k).
EvalReport build_report(const std::vector<AucRecord>& records,
                        const std::vector<SkippedSpecies>& skipped);

// --- serialization ---------------------------------------------------------

void write_results_jsonl(const std::string& path, const std::vector<AucRecord>& records,
                         const std::vector<SkippedSpecies>& skipped);
void read_results_jsonl(const std::string& path, std::vector<AucRecord>& records,
                        std::vector<SkippedSpecies>& skipped);

std::string report_to_json(const EvalReport& report);
// One row per provider, one column per (corpus, k) cell of croc_auc.
std::string report_to_csv(const EvalReport& report);

}  // namespace birb::metrics

#endif  // BIRB_METRICS_HPP
