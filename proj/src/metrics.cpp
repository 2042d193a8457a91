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

#include <algorithm>
#include <cmath>

#include "birb/metrics.hpp"

namespace birb::metrics {

double roc_auc(const std::vector<double>& positive_scores,
               const std::vector<double>& negative_scores) {
  if (positive_scores.empty() || negative_scores.empty())
    throw DataError("roc_auc: need at least one positive and one negative score");
  for (double s : positive_scores)
    if (!std::isfinite(s)) throw DataError("roc_auc: non-finite positive score");
  for (double s : negative_scores)
    if (!std::isfinite(s)) throw DataError("roc_auc: non-finite negative score");

  struct Scored {
    double score;
    bool positive;
  };
  std::vector<Scored> all;
  all.reserve(positive_scores.size() + negative_scores.size());
  for (double s : positive_scores) all.push_back({s, true});
  for (double s : negative_scores) all.push_back({s, false});
  std::sort(all.begin(), all.end(),
            [](const Scored& a, const Scored& b) { return a.score < b.score; });

  // Sum of positive ranks with average ranks over tie groups.
  double rank_sum_pos = 0.0;
  size_t i = 0;
  while (i < all.size()) {
    size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    // 1-based ranks i+1 .. j share the average (i + j + 1) / 2
    double avg_rank = static_cast<double>(i + j + 1) / 2.0;
    for (size_t t = i; t < j; ++t) {
      if (all[t].positive) rank_sum_pos += avg_rank;
    }
    i = j;
  }

  const double p = static_cast<double>(positive_scores.size());
  const double n = static_cast<double>(negative_scores.size());
  const double u = rank_sum_pos - p * (p + 1.0) / 2.0;
  return u / (p * n);
}

double average_over_samples(const std::vector<double>& values) {
  if (values.empty()) throw DataError("average_over_samples: no values");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

GeometricMeanResult geometric_croc_auc(const std::map<std::string, double>& per_species) {
  GeometricMeanResult result;
  double log_sum = 0.0;
  size_t count = 0;
  for (const auto& [species, v] : per_species) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      result.skipped.push_back(species);
      continue;
    }
    log_sum += std::log(v);
    ++count;
  }
  if (count == 0) throw DataError("geometric_croc_auc: every species was skipped");
  result.value = std::exp(log_sum / static_cast<double>(count));
  return result;
}

EvalReport build_report(const std::vector<AucRecord>& records,
                        const std::vector<SkippedSpecies>& skipped) {
  EvalReport report;
  report.records = records;
  report.skipped_species = skipped;

  std::map<GroupKey, std::map<std::string, std::vector<double>>> grouped;
  for (const auto& r : records) {
    grouped[GroupKey{r.provider_tag, r.corpus, r.k}][r.species].push_back(r.roc_auc);
  }
  for (const auto& [key, by_species] : grouped) {
    std::map<std::string, double> means;
    for (const auto& [species, values] : by_species)
      means[species] = average_over_samples(values);
    report.per_species_mean[key] = means;
    GeometricMeanResult gm = geometric_croc_auc(means);
    report.croc_auc[key] = gm.value;
    for (const auto& sp : gm.skipped)
      report.skipped_species.push_back({sp, key.corpus, "zero_auc"});
  }
  return report;
}

}  // namespace birb::metrics
