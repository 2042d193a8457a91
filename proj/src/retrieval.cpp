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

#include "birb/retrieval.hpp"

namespace birb::retrieval {

namespace {

double l2_norm(std::span<const float> v) {
  double acc = 0.0;
  for (float x : v) acc += static_cast<double>(x) * x;
  return std::sqrt(acc);
}

}  // namespace

std::vector<ExemplarSet> sample_exemplar_sets(const std::vector<std::string>& pool,
                                              const corpus::SpeciesCode& species,
                                              const std::vector<int>& ks, int n_samples,
                                              uint64_t seed) {
  if (pool.empty()) throw DataError("empty exemplar pool for species " + species);
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");

  // Canonical pool order so draws depend only on content and seed.
  std::vector<std::string> sorted_pool = pool;
  std::sort(sorted_pool.begin(), sorted_pool.end());

  std::vector<ExemplarSet> out;
  for (int k : ks) {
    if (k < 1) throw ConfigError("exemplar set size must be >= 1");
    for (int s = 0; s < n_samples; ++s) {
      ExemplarSet set;
      set.species = species;
      set.requested_k = k;
      set.sample_index = s;
      set.seed = seed;
      Rng rng(derive_seed(seed, "exemplars/" + species, static_cast<uint64_t>(k),
                          static_cast<uint64_t>(s)));
      std::vector<size_t> picked = rng.sample_without_replacement(
          sorted_pool.size(), static_cast<size_t>(k));
      for (size_t idx : picked) set.window_ids.push_back(sorted_pool[idx]);
      set.effective_k = static_cast<int>(set.window_ids.size());
      out.push_back(std::move(set));
    }
  }
  return out;
}

Query build_centroid_query(const corpus::SpeciesCode& species,
                           const std::vector<std::span<const float>>& exemplar_rows,
                           bool normalize_before_mean) {
  if (exemplar_rows.empty()) throw DataError("centroid query needs at least one exemplar");
  const size_t d = exemplar_rows.front().size();
  std::vector<double> acc(d, 0.0);
  for (const auto& row : exemplar_rows) {
    if (row.size() != d)
      throw DataError("exemplar dimension mismatch (" + std::to_string(row.size()) + " vs " +
                      std::to_string(d) + ")");
    double scale = 1.0;
    if (normalize_before_mean) {
      double norm = l2_norm(row);
      if (norm > 0) scale = 1.0 / norm;
    }
    for (size_t i = 0; i < d; ++i) acc[i] += scale * row[i];
  }
  Query q;
  q.species = species;
  q.source = QuerySource::exemplar_centroid;
  q.vector.resize(d);
  for (size_t i = 0; i < d; ++i)
    q.vector[i] = static_cast<float>(acc[i] / static_cast<double>(exemplar_rows.size()));
  return q;
}

double cosine_score(std::span<const float> q, std::span<const float> c) {
  if (q.size() != c.size())
    throw DataError("cosine: dimension mismatch (" + std::to_string(q.size()) + " vs " +
                    std::to_string(c.size()) + ")");
  double nq = l2_norm(q);
  double nc = l2_norm(c);
  if (nq == 0.0 || nc == 0.0) throw DataError("cosine: zero vector");
  double dot = 0.0;
  for (size_t i = 0; i < q.size(); ++i) dot += static_cast<double>(q[i]) * c[i];
  return dot / (nq * nc);
}

RankedList rank_candidates(const Query& q, const embed::EmbeddingMatrix& corpus_matrix,
                           const std::function<bool(const std::string&)>& is_positive,
                           const std::set<std::string>& excluded) {
  if (corpus_matrix.n() == 0) throw DataError("rank_candidates: empty corpus");
  if (corpus_matrix.d != q.vector.size())
    throw DataError("rank_candidates: query dimension " + std::to_string(q.vector.size()) +
                    " does not match corpus dimension " + std::to_string(corpus_matrix.d));

  const double query_norm = l2_norm(q.vector);

  std::vector<size_t> kept;
  kept.reserve(corpus_matrix.n());
  for (size_t i = 0; i < corpus_matrix.n(); ++i) {
    if (!excluded.count(corpus_matrix.ids[i])) kept.push_back(i);
  }

  RankedList out;
  out.query = q;
  out.entries.resize(kept.size());
  parallel_for(kept.size(), [&](size_t j) {
    size_t i = kept[j];
    auto row = corpus_matrix.row(i);
    double norm = l2_norm(row);
    double score = 0.0;
    if (norm > 0.0 && query_norm > 0.0) {
      double dot = 0.0;
      for (size_t k = 0; k < row.size(); ++k)
        dot += static_cast<double>(q.vector[k]) * row[k];
      score = dot / (query_norm * norm);
    }
    out.entries[j] = RankedEntry{corpus_matrix.ids[i], score, is_positive(corpus_matrix.ids[i])};
  });

  std::sort(out.entries.begin(), out.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.window_id < b.window_id;
  });
  return out;
}

}  // namespace birb::retrieval
