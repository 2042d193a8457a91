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

#ifndef BIRB_RETRIEVAL_HPP
#define BIRB_RETRIEVAL_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "birb/corpus.hpp"
#include "birb/embed.hpp"

namespace birb::retrieval {

// A sampled set of labeled windows used to form one query.
struct ExemplarSet {
  corpus::SpeciesCode species;
  int requested_k = 0;
  int effective_k = 0;  // min(requested_k, pool size)
  int sample_index = 0;
  uint64_t seed = 0;
  std::vector<std::string> window_ids;
};

enum class QuerySource { exemplar_centroid, learned_representation };

struct Query {
  corpus::SpeciesCode species;
  std::vector<float> vector;
  QuerySource source = QuerySource::exemplar_centroid;
};

struct RankedEntry {
  std::string window_id;
  double score = 0.0;
  bool is_positive = false;
};

// Candidates ordered by score descending, ties by window id ascending.
struct RankedList {
  Query query;
  std::vector<RankedEntry> entries;
};

// For each k, draws n_samples independent exemplar sets without replacement
// from the pool. Pools smaller than k are used whole, with effective_k
// recording the actual size. Deterministic under (seed, species, k, sample).
std::vector<ExemplarSet> sample_exemplar_sets(const std::vector<std::string>& pool,
                                              const corpus::SpeciesCode& species,
                                              const std::vector<int>& ks, int n_samples,
                                              uint64_t seed);

// Arithmetic mean of the exemplar rows. When normalize_before_mean is set,
// rows are L2-normalized first (the default averages raw embeddings).
Query build_centroid_query(const corpus::SpeciesCode& species,
                           const std::vector<std::span<const float>>& exemplar_rows,
                           bool normalize_before_mean = false);

// Cosine similarity in [-1, 1]. Throws DataError on zero-norm input.
double cosine_score(std::span<const float> q, std::span<const float> c);

// Scores every corpus row against the query and ranks. Rows whose id is in
// `excluded` are dropped from the candidate set; zero-norm candidates score
// 0. `is_positive` marks relevance from corpus labels.
RankedList rank_candidates(const Query& q, const embed::EmbeddingMatrix& corpus_matrix,
                           const std::function<bool(const std::string&)>& is_positive,
                           const std::set<std::string>& excluded = {});

}  // namespace birb::retrieval

#endif  // BIRB_RETRIEVAL_HPP
