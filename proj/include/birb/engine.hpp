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

#ifndef BIRB_ENGINE_HPP
#define BIRB_ENGINE_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "birb/corpus.hpp"
#include "birb/embed.hpp"
#include "birb/metrics.hpp"
#include "birb/peakfind.hpp"
#include "birb/retrieval.hpp"

namespace birb::engine {

struct CorpusSpec {
  std::string name;
  std::string kind;  // focal | background | soundscape

  void validate() const;
};

struct ExternalEmbedderSpec {
  std::string command;
};

struct QuerySpec {
  std::vector<std::string> species;  // empty -> every species with exemplars
  retrieval::QuerySource source = retrieval::QuerySource::exemplar_centroid;
  std::string vectors_path;  // learned-representation file
};

struct RunConfig {
  uint64_t seed = 0;

  int sample_rate = 32000;
  int resample_taps = 32;
  audio::SpectrogramParams melspec;
  audio::PcenParams pcen;
  peakfind::PeakfindParams peakfind;

  double window_length_s = 5.0;
  double window_stride_s = 2.5;

  embed::PoolParams pool;
  embed::FeatureKind pool_features = embed::FeatureKind::pcen;

  std::vector<int> ks = {1, 2, 4, 8, 16};
  int n_samples = 5;
  bool normalize_before_mean = false;
  bool exclude_exemplar_windows = true;
  bool exclude_background_windows = true;

  std::string provider = "pooled";  // "pooled" or "external:<name>"
  std::map<std::string, ExternalEmbedderSpec> external_embedders;

  std::string manifest_path;
  std::string annotations_path;  // optional
  std::string taxonomy_path;     // optional
  std::string out_dir;

  std::optional<corpus::SplitSpec> split;
  std::vector<CorpusSpec> corpora;
  QuerySpec queries;

  embed::WindowFeatureParams feature_params() const;
};

// Parses and validates. Unknown keys, unknown providers and unresolvable
// paths are configuration errors. `overrides` entries look like
// "retrieval.n_samples=3".
RunConfig parse_run_config(const std::string& json_text,
                           const std::vector<std::string>& overrides = {});
RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides = {});
void validate_run_config(const RunConfig& cfg, bool check_paths);

// Canonical serialization used for the config hash and the run metadata.
std::string config_canonical_json(const RunConfig& cfg);

// --- synthetic corpus -------------------------------------------------------

struct SynthSpeciesSpec {
  std::string code;
  double base_hz = 0.0;
};

struct SynthSpec {
  int sample_rate = 32000;
  std::vector<SynthSpeciesSpec> species;
  int n_focal_per_species = 20;
  double focal_duration_s = 12.0;
  int n_soundscapes = 6;
  double soundscape_duration_s = 60.0;
  int events_per_soundscape = 12;
  double overlap_probability = 0.3;
  double focal_noise_level = 0.01;
  double soundscape_noise_level = 0.05;
  double event_amplitude = 0.4;
  double background_label_probability = 0.0;

  void validate() const;
};

SynthSpec parse_synth_spec(const std::string& json_text);

struct SynthEvent {
  std::string recording_id;
  std::string species;
  double start_s = 0.0;
  double end_s = 0.0;
};

struct SynthResult {
  std::string manifest_path;
  std::string annotations_path;
  std::vector<SynthEvent> events;  // generator's own event log
};

// Writes focal and soundscape WAV fixtures with ground-truth annotations
// under out_dir. Deterministic: a fixed seed yields identical bytes.
SynthResult generate_synthetic_corpus(const SynthSpec& spec, uint64_t seed,
                                      const std::string& out_dir);

// --- evaluation -------------------------------------------------------------

struct EvalCorpus {
  std::string name;
  std::string kind;  // focal | background | soundscape
  embed::EmbeddingMatrix matrix;
  std::map<std::string, std::set<std::string>> labels_by_id;
  std::map<std::string, std::string> recording_by_id;
};

struct EvalRequest {
  std::vector<std::string> species;  // empty -> every species with exemplars
  retrieval::QuerySource source = retrieval::QuerySource::exemplar_centroid;
  std::map<std::string, std::vector<float>> learned_vectors;

  embed::EmbeddingMatrix exemplar_matrix;
  std::map<std::string, std::set<std::string>> exemplar_labels;
  std::map<std::string, std::string> exemplar_recording;

  std::map<std::string, corpus::SplitAssignment> split_assignments;  // by recording id
  std::set<std::string> ar_species;
  std::set<std::string> heldout_species;
  std::map<std::string, std::set<std::string>> recording_background;

  std::vector<int> ks = {1, 2, 4, 8, 16};
  int n_samples = 5;
  uint64_t seed = 0;
  bool normalize_before_mean = false;
  bool exclude_exemplar_windows = true;
  bool exclude_background_windows = true;
};

struct EvalOutcome {
  std::vector<metrics::AucRecord> records;
  std::vector<metrics::SkippedSpecies> skipped;
};

EvalOutcome run_eval(const EvalRequest& request, const std::vector<EvalCorpus>& corpora);

// --- pipeline ---------------------------------------------------------------

struct PipelineResult {
  metrics::EvalReport report;
  std::string report_json_path;
  std::string report_csv_path;
  std::string results_path;
  std::vector<std::string> stages_run;      // stages executed this run
  std::vector<std::string> stages_cached;   // stages skipped via cache
};

// slice -> split -> windows -> embed -> eval -> report, with per-stage
// content-hash caching under cfg.out_dir.
PipelineResult run_pipeline(const RunConfig& cfg);

}  // namespace birb::engine

#endif  // BIRB_ENGINE_HPP
