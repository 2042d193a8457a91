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

#include <filesystem>

#include <json.hpp>

#include "birb/engine.hpp"

namespace birb::engine {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Sets root[dotted.path] = value, creating objects along the way.
void apply_override(json& root, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key.path=value: '" + kv + "'");
  std::string path = kv.substr(0, eq);
  std::string raw = kv.substr(eq + 1);

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // unquoted strings are taken literally
  }

  json* node = &root;
  size_t start = 0;
  for (;;) {
    size_t dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw ConfigError("bad override path: '" + path + "'");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

void CorpusSpec::validate() const {
  if (name.empty()) throw ConfigError("corpus entry with empty name");
  if (kind != "focal" && kind != "background" && kind != "soundscape")
    throw ConfigError("corpus '" + name + "': unknown kind '" + kind + "'");
}

void SynthSpec::validate() const {
  if (species.size() < 2) throw ConfigError("synth: need at least 2 species");
  for (const auto& s : species) {
    if (!corpus::is_valid_species_code(s.code))
      throw ConfigError("synth: invalid species code '" + s.code + "'");
    if (s.base_hz <= 0) throw ConfigError("synth: base_hz must be positive");
  }
  if (sample_rate <= 0 || n_focal_per_species < 1 || focal_duration_s <= 0 ||
      soundscape_duration_s <= 0)
    throw ConfigError("synth: sizes and durations must be positive");
  if (overlap_probability < 0 || overlap_probability > 1 ||
      background_label_probability < 0 || background_label_probability > 1)
    throw ConfigError("synth: probabilities must be in [0,1]");
}

embed::WindowFeatureParams RunConfig::feature_params() const {
  embed::WindowFeatureParams p;
  p.sample_rate = sample_rate;
  p.spectrogram = melspec;
  p.pcen = pcen;
  p.pool = pool;
  p.features = pool_features;
  return p;
}

RunConfig parse_run_config(const std::string& json_text,
                           const std::vector<std::string>& overrides) {
  json root;
  try {
    root = json_text.empty() ? json::object() : json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  for (const auto& kv : overrides) apply_override(root, kv);

  RunConfig cfg;
  try {
    cfg.seed = get_or<uint64_t>(root, "seed", 0);

    if (root.contains("audio")) {
      const auto& a = root.at("audio");
      cfg.sample_rate = get_or<int>(a, "sample_rate", cfg.sample_rate);
      cfg.resample_taps = get_or<int>(a, "resample_taps", cfg.resample_taps);
    }
    if (root.contains("melspec")) {
      const auto& m = root.at("melspec");
      cfg.melspec.window_s = get_or<double>(m, "window_ms", cfg.melspec.window_s * 1000) / 1000.0;
      cfg.melspec.hop_s = get_or<double>(m, "hop_ms", cfg.melspec.hop_s * 1000) / 1000.0;
      cfg.melspec.n_mels = get_or<int>(m, "n_mels", cfg.melspec.n_mels);
      cfg.melspec.log_floor = get_or<double>(m, "log_floor", cfg.melspec.log_floor);
      cfg.melspec.log_scale = get_or<double>(m, "log_scale", cfg.melspec.log_scale);
      cfg.melspec.fmin_hz = get_or<double>(m, "fmin_hz", cfg.melspec.fmin_hz);
      cfg.melspec.fmax_hz = get_or<double>(m, "fmax_hz", cfg.melspec.fmax_hz);
    }
    if (root.contains("pcen")) {
      const auto& p = root.at("pcen");
      cfg.pcen.smoothing_coef = get_or<double>(p, "smoothing_coef", cfg.pcen.smoothing_coef);
      cfg.pcen.gain = get_or<double>(p, "gain", cfg.pcen.gain);
      cfg.pcen.bias = get_or<double>(p, "bias", cfg.pcen.bias);
      cfg.pcen.exponent = get_or<double>(p, "exponent", cfg.pcen.exponent);
      cfg.pcen.eps = get_or<double>(p, "eps", cfg.pcen.eps);
    }
    if (root.contains("peakfind")) {
      const auto& p = root.at("peakfind");
      cfg.peakfind.slice_len_s = get_or<double>(p, "slice_len_s", cfg.peakfind.slice_len_s);
      cfg.peakfind.max_slices = get_or<int>(p, "max_slices", cfg.peakfind.max_slices);
      cfg.peakfind.outlier_sigma = get_or<double>(p, "outlier_sigma", cfg.peakfind.outlier_sigma);
      cfg.peakfind.signal_sigma = get_or<double>(p, "signal_sigma", cfg.peakfind.signal_sigma);
      cfg.peakfind.min_peak_width_s =
          get_or<double>(p, "min_peak_width_s", cfg.peakfind.min_peak_width_s);
      cfg.peakfind.max_peak_width_s =
          get_or<double>(p, "max_peak_width_s", cfg.peakfind.max_peak_width_s);
      cfg.peakfind.n_widths = get_or<int>(p, "n_widths", cfg.peakfind.n_widths);
      cfg.peakfind.peak_window_s = get_or<double>(p, "peak_window_s", cfg.peakfind.peak_window_s);
      cfg.peakfind.peak_energy_factor =
          get_or<double>(p, "peak_energy_factor", cfg.peakfind.peak_energy_factor);
      cfg.peakfind.literal_energy_filter =
          get_or<bool>(p, "literal_energy_filter", cfg.peakfind.literal_energy_filter);
    }
    if (root.contains("window")) {
      const auto& w = root.at("window");
      cfg.window_length_s = get_or<double>(w, "length_s", cfg.window_length_s);
      cfg.window_stride_s = get_or<double>(w, "stride_s", cfg.window_stride_s);
    }
    if (root.contains("pool")) {
      const auto& p = root.at("pool");
      cfg.pool.pool_time = get_or<int>(p, "pool_time", cfg.pool.pool_time);
      cfg.pool.pool_mels = get_or<int>(p, "pool_mels", cfg.pool.pool_mels);
      cfg.pool.stride_time = get_or<int>(p, "stride_time", cfg.pool.stride_time);
      cfg.pool.stride_mels = get_or<int>(p, "stride_mels", cfg.pool.stride_mels);
      cfg.pool_features = embed::feature_kind_from_string(get_or<std::string>(
          p, "features", cfg.pool_features == embed::FeatureKind::pcen ? "pcen" : "logmel"));
    }
    if (root.contains("retrieval")) {
      const auto& r = root.at("retrieval");
      if (r.contains("ks")) cfg.ks = r.at("ks").get<std::vector<int>>();
      cfg.n_samples = get_or<int>(r, "n_samples", cfg.n_samples);
      cfg.normalize_before_mean =
          get_or<bool>(r, "normalize_before_mean", cfg.normalize_before_mean);
      cfg.exclude_exemplar_windows =
          get_or<bool>(r, "exclude_exemplar_windows", cfg.exclude_exemplar_windows);
      cfg.exclude_background_windows =
          get_or<bool>(r, "exclude_background_windows", cfg.exclude_background_windows);
    }
    cfg.provider = get_or<std::string>(root, "provider", cfg.provider);
    if (root.contains("external_embedders")) {
      for (const auto& [name, spec] : root.at("external_embedders").items()) {
        cfg.external_embedders[name] =
            ExternalEmbedderSpec{spec.at("command").get<std::string>()};
      }
    }
    if (root.contains("paths")) {
      const auto& p = root.at("paths");
      cfg.manifest_path = get_or<std::string>(p, "manifest", "");
      cfg.annotations_path = get_or<std::string>(p, "annotations", "");
      cfg.taxonomy_path = get_or<std::string>(p, "taxonomy", "");
      cfg.out_dir = get_or<std::string>(p, "out_dir", "");
    }
    if (root.contains("split")) {
      const auto& s = root.at("split");
      corpus::SplitSpec spec;
      if (s.contains("ar_species"))
        for (const auto& sp : s.at("ar_species")) spec.ar_species.insert(sp.get<std::string>());
      if (s.contains("heldout_species"))
        for (const auto& sp : s.at("heldout_species"))
          spec.heldout_species.insert(sp.get<std::string>());
      spec.upstream_per_species = get_or<int>(s, "upstream_per_species", 10);
      spec.seed = cfg.seed;
      cfg.split = spec;
    }
    if (root.contains("corpora")) {
      for (const auto& c : root.at("corpora")) {
        cfg.corpora.push_back(
            CorpusSpec{c.at("name").get<std::string>(), c.at("kind").get<std::string>()});
      }
    }
    if (root.contains("queries")) {
      const auto& q = root.at("queries");
      if (q.contains("species") && q.at("species").is_array())
        cfg.queries.species = q.at("species").get<std::vector<std::string>>();
      std::string source = get_or<std::string>(q, "source", "exemplar_centroid");
      if (source == "exemplar_centroid") {
        cfg.queries.source = retrieval::QuerySource::exemplar_centroid;
      } else if (source == "learned_representation") {
        cfg.queries.source = retrieval::QuerySource::learned_representation;
        cfg.queries.vectors_path = get_or<std::string>(q, "vectors", "");
      } else {
        throw ConfigError("unknown query source: '" + source + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("bad config: " + std::string(e.what()));
  }

  validate_run_config(cfg, /*check_paths=*/false);
  return cfg;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const DataError& e) {
    throw ConfigError(std::string(e.what()));
  }
  return parse_run_config(text, overrides);
}

void validate_run_config(const RunConfig& cfg, bool check_paths) {
  if (cfg.sample_rate <= 0) throw ConfigError("audio.sample_rate must be positive");
  cfg.melspec.validate(cfg.sample_rate);
  cfg.pcen.validate();
  cfg.peakfind.validate();
  cfg.pool.validate();
  if (cfg.window_length_s <= 0 || cfg.window_stride_s <= 0)
    throw ConfigError("window length and stride must be positive");
  if (cfg.ks.empty()) throw ConfigError("retrieval.ks must be non-empty");
  for (int k : cfg.ks)
    if (k < 1) throw ConfigError("retrieval.ks entries must be >= 1");
  if (cfg.n_samples < 1) throw ConfigError("retrieval.n_samples must be >= 1");

  if (cfg.provider != "pooled") {
    if (cfg.provider.rfind("external:", 0) != 0)
      throw ConfigError("unknown provider: '" + cfg.provider + "'");
    std::string name = cfg.provider.substr(9);
    if (!cfg.external_embedders.count(name))
      throw ConfigError("external embedder not registered: '" + name + "'");
  }
  if (cfg.split) cfg.split->validate();
  for (const auto& c : cfg.corpora) c.validate();
  if (cfg.queries.source == retrieval::QuerySource::learned_representation &&
      cfg.queries.vectors_path.empty())
    throw ConfigError("queries.vectors is required for learned_representation queries");

  if (check_paths) {
    if (cfg.manifest_path.empty()) throw ConfigError("paths.manifest is required");
    if (!fs::exists(cfg.manifest_path))
      throw ConfigError("paths.manifest does not exist: " + cfg.manifest_path);
    if (!cfg.annotations_path.empty() && !fs::exists(cfg.annotations_path))
      throw ConfigError("paths.annotations does not exist: " + cfg.annotations_path);
    if (!cfg.taxonomy_path.empty() && !fs::exists(cfg.taxonomy_path))
      throw ConfigError("paths.taxonomy does not exist: " + cfg.taxonomy_path);
    if (cfg.out_dir.empty()) throw ConfigError("paths.out_dir is required");
    if (cfg.queries.source == retrieval::QuerySource::learned_representation &&
        !fs::exists(cfg.queries.vectors_path))
      throw ConfigError("queries.vectors does not exist: " + cfg.queries.vectors_path);
  }
}

SynthSpec parse_synth_spec(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("synth spec is not valid JSON: " + std::string(e.what()));
  }
  SynthSpec spec;
  try {
    spec.sample_rate = get_or<int>(root, "sample_rate", spec.sample_rate);
    for (const auto& s : root.at("species"))
      spec.species.push_back(
          SynthSpeciesSpec{s.at("code").get<std::string>(), s.at("base_hz").get<double>()});
    spec.n_focal_per_species =
        get_or<int>(root, "n_focal_per_species", spec.n_focal_per_species);
    spec.focal_duration_s = get_or<double>(root, "focal_duration_s", spec.focal_duration_s);
    spec.n_soundscapes = get_or<int>(root, "n_soundscapes", spec.n_soundscapes);
    spec.soundscape_duration_s =
        get_or<double>(root, "soundscape_duration_s", spec.soundscape_duration_s);
    spec.events_per_soundscape =
        get_or<int>(root, "events_per_soundscape", spec.events_per_soundscape);
    spec.overlap_probability =
        get_or<double>(root, "overlap_probability", spec.overlap_probability);
    spec.focal_noise_level = get_or<double>(root, "focal_noise_level", spec.focal_noise_level);
    spec.soundscape_noise_level =
        get_or<double>(root, "soundscape_noise_level", spec.soundscape_noise_level);
    spec.event_amplitude = get_or<double>(root, "event_amplitude", spec.event_amplitude);
    spec.background_label_probability = get_or<double>(root, "background_label_probability",
                                                       spec.background_label_probability);
  } catch (const json::exception& e) {
    throw ConfigError("bad synth spec: " + std::string(e.what()));
  }
  spec.validate();
  return spec;
}

std::string config_canonical_json(const RunConfig& cfg) {
  json root;
  root["seed"] = cfg.seed;
  root["audio"] = {{"sample_rate", cfg.sample_rate}, {"resample_taps", cfg.resample_taps}};
  root["melspec"] = {{"window_ms", cfg.melspec.window_s * 1000.0},
                     {"hop_ms", cfg.melspec.hop_s * 1000.0},
                     {"n_mels", cfg.melspec.n_mels},
                     {"log_floor", cfg.melspec.log_floor},
                     {"log_scale", cfg.melspec.log_scale},
                     {"fmin_hz", cfg.melspec.fmin_hz},
                     {"fmax_hz", cfg.melspec.fmax_hz}};
  root["pcen"] = {{"smoothing_coef", cfg.pcen.smoothing_coef},
                  {"gain", cfg.pcen.gain},
                  {"bias", cfg.pcen.bias},
                  {"exponent", cfg.pcen.exponent},
                  {"eps", cfg.pcen.eps}};
  root["peakfind"] = {{"slice_len_s", cfg.peakfind.slice_len_s},
                      {"max_slices", cfg.peakfind.max_slices},
                      {"outlier_sigma", cfg.peakfind.outlier_sigma},
                      {"signal_sigma", cfg.peakfind.signal_sigma},
                      {"min_peak_width_s", cfg.peakfind.min_peak_width_s},
                      {"max_peak_width_s", cfg.peakfind.max_peak_width_s},
                      {"n_widths", cfg.peakfind.n_widths},
                      {"peak_window_s", cfg.peakfind.peak_window_s},
                      {"peak_energy_factor", cfg.peakfind.peak_energy_factor},
                      {"literal_energy_filter", cfg.peakfind.literal_energy_filter}};
  root["window"] = {{"length_s", cfg.window_length_s}, {"stride_s", cfg.window_stride_s}};
  root["pool"] = {{"pool_time", cfg.pool.pool_time},
                  {"pool_mels", cfg.pool.pool_mels},
                  {"stride_time", cfg.pool.stride_time},
                  {"stride_mels", cfg.pool.stride_mels},
                  {"features", cfg.pool_features == embed::FeatureKind::pcen ? "pcen" : "logmel"}};
  root["retrieval"] = {{"ks", cfg.ks},
                       {"n_samples", cfg.n_samples},
                       {"normalize_before_mean", cfg.normalize_before_mean},
                       {"exclude_exemplar_windows", cfg.exclude_exemplar_windows},
                       {"exclude_background_windows", cfg.exclude_background_windows}};
  root["provider"] = cfg.provider;
  json embedders = json::object();
  for (const auto& [name, spec] : cfg.external_embedders)
    embedders[name] = {{"command", spec.command}};
  root["external_embedders"] = embedders;
  root["paths"] = {{"manifest", cfg.manifest_path},
                   {"annotations", cfg.annotations_path},
                   {"taxonomy", cfg.taxonomy_path},
                   {"out_dir", cfg.out_dir}};
  if (cfg.split) {
    root["split"] = {
        {"ar_species",
         std::vector<std::string>(cfg.split->ar_species.begin(), cfg.split->ar_species.end())},
        {"heldout_species", std::vector<std::string>(cfg.split->heldout_species.begin(),
                                                     cfg.split->heldout_species.end())},
        {"upstream_per_species", cfg.split->upstream_per_species}};
  }
  json corpora = json::array();
  for (const auto& c : cfg.corpora) corpora.push_back({{"name", c.name}, {"kind", c.kind}});
  root["corpora"] = corpora;
  json queries;
  queries["species"] = cfg.queries.species;
  queries["source"] = cfg.queries.source == retrieval::QuerySource::exemplar_centroid
                          ? "exemplar_centroid"
                          : "learned_representation";
  queries["vectors"] = cfg.queries.vectors_path;
  root["queries"] = queries;
  return root.dump(2) + "\n";
}

}  // namespace birb::engine
