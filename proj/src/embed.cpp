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

#include <cmath>

#include <json.hpp>

#include "birb/embed.hpp"

namespace birb::embed {

using nlohmann::json;

void EmbeddingMatrix::validate() const {
  if (d == 0 && !ids.empty()) throw DataError("embedding matrix with zero dimension");
  if (data.size() != ids.size() * d)
    throw DataError("embedding matrix shape mismatch");
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw DataError("duplicate window id in matrix: " + id);
  }
  for (float v : data) {
    if (!std::isfinite(v)) throw DataError("non-finite value in embedding matrix");
  }
}

void PoolParams::validate() const {
  if (pool_time < 1 || pool_mels < 1 || stride_time < 1 || stride_mels < 1)
    throw ConfigError("pool: all sizes and strides must be positive");
  if (stride_time > pool_time || stride_mels > pool_mels)
    throw ConfigError("pool: strides must not exceed pool sizes");
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "pcen") return FeatureKind::pcen;
  if (s == "logmel") return FeatureKind::logmel;
  throw ConfigError("unknown feature kind: '" + s + "'");
}

std::vector<float> pooled_melspec_embed(const audio::MelSpectrogram& m, const PoolParams& p) {
  p.validate();
  if (m.frames < p.pool_time || m.n_mels < p.pool_mels)
    throw DataError("spectrogram too small for pooling (" + std::to_string(m.frames) + "x" +
                    std::to_string(m.n_mels) + ")");
  const int out_t = (m.frames - p.pool_time) / p.stride_time + 1;
  const int out_f = (m.n_mels - p.pool_mels) / p.stride_mels + 1;
  std::vector<float> out(static_cast<size_t>(out_t) * out_f);
  const double cells = static_cast<double>(p.pool_time) * p.pool_mels;
  for (int bt = 0; bt < out_t; ++bt) {
    for (int bf = 0; bf < out_f; ++bf) {
      double acc = 0.0;
      const int t0 = bt * p.stride_time;
      const int f0 = bf * p.stride_mels;
      for (int t = t0; t < t0 + p.pool_time; ++t)
        for (int f = f0; f < f0 + p.pool_mels; ++f) acc += m.at(t, f);
      out[static_cast<size_t>(bt) * out_f + bf] = static_cast<float>(acc / cells);
    }
  }
  return out;
}

std::vector<float> extract_window_samples(const audio::Waveform& w, double start_s,
                                          double length_s) {
  const int64_t n = static_cast<int64_t>(w.samples.size());
  const int64_t begin = std::llround(start_s * w.sample_rate);
  const int64_t count = std::llround(length_s * w.sample_rate);
  std::vector<float> out(static_cast<size_t>(count), 0.0f);
  for (int64_t i = 0; i < count; ++i) {
    int64_t src = begin + i;
    if (src >= 0 && src < n) out[static_cast<size_t>(i)] = w.samples[static_cast<size_t>(src)];
  }
  return out;
}

std::vector<float> embed_window_samples(const std::vector<float>& samples,
                                        const WindowFeatureParams& params) {
  audio::Waveform w;
  w.sample_rate = params.sample_rate;
  w.samples = samples;
  audio::MelSpectrogram mel = params.features == FeatureKind::pcen
                                  ? audio::compute_pcen_melspec(w, params.spectrogram, params.pcen)
                                  : audio::compute_log_melspec(w, params.spectrogram);
  return pooled_melspec_embed(mel, params.pool);
}

EmbeddingMatrix embed_windows_pooled(const std::vector<corpus::Window>& windows,
                                     const AudioLookup& audio,
                                     const WindowFeatureParams& params) {
  EmbeddingMatrix m;
  m.provider_tag = "pooled";
  m.ids.resize(windows.size());
  if (windows.empty()) return m;

  // Probe one window for the dimension, then fill in parallel.
  {
    const auto& w0 = windows.front();
    std::vector<float> v = embed_window_samples(
        extract_window_samples(audio(w0.recording_id), w0.start_s, w0.length_s), params);
    m.d = v.size();
    m.data.assign(windows.size() * m.d, 0.0f);
    m.ids[0] = w0.id();
    std::copy(v.begin(), v.end(), m.data.begin());
  }

  parallel_for(windows.size() - 1, [&](size_t k) {
    size_t i = k + 1;
    const auto& w = windows[i];
    std::vector<float> v = embed_window_samples(
        extract_window_samples(audio(w.recording_id), w.start_s, w.length_s), params);
    if (v.size() != m.d)
      throw DataError("inconsistent embedding dimension for window " + w.id());
    m.ids[i] = w.id();
    std::copy(v.begin(), v.end(), m.data.begin() + static_cast<std::ptrdiff_t>(i * m.d));
  });
  m.validate();
  return m;
}

std::vector<float> load_learned_representation(const std::string& path,
                                               const corpus::SpeciesCode& species) {
  auto all = load_learned_representations(path);
  auto it = all.find(species);
  if (it == all.end())
    throw DataError("species not found in representation file " + path + ": " + species);
  return it->second;
}

std::map<corpus::SpeciesCode, std::vector<float>> load_learned_representations(
    const std::string& path) {
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw DataError(path + ": bad JSON: " + std::string(e.what()));
  }
  std::map<corpus::SpeciesCode, std::vector<float>> out;
  for (const auto& [k, v] : root.items()) {
    std::vector<float> vec;
    for (const auto& x : v) vec.push_back(x.get<float>());
    if (vec.empty()) throw DataError(path + ": empty vector for species " + k);
    out[k] = std::move(vec);
  }
  return out;
}

}  // namespace birb::embed
