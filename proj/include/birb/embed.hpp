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

#ifndef BIRB_EMBED_HPP
#define BIRB_EMBED_HPP

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "birb/audio.hpp"
#include "birb/corpus.hpp"

namespace birb::embed {

// n x d row-major matrix of window embeddings keyed by window id.
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  std::vector<float> data;  // n * d
  size_t d = 0;
  std::string provider_tag;

  size_t n() const { return ids.size(); }
  std::span<const float> row(size_t i) const {
    return std::span<const float>(data.data() + i * d, d);
  }
  void validate() const;
};

struct PoolParams {
  int pool_time = 50;
  int pool_mels = 4;
  int stride_time = 50;
  int stride_mels = 4;

  void validate() const;
};

enum class FeatureKind { pcen, logmel };

FeatureKind feature_kind_from_string(const std::string& s);

// 2-D average pooling over (time, mel) followed by a row-major flatten.
// Output dimension: out_t * out_f with out_t = floor((frames - pool_time) /
// stride_time) + 1 and analogously for mels.
std::vector<float> pooled_melspec_embed(const audio::MelSpectrogram& m, const PoolParams& p);

// Everything needed to turn a (recording, window) pair into features.
struct WindowFeatureParams {
  int sample_rate = 32000;
  audio::SpectrogramParams spectrogram;
  audio::PcenParams pcen;
  PoolParams pool;
  FeatureKind features = FeatureKind::pcen;
};

// Cuts the window's samples out of the recording, zero-padding past the end.
std::vector<float> extract_window_samples(const audio::Waveform& w, double start_s,
                                          double length_s);

// Pooled-features embedding of one window waveform.
std::vector<float> embed_window_samples(const std::vector<float>& samples,
                                        const WindowFeatureParams& params);

// Resolves a window's recording to its decoded waveform. Implementations are
// expected to cache; the engine groups windows by recording.
using AudioLookup = std::function<const audio::Waveform&(const std::string& recording_id)>;

// Built-in provider: embeds every window with pooled mel features, in
// parallel over windows. Row order matches the window order.
EmbeddingMatrix embed_windows_pooled(const std::vector<corpus::Window>& windows,
                                     const AudioLookup& audio, const WindowFeatureParams& params);

// External provider: materializes windows as 5 s mono WAV files plus a
// request manifest under protocol_dir, runs `command` (the protocol dir is
// appended as its last argument), and validates the response.
EmbeddingMatrix embed_windows_external(const std::vector<corpus::Window>& windows,
                                       const AudioLookup& audio, const WindowFeatureParams& params,
                                       const std::string& protocol_dir,
                                       const std::string& command);

// Request/response halves of the protocol, exposed for embedder
// implementations and tests.
void write_embed_request(const std::vector<corpus::Window>& windows, const AudioLookup& audio,
                         const WindowFeatureParams& params, const std::string& protocol_dir);
struct EmbedRequestEntry {
  std::string id;
  std::string wav_path;
};
std::vector<EmbedRequestEntry> read_embed_request(const std::string& protocol_dir);
void write_embed_response(const EmbeddingMatrix& m, const std::string& protocol_dir);
EmbeddingMatrix read_embed_response(const std::string& protocol_dir,
                                    const std::vector<std::string>& expected_ids);

// Per-species query vectors (e.g. classifier weight rows) stored as JSON
// {"species": [floats...]}.
std::vector<float> load_learned_representation(const std::string& path,
                                               const corpus::SpeciesCode& species);
std::map<corpus::SpeciesCode, std::vector<float>> load_learned_representations(
    const std::string& path);

// Persistent store: <base>.f32le holds the row-major float32 data followed by
// a CRC32 trailer; <base>.json holds {n, d, provider_tag, ids}.
void embed_store_write(const EmbeddingMatrix& m, const std::string& base_path);
EmbeddingMatrix embed_store_read(const std::string& base_path);

// Header-only read (n, d, provider_tag, ids).
EmbeddingMatrix embed_store_read_header(const std::string& base_path);

// Reads rows [first_row, first_row + row_count) without scanning the rest of
// the file. The CRC trailer is only checked by full reads.
EmbeddingMatrix embed_store_read_rows(const std::string& base_path, size_t first_row,
                                      size_t row_count);

}  // namespace birb::embed

#endif  // BIRB_EMBED_HPP
