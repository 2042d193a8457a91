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

#ifndef BIRB_AUDIO_HPP
#define BIRB_AUDIO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "birb/common.hpp"

namespace birb::audio {

// Mono PCM audio. Samples are nominally in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 0;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

struct SpectrogramParams {
  double window_s = 0.080;
  double hop_s = 0.010;
  int n_mels = 160;
  double log_floor = 0.01;
  double log_scale = 0.1;
  double fmin_hz = 60.0;
  double fmax_hz = 10000.0;

  void validate(int sample_rate) const;
  int window_samples(int sample_rate) const;
  int hop_samples(int sample_rate) const;
};

struct PcenParams {
  double smoothing_coef = 0.1;
  double gain = 0.8;
  double bias = 10.0;
  double exponent = 0.25;
  double eps = 1e-6;

  void validate() const;
};

// Frames x mel-bins matrix, row-major in time.
struct MelSpectrogram {
  std::vector<float> values;  // frames * n_mels
  int frames = 0;
  int n_mels = 0;
  double frame_rate = 0.0;
  SpectrogramParams params;

  float& at(int t, int f) { return values[static_cast<size_t>(t) * n_mels + f]; }
  float at(int t, int f) const { return values[static_cast<size_t>(t) * n_mels + f]; }
};

// Frames for a waveform of n samples: floor((n - win) / hop) + 1.
// Valid only when n >= win.
int frame_count(int64_t n_samples, int win_samples, int hop_samples);

// --- decoding -------------------------------------------------------------

// Decodes a WAV (PCM 16/24/32, float32) or FLAC file, averages channels to
// mono, and resamples to target_rate when it differs from the source rate.
Waveform load_waveform(const std::string& path, int target_rate);

// Container-level decode without resampling; returns per-channel averaged mono
// at the file's native rate.
Waveform decode_audio_file(const std::string& path);

Waveform decode_wav(const std::string& path);
Waveform decode_flac(const std::string& path);

// Writers used for window materialization and the synthetic corpus.
void write_wav_float32(const std::string& path, const Waveform& w);
void write_wav_pcm16(const std::string& path, const Waveform& w);

// --- resampling -----------------------------------------------------------

// Windowed-sinc resampler. taps_per_side controls quality (default 32).
Waveform resample(const Waveform& w, int target_rate, int taps_per_side = 32);

// --- features ---------------------------------------------------------------

// Linear-magnitude mel spectrogram (Hann window, magnitude spectrum,
// triangular mel filterbank). Throws DataError("waveform too short") when the
// input is shorter than one analysis window.
MelSpectrogram compute_linear_melspec(const Waveform& w, const SpectrogramParams& p);

// values[t][f] = log_scale * log(max(mel, log_floor))
MelSpectrogram compute_log_melspec(const Waveform& w, const SpectrogramParams& p);

// Per-channel energy normalization over a linear mel spectrogram:
//   s[t] = (1 - c) * s[t-1] + c * m[t], s[0] = m[0]
//   out  = (m / (eps + s)^gain + bias)^exponent - bias^exponent
MelSpectrogram pcen_transform(const MelSpectrogram& mel, const PcenParams& q);

MelSpectrogram compute_pcen_melspec(const Waveform& w, const SpectrogramParams& p,
                                    const PcenParams& q);

}  // namespace birb::audio

#endif  // BIRB_AUDIO_HPP
