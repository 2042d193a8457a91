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

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "birb/audio.hpp"

namespace birb::audio {

namespace {

constexpr double kPi = 3.14159265358979323846;

double hz_to_mel(double f) { return 1127.0 * std::log(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::exp(m / 1127.0) - 1.0); }

// FFTW plan creation is not thread-safe; execution on distinct buffers is.
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    in_ = fftw_alloc_real(static_cast<size_t>(n));
    out_ = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan_ = fftw_plan_dft_r2c_1d(n, in_, out_, FFTW_ESTIMATE);
  }

  ~RealFft() {
    {
      std::lock_guard<std::mutex> lock(plan_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }

  // Magnitude spectrum for bins [0, n/2].
  void magnitudes(std::vector<double>& mag) {
    fftw_execute(plan_);
    int bins = n_ / 2 + 1;
    mag.resize(static_cast<size_t>(bins));
    for (int k = 0; k < bins; ++k)
      mag[static_cast<size_t>(k)] = std::hypot(out_[k][0], out_[k][1]);
  }

 private:
  static std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
  }

  int n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

// Triangular filterbank as sparse per-band (first_bin, weights) runs.
struct MelFilterbank {
  std::vector<int> first_bin;
  std::vector<std::vector<double>> weights;
};

MelFilterbank build_filterbank(int n_fft, int sample_rate, int n_mels, double fmin,
                               double fmax) {
  int bins = n_fft / 2 + 1;
  double mel_lo = hz_to_mel(fmin);
  double mel_hi = hz_to_mel(fmax);
  std::vector<double> edges(static_cast<size_t>(n_mels) + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    edges[static_cast<size_t>(i)] =
        mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));

  MelFilterbank fb;
  fb.first_bin.resize(static_cast<size_t>(n_mels));
  fb.weights.resize(static_cast<size_t>(n_mels));
  const double bin_hz = static_cast<double>(sample_rate) / n_fft;
  for (int m = 0; m < n_mels; ++m) {
    double f0 = edges[static_cast<size_t>(m)];
    double f1 = edges[static_cast<size_t>(m) + 1];
    double f2 = edges[static_cast<size_t>(m) + 2];
    int k_lo = std::max(0, static_cast<int>(std::ceil(f0 / bin_hz)));
    int k_hi = std::min(bins - 1, static_cast<int>(std::floor(f2 / bin_hz)));
    fb.first_bin[static_cast<size_t>(m)] = k_lo;
    auto& w = fb.weights[static_cast<size_t>(m)];
    for (int k = k_lo; k <= k_hi; ++k) {
      double fk = k * bin_hz;
      double v = 0.0;
      if (fk >= f0 && fk <= f1 && f1 > f0)
        v = (fk - f0) / (f1 - f0);
      else if (fk > f1 && fk <= f2 && f2 > f1)
        v = (f2 - fk) / (f2 - f1);
      if (v > 0.0) w.push_back(v);
      else w.push_back(0.0);
    }
  }
  return fb;
}

}  // namespace

void SpectrogramParams::validate(int sample_rate) const {
  if (hop_s <= 0 || window_s < hop_s) throw ConfigError("melspec: need window >= hop > 0");
  if (n_mels <= 0) throw ConfigError("melspec: n_mels must be positive");
  if (log_floor <= 0) throw ConfigError("melspec: log_floor must be positive");
  if (fmin_hz >= fmax_hz || fmax_hz > sample_rate / 2.0)
    throw ConfigError("melspec: need fmin < fmax <= sample_rate/2");
}

int SpectrogramParams::window_samples(int sample_rate) const {
  return static_cast<int>(std::lround(window_s * sample_rate));
}

int SpectrogramParams::hop_samples(int sample_rate) const {
  return static_cast<int>(std::lround(hop_s * sample_rate));
}

void PcenParams::validate() const {
  if (smoothing_coef <= 0 || smoothing_coef >= 1)
    throw ConfigError("pcen: smoothing_coef must be in (0,1)");
  if (gain < 0) throw ConfigError("pcen: gain must be >= 0");
  if (exponent <= 0) throw ConfigError("pcen: exponent must be positive");
  if (eps <= 0) throw ConfigError("pcen: eps must be positive");
}

int frame_count(int64_t n_samples, int win_samples, int hop_samples) {
  return static_cast<int>((n_samples - win_samples) / hop_samples) + 1;
}

MelSpectrogram compute_linear_melspec(const Waveform& w, const SpectrogramParams& p) {
  p.validate(w.sample_rate);
  const int win = p.window_samples(w.sample_rate);
  const int hop = p.hop_samples(w.sample_rate);
  if (static_cast<int64_t>(w.samples.size()) < win)
    throw DataError("waveform too short for one analysis window");

  const int frames = frame_count(static_cast<int64_t>(w.samples.size()), win, hop);

  MelSpectrogram out;
  out.frames = frames;
  out.n_mels = p.n_mels;
  out.frame_rate = 1.0 / p.hop_s;
  out.params = p;
  out.values.assign(static_cast<size_t>(frames) * p.n_mels, 0.0f);

  std::vector<double> hann(static_cast<size_t>(win));
  for (int i = 0; i < win; ++i)
    hann[static_cast<size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * kPi * i / (win - 1));

  const MelFilterbank fb = build_filterbank(win, w.sample_rate, p.n_mels, p.fmin_hz, p.fmax_hz);

  RealFft fft(win);
  std::vector<double> mag;
  for (int t = 0; t < frames; ++t) {
    const float* src = w.samples.data() + static_cast<size_t>(t) * hop;
    double* in = fft.input();
    for (int i = 0; i < win; ++i) in[i] = src[i] * hann[static_cast<size_t>(i)];
    fft.magnitudes(mag);
    for (int m = 0; m < p.n_mels; ++m) {
      const auto& wts = fb.weights[static_cast<size_t>(m)];
      int k0 = fb.first_bin[static_cast<size_t>(m)];
      double acc = 0.0;
      for (size_t k = 0; k < wts.size(); ++k) acc += wts[k] * mag[static_cast<size_t>(k0) + k];
      out.at(t, m) = static_cast<float>(acc);
    }
  }
  return out;
}

MelSpectrogram compute_log_melspec(const Waveform& w, const SpectrogramParams& p) {
  MelSpectrogram mel = compute_linear_melspec(w, p);
  for (auto& v : mel.values) {
    double x = std::max(static_cast<double>(v), p.log_floor);
    v = static_cast<float>(p.log_scale * std::log(x));
  }
  return mel;
}

MelSpectrogram pcen_transform(const MelSpectrogram& mel, const PcenParams& q) {
  q.validate();
  MelSpectrogram out = mel;
  if (mel.frames == 0) return out;
  const double c = q.smoothing_coef;
  const double bias_pow = std::pow(q.bias, q.exponent);
  std::vector<double> smooth(static_cast<size_t>(mel.n_mels));
  for (int f = 0; f < mel.n_mels; ++f) smooth[static_cast<size_t>(f)] = mel.at(0, f);
  for (int t = 0; t < mel.frames; ++t) {
    for (int f = 0; f < mel.n_mels; ++f) {
      double m = mel.at(t, f);
      double& s = smooth[static_cast<size_t>(f)];
      if (t > 0) s = (1.0 - c) * s + c * m;
      double denom = std::pow(q.eps + s, q.gain);
      double v = std::pow(m / denom + q.bias, q.exponent) - bias_pow;
      out.at(t, f) = static_cast<float>(v);
    }
  }
  return out;
}

MelSpectrogram compute_pcen_melspec(const Waveform& w, const SpectrogramParams& p,
                                    const PcenParams& q) {
  return pcen_transform(compute_linear_melspec(w, p), q);
}

}  // namespace birb::audio
