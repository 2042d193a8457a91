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

#include "birb/audio.hpp"

namespace birb::audio {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  double px = kPi * x;
  return std::sin(px) / px;
}

}  // namespace

Waveform resample(const Waveform& w, int target_rate, int taps_per_side) {
  if (target_rate <= 0) throw ConfigError("target sample rate must be positive");
  if (w.sample_rate <= 0) throw DataError("waveform has no sample rate");
  if (w.sample_rate == target_rate || w.samples.empty()) {
    Waveform out = w;
    out.sample_rate = target_rate;
    return out;
  }

  const double src = static_cast<double>(w.sample_rate);
  const double dst = static_cast<double>(target_rate);
  const double step = src / dst;  // input samples per output sample
  // When downsampling the kernel is stretched so the cutoff sits at the
  // target Nyquist.
  const double cutoff = std::min(1.0, dst / src) * 0.975;
  const double half_width = taps_per_side / cutoff;

  const int64_t n_in = static_cast<int64_t>(w.samples.size());
  const int64_t n_out = llround(static_cast<double>(n_in) * dst / src);

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<size_t>(n_out));

  for (int64_t j = 0; j < n_out; ++j) {
    const double center = static_cast<double>(j) * step;
    int64_t lo = static_cast<int64_t>(std::ceil(center - half_width));
    int64_t hi = static_cast<int64_t>(std::floor(center + half_width));
    if (lo < 0) lo = 0;
    if (hi >= n_in) hi = n_in - 1;
    double acc = 0.0;
    double wsum = 0.0;
    for (int64_t i = lo; i <= hi; ++i) {
      const double d = static_cast<double>(i) - center;
      const double u = d / half_width;  // in [-1, 1]
      const double win = 0.5 + 0.5 * std::cos(kPi * u);  // Hann
      const double k = cutoff * sinc(cutoff * d) * win;
      acc += k * w.samples[static_cast<size_t>(i)];
      wsum += k;
    }
    // Normalizing by the kernel sum keeps DC gain at 1 for arbitrary ratios.
    out.samples[static_cast<size_t>(j)] =
        wsum != 0.0 ? static_cast<float>(acc / wsum) : 0.0f;
  }
  return out;
}

}  // namespace birb::audio
