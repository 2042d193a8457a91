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

#ifndef BIRB_PEAKFIND_HPP
#define BIRB_PEAKFIND_HPP

#include <string>
#include <vector>

#include "birb/audio.hpp"

namespace birb::peakfind {

struct PeakfindParams {
  double slice_len_s = 6.0;
  int max_slices = 5;
  double outlier_sigma = 1.5;
  double signal_sigma = 0.75;
  double min_peak_width_s = 0.5;
  double max_peak_width_s = 2.0;
  int n_widths = 10;
  double peak_window_s = 0.6;
  double peak_energy_factor = 1.5;
  // The published procedure compares a windowed *sum* against a per-frame
  // *mean*; by default both sides are normalized per frame. This flag
  // restores the literal comparison.
  bool literal_energy_filter = false;

  void validate() const;
};

struct RidgeParams {
  double max_distance_factor = 0.25;  // per-row max distance = factor * width
  int gap_thresh = 2;
  int min_length = 0;     // 0 -> ceil(n_widths / 4)
  double min_snr = 1.0;
  double noise_percentile = 10.0;
  int noise_window = 0;   // 0 -> ceil(n_frames / 20)
};

// A fixed-length high-energy slice of a recording. Slices for one recording
// are ordered by descending peak_score, ties by earlier start.
struct Slice {
  std::string recording_id;
  double start_s = 0.0;
  double length_s = 0.0;
  double peak_score = 0.0;
};

struct CwtMatrix {
  std::vector<double> data;  // n_widths * n_frames, row-major by width
  int n_widths = 0;
  int n_frames = 0;

  double at(int w, int t) const { return data[static_cast<size_t>(w) * n_frames + t]; }
  double& at(int w, int t) { return data[static_cast<size_t>(w) * n_frames + t]; }
};

// Two-step denoise, applied per frequency bin across time:
// 1. drop cells above mean + outlier_sigma * std (stats over the full bin);
// 2. with mean/std recomputed on the remainder, keep cells strictly above
//    mean + signal_sigma * std, shifted down by that mean; zero the rest.
audio::MelSpectrogram denoise(const audio::MelSpectrogram& m, double outlier_sigma,
                              double signal_sigma);

// Ricker (Mexican-hat) wavelet sampled at `points` positions for scale a.
std::vector<double> ricker_wavelet(int points, double a);

// Continuous wavelet transform: row i is the same-length convolution of the
// signal with a Ricker wavelet of width widths[i]. Kernel length is
// min(ceil(10 * width), signal length).
CwtMatrix cwt_ricker(const std::vector<double>& signal, const std::vector<double>& widths);

// Connects per-row local maxima into ridge lines across adjacent width rows
// and keeps ridges that are long enough and clear the SNR bar measured
// against a local noise percentile of the smallest-width row. Returns the
// frame index of each surviving ridge at its smallest width, ascending.
std::vector<int> find_ridge_peaks(const CwtMatrix& cwt, const std::vector<double>& widths,
                                  const RidgeParams& rp = {});

// Full slice extraction for one recording:
// pad to slice_len -> log-mel -> denoise -> per-frame summed magnitude ->
// ridge peaks -> energy filter -> sort by windowed magnitude, keep top
// max_slices -> emit slices centered on each peak, clamped into the
// recording. Falls back to a single [0, slice_len) slice when nothing
// survives.
std::vector<Slice> extract_slices(const std::string& recording_id, const audio::Waveform& w,
                                  const PeakfindParams& p, const audio::SpectrogramParams& sp);

}  // namespace birb::peakfind

#endif  // BIRB_PEAKFIND_HPP
