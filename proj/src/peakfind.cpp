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

#include "birb/peakfind.hpp"

namespace birb::peakfind {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Linear-interpolated percentile over a sorted copy of the values.
double percentile(std::vector<double> v, double per) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double idx = per / 100.0 * static_cast<double>(v.size() - 1);
  size_t lo = static_cast<size_t>(idx);
  double frac = idx - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

struct RidgeLine {
  std::vector<int> rows;
  std::vector<int> cols;
  int gap = 0;
};

// Strict local maxima per row; boundary columns never qualify.
std::vector<std::vector<int>> relative_maxima(const CwtMatrix& m) {
  std::vector<std::vector<int>> out(static_cast<size_t>(m.n_widths));
  for (int r = 0; r < m.n_widths; ++r) {
    for (int c = 1; c + 1 < m.n_frames; ++c) {
      double v = m.at(r, c);
      if (v > m.at(r, c - 1) && v > m.at(r, c + 1)) out[static_cast<size_t>(r)].push_back(c);
    }
  }
  return out;
}

std::vector<RidgeLine> identify_ridge_lines(const CwtMatrix& m,
                                            const std::vector<double>& max_distances,
                                            int gap_thresh) {
  std::vector<std::vector<int>> maxima = relative_maxima(m);

  int start_row = -1;
  for (int r = m.n_widths - 1; r >= 0; --r) {
    if (!maxima[static_cast<size_t>(r)].empty()) {
      start_row = r;
      break;
    }
  }
  if (start_row < 0) return {};

  std::vector<RidgeLine> active;
  std::vector<RidgeLine> finished;
  for (int col : maxima[static_cast<size_t>(start_row)])
    active.push_back(RidgeLine{{start_row}, {col}, 0});

  for (int row = start_row - 1; row >= 0; --row) {
    for (auto& line : active) ++line.gap;

    // Snapshot of each line's frontier before this row attaches anything.
    std::vector<int> prev_cols(active.size());
    for (size_t i = 0; i < active.size(); ++i) prev_cols[i] = active[i].cols.back();
    size_t n_prev = active.size();

    for (int col : maxima[static_cast<size_t>(row)]) {
      int best = -1;
      int best_diff = 0;
      for (size_t i = 0; i < n_prev; ++i) {
        int diff = std::abs(col - prev_cols[i]);
        if (best < 0 || diff < best_diff) {
          best = static_cast<int>(i);
          best_diff = diff;
        }
      }
      if (best >= 0 &&
          static_cast<double>(best_diff) <= max_distances[static_cast<size_t>(row)]) {
        active[static_cast<size_t>(best)].rows.push_back(row);
        active[static_cast<size_t>(best)].cols.push_back(col);
        active[static_cast<size_t>(best)].gap = 0;
      } else {
        active.push_back(RidgeLine{{row}, {col}, 0});
      }
    }

    for (size_t i = active.size(); i-- > 0;) {
      if (active[i].gap > gap_thresh) {
        finished.push_back(std::move(active[i]));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  std::vector<RidgeLine> out;
  out.reserve(finished.size() + active.size());
  for (auto* group : {&finished, &active}) {
    for (auto& line : *group) {
      // Rows were appended in descending order; store ascending.
      std::reverse(line.rows.begin(), line.rows.end());
      std::reverse(line.cols.begin(), line.cols.end());
      out.push_back(std::move(line));
    }
  }
  return out;
}

}  // namespace

void PeakfindParams::validate() const {
  if (slice_len_s <= 0) throw ConfigError("peakfind: slice_len must be positive");
  if (max_slices < 1) throw ConfigError("peakfind: max_slices must be >= 1");
  if (!(min_peak_width_s < max_peak_width_s))
    throw ConfigError("peakfind: need min_peak_width < max_peak_width");
  if (n_widths < 1) throw ConfigError("peakfind: n_widths must be >= 1");
  if (peak_window_s <= 0 || peak_energy_factor <= 0 || outlier_sigma <= 0 || signal_sigma <= 0)
    throw ConfigError("peakfind: factors must be positive");
}

audio::MelSpectrogram denoise(const audio::MelSpectrogram& m, double outlier_sigma,
                              double signal_sigma) {
  if (m.frames == 0 || m.n_mels == 0) throw DataError("denoise: empty spectrogram");
  audio::MelSpectrogram out = m;
  const int T = m.frames;
  for (int f = 0; f < m.n_mels; ++f) {
    double sum = 0.0, sum2 = 0.0;
    for (int t = 0; t < T; ++t) {
      double v = m.at(t, f);
      sum += v;
      sum2 += v * v;
    }
    double mean1 = sum / T;
    double var1 = std::max(0.0, sum2 / T - mean1 * mean1);
    double cut = mean1 + outlier_sigma * std::sqrt(var1);

    double ksum = 0.0, ksum2 = 0.0;
    int kept = 0;
    for (int t = 0; t < T; ++t) {
      double v = m.at(t, f);
      if (v <= cut) {
        ksum += v;
        ksum2 += v * v;
        ++kept;
      }
    }
    double mean2, std2;
    if (kept > 0) {
      mean2 = ksum / kept;
      std2 = std::sqrt(std::max(0.0, ksum2 / kept - mean2 * mean2));
    } else {
      mean2 = mean1;
      std2 = std::sqrt(var1);
    }

    double thresh = mean2 + signal_sigma * std2;
    for (int t = 0; t < T; ++t) {
      double v = m.at(t, f);
      out.at(t, f) = v > thresh ? static_cast<float>(v - mean2) : 0.0f;
    }
  }
  return out;
}

std::vector<double> ricker_wavelet(int points, double a) {
  std::vector<double> w(static_cast<size_t>(points));
  const double amp = 2.0 / (std::sqrt(3.0 * a) * std::pow(kPi, 0.25));
  const double wsq = a * a;
  for (int i = 0; i < points; ++i) {
    double x = static_cast<double>(i) - (points - 1.0) / 2.0;
    double xsq = x * x;
    w[static_cast<size_t>(i)] = amp * (1.0 - xsq / wsq) * std::exp(-xsq / (2.0 * wsq));
  }
  return w;
}

CwtMatrix cwt_ricker(const std::vector<double>& signal, const std::vector<double>& widths) {
  if (signal.empty()) throw DataError("cwt: empty signal");
  const int n = static_cast<int>(signal.size());
  CwtMatrix out;
  out.n_widths = static_cast<int>(widths.size());
  out.n_frames = n;
  out.data.assign(static_cast<size_t>(out.n_widths) * n, 0.0);

  for (size_t wi = 0; wi < widths.size(); ++wi) {
    double width = widths[wi];
    if (width <= 0) throw ConfigError("cwt: widths must be positive");
    int points = std::min(static_cast<int>(std::ceil(10.0 * width)), n);
    std::vector<double> kernel = ricker_wavelet(points, width);
    // 'same'-mode convolution: output t = sum_k signal[t + offset - k] * kernel[k]
    const int m = points;
    const int offset = (m - 1) / 2;  // center of the full convolution
    for (int t = 0; t < n; ++t) {
      double acc = 0.0;
      int k_lo = std::max(0, t + offset - (n - 1));
      int k_hi = std::min(m - 1, t + offset);
      for (int k = k_lo; k <= k_hi; ++k)
        acc += signal[static_cast<size_t>(t + offset - k)] * kernel[static_cast<size_t>(k)];
      out.at(static_cast<int>(wi), t) = acc;
    }
  }
  return out;
}

std::vector<int> find_ridge_peaks(const CwtMatrix& cwt, const std::vector<double>& widths,
                                  const RidgeParams& rp) {
  if (cwt.n_widths < 1) throw DataError("find_ridge_peaks: need at least one width row");

  std::vector<double> max_distances(widths.size());
  for (size_t i = 0; i < widths.size(); ++i)
    max_distances[i] = widths[i] * rp.max_distance_factor;

  std::vector<RidgeLine> lines = identify_ridge_lines(cwt, max_distances, rp.gap_thresh);

  const int n = cwt.n_frames;
  int min_length = rp.min_length > 0
                       ? rp.min_length
                       : static_cast<int>(std::ceil(static_cast<double>(cwt.n_widths) / 4.0));
  int window_size =
      rp.noise_window > 0 ? rp.noise_window : static_cast<int>(std::ceil(n / 20.0));
  int hf = window_size / 2;
  int odd = window_size % 2;

  // Local noise floor along the smallest-width row.
  std::vector<double> noises(static_cast<size_t>(n));
  std::vector<double> window;
  for (int c = 0; c < n; ++c) {
    int lo = std::max(0, c - hf);
    int hi = std::min(n, c + hf + odd);
    window.assign(hi - lo, 0.0);
    for (int i = lo; i < hi; ++i) window[static_cast<size_t>(i - lo)] = cwt.at(0, i);
    noises[static_cast<size_t>(c)] = percentile(window, rp.noise_percentile);
  }

  std::vector<int> peaks;
  for (const auto& line : lines) {
    if (static_cast<int>(line.rows.size()) < min_length) continue;
    int row0 = line.rows.front();
    int col0 = line.cols.front();
    double noise = noises[static_cast<size_t>(col0)];
    double snr = std::abs(cwt.at(row0, col0)) / noise;
    if (!(snr >= rp.min_snr)) continue;  // NaN (0/0) fails too
    peaks.push_back(col0);
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

std::vector<Slice> extract_slices(const std::string& recording_id, const audio::Waveform& w,
                                  const PeakfindParams& p, const audio::SpectrogramParams& sp) {
  p.validate();
  if (w.sample_rate <= 0) throw DataError("extract_slices: waveform has no sample rate");

  audio::Waveform padded = w;
  const size_t min_samples =
      static_cast<size_t>(std::llround(p.slice_len_s * w.sample_rate));
  if (padded.samples.size() < min_samples) padded.samples.resize(min_samples, 0.0f);
  const double total_dur = padded.duration_s();

  audio::MelSpectrogram mel = audio::compute_log_melspec(padded, sp);
  audio::MelSpectrogram den = denoise(mel, p.outlier_sigma, p.signal_sigma);

  std::vector<double> summed(static_cast<size_t>(den.frames), 0.0);
  for (int t = 0; t < den.frames; ++t) {
    double acc = 0.0;
    for (int f = 0; f < den.n_mels; ++f) acc += den.at(t, f);
    summed[static_cast<size_t>(t)] = acc;
  }

  const double frame_rate = mel.frame_rate;
  std::vector<double> widths(static_cast<size_t>(p.n_widths));
  for (int i = 0; i < p.n_widths; ++i) {
    double frac = p.n_widths > 1 ? static_cast<double>(i) / (p.n_widths - 1) : 0.0;
    widths[static_cast<size_t>(i)] =
        (p.min_peak_width_s + frac * (p.max_peak_width_s - p.min_peak_width_s)) * frame_rate;
  }

  CwtMatrix cwt = cwt_ricker(summed, widths);
  std::vector<int> peak_frames = find_ridge_peaks(cwt, widths, RidgeParams{});

  double total_mean = 0.0;
  for (double v : summed) total_mean += v;
  total_mean /= static_cast<double>(summed.size());

  const int wframes = static_cast<int>(std::lround(p.peak_window_s * frame_rate));
  struct ScoredPeak {
    int frame;
    double score;
  };
  std::vector<ScoredPeak> kept;
  for (int peak : peak_frames) {
    int lo = std::max(0, peak - wframes / 2);
    int hi = std::min(static_cast<int>(summed.size()), lo + wframes);
    double wsum = 0.0;
    for (int t = lo; t < hi; ++t) wsum += summed[static_cast<size_t>(t)];
    double threshold = p.literal_energy_filter
                           ? p.peak_energy_factor * total_mean
                           : p.peak_energy_factor * total_mean * (hi - lo);
    if (wsum < threshold) continue;
    kept.push_back({peak, wsum});
  }

  std::stable_sort(kept.begin(), kept.end(), [](const ScoredPeak& a, const ScoredPeak& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.frame < b.frame;
  });
  if (static_cast<int>(kept.size()) > p.max_slices) kept.resize(static_cast<size_t>(p.max_slices));

  std::vector<Slice> slices;
  if (kept.empty()) {
    slices.push_back(Slice{recording_id, 0.0, p.slice_len_s, 0.0});
    return slices;
  }
  const double max_start = total_dur - p.slice_len_s;
  for (const auto& peak : kept) {
    double center = static_cast<double>(peak.frame) / frame_rate;
    double start = std::clamp(center - p.slice_len_s / 2.0, 0.0, max_start);
    slices.push_back(Slice{recording_id, start, p.slice_len_s, peak.score});
  }
  return slices;
}

}  // namespace birb::peakfind
