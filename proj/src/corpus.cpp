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
#include <cstdio>

#include "birb/corpus.hpp"

namespace birb::corpus {

bool is_valid_species_code(const SpeciesCode& code) {
  if (code.empty()) return false;
  for (char c : code) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (!ok) return false;
  }
  return true;
}

void validate_species_code(const SpeciesCode& code) {
  if (!is_valid_species_code(code))
    throw DataError("invalid species code: '" + code + "'");
}

std::string to_string(SourceKind k) {
  return k == SourceKind::focal ? "focal" : "soundscape";
}

SourceKind source_kind_from_string(const std::string& s) {
  if (s == "focal") return SourceKind::focal;
  if (s == "soundscape") return SourceKind::soundscape;
  throw DataError("unknown source kind: '" + s + "'");
}

void Recording::validate() const {
  if (id.empty()) throw DataError("recording with empty id");
  if (duration_s <= 0) throw DataError("recording " + id + ": duration must be positive");
  validate_species_code(foreground);
  for (const auto& b : background) validate_species_code(b);
  if (background.count(foreground))
    throw DataError("recording " + id + ": foreground listed in background");
}

void Annotation::validate() const {
  if (recording_id.empty()) throw DataError("annotation with empty recording id");
  validate_species_code(species);
  if (!(start_s >= 0 && start_s < end_s))
    throw DataError("annotation for " + recording_id + ": need 0 <= start < end");
}

std::string Window::id() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s#%010.3f", recording_id.c_str(), start_s);
  return std::string(buf);
}

void TaxonomyMap::validate() const {
  for (const auto& ig : ignored) {
    if (entries.count(ig))
      throw DataError("taxonomy: code '" + ig + "' is both mapped and ignored");
  }
}

void SplitSpec::validate() const {
  if (upstream_per_species < 1)
    throw ConfigError("split: upstream_per_species must be >= 1");
  for (const auto& s : ar_species) {
    if (heldout_species.count(s))
      throw ConfigError("split: species '" + s + "' is both AR and heldout");
  }
}

ResolvedSpecies resolve_taxonomy(const SpeciesCode& code, const TaxonomyMap& map) {
  if (map.ignored.count(code)) return ResolvedSpecies{std::nullopt};
  auto it = map.entries.find(code);
  if (it == map.entries.end()) throw DataError("unknown species code: '" + code + "'");
  return ResolvedSpecies{it->second};
}

std::vector<Window> build_windows(double duration_s, const std::vector<Annotation>& annotations,
                                  double win_s, double stride_s) {
  if (duration_s <= 0) throw DataError("build_windows: duration must be positive");
  if (win_s <= 0 || stride_s <= 0) throw ConfigError("build_windows: need win, stride > 0");

  const double padded = std::max(duration_s, win_s);
  const int count = static_cast<int>(std::floor((padded - win_s) / stride_s)) + 1;

  std::vector<Window> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    Window w;
    w.start_s = i * stride_s;
    w.length_s = win_s;
    for (const auto& a : annotations) {
      // any positive overlap labels the window
      if (a.start_s < w.start_s + win_s && a.end_s > w.start_s) w.labels.insert(a.species);
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Window> window_xc_recording(const Recording& r, double win_s, double stride_s,
                                        LabelPropagation mode) {
  if (r.source_kind != SourceKind::focal)
    throw DataError("window_xc_recording: recording " + r.id + " is not focal");
  std::vector<Window> ws = build_windows(r.duration_s, {}, win_s, stride_s);
  for (auto& w : ws) {
    w.recording_id = r.id;
    if (mode == LabelPropagation::foreground)
      w.labels = {r.foreground};
    else
      w.labels = r.background;
  }
  return ws;
}

Window middle_crop(const peakfind::Slice& slice, double target_s) {
  if (std::abs(slice.length_s - (target_s + 1.0)) > 1e-9)
    throw DataError("middle_crop: slice length must be " + std::to_string(target_s + 1.0) +
                    " s, got " + std::to_string(slice.length_s));
  Window w;
  w.recording_id = slice.recording_id;
  w.start_s = slice.start_s + 0.5;
  w.length_s = target_s;
  return w;
}

SplitResult construct_splits(const std::vector<Recording>& recordings, const SplitSpec& spec) {
  spec.validate();
  SplitResult result;

  auto touches = [](const Recording& r, const std::set<SpeciesCode>& species) {
    if (species.count(r.foreground)) return true;
    for (const auto& b : r.background)
      if (species.count(b)) return true;
    return false;
  };

  std::vector<bool> reserved(recordings.size(), false);

  for (size_t i = 0; i < recordings.size(); ++i) {
    if (touches(recordings[i], spec.heldout_species)) reserved[i] = true;
  }

  // Recordings where an AR species appears as a background label never go
  // upstream; only the sampled focal recordings carry an AR species there.
  for (size_t i = 0; i < recordings.size(); ++i) {
    if (reserved[i]) continue;
    for (const auto& b : recordings[i].background) {
      if (spec.ar_species.count(b)) {
        reserved[i] = true;
        break;
      }
    }
  }

  // Per-AR-species sampling over eligible focal recordings, ordered by id so
  // the draw depends only on (seed, content).
  for (const auto& sp : spec.ar_species) {
    std::vector<size_t> pool;
    for (size_t i = 0; i < recordings.size(); ++i) {
      const Recording& r = recordings[i];
      if (reserved[i]) continue;
      if (r.source_kind == SourceKind::focal && r.foreground == sp) pool.push_back(i);
    }
    std::sort(pool.begin(), pool.end(), [&](size_t a, size_t b) {
      return recordings[a].id < recordings[b].id;
    });

    const size_t want = static_cast<size_t>(spec.upstream_per_species);
    if (pool.size() < want)
      result.short_pools.emplace_back(sp, static_cast<int>(pool.size()));

    Rng rng(derive_seed(spec.seed, "split/" + sp));
    std::vector<size_t> picked = rng.sample_without_replacement(pool.size(), want);
    std::set<size_t> keep;
    for (size_t p : picked) keep.insert(pool[p]);
    for (size_t idx : pool) {
      if (!keep.count(idx)) reserved[idx] = true;
    }
  }

  for (size_t i = 0; i < recordings.size(); ++i) {
    if (reserved[i])
      result.eval_reserved.push_back(recordings[i]);
    else
      result.upstream.push_back(recordings[i]);
  }
  return result;
}

std::vector<Window> resample_to_distribution(const std::vector<Window>& windows,
                                             const std::map<SpeciesCode, double>& target,
                                             size_t n, uint64_t seed) {
  double total = 0.0;
  for (const auto& [sp, p] : target) {
    if (p < 0) throw ConfigError("resample: negative target probability for " + sp);
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("resample: target distribution must sum to 1");

  // index windows by species
  std::map<SpeciesCode, std::vector<size_t>> by_species;
  for (size_t i = 0; i < windows.size(); ++i)
    for (const auto& sp : windows[i].labels) by_species[sp].push_back(i);

  for (const auto& [sp, p] : target) {
    if (p > 0 && !by_species.count(sp))
      throw DataError("resample: species unavailable in corpus: " + sp);
  }

  // Largest-remainder apportionment of n over classes.
  struct Share {
    SpeciesCode species;
    size_t count;
    double remainder;
  };
  std::vector<Share> shares;
  size_t assigned = 0;
  for (const auto& [sp, p] : target) {
    double exact = static_cast<double>(n) * p;
    size_t base = static_cast<size_t>(std::floor(exact + 1e-9));
    shares.push_back({sp, base, exact - static_cast<double>(base)});
    assigned += base;
  }
  std::sort(shares.begin(), shares.end(), [](const Share& a, const Share& b) {
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    return a.species < b.species;
  });
  for (size_t i = 0; assigned < n && i < shares.size(); ++i, ++assigned) ++shares[i].count;
  if (assigned != n) throw DataError("resample: cannot apportion counts");

  std::sort(shares.begin(), shares.end(),
            [](const Share& a, const Share& b) { return a.species < b.species; });

  std::vector<Window> out;
  std::vector<bool> used(windows.size(), false);
  for (const auto& share : shares) {
    if (share.count == 0) continue;
    auto& pool = by_species[share.species];
    std::vector<size_t> available;
    for (size_t idx : pool)
      if (!used[idx]) available.push_back(idx);
    if (available.size() < share.count)
      throw DataError("resample: insufficient windows for species " + share.species + " (need " +
                      std::to_string(share.count) + ", have " +
                      std::to_string(available.size()) + ")");
    Rng rng(derive_seed(seed, "resample/" + share.species));
    std::vector<size_t> picked = rng.sample_without_replacement(available.size(), share.count);
    for (size_t p : picked) {
      used[available[p]] = true;
      out.push_back(windows[available[p]]);
    }
  }
  return out;
}

}  // namespace birb::corpus
