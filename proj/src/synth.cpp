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

// Desk-scale synthetic corpus: each pseudo-species is a two-partial tone
// stack at a distinct base frequency. Focal fixtures are clean recordings of
// one species; soundscape fixtures mix events from all species into noise,
// with ground-truth annotations.

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "birb/engine.hpp"

namespace birb::engine {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Hann-enveloped tone stack: base frequency plus a 1.5x partial at half
// amplitude, slightly detuned per event.
void add_vocalization(std::vector<float>& samples, int sample_rate, double start_s,
                      double dur_s, double base_hz, double amplitude, Rng& rng) {
  const int64_t n = static_cast<int64_t>(samples.size());
  const int64_t begin = std::llround(start_s * sample_rate);
  const int64_t count = std::llround(dur_s * sample_rate);
  const double detune = 1.0 + 0.03 * (rng.uniform() - 0.5);
  const double f1 = base_hz * detune;
  const double f2 = 1.5 * base_hz * detune;
  const double phase1 = rng.uniform(0.0, 2.0 * kPi);
  const double phase2 = rng.uniform(0.0, 2.0 * kPi);
  for (int64_t i = 0; i < count; ++i) {
    int64_t idx = begin + i;
    if (idx < 0 || idx >= n) continue;
    double t = static_cast<double>(i) / sample_rate;
    double env = 0.5 - 0.5 * std::cos(2.0 * kPi * i / std::max<int64_t>(count - 1, 1));
    double v = std::sin(2.0 * kPi * f1 * t + phase1) + 0.5 * std::sin(2.0 * kPi * f2 * t + phase2);
    samples[static_cast<size_t>(idx)] += static_cast<float>(amplitude * env * v);
  }
}

void add_noise(std::vector<float>& samples, double level, Rng& rng) {
  for (auto& s : samples) s += static_cast<float>(level * rng.normal());
}

std::string recording_filename(const std::string& id) { return id + ".wav"; }

}  // namespace

SynthResult generate_synthetic_corpus(const SynthSpec& spec, uint64_t seed,
                                      const std::string& out_dir) {
  spec.validate();
  fs::create_directories(fs::path(out_dir) / "audio");

  std::vector<corpus::Recording> manifest;
  std::vector<corpus::Annotation> annotations;
  SynthResult result;

  // focal recordings: 1-3 clear vocalizations of the focal species
  for (const auto& sp : spec.species) {
    for (int i = 0; i < spec.n_focal_per_species; ++i) {
      char idbuf[64];
      std::snprintf(idbuf, sizeof(idbuf), "%s_f%03d", sp.code.c_str(), i);
      std::string id(idbuf);
      Rng rng(derive_seed(seed, "synth/focal/" + id));

      audio::Waveform w;
      w.sample_rate = spec.sample_rate;
      w.samples.assign(static_cast<size_t>(std::llround(spec.focal_duration_s * spec.sample_rate)),
                       0.0f);
      add_noise(w.samples, spec.focal_noise_level, rng);

      int n_events = 1 + static_cast<int>(rng.uniform_int(3));
      for (int e = 0; e < n_events; ++e) {
        double dur = rng.uniform(0.6, 1.4);
        double start = rng.uniform(0.3, std::max(0.4, spec.focal_duration_s - dur - 0.3));
        add_vocalization(w.samples, spec.sample_rate, start, dur, sp.base_hz,
                         spec.event_amplitude, rng);
        result.events.push_back({id, sp.code, start, start + dur});
      }

      corpus::Recording rec;
      rec.id = id;
      rec.audio_path = (fs::path(out_dir) / "audio" / recording_filename(id)).string();
      rec.foreground = sp.code;
      rec.duration_s = spec.focal_duration_s;
      rec.source_kind = corpus::SourceKind::focal;

      // occasional faint second species, reflected as a background label
      if (spec.species.size() > 1 && rng.uniform() < spec.background_label_probability) {
        size_t other = rng.uniform_int(spec.species.size());
        while (spec.species[other].code == sp.code) other = rng.uniform_int(spec.species.size());
        const auto& bg = spec.species[other];
        double dur = rng.uniform(0.5, 1.0);
        double start = rng.uniform(0.3, std::max(0.4, spec.focal_duration_s - dur - 0.3));
        add_vocalization(w.samples, spec.sample_rate, start, dur, bg.base_hz,
                         spec.event_amplitude * 0.4, rng);
        rec.background.insert(bg.code);
        result.events.push_back({id, bg.code, start, start + dur});
      }

      audio::write_wav_float32(rec.audio_path, w);
      manifest.push_back(std::move(rec));
    }
  }

  // soundscapes: events from all species over a noisier bed, annotated
  for (int i = 0; i < spec.n_soundscapes; ++i) {
    char idbuf[64];
    std::snprintf(idbuf, sizeof(idbuf), "scape_%03d", i);
    std::string id(idbuf);
    Rng rng(derive_seed(seed, "synth/scape/" + id));

    audio::Waveform w;
    w.sample_rate = spec.sample_rate;
    w.samples.assign(
        static_cast<size_t>(std::llround(spec.soundscape_duration_s * spec.sample_rate)), 0.0f);
    add_noise(w.samples, spec.soundscape_noise_level, rng);

    double prev_start = -1.0, prev_end = -1.0;
    for (int e = 0; e < spec.events_per_soundscape; ++e) {
      const auto& sp = spec.species[rng.uniform_int(spec.species.size())];
      double dur = rng.uniform(0.6, 1.4);
      double start;
      if (prev_start >= 0 && rng.uniform() < spec.overlap_probability) {
        // deliberately overlap the previous event
        start = rng.uniform(prev_start, std::max(prev_start + 0.01, prev_end - 0.2));
      } else {
        start = rng.uniform(0.5, std::max(0.6, spec.soundscape_duration_s - dur - 0.5));
      }
      add_vocalization(w.samples, spec.sample_rate, start, dur, sp.base_hz,
                       spec.event_amplitude, rng);
      corpus::Annotation a;
      a.recording_id = id;
      a.species = sp.code;
      a.start_s = start;
      a.end_s = std::min(start + dur, spec.soundscape_duration_s);
      annotations.push_back(a);
      result.events.push_back({id, sp.code, a.start_s, a.end_s});
      prev_start = start;
      prev_end = start + dur;
    }

    corpus::Recording rec;
    rec.id = id;
    rec.audio_path = (fs::path(out_dir) / "audio" / recording_filename(id)).string();
    // soundscape rows keep a neutral foreground tag; labels come from
    // annotations
    rec.foreground = "none";
    rec.duration_s = spec.soundscape_duration_s;
    rec.source_kind = corpus::SourceKind::soundscape;
    audio::write_wav_float32(rec.audio_path, w);
    manifest.push_back(std::move(rec));
  }

  result.manifest_path = (fs::path(out_dir) / "manifest.jsonl").string();
  result.annotations_path = (fs::path(out_dir) / "annotations.csv").string();
  corpus::write_manifest(result.manifest_path, manifest);
  corpus::write_annotations_csv(result.annotations_path, annotations);

  // generator event log, usable as an independent ground truth
  json log = json::array();
  for (const auto& ev : result.events) {
    log.push_back({{"recording_id", ev.recording_id},
                   {"species", ev.species},
                   {"start_s", ev.start_s},
                   {"end_s", ev.end_s}});
  }
  write_text_file((fs::path(out_dir) / "events.json").string(), log.dump(2) + "\n");
  return result;
}

}  // namespace birb::engine
