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

#ifndef BIRB_CORPUS_HPP
#define BIRB_CORPUS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "birb/common.hpp"
#include "birb/peakfind.hpp"

namespace birb::corpus {

// Species identifiers are short lowercase alphanumeric codes.
using SpeciesCode = std::string;

bool is_valid_species_code(const SpeciesCode& code);
void validate_species_code(const SpeciesCode& code);

enum class SourceKind { focal, soundscape };

std::string to_string(SourceKind k);
SourceKind source_kind_from_string(const std::string& s);

struct Recording {
  std::string id;
  std::string audio_path;
  SpeciesCode foreground;
  std::set<SpeciesCode> background;
  double duration_s = 0.0;
  SourceKind source_kind = SourceKind::focal;

  void validate() const;
};

struct Annotation {
  std::string recording_id;
  SpeciesCode species;
  double start_s = 0.0;
  double end_s = 0.0;

  void validate() const;
};

// A fixed-length labeled window of a recording.
struct Window {
  std::string recording_id;
  double start_s = 0.0;
  double length_s = 5.0;
  std::set<SpeciesCode> labels;

  std::string id() const;
};

struct TaxonomyMap {
  std::map<SpeciesCode, SpeciesCode> entries;
  std::set<SpeciesCode> ignored;

  void validate() const;
};

// Result of resolve_taxonomy: either a mapped code or the Ignored sentinel.
struct ResolvedSpecies {
  std::optional<SpeciesCode> code;  // empty -> ignored
  bool ignored() const { return !code.has_value(); }
};

struct SplitSpec {
  std::set<SpeciesCode> ar_species;       // availability capped upstream
  std::set<SpeciesCode> heldout_species;  // excluded from upstream entirely
  int upstream_per_species = 10;
  uint64_t seed = 0;

  void validate() const;
};

enum class SplitAssignment { upstream, eval_reserved };

struct SplitResult {
  std::vector<Recording> upstream;
  std::vector<Recording> eval_reserved;
  // AR species whose available pool was smaller than upstream_per_species.
  std::vector<std::pair<SpeciesCode, int>> short_pools;
};

// Maps a source code through the taxonomy. Throws DataError for codes that
// are neither mapped nor ignored.
ResolvedSpecies resolve_taxonomy(const SpeciesCode& code, const TaxonomyMap& map);

// Strided window grid with dense annotation labels. Short recordings are
// padded to one full window; a window is labeled with every species whose
// annotation overlaps it by more than zero seconds.
std::vector<Window> build_windows(double duration_s, const std::vector<Annotation>& annotations,
                                  double win_s = 5.0, double stride_s = 2.5);

enum class LabelPropagation { foreground, background };

// Windows a focal recording and propagates its file-level label(s) to every
// window. Foreground mode labels with the single focal species; background
// mode labels with the recording's background set (possibly empty).
std::vector<Window> window_xc_recording(const Recording& r, double win_s, double stride_s,
                                        LabelPropagation mode);

// Central crop of a fixed 6 s slice down to the 5 s used for queries.
Window middle_crop(const peakfind::Slice& slice, double target_s = 5.0);

// Upstream / eval partition:
//  - any recording whose foreground or background touches a heldout species
//    is reserved for evaluation;
//  - for each AR species, upstream keeps a seeded random sample of at most
//    upstream_per_species focal recordings, the rest are reserved;
//  - recordings where an AR species appears only in the background are
//    reserved;
//  - everything else goes upstream.
SplitResult construct_splits(const std::vector<Recording>& recordings, const SplitSpec& spec);

// Samples n windows without replacement whose label distribution matches
// `target` using largest-remainder rounding of per-class counts.
std::vector<Window> resample_to_distribution(const std::vector<Window>& windows,
                                             const std::map<SpeciesCode, double>& target,
                                             size_t n, uint64_t seed);

// --- file formats -----------------------------------------------------------

std::vector<Recording> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<Recording>& recordings);

// Split output is the manifest row plus a "split" field.
void write_split_manifest(const std::string& path, const SplitResult& split);
std::map<std::string, SplitAssignment> read_split_assignments(const std::string& path);

std::vector<Annotation> read_annotations_csv(const std::string& path);
void write_annotations_csv(const std::string& path, const std::vector<Annotation>& annotations);

TaxonomyMap read_taxonomy(const std::string& path);
void write_taxonomy(const std::string& path, const TaxonomyMap& map);

std::vector<Window> read_windows(const std::string& path);
void write_windows(const std::string& path, const std::vector<Window>& windows);

std::vector<peakfind::Slice> read_slices(const std::string& path);
void write_slices(const std::string& path, const std::vector<peakfind::Slice>& slices);

}  // namespace birb::corpus

#endif  // BIRB_CORPUS_HPP
