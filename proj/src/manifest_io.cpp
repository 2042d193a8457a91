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

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "birb/corpus.hpp"

namespace birb::corpus {

using nlohmann::json;

namespace {

json parse_json_line(const std::string& line, const std::string& path, size_t lineno) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(path + ":" + std::to_string(lineno) + ": bad JSON: " + e.what());
  }
}

// Applies fn to every non-empty line.
void for_each_jsonl(const std::string& path,
                    const std::function<void(const json&, size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    fn(parse_json_line(line, path, lineno), lineno);
  }
}

json recording_to_json(const Recording& r) {
  json row;
  row["id"] = r.id;
  row["audio_path"] = r.audio_path;
  row["foreground"] = r.foreground;
  row["background"] = std::vector<std::string>(r.background.begin(), r.background.end());
  row["duration_s"] = r.duration_s;
  row["source_kind"] = to_string(r.source_kind);
  return row;
}

Recording recording_from_json(const json& row, const std::string& path, size_t lineno) {
  try {
    Recording r;
    r.id = row.at("id").get<std::string>();
    r.audio_path = row.at("audio_path").get<std::string>();
    r.foreground = row.at("foreground").get<std::string>();
    if (row.contains("background")) {
      for (const auto& b : row.at("background")) r.background.insert(b.get<std::string>());
    }
    r.duration_s = row.at("duration_s").get<double>();
    r.source_kind = source_kind_from_string(row.at("source_kind").get<std::string>());
    r.validate();
    return r;
  } catch (const json::exception& e) {
    throw DataError(path + ":" + std::to_string(lineno) + ": bad manifest row: " + e.what());
  }
}

}  // namespace

std::vector<Recording> read_manifest(const std::string& path) {
  std::vector<Recording> out;
  for_each_jsonl(path, [&](const json& row, size_t lineno) {
    out.push_back(recording_from_json(row, path, lineno));
  });
  return out;
}

void write_manifest(const std::string& path, const std::vector<Recording>& recordings) {
  std::ostringstream ss;
  for (const auto& r : recordings) ss << recording_to_json(r).dump() << "\n";
  write_text_file(path, ss.str());
}

void write_split_manifest(const std::string& path, const SplitResult& split) {
  std::ostringstream ss;
  for (const auto& r : split.upstream) {
    json row = recording_to_json(r);
    row["split"] = "upstream";
    ss << row.dump() << "\n";
  }
  for (const auto& r : split.eval_reserved) {
    json row = recording_to_json(r);
    row["split"] = "eval_reserved";
    ss << row.dump() << "\n";
  }
  write_text_file(path, ss.str());
}

std::map<std::string, SplitAssignment> read_split_assignments(const std::string& path) {
  std::map<std::string, SplitAssignment> out;
  for_each_jsonl(path, [&](const json& row, size_t lineno) {
    try {
      std::string id = row.at("id").get<std::string>();
      std::string split = row.at("split").get<std::string>();
      if (split == "upstream")
        out[id] = SplitAssignment::upstream;
      else if (split == "eval_reserved")
        out[id] = SplitAssignment::eval_reserved;
      else
        throw DataError(path + ":" + std::to_string(lineno) + ": unknown split '" + split + "'");
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad split row: " + e.what());
    }
  });
  return out;
}

std::vector<Annotation> read_annotations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<Annotation> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4)
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 4 CSV fields");
    if (lineno == 1 && fields[0] == "recording_id") continue;  // header
    Annotation a;
    a.recording_id = fields[0];
    a.species = fields[1];
    try {
      a.start_s = std::stod(fields[2]);
      a.end_s = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad number");
    }
    a.validate();
    out.push_back(std::move(a));
  }
  return out;
}

void write_annotations_csv(const std::string& path, const std::vector<Annotation>& annotations) {
  std::ostringstream ss;
  ss << "recording_id,species,start_s,end_s\n";
  char buf[64];
  for (const auto& a : annotations) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f", a.start_s, a.end_s);
    ss << a.recording_id << "," << a.species << "," << buf << "\n";
  }
  write_text_file(path, ss.str());
}

TaxonomyMap read_taxonomy(const std::string& path) {
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw DataError(path + ": bad JSON: " + std::string(e.what()));
  }
  TaxonomyMap map;
  try {
    for (const auto& [k, v] : root.at("entries").items())
      map.entries[k] = v.get<std::string>();
    if (root.contains("ignored")) {
      for (const auto& s : root.at("ignored")) map.ignored.insert(s.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": bad taxonomy: " + std::string(e.what()));
  }
  map.validate();
  return map;
}

void write_taxonomy(const std::string& path, const TaxonomyMap& map) {
  json root;
  root["entries"] = json::object();
  for (const auto& [k, v] : map.entries) root["entries"][k] = v;
  root["ignored"] = std::vector<std::string>(map.ignored.begin(), map.ignored.end());
  write_text_file(path, root.dump(2) + "\n");
}

std::vector<Window> read_windows(const std::string& path) {
  std::vector<Window> out;
  for_each_jsonl(path, [&](const json& row, size_t lineno) {
    try {
      Window w;
      w.recording_id = row.at("recording_id").get<std::string>();
      w.start_s = row.at("start_s").get<double>();
      w.length_s = row.at("length_s").get<double>();
      if (row.contains("labels")) {
        for (const auto& l : row.at("labels")) w.labels.insert(l.get<std::string>());
      }
      out.push_back(std::move(w));
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad window row: " + e.what());
    }
  });
  return out;
}

void write_windows(const std::string& path, const std::vector<Window>& windows) {
  std::ostringstream ss;
  for (const auto& w : windows) {
    json row;
    row["id"] = w.id();
    row["recording_id"] = w.recording_id;
    row["start_s"] = w.start_s;
    row["length_s"] = w.length_s;
    row["labels"] = std::vector<std::string>(w.labels.begin(), w.labels.end());
    ss << row.dump() << "\n";
  }
  write_text_file(path, ss.str());
}

std::vector<peakfind::Slice> read_slices(const std::string& path) {
  std::vector<peakfind::Slice> out;
  for_each_jsonl(path, [&](const json& row, size_t lineno) {
    try {
      peakfind::Slice s;
      s.recording_id = row.at("recording_id").get<std::string>();
      s.start_s = row.at("start_s").get<double>();
      s.length_s = row.at("length_s").get<double>();
      s.peak_score = row.at("peak_score").get<double>();
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad slice row: " + e.what());
    }
  });
  return out;
}

void write_slices(const std::string& path, const std::vector<peakfind::Slice>& slices) {
  std::ostringstream ss;
  for (const auto& s : slices) {
    json row;
    row["recording_id"] = s.recording_id;
    row["start_s"] = s.start_s;
    row["length_s"] = s.length_s;
    row["peak_score"] = s.peak_score;
    ss << row.dump() << "\n";
  }
  write_text_file(path, ss.str());
}

}  // namespace birb::corpus
