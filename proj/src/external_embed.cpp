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

// File-exchange protocol with out-of-process embedders:
//   <dir>/request.jsonl   one {"id", "wav_path"} line per window
//   <dir>/windows/*.wav   5 s mono float32 at the configured rate
// The embedder answers with
//   <dir>/response.f32le  n*d little-endian float32 values
//   <dir>/response.json   {"n", "d", "provider_tag", "ids"}
// ids must appear in request order.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "birb/embed.hpp"

namespace birb::embed {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void run_embedder_command(const std::string& command, const std::string& protocol_dir) {
  std::string cmd = command + " \"" + protocol_dir + "\"";
  int status = std::system(cmd.c_str());
  if (status != 0)
    throw ProtocolError("embedder failed (command '" + cmd + "', status " +
                        std::to_string(status) + ")");
}

}  // namespace

void write_embed_request(const std::vector<corpus::Window>& windows, const AudioLookup& audio,
                         const WindowFeatureParams& params, const std::string& protocol_dir) {
  fs::create_directories(fs::path(protocol_dir) / "windows");

  std::vector<std::string> wav_paths(windows.size());
  for (size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    audio::Waveform clip;
    clip.sample_rate = params.sample_rate;
    clip.samples = extract_window_samples(audio(w.recording_id), w.start_s, w.length_s);
    std::string name = "w" + std::to_string(i) + ".wav";
    fs::path p = fs::path(protocol_dir) / "windows" / name;
    audio::write_wav_float32(p.string(), clip);
    wav_paths[i] = p.string();
  }

  std::ostringstream req;
  for (size_t i = 0; i < windows.size(); ++i) {
    json row;
    row["id"] = windows[i].id();
    row["wav_path"] = wav_paths[i];
    req << row.dump() << "\n";
  }
  write_text_file((fs::path(protocol_dir) / "request.jsonl").string(), req.str());
}

std::vector<EmbedRequestEntry> read_embed_request(const std::string& protocol_dir) {
  std::ifstream in(fs::path(protocol_dir) / "request.jsonl");
  if (!in) throw ProtocolError("missing request.jsonl in " + protocol_dir);
  std::vector<EmbedRequestEntry> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      json row = json::parse(line);
      out.push_back({row.at("id").get<std::string>(), row.at("wav_path").get<std::string>()});
    } catch (const json::exception& e) {
      throw ProtocolError("request.jsonl:" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_embed_response(const EmbeddingMatrix& m, const std::string& protocol_dir) {
  json header;
  header["n"] = m.n();
  header["d"] = m.d;
  header["provider_tag"] = m.provider_tag;
  header["ids"] = m.ids;
  write_text_file((fs::path(protocol_dir) / "response.json").string(), header.dump() + "\n");

  std::ofstream out(fs::path(protocol_dir) / "response.f32le", std::ios::binary | std::ios::trunc);
  if (!out) throw ProtocolError("cannot write response.f32le in " + protocol_dir);
  if (!m.data.empty())
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * sizeof(float)));
  if (!out) throw ProtocolError("short write of response.f32le in " + protocol_dir);
}

EmbeddingMatrix read_embed_response(const std::string& protocol_dir,
                                    const std::vector<std::string>& expected_ids) {
  fs::path header_path = fs::path(protocol_dir) / "response.json";
  fs::path data_path = fs::path(protocol_dir) / "response.f32le";
  if (!fs::exists(header_path) || !fs::exists(data_path))
    throw ProtocolError("embedder produced no response in " + protocol_dir);

  EmbeddingMatrix m;
  try {
    json header = json::parse(read_text_file(header_path.string()));
    m.d = header.at("d").get<size_t>();
    m.provider_tag = header.at("provider_tag").get<std::string>();
    size_t n = header.at("n").get<size_t>();
    for (const auto& id : header.at("ids")) m.ids.push_back(id.get<std::string>());
    if (m.ids.size() != n)
      throw ProtocolError("response header id count differs from n");
  } catch (const json::exception& e) {
    throw ProtocolError("bad response.json: " + std::string(e.what()));
  }

  if (m.ids.size() != expected_ids.size())
    throw ProtocolError("response has " + std::to_string(m.ids.size()) + " ids, expected " +
                        std::to_string(expected_ids.size()));
  for (size_t i = 0; i < m.ids.size(); ++i) {
    if (m.ids[i] != expected_ids[i])
      throw ProtocolError("response id order mismatch at row " + std::to_string(i) + ": got '" +
                          m.ids[i] + "', expected '" + expected_ids[i] + "'");
  }
  if (m.d == 0) throw ProtocolError("response dimension is zero");

  std::ifstream in(data_path, std::ios::binary);
  in.seekg(0, std::ios::end);
  int64_t len = in.tellg();
  int64_t expect = static_cast<int64_t>(m.ids.size() * m.d * sizeof(float));
  if (len != expect)
    throw ProtocolError("response.f32le has " + std::to_string(len) + " bytes, expected " +
                        std::to_string(expect));
  in.seekg(0, std::ios::beg);
  m.data.resize(m.ids.size() * m.d);
  if (!m.data.empty())
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(float)));
  if (!in) throw ProtocolError("truncated response.f32le");

  for (float v : m.data) {
    if (!std::isfinite(v)) throw ProtocolError("non-finite value in embedder response");
  }
  return m;
}

EmbeddingMatrix embed_windows_external(const std::vector<corpus::Window>& windows,
                                       const AudioLookup& audio,
                                       const WindowFeatureParams& params,
                                       const std::string& protocol_dir,
                                       const std::string& command) {
  write_embed_request(windows, audio, params, protocol_dir);
  run_embedder_command(command, protocol_dir);
  std::vector<std::string> expected;
  expected.reserve(windows.size());
  for (const auto& w : windows) expected.push_back(w.id());
  return read_embed_response(protocol_dir, expected);
}

}  // namespace birb::embed
