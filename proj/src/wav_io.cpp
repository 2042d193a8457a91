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

#include <cstring>
#include <fstream>

#include "birb/audio.hpp"

namespace birb::audio {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t read_u32le(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16le(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32le(std::string& out, uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_u16le(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

std::vector<unsigned char> read_all_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("unreadable file: " + path);
  in.seekg(0, std::ios::end);
  std::streamoff len = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<unsigned char> bytes(static_cast<size_t>(len));
  if (len > 0) in.read(reinterpret_cast<char*>(bytes.data()), len);
  if (!in) throw DataError("unreadable file: " + path);
  return bytes;
}

}  // namespace

Waveform decode_wav(const std::string& path) {
  std::vector<unsigned char> b = read_all_bytes(path);
  if (b.size() < 44 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
      std::memcmp(b.data() + 8, "WAVE", 4) != 0) {
    throw DataError("unsupported codec (not a RIFF/WAVE file): " + path);
  }

  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
  size_t data_off = 0, data_len = 0;
  bool have_fmt = false;

  size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const char* tag = reinterpret_cast<const char*>(b.data() + pos);
    uint32_t chunk_len = read_u32le(b.data() + pos + 4);
    size_t body = pos + 8;
    if (body + chunk_len > b.size()) chunk_len = static_cast<uint32_t>(b.size() - body);
    if (std::memcmp(tag, "fmt ", 4) == 0 && chunk_len >= 16) {
      format = read_u16le(b.data() + body);
      channels = read_u16le(b.data() + body + 2);
      sample_rate = read_u32le(b.data() + body + 4);
      bits = read_u16le(b.data() + body + 14);
      if (format == kFormatExtensible && chunk_len >= 26) {
        // first two bytes of the SubFormat GUID carry the base format tag
        format = read_u16le(b.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data_off = body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_off == 0) throw DataError("unsupported codec (missing fmt/data chunk): " + path);
  if (channels == 0 || sample_rate == 0) throw DataError("corrupt WAV header: " + path);

  size_t bytes_per_sample = bits / 8;
  if (bytes_per_sample == 0) throw DataError("corrupt WAV header: " + path);
  size_t total_samples = data_len / bytes_per_sample;
  size_t n_frames = total_samples / channels;

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  w.samples.resize(n_frames);

  const unsigned char* d = b.data() + data_off;
  auto decode_frame = [&](size_t i, size_t c) -> double {
    const unsigned char* s = d + (i * channels + c) * bytes_per_sample;
    if (format == kFormatFloat && bits == 32) {
      uint32_t u = read_u32le(s);
      float f;
      std::memcpy(&f, &u, 4);
      return f;
    }
    if (format == kFormatPcm && bits == 16) {
      int16_t v = static_cast<int16_t>(read_u16le(s));
      return v / 32768.0;
    }
    if (format == kFormatPcm && bits == 24) {
      int32_t v = (static_cast<int32_t>(s[0]) << 8) | (static_cast<int32_t>(s[1]) << 16) |
                  (static_cast<int32_t>(s[2]) << 24);
      return (v >> 8) / 8388608.0;
    }
    if (format == kFormatPcm && bits == 32) {
      int32_t v = static_cast<int32_t>(read_u32le(s));
      return v / 2147483648.0;
    }
    throw DataError("unsupported codec (WAV format tag " + std::to_string(format) + ", " +
                    std::to_string(bits) + " bits): " + path);
  };

  for (size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (size_t c = 0; c < channels; ++c) acc += decode_frame(i, c);
    w.samples[i] = static_cast<float>(acc / channels);
  }
  return w;
}

Waveform decode_audio_file(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw DataError("unreadable file: " + path);
  char magic[4] = {0, 0, 0, 0};
  probe.read(magic, 4);
  probe.close();
  if (std::memcmp(magic, "RIFF", 4) == 0) return decode_wav(path);
  if (std::memcmp(magic, "fLaC", 4) == 0) return decode_flac(path);
  throw DataError("unsupported codec: " + path);
}

Waveform load_waveform(const std::string& path, int target_rate) {
  if (target_rate <= 0) throw ConfigError("target sample rate must be positive");
  Waveform w = decode_audio_file(path);
  if (w.sample_rate != target_rate) w = resample(w, target_rate);
  return w;
}

void write_wav_float32(const std::string& path, const Waveform& w) {
  std::string out;
  uint32_t data_bytes = static_cast<uint32_t>(w.samples.size() * 4);
  out.reserve(58 + data_bytes);
  out += "RIFF";
  put_u32le(out, 50 + data_bytes);  // fmt(18) + fact(12) + data header
  out += "WAVE";
  out += "fmt ";
  put_u32le(out, 18);
  put_u16le(out, kFormatFloat);
  put_u16le(out, 1);
  put_u32le(out, static_cast<uint32_t>(w.sample_rate));
  put_u32le(out, static_cast<uint32_t>(w.sample_rate) * 4);
  put_u16le(out, 4);
  put_u16le(out, 32);
  put_u16le(out, 0);  // cbSize
  out += "fact";
  put_u32le(out, 4);
  put_u32le(out, static_cast<uint32_t>(w.samples.size()));
  out += "data";
  put_u32le(out, data_bytes);
  for (float s : w.samples) {
    uint32_t u;
    std::memcpy(&u, &s, 4);
    put_u32le(out, u);
  }
  write_text_file(path, out);
}

void write_wav_pcm16(const std::string& path, const Waveform& w) {
  std::string out;
  uint32_t data_bytes = static_cast<uint32_t>(w.samples.size() * 2);
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32le(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32le(out, 16);
  put_u16le(out, kFormatPcm);
  put_u16le(out, 1);
  put_u32le(out, static_cast<uint32_t>(w.sample_rate));
  put_u32le(out, static_cast<uint32_t>(w.sample_rate) * 2);
  put_u16le(out, 2);
  put_u16le(out, 16);
  out += "data";
  put_u32le(out, data_bytes);
  for (float s : w.samples) {
    double v = s * 32768.0;
    if (v > 32767.0) v = 32767.0;
    if (v < -32768.0) v = -32768.0;
    put_u16le(out, static_cast<uint16_t>(static_cast<int16_t>(std::lrint(v))));
  }
  write_text_file(path, out);
}

}  // namespace birb::audio
