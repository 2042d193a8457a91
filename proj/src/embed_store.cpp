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

#include <zlib.h>

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "birb/embed.hpp"

namespace birb::embed {

using nlohmann::json;

namespace {

constexpr const char* kDataSuffix = ".f32le";
constexpr const char* kHeaderSuffix = ".json";

uint32_t crc32_of(const void* data, size_t len) {
  uLong crc = crc32(0L, Z_NULL, 0);
  return static_cast<uint32_t>(
      crc32(crc, static_cast<const Bytef*>(data), static_cast<uInt>(len)));
}

json read_store_header(const std::string& base_path) {
  json header;
  try {
    header = json::parse(read_text_file(base_path + kHeaderSuffix));
  } catch (const json::exception& e) {
    throw DataError("corrupt store header " + base_path + kHeaderSuffix + ": " + e.what());
  }
  return header;
}

EmbeddingMatrix header_to_matrix(const json& header, const std::string& base_path) {
  EmbeddingMatrix m;
  try {
    size_t n = header.at("n").get<size_t>();
    m.d = header.at("d").get<size_t>();
    m.provider_tag = header.at("provider_tag").get<std::string>();
    m.ids.reserve(n);
    for (const auto& id : header.at("ids")) m.ids.push_back(id.get<std::string>());
    if (m.ids.size() != n)
      throw DataError("corrupt store: id count differs from n in " + base_path);
  } catch (const json::exception& e) {
    throw DataError("corrupt store header " + base_path + ": " + e.what());
  }
  return m;
}

}  // namespace

void embed_store_write(const EmbeddingMatrix& m, const std::string& base_path) {
  m.validate();
  json header;
  header["n"] = m.n();
  header["d"] = m.d;
  header["provider_tag"] = m.provider_tag;
  header["ids"] = m.ids;
  write_text_file(base_path + kHeaderSuffix, header.dump() + "\n");

  std::ofstream out(base_path + kDataSuffix, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write store: " + base_path + kDataSuffix);
  const size_t bytes = m.data.size() * sizeof(float);
  if (bytes > 0) out.write(reinterpret_cast<const char*>(m.data.data()),
                           static_cast<std::streamsize>(bytes));
  uint32_t crc = crc32_of(m.data.data(), bytes);
  unsigned char trailer[4] = {static_cast<unsigned char>(crc & 0xFF),
                              static_cast<unsigned char>((crc >> 8) & 0xFF),
                              static_cast<unsigned char>((crc >> 16) & 0xFF),
                              static_cast<unsigned char>((crc >> 24) & 0xFF)};
  out.write(reinterpret_cast<const char*>(trailer), 4);
  if (!out) throw DataError("short write: " + base_path + kDataSuffix);
}

EmbeddingMatrix embed_store_read_header(const std::string& base_path) {
  return header_to_matrix(read_store_header(base_path), base_path);
}

EmbeddingMatrix embed_store_read(const std::string& base_path) {
  EmbeddingMatrix m = embed_store_read_header(base_path);
  const std::string data_path = base_path + kDataSuffix;
  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw DataError("cannot open store: " + data_path);
  in.seekg(0, std::ios::end);
  const int64_t file_len = in.tellg();
  const int64_t expect = static_cast<int64_t>(m.n() * m.d * sizeof(float)) + 4;
  if (file_len != expect)
    throw DataError("corrupt store (size " + std::to_string(file_len) + ", expected " +
                    std::to_string(expect) + "): " + data_path);
  in.seekg(0, std::ios::beg);
  m.data.resize(m.n() * m.d);
  if (!m.data.empty())
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(float)));
  unsigned char trailer[4];
  in.read(reinterpret_cast<char*>(trailer), 4);
  if (!in) throw DataError("corrupt store (truncated read): " + data_path);
  uint32_t stored = static_cast<uint32_t>(trailer[0]) | (static_cast<uint32_t>(trailer[1]) << 8) |
                    (static_cast<uint32_t>(trailer[2]) << 16) |
                    (static_cast<uint32_t>(trailer[3]) << 24);
  uint32_t actual = crc32_of(m.data.data(), m.data.size() * sizeof(float));
  if (stored != actual) throw DataError("corrupt store (checksum mismatch): " + data_path);
  m.validate();
  return m;
}

EmbeddingMatrix embed_store_read_rows(const std::string& base_path, size_t first_row,
                                      size_t row_count) {
  EmbeddingMatrix header = embed_store_read_header(base_path);
  if (first_row + row_count > header.n())
    throw DataError("row range out of bounds for store " + base_path);

  const std::string data_path = base_path + kDataSuffix;
  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw DataError("cannot open store: " + data_path);
  in.seekg(0, std::ios::end);
  const int64_t file_len = in.tellg();
  const int64_t expect = static_cast<int64_t>(header.n() * header.d * sizeof(float)) + 4;
  if (file_len != expect) throw DataError("corrupt store (bad size): " + data_path);

  EmbeddingMatrix m;
  m.provider_tag = header.provider_tag;
  m.d = header.d;
  m.ids.assign(header.ids.begin() + static_cast<std::ptrdiff_t>(first_row),
               header.ids.begin() + static_cast<std::ptrdiff_t>(first_row + row_count));
  m.data.resize(row_count * m.d);
  in.seekg(static_cast<std::streamoff>(first_row * m.d * sizeof(float)), std::ios::beg);
  if (!m.data.empty())
    in.read(reinterpret_cast<char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(float)));
  if (!in) throw DataError("corrupt store (truncated read): " + data_path);
  return m;
}

}  // namespace birb::embed
