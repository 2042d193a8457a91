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

// Native-FLAC decoder covering the streamable subset: CONSTANT, VERBATIM,
// FIXED (orders 0-4) and LPC subframes, RICE/RICE2 residuals, wasted bits,
// and left/right/mid-side stereo decorrelation. Frame CRCs are parsed but
// not verified.

#include <cstring>
#include <fstream>

#include "birb/audio.hpp"

namespace birb::audio {

namespace {

class BitReader {
 public:
  BitReader(const unsigned char* data, size_t len) : data_(data), len_(len) {}

  bool eof() const { return byte_ >= len_ && bit_ == 0; }
  size_t byte_pos() const { return byte_; }

  uint64_t read_bits(int n) {
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      if (byte_ >= len_) throw DataError("FLAC: unexpected end of stream");
      int b = (data_[byte_] >> (7 - bit_)) & 1;
      v = (v << 1) | static_cast<uint64_t>(b);
      if (++bit_ == 8) {
        bit_ = 0;
        ++byte_;
      }
    }
    return v;
  }

  int64_t read_signed(int n) {
    uint64_t v = read_bits(n);
    uint64_t sign = 1ULL << (n - 1);
    return (v & sign) ? static_cast<int64_t>(v) - (1LL << n) : static_cast<int64_t>(v);
  }

  uint32_t read_unary() {
    uint32_t q = 0;
    while (read_bits(1) == 0) ++q;
    return q;
  }

  uint64_t read_utf8_coded() {
    uint64_t b0 = read_bits(8);
    int extra = 0;
    uint64_t v = 0;
    if ((b0 & 0x80) == 0) return b0;
    for (int mask = 0x40; mask && (b0 & mask); mask >>= 1) ++extra;
    v = b0 & (0x3F >> extra);
    for (int i = 1; i < extra; ++i) {
      uint64_t b = read_bits(8);
      if ((b & 0xC0) != 0x80) throw DataError("FLAC: bad coded number");
      v = (v << 6) | (b & 0x3F);
    }
    return v;
  }

  void align_to_byte() {
    if (bit_ != 0) {
      bit_ = 0;
      ++byte_;
    }
  }

 private:
  const unsigned char* data_;
  size_t len_;
  size_t byte_ = 0;
  int bit_ = 0;
};

struct StreamInfo {
  uint32_t sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  uint64_t total_samples = 0;
};

void decode_residual(BitReader& br, int order, int blocksize, std::vector<int64_t>& out) {
  int method = static_cast<int>(br.read_bits(2));
  if (method > 1) throw DataError("FLAC: reserved residual method");
  int param_bits = (method == 0) ? 4 : 5;
  uint32_t escape = (method == 0) ? 0xF : 0x1F;
  int partition_order = static_cast<int>(br.read_bits(4));
  int partitions = 1 << partition_order;
  if (blocksize % partitions != 0) throw DataError("FLAC: bad partition order");
  int idx = order;
  for (int p = 0; p < partitions; ++p) {
    int count = (blocksize >> partition_order) - (p == 0 ? order : 0);
    uint32_t param = static_cast<uint32_t>(br.read_bits(param_bits));
    if (param == escape) {
      int raw_bits = static_cast<int>(br.read_bits(5));
      for (int i = 0; i < count; ++i)
        out[idx++] = raw_bits == 0 ? 0 : br.read_signed(raw_bits);
    } else {
      for (int i = 0; i < count; ++i) {
        uint64_t q = br.read_unary();
        uint64_t r = param == 0 ? 0 : br.read_bits(static_cast<int>(param));
        uint64_t v = (q << param) | r;
        out[idx++] = static_cast<int64_t>(v >> 1) ^ -static_cast<int64_t>(v & 1);
      }
    }
  }
}

void decode_subframe(BitReader& br, int blocksize, int bps, std::vector<int64_t>& out) {
  if (br.read_bits(1) != 0) throw DataError("FLAC: bad subframe padding");
  int type = static_cast<int>(br.read_bits(6));
  int wasted = 0;
  if (br.read_bits(1) == 1) wasted = static_cast<int>(br.read_unary()) + 1;
  bps -= wasted;

  out.assign(blocksize, 0);
  if (type == 0) {  // CONSTANT
    int64_t v = br.read_signed(bps);
    std::fill(out.begin(), out.end(), v);
  } else if (type == 1) {  // VERBATIM
    for (int i = 0; i < blocksize; ++i) out[i] = br.read_signed(bps);
  } else if (type >= 8 && type <= 12) {  // FIXED
    int order = type & 7;
    for (int i = 0; i < order; ++i) out[i] = br.read_signed(bps);
    decode_residual(br, order, blocksize, out);
    for (int i = order; i < blocksize; ++i) {
      int64_t pred = 0;
      switch (order) {
        case 0: pred = 0; break;
        case 1: pred = out[i - 1]; break;
        case 2: pred = 2 * out[i - 1] - out[i - 2]; break;
        case 3: pred = 3 * out[i - 1] - 3 * out[i - 2] + out[i - 3]; break;
        case 4: pred = 4 * out[i - 1] - 6 * out[i - 2] + 4 * out[i - 3] - out[i - 4]; break;
      }
      out[i] += pred;
    }
  } else if (type >= 32) {  // LPC
    int order = (type & 31) + 1;
    for (int i = 0; i < order; ++i) out[i] = br.read_signed(bps);
    int precision = static_cast<int>(br.read_bits(4)) + 1;
    if (precision == 16) throw DataError("FLAC: invalid LPC precision");
    int shift = static_cast<int>(br.read_signed(5));
    if (shift < 0) throw DataError("FLAC: negative LPC shift");
    std::vector<int64_t> coef(order);
    for (int i = 0; i < order; ++i) coef[i] = br.read_signed(precision);
    decode_residual(br, order, blocksize, out);
    for (int i = order; i < blocksize; ++i) {
      int64_t acc = 0;
      for (int j = 0; j < order; ++j) acc += coef[j] * out[i - 1 - j];
      out[i] += acc >> shift;
    }
  } else {
    throw DataError("FLAC: reserved subframe type");
  }
  for (auto& v : out) v <<= wasted;
}

}  // namespace

Waveform decode_flac(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("unreadable file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 42 || std::memcmp(bytes.data(), "fLaC", 4) != 0)
    throw DataError("unsupported codec (not a FLAC stream): " + path);

  BitReader br(bytes.data() + 4, bytes.size() - 4);
  StreamInfo info;
  bool last = false;
  bool have_streaminfo = false;
  while (!last) {
    last = br.read_bits(1) != 0;
    int block_type = static_cast<int>(br.read_bits(7));
    uint32_t block_len = static_cast<uint32_t>(br.read_bits(24));
    if (block_type == 0) {
      br.read_bits(16);  // min blocksize
      br.read_bits(16);  // max blocksize
      br.read_bits(24);  // min framesize
      br.read_bits(24);  // max framesize
      info.sample_rate = static_cast<uint32_t>(br.read_bits(20));
      info.channels = static_cast<int>(br.read_bits(3)) + 1;
      info.bits_per_sample = static_cast<int>(br.read_bits(5)) + 1;
      info.total_samples = br.read_bits(36);
      for (int i = 0; i < 16; ++i) br.read_bits(8);  // MD5
      have_streaminfo = true;
    } else {
      for (uint32_t i = 0; i < block_len; ++i) br.read_bits(8);
    }
  }
  if (!have_streaminfo || info.sample_rate == 0)
    throw DataError("FLAC: missing STREAMINFO: " + path);
  if (info.channels < 1 || info.channels > 8)
    throw DataError("FLAC: unsupported channel count: " + path);

  Waveform w;
  w.sample_rate = static_cast<int>(info.sample_rate);
  if (info.total_samples > 0) w.samples.reserve(static_cast<size_t>(info.total_samples));

  std::vector<std::vector<int64_t>> ch(static_cast<size_t>(info.channels));
  const double denom_base = static_cast<double>(1LL << (info.bits_per_sample - 1));

  for (;;) {
    // stop cleanly at end of stream
    try {
      uint64_t sync = br.read_bits(14);
      if (sync != 0x3FFE) throw DataError("FLAC: lost frame sync: " + path);
    } catch (const DataError&) {
      break;
    }
    br.read_bits(1);  // reserved
    int variable_blocking = static_cast<int>(br.read_bits(1));
    int bs_code = static_cast<int>(br.read_bits(4));
    int sr_code = static_cast<int>(br.read_bits(4));
    int ch_assign = static_cast<int>(br.read_bits(4));
    int ss_code = static_cast<int>(br.read_bits(3));
    br.read_bits(1);  // reserved
    br.read_utf8_coded();
    (void)variable_blocking;

    int blocksize = 0;
    switch (bs_code) {
      case 1: blocksize = 192; break;
      case 2: case 3: case 4: case 5: blocksize = 576 << (bs_code - 2); break;
      case 6: blocksize = static_cast<int>(br.read_bits(8)) + 1; break;
      case 7: blocksize = static_cast<int>(br.read_bits(16)) + 1; break;
      default:
        if (bs_code >= 8) blocksize = 256 << (bs_code - 8);
        else throw DataError("FLAC: reserved block size code");
    }
    switch (sr_code) {
      case 12: br.read_bits(8); break;
      case 13: case 14: br.read_bits(16); break;
      case 15: throw DataError("FLAC: invalid sample rate code");
      default: break;  // table or STREAMINFO value; STREAMINFO is authoritative
    }
    int bps = info.bits_per_sample;
    switch (ss_code) {
      case 0: break;
      case 1: bps = 8; break;
      case 2: bps = 12; break;
      case 4: bps = 16; break;
      case 5: bps = 20; break;
      case 6: bps = 24; break;
      case 7: bps = 32; break;
      default: throw DataError("FLAC: reserved sample size code");
    }
    br.read_bits(8);  // header CRC8

    int n_channels;
    if (ch_assign <= 7) {
      n_channels = ch_assign + 1;
    } else if (ch_assign <= 10) {
      n_channels = 2;
    } else {
      throw DataError("FLAC: reserved channel assignment");
    }
    if (n_channels != info.channels)
      throw DataError("FLAC: frame channel count differs from STREAMINFO");

    for (int c = 0; c < n_channels; ++c) {
      int sub_bps = bps;
      if ((ch_assign == 8 && c == 1) || (ch_assign == 9 && c == 0) ||
          (ch_assign == 10 && c == 1)) {
        ++sub_bps;  // side channel carries one extra bit
      }
      decode_subframe(br, blocksize, sub_bps, ch[static_cast<size_t>(c)]);
    }
    br.align_to_byte();
    br.read_bits(16);  // frame CRC16

    if (ch_assign == 8) {  // left/side
      for (int i = 0; i < blocksize; ++i) ch[1][i] = ch[0][i] - ch[1][i];
    } else if (ch_assign == 9) {  // right/side
      for (int i = 0; i < blocksize; ++i) ch[0][i] = ch[1][i] + ch[0][i];
    } else if (ch_assign == 10) {  // mid/side
      for (int i = 0; i < blocksize; ++i) {
        int64_t side = ch[1][i];
        int64_t mid2 = (ch[0][i] << 1) | (side & 1);
        ch[0][i] = (mid2 + side) >> 1;
        ch[1][i] = (mid2 - side) >> 1;
      }
    }

    for (int i = 0; i < blocksize; ++i) {
      double acc = 0.0;
      for (int c = 0; c < info.channels; ++c)
        acc += static_cast<double>(ch[static_cast<size_t>(c)][i]) / denom_base;
      w.samples.push_back(static_cast<float>(acc / info.channels));
    }
    if (info.total_samples > 0 && w.samples.size() >= info.total_samples) break;
  }

  if (info.total_samples > 0 && w.samples.size() > info.total_samples)
    w.samples.resize(static_cast<size_t>(info.total_samples));
  return w;
}

}  // namespace birb::audio
