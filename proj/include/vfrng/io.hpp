// Copyright 2026 The vfrng Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// On-disk containers:
//
//   Seed file ("TPSD"): magic, output bits j and input bits k as 64-bit
//   little-endian words, then ceil((j + k - 1) / 8) seed bytes packed LSB
//   first.
//
//   Raw sample file ("VRAW"): magic, sample width n as one byte, half range
//   R as a 64-bit little-endian IEEE double, sample count as a 64-bit
//   little-endian word, then count 16-bit little-endian words each holding
//   one code in its low n bits.
//
//   Extracted bit files are headerless packed bytes, LSB first, ready for
//   external randomness batteries.

#ifndef VFRNG_IO_HPP
#define VFRNG_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "vfrng/bit_vector.hpp"
#include "vfrng/entropy.hpp"
#include "vfrng/errors.hpp"
#include "vfrng/homodyne.hpp"
#include "vfrng/toeplitz.hpp"

namespace vfrng {

namespace detail {

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_f64(std::vector<std::uint8_t>& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class ByteReader {
 public:
  explicit ByteReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) {
      throw io_error("cannot open " + path, 0);
    }
  }

  std::uint64_t offset() const { return offset_; }

  void read(std::uint8_t* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw io_error("unexpected end of " + path_,
                     offset_ + static_cast<std::uint64_t>(in_.gcount()));
    }
    offset_ += n;
  }

  std::uint64_t read_u64() {
    std::uint8_t b[8];
    read(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  std::uint16_t read_u16() {
    std::uint8_t b[2];
    read(b, 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  }

  double read_f64() { return std::bit_cast<double>(read_u64()); }

  std::uint8_t read_u8() {
    std::uint8_t b;
    read(&b, 1);
    return b;
  }

  void expect_magic(const char magic[4]) {
    std::uint8_t b[4];
    read(b, 4);
    if (std::memcmp(b, magic, 4) != 0) {
      throw io_error("bad magic in " + path_ + ", expected " +
                         std::string(magic, 4),
                     0);
    }
  }

  bool at_eof() {
    return in_.peek() == std::char_traits<char>::eof();
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

inline void write_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw io_error("cannot open " + path + " for writing", 0);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw io_error("short write to " + path, 0);
  }
}

}  // namespace detail

inline void write_seed_file(const std::string& path,
                            const ToeplitzSeed& seed) {
  std::vector<std::uint8_t> out;
  out.reserve(20 + seed.bits().size() / 8 + 1);
  out.insert(out.end(), {'T', 'P', 'S', 'D'});
  detail::put_u64(out, seed.rows());
  detail::put_u64(out, seed.cols());
  const auto bytes = seed.bits().to_packed_bytes();
  out.insert(out.end(), bytes.begin(), bytes.end());
  detail::write_file(path, out);
}

inline ToeplitzSeed read_seed_file(const std::string& path) {
  detail::ByteReader in(path);
  in.expect_magic("TPSD");
  const std::uint64_t rows = in.read_u64();
  const std::uint64_t cols = in.read_u64();
  if (rows == 0 || cols == 0 || rows >= cols) {
    throw io_error("seed file " + path + " has invalid geometry",
                   in.offset());
  }
  const std::uint64_t nbits = rows + cols - 1;
  std::vector<std::uint8_t> bytes((nbits + 7) / 8);
  in.read(bytes.data(), bytes.size());
  if (!in.at_eof()) {
    throw io_error("trailing data in seed file " + path, in.offset());
  }
  return ToeplitzSeed(rows, cols, BitVector::from_packed_bytes(bytes, nbits));
}

inline void write_raw_file(const std::string& path,
                           const RawSampleStream& stream) {
  std::vector<std::uint8_t> out;
  out.reserve(21 + 2 * stream.codes.size());
  out.insert(out.end(), {'V', 'R', 'A', 'W'});
  out.push_back(static_cast<std::uint8_t>(stream.adc.bits));
  detail::put_f64(out, stream.adc.range);
  detail::put_u64(out, stream.codes.size());
  for (const std::uint16_t c : stream.codes) detail::put_u16(out, c);
  detail::write_file(path, out);
}

inline RawSampleStream read_raw_file(const std::string& path) {
  detail::ByteReader in(path);
  in.expect_magic("VRAW");
  RawSampleStream stream;
  stream.adc.bits = in.read_u8();
  stream.adc.range = in.read_f64();
  if (stream.adc.bits < 1 || stream.adc.bits > 16 ||
      !(stream.adc.range > 0.0)) {
    throw io_error("raw file " + path + " has an invalid header",
                   in.offset());
  }
  const std::uint64_t count = in.read_u64();
  const std::uint16_t limit =
      static_cast<std::uint16_t>((std::uint32_t{1} << stream.adc.bits) - 1);
  std::vector<std::uint8_t> payload(2 * count);
  const std::uint64_t payload_offset = in.offset();
  in.read(payload.data(), payload.size());
  stream.codes.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint16_t c = static_cast<std::uint16_t>(
        payload[2 * i] | (payload[2 * i + 1] << 8));
    if (c > limit) {
      throw io_error("raw file " + path + " holds a code beyond " +
                         std::to_string(limit),
                     payload_offset + 2 * i);
    }
    stream.codes[i] = c;
  }
  if (!in.at_eof()) {
    throw io_error("trailing data in raw file " + path, in.offset());
  }
  return stream;
}

// Headerless packed bit stream, for handoff to external test batteries.
inline void write_bits_file(const std::string& path, const BitVector& bits) {
  detail::write_file(path, bits.to_packed_bytes());
}

inline BitVector read_bits_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw io_error("cannot open " + path, 0);
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return BitVector::from_packed_bytes(bytes, bytes.size() * 8);
}

}  // namespace vfrng

#endif  // VFRNG_IO_HPP
