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

#ifndef VFRNG_BIT_VECTOR_HPP
#define VFRNG_BIT_VECTOR_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "vfrng/errors.hpp"

namespace vfrng {

// Densely packed bit sequence. Bit i lives in word i/64 at position i%64,
// so within bytes and words the order is LSB first. Unused high bits of the
// last word are kept at zero, which lets equality and popcount work on whole
// words.
class BitVector {
 public:
  BitVector() = default;

  explicit BitVector(std::size_t nbits)
      : words_((nbits + 63) / 64, 0), nbits_(nbits) {}

  static BitVector from_packed_bytes(std::span<const std::uint8_t> bytes,
                                     std::size_t nbits) {
    if (bytes.size() * 8 < nbits) {
      throw contract_error("bit count exceeds supplied bytes");
    }
    BitVector v(nbits);
    for (std::size_t i = 0; i < (nbits + 7) / 8; ++i) {
      v.words_[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
    }
    v.clear_spare();
    return v;
  }

  std::vector<std::uint8_t> to_packed_bytes() const {
    std::vector<std::uint8_t> out((nbits_ + 7) / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] =
          static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    }
    return out;
  }

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }
  std::size_t word_count() const { return words_.size(); }
  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  bool get(std::size_t i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i, bool value) {
    check_index(i);
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void push_back(bool value) {
    if ((nbits_ & 63) == 0) words_.push_back(0);
    ++nbits_;
    if (value) set(nbits_ - 1, true);
  }

  // Appends all bits of `other` after the current tail.
  void append(const BitVector& other) {
    const std::size_t shift = nbits_ & 63;
    const std::size_t needed = (nbits_ + other.nbits_ + 63) / 64;
    if (needed > words_.capacity()) {
      // Exact reservation would make repeated appends quadratic.
      words_.reserve(std::max(needed, words_.capacity() * 2));
    }
    if (shift == 0) {
      words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    } else {
      for (std::uint64_t w : other.words_) {
        words_.back() |= w << shift;
        words_.push_back(w >> (64 - shift));
      }
    }
    nbits_ += other.nbits_;
    words_.resize((nbits_ + 63) / 64);
    clear_spare();
  }

  void xor_in(const BitVector& other) {
    if (other.nbits_ != nbits_) {
      throw contract_error("xor operands differ in length");
    }
    for (std::size_t i = 0; i < words_.size(); ++i) {
      words_[i] ^= other.words_[i];
    }
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.nbits_ == b.nbits_ && a.words_ == b.words_;
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= nbits_) {
      throw contract_error("bit index " + std::to_string(i) +
                           " out of range for " + std::to_string(nbits_) +
                           " bits");
    }
  }

  void clear_spare() {
    if (nbits_ & 63) {
      words_.back() &= (std::uint64_t{1} << (nbits_ & 63)) - 1;
    }
  }

  std::vector<std::uint64_t> words_;
  std::size_t nbits_ = 0;
};

namespace detail {

// Reads up to 64 bits starting at an arbitrary bit offset of a word array.
// The caller guarantees offset + count stays within words.size() * 64.
inline std::uint64_t read_bits(std::span<const std::uint64_t> words,
                               std::size_t bit_offset, unsigned count) {
  const std::size_t wi = bit_offset >> 6;
  const unsigned sh = static_cast<unsigned>(bit_offset & 63);
  std::uint64_t v = words[wi] >> sh;
  if (sh != 0 && wi + 1 < words.size()) {
    v |= words[wi + 1] << (64 - sh);
  }
  if (count < 64) {
    v &= (std::uint64_t{1} << count) - 1;
  }
  return v;
}

}  // namespace detail

// Copies bits [start, start + count) into a fresh vector.
inline BitVector slice(const BitVector& v, std::size_t start,
                       std::size_t count) {
  if (start + count > v.size()) {
    throw contract_error("slice extends past the end of the bit vector");
  }
  BitVector out(count);
  auto dst = out.words();
  const auto src = v.words();
  for (std::size_t i = 0; i < count; i += 64) {
    const unsigned take =
        static_cast<unsigned>(std::min<std::size_t>(64, count - i));
    dst[i >> 6] = detail::read_bits(src, start + i, take);
  }
  return out;
}

// Number of set bits in [start, start + count).
inline std::size_t popcount_range(const BitVector& v, std::size_t start,
                                  std::size_t count) {
  if (start + count > v.size()) {
    throw contract_error("range extends past the end of the bit vector");
  }
  const auto words = v.words();
  std::size_t total = 0;
  std::size_t i = 0;
  while (i < count) {
    const unsigned take =
        static_cast<unsigned>(std::min<std::size_t>(64, count - i));
    total += static_cast<std::size_t>(
        std::popcount(detail::read_bits(words, start + i, take)));
    i += take;
  }
  return total;
}

}  // namespace vfrng

#endif  // VFRNG_BIT_VECTOR_HPP
