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

#ifndef VFRNG_RNG_HPP
#define VFRNG_RNG_HPP

#include <array>
#include <bit>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <span>

namespace vfrng {

// splitmix64 output function (Steele, Lea, Flood 2014). Used both as the
// stream stepper and as the documented 64-bit mix for deriving per-chunk
// child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  return mix64(state);
}

// Child seed for independently generated chunk `index` of a root stream:
//   child = mix64(root XOR (index + 1) * 0x9E3779B97F4A7C15).
// Concatenating chunks generated from child seeds is the defined output of
// the stream, so it does not depend on how many chunks run concurrently.
inline std::uint64_t derive_stream_seed(std::uint64_t root,
                                        std::uint64_t index) {
  return mix64(root ^ ((index + 1) * 0x9E3779B97F4A7C15ull));
}

// xoshiro256++ 1.0 (Blackman, Vigna). Fast non-cryptographic stream used for
// simulation noise and synthetic benchmark input.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  // Uniform double in (0, 1]; never returns 0 so it is safe under log().
  double next_unit_open0() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform double in [0, 1).
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::array<std::uint64_t, 4> s_;
};

// Standard normal variates via the Box-Muller transform on a xoshiro
// stream. Produces pairs and caches the second value so consumption parity
// does not change the stream.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = rng_.next_unit_open0();
    const double u2 = rng_.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  Xoshiro256pp rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// ChaCha20 block function (RFC 8439). The keystream serves as the
// deterministic cryptographically seeded expander behind seed generation:
// record the key and the whole seed is reproducible.
namespace detail {

inline void chacha_quarter(std::uint32_t& a, std::uint32_t& b,
                           std::uint32_t& c, std::uint32_t& d) {
  a += b; d ^= a; d = std::rotl(d, 16);
  c += d; b ^= c; b = std::rotl(b, 12);
  a += b; d ^= a; d = std::rotl(d, 8);
  c += d; b ^= c; b = std::rotl(b, 7);
}

inline void chacha20_block(const std::array<std::uint32_t, 8>& key,
                           std::uint32_t counter,
                           const std::array<std::uint32_t, 3>& nonce,
                           std::uint8_t out[64]) {
  std::uint32_t st[16] = {0x61707865u, 0x3320646eu, 0x79622d32u, 0x6b206574u,
                          key[0], key[1], key[2], key[3],
                          key[4], key[5], key[6], key[7],
                          counter, nonce[0], nonce[1], nonce[2]};
  std::uint32_t w[16];
  std::memcpy(w, st, sizeof(w));
  for (int round = 0; round < 10; ++round) {
    chacha_quarter(w[0], w[4], w[8], w[12]);
    chacha_quarter(w[1], w[5], w[9], w[13]);
    chacha_quarter(w[2], w[6], w[10], w[14]);
    chacha_quarter(w[3], w[7], w[11], w[15]);
    chacha_quarter(w[0], w[5], w[10], w[15]);
    chacha_quarter(w[1], w[6], w[11], w[12]);
    chacha_quarter(w[2], w[7], w[8], w[13]);
    chacha_quarter(w[3], w[4], w[9], w[14]);
  }
  for (int i = 0; i < 16; ++i) {
    const std::uint32_t v = w[i] + st[i];
    out[4 * i + 0] = static_cast<std::uint8_t>(v);
    out[4 * i + 1] = static_cast<std::uint8_t>(v >> 8);
    out[4 * i + 2] = static_cast<std::uint8_t>(v >> 16);
    out[4 * i + 3] = static_cast<std::uint8_t>(v >> 24);
  }
}

}  // namespace detail

// Byte producers feeding seed generation. read() returns how many bytes it
// actually delivered; anything short of the request means the source is
// exhausted.
template <typename T>
concept ByteSource = requires(T t, std::span<std::uint8_t> out) {
  { t.read(out) } -> std::convertible_to<std::size_t>;
};

// Infinite deterministic source: the ChaCha20 keystream under a recorded
// 256-bit key and zero nonce.
class Chacha20Source {
 public:
  explicit Chacha20Source(const std::array<std::uint8_t, 32>& key) {
    for (int i = 0; i < 8; ++i) {
      key_[i] = static_cast<std::uint32_t>(key[4 * i]) |
                static_cast<std::uint32_t>(key[4 * i + 1]) << 8 |
                static_cast<std::uint32_t>(key[4 * i + 2]) << 16 |
                static_cast<std::uint32_t>(key[4 * i + 3]) << 24;
    }
  }

  // Convenience constructor: expands a recorded 64-bit seed into the key.
  static Chacha20Source from_seed(std::uint64_t seed) {
    std::array<std::uint8_t, 32> key;
    std::uint64_t sm = seed;
    for (int i = 0; i < 4; ++i) {
      const std::uint64_t w = splitmix64_next(sm);
      for (int b = 0; b < 8; ++b) {
        key[8 * i + b] = static_cast<std::uint8_t>(w >> (8 * b));
      }
    }
    return Chacha20Source(key);
  }

  std::size_t read(std::span<std::uint8_t> out) {
    for (auto& byte : out) {
      if (pos_ == 64) {
        detail::chacha20_block(key_, counter_++, nonce_, block_);
        pos_ = 0;
      }
      byte = block_[pos_++];
    }
    return out.size();
  }

 private:
  std::array<std::uint32_t, 8> key_{};
  std::array<std::uint32_t, 3> nonce_{};
  std::uint32_t counter_ = 0;
  std::uint8_t block_[64] = {};
  std::size_t pos_ = 64;
};

// Finite source over caller-owned bytes; used for file-fed seeds and for
// exercising the exhaustion path.
class SpanSource {
 public:
  explicit SpanSource(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t read(std::span<std::uint8_t> out) {
    const std::size_t n = std::min(out.size(), bytes_.size() - pos_);
    std::memcpy(out.data(), bytes_.data() + pos_, n);
    pos_ += n;
    return n;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace vfrng

#endif  // VFRNG_RNG_HPP
