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

#ifndef VFRNG_EXTRACTOR_HPP
#define VFRNG_EXTRACTOR_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "vfrng/bit_vector.hpp"
#include "vfrng/errors.hpp"
#include "vfrng/rng.hpp"
#include "vfrng/thread_pool.hpp"
#include "vfrng/toeplitz.hpp"

namespace vfrng {

// Geometry and rate configuration of the streaming extractor. Short names in
// comments follow the command line flags: j output bits and k input bits per
// chunk, G input bits consumed per step.
struct ExtractorConfig {
  std::uint64_t chunk_out_bits = 6144;   // j
  std::uint64_t chunk_in_bits = 12288;   // k
  std::uint64_t group_bits = 12;         // G, bits retired per step
  std::uint64_t sample_bits = 12;        // n, ADC bits per raw sample
  std::uint64_t block_count = 8;         // parallel calculation blocks
  std::uint64_t sample_rate = 0;         // S in samples/s, 0 if not rate-derived
  std::uint64_t clock_rate = 0;          // C in steps/s, 0 if not rate-derived

  void validate() const {
    if (chunk_out_bits < 1 || chunk_out_bits >= chunk_in_bits) {
      throw config_error("need 1 <= output bits per chunk < input bits");
    }
    if (group_bits == 0 || chunk_in_bits % group_bits != 0) {
      throw config_error("chunk input bits must be a multiple of group bits");
    }
    if (sample_bits == 0 || sample_bits > 16) {
      throw config_error("sample bits must lie in [1, 16]");
    }
    if (group_bits % sample_bits != 0) {
      throw config_error("group bits must be a multiple of sample bits");
    }
    if (block_count < 1) {
      throw config_error("block count must be at least 1");
    }
    if ((sample_rate == 0) != (clock_rate == 0)) {
      throw config_error("sample rate and clock rate must be set together");
    }
    if (sample_rate != 0) {
      check_rate_ratio(sample_rate, clock_rate);
      if (block_count != derive_block_count(sample_rate, sample_bits,
                                            clock_rate, group_bits)) {
        throw config_error("block count does not match the configured rates");
      }
    }
  }

  std::uint64_t steps_per_chunk() const { return chunk_in_bits / group_bits; }

  // Number of calculation blocks needed to keep up with the input:
  // (S * n) / (C * G). Non-integral results are refused with the nearest
  // clock rate that would divide evenly.
  static std::uint64_t derive_block_count(std::uint64_t sample_rate,
                                          std::uint64_t sample_bits,
                                          std::uint64_t clock_rate,
                                          std::uint64_t group_bits) {
    if (sample_rate == 0 || sample_bits == 0 || clock_rate == 0 ||
        group_bits == 0) {
      throw config_error("rates and widths must be positive");
    }
    const std::uint64_t num = sample_rate * sample_bits;
    const std::uint64_t den = clock_rate * group_bits;
    if (num % den != 0) {
      const double blocks = static_cast<double>(num) / static_cast<double>(den);
      const std::uint64_t rounded =
          std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(blocks)));
      const double suggested =
          static_cast<double>(num) / static_cast<double>(rounded * group_bits);
      throw config_error(
          "input bit rate is not an integer multiple of the per-block rate; "
          "nearest valid clock rate is " + std::to_string(suggested) +
          " for " + std::to_string(rounded) + " blocks");
    }
    return num / den;
  }

  static ExtractorConfig from_rates(std::uint64_t out_bits,
                                    std::uint64_t in_bits,
                                    std::uint64_t sample_bits,
                                    std::uint64_t group_bits,
                                    std::uint64_t sample_rate,
                                    std::uint64_t clock_rate) {
    ExtractorConfig cfg;
    cfg.chunk_out_bits = out_bits;
    cfg.chunk_in_bits = in_bits;
    cfg.group_bits = group_bits;
    cfg.sample_bits = sample_bits;
    cfg.sample_rate = sample_rate;
    cfg.clock_rate = clock_rate;
    cfg.block_count =
        derive_block_count(sample_rate, sample_bits, clock_rate, group_bits);
    cfg.validate();
    return cfg;
  }

 private:
  // The sample clock and processing clock must be related by a power of two
  // so rate conversion FIFOs can bridge them (ratios below 1/8 would need
  // more conversion stages than the design allows for).
  static void check_rate_ratio(std::uint64_t sample_rate,
                               std::uint64_t clock_rate) {
    if (sample_rate % clock_rate == 0) {
      if (std::popcount(sample_rate / clock_rate) == 1) return;
    } else if (clock_rate % sample_rate == 0) {
      const std::uint64_t down = clock_rate / sample_rate;
      if (std::popcount(down) == 1 && down <= 8) return;
    }
    throw config_error(
        "sample rate and clock rate must be related by a power of two");
  }
};

namespace detail {

inline const std::array<std::uint8_t, 256>& reverse_byte_table() {
  static const std::array<std::uint8_t, 256> table = [] {
    std::array<std::uint8_t, 256> t{};
    for (int v = 0; v < 256; ++v) {
      std::uint8_t r = 0;
      for (int b = 0; b < 8; ++b) {
        if (v & (1 << b)) r |= static_cast<std::uint8_t>(1 << (7 - b));
      }
      t[static_cast<std::size_t>(v)] = r;
    }
    return t;
  }();
  return table;
}

inline std::uint64_t reverse_word(std::uint64_t w) {
  const auto& rev = reverse_byte_table();
  std::uint64_t r = 0;
  for (int b = 0; b < 8; ++b) {
    r = (r << 8) | rev[(w >> (8 * b)) & 0xFFu];
  }
  return r;
}

// The accumulator is kept in mirrored order: slot s holds output bit
// j - 1 - s, because in that orientation every matrix column is a plain
// forward window of the seed bit string starting at the column index.
// This reverses the mirrored accumulator into output order.
inline void reverse_accumulator(std::span<const std::uint64_t> acc,
                                std::uint64_t out_bits, BitVector& out) {
  const auto& rev = reverse_byte_table();
  out = BitVector(out_bits);
  auto bytes = std::span<std::uint64_t>(out.words());
  if ((out_bits & 63) == 0) {
    const std::size_t nw = static_cast<std::size_t>(out_bits >> 6);
    for (std::size_t t = 0; t < nw; ++t) {
      bytes[t] = reverse_word(acc[nw - 1 - t]);
    }
    return;
  }
  std::uint64_t r = 0;
  while (r + 8 <= out_bits) {
    const std::uint64_t src_off = out_bits - 8 - r;
    const auto byte = static_cast<std::uint8_t>(read_bits(acc, src_off, 8));
    bytes[(r >> 6)] |= static_cast<std::uint64_t>(rev[byte]) << (r & 63);
    r += 8;
  }
  for (; r < out_bits; ++r) {
    const std::uint64_t s = out_bits - 1 - r;
    if ((acc[s >> 6] >> (s & 63)) & 1u) {
      bytes[r >> 6] |= std::uint64_t{1} << (r & 63);
    }
  }
}

}  // namespace detail

// Streaming realization of one hashing engine. Consumes the chunk in groups
// of G bits; every set input bit selects one matrix column, which in
// mirrored accumulator order is the seed window starting at that column
// index, and all selected windows are XORed together. After k/G steps the
// accumulator is emitted in output order and the block rearms for the next
// chunk.
class CalculationBlock {
 public:
  CalculationBlock(const ToeplitzSeed& seed, const ExtractorConfig& cfg)
      : seed_words_(seed.bits().words()),
        out_bits_(seed.rows()),
        group_bits_(validated(cfg).group_bits),
        steps_(cfg.steps_per_chunk()),
        acc_((out_bits_ + 63) / 64 + 1, 0) {
    if (cfg.chunk_out_bits != seed.rows() || cfg.chunk_in_bits != seed.cols()) {
      throw config_error("seed geometry does not match the configuration");
    }
  }

  std::uint64_t step_index() const { return step_; }
  std::uint64_t column_cursor() const { return step_ * group_bits_; }
  bool finished() const { return step_ == steps_; }

  // Consumes one group of input bits (bit g of `group` is column
  // cursor + g). Must not be called on a finished block.
  void step(std::uint64_t group) {
    if (finished()) {
      throw contract_error("calculation block already holds a full chunk");
    }
    std::uint64_t base = column_cursor();
    std::uint64_t remaining = group_bits_ < 64 ? group & ((std::uint64_t{1} << group_bits_) - 1)
                                               : group;
    while (remaining != 0) {
      const unsigned g = std::countr_zero(remaining);
      remaining &= remaining - 1;
      xor_seed_window(base + g);
    }
    ++step_;
  }

  // Emits the finished chunk and resets for the next one.
  void take_output(BitVector& out) {
    if (!finished()) {
      throw contract_error("calculation block is mid-chunk");
    }
    detail::reverse_accumulator(acc_, out_bits_, out);
    std::fill(acc_.begin(), acc_.end(), 0);
    step_ = 0;
  }

 private:
  static const ExtractorConfig& validated(const ExtractorConfig& cfg) {
    cfg.validate();
    return cfg;
  }

  void xor_seed_window(std::uint64_t column) {
    const std::size_t words = (out_bits_ + 63) / 64;
    const std::size_t wi = column >> 6;
    const unsigned sh = static_cast<unsigned>(column & 63);
    const std::uint64_t* src = seed_words_.data() + wi;
    if (sh == 0) {
      for (std::size_t t = 0; t < words; ++t) acc_[t] ^= load(src, t, wi);
    } else {
      for (std::size_t t = 0; t < words; ++t) {
        const std::uint64_t lo = load(src, t, wi) >> sh;
        const std::uint64_t hi = load(src, t + 1, wi) << (64 - sh);
        acc_[t] ^= lo | hi;
      }
    }
  }

  std::uint64_t load(const std::uint64_t* src, std::size_t t,
                     std::size_t wi) const {
    return wi + t < seed_words_.size() ? src[t] : 0;
  }

  std::span<const std::uint64_t> seed_words_;
  std::uint64_t out_bits_;
  std::uint64_t group_bits_;
  std::uint64_t steps_;
  std::uint64_t step_ = 0;
  std::vector<std::uint64_t> acc_;
};

// Convenience wrapper: one whole chunk through a CalculationBlock.
inline BitVector extract_block(const ToeplitzSeed& seed,
                               const ExtractorConfig& cfg,
                               const BitVector& data) {
  if (data.size() != seed.cols()) {
    throw contract_error("chunk length does not match seed columns");
  }
  CalculationBlock block(seed, cfg);
  const auto words = data.words();
  for (std::uint64_t s = 0; s < cfg.steps_per_chunk(); ++s) {
    block.step(detail::read_bits(words, s * cfg.group_bits,
                                 static_cast<unsigned>(cfg.group_bits)));
  }
  BitVector out;
  block.take_output(out);
  return out;
}

// Precomputed byte expansion of a seed. Entry b of the table is the XOR of
// the seed windows selected by the bits of b, so a chunk is hashed by one
// table lookup per input byte instead of one window XOR per input bit. The
// table is built once per seed and shared read-only by every block.
class ExpandedSeed {
 public:
  explicit ExpandedSeed(const ToeplitzSeed& seed)
      : out_bits_(seed.rows()),
        in_bits_(seed.cols()),
        stride_((seed.rows() + seed.cols() - 1 + 7 + 63) / 64 + 1),
        table_(stride_ * 256, 0) {
    const auto words = seed.bits().words();
    const std::uint64_t total_bits = seed.rows() + seed.cols() - 1;
    // Single-bit entries are shifted copies of the seed string.
    for (unsigned b = 0; b < 8; ++b) {
      std::uint64_t* dst = entry(std::uint64_t{1} << b);
      for (std::size_t t = 0; t < stride_ - 1; ++t) {
        const std::uint64_t off = 64 * t + b;
        dst[t] = off < total_bits ? detail::read_bits(words, off, 64) : 0;
      }
    }
    // Remaining entries combine previous ones one set bit at a time.
    for (unsigned v = 3; v < 256; ++v) {
      if (std::popcount(v) < 2) continue;
      const std::uint64_t* a = entry(v & (v - 1));
      const std::uint64_t* b = entry(v & (~v + 1));
      std::uint64_t* dst = entry(v);
      for (std::size_t t = 0; t < stride_; ++t) dst[t] = a[t] ^ b[t];
    }
  }

  std::uint64_t out_bits() const { return out_bits_; }
  std::uint64_t in_bits() const { return in_bits_; }
  std::size_t memory_bytes() const { return table_.size() * 8; }

  // XORs the hash of one packed chunk into `acc` (mirrored order,
  // ceil(out_bits / 64) words, caller-zeroed).
  void accumulate_chunk(std::span<const std::uint8_t> chunk,
                        std::uint64_t chunk_bits,
                        std::uint64_t* __restrict acc) const {
    const std::size_t acc_words = (out_bits_ + 63) / 64;
    const std::size_t full_bytes = chunk_bits / 8;
    if constexpr (std::endian::native == std::endian::little) {
      // Byte-granular input keeps every row window byte aligned, so the
      // funnel shifts of the generic path collapse into unaligned loads.
      // The trailing stride_ padding keeps the 8 byte overhang of the last
      // load inside the row for any chunk_bits <= in_bits.
      std::size_t m = 0;
      for (; m + 4 <= full_bytes; m += 4) {
        const std::uint8_t* s0 = row_bytes(chunk[m]) + m;
        const std::uint8_t* s1 = row_bytes(chunk[m + 1]) + m + 1;
        const std::uint8_t* s2 = row_bytes(chunk[m + 2]) + m + 2;
        const std::uint8_t* s3 = row_bytes(chunk[m + 3]) + m + 3;
        for (std::size_t t = 0; t < acc_words; ++t) {
          acc[t] ^= load8(s0 + 8 * t) ^ load8(s1 + 8 * t) ^
                    load8(s2 + 8 * t) ^ load8(s3 + 8 * t);
        }
      }
      for (; m < full_bytes; ++m) {
        if (chunk[m] == 0) continue;
        const std::uint8_t* s = row_bytes(chunk[m]) + m;
        for (std::size_t t = 0; t < acc_words; ++t) acc[t] ^= load8(s + 8 * t);
      }
      const unsigned tail = static_cast<unsigned>(chunk_bits & 7);
      if (tail != 0) {
        const auto byte =
            static_cast<std::uint8_t>(chunk[m] & ((1u << tail) - 1));
        if (byte != 0) {
          const std::uint8_t* s = row_bytes(byte) + m;
          for (std::size_t t = 0; t < acc_words; ++t) {
            acc[t] ^= load8(s + 8 * t);
          }
        }
      }
    } else {
      for (std::size_t m = 0; m <= full_bytes; ++m) {
        std::uint8_t byte;
        if (m < full_bytes) {
          byte = chunk[m];
        } else {
          const unsigned tail = static_cast<unsigned>(chunk_bits & 7);
          if (tail == 0) break;
          byte = static_cast<std::uint8_t>(chunk[m] & ((1u << tail) - 1));
        }
        if (byte == 0) continue;
        const std::uint64_t off = 8 * m;
        const std::uint64_t* __restrict src = entry(byte) + (off >> 6);
        const unsigned sh = static_cast<unsigned>(off & 63);
        if (sh == 0) {
          for (std::size_t t = 0; t < acc_words; ++t) acc[t] ^= src[t];
        } else {
          for (std::size_t t = 0; t < acc_words; ++t) {
            acc[t] ^= (src[t] >> sh) | (src[t + 1] << (64 - sh));
          }
        }
      }
    }
  }

 private:
  std::uint64_t* entry(std::uint64_t v) { return table_.data() + v * stride_; }
  const std::uint64_t* entry(std::uint64_t v) const {
    return table_.data() + v * stride_;
  }

  const std::uint8_t* row_bytes(std::uint8_t v) const {
    return reinterpret_cast<const std::uint8_t*>(table_.data()) +
           std::size_t{v} * stride_ * 8;
  }

  static std::uint64_t load8(const std::uint8_t* p) {
    std::uint64_t w;
    std::memcpy(&w, p, 8);
    return w;
  }

  std::uint64_t out_bits_;
  std::uint64_t in_bits_;
  std::size_t stride_;
  std::vector<std::uint64_t> table_;
};

// Tabulated equivalent of extract_block; used by the stream scheduler.
inline BitVector extract_block_tabulated(const ExpandedSeed& expanded,
                                         const BitVector& data) {
  if (data.size() != expanded.in_bits()) {
    throw contract_error("chunk length does not match seed columns");
  }
  std::vector<std::uint64_t> acc((expanded.out_bits() + 63) / 64, 0);
  const auto bytes = data.to_packed_bytes();
  expanded.accumulate_chunk(bytes, data.size(), acc.data());
  BitVector out;
  detail::reverse_accumulator(acc, expanded.out_bits(), out);
  return out;
}

struct StreamStats {
  std::uint64_t input_bits = 0;      // bits accepted by feed calls
  std::uint64_t chunks = 0;          // complete chunks hashed
  std::uint64_t output_bits = 0;     // bits emitted
  std::uint64_t discarded_bits = 0;  // partial tail dropped at finish
};

// Streaming extractor: carves the incoming bit stream into k-bit chunks,
// deals chunk i to calculation block i mod block_count, and concatenates the
// chunk outputs in chunk order no matter how many workers run. A trailing
// partial chunk is never padded; finish() drops it and accounts for it.
class StreamExtractor {
 public:
  StreamExtractor(const ToeplitzSeed& seed, ExtractorConfig cfg,
                  unsigned workers = 1)
      : cfg_(cfg),
        expanded_(seed),
        pool_(workers == 0 ? 1 : workers),
        block_chunks_(cfg.block_count, 0) {
    cfg_.validate();
    if (cfg.chunk_out_bits != seed.rows() || cfg.chunk_in_bits != seed.cols()) {
      throw config_error("seed geometry does not match the configuration");
    }
  }

  const ExtractorConfig& config() const { return cfg_; }
  const StreamStats& stats() const { return stats_; }
  std::span<const std::uint64_t> block_chunk_counts() const {
    return block_chunks_;
  }

  // Appends packed bits (LSB first within each byte) to the pending stream.
  void feed_bits(std::span<const std::uint8_t> bytes, std::uint64_t nbits) {
    if (bytes.size() * 8 < nbits) {
      throw contract_error("bit count exceeds supplied bytes");
    }
    reserve_pending(nbits);
    std::uint64_t i = 0;
    if constexpr (std::endian::native == std::endian::little) {
      if ((pending_bits_ & 7) == 0 && nbits >= 8) {
        const std::uint64_t whole = nbits / 8;
        std::memcpy(reinterpret_cast<std::uint8_t*>(pending_.data()) +
                        (pending_bits_ >> 3),
                    bytes.data(), static_cast<std::size_t>(whole));
        pending_bits_ += whole * 8;
        i = whole * 8;
      }
    }
    for (; i < nbits; i += 8) {
      const unsigned take =
          static_cast<unsigned>(std::min<std::uint64_t>(8, nbits - i));
      const std::uint8_t mask =
          take == 8 ? 0xFFu : static_cast<std::uint8_t>((1u << take) - 1);
      push_pending(bytes[i / 8] & mask, take);
    }
    stats_.input_bits += nbits;
    process_ready();
  }

  // Appends raw ADC samples, low `sample_bits` of each word, LSB first.
  void feed_samples(std::span<const std::uint16_t> samples) {
    const unsigned n = static_cast<unsigned>(cfg_.sample_bits);
    const std::uint16_t mask = static_cast<std::uint16_t>((1u << n) - 1);
    reserve_pending(samples.size() * n);
    for (const std::uint16_t s : samples) {
      push_pending(static_cast<std::uint64_t>(s & mask), n);
    }
    stats_.input_bits += samples.size() * n;
    process_ready();
  }

  // Drops any partial chunk and returns the final accounting.
  StreamStats finish() {
    process_ready();
    stats_.discarded_bits = pending_bits_ - consumed_bits_;
    pending_.clear();
    pending_bits_ = 0;
    consumed_bits_ = 0;
    return stats_;
  }

  const BitVector& output() const { return output_; }
  BitVector take_output() { return std::move(output_); }

 private:
  void reserve_pending(std::uint64_t more_bits) {
    pending_.resize(
        static_cast<std::size_t>((pending_bits_ + more_bits + 63) / 64) + 1,
        0);
  }

  void push_pending(std::uint64_t value, unsigned nbits) {
    const std::size_t wi = static_cast<std::size_t>(pending_bits_ >> 6);
    const unsigned sh = static_cast<unsigned>(pending_bits_ & 63);
    pending_[wi] |= value << sh;
    if (sh + nbits > 64) pending_[wi + 1] |= value >> (64 - sh);
    pending_bits_ += nbits;
  }

  void process_ready() {
    const std::uint64_t k = cfg_.chunk_in_bits;
    std::uint64_t ready = (pending_bits_ - consumed_bits_) / k;
    while (ready > 0) {
      const std::uint64_t batch =
          std::min<std::uint64_t>(ready, kMaxChunksPerBatch);
      run_batch(batch);
      ready -= batch;
    }
    compact_pending();
  }

  void run_batch(std::uint64_t batch) {
    const std::uint64_t k = cfg_.chunk_in_bits;
    const std::size_t acc_words =
        static_cast<std::size_t>((cfg_.chunk_out_bits + 63) / 64);
    const std::size_t chunk_bytes = static_cast<std::size_t>((k + 7) / 8);
    batch_acc_.assign(batch * acc_words, 0);

    auto work = [&](std::size_t i) {
      const std::uint64_t base = consumed_bits_ + i * k;
      std::uint64_t* acc = batch_acc_.data() + i * acc_words;
      if constexpr (std::endian::native == std::endian::little) {
        if ((base & 7) == 0) {
          // Byte-aligned chunks hash straight out of the pending buffer.
          const auto* bytes =
              reinterpret_cast<const std::uint8_t*>(pending_.data()) +
              (base >> 3);
          expanded_.accumulate_chunk({bytes, chunk_bytes}, k, acc);
          return;
        }
      }
      // Repack this chunk byte-aligned, then hash it.
      thread_local std::vector<std::uint8_t> chunk;
      chunk.resize(chunk_bytes + 8);
      for (std::size_t b = 0; b < chunk_bytes; ++b) {
        chunk[b] = static_cast<std::uint8_t>(
            detail::read_bits(pending_span(), base + 8 * b,
                              static_cast<unsigned>(std::min<std::uint64_t>(
                                  8, k - 8 * b))));
      }
      expanded_.accumulate_chunk(chunk, k, acc);
    };
    pool_.parallel_for(static_cast<std::size_t>(batch), work);

    BitVector scratch;
    for (std::uint64_t i = 0; i < batch; ++i) {
      detail::reverse_accumulator(
          std::span<const std::uint64_t>(batch_acc_.data() + i * acc_words,
                                         acc_words),
          cfg_.chunk_out_bits, scratch);
      output_.append(scratch);
      ++block_chunks_[static_cast<std::size_t>(
          (stats_.chunks + i) % cfg_.block_count)];
    }
    stats_.chunks += batch;
    stats_.output_bits += batch * cfg_.chunk_out_bits;
    consumed_bits_ += batch * k;
  }

  std::span<const std::uint64_t> pending_span() const { return pending_; }

  void compact_pending() {
    const std::size_t drop_words = static_cast<std::size_t>(consumed_bits_ >> 6);
    if (drop_words < 64) return;
    pending_.erase(pending_.begin(),
                   pending_.begin() + static_cast<std::ptrdiff_t>(drop_words));
    consumed_bits_ -= std::uint64_t{64} * drop_words;
    pending_bits_ -= std::uint64_t{64} * drop_words;
  }

  static constexpr std::uint64_t kMaxChunksPerBatch = 1024;

  ExtractorConfig cfg_;
  ExpandedSeed expanded_;
  ThreadPool pool_;
  std::vector<std::uint64_t> pending_;
  std::uint64_t pending_bits_ = 0;
  std::uint64_t consumed_bits_ = 0;
  std::vector<std::uint64_t> batch_acc_;
  std::vector<std::uint64_t> block_chunks_;
  BitVector output_;
  StreamStats stats_;
};

// One-call helper used by the pipeline: samples in, packed bits out.
inline BitVector extract_samples(const ToeplitzSeed& seed,
                                 const ExtractorConfig& cfg,
                                 std::span<const std::uint16_t> samples,
                                 unsigned workers, StreamStats* stats = nullptr) {
  StreamExtractor ex(seed, cfg, workers);
  ex.feed_samples(samples);
  const StreamStats s = ex.finish();
  if (stats != nullptr) *stats = s;
  return ex.take_output();
}

struct BenchReport {
  unsigned workers = 1;
  std::uint64_t block_count = 1;
  std::uint64_t input_bits = 0;
  std::uint64_t output_bits = 0;
  double seconds = 0.0;
  double input_mbps = 0.0;
  double output_mbps = 0.0;
  std::vector<std::uint64_t> block_chunks;
};

// Hashes deterministic synthetic input through a StreamExtractor and
// reports sustained throughput. Input synthesis happens up front so only
// extraction is timed.
inline BenchReport throughput_benchmark(const ToeplitzSeed& seed,
                                        const ExtractorConfig& cfg,
                                        std::uint64_t input_bits,
                                        unsigned workers,
                                        std::uint64_t data_seed = 0x42) {
  std::vector<std::uint8_t> input((input_bits + 7) / 8);
  Xoshiro256pp rng(data_seed);
  std::size_t i = 0;
  for (; i + 8 <= input.size(); i += 8) {
    const std::uint64_t w = rng.next();
    std::memcpy(input.data() + i, &w, 8);
  }
  for (; i < input.size(); ++i) {
    input[i] = static_cast<std::uint8_t>(rng.next());
  }

  StreamExtractor ex(seed, cfg, workers);
  const auto start = std::chrono::steady_clock::now();
  ex.feed_bits(input, input_bits);
  const StreamStats stats = ex.finish();
  const auto stop = std::chrono::steady_clock::now();

  BenchReport report;
  report.workers = workers;
  report.block_count = cfg.block_count;
  report.input_bits = stats.input_bits;
  report.output_bits = stats.output_bits;
  report.seconds = std::chrono::duration<double>(stop - start).count();
  if (report.seconds > 0.0) {
    report.input_mbps = static_cast<double>(stats.input_bits) / report.seconds / 1e6;
    report.output_mbps =
        static_cast<double>(stats.output_bits) / report.seconds / 1e6;
  }
  report.block_chunks.assign(ex.block_chunk_counts().begin(),
                             ex.block_chunk_counts().end());
  return report;
}

}  // namespace vfrng

#endif  // VFRNG_EXTRACTOR_HPP
