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

#include "vfrng/extractor.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "vfrng/homodyne.hpp"
#include "vfrng/rng.hpp"
#include "vfrng/toeplitz.hpp"

namespace {

using vfrng::BitVector;
using vfrng::ExtractorConfig;
using vfrng::ToeplitzSeed;

BitVector random_bitvector(std::mt19937_64& gen, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, gen() & 1);
  return v;
}

ToeplitzSeed random_seed(std::mt19937_64& gen, std::uint64_t rows,
                         std::uint64_t cols) {
  return ToeplitzSeed(rows, cols, random_bitvector(gen, rows + cols - 1));
}

struct Geometry {
  std::uint64_t j, k, g, n;
};

Geometry random_geometry(std::mt19937_64& gen) {
  static constexpr std::uint64_t kSampleBits[] = {1, 2, 3, 4, 6, 8, 12, 16};
  Geometry geo;
  geo.n = kSampleBits[gen() % 8];
  geo.g = geo.n * (1 + gen() % 3);
  geo.k = geo.g * (2 + gen() % 24);
  geo.j = 1 + gen() % (geo.k - 1);
  return geo;
}

ExtractorConfig make_config(const Geometry& geo, std::uint64_t blocks = 1) {
  ExtractorConfig cfg;
  cfg.chunk_out_bits = geo.j;
  cfg.chunk_in_bits = geo.k;
  cfg.group_bits = geo.g;
  cfg.sample_bits = geo.n;
  cfg.block_count = blocks;
  return cfg;
}

// Direct dot-product oracle, independent of multiply_naive.
BitVector dot_oracle(const ToeplitzSeed& seed, const BitVector& data) {
  BitVector out(seed.rows());
  for (std::uint64_t r = 0; r < seed.rows(); ++r) {
    bool acc = false;
    for (std::uint64_t c = 0; c < seed.cols(); ++c) {
      acc ^= seed.bits().get(seed.rows() - 1 - r + c) && data.get(c);
    }
    out.set(r, acc);
  }
  return out;
}

}  // namespace

TEST_CASE("config validation", "[extractor]") {
  ExtractorConfig def;
  def.sample_rate = 1'000'000'000;
  def.clock_rate = 125'000'000;
  def.validate();
  REQUIRE(def.steps_per_chunk() == 1024);

  auto expect_bad = [](auto mutate) {
    ExtractorConfig cfg;
    mutate(cfg);
    REQUIRE_THROWS_AS(cfg.validate(), vfrng::config_error);
  };
  expect_bad([](ExtractorConfig& c) { c.chunk_out_bits = c.chunk_in_bits; });
  expect_bad([](ExtractorConfig& c) { c.chunk_out_bits = 0; });
  expect_bad([](ExtractorConfig& c) { c.chunk_in_bits = 12289; });
  expect_bad([](ExtractorConfig& c) { c.group_bits = 0; });
  expect_bad([](ExtractorConfig& c) { c.group_bits = 5; });
  expect_bad([](ExtractorConfig& c) { c.sample_bits = 0; });
  expect_bad([](ExtractorConfig& c) { c.sample_bits = 17; });
  expect_bad([](ExtractorConfig& c) { c.block_count = 0; });
  expect_bad([](ExtractorConfig& c) { c.sample_rate = 1'000'000'000; });
  expect_bad([](ExtractorConfig& c) {
    c.sample_rate = 1'000'000'000;
    c.clock_rate = 125'000'000;
    c.block_count = 4;  // correct value is 8
  });
}

TEST_CASE("block count derivation from rates", "[extractor]") {
  REQUIRE(ExtractorConfig::derive_block_count(1'000'000'000, 12, 125'000'000,
                                              12) == 8);
  REQUIRE(ExtractorConfig::derive_block_count(1'000'000'000, 12, 250'000'000,
                                              12) == 4);
  REQUIRE(ExtractorConfig::derive_block_count(1'000'000'000, 12,
                                              1'000'000'000, 12) == 1);
  REQUIRE(ExtractorConfig::derive_block_count(1'000'000'000, 12, 125'000'000,
                                              24) == 4);
  REQUIRE(ExtractorConfig::derive_block_count(2'000'000'000, 8, 125'000'000,
                                              8) == 16);

  // Non-integral result names the nearest workable clock rate.
  try {
    ExtractorConfig::derive_block_count(1'000'000'000, 12, 128'000'000, 12);
    FAIL("expected a configuration error");
  } catch (const vfrng::config_error& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("125000000") != std::string::npos);
    REQUIRE(msg.find("8 blocks") != std::string::npos);
  }
}

TEST_CASE("rate ratio must be a power of two", "[extractor]") {
  // 1 GHz over 125 MHz is 8, fine; over 333 MHz is not a power of two.
  REQUIRE_NOTHROW(ExtractorConfig::from_rates(6144, 12288, 12, 12,
                                              1'000'000'000, 125'000'000));
  REQUIRE_THROWS_AS(ExtractorConfig::from_rates(6144, 12288, 12, 12,
                                                999'999'999, 333'333'333),
                    vfrng::config_error);
  // Downratio 16 exceeds the supported conversion depth.
  REQUIRE_THROWS_AS(ExtractorConfig::from_rates(6144, 12288, 12, 12,
                                                62'500'000, 1'000'000'000),
                    vfrng::config_error);
}

TEST_CASE("production configuration derives eight blocks", "[extractor]") {
  const auto cfg = ExtractorConfig::from_rates(6144, 12288, 12, 12,
                                               1'000'000'000, 125'000'000);
  REQUIRE(cfg.block_count == 8);
  REQUIRE(cfg.steps_per_chunk() == 1024);
}

TEST_CASE("single block agrees with the dot-product oracle", "[extractor]") {
  std::mt19937_64 gen(101);
  for (int round = 0; round < 40; ++round) {
    const Geometry geo = random_geometry(gen);
    const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
    const BitVector data = random_bitvector(gen, geo.k);
    const BitVector want = dot_oracle(seed, data);
    REQUIRE(vfrng::multiply_naive(seed, data) == want);
    REQUIRE(vfrng::extract_block(seed, make_config(geo), data) == want);
  }
}

TEST_CASE("streamed block matches the naive multiply over many geometries",
          "[extractor]") {
  std::mt19937_64 gen(103);
  for (int round = 0; round < 300; ++round) {
    const Geometry geo = random_geometry(gen);
    const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
    const BitVector data = random_bitvector(gen, geo.k);
    INFO("j=" << geo.j << " k=" << geo.k << " g=" << geo.g << " n=" << geo.n);
    REQUIRE(vfrng::extract_block(seed, make_config(geo), data) ==
            vfrng::multiply_naive(seed, data));
  }
}

TEST_CASE("tabulated kernel matches the streamed block", "[extractor]") {
  std::mt19937_64 gen(107);
  for (int round = 0; round < 200; ++round) {
    const Geometry geo = random_geometry(gen);
    const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
    const vfrng::ExpandedSeed expanded(seed);
    const BitVector data = random_bitvector(gen, geo.k);
    INFO("j=" << geo.j << " k=" << geo.k);
    REQUIRE(vfrng::extract_block_tabulated(expanded, data) ==
            vfrng::extract_block(seed, make_config(geo), data));
  }
}

TEST_CASE("tabulated kernel handles ragged chunk tails", "[extractor]") {
  // Chunk lengths that are not byte multiples exercise the masked tail.
  std::mt19937_64 gen(109);
  for (const std::uint64_t k : {12u, 20u, 36u, 52u, 100u, 1004u}) {
    const Geometry geo{k / 2, k, 4, 4};
    const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
    const vfrng::ExpandedSeed expanded(seed);
    const BitVector data = random_bitvector(gen, k);
    REQUIRE(vfrng::extract_block_tabulated(expanded, data) ==
            vfrng::multiply_naive(seed, data));
  }
}

TEST_CASE("expanded production seed is under a megabyte", "[extractor]") {
  std::mt19937_64 gen(211);
  const ToeplitzSeed seed = random_seed(gen, 6144, 12288);
  const vfrng::ExpandedSeed expanded(seed);
  REQUIRE(expanded.memory_bytes() == 290u * 256u * 8u);
  REQUIRE(expanded.memory_bytes() < (1u << 20));
}

TEST_CASE("calculation block steps and rearms", "[extractor]") {
  std::mt19937_64 gen(113);
  const Geometry geo{10, 48, 6, 6};
  const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
  const ExtractorConfig cfg = make_config(geo);
  vfrng::CalculationBlock block(seed, cfg);
  REQUIRE(block.step_index() == 0);
  REQUIRE_FALSE(block.finished());
  BitVector early;
  REQUIRE_THROWS_AS(block.take_output(early), vfrng::contract_error);

  const BitVector data = random_bitvector(gen, geo.k);
  const auto words = data.words();
  for (std::uint64_t s = 0; s < cfg.steps_per_chunk(); ++s) {
    REQUIRE(block.column_cursor() == s * geo.g);
    block.step(vfrng::detail::read_bits(words, s * geo.g,
                                        static_cast<unsigned>(geo.g)));
  }
  REQUIRE(block.finished());
  REQUIRE_THROWS_AS(block.step(0), vfrng::contract_error);

  BitVector out;
  block.take_output(out);
  REQUIRE(out == vfrng::multiply_naive(seed, data));

  // After take_output the block must produce a fresh chunk bit-identically.
  const BitVector data2 = random_bitvector(gen, geo.k);
  const auto words2 = data2.words();
  for (std::uint64_t s = 0; s < cfg.steps_per_chunk(); ++s) {
    block.step(vfrng::detail::read_bits(words2, s * geo.g,
                                        static_cast<unsigned>(geo.g)));
  }
  BitVector out2;
  block.take_output(out2);
  REQUIRE(out2 == vfrng::multiply_naive(seed, data2));
}

TEST_CASE("group bits beyond the group width are ignored", "[extractor]") {
  std::mt19937_64 gen(127);
  const Geometry geo{6, 24, 4, 4};
  const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
  const ExtractorConfig cfg = make_config(geo);
  const BitVector data = random_bitvector(gen, geo.k);
  const auto words = data.words();
  vfrng::CalculationBlock clean(seed, cfg);
  vfrng::CalculationBlock noisy(seed, cfg);
  for (std::uint64_t s = 0; s < cfg.steps_per_chunk(); ++s) {
    const std::uint64_t group = vfrng::detail::read_bits(
        words, s * geo.g, static_cast<unsigned>(geo.g));
    clean.step(group);
    noisy.step(group | (~std::uint64_t{0} << geo.g));
  }
  BitVector a, b;
  clean.take_output(a);
  noisy.take_output(b);
  REQUIRE(a == b);
}

TEST_CASE("stream output is the concatenation of chunk hashes",
          "[extractor]") {
  std::mt19937_64 gen(131);
  const Geometry geo{40, 96, 8, 8};
  const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
  const ExtractorConfig cfg = make_config(geo, 2);

  const std::uint64_t chunks = 5;
  const std::uint64_t extra = 7;
  const BitVector stream_bits =
      random_bitvector(gen, chunks * geo.k + extra);
  const auto bytes = stream_bits.to_packed_bytes();

  vfrng::StreamExtractor ex(seed, cfg, 1);
  ex.feed_bits(bytes, stream_bits.size());
  const vfrng::StreamStats stats = ex.finish();

  REQUIRE(stats.input_bits == stream_bits.size());
  REQUIRE(stats.chunks == chunks);
  REQUIRE(stats.output_bits == chunks * geo.j);
  REQUIRE(stats.discarded_bits == extra);

  const BitVector& out = ex.output();
  REQUIRE(out.size() == chunks * geo.j);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const BitVector chunk = vfrng::slice(stream_bits, c * geo.k, geo.k);
    const BitVector want = vfrng::multiply_naive(seed, chunk);
    REQUIRE(vfrng::slice(out, c * geo.j, geo.j) == want);
  }
}

TEST_CASE("stream output does not depend on feed granularity",
          "[extractor]") {
  std::mt19937_64 gen(137);
  const Geometry geo{24, 60, 6, 6};
  const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
  const ExtractorConfig cfg = make_config(geo);
  const BitVector stream_bits = random_bitvector(gen, 12 * geo.k + 11);
  const auto bytes = stream_bits.to_packed_bytes();

  vfrng::StreamExtractor whole(seed, cfg, 1);
  whole.feed_bits(bytes, stream_bits.size());
  whole.finish();

  vfrng::StreamExtractor pieces(seed, cfg, 1);
  std::uint64_t fed = 0;
  std::size_t piece = 1;
  while (fed < stream_bits.size()) {
    const std::uint64_t take =
        std::min<std::uint64_t>(piece * 8, stream_bits.size() - fed);
    const std::span<const std::uint8_t> window(bytes.data() + fed / 8,
                                               (take + 7) / 8);
    pieces.feed_bits(window, take);
    fed += take;
    piece = piece % 23 + 1;
  }
  pieces.finish();
  REQUIRE(whole.output() == pieces.output());
}

TEST_CASE("stream output does not depend on workers or block count",
          "[extractor]") {
  std::mt19937_64 gen(139);
  const Geometry geo{64, 144, 12, 12};
  const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
  const BitVector stream_bits = random_bitvector(gen, 40 * geo.k);
  const auto bytes = stream_bits.to_packed_bytes();

  vfrng::StreamExtractor reference(seed, make_config(geo, 1), 1);
  reference.feed_bits(bytes, stream_bits.size());
  reference.finish();

  for (const std::uint64_t blocks : {2u, 4u, 8u}) {
    for (const unsigned workers : {1u, 4u}) {
      vfrng::StreamExtractor ex(seed, make_config(geo, blocks), workers);
      ex.feed_bits(bytes, stream_bits.size());
      ex.finish();
      INFO("blocks=" << blocks << " workers=" << workers);
      REQUIRE(ex.output() == reference.output());
    }
  }
}

TEST_CASE("chunks are dealt to blocks round-robin", "[extractor]") {
  std::mt19937_64 gen(149);
  const Geometry geo{16, 48, 6, 6};
  const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
  vfrng::StreamExtractor ex(seed, make_config(geo, 4), 1);
  const BitVector stream_bits = random_bitvector(gen, 11 * geo.k);
  const auto bytes = stream_bits.to_packed_bytes();
  ex.feed_bits(bytes, stream_bits.size());
  ex.finish();
  const auto counts = ex.block_chunk_counts();
  REQUIRE(counts.size() == 4);
  // 11 chunks over 4 blocks: 3 3 3 2 in deal order.
  REQUIRE(counts[0] == 3);
  REQUIRE(counts[1] == 3);
  REQUIRE(counts[2] == 3);
  REQUIRE(counts[3] == 2);
}

TEST_CASE("sample feed equals expanded bit feed", "[extractor]") {
  std::mt19937_64 gen(151);
  const Geometry geo{100, 240, 12, 12};
  const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
  std::vector<std::uint16_t> codes(645);
  for (auto& c : codes) c = static_cast<std::uint16_t>(gen() & 0xFFF);

  vfrng::StreamExtractor by_samples(seed, make_config(geo), 1);
  by_samples.feed_samples(codes);
  const auto stats = by_samples.finish();
  REQUIRE(stats.input_bits == codes.size() * geo.n);

  const BitVector bits = vfrng::expand_raw_bits(codes, geo.n);
  vfrng::StreamExtractor by_bits(seed, make_config(geo), 1);
  by_bits.feed_bits(bits.to_packed_bytes(), bits.size());
  by_bits.finish();

  REQUIRE(by_samples.output() == by_bits.output());
}

TEST_CASE("stream hashing is linear per chunk", "[extractor]") {
  std::mt19937_64 gen(157);
  const Geometry geo{32, 72, 8, 8};
  const ToeplitzSeed seed = random_seed(gen, geo.j, geo.k);
  const BitVector a = random_bitvector(gen, geo.k);
  const BitVector b = random_bitvector(gen, geo.k);
  BitVector sum = a;
  sum.xor_in(b);
  const ExtractorConfig cfg = make_config(geo);
  BitVector want = vfrng::extract_block(seed, cfg, a);
  want.xor_in(vfrng::extract_block(seed, cfg, b));
  REQUIRE(vfrng::extract_block(seed, cfg, sum) == want);
}

TEST_CASE("seed and configuration geometry must agree", "[extractor]") {
  std::mt19937_64 gen(163);
  const ToeplitzSeed seed = random_seed(gen, 16, 48);
  ExtractorConfig cfg = make_config({16, 60, 6, 6});
  REQUIRE_THROWS_AS(vfrng::StreamExtractor(seed, cfg, 1),
                    vfrng::config_error);
  REQUIRE_THROWS_AS(vfrng::CalculationBlock(seed, cfg), vfrng::config_error);
}

TEST_CASE("feed_bits validates the byte span", "[extractor]") {
  std::mt19937_64 gen(167);
  const ToeplitzSeed seed = random_seed(gen, 16, 48);
  vfrng::StreamExtractor ex(seed, make_config({16, 48, 6, 6}), 1);
  const std::vector<std::uint8_t> bytes(2);
  REQUIRE_THROWS_AS(ex.feed_bits(bytes, 17), vfrng::contract_error);
}
