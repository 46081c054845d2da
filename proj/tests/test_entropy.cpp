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

#include "vfrng/entropy.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vfrng/special_functions.hpp"

namespace {

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

vfrng::AdcSpec production_adc() {
  vfrng::AdcSpec adc;
  adc.bits = 12;
  adc.range = 0.75;
  adc.sample_rate = 1e9;
  return adc;
}

// Operating point used throughout: total variance 3.16e-4 V^2 at full
// drive, electronic floor 3.13e-5 V^2.
constexpr double kSigmaMSq = 3.16e-4;
constexpr double kSigmaESq = 3.13e-5;

vfrng::NoiseStats stats_with(double sigma_q_sq) {
  vfrng::NoiseStats s;
  s.sigma_M_sq = kSigmaMSq;
  s.sigma_E_sq = kSigmaESq;
  s.sigma_Q_sq = sigma_q_sq;
  s.e_bound_factor = 5.0;
  return s;
}

}  // namespace

TEST_CASE("adc step size", "[entropy]") {
  const vfrng::AdcSpec adc = production_adc();
  // Full scale 2 * 0.75 V over 4096 codes.
  REQUIRE(adc.delta() == 0.0003662109375);
  vfrng::AdcSpec bad = adc;
  bad.bits = 0;
  REQUIRE_THROWS_AS(bad.validate(), vfrng::contract_error);
  bad = adc;
  bad.range = 0.0;
  REQUIRE_THROWS_AS(bad.validate(), vfrng::contract_error);
}

TEST_CASE("quadrature variance subtracts the digitization penalty",
          "[entropy]") {
  const vfrng::AdcSpec adc = production_adc();

  // Default: twice (delta / 12)^2 with delta = 2 * 0.75 / 4096.
  const double got = vfrng::sigma_q_squared(kSigmaMSq, kSigmaESq, adc);
  REQUIRE_THAT(got, WithinRel(2.8469813735485075e-4, 1e-12));
  const double penalty = kSigmaMSq - kSigmaESq - got;
  REQUIRE_THAT(penalty / 2.0, WithinRel(9.3132257461547852e-10, 1e-12));

  // Alternative: twice the quantization noise power delta^2 / 12.
  const double var_term = vfrng::sigma_q_squared(
      kSigmaMSq, kSigmaESq, adc, vfrng::QuantizationTerm::kNoisePower);
  REQUIRE_THAT(var_term, WithinRel(2.8467764825820921e-4, 1e-12));
}

TEST_CASE("quadrature variance refuses impossible calibrations",
          "[entropy]") {
  const vfrng::AdcSpec adc = production_adc();
  REQUIRE_THROWS_AS(vfrng::sigma_q_squared(1e-5, 1e-5, adc),
                    vfrng::calibration_error);
  REQUIRE_THROWS_AS(vfrng::sigma_q_squared(1e-5, 2e-5, adc),
                    vfrng::calibration_error);
  // Positive difference smaller than the penalty also fails.
  REQUIRE_THROWS_AS(vfrng::sigma_q_squared(1e-5, 1e-5 - 1e-12, adc),
                    vfrng::calibration_error);
}

TEST_CASE("guessing candidates at the operating point", "[entropy]") {
  const auto c =
      vfrng::guessing_candidates(stats_with(2.8457e-4), production_adc());
  // The rail excursion argument is about -30 standard deviations, far
  // below any representable tail mass.
  REQUIRE(c.c1 == 0.0);
  REQUIRE_THAT(c.c2, WithinRel(0.0086604067941080404, 1e-12));
}

TEST_CASE("min entropy matches the frozen operating point", "[entropy]") {
  const auto r = vfrng::min_entropy(stats_with(2.8457e-4), production_adc());
  REQUIRE_THAT(r.h_min_bits, WithinAbs(6.8513494922668139, 1e-10));
  REQUIRE(r.safe);
  REQUIRE_THAT(r.h_min_bits, WithinAbs(6.83, 0.05));

  // With the variance computed from the calibration instead of pinned.
  const double sq =
      vfrng::sigma_q_squared(kSigmaMSq, kSigmaESq, production_adc());
  const auto r2 = vfrng::min_entropy(stats_with(sq), production_adc());
  REQUIRE_THAT(r2.h_min_bits, WithinAbs(6.8516742177503538, 1e-10));
}

TEST_CASE("min entropy is bounded by the sample width", "[entropy]") {
  for (double sq = 1e-8; sq < 1e-2; sq *= 3.0) {
    const auto r = vfrng::min_entropy(stats_with(sq), production_adc());
    REQUIRE(r.h_min_bits >= 0.0);
    REQUIRE(r.h_min_bits <= 12.0);
  }
}

TEST_CASE("min entropy grows with quadrature strength", "[entropy]") {
  double prev = 0.0;
  for (double sq = 1e-6; sq < 5e-3; sq *= 1.5) {
    const auto r = vfrng::min_entropy(stats_with(sq), production_adc());
    REQUIRE(r.h_min_bits >= prev);
    prev = r.h_min_bits;
  }
}

TEST_CASE("a central bin of width 2^-8 pins entropy at 8 bits",
          "[entropy]") {
  // Bisect the quadrature scale until c2 = 2^-8, then the min entropy must
  // equal 8 exactly by construction.
  const vfrng::AdcSpec adc = production_adc();
  const double d = adc.delta();
  double lo = 1e-6, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double c2 = vfrng::erf_local(d / (2.0 * std::sqrt(2.0) * mid));
    (c2 > std::exp2(-8.0) ? lo : hi) = mid;
  }
  const auto r = vfrng::min_entropy(stats_with(lo * lo), adc);
  REQUIRE_THAT(r.h_min_bits, WithinAbs(8.0, 1e-9));
}

TEST_CASE("worst case flips to the rail under large excursions",
          "[entropy]") {
  vfrng::NoiseStats s;
  s.sigma_M_sq = 0.03;
  s.sigma_E_sq = 0.0225;  // e_max = 5 * 0.15 = 0.75, at the rail
  s.sigma_Q_sq =
      vfrng::sigma_q_squared(s.sigma_M_sq, s.sigma_E_sq, production_adc());
  s.e_bound_factor = 5.0;
  const auto r = vfrng::min_entropy(s, production_adc());
  REQUIRE_FALSE(r.safe);
  REQUIRE_THAT(r.c1, WithinRel(0.5025304581, 1e-8));
  REQUIRE_THAT(r.c2, WithinRel(0.001686982104, 1e-8));
  REQUIRE_THAT(r.h_min_bits, WithinAbs(0.9927170551, 1e-8));
}

TEST_CASE("security parameter at the operating geometry", "[entropy]") {
  const double log_eps = vfrng::security_parameter_log2(6144, 12288, 6.83, 12);
  REQUIRE_THAT(log_eps, WithinAbs(-424.96, 1e-9));
  REQUIRE_THAT(vfrng::security_parameter_log2(6144, 12288,
                                              6.8513494922668139, 12),
               WithinAbs(-435.89094, 1e-4));
  REQUIRE_THROWS_AS(vfrng::security_parameter_log2(6144, 0, 6.83, 12),
                    vfrng::contract_error);
}

TEST_CASE("longest output meeting a target security parameter",
          "[entropy]") {
  REQUIRE(vfrng::max_output_length(12288, 6.83, 12, -256.0) == 6481);
  REQUIRE(vfrng::max_output_length(12288, 6.8513494922668139, 12, -256.0) ==
          6503);
  // Inverse consistency: the returned length achieves at least the target.
  const auto len = vfrng::max_output_length(12288, 6.83, 12, -256.0);
  REQUIRE(vfrng::security_parameter_log2(static_cast<std::uint64_t>(len),
                                         12288, 6.83, 12) <= -256.0);
  REQUIRE(vfrng::security_parameter_log2(static_cast<std::uint64_t>(len) + 1,
                                         12288, 6.83, 12) > -256.5);
  REQUIRE_THROWS_AS(vfrng::max_output_length(12288, 6.83, 12, 1.0),
                    vfrng::contract_error);
}

TEST_CASE("entropy report carries the hashing geometry", "[entropy]") {
  const auto r = vfrng::entropy_report(stats_with(2.8457e-4),
                                       production_adc(), 6144, 12288);
  REQUIRE(r.extraction_ratio == 0.5);
  REQUIRE_THAT(r.epsilon_log2, WithinAbs(-435.89094, 1e-4));
  REQUIRE(r.delta == 0.0003662109375);
  REQUIRE(r.sigma_M_sq == kSigmaMSq);
  REQUIRE(r.sigma_E_sq == kSigmaESq);
  REQUIRE(r.sigma_Q_sq == 2.8457e-4);
}

TEST_CASE("ratio guard refuses over-extraction", "[entropy]") {
  // 6144 / 12288 = 0.5 sits below 6.83 / 12 = 0.569.
  REQUIRE_NOTHROW(vfrng::ensure_ratio_safe(6144, 12288, 6.83, 12));
  // 7000 / 12288 = 0.5697 exceeds the budget.
  REQUIRE_THROWS_AS(vfrng::ensure_ratio_safe(7000, 12288, 6.83, 12),
                    vfrng::calibration_error);
  REQUIRE_NOTHROW(vfrng::ensure_ratio_safe(7000, 12288, 6.83, 12, true));
  // Equality is refused: the bound must hold strictly.
  REQUIRE_THROWS_AS(vfrng::ensure_ratio_safe(6144, 12288, 6.0, 12),
                    vfrng::calibration_error);
}

TEST_CASE("sample variance on exact small cases", "[entropy]") {
  const vfrng::AdcSpec adc = production_adc();
  const double d = adc.delta();
  // Codes 2047 and 2048 straddle mid-range: variance of {a, a+1} is 0.5
  // code^2.
  const std::vector<std::uint16_t> pair{2047, 2048};
  REQUIRE_THAT(vfrng::sample_variance(pair, adc),
               WithinRel(0.5 * d * d, 1e-12));

  const std::vector<std::uint16_t> spread{0, 0, 4095, 4095};
  // Unbiased variance of {0,0,4095,4095} is 4095^2 / 3.
  REQUIRE_THAT(vfrng::sample_variance(spread, adc),
               WithinRel(4095.0 * 4095.0 / 3.0 * d * d, 1e-12));

  const std::vector<std::uint16_t> one{7};
  REQUIRE_THROWS_AS(vfrng::sample_variance(one, adc),
                    vfrng::calibration_error);
}

TEST_CASE("sample variance stays exact at scale", "[entropy]") {
  // 2^24 alternating codes: the integer moments reach 2^48, far beyond
  // float precision but exact in the 128-bit assembly.
  const std::size_t n = 1u << 24;
  std::vector<std::uint16_t> codes(n);
  for (std::size_t i = 0; i < n; ++i) codes[i] = i % 2 == 0 ? 1024 : 3072;
  const vfrng::AdcSpec adc = production_adc();
  const double d = adc.delta();
  const double want =
      1024.0 * 1024.0 * static_cast<double>(n) / (static_cast<double>(n) - 1.0);
  REQUIRE_THAT(vfrng::sample_variance(codes, adc),
               WithinRel(want * d * d, 1e-12));
}
