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

#ifndef VFRNG_ENTROPY_HPP
#define VFRNG_ENTROPY_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "vfrng/errors.hpp"
#include "vfrng/special_functions.hpp"

namespace vfrng {

// Digitizer geometry. `range` is the half range R in volts, so codes cover
// [-R, R) in steps of delta = 2R / 2^n.
struct AdcSpec {
  unsigned bits = 12;          // n
  double range = 0.75;         // R, volts
  double sample_rate = 1e9;    // samples per second

  double delta() const {
    return 2.0 * range / static_cast<double>(std::uint64_t{1} << bits);
  }

  void validate() const {
    if (bits < 1 || bits > 16) {
      throw contract_error("ADC resolution must lie in [1, 16] bits");
    }
    if (!(range > 0.0)) {
      throw contract_error("ADC range must be positive");
    }
  }
};

// Measured noise powers feeding the entropy bound. e_bound_factor scales
// sigma_E into the deterministic worst-case excursion e_max that the bound
// grants an adversary.
struct NoiseStats {
  double sigma_M_sq = 0.0;   // total measured variance, V^2
  double sigma_E_sq = 0.0;   // classical-only variance, V^2
  double sigma_Q_sq = 0.0;   // inferred quadrature variance, V^2
  double e_bound_factor = 5.0;

  double e_max() const { return e_bound_factor * std::sqrt(sigma_E_sq); }
};

// How the digitization penalty enters the quadrature variance. The default
// subtracts (delta / 12)^2 per stream; kNoisePower uses the classical
// quantization noise power delta^2 / 12 instead.
enum class QuantizationTerm {
  kTwelfthSquared,  // (delta / 12)^2, the default
  kNoisePower,      // delta^2 / 12
};

// Lower bound on the quadrature variance net of classical noise and the
// digitization penalty applied to both measured streams.
inline double sigma_q_squared(
    double sigma_m_sq, double sigma_e_sq, const AdcSpec& adc,
    QuantizationTerm term = QuantizationTerm::kTwelfthSquared) {
  adc.validate();
  if (!(sigma_m_sq > 0.0) || !(sigma_e_sq >= 0.0)) {
    throw calibration_error("noise variances must be positive");
  }
  if (sigma_m_sq <= sigma_e_sq) {
    throw calibration_error(
        "total variance does not exceed classical noise; no quadrature "
        "signal to extract from");
  }
  const double d = adc.delta();
  const double penalty = term == QuantizationTerm::kTwelfthSquared
                             ? (d / 12.0) * (d / 12.0)
                             : d * d / 12.0;
  const double result = sigma_m_sq - sigma_e_sq - 2.0 * penalty;
  if (!(result > 0.0)) {
    throw calibration_error("quadrature variance degenerates after the "
                            "digitization penalty");
  }
  return result;
}

struct GuessingCandidates {
  double c1;  // rail bin under the worst-case classical excursion
  double c2;  // central bin of the centered distribution
};

// The two candidate maxima of an adversary's guessing probability for one
// sample: the clipped rail bin with the classical noise pushed as far as
// e_max toward it, and the central bin when the excursion is small. The
// worst case is their maximum.
inline GuessingCandidates guessing_candidates(const NoiseStats& noise,
                                              const AdcSpec& adc) {
  adc.validate();
  if (!(noise.sigma_Q_sq > 0.0)) {
    throw calibration_error("quadrature variance must be positive");
  }
  const double d = adc.delta();
  const double sq = std::sqrt(noise.sigma_Q_sq);
  const double root2 = std::sqrt(2.0);
  GuessingCandidates c;
  c.c1 = 0.5 * (erf_local((noise.e_max() - adc.range + 1.5 * d) /
                          (root2 * sq)) +
                1.0);
  c.c2 = erf_local(d / (2.0 * root2 * sq));
  return c;
}

struct EntropyReport {
  double sigma_M_sq = 0.0;
  double sigma_E_sq = 0.0;
  double sigma_Q_sq = 0.0;
  double delta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double h_min_bits = 0.0;       // worst-case min entropy per sample
  bool safe = false;             // true when the central bin dominates
  double epsilon_log2 = 0.0;     // log2 of the hashing security parameter
  double extraction_ratio = 0.0; // output bits per input bit
};

// Worst-case min entropy of one digitized sample.
inline EntropyReport min_entropy(const NoiseStats& noise, const AdcSpec& adc) {
  const GuessingCandidates c = guessing_candidates(noise, adc);
  const double worst = std::max(c.c1, c.c2);
  if (!(worst > 0.0)) {
    throw calibration_error("guessing probability underflowed to zero");
  }
  EntropyReport r;
  r.sigma_M_sq = noise.sigma_M_sq;
  r.sigma_E_sq = noise.sigma_E_sq;
  r.sigma_Q_sq = noise.sigma_Q_sq;
  r.delta = adc.delta();
  r.c1 = c.c1;
  r.c2 = c.c2;
  r.h_min_bits = std::max(0.0, -std::log2(worst));
  r.safe = c.c1 <= c.c2;
  return r;
}

// log2 of the security parameter achieved by hashing k input bits carrying
// h_min bits of entropy per n-bit sample down to j output bits:
//   j = k * h_min / n - 2 * log2(1 / epsilon).
inline double security_parameter_log2(std::uint64_t out_bits,
                                      std::uint64_t in_bits, double h_min,
                                      unsigned sample_bits) {
  if (in_bits == 0 || sample_bits == 0) {
    throw contract_error("security parameter needs positive sizes");
  }
  const double budget = static_cast<double>(in_bits) * h_min /
                        static_cast<double>(sample_bits);
  return -(budget - static_cast<double>(out_bits)) / 2.0;
}

// Largest output length meeting a target security parameter, the inverse of
// security_parameter_log2. `epsilon_log2_target` is log2(epsilon), negative.
inline std::int64_t max_output_length(std::uint64_t in_bits, double h_min,
                                      unsigned sample_bits,
                                      double epsilon_log2_target) {
  if (in_bits == 0 || sample_bits == 0) {
    throw contract_error("output sizing needs positive sizes");
  }
  if (!(epsilon_log2_target < 0.0)) {
    throw contract_error("target security parameter must be below 1");
  }
  const double budget = static_cast<double>(in_bits) * h_min /
                        static_cast<double>(sample_bits);
  return static_cast<std::int64_t>(
      std::floor(budget + 2.0 * epsilon_log2_target));
}

// Completes a report with the hashing geometry.
inline EntropyReport entropy_report(const NoiseStats& noise,
                                    const AdcSpec& adc,
                                    std::uint64_t out_bits,
                                    std::uint64_t in_bits) {
  EntropyReport r = min_entropy(noise, adc);
  r.epsilon_log2 =
      security_parameter_log2(out_bits, in_bits, r.h_min_bits, adc.bits);
  r.extraction_ratio =
      static_cast<double>(out_bits) / static_cast<double>(in_bits);
  return r;
}

// Refuses extraction ratios that consume more entropy than the calibration
// promises. Callers may pass allow_unsafe = true to proceed anyway, which is
// meant for explicit operator override only.
inline void ensure_ratio_safe(std::uint64_t out_bits, std::uint64_t in_bits,
                              double h_min, unsigned sample_bits,
                              bool allow_unsafe = false) {
  const double ratio =
      static_cast<double>(out_bits) / static_cast<double>(in_bits);
  const double budget = h_min / static_cast<double>(sample_bits);
  if (ratio < budget) return;
  if (allow_unsafe) return;
  throw calibration_error(
      "extraction ratio " + std::to_string(ratio) +
      " is not below the per-bit entropy budget " + std::to_string(budget));
}

// Unbiased variance of digitized samples mapped back to volts around the
// mid-range code (2^n - 1) / 2. Integer moments keep the estimate exact
// before one final floating division.
inline double sample_variance(std::span<const std::uint16_t> codes,
                              const AdcSpec& adc) {
  adc.validate();
  if (codes.size() < 2) {
    throw calibration_error("variance needs at least two samples");
  }
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  for (const std::uint16_t c : codes) {
    sum += c;
    sum_sq += static_cast<std::uint64_t>(c) * c;
  }
  // n * sum(c^2) - sum(c)^2 = n * (n - 1) * unbiased code variance,
  // assembled in 128-bit so the cancellation happens on exact integers.
  const unsigned __int128 n128 = codes.size();
  const unsigned __int128 num = n128 * sum_sq -
                                static_cast<unsigned __int128>(sum) * sum;
  const long double n = static_cast<long double>(codes.size());
  const long double var_code = static_cast<long double>(num) / (n * (n - 1.0L));
  const double d = adc.delta();
  return static_cast<double>(var_code) * d * d;
}

}  // namespace vfrng

#endif  // VFRNG_ENTROPY_HPP
