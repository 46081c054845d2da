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

#ifndef VFRNG_HOMODYNE_HPP
#define VFRNG_HOMODYNE_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "vfrng/bit_vector.hpp"
#include "vfrng/entropy.hpp"
#include "vfrng/errors.hpp"
#include "vfrng/rng.hpp"
#include "vfrng/thread_pool.hpp"

namespace vfrng {

// Default calibration: electronic noise floor and the quadrature variance
// slope that reaches 3.16e-4 V^2 total at the 9.5 mW saturation knee.
inline constexpr double kDefaultElectronicNoiseVsq = 3.13e-5;
inline constexpr double kDefaultSaturationMw = 9.5;
inline constexpr double kDefaultQuantumSlopeVsqPerMw =
    (3.16e-4 - kDefaultElectronicNoiseVsq) / kDefaultSaturationMw;

// Measurement-chain model behind the simulated detector. The quadrature
// variance grows linearly with local oscillator power until the detector
// saturates, then continues at a reduced slope.
struct NoiseModel {
  double sigma_E_sq = kDefaultElectronicNoiseVsq;  // electronic noise, V^2
  double lo_power_mw = kDefaultSaturationMw;       // local oscillator drive
  double slope_linear = kDefaultQuantumSlopeVsqPerMw;  // V^2 per mW
  double p_sat_mw = kDefaultSaturationMw;          // knee position
  double slope_sat = kDefaultQuantumSlopeVsqPerMw / 2.0;  // V^2 per mW past knee
  double filter_cutoff = 0.0;  // one-pole low-pass, fraction of sample rate
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (!(sigma_E_sq >= 0.0) || !(lo_power_mw >= 0.0) ||
        !(slope_linear >= 0.0) || !(p_sat_mw > 0.0) || !(slope_sat >= 0.0)) {
      throw contract_error("noise model parameters must be non-negative");
    }
    if (!(filter_cutoff >= 0.0) || filter_cutoff >= 0.5) {
      throw contract_error("filter cutoff must lie in [0, 0.5)");
    }
  }
};

// Total measured variance at the configured drive power.
inline double lo_power_to_variance(const NoiseModel& model) {
  model.validate();
  const double linear_part = std::min(model.lo_power_mw, model.p_sat_mw);
  const double sat_part = std::max(0.0, model.lo_power_mw - model.p_sat_mw);
  return model.sigma_E_sq + model.slope_linear * linear_part +
         model.slope_sat * sat_part;
}

// Digitized acquisition plus the metadata needed to interpret it.
struct RawSampleStream {
  std::vector<std::uint16_t> codes;
  AdcSpec adc;
  std::uint64_t clip_count = 0;
};

namespace detail {

// Samples are produced in fixed 64 Ki sample slices, each from its own
// child seed, so any slice can be generated independently and the
// concatenation never depends on worker count.
inline constexpr std::uint64_t kSimSliceSamples = 1u << 16;

inline void fill_voltage_slice(std::uint64_t root_seed, std::uint64_t slice,
                               double sigma_q, double sigma_e,
                               std::span<double> out) {
  GaussianSampler gauss(derive_stream_seed(root_seed, slice));
  for (auto& v : out) {
    const double quadrature = sigma_q * gauss.next();
    const double electronic = sigma_e * gauss.next();
    v = quadrature + electronic;
  }
}

}  // namespace detail

// Simulates `count` digitized measurements. Two independent Gaussian
// components (quadrature plus electronic) are summed per sample, optionally
// low-pass filtered, then quantized mid-rise:
//   code = clamp(round(v / delta + (2^n - 1) / 2), 0, 2^n - 1)
// with round half away from zero. Values beyond the rails clamp and are
// counted. With include_quantum = false only the electronic component is
// produced, which is the detector-dark calibration stream.
inline RawSampleStream generate_raw(const NoiseModel& model,
                                    const AdcSpec& adc, std::uint64_t count,
                                    unsigned workers = 1,
                                    bool include_quantum = true) {
  model.validate();
  adc.validate();
  const double sigma_m_sq = lo_power_to_variance(model);
  const double sigma_q =
      include_quantum ? std::sqrt(sigma_m_sq - model.sigma_E_sq) : 0.0;
  const double sigma_e = std::sqrt(model.sigma_E_sq);

  RawSampleStream stream;
  stream.adc = adc;
  stream.codes.resize(count);

  const double d = adc.delta();
  const double mid =
      static_cast<double>((std::uint64_t{1} << adc.bits) - 1) / 2.0;
  const long long top = (std::int64_t{1} << adc.bits) - 1;

  const bool filtered = model.filter_cutoff > 0.0;
  const double pole =
      filtered ? std::exp(-2.0 * std::numbers::pi * model.filter_cutoff) : 0.0;
  const double gain = filtered ? std::sqrt(1.0 - pole * pole) : 1.0;

  ThreadPool pool(workers == 0 ? 1 : workers);
  const std::uint64_t slice_len = detail::kSimSliceSamples;
  const std::uint64_t wave_slices = 16;
  std::vector<double> wave(
      static_cast<std::size_t>(std::min<std::uint64_t>(
          count, wave_slices * slice_len)),
      0.0);

  double filter_state = 0.0;
  std::uint64_t produced = 0;
  std::uint64_t slice_base = 0;
  while (produced < count) {
    const std::uint64_t wave_len =
        std::min<std::uint64_t>(count - produced, wave_slices * slice_len);
    const std::uint64_t slices = (wave_len + slice_len - 1) / slice_len;
    pool.parallel_for(static_cast<std::size_t>(slices), [&](std::size_t s) {
      const std::uint64_t begin = s * slice_len;
      const std::uint64_t end =
          std::min<std::uint64_t>(begin + slice_len, wave_len);
      detail::fill_voltage_slice(
          model.rng_seed, slice_base + s, sigma_q, sigma_e,
          std::span<double>(wave.data() + begin,
                            static_cast<std::size_t>(end - begin)));
    });

    // Filtering and quantization stay sequential so the recursion state
    // crosses slice boundaries exactly as a single-threaded pass would.
    std::uint64_t clips = 0;
    for (std::uint64_t i = 0; i < wave_len; ++i) {
      double v = wave[static_cast<std::size_t>(i)];
      if (filtered) {
        filter_state = pole * filter_state + gain * v;
        v = filter_state;
      }
      const long long code = std::llround(v / d + mid);
      long long clamped = code;
      if (code < 0) {
        clamped = 0;
        ++clips;
      } else if (code > top) {
        clamped = top;
        ++clips;
      }
      stream.codes[static_cast<std::size_t>(produced + i)] =
          static_cast<std::uint16_t>(clamped);
    }
    stream.clip_count += clips;
    produced += wave_len;
    slice_base += slices;
  }
  return stream;
}

// Calibration acquisition with the signal path dark: electronic noise only.
inline RawSampleStream classical_only_stream(const NoiseModel& model,
                                             const AdcSpec& adc,
                                             std::uint64_t count,
                                             unsigned workers = 1) {
  return generate_raw(model, adc, count, workers, false);
}

// Expands digitized samples into the extractor's bit order: each sample
// contributes its low n bits, least significant first.
inline BitVector expand_raw_bits(std::span<const std::uint16_t> codes,
                                 unsigned sample_bits) {
  if (sample_bits < 1 || sample_bits > 16) {
    throw contract_error("sample width must lie in [1, 16]");
  }
  BitVector bits(codes.size() * sample_bits);
  auto words = bits.words();
  std::uint64_t pos = 0;
  const std::uint16_t mask =
      static_cast<std::uint16_t>((1u << sample_bits) - 1);
  for (const std::uint16_t c : codes) {
    const std::uint64_t v = c & mask;
    words[pos >> 6] |= v << (pos & 63);
    if ((pos & 63) + sample_bits > 64) {
      words[(pos >> 6) + 1] |= v >> (64 - (pos & 63));
    }
    pos += sample_bits;
  }
  return bits;
}

}  // namespace vfrng

#endif  // VFRNG_HOMODYNE_HPP
