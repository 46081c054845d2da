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

#ifndef VFRNG_PIPELINE_HPP
#define VFRNG_PIPELINE_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>

#include "vfrng/entropy.hpp"
#include "vfrng/errors.hpp"
#include "vfrng/extractor.hpp"
#include "vfrng/homodyne.hpp"
#include "vfrng/randomness_tests.hpp"
#include "vfrng/rng.hpp"
#include "vfrng/toeplitz.hpp"

namespace vfrng {

// End-to-end run description: simulate, calibrate, gate, hash, validate.
// Every knob has a flat key=value spelling (see from_file) so a run can be
// captured in a small text file.
struct PipelineConfig {
  // acquisition
  std::uint64_t samples = 4'194'304;
  std::uint64_t calibration_samples = 0;  // 0 = same as samples
  std::uint64_t seed = 1;
  unsigned workers = 1;

  // analog front end
  double lo_power_mw = kDefaultSaturationMw;
  double sigma_e_sq = kDefaultElectronicNoiseVsq;
  double slope_linear = kDefaultQuantumSlopeVsqPerMw;
  double p_sat_mw = kDefaultSaturationMw;
  double slope_sat = kDefaultQuantumSlopeVsqPerMw / 2.0;
  double filter_cutoff = 0.0;

  // digitizer
  unsigned adc_bits = 12;
  double adc_range = 0.75;
  double sample_rate = 1e9;

  // hashing geometry
  std::uint64_t out_bits = 6144;   // j, bits emitted per chunk
  std::uint64_t in_bits = 12288;   // k, bits consumed per chunk
  std::uint64_t group_bits = 12;   // G, bits retired per clock step
  std::uint64_t blocks = 0;        // 0 = derive from the two rates
  double clock_rate = 125e6;
  double e_bound_factor = 5.0;
  QuantizationTerm quant_term = QuantizationTerm::kTwelfthSquared;
  bool allow_unsafe_ratio = false;

  // statistical validation
  std::uint64_t subsequence_bits = 1'000'000;
  std::uint64_t subsequence_count = 0;  // 0 = as many as the output allows
  std::uint64_t block_len = 20'000;
  std::uint64_t max_lag = 100;

  NoiseModel noise_model() const {
    NoiseModel m;
    m.sigma_E_sq = sigma_e_sq;
    m.lo_power_mw = lo_power_mw;
    m.slope_linear = slope_linear;
    m.p_sat_mw = p_sat_mw;
    m.slope_sat = slope_sat;
    m.filter_cutoff = filter_cutoff;
    m.rng_seed = seed;
    return m;
  }

  AdcSpec adc() const {
    AdcSpec a;
    a.bits = adc_bits;
    a.range = adc_range;
    a.sample_rate = sample_rate;
    return a;
  }

  ExtractorConfig extractor_config() const {
    if (blocks != 0) {
      ExtractorConfig c;
      c.chunk_out_bits = out_bits;
      c.chunk_in_bits = in_bits;
      c.group_bits = group_bits;
      c.sample_bits = adc_bits;
      c.block_count = blocks;
      c.validate();
      return c;
    }
    return ExtractorConfig::from_rates(
        out_bits, in_bits, adc_bits, group_bits,
        static_cast<std::uint64_t>(std::llround(sample_rate)),
        static_cast<std::uint64_t>(std::llround(clock_rate)));
  }

  void validate() const {
    if (samples == 0) throw config_error("samples must be positive");
    noise_model().validate();
    adc().validate();
    extractor_config();
    if (subsequence_bits == 0) {
      throw config_error("subsequence length must be positive");
    }
  }

  void apply(const std::string& key, const std::string& value);
  static PipelineConfig from_file(const std::string& path);
  static PipelineConfig from_file(const std::string& path,
                                  PipelineConfig base);
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& key,
                               const std::string& value) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty() || value.front() == '-') {
    throw config_error("key '" + key + "' needs an unsigned integer, got '" +
                       value + "'");
  }
  return v;
}

inline double parse_f64(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw config_error("key '" + key + "' needs a number, got '" + value +
                       "'");
  }
  return v;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw config_error("key '" + key + "' needs true or false, got '" + value +
                     "'");
}

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace detail

inline void PipelineConfig::apply(const std::string& key,
                                  const std::string& value) {
  using detail::parse_bool;
  using detail::parse_f64;
  using detail::parse_u64;
  if (key == "samples") samples = parse_u64(key, value);
  else if (key == "calibration_samples") calibration_samples = parse_u64(key, value);
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "workers") workers = static_cast<unsigned>(parse_u64(key, value));
  else if (key == "lo_power_mw") lo_power_mw = parse_f64(key, value);
  else if (key == "sigma_e_sq") sigma_e_sq = parse_f64(key, value);
  else if (key == "slope_linear") slope_linear = parse_f64(key, value);
  else if (key == "p_sat_mw") p_sat_mw = parse_f64(key, value);
  else if (key == "slope_sat") slope_sat = parse_f64(key, value);
  else if (key == "filter_cutoff") filter_cutoff = parse_f64(key, value);
  else if (key == "adc_bits") adc_bits = static_cast<unsigned>(parse_u64(key, value));
  else if (key == "adc_range") adc_range = parse_f64(key, value);
  else if (key == "sample_rate") sample_rate = parse_f64(key, value);
  else if (key == "out_bits") out_bits = parse_u64(key, value);
  else if (key == "in_bits") in_bits = parse_u64(key, value);
  else if (key == "group_bits") group_bits = parse_u64(key, value);
  else if (key == "blocks") blocks = parse_u64(key, value);
  else if (key == "clock_rate") clock_rate = parse_f64(key, value);
  else if (key == "e_bound_factor") e_bound_factor = parse_f64(key, value);
  else if (key == "quant_term") {
    if (value == "twelfth_squared") {
      quant_term = QuantizationTerm::kTwelfthSquared;
    } else if (value == "noise_power") {
      quant_term = QuantizationTerm::kNoisePower;
    } else {
      throw config_error(
          "quant_term must be twelfth_squared or noise_power, got '" + value +
          "'");
    }
  }
  else if (key == "allow_unsafe_ratio") allow_unsafe_ratio = parse_bool(key, value);
  else if (key == "subsequence_bits") subsequence_bits = parse_u64(key, value);
  else if (key == "subsequence_count") subsequence_count = parse_u64(key, value);
  else if (key == "block_len") block_len = parse_u64(key, value);
  else if (key == "max_lag") max_lag = parse_u64(key, value);
  else throw config_error("unknown configuration key '" + key + "'");
}

// Flat text format: one `key = value` per line, '#' starts a comment,
// blank lines ignored. Unknown keys are refused. Keys the file does not
// mention keep their values from `base`.
inline PipelineConfig PipelineConfig::from_file(const std::string& path,
                                                PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file " + path, 0);
  PipelineConfig cfg = base;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": expected key = value");
    }
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": expected key = value");
    }
    try {
      cfg.apply(key, value);
    } catch (const config_error& e) {
      throw config_error(path + ":" + std::to_string(lineno) + ": " +
                         e.what());
    }
  }
  return cfg;
}

inline PipelineConfig PipelineConfig::from_file(const std::string& path) {
  return from_file(path, PipelineConfig{});
}

struct PipelineResult {
  PipelineConfig config;
  RawSampleStream raw;              // digitized acquisition
  std::uint64_t calibration_samples = 0;
  EntropyReport entropy;
  std::optional<ToeplitzSeed> seed;
  StreamStats stream;
  BitVector output;
  TestReport tests;
};

namespace detail {

// Domain separation tags for the streams derived from the run seed.
inline constexpr std::uint64_t kDarkStreamTag = 0x00C0FFEE;
inline constexpr std::uint64_t kSeedStreamTag = 0x5EEDBEEF;

}  // namespace detail

// Full chain: simulate the digitized measurement, calibrate the noise model
// from a dark acquisition, bound the per-sample min entropy, refuse unsafe
// extraction ratios, hash, and validate the output. Deterministic in the
// run seed; worker count never changes any emitted bit.
inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  PipelineResult res;
  res.config = cfg;

  const NoiseModel model = cfg.noise_model();
  const AdcSpec adc = cfg.adc();
  res.raw = generate_raw(model, adc, cfg.samples, cfg.workers);

  NoiseModel dark = model;
  dark.rng_seed = derive_stream_seed(cfg.seed, detail::kDarkStreamTag);
  res.calibration_samples =
      cfg.calibration_samples != 0 ? cfg.calibration_samples : cfg.samples;
  const RawSampleStream classical =
      generate_raw(dark, adc, res.calibration_samples, cfg.workers, false);

  NoiseStats noise;
  noise.sigma_M_sq = sample_variance(res.raw.codes, adc);
  noise.sigma_E_sq = sample_variance(classical.codes, adc);
  noise.sigma_Q_sq = sigma_q_squared(noise.sigma_M_sq, noise.sigma_E_sq, adc,
                                     cfg.quant_term);
  noise.e_bound_factor = cfg.e_bound_factor;
  res.entropy = entropy_report(noise, adc, cfg.out_bits, cfg.in_bits);

  ensure_ratio_safe(cfg.out_bits, cfg.in_bits, res.entropy.h_min_bits,
                    cfg.adc_bits, cfg.allow_unsafe_ratio);

  Chacha20Source seed_source = Chacha20Source::from_seed(
      derive_stream_seed(cfg.seed, detail::kSeedStreamTag));
  res.seed.emplace(generate_seed(cfg.out_bits, cfg.in_bits, seed_source));

  const ExtractorConfig excfg = cfg.extractor_config();
  res.output = extract_samples(*res.seed, excfg, res.raw.codes, cfg.workers,
                               &res.stream);

  SuiteOptions opts;
  opts.subsequence_bits = cfg.subsequence_bits;
  opts.subsequence_count = cfg.subsequence_count;
  opts.block_len = static_cast<std::size_t>(cfg.block_len);
  opts.max_lag = static_cast<std::size_t>(cfg.max_lag);
  res.tests = run_suite(res.output, opts);
  return res;
}

}  // namespace vfrng

#endif  // VFRNG_PIPELINE_HPP
