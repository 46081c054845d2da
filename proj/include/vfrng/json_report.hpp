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

#ifndef VFRNG_JSON_REPORT_HPP
#define VFRNG_JSON_REPORT_HPP

#include <json.hpp>

#include "vfrng/entropy.hpp"
#include "vfrng/extractor.hpp"
#include "vfrng/pipeline.hpp"
#include "vfrng/randomness_tests.hpp"

namespace vfrng {

inline nlohmann::json to_json(const EntropyReport& r) {
  return nlohmann::json{
      {"sigma_M_sq", r.sigma_M_sq},
      {"sigma_E_sq", r.sigma_E_sq},
      {"sigma_Q_sq", r.sigma_Q_sq},
      {"delta", r.delta},
      {"c1", r.c1},
      {"c2", r.c2},
      {"h_min_bits", r.h_min_bits},
      {"safe", r.safe},
      {"epsilon_log2", r.epsilon_log2},
      {"extraction_ratio", r.extraction_ratio},
  };
}

inline nlohmann::json to_json(const TestReport& r) {
  nlohmann::json tests = nlohmann::json::object();
  for (const auto& [name, outcome] : r.tests) {
    tests[name] = nlohmann::json{
        {"p_values", outcome.p_values},
        {"final_p", outcome.final_p},
        {"pass", outcome.pass},
    };
  }
  return nlohmann::json{
      {"subsequence_bits", r.subsequence_bits},
      {"subsequence_count", r.subsequence_count},
      {"tests", tests},
      {"autocorrelation", r.autocorr},
      {"max_abs_autocorrelation", r.max_abs_autocorr},
      {"verdict", r.verdict},
  };
}

inline nlohmann::json to_json(const StreamStats& s) {
  return nlohmann::json{
      {"input_bits", s.input_bits},
      {"chunks", s.chunks},
      {"output_bits", s.output_bits},
      {"discarded_bits", s.discarded_bits},
  };
}

inline nlohmann::json to_json(const BenchReport& r) {
  return nlohmann::json{
      {"workers", r.workers},
      {"block_count", r.block_count},
      {"input_bits", r.input_bits},
      {"output_bits", r.output_bits},
      {"seconds", r.seconds},
      {"input_mbps", r.input_mbps},
      {"output_mbps", r.output_mbps},
      {"block_chunks", r.block_chunks},
  };
}

inline nlohmann::json to_json(const PipelineConfig& c) {
  return nlohmann::json{
      {"samples", c.samples},
      {"calibration_samples", c.calibration_samples},
      {"seed", c.seed},
      {"workers", c.workers},
      {"lo_power_mw", c.lo_power_mw},
      {"sigma_e_sq", c.sigma_e_sq},
      {"slope_linear", c.slope_linear},
      {"p_sat_mw", c.p_sat_mw},
      {"slope_sat", c.slope_sat},
      {"filter_cutoff", c.filter_cutoff},
      {"adc_bits", c.adc_bits},
      {"adc_range", c.adc_range},
      {"sample_rate", c.sample_rate},
      {"out_bits", c.out_bits},
      {"in_bits", c.in_bits},
      {"group_bits", c.group_bits},
      {"blocks", c.blocks},
      {"clock_rate", c.clock_rate},
      {"e_bound_factor", c.e_bound_factor},
      {"quant_term", c.quant_term == QuantizationTerm::kTwelfthSquared
                         ? "twelfth_squared"
                         : "noise_power"},
      {"allow_unsafe_ratio", c.allow_unsafe_ratio},
      {"subsequence_bits", c.subsequence_bits},
      {"subsequence_count", c.subsequence_count},
      {"block_len", c.block_len},
      {"max_lag", c.max_lag},
  };
}

// Deterministic run summary: everything needed to audit a run, nothing that
// varies between identical runs (no timings, no hostnames).
inline nlohmann::json summary_json(const PipelineResult& r) {
  nlohmann::json simulation{
      {"samples", r.raw.codes.size()},
      {"calibration_samples", r.calibration_samples},
      {"clip_count", r.raw.clip_count},
  };
  nlohmann::json extraction = to_json(r.stream);
  extraction["block_count"] = r.config.extractor_config().block_count;
  return nlohmann::json{
      {"config", to_json(r.config)},
      {"simulation", simulation},
      {"entropy", to_json(r.entropy)},
      {"extraction", extraction},
      {"tests", to_json(r.tests)},
  };
}

}  // namespace vfrng

#endif  // VFRNG_JSON_REPORT_HPP
