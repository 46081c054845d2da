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
// Command line front end. Artifact-producing subcommands (simulate,
// extract, seedgen) write their data file to --out and a JSON summary to
// stdout; report-producing subcommands (entropy, test, pipeline, bench)
// write the JSON report to stdout or to --out when given.
//
// Exit codes: 0 success, 2 configuration or contract violation,
// 3 calibration refused extraction as unsafe, 4 statistical verdict failed,
// 5 I/O failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "vfrng/entropy.hpp"
#include "vfrng/extractor.hpp"
#include "vfrng/homodyne.hpp"
#include "vfrng/io.hpp"
#include "vfrng/json_report.hpp"
#include "vfrng/pipeline.hpp"
#include "vfrng/randomness_tests.hpp"
#include "vfrng/rng.hpp"
#include "vfrng/toeplitz.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitUnsafe = 3;
constexpr int kExitVerdict = 4;
constexpr int kExitIo = 5;

unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// The config file must be loaded before CLI11 binds flag defaults, so the
// --config value is picked out of argv ahead of the real parse.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

void emit_json(const nlohmann::json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) throw vfrng::io_error("cannot open " + out_path + " for writing");
  out << text;
  if (!out) throw vfrng::io_error("short write to " + out_path);
}

struct EntropyFlags {
  std::string raw_path;
  std::string dark_path;
  std::string out_path;
  double epsilon_log2 = 0.0;
  CLI::Option* epsilon_opt = nullptr;
};

struct ExtractFlags {
  std::string raw_path;
  std::string seed_path;
  std::string dark_path;
  std::string bits_path;
  double h_min = 0.0;
  CLI::Option* h_min_opt = nullptr;
  CLI::Option* j_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* group_opt = nullptr;
  CLI::Option* blocks_opt = nullptr;
};

struct TestFlags {
  std::string bits_path;
  std::string out_path;
};

struct PipelineFlags {
  std::string out_path;
  std::string raw_out;
  std::string seed_out;
  std::string bits_out;
};

struct BenchFlags {
  std::uint64_t input_bits = std::uint64_t{1} << 28;
  unsigned sample_bits = 12;
  std::string out_path;
  CLI::Option* blocks_opt = nullptr;
};

struct SeedgenFlags {
  std::string out_path;
  CLI::Option* seed_opt = nullptr;
};

int cmd_simulate(const vfrng::PipelineConfig& cfg, const std::string& out) {
  const auto stream =
      vfrng::generate_raw(cfg.noise_model(), cfg.adc(), cfg.samples,
                          cfg.workers);
  vfrng::write_raw_file(out, stream);
  emit_json(
      nlohmann::json{
          {"path", out},
          {"samples", stream.codes.size()},
          {"clip_count", stream.clip_count},
          {"variance_vsq", vfrng::sample_variance(stream.codes, stream.adc)},
          {"adc_bits", stream.adc.bits},
          {"adc_range", stream.adc.range},
      },
      "");
  return kExitOk;
}

int cmd_entropy(const vfrng::PipelineConfig& cfg, const EntropyFlags& flags) {
  const auto bright = vfrng::read_raw_file(flags.raw_path);
  const auto dark = vfrng::read_raw_file(flags.dark_path);
  if (bright.adc.bits != dark.adc.bits ||
      bright.adc.range != dark.adc.range) {
    throw vfrng::config_error("raw and dark files disagree on the quantizer");
  }

  vfrng::NoiseStats noise;
  noise.sigma_M_sq = vfrng::sample_variance(bright.codes, bright.adc);
  noise.sigma_E_sq = vfrng::sample_variance(dark.codes, bright.adc);
  noise.sigma_Q_sq = vfrng::sigma_q_squared(noise.sigma_M_sq,
                                            noise.sigma_E_sq, bright.adc,
                                            cfg.quant_term);
  noise.e_bound_factor = cfg.e_bound_factor;
  const auto report =
      vfrng::entropy_report(noise, bright.adc, cfg.out_bits, cfg.in_bits);

  nlohmann::json j = vfrng::to_json(report);
  j["out_bits"] = cfg.out_bits;
  j["in_bits"] = cfg.in_bits;
  if (flags.epsilon_opt->count() > 0) {
    j["target_epsilon_log2"] = flags.epsilon_log2;
    j["max_out_bits"] = vfrng::max_output_length(
        cfg.in_bits, report.h_min_bits, bright.adc.bits, flags.epsilon_log2);
  }
  emit_json(j, flags.out_path);
  if (!report.safe) {
    std::cerr << "calibration is unsafe: the clipped rail bin dominates the "
                 "guessing probability\n";
    return kExitUnsafe;
  }
  return kExitOk;
}

int cmd_extract(const vfrng::PipelineConfig& cfg, const ExtractFlags& flags) {
  const auto raw = vfrng::read_raw_file(flags.raw_path);
  const auto seed = vfrng::read_seed_file(flags.seed_path);

  const bool j_given =
      flags.j_opt->count() > 0 || flags.k_opt->count() > 0;
  if (j_given &&
      (seed.rows() != cfg.out_bits || seed.cols() != cfg.in_bits)) {
    throw vfrng::config_error(
        "seed file geometry " + std::to_string(seed.rows()) + "x" +
        std::to_string(seed.cols()) + " does not match the requested " +
        std::to_string(cfg.out_bits) + "x" + std::to_string(cfg.in_bits));
  }

  vfrng::ExtractorConfig xc;
  const std::uint64_t group = flags.group_opt->count() > 0
                                  ? cfg.group_bits
                                  : raw.adc.bits;
  if (flags.blocks_opt->count() > 0 && cfg.blocks != 0) {
    xc.chunk_out_bits = seed.rows();
    xc.chunk_in_bits = seed.cols();
    xc.group_bits = group;
    xc.sample_bits = raw.adc.bits;
    xc.block_count = cfg.blocks;
    xc.validate();
  } else {
    xc = vfrng::ExtractorConfig::from_rates(
        seed.rows(), seed.cols(), raw.adc.bits, group,
        static_cast<std::uint64_t>(std::llround(cfg.sample_rate)),
        static_cast<std::uint64_t>(std::llround(cfg.clock_rate)));
  }

  if (!cfg.allow_unsafe_ratio) {
    double h_min = 0.0;
    if (flags.h_min_opt->count() > 0) {
      h_min = flags.h_min;
    } else if (!flags.dark_path.empty()) {
      const auto dark = vfrng::read_raw_file(flags.dark_path);
      vfrng::NoiseStats noise;
      noise.sigma_M_sq = vfrng::sample_variance(raw.codes, raw.adc);
      noise.sigma_E_sq = vfrng::sample_variance(dark.codes, raw.adc);
      noise.sigma_Q_sq = vfrng::sigma_q_squared(
          noise.sigma_M_sq, noise.sigma_E_sq, raw.adc, cfg.quant_term);
      noise.e_bound_factor = cfg.e_bound_factor;
      h_min = vfrng::min_entropy(noise, raw.adc).h_min_bits;
    } else {
      throw vfrng::config_error(
          "the extraction gate needs --h-min or --dark, or "
          "--unsafe-ratio-override to skip it");
    }
    vfrng::ensure_ratio_safe(seed.rows(), seed.cols(), h_min, raw.adc.bits);
  }

  vfrng::StreamStats stats;
  const vfrng::BitVector out =
      vfrng::extract_samples(seed, xc, raw.codes, cfg.workers, &stats);
  vfrng::write_bits_file(flags.bits_path, out);

  nlohmann::json j = vfrng::to_json(stats);
  j["path"] = flags.bits_path;
  j["block_count"] = xc.block_count;
  j["workers"] = cfg.workers;
  j["unsafe_override"] = cfg.allow_unsafe_ratio;
  emit_json(j, "");
  return kExitOk;
}

int cmd_test(const vfrng::PipelineConfig& cfg, const TestFlags& flags) {
  const vfrng::BitVector bits = vfrng::read_bits_file(flags.bits_path);
  vfrng::SuiteOptions opts;
  opts.subsequence_bits = cfg.subsequence_bits;
  opts.subsequence_count = cfg.subsequence_count;
  opts.block_len = static_cast<std::size_t>(cfg.block_len);
  opts.max_lag = static_cast<std::size_t>(cfg.max_lag);
  const auto report = vfrng::run_suite(bits, opts);
  emit_json(vfrng::to_json(report), flags.out_path);
  return report.verdict ? kExitOk : kExitVerdict;
}

int cmd_pipeline(const vfrng::PipelineConfig& cfg,
                 const PipelineFlags& flags) {
  vfrng::PipelineResult res;
  const auto start = std::chrono::steady_clock::now();
  try {
    res = vfrng::run_pipeline(cfg);
  } catch (const vfrng::calibration_error& e) {
    std::cerr << "pipeline aborted at the entropy stage: " << e.what()
              << "\n";
    return kExitUnsafe;
  } catch (const vfrng::config_error& e) {
    std::cerr << "pipeline aborted at the configuration stage: " << e.what()
              << "\n";
    return kExitConfig;
  } catch (const vfrng::contract_error& e) {
    std::cerr << "pipeline aborted at the validation stage: " << e.what()
              << "\n";
    return kExitConfig;
  }
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  std::cerr << "pipeline completed in " << elapsed.count() << " s\n";

  if (!flags.raw_out.empty()) vfrng::write_raw_file(flags.raw_out, res.raw);
  if (!flags.seed_out.empty()) {
    vfrng::write_seed_file(flags.seed_out, *res.seed);
  }
  if (!flags.bits_out.empty()) {
    vfrng::write_bits_file(flags.bits_out, res.output);
  }
  emit_json(vfrng::summary_json(res), flags.out_path);
  return res.tests.verdict ? kExitOk : kExitVerdict;
}

int cmd_bench(const vfrng::PipelineConfig& cfg, const BenchFlags& flags) {
  vfrng::ExtractorConfig xc;
  if (flags.blocks_opt->count() > 0 && cfg.blocks != 0) {
    xc.chunk_out_bits = cfg.out_bits;
    xc.chunk_in_bits = cfg.in_bits;
    xc.group_bits = cfg.group_bits;
    xc.sample_bits = flags.sample_bits;
    xc.block_count = cfg.blocks;
    xc.validate();
  } else {
    xc = vfrng::ExtractorConfig::from_rates(
        cfg.out_bits, cfg.in_bits, flags.sample_bits, cfg.group_bits,
        static_cast<std::uint64_t>(std::llround(cfg.sample_rate)),
        static_cast<std::uint64_t>(std::llround(cfg.clock_rate)));
  }
  vfrng::Chacha20Source source = vfrng::Chacha20Source::from_seed(cfg.seed);
  const auto seed =
      vfrng::generate_seed(cfg.out_bits, cfg.in_bits, source);
  const auto report = vfrng::throughput_benchmark(seed, xc, flags.input_bits,
                                                  cfg.workers);
  emit_json(vfrng::to_json(report), flags.out_path);
  return kExitOk;
}

int cmd_seedgen(const vfrng::PipelineConfig& cfg, const SeedgenFlags& flags) {
  const bool deterministic = flags.seed_opt->count() > 0;
  std::uint64_t seed_value = cfg.seed;
  if (!deterministic) {
    std::random_device rd;
    seed_value = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }
  vfrng::Chacha20Source source = vfrng::Chacha20Source::from_seed(seed_value);
  const auto seed = vfrng::generate_seed(cfg.out_bits, cfg.in_bits, source);
  vfrng::write_seed_file(flags.out_path, seed);
  emit_json(
      nlohmann::json{
          {"path", flags.out_path},
          {"out_bits", seed.rows()},
          {"in_bits", seed.cols()},
          {"seed_bits", seed.bits().size()},
          {"deterministic", deterministic},
      },
      "");
  return kExitOk;
}

void attach_acquisition(CLI::App* app, vfrng::PipelineConfig& cfg) {
  app->add_option("--samples", cfg.samples, "Samples to acquire");
  app->add_option("--calibration-samples", cfg.calibration_samples,
                  "Dark samples for calibration (0 = same as --samples)");
  app->add_option("--seed", cfg.seed, "Run seed, fixes every stream");
  app->add_option("--workers", cfg.workers,
                  "Worker threads (default: machine parallelism)");
}

void attach_frontend(CLI::App* app, vfrng::PipelineConfig& cfg) {
  app->add_option("--lo-power-mw", cfg.lo_power_mw,
                  "Local oscillator power, mW");
  app->add_option("--sigma-e-sq", cfg.sigma_e_sq,
                  "Electronic noise variance, V^2");
  app->add_option("--slope-linear", cfg.slope_linear,
                  "Variance slope below saturation, V^2/mW");
  app->add_option("--p-sat-mw", cfg.p_sat_mw, "Saturation knee, mW");
  app->add_option("--slope-sat", cfg.slope_sat,
                  "Variance slope past saturation, V^2/mW");
  app->add_option("--filter-cutoff", cfg.filter_cutoff,
                  "One-pole low-pass cutoff as a fraction of the sample rate");
  app->add_option("--adc-bits", cfg.adc_bits, "Digitizer resolution, bits");
  app->add_option("--adc-range", cfg.adc_range, "Digitizer half range, V");
  app->add_option("--sample-rate", cfg.sample_rate, "Samples per second");
}

void attach_entropy_opts(CLI::App* app, vfrng::PipelineConfig& cfg,
                         std::string& quant_term) {
  app->add_option("--e-bound-factor", cfg.e_bound_factor,
                  "Worst-case classical excursion, sigma_E units");
  app->add_option("--quant-term", quant_term,
                  "Digitization penalty form: twelfth_squared or noise_power");
}

void attach_geometry(CLI::App* app, vfrng::PipelineConfig& cfg,
                     CLI::Option** blocks_opt = nullptr,
                     CLI::Option** group_opt = nullptr) {
  app->add_option("--j", cfg.out_bits, "Output bits per hashing chunk");
  app->add_option("--k", cfg.in_bits, "Input bits per hashing chunk");
  CLI::Option* g =
      app->add_option("--g", cfg.group_bits, "Input bits retired per step");
  CLI::Option* b = app->add_option(
      "--blocks", cfg.blocks,
      "Calculation blocks (0 = derive from the rate pair)");
  app->add_option("--clock-rate", cfg.clock_rate,
                  "Calculation block clock, steps per second");
  if (blocks_opt != nullptr) *blocks_opt = b;
  if (group_opt != nullptr) *group_opt = g;
}

void attach_test_opts(CLI::App* app, vfrng::PipelineConfig& cfg) {
  app->add_option("--subseq-bits", cfg.subsequence_bits,
                  "Bits per test subsequence");
  app->add_option("--subseq-count", cfg.subsequence_count,
                  "Subsequences to test (0 = as many as available)");
  app->add_option("--block-len", cfg.block_len,
                  "Block frequency test block length, bits");
  app->add_option("--max-lag", cfg.max_lag, "Autocorrelation lags to report");
}

}  // namespace

int main(int argc, char** argv) {
  vfrng::PipelineConfig cfg;
  cfg.workers = default_workers();
  const std::string config_path = prescan_config_path(argc, argv);

  try {
    if (!config_path.empty()) {
      cfg = vfrng::PipelineConfig::from_file(config_path, cfg);
    }
  } catch (const vfrng::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const vfrng::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{
      "Software pipeline of a vacuum-fluctuation quantum random number "
      "generator: simulated homodyne sampling, min-entropy calibration, "
      "Toeplitz-hashing extraction, and statistical validation."};
  app.require_subcommand(1);
  std::string config_dummy;
  app.add_option("--config", config_dummy,
                 "Key=value config file applied before other flags")
      ->configurable(false);

  std::string quant_term;
  std::string sim_out;
  EntropyFlags entropy_flags;
  ExtractFlags extract_flags;
  TestFlags test_flags;
  PipelineFlags pipeline_flags;
  BenchFlags bench_flags;
  SeedgenFlags seedgen_flags;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Write a digitized acquisition to a raw sample file");
  attach_acquisition(sim, cfg);
  attach_frontend(sim, cfg);
  sim->add_option("--config", config_dummy, "Config file");
  sim->add_option("--out", sim_out, "Raw sample file to write")->required();

  CLI::App* ent = app.add_subcommand(
      "entropy",
      "Bound the per-sample min entropy from bright and dark raw files");
  ent->add_option("--raw", entropy_flags.raw_path, "Bright raw sample file")
      ->required();
  ent->add_option("--dark", entropy_flags.dark_path,
                  "Classical-only raw sample file")
      ->required();
  ent->add_option("--j", cfg.out_bits, "Output bits per hashing chunk");
  ent->add_option("--k", cfg.in_bits, "Input bits per hashing chunk");
  attach_entropy_opts(ent, cfg, quant_term);
  entropy_flags.epsilon_opt = ent->add_option(
      "--epsilon-log2,--epsilon", entropy_flags.epsilon_log2,
      "Target log2(epsilon); adds the largest safe output length");
  ent->add_option("--config", config_dummy, "Config file");
  ent->add_option("--out", entropy_flags.out_path,
                  "Report file (default: stdout)");

  CLI::App* ext = app.add_subcommand(
      "extract", "Hash a raw sample file through a seeded Toeplitz matrix");
  ext->add_option("--raw", extract_flags.raw_path, "Raw sample file")
      ->required();
  ext->add_option("--seed-file", extract_flags.seed_path,
                  "Toeplitz seed file")
      ->required();
  ext->add_option("--out", extract_flags.bits_path,
                  "Packed output bits file")
      ->required();
  extract_flags.j_opt = ext->add_option(
      "--j", cfg.out_bits, "Expected output bits per chunk (cross-check)");
  extract_flags.k_opt = ext->add_option(
      "--k", cfg.in_bits, "Expected input bits per chunk (cross-check)");
  extract_flags.group_opt = ext->add_option(
      "--g", cfg.group_bits,
      "Input bits retired per step (default: the sample width)");
  extract_flags.blocks_opt = ext->add_option(
      "--blocks", cfg.blocks,
      "Calculation blocks (0 = derive from the rate pair)");
  ext->add_option("--clock-rate", cfg.clock_rate,
                  "Calculation block clock, steps per second");
  ext->add_option("--sample-rate", cfg.sample_rate, "Samples per second");
  ext->add_option("--workers", cfg.workers, "Worker threads");
  extract_flags.h_min_opt = ext->add_option(
      "--h-min", extract_flags.h_min,
      "Calibrated min entropy per sample, bits, for the ratio gate");
  ext->add_option("--dark", extract_flags.dark_path,
                  "Classical-only raw file to calibrate the gate from");
  attach_entropy_opts(ext, cfg, quant_term);
  ext->add_flag("--unsafe-ratio-override", cfg.allow_unsafe_ratio,
                "Extract even when the ratio exceeds the entropy budget");
  ext->add_option("--config", config_dummy, "Config file");

  CLI::App* tst = app.add_subcommand(
      "test", "Run the statistical suite over a packed bits file");
  tst->add_option("--bits", test_flags.bits_path, "Packed bits file")
      ->required();
  attach_test_opts(tst, cfg);
  tst->add_option("--config", config_dummy, "Config file");
  tst->add_option("--out", test_flags.out_path,
                  "Report file (default: stdout)");

  CLI::App* pipe = app.add_subcommand(
      "pipeline",
      "Full chain: simulate, calibrate, gate, hash, validate, report");
  attach_acquisition(pipe, cfg);
  attach_frontend(pipe, cfg);
  attach_geometry(pipe, cfg);
  attach_entropy_opts(pipe, cfg, quant_term);
  attach_test_opts(pipe, cfg);
  pipe->add_flag("--unsafe-ratio-override", cfg.allow_unsafe_ratio,
                 "Proceed past the entropy budget gate");
  pipe->add_option("--config", config_dummy, "Config file");
  pipe->add_option("--out", pipeline_flags.out_path,
                   "Summary file (default: stdout)");
  pipe->add_option("--raw-out", pipeline_flags.raw_out,
                   "Also write the raw acquisition here");
  pipe->add_option("--seed-out", pipeline_flags.seed_out,
                   "Also write the Toeplitz seed here");
  pipe->add_option("--bits-out", pipeline_flags.bits_out,
                   "Also write the extracted bits here");

  CLI::App* bench = app.add_subcommand(
      "bench", "Measure extractor throughput on synthetic input");
  attach_geometry(bench, cfg, &bench_flags.blocks_opt);
  bench->add_option("--sample-rate", cfg.sample_rate, "Samples per second");
  bench->add_option("--sample-bits", bench_flags.sample_bits,
                    "Bits per raw sample");
  bench->add_option("--workers", cfg.workers, "Worker threads");
  bench->add_option("--seed", cfg.seed, "Seed for the hashing matrix");
  bench->add_option("--input-bits", bench_flags.input_bits,
                    "Synthetic input size, bits");
  bench->add_option("--config", config_dummy, "Config file");
  bench->add_option("--out", bench_flags.out_path,
                    "Report file (default: stdout)");

  CLI::App* gen = app.add_subcommand(
      "seedgen", "Write a fresh Toeplitz seed file");
  gen->add_option("--j", cfg.out_bits, "Output bits per hashing chunk");
  gen->add_option("--k", cfg.in_bits, "Input bits per hashing chunk");
  seedgen_flags.seed_opt = gen->add_option(
      "--seed", cfg.seed,
      "Derive the seed deterministically from this value");
  gen->add_option("--out", seedgen_flags.out_path, "Seed file to write")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!quant_term.empty()) cfg.apply("quant_term", quant_term);
    if (sim->parsed()) return cmd_simulate(cfg, sim_out);
    if (ent->parsed()) return cmd_entropy(cfg, entropy_flags);
    if (ext->parsed()) return cmd_extract(cfg, extract_flags);
    if (tst->parsed()) return cmd_test(cfg, test_flags);
    if (pipe->parsed()) return cmd_pipeline(cfg, pipeline_flags);
    if (bench->parsed()) return cmd_bench(cfg, bench_flags);
    if (gen->parsed()) return cmd_seedgen(cfg, seedgen_flags);
  } catch (const vfrng::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const vfrng::contract_error& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kExitConfig;
  } catch (const vfrng::calibration_error& e) {
    std::cerr << "calibration refused: " << e.what() << "\n";
    return kExitUnsafe;
  } catch (const vfrng::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const vfrng::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
