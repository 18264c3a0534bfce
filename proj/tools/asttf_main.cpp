// asttf: configuration-driven time-frequency analysis runner.
//
//   asttf run --preset table1 [--config file] [--out dir] [--seed n]
//   asttf generate --preset eq23 --out signal.txt [--sample-rate fs] ...
//   asttf analyze --input file --method ast [config-mirroring flags]
//
// Exit codes: 0 full success, 2 partial method failure, 1 config/IO error.

#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asttf/experiment.hpp"
#include "asttf/io.hpp"
#include "asttf/signal.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw asttf::ConfigError("cannot open config file '" + path + "'");
  std::string text;
  char buf[4096];
  size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
  std::fclose(f);
  return text;
}

void print_report(const asttf::RunReport& report) {
  std::printf("%-10s %12s %10s %9s  %s\n", "method", "renyi_bits", "rmse",
              "time_s", "status");
  for (const auto& o : report.outcomes) {
    char renyi[32], rmse[32];
    if (std::isfinite(o.metrics.renyi_bits))
      std::snprintf(renyi, sizeof renyi, "%.4f", o.metrics.renyi_bits);
    else
      std::snprintf(renyi, sizeof renyi, "-");
    if (o.metrics.rmse)
      std::snprintf(rmse, sizeof rmse, "%.4f", *o.metrics.rmse);
    else
      std::snprintf(rmse, sizeof rmse, "-");
    std::string status = o.ok ? "ok" : "FAILED: " + o.error;
    if (o.ok && o.metrics.method == "ast") {
      status += o.solver_converged ? " (converged, " : " (not converged, ";
      status += std::to_string(o.solver_iterations) + " iters)";
    }
    std::printf("%-10s %12s %10s %9.2f  %s\n", o.metrics.method.c_str(), renyi,
                rmse, o.wall_seconds, status.c_str());
  }
}

int run_and_report(const asttf::ExperimentConfig& config) {
  const asttf::RunReport report = asttf::run_experiment(config);
  print_report(report);
  std::printf("outputs written to %s\n", report.config.output_dir.c_str());
  return report.all_ok() ? 0 : 2;
}

// Shared by `analyze` so every config key has a flag counterpart.
struct ConfigFlags {
  std::optional<double> sample_rate, noise_sigma, noise_snr_db, rho, tol, epsilon;
  std::optional<int> length, frame_length, hop, max_iters, oversample, nfft,
      dict_oversample, l1_max_iters, n_freq_bins;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> window_sigma_ratio, tau, lambda, out, adaptive_rho;

  void attach(CLI::App* app) {
    app->add_option("--sample-rate", sample_rate, "Sample rate in Hz");
    app->add_option("--length", length, "Synthetic signal length in samples");
    app->add_option("--noise-sigma", noise_sigma, "Additive noise std dev");
    app->add_option("--noise-snr-db", noise_snr_db, "Noise level as target SNR");
    app->add_option("--seed", seed, "Noise RNG seed");
    app->add_option("--frame-length", frame_length, "Analysis window length L");
    app->add_option("--hop", hop, "Window hop H");
    app->add_option("--window-sigma-ratio", window_sigma_ratio,
                    "Gaussian window sigma as a fraction of L, or 'rect'");
    app->add_option("--tau", tau, "Atomic-norm weight, or 'auto'");
    app->add_option("--rho", rho, "ADMM penalty parameter");
    app->add_option("--adaptive-rho", adaptive_rho,
                    "Residual-balancing penalty adjustment (true/false)");
    app->add_option("--max-iters", max_iters, "ADMM iteration cap");
    app->add_option("--tol", tol, "ADMM residual tolerance");
    app->add_option("--oversample", oversample, "Dual polynomial grid factor");
    app->add_option("--epsilon", epsilon, "Support detection threshold margin");
    app->add_option("--nfft", nfft, "FFT length for STFT/reassignment");
    app->add_option("--dict-oversample", dict_oversample,
                    "Gridded dictionary oversampling factor");
    app->add_option("--lambda", lambda, "Sparse coding weight, or 'auto'");
    app->add_option("--l1-max-iters", l1_max_iters, "FISTA iteration cap");
    app->add_option("--out", out, "Output directory");
    app->add_option("--n-freq-bins", n_freq_bins, "Raster frequency bins");
  }

  // Overlay onto a config through the same text path as config files, so
  // flag values get identical parsing/validation.
  void apply(asttf::ExperimentConfig& c) const {
    std::string text;
    auto add = [&text](const std::string& key, const std::string& value) {
      text += key + "=" + value + "\n";
    };
    char buf[40];
    auto num = [&buf](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    if (sample_rate) add("sample_rate", num(*sample_rate));
    if (length) add("length", std::to_string(*length));
    if (noise_sigma) add("noise.sigma", num(*noise_sigma));
    if (noise_snr_db) add("noise.snr_db", num(*noise_snr_db));
    if (seed) add("seed", std::to_string(*seed));
    if (frame_length) add("frame.length", std::to_string(*frame_length));
    if (hop) add("frame.hop", std::to_string(*hop));
    if (window_sigma_ratio) add("frame.window_sigma_ratio", *window_sigma_ratio);
    if (tau) add("ast.tau", *tau);
    if (rho) add("ast.rho", num(*rho));
    if (adaptive_rho) add("ast.adaptive_rho", *adaptive_rho);
    if (max_iters) add("ast.max_iters", std::to_string(*max_iters));
    if (tol) add("ast.tol", num(*tol));
    if (oversample) add("ast.oversample", std::to_string(*oversample));
    if (epsilon) add("ast.epsilon", num(*epsilon));
    if (nfft) add("baselines.nfft", std::to_string(*nfft));
    if (dict_oversample)
      add("baselines.dict_oversample", std::to_string(*dict_oversample));
    if (lambda) add("baselines.lambda", *lambda);
    if (l1_max_iters) add("baselines.l1_max_iters", std::to_string(*l1_max_iters));
    if (out) add("output_dir", *out);
    if (n_freq_bins) add("n_freq_bins", std::to_string(*n_freq_bins));
    asttf::apply_config_text(c, text);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse time-frequency analysis toolkit"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "Run a configured experiment");
  std::string run_config, run_preset, run_out;
  std::optional<std::uint64_t> run_seed;
  run->add_option("--config", run_config, "key=value config file");
  run->add_option("--preset", run_preset, "Built-in preset: table1|table2|bat");
  run->add_option("--out", run_out, "Override output directory");
  run->add_option("--seed", run_seed, "Override noise RNG seed");

  // --- generate ---
  auto* gen = app.add_subcommand("generate", "Write a test signal file");
  std::string gen_preset, gen_out;
  std::optional<double> gen_fs, gen_sigma;
  std::optional<int> gen_length;
  std::uint64_t gen_seed = 1;
  gen->add_option("--preset", gen_preset,
                  "Signal: eq23 (two-component AM/FM) | bat (chirp pulses)")
      ->required();
  gen->add_option("--out", gen_out, "Output signal file")->required();
  gen->add_option("--sample-rate", gen_fs, "Sample rate in Hz");
  gen->add_option("--length", gen_length, "Length in samples");
  gen->add_option("--noise-sigma", gen_sigma, "Additive noise std dev");
  gen->add_option("--seed", gen_seed, "Noise RNG seed");

  // --- analyze ---
  auto* ana = app.add_subcommand("analyze", "Analyze one signal with one method");
  std::string ana_input, ana_method;
  ConfigFlags ana_flags;
  ana->add_option("--input", ana_input,
                  "Signal file, or 'synthetic' / 'synthetic-bat'")
      ->required();
  ana->add_option("--method", ana_method, "ast | stft | reassign | stft_l1")
      ->required();
  ana_flags.attach(ana);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (run_config.empty() && run_preset.empty())
        throw asttf::ConfigError("run: need --config and/or --preset");
      asttf::ExperimentConfig config;
      if (!run_preset.empty()) config = asttf::preset_config(run_preset);
      if (!run_config.empty())
        asttf::apply_config_text(config, read_file(run_config));
      if (!run_out.empty()) config.output_dir = run_out;
      if (run_seed) config.seed = *run_seed;
      return run_and_report(config);
    }

    if (gen->parsed()) {
      asttf::Signal s;
      if (gen_preset == "eq23") {
        s = asttf::generate_test_signal(gen_fs.value_or(1024.0),
                                        gen_length.value_or(1024));
      } else if (gen_preset == "bat") {
        s = asttf::generate_bat_chirp(gen_fs.value_or(370370.37037037036),
                                      gen_length.value_or(400));
      } else {
        throw asttf::ConfigError("generate: unknown preset '" + gen_preset + "'");
      }
      if (gen_sigma && *gen_sigma > 0.0)
        s = asttf::add_noise(s, *gen_sigma, gen_seed);
      asttf::write_signal(gen_out, s);
      std::printf("wrote %d samples at %.9g Hz to %s\n",
                  static_cast<int>(s.samples.size()), s.sample_rate,
                  gen_out.c_str());
      return 0;
    }

    // analyze
    asttf::ExperimentConfig config;
    config.input = ana_input;
    config.methods = {ana_method};
    ana_flags.apply(config);
    return run_and_report(config);
  } catch (const asttf::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
