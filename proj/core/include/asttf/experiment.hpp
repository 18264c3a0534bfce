#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asttf/metrics.hpp"
#include "asttf/signal.hpp"

namespace asttf {

// Invalid or inconsistent configuration; the message names the offending
// field. Distinguished from runtime failures so the CLI can map it to its
// own exit code.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NoiseSpec {
  enum class Kind { none, sigma, snr_db };
  Kind kind = Kind::none;
  double value = 0.0;
};

// Flat key=value experiment description. Optional tau/lambda mean "derive
// from the configured noise level" (default_tau and default_tau/sqrt(L)).
struct ExperimentConfig {
  std::string input = "synthetic";  // synthetic | synthetic-bat | file path
  double sample_rate = 1024.0;
  bool sample_rate_set = false;  // explicit sample_rate overrides file headers
  int length = 1024;             // synthetic inputs only
  NoiseSpec noise;
  std::uint64_t seed = 1;

  int frame_length = 64;
  int hop = 32;
  double window_sigma_ratio = 1.0 / 6.0;  // infinity = rectangular

  std::optional<double> tau;  // absent = auto
  double rho = 1.0;
  bool adaptive_rho = false;
  int max_iters = 1000;
  double tol = 1e-4;
  int oversample = 64;
  double epsilon = 0.01;

  int nfft = 256;
  int dict_oversample = 4;
  std::optional<double> lambda;  // absent = auto
  int l1_max_iters = 3000;

  std::string output_dir = "out";
  std::vector<std::string> methods = {"ast", "stft", "reassign", "stft_l1"};
  int n_freq_bins = 256;
};

// Parse key=value text ('#' comments and blank lines ignored). Unknown keys
// and malformed values raise ConfigError naming the key.
ExperimentConfig parse_config_text(const std::string& text);

// Built-in experiment templates: "table1" (noiseless synthetic two-component
// signal), "table2" (same signal at 5 dB SNR), "bat" (short ultrasound-style
// chirp record).
ExperimentConfig preset_config(const std::string& name);

// Overlay the key=value lines of `text` onto an existing config.
void apply_config_text(ExperimentConfig& config, const std::string& text);

// Full consistency check; throws ConfigError naming the first bad field.
void validate_config(const ExperimentConfig& config);

// Canonical serialization (stable key order) used for the config echo file.
std::string config_to_text(const ExperimentConfig& config);

// Read a signal file (see io.hpp for the format). The header's sample rate is
// used unless an override is supplied; missing both is an error.
Signal ingest_signal(const std::string& path,
                     std::optional<double> sample_rate_override = std::nullopt);

struct MethodOutcome {
  MetricReport metrics;  // metrics.method holds the method name
  bool ok = false;
  std::string error;  // set when ok is false
  double wall_seconds = 0.0;
  bool solver_converged = false;  // AST only
  int solver_iterations = 0;      // AST only
};

struct RunReport {
  ExperimentConfig config;
  std::vector<MethodOutcome> outcomes;  // one per requested method, in order
  bool all_ok() const {
    for (const auto& o : outcomes)
      if (!o.ok) return false;
    return true;
  }
};

// Run the configured experiment end to end: build or ingest the signal, add
// noise, take the analytic signal, then run each requested method, writing
// per-method TF CSVs, the AST sparse/trace CSVs, report.csv and a config
// echo into output_dir. A method failure is recorded in its outcome and does
// not disturb the other methods. Deterministic for a given config and seed.
RunReport run_experiment(const ExperimentConfig& config);

}  // namespace asttf
