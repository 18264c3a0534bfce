#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <asttf/experiment.hpp>
#include <asttf/framing.hpp>
#include <asttf/io.hpp>
#include <asttf/signal.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

using namespace asttf;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("asttf_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small, fast, fully explicit run used by the end-to-end cases.
ExperimentConfig small_config(const fs::path& out_dir) {
  ExperimentConfig c;
  c.input = "synthetic";
  c.sample_rate = 1024.0;
  c.length = 96;
  c.noise = {NoiseSpec::Kind::sigma, 0.3};
  c.seed = 3;
  c.frame_length = 16;
  c.hop = 8;
  c.window_sigma_ratio = 1.0 / 3.0;
  c.max_iters = 300;
  c.tol = 1e-3;
  c.oversample = 16;
  c.nfft = 32;
  c.dict_oversample = 2;
  c.l1_max_iters = 300;
  c.n_freq_bins = 32;
  c.output_dir = out_dir.string();
  return c;
}

}  // namespace

TEST_CASE("config text parsing") {
  SUBCASE("comments, blanks and spacing are tolerated") {
    ExperimentConfig c = parse_config_text(
        "# a comment\n"
        "\n"
        "  frame.length = 24 \n"
        "frame.hop=6\n"
        "noise.sigma = 0.25\n"
        "ast.tau=2.5\n"
        "frame.window_sigma_ratio=rect\n"
        "methods = ast , stft_l1\n");
    CHECK(c.frame_length == 24);
    CHECK(c.hop == 6);
    CHECK(c.noise.kind == NoiseSpec::Kind::sigma);
    CHECK(c.noise.value == 0.25);
    REQUIRE(c.tau.has_value());
    CHECK(*c.tau == 2.5);
    CHECK(c.window_sigma_ratio == kRectangularWindow);
    REQUIRE(c.methods.size() == 2);
    CHECK(c.methods[0] == "ast");
    CHECK(c.methods[1] == "stft_l1");
  }

  SUBCASE("auto restores the derived defaults") {
    ExperimentConfig c = parse_config_text("ast.tau=auto\nbaselines.lambda=auto\n");
    CHECK_FALSE(c.tau.has_value());
    CHECK_FALSE(c.lambda.has_value());
    CHECK(parse_config_text("noise=none\n").noise.kind == NoiseSpec::Kind::none);
  }

  SUBCASE("unknown keys are named") {
    CHECK_THROWS_WITH_AS(parse_config_text("bogus=1\n"),
                         "unknown config key 'bogus'", ConfigError);
  }

  SUBCASE("malformed lines carry their line number") {
    CHECK_THROWS_WITH_AS(parse_config_text("seed=1\n# ok\nnot a pair\n"),
                         "line 3: expected key=value", ConfigError);
  }

  SUBCASE("unparsable values name the key") {
    CHECK_THROWS_WITH_AS(parse_config_text("frame.length=abc\n"),
                         "frame.length: cannot parse integer 'abc'", ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("ast.tol=wat\n"),
                         "ast.tol: cannot parse number 'wat'", ConfigError);
  }

  SUBCASE("overlay changes only the mentioned keys") {
    ExperimentConfig c = preset_config("table1");
    const int frame_before = c.frame_length;
    apply_config_text(c, "ast.tau=9\n");
    CHECK(c.frame_length == frame_before);
    REQUIRE(c.tau.has_value());
    CHECK(*c.tau == 9.0);
  }
}

TEST_CASE("presets validate; unknown names do not") {
  for (const char* name : {"table1", "table2", "bat"}) {
    ExperimentConfig c = preset_config(name);
    CHECK_NOTHROW(validate_config(c));
  }
  CHECK_THROWS_WITH_AS(preset_config("table9"), "unknown preset 'table9'",
                       ConfigError);
}

TEST_CASE("validation names the offending field") {
  ExperimentConfig base = preset_config("table1");

  SUBCASE("tau is mandatory for noiseless ast runs") {
    ExperimentConfig c = base;
    c.tau.reset();
    CHECK_THROWS_WITH_AS(validate_config(c),
                         "ast.tau: explicit value required without noise",
                         ConfigError);
  }

  SUBCASE("frame geometry") {
    ExperimentConfig c = base;
    c.hop = c.frame_length + 1;
    CHECK_THROWS_WITH_AS(validate_config(c),
                         "frame.hop: must satisfy 1 <= hop <= frame.length",
                         ConfigError);
    c = base;
    c.window_sigma_ratio = -1.0;
    CHECK_THROWS_WITH_AS(validate_config(c),
                         "frame.window_sigma_ratio: must be positive or 'rect'",
                         ConfigError);
    c = base;
    c.nfft = c.frame_length - 1;
    CHECK_THROWS_WITH_AS(validate_config(c),
                         "baselines.nfft: must be >= frame.length", ConfigError);
  }

  SUBCASE("method list") {
    ExperimentConfig c = base;
    c.methods.clear();
    CHECK_THROWS_WITH_AS(validate_config(c), "methods: must not be empty",
                         ConfigError);
    c = base;
    c.methods = {"stft", "stft"};
    CHECK_THROWS_WITH_AS(validate_config(c), "methods: duplicate entry 'stft'",
                         ConfigError);
    c = base;
    c.methods = {"wavelets"};
    CHECK_THROWS_WITH_AS(validate_config(c), "methods: unknown method 'wavelets'",
                         ConfigError);
  }

  SUBCASE("missing input files are caught before running") {
    ExperimentConfig c = base;
    c.input = "/nonexistent/sig.csv";
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }
}

TEST_CASE("canonical serialization is a fixed point") {
  for (const char* name : {"table1", "table2", "bat"}) {
    const std::string text = config_to_text(preset_config(name));
    CHECK(config_to_text(parse_config_text(text)) == text);
  }
  // rect window and auto weights survive the round trip
  ExperimentConfig c;
  c.window_sigma_ratio = kRectangularWindow;
  c.tau.reset();
  c.lambda.reset();
  const std::string text = config_to_text(c);
  CHECK(config_to_text(parse_config_text(text)) == text);
}

TEST_CASE("signal files round-trip bit exactly") {
  fs::path dir = fresh_dir("signal_io");
  fs::path file = dir / "sig.csv";

  std::mt19937 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Signal s;
  s.sample_rate = 370370.37037037036;
  s.samples.resize(400);
  for (int i = 0; i < 400; ++i) s.samples[i] = gauss(rng);

  write_signal(file, s);
  Signal r = ingest_signal(file.string());
  CHECK(r.sample_rate == s.sample_rate);
  REQUIRE(r.samples.size() == s.samples.size());
  CHECK((r.samples.array() == s.samples.array()).all());

  SUBCASE("an explicit rate overrides the header") {
    Signal o = ingest_signal(file.string(), 48000.0);
    CHECK(o.sample_rate == 48000.0);
    CHECK((o.samples.array() == s.samples.array()).all());
  }

  SUBCASE("headerless files need an explicit rate") {
    fs::path bare = dir / "bare.csv";
    std::ofstream(bare) << "1.0\n2.0\n3.0\n";
    CHECK_THROWS_AS(ingest_signal(bare.string()), std::runtime_error);
    Signal b = ingest_signal(bare.string(), 10.0);
    CHECK(b.sample_rate == 10.0);
    REQUIRE(b.samples.size() == 3);
    CHECK(b.samples[2] == 3.0);
  }

  SUBCASE("parse errors carry 1-based line numbers") {
    fs::path bad = dir / "bad.csv";
    std::ofstream(bad) << "1.0\nnot a number\n";
    bool threw = false;
    try {
      ingest_signal(bad.string(), 10.0);
    } catch (const std::runtime_error& e) {
      threw = true;
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK(threw);

    fs::path empty = dir / "empty.csv";
    std::ofstream(empty).close();
    threw = false;
    try {
      ingest_signal(empty.string(), 10.0);
    } catch (const std::runtime_error& e) {
      threw = true;
      CHECK(std::string(e.what()).find(":1:") != std::string::npos);
    }
    CHECK(threw);
  }

  fs::remove_all(dir);
}

TEST_CASE("experiments write their artifact set") {
  fs::path dir = fresh_dir("artifacts");
  ExperimentConfig c = small_config(dir);
  RunReport report = run_experiment(c);
  REQUIRE(report.outcomes.size() == 4);
  CHECK(report.all_ok());

  for (const char* name :
       {"config_echo.txt", "report.csv", "tf_ast.csv", "sparse_ast.csv",
        "trace_ast.csv", "tf_stft.csv", "tf_reassign.csv", "tf_stft_l1.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / name), name);
  }

  // the echo file reproduces the canonical serialization
  CHECK(slurp(dir / "config_echo.txt") == config_to_text(c));

  // reconstruction errors exist exactly for the methods that resynthesize
  for (const MethodOutcome& o : report.outcomes) {
    const bool reconstructs =
        o.metrics.method == "ast" || o.metrics.method == "stft_l1";
    CHECK(o.metrics.rmse.has_value() == reconstructs);
    CHECK(std::isfinite(o.metrics.renyi_bits));
    if (o.metrics.method == "ast") CHECK(o.solver_iterations > 0);
  }

  fs::remove_all(dir);
}

TEST_CASE("repeat runs are byte-identical") {
  fs::path dir_a = fresh_dir("repeat_a");
  fs::path dir_b = fresh_dir("repeat_b");
  ExperimentConfig ca = small_config(dir_a);
  ca.methods = {"ast", "stft_l1"};
  ExperimentConfig cb = ca;
  cb.output_dir = dir_b.string();

  run_experiment(ca);
  run_experiment(cb);
  CHECK(slurp(dir_a / "report.csv") == slurp(dir_b / "report.csv"));
  CHECK(slurp(dir_a / "tf_ast.csv") == slurp(dir_b / "tf_ast.csv"));
  CHECK(slurp(dir_a / "sparse_ast.csv") == slurp(dir_b / "sparse_ast.csv"));

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("one failing method does not take down the run") {
  fs::path dir = fresh_dir("isolation");
  // occupy the stft output path with a directory so its write must fail
  fs::create_directories(dir / "tf_stft.csv");
  ExperimentConfig c = small_config(dir);
  c.methods = {"stft", "reassign"};
  RunReport report = run_experiment(c);
  REQUIRE(report.outcomes.size() == 2);
  CHECK_FALSE(report.outcomes[0].ok);
  CHECK_FALSE(report.outcomes[0].error.empty());
  CHECK(report.outcomes[1].ok);
  CHECK_FALSE(report.all_ok());
  CHECK(fs::exists(dir / "report.csv"));
  CHECK(fs::exists(dir / "tf_reassign.csv"));

  fs::remove_all(dir);
}

TEST_CASE("file-driven experiments read the signal they are given") {
  fs::path dir = fresh_dir("file_input");
  fs::path sig_file = dir / "input.csv";
  write_signal(sig_file, generate_bat_chirp(370370.37037037036, 400));

  ExperimentConfig c = small_config(dir / "out");
  c.input = sig_file.string();
  c.noise = {NoiseSpec::Kind::none, 0.0};
  c.tau = 0.6;
  c.lambda = 0.2;
  c.frame_length = 50;
  c.hop = 25;
  c.nfft = 64;
  c.n_freq_bins = 64;
  c.methods = {"ast", "stft"};
  RunReport report = run_experiment(c);
  CHECK(report.all_ok());

  fs::remove_all(dir);
}
