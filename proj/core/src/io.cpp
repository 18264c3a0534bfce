#include "asttf/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace asttf {

namespace {

// Fixed-width-free formatting helpers; snprintf with %g is locale-independent
// for the "C" locale the library assumes.
std::string fmt(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string fmt17(double v) { return fmt(v, 17); }
std::string fmt9(double v) { return fmt(v, 9); }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void write_row(std::ofstream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << fmt9(v[i]);
  }
  out << '\n';
}

}  // namespace

void write_signal(const std::filesystem::path& path, const Signal& s) {
  std::ofstream out = open_out(path);
  out << "# sample_rate=" << fmt17(s.sample_rate) << '\n';
  for (Eigen::Index i = 0; i < s.samples.size(); ++i)
    out << fmt17(s.samples[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Signal read_signal(const std::filesystem::path& path,
                   std::optional<double> sample_rate_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open signal file: " + path.string());

  Signal s;
  std::vector<double> samples;
  std::string line;
  int lineno = 0;
  bool have_rate = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# sample_rate=";
      if (line.rfind(key, 0) == 0) {
        char* end = nullptr;
        const double rate = std::strtod(line.c_str() + key.size(), &end);
        if (end == line.c_str() + key.size() || rate <= 0.0)
          throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                   ": bad sample_rate header");
        s.sample_rate = rate;
        have_rate = true;
      }
      continue;
    }
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == line.c_str() || (end && *end != '\0'))
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": cannot parse sample");
    samples.push_back(v);
  }
  if (samples.empty())
    throw std::runtime_error(path.string() + ":1: empty signal file");
  if (sample_rate_override) {
    s.sample_rate = *sample_rate_override;
  } else if (!have_rate) {
    throw std::runtime_error(path.string() +
                             ": no sample_rate header and no override given");
  }
  s.samples = Eigen::Map<const Eigen::VectorXd>(samples.data(),
                                                static_cast<Eigen::Index>(samples.size()));
  return s;
}

void write_tf_csv(const std::filesystem::path& path, const Eigen::VectorXd& time_axis,
                  const Eigen::VectorXd& freq_axis, const Eigen::MatrixXd& values) {
  if (values.rows() != time_axis.size() || values.cols() != freq_axis.size())
    throw std::invalid_argument("write_tf_csv: axis/raster shape mismatch");
  std::ofstream out = open_out(path);
  out << "time_axis\n";
  write_row(out, time_axis);
  out << "freq_axis\n";
  write_row(out, freq_axis);
  for (Eigen::Index r = 0; r < values.rows(); ++r) write_row(out, values.row(r));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_tf_csv(const std::filesystem::path& path, const TfMatrix& tf) {
  write_tf_csv(path, tf.time_axis, tf.freq_axis, tf.values);
}

void write_tf_csv(const std::filesystem::path& path, const TfDistribution& tfd) {
  write_tf_csv(path, tfd.time_axis, tfd.freq_axis, tfd.raster);
}

void write_sparse_csv(const std::filesystem::path& path, const TfDistribution& tfd) {
  std::ofstream out = open_out(path);
  out << "window,time_s,freq_hz,magnitude,certificate\n";
  for (const SparseTfPoint& p : tfd.sparse)
    out << p.window << ',' << fmt9(p.time_s) << ',' << fmt9(p.freq_hz) << ','
        << fmt9(p.magnitude) << ',' << fmt9(p.certificate) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_report_csv(const std::filesystem::path& path,
                      const std::vector<MetricReport>& rows) {
  std::ofstream out = open_out(path);
  out << "method,renyi_bits,rmse\n";
  for (const MetricReport& r : rows) {
    out << r.method << ',';
    if (std::isfinite(r.renyi_bits)) out << fmt9(r.renyi_bits);
    out << ',';
    if (r.rmse) out << fmt9(*r.rmse);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<double>& objective,
                     const std::vector<double>& primal,
                     const std::vector<double>& dual) {
  if (objective.size() != primal.size() || primal.size() != dual.size())
    throw std::invalid_argument("write_trace_csv: trace length mismatch");
  std::ofstream out = open_out(path);
  out << "iteration,objective,primal_residual,dual_residual\n";
  for (size_t i = 0; i < objective.size(); ++i)
    out << (i + 1) << ',' << fmt9(objective[i]) << ',' << fmt9(primal[i]) << ','
        << fmt9(dual[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace asttf
