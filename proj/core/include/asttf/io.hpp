#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "asttf/baselines.hpp"
#include "asttf/localization.hpp"
#include "asttf/metrics.hpp"
#include "asttf/signal.hpp"

namespace asttf {

// Signal file format: a "# sample_rate=<Hz>" header line followed by one
// sample per line at 17 significant digits, so write/read round-trips are
// bit-exact.
void write_signal(const std::filesystem::path& path, const Signal& s);

// Parse a signal file. The header supplies the sample rate; when the header
// is missing, sample_rate_override must be given. Parse failures report the
// 1-based line number.
Signal read_signal(const std::filesystem::path& path,
                   std::optional<double> sample_rate_override = std::nullopt);

// Time-frequency CSV layout (shared by TfMatrix and TfDistribution rasters):
//   time_axis
//   <comma separated times>
//   freq_axis
//   <comma separated frequencies>
//   <raster, one row per time, comma separated>
// at 9 significant digits.
void write_tf_csv(const std::filesystem::path& path, const Eigen::VectorXd& time_axis,
                  const Eigen::VectorXd& freq_axis, const Eigen::MatrixXd& values);
void write_tf_csv(const std::filesystem::path& path, const TfMatrix& tf);
void write_tf_csv(const std::filesystem::path& path, const TfDistribution& tfd);

// Sparse support export: "window,time_s,freq_hz,magnitude,certificate".
void write_sparse_csv(const std::filesystem::path& path, const TfDistribution& tfd);

// Metric table: "method,renyi_bits,rmse"; absent RMSE leaves the field empty.
void write_report_csv(const std::filesystem::path& path,
                      const std::vector<MetricReport>& rows);

// ADMM solver trace: "iteration,objective,primal_residual,dual_residual".
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<double>& objective,
                     const std::vector<double>& primal,
                     const std::vector<double>& dual);

}  // namespace asttf
