#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "asttf/ast_solver.hpp"
#include "asttf/framing.hpp"

namespace asttf {

// Dual vector of one window together with the regularization weight its
// solution was computed under.
struct DualWindow {
  Eigen::VectorXcd z_w;
  double tau = 0.0;
};

// One localized frequency in one window.
struct SupportPoint {
  double frequency = 0.0;  // cycles/sample in [0, 1)
  std::complex<double> amplitude{0.0, 0.0};
  double certificate = 0.0;  // dual polynomial value at the detected peak
};

// Per-window support, frequencies strictly increasing.
struct WindowSupport {
  int window_index = 0;
  std::vector<SupportPoint> points;
};

using SupportSet = std::vector<WindowSupport>;

// Sparse + rasterized time-frequency energy map.
struct SparseTfPoint {
  int window = 0;
  double time_s = 0.0;   // window-center time
  double freq_hz = 0.0;  // continuous frequency
  double magnitude = 0.0;
  double certificate = 0.0;
};

struct TfDistribution {
  std::vector<SparseTfPoint> sparse;
  Eigen::MatrixXd raster;      // rows = time (windows), cols = frequency bins
  Eigen::VectorXd time_axis;   // seconds, one entry per raster row
  Eigen::VectorXd freq_axis;   // Hz, one entry per raster column
};

// Modulus of the dual polynomial on a fine grid of oversample * L points:
// H[k] = |sum_n z_w[n] exp(-i 2 pi n k / (oversample L))|, via zero-padded
// FFT. oversample must be a power of two >= 4.
Eigen::VectorXd dual_polynomial(const DualWindow& dw, int oversample);

// Strict local maxima of H (circular) reaching (1 - epsilon) * tau, returned
// as grid frequencies in cycles/sample, ascending. Peaks closer than the
// 1/(2 * segment_length) guard band are deduplicated, keeping the one whose
// value is closest to tau. epsilon must lie in (0, 0.5).
std::vector<double> detect_support(const Eigen::VectorXd& h, double tau,
                                   double epsilon, int segment_length);

// Sub-bin refinement: log-parabolic interpolation through the three bins
// around peak_index (circular). peak_index must be a strict local maximum
// (throws otherwise); degenerate neighborhoods (non-positive values or flat
// curvature, where the parabola is undefined) fall back to the unrefined grid
// frequency. The result is within half a fine-grid bin of the peak.
double refine_peak(const Eigen::VectorXd& h, int peak_index);

// Least-squares fit of complex amplitudes: minimizes ||x_hat_w - V c|| where
// V's columns are the atoms a(f_k). Requires |freqs| < L and pairwise
// (circular) separation >= 1/(4L); throws a conditioning error naming the
// offending pair otherwise.
Eigen::VectorXcd least_squares_amplitudes(const Eigen::VectorXcd& x_hat_w,
                                          const std::vector<double>& freqs);

// Decompose a PSD Toeplitz matrix into atoms: T ~ sum_k p_k a(f_k) a(f_k)^*
// with p_k >= 0, via the shift-invariance (matrix-pencil) structure of its
// dominant eigenspace. Rank is counted as eigenvalues > rank_tol * lambda_max;
// requires rank < L (throws a not-applicable error on full-rank input).
// Returns (frequency, power) pairs sorted by frequency; empty for T = 0.
std::vector<std::pair<double, double>> vandermonde_decompose(
    const Eigen::MatrixXcd& T, double rank_tol);

// Rasterize per-window supports: sparse entries at (window-center time,
// f * sample_rate, |amplitude|), nearest-bin accumulation onto a uniform
// [0, sample_rate/2) grid of n_freq_bins/2 rows spaced sample_rate/n_freq_bins
// apart. n_freq_bins must be >= the plan's frame length.
TfDistribution assemble_tfd(const SupportSet& supports, const FramePlan& plan,
                            double sample_rate, int n_freq_bins);

// Full localization pass over a solved problem: per window, evaluate the dual
// polynomial, detect and refine support frequencies, and fit amplitudes to
// the denoised segment x_hat.
SupportSet localize(const AstProblem& problem, const AstSolution& sol,
                    int oversample, double epsilon);

}  // namespace asttf
