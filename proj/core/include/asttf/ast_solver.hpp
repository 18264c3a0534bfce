#pragma once

#include <vector>

#include "asttf/framing.hpp"
#include "asttf/signal.hpp"

namespace asttf {

// One denoising instance: measured analytic signal y, segmentation plan
// (which defines the de-window operator D, the segment length L and window
// count W), regularization weight tau and default ADMM penalty rho.
struct AstProblem {
  ComplexSignal y;
  FramePlan plan;
  double tau = 0.0;
  double rho = 1.0;
};

// Solver knobs. rho <= 0 means "use the problem's rho".
struct AdmmParams {
  double rho = 0.0;
  int max_iters = 1000;
  double tol_primal = 1e-4;
  double tol_dual = 1e-4;
  // Re-check PSD feasibility of every Z block each iteration (slow; testing).
  bool check_psd_each_iter = false;
  // Residual balancing: double/halve rho when one residual dominates the
  // other by 10x. Off by default so runs are exactly reproducible.
  bool adaptive_rho = false;
};

// Solver output. Per-window quantities are stored one column per window, so
// e.g. x_hat.col(w) is window w's denoised segment; flattening column-major
// gives the stacked length-L*W vector the operator D acts on.
struct AstSolution {
  Eigen::MatrixXcd x_hat;  // L x W denoised windowed segments
  Eigen::MatrixXcd u_hat;  // L x W Toeplitz first columns, one per window
  Eigen::VectorXd t_hat;   // W
  Eigen::MatrixXcd z_hat;  // L x W dual vectors, D*(y - D x_hat), recomputed at exit
  std::vector<double> objective_trace;
  std::vector<double> primal_residual_trace;  // relative, one entry per iteration
  std::vector<double> dual_residual_trace;
  int iterations = 0;
  bool converged = false;
  // Smallest eigenvalue seen across Z blocks: over every iteration when
  // check_psd_each_iter is set, otherwise of the final blocks only.
  double min_z_eigenvalue = 0.0;
};

// Noise-calibrated regularization weight
//   tau = sigma * sqrt(log(4 pi log L) + log L)
// for segment length L >= 2 (natural logarithms). sigma = 0 gives 0.
double default_tau(double sigma, int segment_length);

// Solve  min_x 1/2 ||y - D x||^2 + tau * sum_w ||x_w||_A  through its SDP
// form: per window w an (L+1)x(L+1) block [[Toep(u_w), x_w], [x_w^*, t_w]]
// constrained PSD, objective (tau/2) sum_w (t_w + Tr(Toep(u_w))/L). ADMM
// alternates closed-form u/x/t updates (the x-update is one global sparse
// solve against the precomputed factorization of 1/2 D*D + rho I), a PSD-cone
// projection of each block, and the dual ascent step. Returns the iterate
// with the best residual score along with full traces. Throws if the problem
// is malformed or an iterate turns non-finite (divergence).
AstSolution admm_solve(const AstProblem& problem, const AdmmParams& params = {});

// Dual vector of a candidate primal: D*(y - D x_hat), as L x W columns.
Eigen::MatrixXcd dual_from_primal(const AstProblem& problem,
                                  const Eigen::MatrixXcd& x_hat);

struct AtomicNormOptions {
  double rho = 1.0;
  int max_iters = 20000;
  double tol = 1e-7;
};

struct AtomicNormResult {
  double value = 0.0;
  bool converged = false;
};

// Atomic norm of a single segment x under the normalized gauge
//   ||x||_A = inf { 1/2 (t + Tr(Toep(u))/L) : [[Toep(u), x], [x^*, t]] PSD },
// for which every unit-amplitude complex sinusoid has norm exactly 1.
// Solved by a dedicated small-scale ADMM on the equality-constrained SDP;
// intended for testing, not for the signal path.
AtomicNormResult atomic_norm_sdp(const Eigen::VectorXcd& x,
                                 const AtomicNormOptions& opts = {});

// Independent brute-force gauge: min sum_k |c_k| subject to
// x = sum_k c_k a(f_k) over a uniform frequency grid of grid_size points
// (grid_size >= 8 L), solved by ADMM basis pursuit on the gridded dictionary.
// Decreases monotonically under grid refinement toward the true atomic norm.
double atomic_norm_grid_oracle(const Eigen::VectorXcd& x, int grid_size);

}  // namespace asttf
