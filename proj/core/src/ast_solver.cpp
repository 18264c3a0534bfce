#include "asttf/ast_solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "asttf/fft.hpp"
#include "asttf/toeplitz.hpp"

namespace asttf {

namespace {

using Cd = std::complex<double>;

// Normal matrix of the x-update, 1/2 D^T D + rho I, over stacked frame
// coordinates i = w*L + n (column-major layout of the L x W frame matrix).
// D has a single nonzero per column (sample w*hop + n receives weight
// window[n] / synthesis_norm), so D^T D couples only frame entries that land
// on the same signal sample; the matrix stays very sparse for any hop.
Eigen::SparseMatrix<double> build_normal_matrix(const FramePlan& plan, double rho) {
  const int L = plan.frame_length, H = plan.hop, W = plan.num_frames;
  const int N = plan.padded_length;
  const int per_sample = L / H + 1;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(N) * per_sample * per_sample + static_cast<size_t>(L) * W);
  for (int t = 0; t < N; ++t) {
    const int whi = std::min(W - 1, t / H);
    const int wlo = (t - L + 1) > 0 ? (t - L + 1 + H - 1) / H : 0;
    const double s2 = plan.synthesis_norm[t] * plan.synthesis_norm[t];
    for (int wa = wlo; wa <= whi; ++wa) {
      const int na = t - wa * H;
      for (int wb = wlo; wb <= whi; ++wb) {
        const int nb = t - wb * H;
        trips.emplace_back(wa * L + na, wb * L + nb,
                           0.5 * plan.window[na] * plan.window[nb] / s2);
      }
    }
  }
  for (int i = 0; i < L * W; ++i) trips.emplace_back(i, i, rho);
  Eigen::SparseMatrix<double> A(L * W, L * W);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

double block_fro_sq(const std::vector<Eigen::MatrixXcd>& blocks) {
  double acc = 0.0;
  for (const auto& b : blocks) acc += b.squaredNorm();
  return acc;
}

double min_block_eigenvalue(const std::vector<Eigen::MatrixXcd>& blocks) {
  double mn = std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
  for (const auto& b : blocks) {
    es.compute(b, Eigen::EigenvaluesOnly);
    mn = std::min(mn, es.eigenvalues().minCoeff());
  }
  return mn;
}

// Squared norm of a Hermitian block stack pulled back through the adjoint of
// the (u, x, t) -> [[Toep(u), x], [x*, t]] assembly map: weight 1 on the real
// diagonal sum, 2 on each off-diagonal sum and on the x column (both appear
// twice in the Hermitian block), 1 on the real corner. This is the scale on
// which the dual residual acts on the primal variables.
double assembly_adjoint_norm_sq(const Eigen::MatrixXcd& m, int L) {
  const Eigen::VectorXcd ds = diag_sum(m.topLeftCorner(L, L));
  double acc = ds[0].real() * ds[0].real();
  acc += 4.0 * ds.tail(L - 1).squaredNorm();
  acc += 4.0 * m.block(0, L, L, 1).squaredNorm();
  acc += m(L, L).real() * m(L, L).real();
  return acc;
}

}  // namespace

double default_tau(double sigma, int segment_length) {
  if (sigma < 0.0 || !std::isfinite(sigma))
    throw std::invalid_argument("default_tau: sigma must be finite and >= 0");
  if (segment_length < 2)
    throw std::invalid_argument("default_tau: segment length must be >= 2");
  const double log_l = std::log(static_cast<double>(segment_length));
  return sigma * std::sqrt(std::log(4.0 * std::numbers::pi * log_l) + log_l);
}

AstSolution admm_solve(const AstProblem& problem, const AdmmParams& params) {
  const FramePlan& plan = problem.plan;
  if (plan.frame_length < 1 || plan.num_frames < 1)
    throw std::invalid_argument("admm_solve: empty frame plan");
  if (!(problem.tau > 0.0) || !std::isfinite(problem.tau))
    throw std::invalid_argument("admm_solve: tau must be finite and positive");
  if (!(problem.rho > 0.0) || !std::isfinite(problem.rho))
    throw std::invalid_argument("admm_solve: rho must be finite and positive");
  if (params.max_iters < 1 || !(params.tol_primal > 0.0) || !(params.tol_dual > 0.0))
    throw std::invalid_argument("admm_solve: invalid params");

  const int L = plan.frame_length, W = plan.num_frames, n = L + 1;
  const double tau = problem.tau;
  double rho = params.rho > 0.0 ? params.rho : problem.rho;
  const ComplexSignal ypad = pad_to_plan(problem.y, plan);

  Eigen::VectorXcd counts(L);
  for (int m = 0; m < L; ++m) counts[m] = Cd(static_cast<double>(L - m), 0.0);

  const FrameStack dsy = dewindow_adjoint(plan, ypad);  // D* y
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(build_normal_matrix(plan, rho));
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("admm_solve: factorization of 1/2 D*D + rho I failed");

  // State: per-window SDP blocks, coupled only through the x-solve. Start
  // from the data (x = D*y rescaled) with everything else at zero.
  Eigen::MatrixXcd X = dsy.frames / std::max(1e-12, plan.synthesis_norm.maxCoeff());
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(L, W);
  Eigen::VectorXd T = Eigen::VectorXd::Zero(W);
  std::vector<Eigen::MatrixXcd> Z(W, Eigen::MatrixXcd::Zero(n, n));
  std::vector<Eigen::MatrixXcd> Lam(W, Eigen::MatrixXcd::Zero(n, n));
  std::vector<Eigen::MatrixXcd> B(W, Eigen::MatrixXcd::Zero(n, n));
  std::vector<Eigen::MatrixXcd> Zprev(W, Eigen::MatrixXcd::Zero(n, n));

  AstSolution sol;
  sol.objective_trace.reserve(params.max_iters);
  sol.primal_residual_trace.reserve(params.max_iters);
  sol.dual_residual_trace.reserve(params.max_iters);

  double best_score = std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd best_x = X, best_u = U;
  Eigen::VectorXd best_t = T;
  double min_eig_seen = std::numeric_limits<double>::infinity();

  Eigen::MatrixXd rhs(L * W, 2), xr(L * W, 2);
  Eigen::MatrixXcd rhs_c(L, W);

  for (int iter = 1; iter <= params.max_iters; ++iter) {
    // u-update: per-diagonal averages of Z_u + Lambda_u / rho with the
    // tau/(2 rho) correction on the leading entry.
    for (int w = 0; w < W; ++w) {
      Eigen::VectorXcd s =
          diag_sum(Z[w].topLeftCorner(L, L) + Lam[w].topLeftCorner(L, L) / rho);
      s[0] = Cd(s[0].real() - tau / (2.0 * rho), 0.0);
      U.col(w) = s.cwiseQuotient(counts);
    }
    // t-update.
    for (int w = 0; w < W; ++w)
      T[w] = Z[w](L, L).real() + Lam[w](L, L).real() / rho - tau / (2.0 * rho);
    // x-update: one global solve of (1/2 D*D + rho I) x = rho Z_x + Lambda_x
    // + 1/2 D*y, split into real and imaginary right-hand sides.
    for (int w = 0; w < W; ++w)
      rhs_c.col(w) = rho * Z[w].block(0, L, L, 1) + Lam[w].block(0, L, L, 1) +
                     0.5 * dsy.frames.col(w);
    rhs.col(0) = Eigen::Map<const Eigen::VectorXcd>(rhs_c.data(), L * W).real();
    rhs.col(1) = Eigen::Map<const Eigen::VectorXcd>(rhs_c.data(), L * W).imag();
    xr = ldlt.solve(rhs);
    {
      auto xv = Eigen::Map<Eigen::VectorXcd>(X.data(), L * W);
      xv.real() = xr.col(0);
      xv.imag() = xr.col(1);
    }

    if (!X.allFinite() || !U.allFinite() || !T.allFinite())
      throw std::runtime_error("admm_solve: non-finite iterate at iteration " +
                               std::to_string(iter));

    // Assemble the block matrices [[Toep(u), x], [x^*, t]].
    for (int w = 0; w < W; ++w) {
      B[w].topLeftCorner(L, L) = toeplitz_from_first_column(U.col(w));
      B[w].block(0, L, L, 1) = X.col(w);
      B[w].block(L, 0, 1, L) = X.col(w).adjoint();
      B[w](L, L) = Cd(T[w], 0.0);
    }
    // Z-update: project each shifted block onto the PSD cone, then the dual
    // ascent step, keeping both exactly Hermitian.
    for (int w = 0; w < W; ++w) {
      Z[w] = psd_project(B[w] - Lam[w] / rho);
      Lam[w] += rho * (Z[w] - B[w]);
      Lam[w] = (0.5 * (Lam[w] + Lam[w].adjoint())).eval();
    }
    if (params.check_psd_each_iter)
      min_eig_seen = std::min(min_eig_seen, min_block_eigenvalue(Z));

    // Stopping residuals. Primal: ||Z - B||_F relative to the iterate scale.
    // Dual: the violation of (u, x, t)-stationarity at the new multiplier,
    // rho * (Z_prev - Z) pulled back through the assembly adjoint, relative
    // to the same pullback of Lambda (the dual gradient scale).
    double prim_sq = 0.0, dstep_sq = 0.0, dscale_sq = 0.0;
    for (int w = 0; w < W; ++w) {
      prim_sq += (Z[w] - B[w]).squaredNorm();
      dstep_sq += assembly_adjoint_norm_sq(Z[w] - Zprev[w], L);
      dscale_sq += assembly_adjoint_norm_sq(Lam[w], L);
    }
    const double prim_rel =
        std::sqrt(prim_sq) /
        std::max({1.0, std::sqrt(block_fro_sq(Z)), std::sqrt(block_fro_sq(B))});
    const double dual_rel =
        rho * std::sqrt(dstep_sq) / std::max(1.0, std::sqrt(dscale_sq));
    for (int w = 0; w < W; ++w) Zprev[w] = Z[w];

    const ComplexSignal recon = dewindow_apply(plan, FrameStack{X});
    const double fidelity = 0.5 * (ypad.samples - recon.samples).squaredNorm();
    const double objective =
        fidelity + 0.5 * tau * (T.sum() + U.row(0).real().sum());

    sol.objective_trace.push_back(objective);
    sol.primal_residual_trace.push_back(prim_rel);
    sol.dual_residual_trace.push_back(dual_rel);
    sol.iterations = iter;
    if (std::getenv("ASTTF_DEBUG_RESID") && iter % 100 == 0)
      std::fprintf(stderr, "it=%d rho=%.4g obj=%.6g prim=%.3g dual=%.3g\n",
                   iter, rho, objective, prim_rel, dual_rel);

    const double score = std::max(prim_rel, dual_rel);
    if (score < best_score) {
      best_score = score;
      best_x = X;
      best_u = U;
      best_t = T;
    }
    if (prim_rel <= params.tol_primal && dual_rel <= params.tol_dual) {
      sol.converged = true;
      break;
    }
    if (params.adaptive_rho && iter % 10 == 0) {
      double factor = 0.0;
      if (prim_rel > 10.0 * dual_rel)
        factor = 2.0;
      else if (dual_rel > 10.0 * prim_rel)
        factor = 0.5;
      if (factor != 0.0) {
        rho *= factor;
        ldlt.compute(build_normal_matrix(plan, rho));
        if (ldlt.info() != Eigen::Success)
          throw std::runtime_error("admm_solve: refactorization failed");
      }
    }
  }

  sol.x_hat = best_x;
  sol.u_hat = best_u;
  sol.t_hat = best_t;
  sol.z_hat = dual_from_primal(problem, best_x);
  sol.min_z_eigenvalue =
      params.check_psd_each_iter ? min_eig_seen : min_block_eigenvalue(Z);
  return sol;
}

Eigen::MatrixXcd dual_from_primal(const AstProblem& problem,
                                  const Eigen::MatrixXcd& x_hat) {
  const FramePlan& plan = problem.plan;
  if (x_hat.rows() != plan.frame_length || x_hat.cols() != plan.num_frames)
    throw std::invalid_argument("dual_from_primal: x_hat shape does not match plan");
  const ComplexSignal ypad = pad_to_plan(problem.y, plan);
  const ComplexSignal recon = dewindow_apply(plan, FrameStack{x_hat}, ypad.sample_rate);
  const ComplexSignal resid{ypad.samples - recon.samples, ypad.sample_rate};
  return dewindow_adjoint(plan, resid).frames;
}

AtomicNormResult atomic_norm_sdp(const Eigen::VectorXcd& x,
                                 const AtomicNormOptions& opts) {
  const int L = static_cast<int>(x.size());
  if (L < 1) throw std::invalid_argument("atomic_norm_sdp: empty input");
  if (!x.allFinite()) throw std::invalid_argument("atomic_norm_sdp: non-finite input");
  if (x.norm() == 0.0) return {0.0, true};
  if (!(opts.rho > 0.0) || opts.max_iters < 1 || !(opts.tol > 0.0))
    throw std::invalid_argument("atomic_norm_sdp: invalid options");

  const int n = L + 1;
  const double rho = opts.rho;
  Eigen::VectorXcd counts(L);
  for (int m = 0; m < L; ++m) counts[m] = Cd(static_cast<double>(L - m), 0.0);

  // Same block ADMM as the full solver, with x held fixed (the equality-
  // constrained gauge) and the objective weight tau = 1.
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(L);
  double t = 0.0;
  Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd Lam = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd Bp = Eigen::MatrixXcd::Zero(n, n);
  bool converged = false;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    Eigen::VectorXcd s =
        diag_sum(Z.topLeftCorner(L, L) + Lam.topLeftCorner(L, L) / rho);
    s[0] = Cd(s[0].real() - 1.0 / (2.0 * rho), 0.0);
    u = s.cwiseQuotient(counts);
    t = Z(n - 1, n - 1).real() + Lam(n - 1, n - 1).real() / rho - 1.0 / (2.0 * rho);

    B.topLeftCorner(L, L) = toeplitz_from_first_column(u);
    B.block(0, L, L, 1) = x;
    B.block(L, 0, 1, L) = x.adjoint();
    B(L, L) = Cd(t, 0.0);

    Z = psd_project(B - Lam / rho);
    Lam += rho * (Z - B);
    Lam = (0.5 * (Lam + Lam.adjoint())).eval();

    const double prim_rel = (Z - B).norm() /
                            std::max({1.0, Z.norm(), B.norm()});
    const double dual_rel = rho * (B - Bp).norm() / std::max(1.0, Lam.norm());
    Bp = B;
    if (prim_rel <= opts.tol && dual_rel <= opts.tol) {
      converged = true;
      break;
    }
  }
  return {0.5 * (t + u[0].real()), converged};
}

double atomic_norm_grid_oracle(const Eigen::VectorXcd& x, int grid_size) {
  const int L = static_cast<int>(x.size());
  if (L < 1) throw std::invalid_argument("atomic_norm_grid_oracle: empty input");
  if (grid_size < 8 * L)
    throw std::invalid_argument("atomic_norm_grid_oracle: grid_size must be >= 8 L");
  if (!x.allFinite())
    throw std::invalid_argument("atomic_norm_grid_oracle: non-finite input");
  const double xnorm = x.norm();
  if (xnorm == 0.0) return 0.0;

  const int G = grid_size;
  const double g = static_cast<double>(G);
  // Dictionary of G on-grid sinusoids a(k/G): applying it is a zero-padded
  // inverse DFT, its adjoint a zero-padded forward DFT, and V V* = G I, which
  // makes the affine projection below exact.
  auto apply_v = [&](const Eigen::VectorXcd& c) {
    return Eigen::VectorXcd((g * ifft(c)).head(L));
  };
  auto apply_vt = [&](const Eigen::VectorXcd& r) { return fft_padded(r, G); };

  // ADMM basis pursuit: split c = w, project c onto {Vc = x}, shrink w. The
  // shrinkage threshold 1/rho is set well below the coefficient scale.
  const double scale = xnorm / std::sqrt(static_cast<double>(L));
  const double rho = 20.0 / scale;
  Eigen::VectorXcd w = apply_vt(x) / g;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(G);
  double best = std::numeric_limits<double>::infinity();
  const int max_iters = 4000;
  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::VectorXcd q = w - v;
    Eigen::VectorXcd c = q - apply_vt(apply_v(q) - x) / g;
    best = std::min(best, c.lpNorm<1>());
    Eigen::VectorXcd cv = c + v;
    for (int k = 0; k < G; ++k) {
      const double mag = std::abs(cv[k]);
      cv[k] = mag > 1.0 / rho ? cv[k] * (1.0 - 1.0 / (rho * mag)) : Cd(0.0, 0.0);
    }
    v += c - cv;
    const double split = (c - cv).norm() / std::max(1.0, c.norm());
    w.swap(cv);
    if (split < 1e-10) break;
  }
  return best;
}

}  // namespace asttf
