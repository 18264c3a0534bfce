#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <asttf/ast_solver.hpp>
#include <asttf/framing.hpp>
#include <asttf/localization.hpp>
#include <asttf/signal.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "test_helpers.hpp"

using namespace asttf;
using helpers::atom;

namespace {

// Single rectangular window covering the whole signal: D is the identity, so
// the solver minimizes 1/2 ||y - x||^2 + tau ||x||_A directly.
AstProblem single_window_problem(const Eigen::VectorXcd& y, double tau) {
  const int length = static_cast<int>(y.size());
  AstProblem p;
  p.plan = make_frame_plan(length, length, length, kRectangularWindow);
  p.y = ComplexSignal{y, 1.0};
  p.tau = tau;
  p.rho = 1.0;
  return p;
}

}  // namespace

TEST_CASE("default_tau closed form") {
  CHECK(default_tau(0.0, 64) == 0.0);
  CHECK(default_tau(1.0, 1024) == doctest::Approx(3.376).epsilon(1e-3));
  CHECK(default_tau(0.5614, 64) == doctest::Approx(1.600).epsilon(1e-3));
  CHECK_THROWS_AS(default_tau(-1.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(default_tau(1.0, 1), std::invalid_argument);
}

TEST_CASE("zero data solves to the zero signal with zero objective") {
  FramePlan plan = make_frame_plan(32, 8, 4, 1.0 / 6.0);
  AstProblem p{ComplexSignal{Eigen::VectorXcd::Zero(32), 1.0}, plan, 0.7, 1.0};
  AstSolution sol = admm_solve(p);
  CHECK(sol.converged);
  CHECK(sol.x_hat.cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(sol.objective_trace.back()) <= 1e-12);
}

TEST_CASE("solver objective matches a fine-grid basis pursuit oracle") {
  const double tau = 0.5;
  Eigen::VectorXcd y = 2.0 * atom(8, 0.213);
  AstProblem p = single_window_problem(y, tau);
  AdmmParams params;
  params.max_iters = 5000;
  params.tol_primal = 1e-6;
  params.tol_dual = 1e-6;
  AstSolution sol = admm_solve(p, params);
  CHECK(sol.converged);

  const double oracle = helpers::grid_bpdn_objective(y, 1 << 14, tau, 4000);
  CHECK(sol.objective_trace.back() ==
        doctest::Approx(oracle).epsilon(1e-2));
}

TEST_CASE("returned blocks stay inside the PSD cone") {
  Eigen::VectorXcd y = 2.0 * atom(8, 0.213) + atom(8, 0.71);
  AstProblem p = single_window_problem(y, 0.5);
  AdmmParams params;
  params.check_psd_each_iter = true;
  AstSolution sol = admm_solve(p, params);
  CHECK(sol.min_z_eigenvalue >= -1e-8);
}

TEST_CASE("fidelity residual grows with tau") {
  Signal clean = generate_test_signal(1024.0, 64);
  Signal noisy = add_noise(clean, 0.5614, 4);
  ComplexSignal ya = analytic_signal(noisy);
  FramePlan plan = make_frame_plan(64, 16, 8, 1.0 / 6.0);
  const ComplexSignal ypad = pad_to_plan(ya, plan);

  AdmmParams params;
  params.max_iters = 2000;
  params.adaptive_rho = true;
  double prev = -1.0;
  for (double scale : {0.1, 0.5, 1.0, 2.0}) {
    AstProblem p{ya, plan, scale * default_tau(0.5614, 16), 1.0};
    AstSolution sol = admm_solve(p, params);
    const ComplexSignal recon = dewindow_apply(plan, FrameStack{sol.x_hat});
    const double resid = (ypad.samples - recon.samples).norm();
    CHECK(resid >= prev - 1e-3);
    prev = resid;
  }
}

TEST_CASE("residual traces converge on a desk-scale instance") {
  Signal clean = generate_test_signal(1024.0, 128);
  ComplexSignal ya = analytic_signal(clean);
  FramePlan plan = make_frame_plan(128, 16, 8, 1.0 / 6.0);
  AstProblem p{ya, plan, 1.0, 1.0};
  AdmmParams params;
  params.max_iters = 2000;
  params.adaptive_rho = true;
  AstSolution sol = admm_solve(p, params);
  CHECK(sol.converged);
  CHECK(sol.iterations <= 2000);
  CHECK(sol.primal_residual_trace.back() <= 1e-4);
  CHECK(sol.dual_residual_trace.back() <= 1e-4);
  CHECK(sol.objective_trace.size() == static_cast<size_t>(sol.iterations));
}

TEST_CASE("solution exposes the recomputed dual") {
  Eigen::VectorXcd y = 1.5 * atom(8, 0.4);
  AstProblem p = single_window_problem(y, 0.3);
  AstSolution sol = admm_solve(p);
  Eigen::MatrixXcd z = dual_from_primal(p, sol.x_hat);
  CHECK((sol.z_hat - z).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dual of an exact reconstruction is zero") {
  Signal clean = generate_test_signal(1024.0, 64);
  ComplexSignal ya = analytic_signal(clean);
  FramePlan plan = make_frame_plan(64, 16, 8, 1.0 / 6.0);
  AstProblem p{ya, plan, 1.0, 1.0};
  FrameStack framed = frame(pad_to_plan(ya, plan), plan);
  Eigen::MatrixXcd z = dual_from_primal(p, framed.frames);
  CHECK(z.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dual of the zero estimate is the adjoint of the data") {
  Signal clean = generate_test_signal(1024.0, 64);
  ComplexSignal ya = analytic_signal(clean);
  FramePlan plan = make_frame_plan(64, 16, 8, 1.0 / 6.0);
  AstProblem p{ya, plan, 1.0, 1.0};
  Eigen::MatrixXcd z = dual_from_primal(
      p, Eigen::MatrixXcd::Zero(plan.frame_length, plan.num_frames));
  FrameStack dsy = dewindow_adjoint(plan, pad_to_plan(ya, plan));
  CHECK((z - dsy.frames).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("converged duals satisfy the certificate bound on a fine grid") {
  const double tau = 0.5;
  Eigen::VectorXcd y = 2.0 * atom(8, 0.213);
  AstProblem p = single_window_problem(y, tau);
  AdmmParams params;
  params.tol_primal = 1e-5;
  params.tol_dual = 1e-5;
  params.max_iters = 5000;
  AstSolution sol = admm_solve(p, params);
  REQUIRE(sol.converged);
  Eigen::VectorXd h = dual_polynomial(DualWindow{sol.z_hat.col(0), tau}, 2048);
  CHECK(h.size() == 1 << 14);
  CHECK(h.maxCoeff() <= tau * (1.0 + 1e-2));
}

TEST_CASE("malformed problems are rejected") {
  FramePlan plan = make_frame_plan(32, 8, 4, 1.0 / 6.0);
  ComplexSignal y{Eigen::VectorXcd::Zero(32), 1.0};
  CHECK_THROWS_AS(admm_solve(AstProblem{y, plan, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(admm_solve(AstProblem{y, plan, 1.0, -2.0}), std::invalid_argument);
  AdmmParams bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(admm_solve(AstProblem{y, plan, 1.0, 1.0}, bad),
                  std::invalid_argument);
  ComplexSignal wrong{Eigen::VectorXcd::Zero(17), 1.0};
  CHECK_THROWS_AS(admm_solve(AstProblem{wrong, plan, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("atomic norm of the zero vector is zero") {
  AtomicNormResult r = atomic_norm_sdp(Eigen::VectorXcd::Zero(8));
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("unit atoms have unit atomic norm") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    const double f = unif(rng);
    AtomicNormResult r = atomic_norm_sdp(atom(8, f));
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-2));
  }
}

TEST_CASE("well-separated atoms add their amplitudes") {
  Eigen::VectorXcd x = 2.0 * atom(16, 0.1) + 3.0 * atom(16, 0.37);
  AtomicNormResult r = atomic_norm_sdp(x);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 5.0) <= 0.05);
}

TEST_CASE("grid oracle basics") {
  CHECK(atomic_norm_grid_oracle(Eigen::VectorXcd::Zero(8), 64) ==
        doctest::Approx(0.0).epsilon(1e-10));
  // on-grid atom: exactly one dictionary column
  CHECK(atomic_norm_grid_oracle(atom(8, 8.0 / 64.0), 64) ==
        doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("grid oracle is stable under grid refinement") {
  std::mt19937 rng(9);
  std::vector<double> freqs = helpers::separated_frequencies(rng, 2, 2.0 / 8.0);
  Eigen::VectorXcd x = 1.3 * atom(8, freqs[0]) + 0.8 * atom(8, freqs[1]);
  const double coarse = atomic_norm_grid_oracle(x, 1 << 14);
  const double fine = atomic_norm_grid_oracle(x, 1 << 15);
  // agreement is limited by the oracle's own iterative accuracy, well inside
  // the 1e-2 band it is consumed at elsewhere
  CHECK(std::abs(coarse - fine) <= 5e-3 * std::max(1.0, std::abs(coarse)));
}

TEST_CASE("sdp value matches the grid oracle on sparse inputs") {
  std::mt19937 rng(27);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int length : {4, 8}) {
    // Short signals: antipodal pairs give the largest possible circular
    // separation (0.5), keeping the two atoms well resolved.
    const double f1 = unif(rng);
    const double f2 = f1 < 0.5 ? f1 + 0.5 : f1 - 0.5;
    Eigen::VectorXcd x = 1.1 * atom(length, f1) + 2.2 * atom(length, f2);
    AtomicNormResult r = atomic_norm_sdp(x);
    const double oracle = atomic_norm_grid_oracle(x, 1 << 14);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-2));
  }
}
