#include "asttf/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "asttf/fft.hpp"

namespace asttf {

namespace {

constexpr double kPi = std::numbers::pi;
using Cd = std::complex<double>;

void check_stft_args(const FramePlan& plan, int nfft) {
  if (nfft < plan.frame_length)
    throw std::invalid_argument("stft: nfft must be >= frame length");
}

Eigen::VectorXd window_centers(const FramePlan& plan, double sample_rate) {
  Eigen::VectorXd t(plan.num_frames);
  for (int w = 0; w < plan.num_frames; ++w)
    t[w] = (w * plan.hop + (plan.frame_length - 1) / 2.0) / sample_rate;
  return t;
}

Eigen::VectorXd fft_freq_axis(int nfft, double sample_rate) {
  Eigen::VectorXd f(nfft);
  for (int k = 0; k < nfft; ++k) f[k] = k * sample_rate / nfft;
  return f;
}

// Complex STFT with an arbitrary analysis window (the plan only supplies the
// segmentation geometry here).
Eigen::MatrixXcd windowed_stft(const ComplexSignal& x, const FramePlan& plan,
                               const Eigen::VectorXd& window, int nfft) {
  const ComplexSignal padded = pad_to_plan(x, plan);
  Eigen::MatrixXcd out(nfft, plan.num_frames);
  Eigen::VectorXcd seg(plan.frame_length);
  for (int w = 0; w < plan.num_frames; ++w) {
    seg = window.cast<Cd>().cwiseProduct(
        padded.samples.segment(w * plan.hop, plan.frame_length));
    out.col(w) = fft_padded(seg, nfft);
  }
  return out;
}

}  // namespace

TfMatrix stft(const ComplexSignal& x, const FramePlan& plan, int nfft) {
  check_stft_args(plan, nfft);
  TfMatrix out;
  const Eigen::MatrixXcd f = windowed_stft(x, plan, plan.window, nfft);
  out.values = f.cwiseAbs().transpose();  // rows = windows
  out.time_axis = window_centers(plan, x.sample_rate);
  out.freq_axis = fft_freq_axis(nfft, x.sample_rate);
  return out;
}

TfMatrix reassign(const ComplexSignal& x, const FramePlan& plan, int nfft) {
  check_stft_args(plan, nfft);
  const int L = plan.frame_length, W = plan.num_frames;
  const double center = (L - 1) / 2.0;

  // Auxiliary windows: derivative dw/dn (exact for the Gaussian, zero for the
  // rectangular window) and time weighting (n - center) * w.
  Eigen::VectorXd dwin = Eigen::VectorXd::Zero(L);
  if (plan.window_sigma_ratio != kRectangularWindow) {
    const double sigma = plan.window_sigma_ratio * L;
    for (int n = 0; n < L; ++n)
      dwin[n] = -(n - center) / (sigma * sigma) * plan.window[n];
  }
  Eigen::VectorXd twin(L);
  for (int n = 0; n < L; ++n) twin[n] = (n - center) * plan.window[n];

  const Eigen::MatrixXcd fw = windowed_stft(x, plan, plan.window, nfft);
  const Eigen::MatrixXcd fd = windowed_stft(x, plan, dwin, nfft);
  const Eigen::MatrixXcd ft = windowed_stft(x, plan, twin, nfft);

  const Eigen::MatrixXd energy = fw.cwiseAbs2();
  const double floor = 1e-12 * energy.maxCoeff();

  TfMatrix out;
  out.values = Eigen::MatrixXd::Zero(W, nfft);
  out.time_axis = window_centers(plan, x.sample_rate);
  out.freq_axis = fft_freq_axis(nfft, x.sample_rate);
  if (energy.maxCoeff() <= 0.0) return out;

  for (int w = 0; w < W; ++w) {
    for (int k = 0; k < nfft; ++k) {
      const double e = energy(k, w);
      if (e <= floor) continue;
      const Cd cross_t = ft(k, w) * std::conj(fw(k, w));
      const Cd cross_f = fd(k, w) * std::conj(fw(k, w));
      // Center-of-gravity estimates: time in samples, frequency in
      // cycles/sample.
      const double t_hat = w * plan.hop + center + cross_t.real() / e;
      const double f_hat =
          static_cast<double>(k) / nfft - cross_f.imag() / (2.0 * kPi * e);
      int row = static_cast<int>(std::lround((t_hat - center) / plan.hop));
      int col = static_cast<int>(std::lround(f_hat * nfft));
      row = std::clamp(row, 0, W - 1);
      col = std::clamp(col, 0, nfft - 1);
      out.values(row, col) += e;
    }
  }
  return out;
}

StftL1Result stft_l1_solve(const ComplexSignal& x, const FramePlan& plan,
                           int dict_oversample, double lambda, int max_iters) {
  if (dict_oversample < 1)
    throw std::invalid_argument("stft_l1: dict_oversample must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("stft_l1: lambda must be positive");
  if (max_iters < 1) throw std::invalid_argument("stft_l1: max_iters must be >= 1");

  const int L = plan.frame_length, W = plan.num_frames;
  const int G = dict_oversample * L;
  const double g = static_cast<double>(G);
  const FrameStack frames = frame(x, plan);

  // Dictionary of G on-grid atoms: V c is a zero-padded inverse DFT, V* a
  // zero-padded forward DFT, and the gradient Lipschitz constant is exactly
  // lambda_max(V* V) = G.
  auto apply_v = [&](const Eigen::VectorXcd& c) {
    return Eigen::VectorXcd((g * ifft(c)).head(L));
  };
  auto apply_vt = [&](const Eigen::VectorXcd& r) { return fft_padded(r, G); };

  StftL1Result result;
  result.coeffs = Eigen::MatrixXcd::Zero(G, W);
  result.objective_traces.resize(static_cast<size_t>(W));

  for (int w = 0; w < W; ++w) {
    const Eigen::VectorXcd xw = frames.frames.col(w);
    auto objective = [&](const Eigen::VectorXcd& c,
                         const Eigen::VectorXcd& residual) {
      return 0.5 * residual.squaredNorm() + lambda * c.lpNorm<1>();
    };

    // Monotone FISTA: accelerated step, but keep the previous iterate if the
    // candidate would increase the objective.
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(G);
    Eigen::VectorXcd yk = c;
    Eigen::VectorXcd resid_c = -xw;  // V c - x_w at c = 0
    double obj_c = objective(c, resid_c);
    double tk = 1.0;
    std::vector<double>& trace = result.objective_traces[static_cast<size_t>(w)];
    trace.push_back(obj_c);

    for (int iter = 0; iter < max_iters; ++iter) {
      const Eigen::VectorXcd grad = apply_vt(apply_v(yk) - xw);
      Eigen::VectorXcd z = yk - grad / g;
      for (int k = 0; k < G; ++k) {
        const double mag = std::abs(z[k]);
        z[k] = mag > lambda / g ? z[k] * (1.0 - lambda / (g * mag)) : Cd(0.0, 0.0);
      }
      const Eigen::VectorXcd resid_z = apply_v(z) - xw;
      const double obj_z = objective(z, resid_z);

      const Eigen::VectorXcd c_prev = c;
      if (obj_z <= obj_c) {
        c = z;
        resid_c = resid_z;
        obj_c = obj_z;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      yk = c + (tk / t_next) * (z - c) + ((tk - 1.0) / t_next) * (c - c_prev);
      tk = t_next;
      trace.push_back(obj_c);

      if (!c.allFinite())
        throw std::runtime_error("stft_l1: diverged (non-finite iterate) in window " +
                                 std::to_string(w));
      // Stationarity: off the support the residual correlation must sit
      // inside the lambda ball; on the support it must match lambda times the
      // coefficient phase. Checking only the ball admits points with excess
      // l1 mass, so both parts gate the stop.
      const Eigen::VectorXcd corr = apply_vt(-resid_c);
      double worst = 0.0;
      for (int k = 0; k < G; ++k) {
        const double mag = std::abs(c[k]);
        const double v = mag == 0.0
                             ? std::max(0.0, std::abs(corr[k]) - lambda)
                             : std::abs(corr[k] - lambda * (c[k] / mag));
        worst = std::max(worst, v);
      }
      if (worst <= 1e-4 * lambda) break;
    }
    result.coeffs.col(w) = c;
  }

  result.tf.values = result.coeffs.cwiseAbs().transpose();
  result.tf.time_axis = window_centers(plan, x.sample_rate);
  result.tf.freq_axis = fft_freq_axis(G, x.sample_rate);
  return result;
}

TfMatrix stft_l1(const ComplexSignal& x, const FramePlan& plan,
                 int dict_oversample, double lambda, int max_iters) {
  return stft_l1_solve(x, plan, dict_oversample, lambda, max_iters).tf;
}

}  // namespace asttf
