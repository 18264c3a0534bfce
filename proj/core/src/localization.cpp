#include "asttf/localization.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

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

// Circular distance between two frequencies in cycles/sample.
double circ_dist(double f1, double f2) {
  double d = std::abs(f1 - f2);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

Eigen::MatrixXcd atom_matrix(int length, const std::vector<double>& freqs) {
  Eigen::MatrixXcd v(length, freqs.size());
  for (size_t k = 0; k < freqs.size(); ++k)
    for (int n = 0; n < length; ++n)
      v(n, static_cast<Eigen::Index>(k)) =
          std::exp(Cd(0.0, 2.0 * kPi * n * freqs[k]));
  return v;
}

}  // namespace

Eigen::VectorXd dual_polynomial(const DualWindow& dw, int oversample) {
  if (oversample < 4 || (oversample & (oversample - 1)) != 0)
    throw std::invalid_argument("dual_polynomial: oversample must be a power of two >= 4");
  if (dw.z_w.size() == 0) throw std::invalid_argument("dual_polynomial: empty dual");
  if (!dw.z_w.allFinite())
    throw std::invalid_argument("dual_polynomial: non-finite dual");
  const int m = oversample * static_cast<int>(dw.z_w.size());
  return fft_padded(dw.z_w, m).cwiseAbs();
}

std::vector<double> detect_support(const Eigen::VectorXd& h, double tau,
                                   double epsilon, int segment_length) {
  if (!(epsilon > 0.0) || !(epsilon < 0.5))
    throw std::invalid_argument("detect_support: epsilon must be in (0, 0.5)");
  if (segment_length < 1)
    throw std::invalid_argument("detect_support: invalid segment length");
  const int m = static_cast<int>(h.size());
  if (m < 3) return {};

  const double threshold = (1.0 - epsilon) * tau;
  std::vector<int> peaks;
  for (int k = 0; k < m; ++k) {
    const double prev = h[(k + m - 1) % m], next = h[(k + 1) % m];
    if (h[k] > prev && h[k] > next && h[k] >= threshold) peaks.push_back(k);
  }
  // Deduplicate inside the guard band, keeping whichever peak certifies best
  // (value closest to tau).
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
    return std::abs(h[a] - tau) < std::abs(h[b] - tau);
  });
  const double guard = 1.0 / (2.0 * segment_length);
  std::vector<double> accepted;
  for (int k : peaks) {
    const double f = static_cast<double>(k) / m;
    bool clear = true;
    for (double fa : accepted)
      if (circ_dist(f, fa) < guard) {
        clear = false;
        break;
      }
    if (clear) accepted.push_back(f);
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

double refine_peak(const Eigen::VectorXd& h, int peak_index) {
  const int m = static_cast<int>(h.size());
  if (m < 3) throw std::invalid_argument("refine_peak: need at least 3 bins");
  if (peak_index < 0 || peak_index >= m)
    throw std::invalid_argument("refine_peak: index out of range");
  const double hm = h[(peak_index + m - 1) % m];
  const double h0 = h[peak_index];
  const double hp = h[(peak_index + 1) % m];
  if (!(h0 > hm && h0 > hp))
    throw std::invalid_argument("refine_peak: index is not a strict local maximum");

  const double grid_f = static_cast<double>(peak_index) / m;
  // The log-parabola needs positive neighbors and genuine curvature.
  if (hm <= 0.0 || hp <= 0.0) return grid_f;
  const double lm = std::log(hm), l0 = std::log(h0), lp = std::log(hp);
  const double curvature = lm - 2.0 * l0 + lp;
  if (!(curvature < 0.0)) return grid_f;
  double delta = 0.5 * (lm - lp) / curvature;
  delta = std::clamp(delta, -0.5, 0.5);
  double f = (peak_index + delta) / m;
  f -= std::floor(f);
  return f;
}

Eigen::VectorXcd least_squares_amplitudes(const Eigen::VectorXcd& x_hat_w,
                                          const std::vector<double>& freqs) {
  const int length = static_cast<int>(x_hat_w.size());
  if (freqs.empty()) return Eigen::VectorXcd();
  if (static_cast<int>(freqs.size()) >= length)
    throw std::invalid_argument(
        "least_squares_amplitudes: need fewer frequencies than samples");
  const double min_sep = 1.0 / (4.0 * length);
  for (size_t a = 0; a < freqs.size(); ++a)
    for (size_t b = a + 1; b < freqs.size(); ++b)
      if (circ_dist(freqs[a], freqs[b]) < min_sep)
        throw std::runtime_error(
            "least_squares_amplitudes: frequencies " + std::to_string(freqs[a]) +
            " and " + std::to_string(freqs[b]) + " closer than 1/(4L)");
  const Eigen::MatrixXcd v = atom_matrix(length, freqs);
  return v.colPivHouseholderQr().solve(x_hat_w);
}

std::vector<std::pair<double, double>> vandermonde_decompose(
    const Eigen::MatrixXcd& T, double rank_tol) {
  const Eigen::Index L = T.rows();
  if (T.cols() != L || L == 0)
    throw std::invalid_argument("vandermonde_decompose: matrix must be square");
  if (!T.allFinite())
    throw std::invalid_argument("vandermonde_decompose: non-finite input");
  if (!(rank_tol > 0.0) || !(rank_tol < 1.0))
    throw std::invalid_argument("vandermonde_decompose: rank_tol must be in (0, 1)");
  const double scale = T.cwiseAbs().maxCoeff();
  if ((T - T.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, scale))
    throw std::invalid_argument("vandermonde_decompose: input is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (T + T.adjoint()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("vandermonde_decompose: eigendecomposition failed");
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const double lmax = ev.maxCoeff();
  if (lmax <= 0.0) return {};
  if (ev.minCoeff() < -1e-8 * lmax)
    throw std::invalid_argument("vandermonde_decompose: input is not PSD");

  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < L; ++i)
    if (ev[i] > rank_tol * lmax) ++rank;
  if (rank >= L)
    throw std::runtime_error(
        "vandermonde_decompose: full-rank input, decomposition not applicable");

  // Shift invariance of the signal subspace: with U spanning the atoms'
  // column space, the solution Psi of U[0:L-1] Psi = U[1:L] has the atom
  // rotations e^{i 2 pi f_k} as eigenvalues.
  const Eigen::MatrixXcd u_s = es.eigenvectors().rightCols(rank);
  const Eigen::MatrixXcd u0 = u_s.topRows(L - 1);
  const Eigen::MatrixXcd u1 = u_s.bottomRows(L - 1);
  const Eigen::MatrixXcd psi = u0.colPivHouseholderQr().solve(u1);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(psi);
  if (ces.info() != Eigen::Success)
    throw std::runtime_error("vandermonde_decompose: pencil eigensolve failed");

  std::vector<double> freqs(rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    double f = std::arg(ces.eigenvalues()[k]) / (2.0 * kPi);
    f -= std::floor(f);
    freqs[static_cast<size_t>(k)] = f;
  }
  std::sort(freqs.begin(), freqs.end());

  // Powers from the first column of T: T e_0 = sum_k p_k a(f_k), a real
  // least-squares problem after stacking real and imaginary parts.
  const Eigen::MatrixXcd v = atom_matrix(static_cast<int>(L), freqs);
  Eigen::MatrixXd vr(2 * L, rank);
  vr.topRows(L) = v.real();
  vr.bottomRows(L) = v.imag();
  Eigen::VectorXd rhs(2 * L);
  rhs.head(L) = T.col(0).real();
  rhs.tail(L) = T.col(0).imag();
  Eigen::VectorXd powers = vr.colPivHouseholderQr().solve(rhs);

  std::vector<std::pair<double, double>> out(static_cast<size_t>(rank));
  for (Eigen::Index k = 0; k < rank; ++k)
    out[static_cast<size_t>(k)] = {freqs[static_cast<size_t>(k)],
                                   std::max(0.0, powers[k])};
  return out;
}

TfDistribution assemble_tfd(const SupportSet& supports, const FramePlan& plan,
                            double sample_rate, int n_freq_bins) {
  if (n_freq_bins < plan.frame_length)
    throw std::invalid_argument("assemble_tfd: n_freq_bins must be >= frame length");
  if (!(sample_rate > 0.0))
    throw std::invalid_argument("assemble_tfd: sample_rate must be positive");

  TfDistribution out;
  const int rows = plan.num_frames;
  const int cols = n_freq_bins / 2;  // [0, sample_rate / 2)
  out.raster = Eigen::MatrixXd::Zero(rows, cols);
  out.time_axis.resize(rows);
  for (int w = 0; w < rows; ++w)
    out.time_axis[w] =
        (w * plan.hop + (plan.frame_length - 1) / 2.0) / sample_rate;
  out.freq_axis.resize(cols);
  for (int k = 0; k < cols; ++k)
    out.freq_axis[k] = k * sample_rate / n_freq_bins;

  for (const WindowSupport& ws : supports) {
    if (ws.window_index < 0 || ws.window_index >= rows)
      throw std::invalid_argument("assemble_tfd: window index out of range");
    for (const SupportPoint& p : ws.points) {
      const double mag = std::abs(p.amplitude);
      int bin = static_cast<int>(std::lround(p.frequency * n_freq_bins));
      bin = std::clamp(bin, 0, cols - 1);
      out.raster(ws.window_index, bin) += mag;
      out.sparse.push_back({ws.window_index, out.time_axis[ws.window_index],
                            p.frequency * sample_rate, mag, p.certificate});
    }
  }
  return out;
}

SupportSet localize(const AstProblem& problem, const AstSolution& sol,
                    int oversample, double epsilon) {
  const FramePlan& plan = problem.plan;
  if (sol.z_hat.rows() != plan.frame_length || sol.z_hat.cols() != plan.num_frames)
    throw std::invalid_argument("localize: solution shape does not match plan");
  const int L = plan.frame_length;

  SupportSet supports;
  supports.reserve(plan.num_frames);
  for (int w = 0; w < plan.num_frames; ++w) {
    const Eigen::VectorXd h = dual_polynomial({sol.z_hat.col(w), problem.tau},
                                              oversample);
    std::vector<double> freqs = detect_support(h, problem.tau, epsilon, L);
    // The amplitude fit needs strictly fewer atoms than samples; in the
    // (pathological) case of more detections, keep the best-certified ones.
    if (static_cast<int>(freqs.size()) >= L) {
      const int m = static_cast<int>(h.size());
      std::sort(freqs.begin(), freqs.end(), [&](double a, double b) {
        const int ka = static_cast<int>(std::lround(a * m)) % m;
        const int kb = static_cast<int>(std::lround(b * m)) % m;
        return std::abs(h[ka] - problem.tau) < std::abs(h[kb] - problem.tau);
      });
      freqs.resize(static_cast<size_t>(L - 1));
      std::sort(freqs.begin(), freqs.end());
    }

    WindowSupport ws;
    ws.window_index = w;
    std::vector<double> refined;
    refined.reserve(freqs.size());
    for (double f : freqs) {
      const int m = static_cast<int>(h.size());
      const int k = static_cast<int>(std::lround(f * m)) % m;
      double fr;
      try {
        fr = refine_peak(h, k);
      } catch (const std::invalid_argument&) {
        fr = f;
      }
      refined.push_back(fr);
      SupportPoint p;
      p.frequency = fr;
      p.certificate = h[k];
      ws.points.push_back(p);
    }
    if (!refined.empty()) {
      const Eigen::VectorXcd amps =
          least_squares_amplitudes(sol.x_hat.col(w), refined);
      for (size_t i = 0; i < ws.points.size(); ++i)
        ws.points[i].amplitude = amps[static_cast<Eigen::Index>(i)];
    }
    std::sort(ws.points.begin(), ws.points.end(),
              [](const SupportPoint& a, const SupportPoint& b) {
                return a.frequency < b.frequency;
              });
    supports.push_back(std::move(ws));
  }
  return supports;
}

}  // namespace asttf
