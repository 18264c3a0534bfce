#pragma once

#include <vector>

#include "asttf/framing.hpp"
#include "asttf/signal.hpp"

namespace asttf {

// Rectangular time-frequency map: rows = analysis windows (time axis in
// seconds at window centers), cols = frequency bins (Hz). Entries are
// magnitudes or energies depending on the producing method.
struct TfMatrix {
  Eigen::MatrixXd values;
  Eigen::VectorXd time_axis;
  Eigen::VectorXd freq_axis;
};

// Short-time Fourier transform magnitude: per window, the zero-padded
// nfft-point FFT of the windowed segment. nfft >= frame length.
TfMatrix stft(const ComplexSignal& x, const FramePlan& plan, int nfft);

// Spectrogram reassignment: spectrogram energy |F|^2 of each cell is moved to
// the locally estimated center of gravity
//   t_hat = t + Re{F_tw conj(F_w)} / |F_w|^2    (samples)
//   f_hat = f - Im{F_dw conj(F_w)} / (2 pi |F_w|^2)   (cycles/sample)
// computed from auxiliary STFTs with the derivative window dw/dn (closed form
// for the Gaussian) and the time-weighted window (n - center) * w. Cells with
// energy below 1e-12 of the global maximum are dropped; everything above the
// floor is conserved exactly.
TfMatrix reassign(const ComplexSignal& x, const FramePlan& plan, int nfft);

// Per-window sparse coding on an oversampled DFT dictionary V of
// dict_oversample * L on-grid atoms:
//   min_c 1/2 ||x_w - V c||^2 + lambda ||c||_1
// solved by a monotone accelerated proximal-gradient iteration (objective
// non-increasing every step). The returned matrix holds |c| per window.
TfMatrix stft_l1(const ComplexSignal& x, const FramePlan& plan,
                 int dict_oversample, double lambda, int max_iters);

// Full result of the stft_l1 solve, for callers that need the coefficients
// (resynthesis) or the per-window objective traces.
struct StftL1Result {
  TfMatrix tf;
  Eigen::MatrixXcd coeffs;  // (dict_oversample * L) x W
  std::vector<std::vector<double>> objective_traces;  // one per window
};

StftL1Result stft_l1_solve(const ComplexSignal& x, const FramePlan& plan,
                           int dict_oversample, double lambda, int max_iters);

}  // namespace asttf
