#pragma once

#include <limits>

#include "asttf/signal.hpp"

namespace asttf {

// Sentinel for make_frame_plan's window_sigma_ratio selecting an all-ones
// (rectangular) window instead of a Gaussian.
inline constexpr double kRectangularWindow = std::numeric_limits<double>::infinity();

// Geometry and window of an overlapped segmentation. Window w covers samples
// [w*hop, w*hop + frame_length) of the signal after zero-padding to
// padded_length, which is the smallest length >= original_length for which
// the last window ends exactly at the signal end.
struct FramePlan {
  int frame_length = 0;     // L, samples per window
  int hop = 0;              // H, window spacing
  int num_frames = 0;       // W
  int original_length = 0;  // signal length the plan was built for
  int padded_length = 0;    // (num_frames - 1) * hop + frame_length
  double window_sigma_ratio = 0.0;  // sigma / L of the Gaussian, or infinity
  Eigen::VectorXd window;           // length frame_length
  // Per-sample sum of squared overlapped window values; the normalizer that
  // makes overlap-add reconstruction exact.
  Eigen::VectorXd synthesis_norm;
};

// Build a plan for a length-n signal with Gaussian analysis window
// w[m] = exp(-((m - c) / (ratio * L))^2 / 2), c = (L - 1) / 2, or rectangular
// when ratio is kRectangularWindow. Requires 1 <= hop <= frame_length <= n and
// ratio > 0. Throws if the overlapped window coverage leaves any sample of the
// padded signal with (numerically) zero synthesis weight.
FramePlan make_frame_plan(int n, int frame_length, int hop, double window_sigma_ratio);

// Windowed segments, one column per window: frames(m, w) = window[m] * x[w*hop + m].
struct FrameStack {
  Eigen::MatrixXcd frames;  // frame_length x num_frames
};

// Zero-pad (or pass through) a signal to the plan's padded_length. The input
// length must equal original_length or padded_length.
ComplexSignal pad_to_plan(const ComplexSignal& x, const FramePlan& plan);

// Cut the windowed segments out of x. Accepts a signal of original_length
// (padded internally) or padded_length.
FrameStack frame(const ComplexSignal& x, const FramePlan& plan);

// Overlap-add synthesis D: divide each window's contribution back out by the
// synthesis normalizer, so that dewindow_apply(plan, frame(x, plan)) == x for
// any x of padded_length. Output has padded_length samples.
ComplexSignal dewindow_apply(const FramePlan& plan, const FrameStack& frames,
                             double sample_rate = 1.0);

// Adjoint of dewindow_apply: (D* y)(m, w) = window[m] * y[w*hop + m] /
// synthesis_norm[w*hop + m]. Satisfies <D f, y> == <f, D* y> exactly.
FrameStack dewindow_adjoint(const FramePlan& plan, const ComplexSignal& y);

// Drop the zero-padding tail: first original_length samples.
ComplexSignal trim_to_original(const ComplexSignal& x, const FramePlan& plan);

}  // namespace asttf
