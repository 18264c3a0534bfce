#include "asttf/framing.hpp"

#include <cmath>
#include <stdexcept>

namespace asttf {

FramePlan make_frame_plan(int n, int frame_length, int hop, double window_sigma_ratio) {
  if (frame_length < 1) throw std::invalid_argument("frame_length must be >= 1");
  if (hop < 1 || hop > frame_length)
    throw std::invalid_argument("hop must satisfy 1 <= hop <= frame_length");
  if (n < frame_length)
    throw std::invalid_argument("signal shorter than one frame");
  if (!(window_sigma_ratio > 0.0))
    throw std::invalid_argument("window_sigma_ratio must be positive");

  FramePlan plan;
  plan.frame_length = frame_length;
  plan.hop = hop;
  plan.original_length = n;
  plan.window_sigma_ratio = window_sigma_ratio;
  // Pad so the last window ends exactly at the signal end.
  const int span = n - frame_length;
  const int num_hops = (span + hop - 1) / hop;
  plan.num_frames = num_hops + 1;
  plan.padded_length = num_hops * hop + frame_length;

  plan.window.resize(frame_length);
  if (window_sigma_ratio == kRectangularWindow) {
    plan.window.setOnes();
  } else {
    const double sigma = window_sigma_ratio * frame_length;
    const double center = (frame_length - 1) / 2.0;
    for (int m = 0; m < frame_length; ++m) {
      const double z = (m - center) / sigma;
      plan.window[m] = std::exp(-0.5 * z * z);
    }
  }

  plan.synthesis_norm.setZero(plan.padded_length);
  for (int w = 0; w < plan.num_frames; ++w)
    plan.synthesis_norm.segment(w * hop, frame_length) +=
        plan.window.cwiseProduct(plan.window);

  // Every sample must receive usable window weight, otherwise the overlap-add
  // division blows up. Catches e.g. very narrow Gaussians with a large hop.
  const double floor = 1e-12 * plan.synthesis_norm.maxCoeff();
  if (plan.synthesis_norm.minCoeff() <= floor)
    throw std::invalid_argument(
        "window/hop combination leaves samples without synthesis weight");
  return plan;
}

ComplexSignal pad_to_plan(const ComplexSignal& x, const FramePlan& plan) {
  const Eigen::Index n = x.samples.size();
  if (n == plan.padded_length) return x;
  if (n != plan.original_length)
    throw std::invalid_argument("signal length does not match plan");
  ComplexSignal out;
  out.sample_rate = x.sample_rate;
  out.samples.setZero(plan.padded_length);
  out.samples.head(n) = x.samples;
  return out;
}

FrameStack frame(const ComplexSignal& x, const FramePlan& plan) {
  const ComplexSignal padded = pad_to_plan(x, plan);
  FrameStack out;
  out.frames.resize(plan.frame_length, plan.num_frames);
  for (int w = 0; w < plan.num_frames; ++w)
    out.frames.col(w) = plan.window.cast<std::complex<double>>().cwiseProduct(
        padded.samples.segment(w * plan.hop, plan.frame_length));
  return out;
}

ComplexSignal dewindow_apply(const FramePlan& plan, const FrameStack& frames,
                             double sample_rate) {
  if (frames.frames.rows() != plan.frame_length ||
      frames.frames.cols() != plan.num_frames)
    throw std::invalid_argument("frame stack shape does not match plan");
  ComplexSignal out;
  out.sample_rate = sample_rate;
  out.samples.setZero(plan.padded_length);
  for (int w = 0; w < plan.num_frames; ++w)
    out.samples.segment(w * plan.hop, plan.frame_length) +=
        plan.window.cast<std::complex<double>>().cwiseProduct(frames.frames.col(w));
  out.samples.array() /= plan.synthesis_norm.array().cast<std::complex<double>>();
  return out;
}

FrameStack dewindow_adjoint(const FramePlan& plan, const ComplexSignal& y) {
  const ComplexSignal padded = pad_to_plan(y, plan);
  // Divide by the synthesis normalizer first, then window each segment; this
  // is exactly the transpose of dewindow_apply.
  Eigen::VectorXcd scaled =
      padded.samples.array() / plan.synthesis_norm.array().cast<std::complex<double>>();
  FrameStack out;
  out.frames.resize(plan.frame_length, plan.num_frames);
  for (int w = 0; w < plan.num_frames; ++w)
    out.frames.col(w) = plan.window.cast<std::complex<double>>().cwiseProduct(
        scaled.segment(w * plan.hop, plan.frame_length));
  return out;
}

ComplexSignal trim_to_original(const ComplexSignal& x, const FramePlan& plan) {
  if (x.samples.size() != plan.padded_length)
    throw std::invalid_argument("signal length does not match plan");
  ComplexSignal out;
  out.sample_rate = x.sample_rate;
  out.samples = x.samples.head(plan.original_length);
  return out;
}

}  // namespace asttf
