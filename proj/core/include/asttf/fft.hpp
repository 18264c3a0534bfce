#pragma once

#include <Eigen/Core>
#include <complex>

namespace asttf {

// Thin wrappers around FFTW double-precision transforms. Plans are cached per
// (size, direction) behind a mutex, so calls are thread-safe and repeated
// transforms of the same length reuse the plan. All functions are pure with
// respect to their arguments.

// Unnormalized forward DFT: out[k] = sum_n in[n] exp(-i 2 pi k n / N).
Eigen::VectorXcd fft(const Eigen::VectorXcd& in);

// Inverse DFT including the 1/N factor, so ifft(fft(x)) == x.
Eigen::VectorXcd ifft(const Eigen::VectorXcd& in);

// Forward DFT of the input zero-padded (or truncated) to length n.
Eigen::VectorXcd fft_padded(const Eigen::VectorXcd& in, int n);

}  // namespace asttf
