#include "asttf/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace asttf {

namespace {

// Cache of FFTW plans keyed by (length, sign). Plans are created with
// FFTW_UNALIGNED so they can execute on arbitrary heap buffers via
// fftw_execute_dft; FFTW_ESTIMATE keeps planning cheap and deterministic.
std::mutex g_plan_mutex;
std::map<std::pair<int, int>, fftw_plan>& plan_cache() {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  return cache;
}

fftw_plan get_plan(int n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = plan_cache().find(key);
  if (it != plan_cache().end()) return it->second;
  fftw_complex* scratch = fftw_alloc_complex(static_cast<size_t>(n));
  fftw_plan plan = fftw_plan_dft_1d(n, scratch, scratch, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  plan_cache()[key] = plan;
  return plan;
}

Eigen::VectorXcd execute(const Eigen::VectorXcd& in, int sign) {
  if (in.size() == 0) throw std::invalid_argument("fft: empty input");
  const int n = static_cast<int>(in.size());
  fftw_plan plan = get_plan(n, sign);
  Eigen::VectorXcd out(n);
  // fftw_complex and std::complex<double> are layout-compatible.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
  return out;
}

}  // namespace

Eigen::VectorXcd fft(const Eigen::VectorXcd& in) { return execute(in, FFTW_FORWARD); }

Eigen::VectorXcd ifft(const Eigen::VectorXcd& in) {
  Eigen::VectorXcd out = execute(in, FFTW_BACKWARD);
  out /= static_cast<double>(in.size());
  return out;
}

Eigen::VectorXcd fft_padded(const Eigen::VectorXcd& in, int n) {
  if (n <= 0) throw std::invalid_argument("fft_padded: length must be positive");
  Eigen::VectorXcd buf = Eigen::VectorXcd::Zero(n);
  const int m = std::min<int>(n, static_cast<int>(in.size()));
  buf.head(m) = in.head(m);
  return fft(buf);
}

}  // namespace asttf
