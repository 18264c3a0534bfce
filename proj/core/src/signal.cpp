#include "asttf/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "asttf/fft.hpp"

namespace asttf {

namespace {

constexpr double kPi = std::numbers::pi;

void check_signal_args(double sample_rate, int length) {
  if (sample_rate <= 0.0) throw std::invalid_argument("sample_rate must be positive");
  if (length < 1) throw std::invalid_argument("length must be >= 1");
}

// Deterministic standard-normal stream: Box-Muller over mt19937_64. Written
// out explicitly (rather than std::normal_distribution) because the standard
// leaves that distribution's algorithm unspecified, and we want identical
// noise realizations for a given seed on every platform.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 53-bit uniforms; u1 shifted into (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

Signal generate_test_signal(double sample_rate, int length) {
  check_signal_args(sample_rate, length);
  Signal out;
  out.sample_rate = sample_rate;
  out.samples.resize(length);
  for (int n = 0; n < length; ++n) {
    const double t = n / sample_rate;
    const double d = 0.5 - std::abs(t - 0.5);
    const double x1 = (1.0 - 0.5 * std::cos(2.0 * kPi * t)) *
                      std::cos(700.0 * kPi * t - 15.0 * std::cos(12.0 * kPi * d * d));
    const double x2 =
        (t < 0.5) ? std::cos(450.0 * kPi * t - 300.0 * kPi * t * t)
                  : std::cos(450.0 * kPi * t - 600.0 * kPi * t * t +
                             400.0 * kPi * t * t * t + kPi);
    out.samples[n] = x1 + x2;
  }
  return out;
}

Signal generate_bat_chirp(double sample_rate, int length) {
  check_signal_args(sample_rate, length);
  Signal out;
  out.sample_rate = sample_rate;
  out.samples.setZero(length);
  const double duration = length / sample_rate;
  // Two descending pulses centered at 30% and 70% of the record, each lasting
  // about a quarter of it. The fundamental sweeps hyperbolically from 0.23 fs
  // down to 0.08 fs, keeping the second harmonic below Nyquist throughout.
  const double pulse_len = 0.25 * duration;
  const double f_hi = 0.23 * sample_rate, f_lo = 0.08 * sample_rate;
  const double df = f_hi - f_lo;
  for (double center_frac : {0.3, 0.7}) {
    const double t0 = center_frac * duration;
    for (int n = 0; n < length; ++n) {
      const double t = n / sample_rate;
      const double u = (t - t0) / pulse_len;  // -0.5..0.5 across the pulse
      if (u < -0.5 || u > 0.5) continue;
      const double envelope = std::exp(-0.5 * (u / 0.18) * (u / 0.18));
      const double s = u + 0.5;  // 0..1 across the pulse
      // Instantaneous frequency f(s) = f_hi f_lo / (f_lo + (f_hi - f_lo) s)
      // descends from f_hi to f_lo; the phase is its integral in closed form.
      const double phase = 2.0 * kPi * pulse_len * (f_hi * f_lo / df) *
                           std::log1p(df * s / f_lo);
      out.samples[n] += envelope * (std::cos(phase) + 0.25 * std::cos(2.0 * phase));
    }
  }
  return out;
}

double mean_power(const Signal& s) {
  if (s.samples.size() == 0) throw std::invalid_argument("mean_power: empty signal");
  return s.samples.squaredNorm() / static_cast<double>(s.samples.size());
}

double sigma_for_snr_db(const Signal& s, double snr_db) {
  const double p = mean_power(s);
  return std::sqrt(p * std::pow(10.0, -snr_db / 10.0));
}

Signal add_noise(const Signal& s, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be >= 0");
  Signal out = s;
  GaussianSource gauss(seed);
  for (Eigen::Index n = 0; n < out.samples.size(); ++n)
    out.samples[n] += sigma * gauss.next();
  return out;
}

Signal add_noise_snr_db(const Signal& s, double snr_db, std::uint64_t seed) {
  return add_noise(s, sigma_for_snr_db(s, snr_db), seed);
}

ComplexSignal analytic_signal(const Signal& s) {
  const Eigen::Index n = s.samples.size();
  if (n < 2) throw std::invalid_argument("analytic_signal: need at least 2 samples");
  Eigen::VectorXcd spec = fft(s.samples.cast<std::complex<double>>());
  // One-sided spectrum: keep DC (and Nyquist when present), double the
  // strictly positive bins, zero the negative half.
  const Eigen::Index half = n / 2;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (n % 2 == 0) {
      if (k < half)
        spec[k] *= 2.0;
      else if (k > half)
        spec[k] = 0.0;
    } else {
      if (k <= half)
        spec[k] *= 2.0;
      else
        spec[k] = 0.0;
    }
  }
  return ComplexSignal{ifft(spec), s.sample_rate};
}

ComplexSignal analytic_signal(const ComplexSignal& s) {
  const Eigen::Index n = s.samples.size();
  if (n < 2) throw std::invalid_argument("analytic_signal: need at least 2 samples");
  Eigen::VectorXcd spec = fft(s.samples);
  // Projection only: zero the negative-frequency bins (everything above n/2),
  // no doubling, so the map is idempotent and fixes already-analytic inputs.
  for (Eigen::Index k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
  return ComplexSignal{ifft(spec), s.sample_rate};
}

}  // namespace asttf
