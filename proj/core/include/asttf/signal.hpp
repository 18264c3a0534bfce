#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>

namespace asttf {

// A real discrete-time signal sampled uniformly at sample_rate Hz; sample n
// sits at t = n / sample_rate.
struct Signal {
  Eigen::VectorXd samples;
  double sample_rate = 1.0;
};

// Complex-valued counterpart, used for analytic signals and reconstructed
// outputs.
struct ComplexSignal {
  Eigen::VectorXcd samples;
  double sample_rate = 1.0;
};

// Two-component synthetic test signal on t = n / sample_rate:
//   x1(t) = (1 - 0.5 cos(2 pi t)) * cos(700 pi t - 15 cos(12 pi (0.5 - |t - 0.5|)^2))
//   x2(t) = cos(450 pi t - 300 pi t^2)                        for t < 0.5
//           cos(450 pi t - 600 pi t^2 + 400 pi t^3 + pi)      for t >= 0.5
//   x(t)  = x1(t) + x2(t)
// x1 is an AM tone around 350 Hz with a rapidly oscillating instantaneous
// frequency; x2 sweeps linearly from 225 Hz down to 75 Hz and then bends
// quadratically back up to 225 Hz. Both chirp branches and their instantaneous
// frequencies agree at t = 0.5. Requires length >= 1 and sample_rate > 0.
Signal generate_test_signal(double sample_rate, int length);

// Synthetic stand-in for an echolocation pulse train: a hyperbolically
// descending chirp with a Gaussian envelope, repeated twice, plus a weak
// second harmonic. Spans roughly 0.12 to 0.38 of the sampling rate so it
// exercises the same analysis path as a recorded ultrasound snippet.
Signal generate_bat_chirp(double sample_rate, int length);

// Mean of s[n]^2 over the signal.
double mean_power(const Signal& s);

// Noise standard deviation that realizes the requested SNR (in dB) against
// the measured mean power of s.
double sigma_for_snr_db(const Signal& s, double snr_db);

// Additive white Gaussian noise with standard deviation sigma. The generator
// is a fixed Box-Muller transform over mt19937_64, so a given (signal, sigma,
// seed) triple yields byte-identical output on every platform. sigma >= 0.
Signal add_noise(const Signal& s, double sigma, std::uint64_t seed);

// Convenience overload: derives sigma from the measured signal power via
// sigma_for_snr_db, then adds noise as above.
Signal add_noise_snr_db(const Signal& s, double snr_db, std::uint64_t seed);

// Discrete analytic signal: one-sided spectrum, real part equal to the input.
// Requires length >= 2.
ComplexSignal analytic_signal(const Signal& s);

// Projection of a complex signal onto one-sided spectra (negative-frequency
// bins zeroed, no doubling). Idempotent; leaves already-analytic inputs
// unchanged.
ComplexSignal analytic_signal(const ComplexSignal& s);

}  // namespace asttf
