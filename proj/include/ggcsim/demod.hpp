#pragma once

#include <vector>

namespace ggcsim::demod {

/// One higher-harmonic systematic term: amplitude of cos(k * omega_m * t).
struct Harmonic {
  int k = 1;
  double amplitude = 0.0;  // m/s^2
};

/// Frequency decomposition of the differential-acceleration signal:
///   da(t) = violation * cos(w t) + constant + sum_k harmonics_k cos(k w t).
struct SignalModel {
  double violation_amp = 0.0;       // m/s^2, modulated at omega_m
  double const_term = 0.0;          // m/s^2
  std::vector<Harmonic> harmonics;  // k >= 1, distinct
  double omega_m = 0.0;             // rad/s

  void validate() const;
};

/// Exact closed form of (2/tau) * integral of da(t) cos(omega_m t) dt over
/// [0, tau], all cross terms included. tau > 0.
double demodulate_continuous(const SignalModel& signal, double tau);

/// Worst-case upper bound of the same integral (the trigonometric factors
/// replaced by their envelopes).
double demodulate_bound(const SignalModel& signal, double tau);

struct Sample {
  double t = 0.0;  // s
  double a = 0.0;  // m/s^2
};

/// Discrete demodulation (2/n) * sum a_m cos(omega_m t_m) over uniformly
/// spaced samples. Throws on empty or non-uniform input.
double demodulate_discrete(const std::vector<Sample>& samples, double omega_m);

/// Per-species interferometer parameters entering the shot-noise formula.
struct SpeciesNoise {
  double k_eff = 0.0;    // rad/m
  double T = 0.0;        // s
  double atoms = 0.0;    // N
  double contrast = 1.0; // C in (0, 1]
};

struct NoiseModel {
  SpeciesNoise species_a;
  SpeciesNoise species_b;
  double cycle_time = 0.0;  // s
};

/// Single-shot quantum projection noise of the differential acceleration,
/// quadrature sum of the two species' terms 1/(C k T^2 sqrt(N)).
double shot_noise_sigma(const NoiseModel& noise);

/// Statistical Eotvos-parameter uncertainty after n measurements, the
/// asymptotic form sigma * sqrt(2) / (g0 * sqrt(n)).
double sigma_eta_asymptotic(const NoiseModel& noise, double g0, long n);

/// Same from the exact covariance of the modulated least-squares fit:
/// sigma / (g0 * sqrt(sum_m cos^2(omega_orbit m Tc))).
double sigma_eta_exact(const NoiseModel& noise, double g0, long n, double omega_orbit);

}  // namespace ggcsim::demod
