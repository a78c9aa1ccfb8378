#include "ggcsim/demod.hpp"

#include <cmath>
#include <set>

#include "ggcsim/errors.hpp"

namespace ggcsim::demod {

void SignalModel::validate() const {
  if (!(omega_m > 0.0)) throw ModelViolationError("SignalModel: omega_m must be positive");
  std::set<int> seen;
  for (const Harmonic& h : harmonics) {
    if (h.k < 1) throw ModelViolationError("SignalModel: harmonics require k >= 1");
    if (!seen.insert(h.k).second) {
      throw ModelViolationError("SignalModel: duplicate harmonic index");
    }
  }
}

double demodulate_continuous(const SignalModel& signal, double tau) {
  signal.validate();
  if (!(tau > 0.0)) throw ModelViolationError("demodulate_continuous: tau must be positive");
  const double x = signal.omega_m * tau;

  double out = signal.violation_amp * (1.0 + std::sin(2.0 * x) / (2.0 * x));
  out += signal.const_term * 2.0 * std::sin(x) / x;
  for (const Harmonic& h : signal.harmonics) {
    if (h.k == 1) {
      out += h.amplitude * (1.0 + std::sin(2.0 * x) / (2.0 * x));
    } else {
      const double km = static_cast<double>(h.k - 1);
      const double kp = static_cast<double>(h.k + 1);
      out += (h.amplitude / x) * (std::sin(km * x) / km + std::sin(kp * x) / kp);
    }
  }
  return out;
}

double demodulate_bound(const SignalModel& signal, double tau) {
  signal.validate();
  if (!(tau > 0.0)) throw ModelViolationError("demodulate_bound: tau must be positive");
  const double x = signal.omega_m * tau;

  double dc = std::abs(signal.violation_amp);
  double sum_high = 0.0;
  for (const Harmonic& h : signal.harmonics) {
    if (h.k == 1) {
      dc += std::abs(h.amplitude);
    } else {
      sum_high += std::abs(h.amplitude);
    }
  }
  return dc + (2.0 / x) * (0.5 * dc + std::abs(signal.const_term) + (4.0 / 3.0) * sum_high);
}

double demodulate_discrete(const std::vector<Sample>& samples, double omega_m) {
  if (samples.empty()) throw ModelViolationError("demodulate_discrete: empty sample list");
  if (samples.size() > 1) {
    const double dt = samples[1].t - samples[0].t;
    if (!(dt > 0.0)) throw ModelViolationError("demodulate_discrete: samples must advance in time");
    for (size_t i = 1; i < samples.size(); ++i) {
      const double step = samples[i].t - samples[i - 1].t;
      if (std::abs(step - dt) > 1e-9 * std::abs(dt)) {
        throw ModelViolationError("demodulate_discrete: samples must be uniformly spaced");
      }
    }
  }
  double acc = 0.0;
  for (const Sample& s : samples) acc += s.a * std::cos(omega_m * s.t);
  return 2.0 * acc / static_cast<double>(samples.size());
}

namespace {

double species_term(const SpeciesNoise& s) {
  if (!(s.contrast > 0.0 && s.contrast <= 1.0)) {
    throw ModelViolationError("shot_noise_sigma: contrast must lie in (0, 1]");
  }
  if (!(s.atoms > 0.0) || !(s.k_eff > 0.0) || !(s.T > 0.0)) {
    throw ModelViolationError("shot_noise_sigma: atoms, k_eff and T must be positive");
  }
  return 1.0 / (s.contrast * s.k_eff * s.T * s.T * std::sqrt(s.atoms));
}

// sum_{m=1}^{n} cos^2(theta m) = n/2 + sin(n theta) cos((n+1) theta) / (2 sin theta)
double cos2_sum(long n, double theta) {
  const double s = std::sin(theta);
  if (std::abs(s) < 1e-8) {
    double acc = 0.0;
    for (long m = 1; m <= n; ++m) {
      const double c = std::cos(theta * static_cast<double>(m));
      acc += c * c;
    }
    return acc;
  }
  const double nd = static_cast<double>(n);
  return 0.5 * nd + std::sin(nd * theta) * std::cos((nd + 1.0) * theta) / (2.0 * s);
}

}  // namespace

double shot_noise_sigma(const NoiseModel& noise) {
  const double a = species_term(noise.species_a);
  const double b = species_term(noise.species_b);
  return std::hypot(a, b);
}

double sigma_eta_asymptotic(const NoiseModel& noise, double g0, long n) {
  if (n < 1) throw ModelViolationError("sigma_eta: n must be at least 1");
  return shot_noise_sigma(noise) * std::sqrt(2.0) / (g0 * std::sqrt(static_cast<double>(n)));
}

double sigma_eta_exact(const NoiseModel& noise, double g0, long n, double omega_orbit) {
  if (n < 1) throw ModelViolationError("sigma_eta: n must be at least 1");
  const double s2 = cos2_sum(n, omega_orbit * noise.cycle_time);
  return shot_noise_sigma(noise) / (g0 * std::sqrt(s2));
}

}  // namespace ggcsim::demod
