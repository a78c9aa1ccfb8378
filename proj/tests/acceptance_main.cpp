// Acceptance suite: end-to-end checks of the compensation solver, the
// statistics and the mission integration curves at pinned tolerances.
// Prints one PASS/FAIL line per criterion and exits nonzero on failure.

#include <Eigen/Geometry>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ggcsim/budget.hpp"
#include "ggcsim/compensation.hpp"
#include "ggcsim/demod.hpp"
#include "ggcsim/dynamics.hpp"
#include "ggcsim/mission_config.hpp"
#include "ggcsim/orbitgrav.hpp"

using namespace ggcsim;
using namespace ggcsim::dynamics;
using compensation::CompensationShifts;
using compensation::first_order_shifts;
using compensation::solve_shifts;
using ggcsim::constants::kPi;
using ggcsim::constants::kTwoPi;
using orbitgrav::GradientTensor;
using orbitgrav::OrbitalPhase;
using orbitgrav::OrbitModel;

namespace {

struct Reporter {
  int failures = 0;

  void run(int id, const std::string& label, double time_limit_s,
           const std::function<bool(std::ostream&)>& body) {
    std::ostringstream detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = body(detail);
    } catch (const std::exception& e) {
      detail << " exception: " << e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > time_limit_s) {
      ok = false;
      detail << " [over time limit " << time_limit_s << " s]";
    }
    if (!ok) ++failures;
    std::printf("[%s] criterion %d (%.2f s): %s%s\n", ok ? "PASS" : "FAIL", id, dt,
                label.c_str(), detail.str().c_str());
    std::fflush(stdout);
  }
};

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::abs(b);
}

PulseSequence rb_pulses(double T = 20.0) {
  PulseSequence p;
  p.k_eff = 8.0 * kPi / 780e-9;
  p.T = T;
  return p;
}

// --- criterion bodies -------------------------------------------------

bool ground_case(std::ostream& out) {
  const double g = 2.0 * constants::kEarthGM /
                   std::pow(constants::kEarthRadius, 3.0);
  GradientTensor t;
  t.xx = -0.5 * g;
  t.yy = 0.5 * g;
  t.zz = g;
  const auto s = solve_shifts(FrameModel::with_static_tensor(t), rb_pulses());
  const double want = 0.5 * g * 400.0;
  out << " dz2 = " << s.dz2 << " vs gamma T^2/2 = " << want;
  return s.converged && close_rel(s.dz2, want, 2.0 * g * 400.0) && std::abs(s.dx2) < 1e-9 &&
         std::abs(s.dx3) < 1e-9 && std::abs(s.dz3) < 1e-9;
}

bool rotation_case(std::ostream& out) {
  const double wy = 1e-3, T = 20.0;
  const auto frame = FrameModel::free_fall().set_spin(Vec3(0.0, wy, 0.0));
  const auto s = solve_shifts(frame, rb_pulses(T));
  const double e1 = std::abs(s.dx2 + std::sin(wy * T));
  const double e2 = std::abs(s.dz2 - (std::cos(wy * T) - 1.0));
  const double e3 = std::abs(s.dx3 + std::sin(2.0 * wy * T));
  const double e4 = std::abs(s.dz3 - (std::cos(2.0 * wy * T) - 1.0));
  out << " max deviation = " << std::max({e1, e2, e3, e4});
  return std::max({e1, e2, e3, e4}) <= 1e-10;
}

bool seed_and_extrema(std::ostream& out) {
  const auto mission = config::table1_preset().mission_model();
  const auto frame = FrameModel::inertial_orbit(mission.orbit, OrbitalPhase(0.0),
                                                TensorEvolution::circular, mission.gamma_signed);
  const auto grid = compensation::uniform_chi_grid(720);
  const auto sweep = compensation::shifts_sweep(frame, mission.species_a.pulses(), grid);

  const double T = mission.species_a.T;
  const double gT2 = std::abs(mission.gamma_signed) * T * T;
  const double bound = 5.0 * gT2 * gT2;
  double worst = 0.0;
  double max_theta = 0.0, max_df = 0.0;
  for (size_t i = 0; i < sweep.size(); ++i) {
    const auto seed = first_order_shifts(mission.gamma_signed, T, mission.orbit.omega_orbit(),
                                         grid[i]);
    worst = std::max({worst, std::abs(sweep[i].dx2 - seed.dx2), std::abs(sweep[i].dz2 - seed.dz2),
                      std::abs(sweep[i].dx3 - seed.dx3), std::abs(sweep[i].dz3 - seed.dz3)});
    const auto laser = compensation::shifts_to_laser(sweep[i], mission.species_a.k_eff());
    max_theta = std::max({max_theta, std::abs(laser.theta2), std::abs(laser.theta3)});
    max_df = std::max({max_df, std::abs(laser.df2), std::abs(laser.df3)});
  }
  out << " |converged-seed| = " << worst << " (bound " << bound << "), tilt extremum = "
      << max_theta * 1e6 << " urad, frequency extremum = " << max_df / 1e9 << " GHz";
  return worst <= bound && close_rel(max_theta, 300e-6, 0.2) && close_rel(max_df, 150e9, 0.2);
}

bool nulling_ratio(std::ostream& out) {
  const auto mission = config::table1_preset().mission_model();
  double worst_ratio = 1e300;
  for (int i = 0; i < 24; ++i) {
    const double chi = kTwoPi * i / 24.0;
    const auto frame = budget::mission_frame(mission, chi);
    const auto solved = solve_shifts(frame, mission.species_a.pulses());
    for (const auto& species : {mission.species_a, mission.species_b}) {
      const auto bare = budget::normalized_coefficients(frame, species, {});
      const auto comp = budget::normalized_coefficients(frame, species, solved);
      const double scale_unshifted =
          std::max({std::abs(bare.a.x()), std::abs(bare.a.z()), std::abs(bare.b.x()),
                    std::abs(bare.b.z())});
      const double scale_shifted =
          std::max({std::abs(comp.a.x()), std::abs(comp.a.z()), std::abs(comp.b.x()),
                    std::abs(comp.b.z())});
      worst_ratio = std::min(worst_ratio, scale_unshifted / scale_shifted);
    }
  }
  out << " worst reduction factor = " << worst_ratio;
  return worst_ratio >= 1e4;
}

bool shot_noise_statistics(std::ostream& out) {
  const auto mission = config::table1_preset().mission_model();
  demod::NoiseModel noise;
  noise.species_a = {mission.species_a.k_eff(), mission.species_a.T, mission.species_a.atoms,
                     mission.species_a.contrast};
  noise.species_b = {mission.species_b.k_eff(), mission.species_b.T, mission.species_b.atoms,
                     mission.species_b.contrast};
  noise.cycle_time = mission.cycle_time;
  const double g0 = mission.orbit.g0();
  const double omega = mission.orbit.omega_orbit();

  const long per_orbit = static_cast<long>(mission.orbit.period() / mission.cycle_time);
  const double s_orbit = demod::sigma_eta_exact(noise, g0, per_orbit, omega);
  const double s_mission = demod::sigma_eta_exact(noise, g0, 4000000, omega);

  double worst_ratio = 0.0;
  const double incommensurate = kTwoPi * (1.0 - 0.6180339887498949) / noise.cycle_time;
  for (long n : {1000L, 10000L, 100000L, 1000000L}) {
    const double ratio = demod::sigma_eta_exact(noise, g0, n, incommensurate) /
                         demod::sigma_eta_asymptotic(noise, g0, n);
    worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0));
  }
  out << " sigma_eta(orbit, n=" << per_orbit << ") = " << s_orbit
      << ", sigma_eta(4e6) = " << s_mission << ", worst exact/asymptotic deviation = "
      << worst_ratio;
  return close_rel(s_orbit, 8e-16, 0.15) && s_mission <= 1e-17 && worst_ratio <= 0.01;
}

bool integration_curves(std::ostream& out) {
  const auto mission = config::table1_preset().mission_model();
  const double duration = 15.0 * config::kSecondsPerMonth;
  const std::vector<double> thresholds = {1e-15, 1e-17, 1e-18};
  const auto result = budget::integration_curve(mission, duration, 2000, thresholds);

  const double c15 = result.compensated_crossings[0];
  const double c17 = result.compensated_crossings[1];
  const double c18 = result.compensated_crossings[2];
  const auto& last = result.points.back();
  out << " crossings: 1e-15 at " << c15 / 3600.0 << " h, 1e-17 at " << c17 / 86400.0
      << " d, 1e-18 at " << c18 / 86400.0 << " d; at 15 months uncompensated = "
      << last.delta_eta_sys_uncompensated << " vs statistical = " << last.sigma_eta_stat;
  // factor-2 margins on the paper-scale crossing times
  const bool crossings_ok = c15 > 0.0 && c15 <= 2.0 * 86400.0 && c17 > 0.0 &&
                            c17 <= 28.0 * 86400.0 && c18 > 0.0 &&
                            c18 <= 12.0 * config::kSecondsPerMonth;
  return crossings_ok && last.delta_eta_sys_uncompensated > last.sigma_eta_stat;
}

bool verification_shots(std::ostream& out) {
  const auto cfg = config::table1_preset();
  const long nu_nm = budget::verification_shots(cfg.source.sigma_r_m, cfg.source.sigma_v_ms,
                                                cfg.species_a.atoms, 1e-9, 1.0);
  const long nu_um = budget::verification_shots(cfg.source.sigma_r_m, cfg.source.sigma_v_ms,
                                                cfg.species_a.atoms, 1e-6, 1e-6);
  out << " nu(nm) = " << nu_nm << ", nu(um) = " << nu_um;
  return close_rel(static_cast<double>(nu_nm), 1e5, 0.1) && nu_um <= 10;
}

bool property_suites(std::ostream& out) {
  const OrbitModel orbit(700e3, 1e-3);
  const double g = orbit.gamma();

  // tensor tracelessness and frame consistency on 1000-point grids
  const GradientTensor base = orbitgrav::gradient_tensor_circular(orbit, OrbitalPhase(0.0));
  for (int i = 0; i < 1000; ++i) {
    const double chi = kTwoPi * i / 1000.0;
    const GradientTensor direct = orbitgrav::gradient_tensor_circular(orbit, OrbitalPhase(chi));
    const GradientTensor ell =
        orbitgrav::gradient_tensor_elliptic(orbit, OrbitalPhase(chi), orbitgrav::EllipticMode::exact);
    if (std::abs(direct.trace()) > 1e-10 * g || std::abs(ell.trace()) > 1e-10 * g) {
      out << " trace violation at chi = " << chi;
      return false;
    }
    const GradientTensor rot = orbitgrav::rotate_tensor(base, chi);
    const double dev = std::max({std::abs(rot.xx - direct.xx), std::abs(rot.zz - direct.zz),
                                 std::abs(rot.xz - direct.xz)});
    if (dev > 1e-10 * g) {
      out << " frame inconsistency at chi = " << chi;
      return false;
    }
  }

  // phase affinity on 100 random configurations
  std::mt19937 rng(424242u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    FrameModel frame = FrameModel::synthetic_orbit(5e-6 * uni(rng), 1.1e-3,
                                                   OrbitalPhase(kPi * (uni(rng) + 1.0)));
    frame.set_spin(Vec3(0.0, 1e-3 * uni(rng), 0.0));
    frame.set_residual_rotation(1e-7 * Vec3(uni(rng), uni(rng), uni(rng)));
    PulseSequence p;
    p.k_eff = 1e7;
    p.T = 12.0 + 8.0 * uni(rng);
    p.dx2 = 3e-4 * uni(rng);
    p.dz2 = 3e-4 * uni(rng);
    p.dx3 = 3e-4 * uni(rng);
    p.dz3 = 3e-4 * uni(rng);
    const PhaseDecomposition d = phase_decomposition(frame, p);
    KinematicState s;
    s.position = Vec3(uni(rng), uni(rng), uni(rng));
    s.velocity = 1e-2 * Vec3(uni(rng), uni(rng), uni(rng));
    const double direct = mz_phase(frame, p, s);
    const double recon = d.reconstruct(s.position, s.velocity);
    if (std::abs(direct - recon) > std::max(1e-10 * std::abs(direct), 1e-15 * p.k_eff)) {
      out << " affinity violation in trial " << trial;
      return false;
    }
  }

  // demodulation bounds on log-spaced integration times
  demod::SignalModel sig;
  sig.violation_amp = 2e-12;
  sig.const_term = 5e-13;
  sig.harmonics = {{1, 1e-13}, {2, 8e-13}, {3, 2e-13}};
  sig.omega_m = orbit.omega_orbit();
  for (int i = 0; i < 28; ++i) {
    const double tau = 100.0 * std::pow(10.0, i / 6.0);
    const double exact = demod::demodulate_continuous(sig, tau);
    if (std::abs(exact) > demod::demodulate_bound(sig, tau) * (1.0 + 1e-12)) {
      out << " bound violation at tau = " << tau;
      return false;
    }
  }

  // discrete/continuous agreement at O(Tc/tau)
  const double tc = 10.0;
  for (double tau : {20000.0, 80000.0}) {
    std::vector<demod::Sample> samples;
    const int n = static_cast<int>(tau / tc);
    for (int m = 1; m <= n; ++m) {
      const double t = tc * m;
      double v = sig.violation_amp * std::cos(sig.omega_m * t) + sig.const_term;
      for (const auto& h : sig.harmonics) v += h.amplitude * std::cos(h.k * sig.omega_m * t);
      samples.push_back({t, v});
    }
    const double diff = std::abs(demod::demodulate_discrete(samples, sig.omega_m) -
                                 demod::demodulate_continuous(sig, tau));
    if (diff > 20.0 * 3.6e-12 * tc / tau) {
      out << " discrete/continuous mismatch at tau = " << tau;
      return false;
    }
  }

  // propagator against the three closed-form oracles over 40 s
  {
    GradientTensor t;
    t.xx = -1.5e-6;
    t.yy = 1.5e-6;
    t.zz = 3e-6;
    const FrameModel frame = FrameModel::with_static_tensor(t);
    KinematicState s;
    s.position = Vec3(0.7, 0.0, 1.3);
    const KinematicState o = propagate(frame, s, 40.0);
    const double wz = std::sqrt(3e-6), wx = std::sqrt(1.5e-6);
    if (!close_rel(o.position.z(), 1.3 * std::cosh(wz * 40.0), 1e-10) ||
        !close_rel(o.position.x(), 0.7 * std::cos(wx * 40.0), 1e-10)) {
      out << " static-tensor oracle failed";
      return false;
    }
  }
  {
    const FrameModel frame = FrameModel::free_fall();
    KinematicState s;
    s.position = Vec3(1.0, -2.0, 0.5);
    s.velocity = Vec3(0.01, 0.002, -0.03);
    const KinematicState o = propagate(frame, s, 40.0);
    if ((o.position - (s.position + 40.0 * s.velocity)).norm() > 1e-10) {
      out << " free-flight oracle failed";
      return false;
    }
  }
  {
    const double w = 1e-3;
    const FrameModel frame = FrameModel::free_fall().set_spin(Vec3(0.0, w, 0.0));
    KinematicState s;
    s.position = Vec3(1.0, 0.3, -2.0);
    s.velocity = Vec3(0.01, -0.02, 0.004);
    const KinematicState o = propagate(frame, s, 40.0);
    const Vec3 v_in = s.velocity + Vec3(0.0, w, 0.0).cross(s.position);
    const Vec3 r_in = s.position + 40.0 * v_in;
    const double c = std::cos(w * 40.0), sn = std::sin(w * 40.0);
    const Vec3 expected(c * r_in.x() - sn * r_in.z(), r_in.y(),
                        sn * r_in.x() + c * r_in.z());
    if ((o.position - expected).norm() > 1e-10 * expected.norm()) {
      out << " rotating-frame oracle failed";
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  Reporter r;
  r.run(1, "ground-case regression: frequency shift at the mirror pulse", 1.0, ground_case);
  r.run(2, "rotation-case regression: counter-rotated wave vectors", 5.0, rotation_case);
  r.run(3, "first-order seed vs converged shifts and laser extrema over 720 positions", 60.0,
        seed_and_extrema);
  r.run(4, "coefficient nulling by at least 1e4 at every sampled orbital position", 120.0,
        nulling_ratio);
  r.run(5, "shot-noise statistics: one orbit, mission total, covariance asymptote", 10.0,
        shot_noise_statistics);
  r.run(6, "demodulated integration curves over 15 months", 300.0, integration_curves);
  r.run(7, "verification-shot calculator", 1.0, verification_shots);
  r.run(8, "property suites: tensors, affinity, demodulation bounds, propagator oracles", 120.0,
        property_suites);
  if (r.failures) std::printf("%d criterion(s) failed\n", r.failures);
  return r.failures;
}
