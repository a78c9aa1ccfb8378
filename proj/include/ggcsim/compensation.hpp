#pragma once

#include <vector>

#include "ggcsim/dynamics.hpp"

namespace ggcsim::compensation {

/// Wave-vector shifts at the second and third pulses that null the phase's
/// dependence on the initial kinematics, plus the achieved residuals.
struct CompensationShifts {
  double dx2 = 0.0, dz2 = 0.0;
  double dx3 = 0.0, dz3 = 0.0;
  double chi0 = 0.0;
  bool converged = false;
  double residual_alpha = 0.0;  // max in-plane |alpha| * 1 m, rad
  double residual_beta = 0.0;   // max in-plane |beta| * 1 m/s, rad
};

/// Laser realization of the shifts: tilt relative to the first pulse and
/// frequency shift, per pulse.
struct LaserSettings {
  double theta2 = 0.0, theta3 = 0.0;  // rad
  double df2 = 0.0, df3 = 0.0;        // Hz
};

struct SolverOptions {
  // Residual targets in rad for unit (1 m, 1 m/s) offsets. The achievable
  // floor is set by k_eff times the propagated-deviation accuracy (around
  // 1e-8 rad for alpha and 2e-7 rad for beta at k ~ 3e7 rad/m, T = 20 s);
  // the defaults sit just above it.
  double tol_alpha = 1e-7;
  double tol_beta = 1e-6;
  double jacobian_step = 1e-9;
  int max_iterations = 50;
  // In-plane configurations must not couple the y channel.
  double tol_y = 1e-6;
};

/// First order in gamma*T^2 solution for an inertial satellite on a
/// circular orbit, used to seed the solver and for regression checks.
CompensationShifts first_order_shifts(double gamma_signed, double T, double omega_orbit,
                                      double chi);

/// Newton solve of (alpha_x, alpha_z, beta_x, beta_z) = 0 over the four
/// shifts, Jacobian by central finite differences, seeded with the
/// first-order solution for orbital frames. Throws SolverError on
/// non-convergence and ModelViolationError when the y coefficients do not
/// vanish (out-of-plane configuration).
CompensationShifts solve_shifts(const dynamics::FrameModel& frame,
                                const dynamics::PulseSequence& pulses,
                                const SolverOptions& opts = {});

/// solve_shifts per grid point, rebuilding the frame at each chi. Solver
/// failures are rethrown with the failing chi attached.
std::vector<CompensationShifts> shifts_sweep(const dynamics::FrameModel& frame_template,
                                             const dynamics::PulseSequence& pulses,
                                             const std::vector<double>& chi_grid,
                                             const SolverOptions& opts = {});

/// Uniform chi grid with n points over [0, 2*pi).
std::vector<double> uniform_chi_grid(int n);

/// Tilt/frequency realization of the shifts; the frequency formula carries
/// the two-photon, second-order-diffraction factor 8.
LaserSettings shifts_to_laser(const CompensationShifts& shifts, double k_eff);

/// Exact inverse of shifts_to_laser.
CompensationShifts laser_to_shifts(const LaserSettings& settings, double k_eff);

}  // namespace ggcsim::compensation
