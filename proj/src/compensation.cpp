#include "ggcsim/compensation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "ggcsim/constants.hpp"
#include "ggcsim/errors.hpp"

namespace ggcsim::compensation {

using dynamics::FrameModel;
using dynamics::InPlaneCoefficients;
using dynamics::PulseSequence;

// Derived by first-order perturbation of the state-transition matrix for
// the rotating circular-orbit tensor and cross-checked against the exact
// numerical solve: the deviation from these seeds is O((gamma T^2)^2).
CompensationShifts first_order_shifts(double gamma_signed, double T, double omega_orbit,
                                      double chi) {
  const double gT2 = gamma_signed * T * T;
  const double gT3w = gamma_signed * T * T * T * omega_orbit;
  const double c2 = std::cos(2.0 * chi);
  const double s2 = std::sin(2.0 * chi);
  CompensationShifts s;
  s.dx2 = 0.375 * gT2 * s2 + 0.625 * gT3w * c2;
  s.dz2 = 0.125 * gT2 * (1.0 + 3.0 * c2) - 0.625 * gT2 * T * omega_orbit * s2;
  s.dx3 = -0.25 * gT3w * c2;
  s.dz3 = 0.25 * gT3w * s2;
  s.chi0 = chi;
  return s;
}

namespace {

Eigen::Vector4d residual(const FrameModel& frame, PulseSequence pulses,
                         const Eigen::Vector4d& delta) {
  pulses.dx2 = delta[0];
  pulses.dz2 = delta[1];
  pulses.dx3 = delta[2];
  pulses.dz3 = delta[3];
  const InPlaneCoefficients c = dynamics::inplane_coefficients(frame, pulses);
  // beta entries carry the 1 s scaling that makes the four residuals
  // commensurate for the Newton step.
  return {c.alpha_x, c.alpha_z, c.beta_x, c.beta_z};
}

void check_in_plane(const FrameModel& frame, const PulseSequence& pulses, double tol_y) {
  const dynamics::PhaseDecomposition d = dynamics::phase_decomposition(frame, pulses);
  const double y_mag = std::max(std::abs(d.alpha.y()), std::abs(d.beta.y()));
  if (y_mag > tol_y) {
    std::ostringstream msg;
    msg << "solve_shifts: y coefficients do not vanish (|alpha_y|,|beta_y| up to " << y_mag
        << "); the configuration is out of plane and cannot be compensated with x/z "
           "shifts alone";
    throw ModelViolationError(msg.str());
  }
}

}  // namespace

CompensationShifts solve_shifts(const FrameModel& frame, const PulseSequence& pulses,
                                const SolverOptions& opts) {
  check_in_plane(frame, pulses, opts.tol_y);

  Eigen::Vector4d delta = Eigen::Vector4d::Zero();
  if (frame.orbital()) {
    const CompensationShifts seed = first_order_shifts(frame.gamma_signed(), pulses.T,
                                                       frame.omega_tensor(), frame.chi0());
    delta << seed.dx2, seed.dz2, seed.dx3, seed.dz3;
  }

  Eigen::Vector4d f = residual(frame, pulses, delta);
  const double h = opts.jacobian_step;
  bool converged = false;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (std::max(std::abs(f[0]), std::abs(f[1])) <= opts.tol_alpha &&
        std::max(std::abs(f[2]), std::abs(f[3])) <= opts.tol_beta) {
      converged = true;
      break;
    }
    Eigen::Matrix4d jac;
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector4d dp = delta, dm = delta;
      dp[j] += h;
      dm[j] -= h;
      jac.col(j) = (residual(frame, pulses, dp) - residual(frame, pulses, dm)) / (2.0 * h);
    }
    const Eigen::Vector4d step = jac.partialPivLu().solve(-f);
    if (!step.allFinite()) {
      throw SolverError("solve_shifts: singular Jacobian", std::abs(f.head<2>().cwiseAbs().maxCoeff()),
                        std::abs(f.tail<2>().cwiseAbs().maxCoeff()));
    }
    delta += step;
    f = residual(frame, pulses, delta);
  }

  CompensationShifts out;
  out.dx2 = delta[0];
  out.dz2 = delta[1];
  out.dx3 = delta[2];
  out.dz3 = delta[3];
  out.chi0 = frame.chi0();
  out.converged = converged;
  out.residual_alpha = f.head<2>().cwiseAbs().maxCoeff();
  out.residual_beta = f.tail<2>().cwiseAbs().maxCoeff();
  if (!converged) {
    std::ostringstream msg;
    msg << "solve_shifts: no convergence after " << opts.max_iterations
        << " iterations (residual alpha " << out.residual_alpha << " rad, beta "
        << out.residual_beta << " rad)";
    throw SolverError(msg.str(), out.residual_alpha, out.residual_beta);
  }
  return out;
}

std::vector<double> uniform_chi_grid(int n) {
  std::vector<double> grid(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<size_t>(i)] = constants::kTwoPi * i / n;
  return grid;
}

std::vector<CompensationShifts> shifts_sweep(const FrameModel& frame_template,
                                             const PulseSequence& pulses,
                                             const std::vector<double>& chi_grid,
                                             const SolverOptions& opts) {
  std::vector<CompensationShifts> out;
  out.reserve(chi_grid.size());
  for (double chi : chi_grid) {
    const FrameModel frame = frame_template.at_chi(chi);
    try {
      out.push_back(solve_shifts(frame, pulses, opts));
    } catch (const SolverError& e) {
      std::ostringstream msg;
      msg << e.what() << " (at chi = " << chi << ")";
      throw SolverError(msg.str(), e.residual_alpha, e.residual_beta);
    }
  }
  return out;
}

LaserSettings shifts_to_laser(const CompensationShifts& shifts, double k_eff) {
  const auto one = [](double dz) { return 1.0 + dz; };
  if (one(shifts.dz2) <= 0.0 || one(shifts.dz3) <= 0.0) {
    throw ModelViolationError("shifts_to_laser: 1 + dz must stay positive");
  }
  const double scale = constants::kSpeedOfLight * k_eff / (8.0 * constants::kPi);
  LaserSettings s;
  s.theta2 = std::atan(shifts.dx2 / one(shifts.dz2));
  s.theta3 = std::atan(shifts.dx3 / one(shifts.dz3));
  s.df2 = scale * (-1.0 + std::hypot(shifts.dx2, one(shifts.dz2)));
  s.df3 = scale * (-1.0 + std::hypot(shifts.dx3, one(shifts.dz3)));
  return s;
}

CompensationShifts laser_to_shifts(const LaserSettings& settings, double k_eff) {
  const double scale = constants::kSpeedOfLight * k_eff / (8.0 * constants::kPi);
  const double rho2 = 1.0 + settings.df2 / scale;
  const double rho3 = 1.0 + settings.df3 / scale;
  CompensationShifts s;
  s.dx2 = rho2 * std::sin(settings.theta2);
  s.dz2 = rho2 * std::cos(settings.theta2) - 1.0;
  s.dx3 = rho3 * std::sin(settings.theta3);
  s.dz3 = rho3 * std::cos(settings.theta3) - 1.0;
  return s;
}

}  // namespace ggcsim::compensation
