#pragma once

#include <string>
#include <vector>

#include "ggcsim/compensation.hpp"
#include "ggcsim/demod.hpp"
#include "ggcsim/dynamics.hpp"

namespace ggcsim::budget {

using dynamics::Vec3;

struct SpeciesParams {
  std::string name;
  double lambda = 0.0;    // m
  double T = 0.0;         // s
  double atoms = 0.0;     // per shot
  double contrast = 1.0;  // (0, 1]
  double mass = 0.0;      // kg; only the recoil bookkeeping uses it

  double k_eff() const;           // 8 pi / lambda (second-order double diffraction)
  double scale_factor() const;    // k_eff * T^2, rad per m/s^2
  double recoil_velocity() const; // hbar k_eff / mass, 0 when mass unset
  dynamics::PulseSequence pulses(const compensation::CompensationShifts& shifts = {}) const;
};

/// Control and co-location uncertainties entering the ledger. Offsets are
/// known mean displacements; the delta_* entries are uncertainties.
struct UncertaintyInputs {
  Vec3 delta_r0 = Vec3::Zero();   // m per axis
  Vec3 delta_v0 = Vec3::Zero();   // m/s per axis
  Vec3 offset_r0 = Vec3::Zero();  // m per axis
  Vec3 offset_v0 = Vec3::Zero();  // m/s per axis
  double delta_omega = 0.0;       // rad/s, per rotation axis
  double delta_gamma = 0.0;       // s^-2
  double delta_theta = 0.0;       // rad, per tilted pulse
  double delta_f = 0.0;           // Hz, per shifted pulse
  double delta_T = 0.0;           // s
  double ellipticity_e = 0.0;
  double delta_a_indep = 0.0;     // m/s^2, out-of-model hook
};

/// Phase coefficients divided by the species scale factor: acceleration
/// sensitivity to the initial position (1/s^2) and velocity (1/s).
struct NormalizedCoefficients {
  Vec3 a = Vec3::Zero();  // alpha / (k T^2)
  Vec3 b = Vec3::Zero();  // beta / (k T^2)
};

NormalizedCoefficients normalized_coefficients(const dynamics::FrameModel& frame,
                                               const SpeciesParams& species,
                                               const compensation::CompensationShifts& shifts);

/// Interspecies difference of the normalized coefficients.
struct DiffCoefficients {
  Vec3 alpha_prime = Vec3::Zero();  // 1/s^2
  Vec3 beta_prime = Vec3::Zero();   // 1/s
};

DiffCoefficients differential_coefficients(const dynamics::FrameModel& frame_a,
                                           const SpeciesParams& species_a,
                                           const dynamics::FrameModel& frame_b,
                                           const SpeciesParams& species_b,
                                           const compensation::CompensationShifts& shifts);

/// |d(coefficient)/dQ| * deltaQ per axis, for one control parameter Q.
struct SensitivityRow {
  std::string parameter;
  Vec3 dalpha = Vec3::Zero();  // 1/s^2
  Vec3 dbeta = Vec3::Zero();   // 1/s
  std::vector<int> harmonics;  // harmonic content of the term over an orbit
};

/// Central finite-difference sensitivities of the normalized coefficients
/// around the working point, weighted by the parameter uncertainties.
/// Tilt and frequency errors enter as d_dx ~ delta_theta and
/// d_dz ~ delta_f / f per pulse.
std::vector<SensitivityRow> coefficient_sensitivities(
    const dynamics::FrameModel& frame, const SpeciesParams& species,
    const compensation::CompensationShifts& shifts, const UncertaintyInputs& inputs);

struct LedgerTerm {
  std::string label;
  double magnitude = 0.0;  // m/s^2
  std::vector<int> harmonics;
};

/// Differential-acceleration uncertainty ledger: absolute-sum convention
/// for the total, with the quadrature sum exposed as a diagnostic.
struct BudgetLedger {
  std::vector<LedgerTerm> terms;
  double total_linear() const;
  double total_quadrature() const;
};

/// Ledger at one orbital position with the compensation shifts applied:
/// only coefficient-uncertainty terms and residual coefficients survive.
BudgetLedger compensated_ledger(const dynamics::FrameModel& frame,
                                const SpeciesParams& species_a, const SpeciesParams& species_b,
                                const UncertaintyInputs& inputs,
                                const compensation::CompensationShifts& shifts);

/// Ledger without the compensation technique (all shifts and their
/// realization uncertainties identically zero).
BudgetLedger uncompensated_ledger(const dynamics::FrameModel& frame,
                                  const SpeciesParams& species_a,
                                  const SpeciesParams& species_b,
                                  const UncertaintyInputs& inputs);

/// Mission description for the integration curves.
struct MissionModel {
  orbitgrav::OrbitModel orbit;
  double gamma_signed = 0.0;  // signed tensor magnitude; 0 selects +orbit.gamma()
  SpeciesParams species_a;
  SpeciesParams species_b;
  UncertaintyInputs uncertainties;
  double cycle_time = 10.0;  // s
  double chi0 = 0.0;
  int chi_grid = 720;
  int threads = 0;  // 0: pick automatically
};

/// Frame at orbital position chi consistent with the mission's tensor
/// model (elliptic first order when e > 0).
dynamics::FrameModel mission_frame(const MissionModel& mission, double chi);

struct IntegrationPoint {
  double tau = 0.0;                         // s
  double delta_eta_sys = 0.0;               // compensated systematic, Eotvos units
  double delta_eta_sys_uncompensated = 0.0; // without compensation
  double sigma_eta_stat = 0.0;              // shot-noise statistical
};

struct IntegrationResult {
  std::vector<IntegrationPoint> points;
  /// First tau at which the compensated systematic curve reaches each
  /// requested threshold (same order); negative when never reached.
  std::vector<double> compensated_crossings;
};

/// Demodulated integration of the ledger over the mission: the ledgers are
/// evaluated on a chi grid over one orbit (shifts re-solved per grid point)
/// and interpolated; the statistical curve uses the exact covariance.
IntegrationResult integration_curve(const MissionModel& mission, double duration,
                                    size_t max_rows = 1000,
                                    const std::vector<double>& thresholds = {});

/// Number of verification shots required to pin the mean differential
/// kinematics to the given targets with clouds of width sigma_r / sigma_v
/// and N atoms per shot: nu = max over quantities of ceil(2 sigma^2 / (N target^2)),
/// at least 1.
long verification_shots(double sigma_r, double sigma_v, double atoms, double target_dr,
                        double target_dv);

}  // namespace ggcsim::budget
