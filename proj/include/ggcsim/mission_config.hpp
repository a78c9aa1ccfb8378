#pragma once

#include <string>

#include "ggcsim/budget.hpp"

namespace ggcsim::config {

/// Flat sectioned key/value mission description. Every field carries the
/// `table1` preset default; file values override it. Unknown sections or
/// keys are rejected.
struct MissionConfig {
  struct Orbit {
    double altitude_m = 700e3;
    double ellipticity = 1e-3;
    double gm = constants::kEarthGM;
    double earth_radius_m = constants::kEarthRadius;
    // Sign convention for the satellite-frame tensor magnitude. The mission
    // preset quotes gamma as negative; this is the one place the sign is
    // applied (the orbit model itself stores the positive magnitude).
    double gamma_sign = -1.0;
  } orbit;

  struct Species {
    std::string name;
    double lambda_m = 0.0;
    double pulse_separation_s = 20.0;
    double atoms = 1e6;
    double contrast = 1.0;
    double mass_kg = 0.0;
  };
  Species species_a;
  Species species_b;

  struct Control {
    double delta_r0_m = 1e-6;
    double delta_v0_ms = 1e-6;
    double offset_r0_m = 0.0;
    double offset_v0_ms = 0.0;
    double delta_omega_rads = 1e-7;
    double delta_gamma_s2 = 1e-10;
    double delta_theta_rad = 1e-6;
    double delta_f_hz = 400e3;
    double delta_t_s = 0.0;
    double cycle_time_s = 10.0;
  } control;

  struct Source {
    double sigma_r_m = 224e-6;
    double sigma_v_ms = 100e-6;
  } source;

  struct Run {
    int chi_grid = 720;
    double chi0_rad = 0.0;
    double months = 15.0;
    int downsample = 1000;
    std::string output_dir = ".";
  } run;

  orbitgrav::OrbitModel orbit_model() const;
  budget::SpeciesParams species_params(const Species& s) const;
  budget::MissionModel mission_model() const;
};

/// Loads a config file, or the built-in preset when the argument is the
/// literal name "table1".
MissionConfig load_config(const std::string& path_or_preset);

/// The shipped mission preset (700 km orbit, Rb/K, T = 20 s, Tc = 10 s,
/// micrometer-level co-location, 0.1 urad/s residual rotations).
MissionConfig table1_preset();

/// Serialized form of the preset, also valid as an input file.
std::string table1_preset_text();

inline constexpr double kSecondsPerMonth = 365.25 * 86400.0 / 12.0;

}  // namespace ggcsim::config
