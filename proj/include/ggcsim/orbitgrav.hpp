#pragma once

#include <Eigen/Core>
#include <vector>

#include "ggcsim/constants.hpp"

namespace ggcsim::orbitgrav {

/// Wraps an angle to [0, 2*pi).
double wrap_angle(double chi);

/// Angle parametrizing the satellite position along the orbit, stored
/// wrapped to [0, 2*pi). chi = 0 puts the satellite on the +z axis
/// (perigee for elliptic orbits).
struct OrbitalPhase {
  double chi = 0.0;
  OrbitalPhase() = default;
  explicit OrbitalPhase(double raw) : chi(wrap_angle(raw)) {}
};

/// Circular/elliptic orbit geometry around a spherically symmetric Earth,
/// plus the derived scalars used everywhere else.
///
/// gamma() is the positive magnitude 2*GM/R0^3. Sign conventions for
/// mission presets are applied where the preset is loaded, not here.
class OrbitModel {
 public:
  OrbitModel(double altitude_m, double ellipticity,
             double earth_gm = constants::kEarthGM,
             double earth_radius_m = constants::kEarthRadius);

  double altitude() const { return altitude_m_; }
  double ellipticity() const { return ellipticity_; }
  double earth_gm() const { return earth_gm_; }
  double earth_radius() const { return earth_radius_m_; }

  double r0() const { return r0_; }                    // perigee radius, m
  double gamma() const { return gamma_; }              // 2 GM / R0^3, s^-2
  double g0() const { return g0_; }                    // GM / R0^2, m/s^2
  double omega_orbit() const { return omega_orbit_; }  // sqrt(GM / R0^3), rad/s
  double period() const;                               // s

 private:
  double altitude_m_;
  double ellipticity_;
  double earth_gm_;
  double earth_radius_m_;
  double r0_;
  double gamma_;
  double g0_;
  double omega_orbit_;
};

/// Symmetric gravity-gradient tensor in the satellite frame, s^-2.
/// Orbital motion is restricted to the x-z plane, so T_xy = T_yz = 0
/// and only the four independent components are stored.
struct GradientTensor {
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
  double xz = 0.0;

  double trace() const { return xx + yy + zz; }
  Eigen::Matrix3d matrix() const;
  Eigen::Vector3d apply(const Eigen::Vector3d& r) const;
};

enum class EllipticMode { exact, first_order };

enum class TensorComponent { xx, yy, zz, xz };

/// One Fourier term of a tensor component over an orbit: the signed
/// coefficient of cos(k*chi) (sin(k*chi) for the xz component).
struct HarmonicAmplitude {
  int k = 0;
  double amplitude = 0.0;  // s^-2
};

// Component formulas parameterized by an explicit (possibly signed) gamma.
// The OrbitModel overloads below evaluate these at +orbit.gamma().
GradientTensor circular_components(double gamma, double chi);
GradientTensor elliptic_exact_components(double gamma, double e, double chi);
GradientTensor elliptic_first_order_components(double gamma, double e, double chi);

/// Gradient tensor on a circular orbit at orbital position chi.
/// Components are modulated at twice the orbital frequency.
GradientTensor gradient_tensor_circular(const OrbitModel& orbit, OrbitalPhase chi);

/// Gradient tensor on an elliptic orbit, either from the closed-form
/// expressions or from the first-order-in-e expansion. Rejects e >= 1.
GradientTensor gradient_tensor_elliptic(const OrbitModel& orbit, OrbitalPhase chi,
                                        EllipticMode mode);

/// Similarity transform by the 3D rotation about the y axis. Trace and
/// eigenvalues are preserved.
GradientTensor rotate_tensor(const GradientTensor& t, double angle);

/// Tensor at time t after the sequence started at orbital position chi0,
/// circular-orbit evolution: equals gradient_tensor_circular(chi0 + w*t).
GradientTensor gradient_tensor_at_time(const OrbitModel& orbit, OrbitalPhase chi0, double t);

/// Fourier amplitudes of one tensor component at harmonics k = 0..3 of the
/// orbital frequency, first-order-in-e model. For e = 0 only k = 0 and
/// k = 2 are nonzero; the O(e) terms appear at k = 1, 2, 3.
std::vector<HarmonicAmplitude> tensor_spectrum(const OrbitModel& orbit,
                                               TensorComponent component, double e);

}  // namespace ggcsim::orbitgrav
