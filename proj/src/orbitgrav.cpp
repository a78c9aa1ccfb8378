#include "ggcsim/orbitgrav.hpp"

#include <cmath>

#include "ggcsim/errors.hpp"

namespace ggcsim::orbitgrav {

using constants::kTwoPi;

double wrap_angle(double chi) {
  double x = std::fmod(chi, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x;
}

OrbitModel::OrbitModel(double altitude_m, double ellipticity, double earth_gm,
                       double earth_radius_m)
    : altitude_m_(altitude_m),
      ellipticity_(ellipticity),
      earth_gm_(earth_gm),
      earth_radius_m_(earth_radius_m) {
  if (!(ellipticity >= 0.0 && ellipticity < 1.0)) {
    throw ConfigError("OrbitModel: ellipticity must satisfy 0 <= e < 1 "
                      "(parabolic/hyperbolic orbits are not modeled)");
  }
  if (earth_gm <= 0.0 || earth_radius_m <= 0.0 || earth_radius_m + altitude_m <= 0.0) {
    throw ConfigError("OrbitModel: GM and radii must be positive");
  }
  r0_ = earth_radius_m_ + altitude_m_;
  gamma_ = 2.0 * earth_gm_ / (r0_ * r0_ * r0_);
  g0_ = earth_gm_ / (r0_ * r0_);
  omega_orbit_ = std::sqrt(earth_gm_ / (r0_ * r0_ * r0_));
}

double OrbitModel::period() const { return kTwoPi / omega_orbit_; }

Eigen::Matrix3d GradientTensor::matrix() const {
  Eigen::Matrix3d m;
  m << xx, 0.0, xz,
       0.0, yy, 0.0,
       xz, 0.0, zz;
  return m;
}

Eigen::Vector3d GradientTensor::apply(const Eigen::Vector3d& r) const {
  return {xx * r.x() + xz * r.z(), yy * r.y(), xz * r.x() + zz * r.z()};
}

GradientTensor circular_components(double gamma, double chi) {
  const double c2 = std::cos(2.0 * chi);
  const double s2 = std::sin(2.0 * chi);
  GradientTensor t;
  t.xx = 0.25 * gamma * (1.0 - 3.0 * c2);
  t.zz = 0.25 * gamma * (1.0 + 3.0 * c2);
  t.xz = 0.75 * gamma * s2;
  t.yy = -0.5 * gamma;
  return t;
}

GradientTensor elliptic_exact_components(double gamma, double e, double chi) {
  // Newtonian Hessian T_ij = 3 GM R_i R_j / |R|^5 - GM delta_ij / |R|^3
  // evaluated on R(chi) = a (sqrt(1-e^2) sin chi, 0, cos chi - e), with the
  // perigee radius R0 = a (1 - e) carrying the gamma normalization.
  const double sx = std::sqrt(1.0 - e * e) * std::sin(chi);
  const double sz = std::cos(chi) - e;
  const double rho2 = sx * sx + sz * sz;  // (|R| / a)^2 = (1 - e cos chi)^2
  const double rho = std::sqrt(rho2);
  const double one_minus_e = 1.0 - e;
  // GM / a^3 expressed through gamma = 2 GM / R0^3:
  const double gm_a3 = 0.5 * gamma * one_minus_e * one_minus_e * one_minus_e;
  const double inv_rho5 = 1.0 / (rho2 * rho2 * rho);
  const double inv_rho3 = 1.0 / (rho2 * rho);
  GradientTensor t;
  t.xx = gm_a3 * (3.0 * sx * sx * inv_rho5 - inv_rho3);
  t.zz = gm_a3 * (3.0 * sz * sz * inv_rho5 - inv_rho3);
  t.xz = gm_a3 * 3.0 * sx * sz * inv_rho5;
  t.yy = -gm_a3 * inv_rho3;  // equals -(xx + zz)
  return t;
}

GradientTensor elliptic_first_order_components(double gamma, double e, double chi) {
  const double c1 = std::cos(chi);
  const double c2 = std::cos(2.0 * chi);
  const double c3 = std::cos(3.0 * chi);
  const double s1 = std::sin(chi);
  const double s2 = std::sin(2.0 * chi);
  const double s3 = std::sin(3.0 * chi);
  GradientTensor t = circular_components(gamma, chi);
  const double k = 0.375 * gamma * e;  // (3/8) gamma e
  t.xx += k * (-2.0 + c1 + 6.0 * c2 - 5.0 * c3);
  t.zz += k * (-2.0 + 3.0 * c1 - 6.0 * c2 + 5.0 * c3);
  t.xz += k * (s1 - 6.0 * s2 + 5.0 * s3);
  t.yy = -(t.xx + t.zz);  // Laplace condition fixes the out-of-plane component
  return t;
}

GradientTensor gradient_tensor_circular(const OrbitModel& orbit, OrbitalPhase chi) {
  return circular_components(orbit.gamma(), chi.chi);
}

GradientTensor gradient_tensor_elliptic(const OrbitModel& orbit, OrbitalPhase chi,
                                        EllipticMode mode) {
  const double e = orbit.ellipticity();
  if (!(e >= 0.0 && e < 1.0)) {
    throw ConfigError("gradient_tensor_elliptic: requires 0 <= e < 1");
  }
  if (mode == EllipticMode::exact) {
    return elliptic_exact_components(orbit.gamma(), e, chi.chi);
  }
  return elliptic_first_order_components(orbit.gamma(), e, chi.chi);
}

GradientTensor rotate_tensor(const GradientTensor& t, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  // D(angle) Gamma D(angle)^T with D the rotation about y; the in-plane
  // block stays closed (xy and yz remain zero).
  GradientTensor out;
  out.xx = c * c * t.xx + 2.0 * c * s * t.xz + s * s * t.zz;
  out.zz = s * s * t.xx - 2.0 * c * s * t.xz + c * c * t.zz;
  out.xz = (c * c - s * s) * t.xz + c * s * (t.zz - t.xx);
  out.yy = t.yy;
  return out;
}

GradientTensor gradient_tensor_at_time(const OrbitModel& orbit, OrbitalPhase chi0, double t) {
  return circular_components(orbit.gamma(), chi0.chi + orbit.omega_orbit() * t);
}

std::vector<HarmonicAmplitude> tensor_spectrum(const OrbitModel& orbit,
                                               TensorComponent component, double e) {
  if (!(e >= 0.0 && e < 1.0)) {
    throw ConfigError("tensor_spectrum: requires 0 <= e < 1");
  }
  const double g = orbit.gamma();
  const double k1 = 0.375 * g * e;  // (3/8) gamma e
  std::vector<HarmonicAmplitude> out(4);
  for (int k = 0; k < 4; ++k) out[k].k = k;
  switch (component) {
    case TensorComponent::xx:
      out[0].amplitude = 0.25 * g - 2.0 * k1;
      out[1].amplitude = k1;
      out[2].amplitude = -0.75 * g + 6.0 * k1;
      out[3].amplitude = -5.0 * k1;
      break;
    case TensorComponent::zz:
      out[0].amplitude = 0.25 * g - 2.0 * k1;
      out[1].amplitude = 3.0 * k1;
      out[2].amplitude = 0.75 * g - 6.0 * k1;
      out[3].amplitude = 5.0 * k1;
      break;
    case TensorComponent::xz:  // coefficients of sin(k chi)
      out[1].amplitude = k1;
      out[2].amplitude = 0.75 * g - 6.0 * k1;
      out[3].amplitude = 5.0 * k1;
      break;
    case TensorComponent::yy:
      out[0].amplitude = -0.5 * g + 4.0 * k1;
      out[1].amplitude = -4.0 * k1;
      break;
  }
  return out;
}

}  // namespace ggcsim::orbitgrav
