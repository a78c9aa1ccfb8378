#include "ggcsim/budget.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ggcsim/constants.hpp"
#include "ggcsim/errors.hpp"

namespace ggcsim::budget {

using compensation::CompensationShifts;
using dynamics::FrameModel;
using dynamics::PulseSequence;

double SpeciesParams::k_eff() const { return 8.0 * constants::kPi / lambda; }

double SpeciesParams::scale_factor() const { return k_eff() * T * T; }

double SpeciesParams::recoil_velocity() const {
  return mass > 0.0 ? constants::kHbar * k_eff() / mass : 0.0;
}

PulseSequence SpeciesParams::pulses(const CompensationShifts& shifts) const {
  PulseSequence p;
  p.k_eff = k_eff();
  p.T = T;
  p.dx2 = shifts.dx2;
  p.dz2 = shifts.dz2;
  p.dx3 = shifts.dx3;
  p.dz3 = shifts.dz3;
  p.recoil_velocity = recoil_velocity();
  return p;
}

NormalizedCoefficients normalized_coefficients(const FrameModel& frame,
                                               const SpeciesParams& species,
                                               const CompensationShifts& shifts) {
  const dynamics::PhaseDecomposition d =
      dynamics::phase_decomposition(frame, species.pulses(shifts));
  NormalizedCoefficients n;
  n.a = d.alpha / species.scale_factor();
  n.b = d.beta / species.scale_factor();
  return n;
}

DiffCoefficients differential_coefficients(const FrameModel& frame_a,
                                           const SpeciesParams& species_a,
                                           const FrameModel& frame_b,
                                           const SpeciesParams& species_b,
                                           const CompensationShifts& shifts) {
  const NormalizedCoefficients na = normalized_coefficients(frame_a, species_a, shifts);
  const NormalizedCoefficients nb = normalized_coefficients(frame_b, species_b, shifts);
  return {na.a - nb.a, na.b - nb.b};
}

namespace {

NormalizedCoefficients coeffs_for(const FrameModel& frame, const SpeciesParams& species,
                                  PulseSequence pulses) {
  const dynamics::PhaseDecomposition d = dynamics::phase_decomposition(frame, pulses);
  NormalizedCoefficients n;
  // The scale factor is the nominal instrument constant; parameter bumps
  // change the dynamics only.
  n.a = d.alpha / species.scale_factor();
  n.b = d.beta / species.scale_factor();
  return n;
}

std::vector<int> gradient_harmonics(const FrameModel& frame, double e) {
  if (!frame.orbital()) return {0};
  if (e > 0.0) return {0, 1, 2, 3};
  return {0, 2};
}

double frame_gamma_ref(const FrameModel& frame) {
  if (frame.orbital()) return std::abs(frame.gamma_signed());
  const orbitgrav::GradientTensor t = frame.tensor_at(0.0);
  return std::max({std::abs(t.xx), std::abs(t.yy), std::abs(t.zz), std::abs(t.xz)});
}

}  // namespace

std::vector<SensitivityRow> coefficient_sensitivities(const FrameModel& frame,
                                                      const SpeciesParams& species,
                                                      const CompensationShifts& shifts,
                                                      const UncertaintyInputs& inputs) {
  const PulseSequence base = species.pulses(shifts);
  std::vector<SensitivityRow> rows;

  const auto central = [&](const FrameModel& fp, const PulseSequence& pp, const FrameModel& fm,
                           const PulseSequence& pm, double h, double weight,
                           const std::string& name, std::vector<int> harmonics) {
    SensitivityRow row;
    row.parameter = name;
    row.harmonics = std::move(harmonics);
    if (weight != 0.0) {
      const NormalizedCoefficients cp = coeffs_for(fp, species, pp);
      const NormalizedCoefficients cm = coeffs_for(fm, species, pm);
      row.dalpha = ((cp.a - cm.a) / (2.0 * h)).cwiseAbs() * weight;
      row.dbeta = ((cp.b - cm.b) / (2.0 * h)).cwiseAbs() * weight;
    }
    rows.push_back(std::move(row));
  };

  // Gradient knowledge: scale the whole tensor.
  const double gamma_ref = frame_gamma_ref(frame);
  if (gamma_ref > 0.0) {
    const double h = 1e-6;
    FrameModel fp = frame, fm = frame;
    fp.set_tensor_scale(frame.tensor_scale() * (1.0 + h));
    fm.set_tensor_scale(frame.tensor_scale() * (1.0 - h));
    central(fp, base, fm, base, h * gamma_ref, inputs.delta_gamma, "gamma",
            gradient_harmonics(frame, inputs.ellipticity_e));
  }

  // Pulse separation time.
  {
    const double h = 1e-6 * species.T;
    PulseSequence pp = base, pm = base;
    pp.T += h;
    pm.T -= h;
    central(frame, pp, frame, pm, h, inputs.delta_T, "T",
            gradient_harmonics(frame, inputs.ellipticity_e));
  }

  // Residual rotation rates, one axis at a time.
  {
    const double scale = frame.orbital() ? frame.omega_tensor() : 1e-3;
    const double h = 1e-6 * scale;
    const char* names[3] = {"omega_x", "omega_y", "omega_z"};
    for (int axis = 0; axis < 3; ++axis) {
      Vec3 bump = Vec3::Zero();
      bump[axis] = h;
      FrameModel fp = frame, fm = frame;
      fp.set_residual_rotation(frame.residual_rotation() + bump);
      fm.set_residual_rotation(frame.residual_rotation() - bump);
      central(fp, base, fm, base, h, inputs.delta_omega, names[axis], {0});
    }
  }

  // Shift realization: tilt moves dx, frequency moves dz, per pulse.
  {
    const double h = 1e-9;
    const double f_laser = constants::kSpeedOfLight / species.lambda;
    struct Bump {
      const char* name;
      double PulseSequence::* member;
      double weight;
    };
    const Bump bumps[4] = {
        {"tilt_2", &PulseSequence::dx2, inputs.delta_theta},
        {"freq_2", &PulseSequence::dz2, inputs.delta_f / f_laser},
        {"tilt_3", &PulseSequence::dx3, inputs.delta_theta},
        {"freq_3", &PulseSequence::dz3, inputs.delta_f / f_laser},
    };
    for (const Bump& bump : bumps) {
      PulseSequence pp = base, pm = base;
      pp.*bump.member += h;
      pm.*bump.member -= h;
      central(frame, pp, frame, pm, h, bump.weight, bump.name, {0});
    }
  }

  return rows;
}

double BudgetLedger::total_linear() const {
  double acc = 0.0;
  for (const LedgerTerm& t : terms) acc += std::abs(t.magnitude);
  return acc;
}

double BudgetLedger::total_quadrature() const {
  double acc = 0.0;
  for (const LedgerTerm& t : terms) acc += t.magnitude * t.magnitude;
  return std::sqrt(acc);
}

namespace {

constexpr const char* kAxisNames[3] = {"x", "y", "z"};

// Elementwise max over the two species' rows; the tables coincide when the
// species share T (the normalized coefficients are k-independent).
std::vector<SensitivityRow> combined_sensitivities(const FrameModel& frame,
                                                   const SpeciesParams& a,
                                                   const SpeciesParams& b,
                                                   const CompensationShifts& shifts,
                                                   const UncertaintyInputs& inputs) {
  std::vector<SensitivityRow> rows = coefficient_sensitivities(frame, a, shifts, inputs);
  if (a.T != b.T) {
    const std::vector<SensitivityRow> rows_b =
        coefficient_sensitivities(frame, b, shifts, inputs);
    for (size_t i = 0; i < rows.size(); ++i) {
      rows[i].dalpha = rows[i].dalpha.cwiseMax(rows_b[i].dalpha);
      rows[i].dbeta = rows[i].dbeta.cwiseMax(rows_b[i].dbeta);
    }
  }
  return rows;
}

NormalizedCoefficients combined_coefficients(const FrameModel& frame, const SpeciesParams& a,
                                             const SpeciesParams& b,
                                             const CompensationShifts& shifts) {
  NormalizedCoefficients ca = normalized_coefficients(frame, a, shifts);
  if (a.T != b.T || a.lambda != b.lambda) {
    const NormalizedCoefficients cb = normalized_coefficients(frame, b, shifts);
    ca.a = ca.a.cwiseAbs().cwiseMax(cb.a.cwiseAbs());
    ca.b = ca.b.cwiseAbs().cwiseMax(cb.b.cwiseAbs());
  } else {
    ca.a = ca.a.cwiseAbs();
    ca.b = ca.b.cwiseAbs();
  }
  return ca;
}

BudgetLedger assemble_ledger(const FrameModel& frame, const SpeciesParams& species_a,
                             const SpeciesParams& species_b, const UncertaintyInputs& inputs,
                             const CompensationShifts& shifts, bool with_realization_rows) {
  UncertaintyInputs used = inputs;
  if (!with_realization_rows) {
    used.delta_theta = 0.0;
    used.delta_f = 0.0;
  }

  BudgetLedger ledger;
  const auto push = [&ledger](std::string label, double magnitude, std::vector<int> harmonics) {
    if (magnitude != 0.0) {
      ledger.terms.push_back({std::move(label), magnitude, std::move(harmonics)});
    }
  };

  const std::vector<SensitivityRow> rows =
      combined_sensitivities(frame, species_a, species_b, shifts, used);
  for (const SensitivityRow& row : rows) {
    for (int i = 0; i < 3; ++i) {
      push(row.parameter + ".r_" + kAxisNames[i],
           row.dalpha[i] * (std::abs(used.offset_r0[i]) + used.delta_r0[i]), row.harmonics);
      push(row.parameter + ".v_" + kAxisNames[i],
           row.dbeta[i] * (std::abs(used.offset_v0[i]) + used.delta_v0[i]), row.harmonics);
    }
  }

  const NormalizedCoefficients coef =
      combined_coefficients(frame, species_a, species_b, shifts);
  const std::vector<int> coef_harmonics = gradient_harmonics(frame, used.ellipticity_e);
  for (int i = 0; i < 3; ++i) {
    push(std::string("coefficient.r_") + kAxisNames[i], coef.a[i] * used.delta_r0[i],
         coef_harmonics);
    push(std::string("coefficient.v_") + kAxisNames[i], coef.b[i] * used.delta_v0[i],
         coef_harmonics);
  }

  push("a_indep", std::abs(used.delta_a_indep), {0});
  return ledger;
}

}  // namespace

BudgetLedger compensated_ledger(const FrameModel& frame, const SpeciesParams& species_a,
                                const SpeciesParams& species_b, const UncertaintyInputs& inputs,
                                const CompensationShifts& shifts) {
  return assemble_ledger(frame, species_a, species_b, inputs, shifts, true);
}

BudgetLedger uncompensated_ledger(const FrameModel& frame, const SpeciesParams& species_a,
                                  const SpeciesParams& species_b,
                                  const UncertaintyInputs& inputs) {
  return assemble_ledger(frame, species_a, species_b, inputs, CompensationShifts{}, false);
}

FrameModel mission_frame(const MissionModel& mission, double chi) {
  const dynamics::TensorEvolution evo = mission.orbit.ellipticity() > 0.0
                                            ? dynamics::TensorEvolution::elliptic_first_order
                                            : dynamics::TensorEvolution::circular;
  return FrameModel::inertial_orbit(mission.orbit, orbitgrav::OrbitalPhase(chi), evo,
                                    mission.gamma_signed);
}

namespace {

struct GridTotals {
  std::vector<double> compensated;
  std::vector<double> uncompensated;
};

GridTotals ledger_grid(const MissionModel& mission) {
  const int n = mission.chi_grid;
  GridTotals grid;
  grid.compensated.assign(static_cast<size_t>(n), 0.0);
  grid.uncompensated.assign(static_cast<size_t>(n), 0.0);

  const auto worker = [&](int begin, int end) {
    for (int g = begin; g < end; ++g) {
      const double chi = constants::kTwoPi * g / n;
      const FrameModel frame = mission_frame(mission, chi);
      const CompensationShifts solved =
          compensation::solve_shifts(frame, mission.species_a.pulses());
      grid.compensated[static_cast<size_t>(g)] =
          compensated_ledger(frame, mission.species_a, mission.species_b,
                             mission.uncertainties, solved)
              .total_linear();
      grid.uncompensated[static_cast<size_t>(g)] =
          uncompensated_ledger(frame, mission.species_a, mission.species_b,
                               mission.uncertainties)
              .total_linear();
    }
  };

  int threads = mission.threads;
  if (threads <= 0) {
    threads = static_cast<int>(std::min<unsigned>(std::thread::hardware_concurrency(), 8));
    if (threads < 1) threads = 1;
  }
  if (threads == 1 || n < 2 * threads) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (std::thread& t : pool) t.join();
  }
  return grid;
}

double interp_periodic(const std::vector<double>& values, double chi) {
  const size_t n = values.size();
  const double u = orbitgrav::wrap_angle(chi) / constants::kTwoPi * static_cast<double>(n);
  const size_t i0 = static_cast<size_t>(u) % n;
  const size_t i1 = (i0 + 1) % n;
  const double frac = u - std::floor(u);
  return values[i0] * (1.0 - frac) + values[i1] * frac;
}

}  // namespace

IntegrationResult integration_curve(const MissionModel& mission, double duration,
                                    size_t max_rows, const std::vector<double>& thresholds) {
  if (duration < mission.cycle_time) {
    throw ModelViolationError("integration_curve: duration must cover at least one cycle");
  }
  const GridTotals grid = ledger_grid(mission);

  const double tc = mission.cycle_time;
  const double omega = mission.orbit.omega_orbit();
  const double g0 = mission.orbit.g0();
  const long n_total = static_cast<long>(duration / tc);

  demod::NoiseModel noise;
  noise.species_a = {mission.species_a.k_eff(), mission.species_a.T, mission.species_a.atoms,
                     mission.species_a.contrast};
  noise.species_b = {mission.species_b.k_eff(), mission.species_b.T, mission.species_b.atoms,
                     mission.species_b.contrast};
  noise.cycle_time = tc;
  const double sigma_shot = demod::shot_noise_sigma(noise);

  IntegrationResult out;
  out.compensated_crossings.assign(thresholds.size(), -1.0);
  const long stride = std::max<long>(1, n_total / static_cast<long>(std::max<size_t>(max_rows, 1)));
  out.points.reserve(static_cast<size_t>(n_total / stride) + 2);

  double sum_comp = 0.0;
  double sum_uncomp = 0.0;
  double sum_cos2 = 0.0;
  for (long m = 1; m <= n_total; ++m) {
    const double t = static_cast<double>(m) * tc;
    const double c = std::cos(omega * t);
    const double chi = mission.chi0 + omega * t;
    sum_comp += interp_periodic(grid.compensated, chi) * c;
    sum_uncomp += interp_periodic(grid.uncompensated, chi) * c;
    sum_cos2 += c * c;

    const double nd = static_cast<double>(m);
    const double eta_comp = std::abs(2.0 * sum_comp / nd) / g0;
    for (size_t k = 0; k < thresholds.size(); ++k) {
      if (out.compensated_crossings[k] < 0.0 && eta_comp <= thresholds[k]) {
        out.compensated_crossings[k] = t;
      }
    }
    if (m % stride == 0 || m == n_total) {
      IntegrationPoint p;
      p.tau = t;
      p.delta_eta_sys = eta_comp;
      p.delta_eta_sys_uncompensated = std::abs(2.0 * sum_uncomp / nd) / g0;
      p.sigma_eta_stat = sigma_shot / (g0 * std::sqrt(sum_cos2));
      out.points.push_back(p);
    }
  }
  return out;
}

long verification_shots(double sigma_r, double sigma_v, double atoms, double target_dr,
                        double target_dv) {
  if (!(sigma_r > 0.0) || !(sigma_v > 0.0) || !(atoms > 0.0) || !(target_dr > 0.0) ||
      !(target_dv > 0.0)) {
    throw ModelViolationError("verification_shots: all inputs must be positive");
  }
  const double nu_r = 2.0 * sigma_r * sigma_r / (atoms * target_dr * target_dr);
  const double nu_v = 2.0 * sigma_v * sigma_v / (atoms * target_dv * target_dv);
  const double nu = std::max(nu_r, nu_v);
  // guard against roundoff pushing an exact integer ratio over the ceiling
  return std::max<long>(1, static_cast<long>(std::ceil(nu - 1e-9)));
}

}  // namespace ggcsim::budget
