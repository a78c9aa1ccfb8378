#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ggcsim/budget.hpp"
#include "ggcsim/compensation.hpp"
#include "ggcsim/csv.hpp"
#include "ggcsim/errors.hpp"
#include "ggcsim/mission_config.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ggcsim;

constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;

std::string harmonics_string(const std::vector<int>& ks) {
  std::string out;
  for (size_t i = 0; i < ks.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(ks[i]);
  }
  return out;
}

fs::path output_dir(const config::MissionConfig& cfg, const std::string& cli_override) {
  if (!cli_override.empty()) return cli_override;
  if (const char* env = std::getenv("GGCSIM_OUTPUT_DIR")) {
    if (*env) return env;
  }
  return cfg.run.output_dir;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);  // '\n' line endings everywhere
  if (!out) throw ConfigError("cannot open output file '" + path.string() + "'");
  std::cerr << "writing " << path.string() << "\n";
  return out;
}

void warn_if_large_shifts(const compensation::CompensationShifts& s) {
  dynamics::PulseSequence probe;
  probe.dx2 = s.dx2;
  probe.dz2 = s.dz2;
  probe.dx3 = s.dx3;
  probe.dz3 = s.dz3;
  if (!probe.shifts_perturbative()) {
    std::cerr << "warning: shifts exceed the perturbative regime (|delta| > 1e-2) at chi = "
              << s.chi0 << "\n";
  }
}

int cmd_shifts(const config::MissionConfig& cfg, int chi_steps, bool elliptic,
               const std::string& out_dir) {
  const budget::MissionModel mission = cfg.mission_model();
  dynamics::FrameModel frame =
      elliptic ? budget::mission_frame(mission, 0.0)
               : dynamics::FrameModel::inertial_orbit(mission.orbit, orbitgrav::OrbitalPhase(0.0),
                                                      dynamics::TensorEvolution::circular,
                                                      mission.gamma_signed);
  const auto grid = compensation::uniform_chi_grid(chi_steps);
  const auto sweep = compensation::shifts_sweep(frame, mission.species_a.pulses(), grid);

  auto out = open_output(output_dir(cfg, out_dir), "shifts.csv");
  csv::Writer w(out);
  w.header({"chi", "dx2", "dz2", "dx3", "dz3", "theta2", "theta3", "df2", "df3"});
  const double k_eff = mission.species_a.k_eff();
  for (const auto& s : sweep) {
    warn_if_large_shifts(s);
    const compensation::LaserSettings laser = compensation::shifts_to_laser(s, k_eff);
    w.row({s.chi0, s.dx2, s.dz2, s.dx3, s.dz3, laser.theta2, laser.theta3, laser.df2, laser.df3});
  }
  return 0;
}

int cmd_budget(const config::MissionConfig& cfg, double chi, bool uncompensated,
               const std::string& out_dir) {
  const budget::MissionModel mission = cfg.mission_model();
  const dynamics::FrameModel frame = budget::mission_frame(mission, chi);

  budget::BudgetLedger ledger;
  if (uncompensated) {
    ledger = budget::uncompensated_ledger(frame, mission.species_a, mission.species_b,
                                          mission.uncertainties);
  } else {
    const auto solved = compensation::solve_shifts(frame, mission.species_a.pulses());
    warn_if_large_shifts(solved);
    ledger = budget::compensated_ledger(frame, mission.species_a, mission.species_b,
                                        mission.uncertainties, solved);
  }

  auto out = open_output(output_dir(cfg, out_dir),
                         uncompensated ? "ledger_uncompensated.csv" : "ledger.csv");
  csv::Writer w(out);
  w.header({"term", "magnitude", "harmonics"});
  for (const auto& t : ledger.terms) {
    w.line({t.label, csv::format_double(t.magnitude), harmonics_string(t.harmonics)});
  }
  w.line({"total_linear", csv::format_double(ledger.total_linear()), ""});
  w.line({"total_quadrature", csv::format_double(ledger.total_quadrature()), ""});
  return 0;
}

int cmd_integrate(const config::MissionConfig& cfg, double months, const std::string& out_dir) {
  const budget::MissionModel mission = cfg.mission_model();
  const double duration = months * config::kSecondsPerMonth;
  const auto result = budget::integration_curve(mission, duration,
                                                static_cast<size_t>(cfg.run.downsample));

  auto out = open_output(output_dir(cfg, out_dir), "integration.csv");
  csv::Writer w(out);
  w.header({"tau_s", "delta_eta_sys", "delta_eta_sys_uncompensated", "sigma_eta_stat"});
  for (const auto& p : result.points) {
    w.row({p.tau, p.delta_eta_sys, p.delta_eta_sys_uncompensated, p.sigma_eta_stat});
  }
  return 0;
}

int cmd_verify_shots(const config::MissionConfig& cfg, double target_r, double target_v) {
  const long nu = budget::verification_shots(cfg.source.sigma_r_m, cfg.source.sigma_v_ms,
                                             cfg.species_a.atoms, target_r, target_v);
  std::cout << nu << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-borne UFF test analysis: gravity-gradient compensation, "
               "uncertainty budgets and demodulated integration"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int chi_steps = 0;
  bool elliptic = false;
  double chi = 0.0;
  bool uncompensated = false;
  double months = -1.0;
  double target_r = 1e-6;
  double target_v = 1e-6;

  auto* shifts = app.add_subcommand("shifts", "Sweep compensation shifts and laser settings "
                                              "over one orbit (CSV)");
  shifts->add_option("config", config_path, "config file path or 'table1'")->required();
  shifts->add_option("--chi-steps", chi_steps, "number of orbital positions");
  shifts->add_flag("--elliptic", elliptic, "use the first-order elliptic tensor");
  shifts->add_option("--out-dir", out_dir, "output directory");

  auto* budget_cmd = app.add_subcommand("budget", "Differential-acceleration uncertainty "
                                                  "ledger at one orbital position (CSV)");
  budget_cmd->add_option("config", config_path, "config file path or 'table1'")->required();
  budget_cmd->add_option("--chi", chi, "orbital position, rad");
  budget_cmd->add_flag("--uncompensated", uncompensated, "ledger without compensation");
  budget_cmd->add_option("--out-dir", out_dir, "output directory");

  auto* integrate = app.add_subcommand("integrate", "Demodulated integration curves over the "
                                                    "mission (CSV)");
  integrate->add_option("config", config_path, "config file path or 'table1'")->required();
  integrate->add_option("--months", months, "mission duration in months");
  integrate->add_option("--out-dir", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify-shots", "Verification shots needed for the given "
                                                    "co-location targets");
  verify->add_option("config", config_path, "config file path or 'table1'")->required();
  verify->add_option("--target-r", target_r, "position target, m");
  verify->add_option("--target-v", target_v, "velocity target, m/s");

  CLI11_PARSE(app, argc, argv);

  try {
    const config::MissionConfig cfg = config::load_config(config_path);
    if (shifts->parsed()) {
      return cmd_shifts(cfg, chi_steps > 0 ? chi_steps : cfg.run.chi_grid, elliptic, out_dir);
    }
    if (budget_cmd->parsed()) {
      return cmd_budget(cfg, chi, uncompensated, out_dir);
    }
    if (integrate->parsed()) {
      return cmd_integrate(cfg, months > 0.0 ? months : cfg.run.months, out_dir);
    }
    if (verify->parsed()) {
      return cmd_verify_shots(cfg, target_r, target_v);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolverError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
