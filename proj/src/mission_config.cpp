#include "ggcsim/mission_config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ggcsim/errors.hpp"

namespace ggcsim::config {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError("config: key '" + key + "' has a non-numeric value '" + v + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  const double d = parse_double(key, value);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) {
    throw ConfigError("config: key '" + key + "' must be an integer");
  }
  return i;
}

using Setter = std::function<void(MissionConfig&, const std::string& key, const std::string&)>;

std::map<std::string, Setter> build_schema() {
  std::map<std::string, Setter> s;
  const auto num = [](double MissionConfig::Orbit::* m) {
    return [m](MissionConfig& c, const std::string& k, const std::string& v) {
      c.orbit.*m = parse_double(k, v);
    };
  };
  s["orbit.altitude_m"] = num(&MissionConfig::Orbit::altitude_m);
  s["orbit.ellipticity"] = num(&MissionConfig::Orbit::ellipticity);
  s["orbit.gm"] = num(&MissionConfig::Orbit::gm);
  s["orbit.earth_radius_m"] = num(&MissionConfig::Orbit::earth_radius_m);
  s["orbit.gamma_sign"] = num(&MissionConfig::Orbit::gamma_sign);

  const auto species = [](MissionConfig::Species MissionConfig::* block) {
    return [block](std::map<std::string, Setter>& s, const std::string& prefix) {
      const auto snum = [block](double MissionConfig::Species::* m) {
        return [block, m](MissionConfig& c, const std::string& k, const std::string& v) {
          c.*block.*m = parse_double(k, v);
        };
      };
      s[prefix + ".name"] = [block](MissionConfig& c, const std::string&, const std::string& v) {
        (c.*block).name = trim(v);
      };
      s[prefix + ".lambda_m"] = snum(&MissionConfig::Species::lambda_m);
      s[prefix + ".pulse_separation_s"] = snum(&MissionConfig::Species::pulse_separation_s);
      s[prefix + ".atoms"] = snum(&MissionConfig::Species::atoms);
      s[prefix + ".contrast"] = snum(&MissionConfig::Species::contrast);
      s[prefix + ".mass_kg"] = snum(&MissionConfig::Species::mass_kg);
    };
  };
  species(&MissionConfig::species_a)(s, "species.a");
  species(&MissionConfig::species_b)(s, "species.b");

  const auto ctrl = [](double MissionConfig::Control::* m) {
    return [m](MissionConfig& c, const std::string& k, const std::string& v) {
      c.control.*m = parse_double(k, v);
    };
  };
  s["control.delta_r0_m"] = ctrl(&MissionConfig::Control::delta_r0_m);
  s["control.delta_v0_ms"] = ctrl(&MissionConfig::Control::delta_v0_ms);
  s["control.offset_r0_m"] = ctrl(&MissionConfig::Control::offset_r0_m);
  s["control.offset_v0_ms"] = ctrl(&MissionConfig::Control::offset_v0_ms);
  s["control.delta_omega_rads"] = ctrl(&MissionConfig::Control::delta_omega_rads);
  s["control.delta_gamma_s2"] = ctrl(&MissionConfig::Control::delta_gamma_s2);
  s["control.delta_theta_rad"] = ctrl(&MissionConfig::Control::delta_theta_rad);
  s["control.delta_f_hz"] = ctrl(&MissionConfig::Control::delta_f_hz);
  s["control.delta_t_s"] = ctrl(&MissionConfig::Control::delta_t_s);
  s["control.cycle_time_s"] = ctrl(&MissionConfig::Control::cycle_time_s);

  s["source.sigma_r_m"] = [](MissionConfig& c, const std::string& k, const std::string& v) {
    c.source.sigma_r_m = parse_double(k, v);
  };
  s["source.sigma_v_ms"] = [](MissionConfig& c, const std::string& k, const std::string& v) {
    c.source.sigma_v_ms = parse_double(k, v);
  };

  s["run.chi_grid"] = [](MissionConfig& c, const std::string& k, const std::string& v) {
    c.run.chi_grid = parse_int(k, v);
  };
  s["run.chi0_rad"] = [](MissionConfig& c, const std::string& k, const std::string& v) {
    c.run.chi0_rad = parse_double(k, v);
  };
  s["run.months"] = [](MissionConfig& c, const std::string& k, const std::string& v) {
    c.run.months = parse_double(k, v);
  };
  s["run.downsample"] = [](MissionConfig& c, const std::string& k, const std::string& v) {
    c.run.downsample = parse_int(k, v);
  };
  s["run.output_dir"] = [](MissionConfig& c, const std::string&, const std::string& v) {
    c.run.output_dir = trim(v);
  };
  return s;
}

MissionConfig parse_config_text(const std::string& text) {
  static const std::map<std::string, Setter> schema = build_schema();
  MissionConfig cfg = table1_preset();
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config: malformed section header at line " + std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: expected 'key = value' at line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = schema.find(full);
    if (it == schema.end()) {
      throw ConfigError("config: unknown key '" + full + "' at line " + std::to_string(line_no));
    }
    it->second(cfg, full, value);
  }
  return cfg;
}

}  // namespace

orbitgrav::OrbitModel MissionConfig::orbit_model() const {
  return orbitgrav::OrbitModel(orbit.altitude_m, orbit.ellipticity, orbit.gm,
                               orbit.earth_radius_m);
}

budget::SpeciesParams MissionConfig::species_params(const Species& s) const {
  budget::SpeciesParams p;
  p.name = s.name;
  p.lambda = s.lambda_m;
  p.T = s.pulse_separation_s;
  p.atoms = s.atoms;
  p.contrast = s.contrast;
  p.mass = s.mass_kg;
  if (!(p.lambda > 0.0) || !(p.T > 0.0)) {
    throw ConfigError("config: species '" + p.name + "' needs positive lambda_m and "
                      "pulse_separation_s");
  }
  return p;
}

budget::MissionModel MissionConfig::mission_model() const {
  const orbitgrav::OrbitModel om = orbit_model();
  budget::MissionModel m{om};
  m.gamma_signed = orbit.gamma_sign >= 0.0 ? om.gamma() : -om.gamma();
  m.species_a = species_params(species_a);
  m.species_b = species_params(species_b);
  m.uncertainties.delta_r0.setConstant(control.delta_r0_m);
  m.uncertainties.delta_v0.setConstant(control.delta_v0_ms);
  m.uncertainties.offset_r0.setConstant(control.offset_r0_m);
  m.uncertainties.offset_v0.setConstant(control.offset_v0_ms);
  m.uncertainties.delta_omega = control.delta_omega_rads;
  m.uncertainties.delta_gamma = control.delta_gamma_s2;
  m.uncertainties.delta_theta = control.delta_theta_rad;
  m.uncertainties.delta_f = control.delta_f_hz;
  m.uncertainties.delta_T = control.delta_t_s;
  m.uncertainties.ellipticity_e = orbit.ellipticity;
  m.cycle_time = control.cycle_time_s;
  m.chi0 = run.chi0_rad;
  m.chi_grid = run.chi_grid;
  if (m.cycle_time <= 0.0) throw ConfigError("config: cycle_time_s must be positive");
  if (m.chi_grid < 4) throw ConfigError("config: chi_grid must be at least 4");
  return m;
}

MissionConfig table1_preset() {
  MissionConfig cfg;
  cfg.species_a.name = "Rb87";
  cfg.species_a.lambda_m = 780e-9;
  cfg.species_a.mass_kg = constants::kMassRb87;
  cfg.species_b.name = "K41";
  cfg.species_b.lambda_m = 767e-9;
  cfg.species_b.mass_kg = constants::kMassK41;
  return cfg;
}

std::string table1_preset_text() {
  const MissionConfig c = table1_preset();
  std::ostringstream os;
  os.precision(17);
  os << "# UFF test mission preset\n"
     << "[orbit]\n"
     << "altitude_m = " << c.orbit.altitude_m << "\n"
     << "ellipticity = " << c.orbit.ellipticity << "\n"
     << "gm = " << c.orbit.gm << "\n"
     << "earth_radius_m = " << c.orbit.earth_radius_m << "\n"
     << "gamma_sign = " << c.orbit.gamma_sign << "\n\n";
  const auto species = [&os](const char* header, const MissionConfig::Species& s) {
    os << "[" << header << "]\n"
       << "name = " << s.name << "\n"
       << "lambda_m = " << s.lambda_m << "\n"
       << "pulse_separation_s = " << s.pulse_separation_s << "\n"
       << "atoms = " << s.atoms << "\n"
       << "contrast = " << s.contrast << "\n"
       << "mass_kg = " << s.mass_kg << "\n\n";
  };
  species("species.a", c.species_a);
  species("species.b", c.species_b);
  os << "[control]\n"
     << "delta_r0_m = " << c.control.delta_r0_m << "\n"
     << "delta_v0_ms = " << c.control.delta_v0_ms << "\n"
     << "offset_r0_m = " << c.control.offset_r0_m << "\n"
     << "offset_v0_ms = " << c.control.offset_v0_ms << "\n"
     << "delta_omega_rads = " << c.control.delta_omega_rads << "\n"
     << "delta_gamma_s2 = " << c.control.delta_gamma_s2 << "\n"
     << "delta_theta_rad = " << c.control.delta_theta_rad << "\n"
     << "delta_f_hz = " << c.control.delta_f_hz << "\n"
     << "delta_t_s = " << c.control.delta_t_s << "\n"
     << "cycle_time_s = " << c.control.cycle_time_s << "\n\n"
     << "[source]\n"
     << "sigma_r_m = " << c.source.sigma_r_m << "\n"
     << "sigma_v_ms = " << c.source.sigma_v_ms << "\n\n"
     << "[run]\n"
     << "chi_grid = " << c.run.chi_grid << "\n"
     << "chi0_rad = " << c.run.chi0_rad << "\n"
     << "months = " << c.run.months << "\n"
     << "downsample = " << c.run.downsample << "\n"
     << "output_dir = " << c.run.output_dir << "\n";
  return os.str();
}

MissionConfig load_config(const std::string& path_or_preset) {
  if (path_or_preset == "table1") return table1_preset();
  std::ifstream in(path_or_preset);
  if (!in) throw ConfigError("config: cannot open '" + path_or_preset + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace ggcsim::config
