#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ggcsim/csv.hpp"
#include "ggcsim/errors.hpp"
#include "ggcsim/mission_config.hpp"

using namespace ggcsim;
using namespace ggcsim::config;

namespace {

std::string write_temp(const std::string& text) {
  static int counter = 0;
  std::string path = "ggcsim_test_cfg_" + std::to_string(counter++) + ".tmp";
  std::ofstream out(path);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("table1 preset values") {
  const MissionConfig cfg = load_config("table1");
  CHECK(cfg.orbit.altitude_m == 700e3);
  CHECK(cfg.orbit.ellipticity == 1e-3);
  CHECK(cfg.orbit.gamma_sign == -1.0);
  CHECK(cfg.species_a.name == "Rb87");
  CHECK(cfg.species_a.lambda_m == 780e-9);
  CHECK(cfg.species_b.lambda_m == 767e-9);
  CHECK(cfg.species_a.pulse_separation_s == 20.0);
  CHECK(cfg.species_a.atoms == 1e6);
  CHECK(cfg.control.cycle_time_s == 10.0);
  CHECK(cfg.control.delta_r0_m == 1e-6);
  CHECK(cfg.control.delta_v0_ms == 1e-6);
  CHECK(cfg.control.delta_omega_rads == 1e-7);
  CHECK(cfg.control.delta_gamma_s2 == 1e-10);
  CHECK(cfg.control.delta_theta_rad == 1e-6);
  CHECK(cfg.control.delta_f_hz == 400e3);
  CHECK(cfg.run.chi_grid == 720);

  const budget::MissionModel m = cfg.mission_model();
  CHECK(m.gamma_signed < 0.0);
  CHECK(std::abs(m.gamma_signed) == m.orbit.gamma());
  CHECK(m.species_a.k_eff() == doctest::Approx(8.0 * constants::kPi / 780e-9));
}

TEST_CASE("the shipped preset text parses back to the preset") {
  const std::string path = write_temp(table1_preset_text());
  const MissionConfig cfg = load_config(path);
  std::remove(path.c_str());
  CHECK(cfg.orbit.altitude_m == 700e3);
  CHECK(cfg.species_b.name == "K41");
  CHECK(cfg.control.delta_f_hz == 400e3);
  CHECK(cfg.run.months == 15.0);
  CHECK(cfg.source.sigma_r_m == 224e-6);
}

TEST_CASE("file values override the preset") {
  const std::string path = write_temp(
      "[orbit]\n"
      "altitude_m = 500e3   # lower orbit\n"
      "ellipticity = 0\n"
      "\n"
      "[control]\n"
      "delta_theta_rad = 2e-6\n"
      "\n"
      "[run]\n"
      "chi_grid = 90\n");
  const MissionConfig cfg = load_config(path);
  std::remove(path.c_str());
  CHECK(cfg.orbit.altitude_m == 500e3);
  CHECK(cfg.orbit.ellipticity == 0.0);
  CHECK(cfg.control.delta_theta_rad == 2e-6);
  CHECK(cfg.run.chi_grid == 90);
  // untouched keys keep preset defaults
  CHECK(cfg.species_a.lambda_m == 780e-9);
  CHECK(cfg.control.delta_f_hz == 400e3);
}

TEST_CASE("config rejections") {
  SUBCASE("unknown key") {
    const std::string path = write_temp("[orbit]\naltitude_km = 700\n");
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());
  }
  SUBCASE("unknown section") {
    const std::string path = write_temp("[telescope]\nfocal = 2\n");
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());
  }
  SUBCASE("non-numeric value") {
    const std::string path = write_temp("[orbit]\naltitude_m = seven\n");
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());
  }
  SUBCASE("malformed line") {
    const std::string path = write_temp("[orbit]\naltitude_m 700e3\n");
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::remove(path.c_str());
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config("no_such_file.cfg"), ConfigError);
  }
  SUBCASE("invalid physics") {
    const std::string path = write_temp("[orbit]\nellipticity = 1.5\n");
    MissionConfig cfg = load_config(path);
    std::remove(path.c_str());
    CHECK_THROWS_AS(cfg.mission_model(), ConfigError);
  }
}

TEST_CASE("csv formatting: 17 significant digits, round-trip exact, deterministic") {
  for (double v : {0.1, -4.5068983837210502e-4, 1.0 / 3.0, 2.2548886926044e-06, 1e300,
                   -3.0828e-6, 0.0}) {
    const std::string s = csv::format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }

  const auto render = [] {
    std::ostringstream os;
    csv::Writer w(os);
    w.header({"a", "b"});
    w.row({1.0 / 3.0, -2.5e-7});
    w.row({5917.4312, 0.0});
    return os.str();
  };
  const std::string first = render();
  CHECK(first == render());
  CHECK(first.substr(0, 4) == "a,b\n");
  CHECK(first.find("0.33333333333333331") != std::string::npos);
}
