#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "eitgap/config.hpp"
#include "eitgap/errors.hpp"
#include "fixtures.hpp"

using namespace eitgap;
using fixtures::config_path;
using fixtures::rel;
using json = nlohmann::json;

namespace {

json read_json(const std::string& name) {
  std::ifstream in(config_path(name));
  return json::parse(in);
}

/// Key named by the ConfigError raised for `j`, or "" when parsing succeeds.
std::string error_key(const json& j) {
  try {
    (void)parse_config(j.dump());
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST_CASE("every bundled config round-trips through canonical JSON") {
  int seen = 0;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(std::filesystem::path(EITGAP_CONFIG_DIR))) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    CAPTURE(entry.path().string());
    const Config c = load_config(entry.path());
    const std::string text = serialize_config(c);
    const Config back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
  CHECK(seen == 16);
}

TEST_CASE("malformed configs name the offending key") {
  json j = read_json("protocol_trap.json");
  CHECK(error_key(j).empty());

  json unknown = j;
  unknown["medium"]["colour"] = "blue";
  CHECK(error_key(unknown) == "medium.colour");

  json missing = j;
  missing["drive"].erase("detuning_hz");
  CHECK(error_key(missing) == "drive.detuning_hz");

  json wrong_type = j;
  wrong_type["grid"]["points"] = "many";
  CHECK(error_key(wrong_type) == "grid.points");

  json negative = j;
  negative["medium"]["length_m"] = -1.0;
  CHECK(error_key(negative) == "medium.length_m");

  json top = j;
  top["extra"] = 1;
  CHECK(error_key(top) == "extra");

  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  CHECK_THROWS_AS(load_config(config_path("does_not_exist.json")), ConfigError);

  const Config no_spectrum = parse_config(j.dump());
  CHECK_THROWS_AS(no_spectrum.require_spectrum(), ConfigError);
  CHECK_THROWS_AS(no_spectrum.require_evolve(), ConfigError);
}

TEST_CASE("frequencies in Hz become angular rates") {
  const Config c = load_config(config_path("reflect_spectrum.json"));
  const MediumParams m = c.require_medium().params();
  CHECK(rel(m.coupling, two_pi * c.require_medium().coupling_hz) < 1e-15);
  CHECK(rel(m.gamma_ab, two_pi * c.require_medium().gamma_ab_hz) < 1e-15);
  CHECK(rel(m.carrier_wavenumber, two_pi / c.require_medium().wavelength_m) < 1e-15);

  const StaticDrive d = static_drive(c);
  const DriveConfig& dc = c.require_drive();
  CHECK(rel(d.delta, two_pi * dc.detuning_hz) < 1e-15);
  CHECK(rel(d.omega_c, two_pi * std::get<double>(*dc.control_hz)) < 1e-15);

  const auto grid = c.require_spectrum().omega_grid();
  REQUIRE(grid.size() == c.require_spectrum().points);
  CHECK(rel(grid.front(), two_pi * c.require_spectrum().omega_min_hz) < 1e-15);
  CHECK(rel(grid.back(), two_pi * c.require_spectrum().omega_max_hz) < 1e-15);
}

TEST_CASE("segment lists drive the schedule directly") {
  json j = read_json("protocol_trap.json");
  const Scenario staged = build_scenario(parse_config(j.dump()));

  const json s = j["scenario"];
  const double t_store = s["t_store_s"], t_hold = s["t_hold_s"], t_release = s["t_release_s"];
  const double t_trap_end = s["t_trap_end_s"], ramp = s["ramp_time_s"];
  const double c_in = s["omega_c_in_hz"], c_0 = s["omega_c_0_hz"], o_s = s["omega_s_hz"];
  j["drive"]["control_hz"] = json::array({
      {{"t_start_s", 0.0}, {"t_end_s", t_store - ramp}, {"from_hz", c_in}, {"to_hz", c_in},
       {"shape", "hold"}},
      {{"t_start_s", t_store - ramp}, {"t_end_s", t_store}, {"from_hz", c_in}, {"to_hz", 0.0}},
      {{"t_start_s", t_store}, {"t_end_s", t_release}, {"from_hz", 0.0}, {"to_hz", 0.0},
       {"shape", "hold"}},
      {{"t_start_s", t_release}, {"t_end_s", t_release + ramp}, {"from_hz", 0.0}, {"to_hz", c_0}},
  });
  j["drive"]["standing_wave_hz"] = json::array({
      {{"t_start_s", 0.0}, {"t_end_s", t_hold}, {"from_hz", 0.0}, {"to_hz", 0.0},
       {"shape", "hold"}},
      {{"t_start_s", t_hold}, {"t_end_s", t_hold + ramp}, {"from_hz", 0.0}, {"to_hz", o_s}},
      {{"t_start_s", t_hold + ramp}, {"t_end_s", t_trap_end}, {"from_hz", o_s}, {"to_hz", o_s},
       {"shape", "hold"}},
      {{"t_start_s", t_trap_end}, {"t_end_s", t_trap_end + ramp}, {"from_hz", o_s}, {"to_hz", 0.0}},
  });

  SUBCASE("amplitudes are forbidden next to segment lists") {
    CHECK_THROWS_AS(build_scenario(parse_config(j.dump())), ConfigError);
  }
  SUBCASE("amplitudes are read off the segments") {
    j["scenario"].erase("omega_c_in_hz");
    j["scenario"].erase("omega_c_0_hz");
    j["scenario"].erase("omega_s_hz");
    const Config c = parse_config(j.dump());
    CHECK(c.require_drive().has_segments());
    const Scenario seg = build_scenario(c);
    CHECK(rel(seg.omega_c_in, staged.omega_c_in) < 1e-15);
    CHECK(rel(seg.omega_c_0, staged.omega_c_0) < 1e-15);
    CHECK(rel(seg.omega_s, staged.omega_s) < 1e-15);
    for (int i = 0; i <= 400; ++i) {
      const double t = staged.stages.t_final * i / 400.0;
      CHECK(seg.schedule.omega_c(t) == doctest::Approx(staged.schedule.omega_c(t)).epsilon(1e-14));
      CHECK(seg.schedule.omega_s(t) == doctest::Approx(staged.schedule.omega_s(t)).epsilon(1e-14));
    }
    CHECK(parse_config(serialize_config(c)) == c);
  }
  SUBCASE("bad segment shape names its path") {
    j["drive"]["control_hz"][1]["shape"] = "wobble";
    CHECK(error_key(j) == "drive.control_hz[1].shape");
  }
}

TEST_CASE("scenario amplitudes are required without segment lists") {
  json j = read_json("protocol_trap.json");
  j["scenario"].erase("omega_s_hz");
  CHECK_THROWS_AS(build_scenario(parse_config(j.dump())), ConfigError);

  json order = read_json("protocol_trap.json");
  order["scenario"]["t_release_s"] = order["scenario"]["t_hold_s"];
  CHECK_THROWS_AS(build_scenario(parse_config(order.dump())), ConfigError);
}
