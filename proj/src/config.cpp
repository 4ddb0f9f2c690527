#include "eitgap/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eitgap/errors.hpp"
#include "eitgap/units.hpp"

namespace eitgap {

namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

/// Reads one JSON object; every key must be consumed before finish().
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "must be an object");
  }

  const std::string& path() const { return path_; }

  bool has(const std::string& key) {
    known_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(join(path_, key), "required key is missing");
    return j_.at(key);
  }

  double number(const std::string& key) { return as_number(at(key), join(path_, key)); }

  double number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::size_t count(const std::string& key) { return as_count(at(key), join(path_, key)); }

  std::size_t count_or(const std::string& key, std::size_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  std::string text(const std::string& key) {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(join(path_, key), "must be a string");
    return v.get<std::string>();
  }

  bool flag_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ConfigError(join(path_, key), "must be true or false");
    return v.get<bool>();
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!known_.count(item.key())) throw ConfigError(join(path_, item.key()), "unknown key");
  }

  static double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
    return x;
  }

  static std::size_t as_count(const json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError(key, "must be a non-negative integer");
    return v.get<std::size_t>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

void positive(double v, const std::string& key) {
  if (!(v > 0.0)) throw ConfigError(key, "must be > 0");
}

void non_negative(double v, const std::string& key) {
  if (!(v >= 0.0)) throw ConfigError(key, "must be >= 0");
}

MediumConfig read_medium(const json& j) {
  Reader r(j, "medium");
  MediumConfig m;
  m.coupling_hz = r.number("coupling_hz");
  m.gamma_ab_hz = r.number("gamma_ab_hz");
  m.gamma_bc_hz = r.number("gamma_bc_hz");
  m.length_m = r.number("length_m");
  m.wavelength_m = r.number("wavelength_m");
  r.finish();
  positive(m.coupling_hz, "medium.coupling_hz");
  positive(m.gamma_ab_hz, "medium.gamma_ab_hz");
  non_negative(m.gamma_bc_hz, "medium.gamma_bc_hz");
  if (m.gamma_bc_hz > m.gamma_ab_hz)
    throw ConfigError("medium.gamma_bc_hz", "must not exceed gamma_ab_hz");
  positive(m.length_m, "medium.length_m");
  positive(m.wavelength_m, "medium.wavelength_m");
  return m;
}

RampConfig read_ramp(const json& j, const std::string& key) {
  if (j.is_number()) {
    const double v = Reader::as_number(j, key);
    non_negative(v, key);
    return v;
  }
  if (!j.is_array() || j.empty())
    throw ConfigError(key, "must be a number or a non-empty list of segments");
  std::vector<SegmentConfig> segments;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string path = key + "[" + std::to_string(i) + "]";
    Reader r(j[i], path);
    SegmentConfig s;
    s.t_start_s = r.number("t_start_s");
    s.t_end_s = r.number("t_end_s");
    s.from_hz = r.number("from_hz");
    s.to_hz = r.number("to_hz");
    if (r.has("shape")) {
      try {
        s.shape = ramp_shape_from_string(r.text("shape"));
      } catch (const DomainError& e) {
        throw ConfigError(join(path, "shape"), e.what());
      }
    }
    r.finish();
    segments.push_back(s);
  }
  try {
    (void)to_ramp(segments);
  } catch (const DomainError& e) {
    throw ConfigError(key, e.what());
  }
  return segments;
}

DriveConfig read_drive(const json& j) {
  Reader r(j, "drive");
  DriveConfig d;
  d.detuning_hz = r.number("detuning_hz");
  d.delta_k_per_m = r.number_or("delta_k_per_m", 0.0);
  if (r.has("control_hz")) d.control_hz = read_ramp(r.at("control_hz"), "drive.control_hz");
  if (r.has("standing_wave_hz"))
    d.standing_wave_hz = read_ramp(r.at("standing_wave_hz"), "drive.standing_wave_hz");
  r.finish();
  if (d.detuning_hz == 0.0) throw ConfigError("drive.detuning_hz", "must be nonzero");
  return d;
}

SpectrumConfig read_spectrum(const json& j) {
  Reader r(j, "spectrum");
  SpectrumConfig s;
  s.omega_min_hz = r.number("omega_min_hz");
  s.omega_max_hz = r.number("omega_max_hz");
  s.points = r.count("points");
  if (r.has("slabs")) {
    const json& v = r.at("slabs");
    if (!v.is_number_integer()) throw ConfigError("spectrum.slabs", "must be an integer");
    s.slabs = v.get<int>();
  }
  s.time_s = r.number_or("time_s", 0.0);
  r.finish();
  if (s.points < 1) throw ConfigError("spectrum.points", "must be >= 1");
  if (s.points > 1 && !(s.omega_max_hz > s.omega_min_hz))
    throw ConfigError("spectrum.omega_max_hz", "must exceed omega_min_hz");
  if (s.slabs < 8 || s.slabs % 2 != 0)
    throw ConfigError("spectrum.slabs", "must be even and >= 8");
  return s;
}

GridConfig read_grid(const json& j) {
  Reader r(j, "grid");
  GridConfig g;
  g.z_min_m = r.number("z_min_m");
  g.z_max_m = r.number("z_max_m");
  g.points = r.count("points");
  r.finish();
  try {
    g.spec().validate();
  } catch (const DomainError& e) {
    throw ConfigError("grid", e.what());
  }
  return g;
}

PulseConfig read_pulse(const json& j, const std::string& path) {
  Reader r(j, path);
  PulseConfig p;
  p.center_m = r.number("center_m");
  p.rms_width_m = r.number("rms_width_m");
  if (r.has("direction")) {
    const std::string d = r.text("direction");
    if (d == "forward")
      p.direction = Direction::forward;
    else if (d == "backward")
      p.direction = Direction::backward;
    else
      throw ConfigError(join(path, "direction"), "must be \"forward\" or \"backward\"");
  }
  p.duration_s = r.optional_number("duration_s");
  r.finish();
  positive(p.rms_width_m, join(path, "rms_width_m"));
  if (p.duration_s) positive(*p.duration_s, join(path, "duration_s"));
  return p;
}

EvolveConfig read_evolve(const json& j) {
  Reader r(j, "evolve");
  EvolveConfig e;
  e.t0_s = r.number_or("t0_s", 0.0);
  e.t1_s = r.number("t1_s");
  e.dt_s = r.number("dt_s");
  e.snapshot_stride = r.count_or("snapshot_stride", 1);
  e.pulse = read_pulse(r.at("pulse"), "evolve.pulse");
  r.finish();
  if (!(e.t1_s > e.t0_s)) throw ConfigError("evolve.t1_s", "must exceed t0_s");
  positive(e.dt_s, "evolve.dt_s");
  if (e.snapshot_stride < 1) throw ConfigError("evolve.snapshot_stride", "must be >= 1");
  return e;
}

ScenarioConfig read_scenario(const json& j) {
  Reader r(j, "scenario");
  ScenarioConfig s;
  s.pulse = read_pulse(r.at("pulse"), "scenario.pulse");
  s.t_store_s = r.number("t_store_s");
  s.t_hold_s = r.number("t_hold_s");
  s.t_release_s = r.number("t_release_s");
  s.t_trap_end_s = r.number("t_trap_end_s");
  s.t_final_s = r.number("t_final_s");
  s.omega_c_in_hz = r.optional_number("omega_c_in_hz");
  s.omega_c_0_hz = r.optional_number("omega_c_0_hz");
  s.omega_s_hz = r.optional_number("omega_s_hz");
  s.ramp_time_s = r.number("ramp_time_s");
  s.dt_s = r.number("dt_s");
  s.snapshot_stride = r.count_or("snapshot_stride", 100);
  r.finish();
  positive(s.ramp_time_s, "scenario.ramp_time_s");
  positive(s.dt_s, "scenario.dt_s");
  if (s.omega_c_in_hz) positive(*s.omega_c_in_hz, "scenario.omega_c_in_hz");
  if (s.omega_c_0_hz) positive(*s.omega_c_0_hz, "scenario.omega_c_0_hz");
  if (s.omega_s_hz) non_negative(*s.omega_s_hz, "scenario.omega_s_hz");
  if (s.snapshot_stride < 1) throw ConfigError("scenario.snapshot_stride", "must be >= 1");
  return s;
}

ChecksConfig read_checks(const json& j) {
  Reader r(j, "checks");
  ChecksConfig c;
  c.much_greater = r.number_or("much_greater", c.much_greater);
  c.much_less = r.number_or("much_less", c.much_less);
  c.at_most_slack = r.number_or("at_most_slack", c.at_most_slack);
  r.finish();
  if (!(c.much_greater > 1.0)) throw ConfigError("checks.much_greater", "must be > 1");
  if (!(c.much_less > 0.0 && c.much_less < 1.0))
    throw ConfigError("checks.much_less", "must lie in (0, 1)");
  if (!(c.at_most_slack > 1.0)) throw ConfigError("checks.at_most_slack", "must be > 1");
  return c;
}

OutputConfig read_output(const json& j) {
  Reader r(j, "output");
  OutputConfig o;
  if (r.has("directory")) o.directory = r.text("directory");
  if (r.has("prefix")) o.prefix = r.text("prefix");
  o.svg = r.flag_or("svg", false);
  o.binary = r.flag_or("binary", false);
  r.finish();
  if (o.prefix.empty() || o.prefix.find('/') != std::string::npos)
    throw ConfigError("output.prefix", "must be a non-empty file name stem");
  return o;
}

json write_ramp(const RampConfig& ramp) {
  if (const double* v = std::get_if<double>(&ramp)) return *v;
  json list = json::array();
  for (const auto& s : std::get<std::vector<SegmentConfig>>(ramp)) {
    list.push_back({{"t_start_s", s.t_start_s},
                    {"t_end_s", s.t_end_s},
                    {"from_hz", s.from_hz},
                    {"to_hz", s.to_hz},
                    {"shape", std::string(to_string(s.shape))}});
  }
  return list;
}

json write_pulse(const PulseConfig& p) {
  json j = {{"center_m", p.center_m},
            {"rms_width_m", p.rms_width_m},
            {"direction", p.direction == Direction::forward ? "forward" : "backward"}};
  if (p.duration_s) j["duration_s"] = *p.duration_s;
  return j;
}

template <class T>
const T& required_block(const std::optional<T>& block, const char* name) {
  if (!block) throw ConfigError(name, "required block is missing");
  return *block;
}

}  // namespace

MediumParams MediumConfig::params() const {
  MediumParams m;
  m.coupling = hz_to_angular(coupling_hz);
  m.gamma_ab = hz_to_angular(gamma_ab_hz);
  m.gamma_bc = hz_to_angular(gamma_bc_hz);
  m.length = length_m;
  m.carrier_wavenumber = two_pi / wavelength_m;
  return m;
}

Ramp to_ramp(const RampConfig& ramp) {
  if (const double* v = std::get_if<double>(&ramp)) return Ramp::constant(hz_to_angular(*v));
  std::vector<RampSegment> segments;
  for (const auto& s : std::get<std::vector<SegmentConfig>>(ramp))
    segments.push_back(
        {s.t_start_s, s.t_end_s, hz_to_angular(s.from_hz), hz_to_angular(s.to_hz), s.shape});
  return Ramp(std::move(segments));
}

bool DriveConfig::has_segments() const {
  const auto segmented = [](const std::optional<RampConfig>& r) {
    return r && std::holds_alternative<std::vector<SegmentConfig>>(*r);
  };
  return segmented(control_hz) || segmented(standing_wave_hz);
}

DriveSchedule DriveConfig::schedule() const {
  if (!control_hz) throw ConfigError("drive.control_hz", "required key is missing");
  if (!standing_wave_hz) throw ConfigError("drive.standing_wave_hz", "required key is missing");
  DriveSchedule s;
  s.omega_c = to_ramp(*control_hz);
  s.omega_s = to_ramp(*standing_wave_hz);
  s.delta = hz_to_angular(detuning_hz);
  s.delta_k = delta_k_per_m;
  return s;
}

std::vector<double> SpectrumConfig::omega_grid() const {
  std::vector<double> grid(points);
  const double lo = hz_to_angular(omega_min_hz);
  const double hi = hz_to_angular(omega_max_hz);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
  return grid;
}

const MediumConfig& Config::require_medium() const { return required_block(medium, "medium"); }
const DriveConfig& Config::require_drive() const { return required_block(drive, "drive"); }
const SpectrumConfig& Config::require_spectrum() const {
  return required_block(spectrum, "spectrum");
}
const GridConfig& Config::require_grid() const { return required_block(grid, "grid"); }
const EvolveConfig& Config::require_evolve() const { return required_block(evolve, "evolve"); }
const ScenarioConfig& Config::require_scenario() const {
  return required_block(scenario, "scenario");
}

Config parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  Reader r(root, "");
  Config c;
  if (r.has("description")) c.description = r.text("description");
  if (r.has("medium")) c.medium = read_medium(r.at("medium"));
  if (r.has("drive")) c.drive = read_drive(r.at("drive"));
  if (r.has("spectrum")) c.spectrum = read_spectrum(r.at("spectrum"));
  if (r.has("grid")) c.grid = read_grid(r.at("grid"));
  if (r.has("evolve")) c.evolve = read_evolve(r.at("evolve"));
  if (r.has("scenario")) c.scenario = read_scenario(r.at("scenario"));
  if (r.has("checks")) c.checks = read_checks(r.at("checks"));
  if (r.has("output")) c.output = read_output(r.at("output"));
  r.finish();
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const Config& c) {
  json root = json::object();
  if (c.description) root["description"] = *c.description;
  if (c.medium) {
    const auto& m = *c.medium;
    root["medium"] = {{"coupling_hz", m.coupling_hz},
                      {"gamma_ab_hz", m.gamma_ab_hz},
                      {"gamma_bc_hz", m.gamma_bc_hz},
                      {"length_m", m.length_m},
                      {"wavelength_m", m.wavelength_m}};
  }
  if (c.drive) {
    const auto& d = *c.drive;
    json j = {{"detuning_hz", d.detuning_hz}, {"delta_k_per_m", d.delta_k_per_m}};
    if (d.control_hz) j["control_hz"] = write_ramp(*d.control_hz);
    if (d.standing_wave_hz) j["standing_wave_hz"] = write_ramp(*d.standing_wave_hz);
    root["drive"] = j;
  }
  if (c.spectrum) {
    const auto& s = *c.spectrum;
    root["spectrum"] = {{"omega_min_hz", s.omega_min_hz}, {"omega_max_hz", s.omega_max_hz},
                        {"points", s.points},             {"slabs", s.slabs},
                        {"time_s", s.time_s}};
  }
  if (c.grid)
    root["grid"] = {{"z_min_m", c.grid->z_min_m},
                    {"z_max_m", c.grid->z_max_m},
                    {"points", c.grid->points}};
  if (c.evolve) {
    const auto& e = *c.evolve;
    root["evolve"] = {{"t0_s", e.t0_s},
                      {"t1_s", e.t1_s},
                      {"dt_s", e.dt_s},
                      {"snapshot_stride", e.snapshot_stride},
                      {"pulse", write_pulse(e.pulse)}};
  }
  if (c.scenario) {
    const auto& s = *c.scenario;
    json j = {{"pulse", write_pulse(s.pulse)},
              {"t_store_s", s.t_store_s},
              {"t_hold_s", s.t_hold_s},
              {"t_release_s", s.t_release_s},
              {"t_trap_end_s", s.t_trap_end_s},
              {"t_final_s", s.t_final_s},
              {"ramp_time_s", s.ramp_time_s},
              {"dt_s", s.dt_s},
              {"snapshot_stride", s.snapshot_stride}};
    if (s.omega_c_in_hz) j["omega_c_in_hz"] = *s.omega_c_in_hz;
    if (s.omega_c_0_hz) j["omega_c_0_hz"] = *s.omega_c_0_hz;
    if (s.omega_s_hz) j["omega_s_hz"] = *s.omega_s_hz;
    root["scenario"] = j;
  }
  root["checks"] = {{"much_greater", c.checks.much_greater},
                    {"much_less", c.checks.much_less},
                    {"at_most_slack", c.checks.at_most_slack}};
  root["output"] = {{"directory", c.output.directory},
                    {"prefix", c.output.prefix},
                    {"svg", c.output.svg},
                    {"binary", c.output.binary}};
  return root.dump(2) + "\n";
}

StaticDrive static_drive(const Config& config) {
  const DriveSchedule schedule = config.require_drive().schedule();
  const double t = config.spectrum ? config.spectrum->time_s : 0.0;
  return schedule.at(t);
}

Scenario build_scenario(const Config& config) {
  const auto& sc = config.require_scenario();
  const auto& drive = config.require_drive();
  Scenario s;
  s.medium = config.require_medium().params();
  s.grid = config.require_grid().spec();
  s.pulse = {sc.pulse.center_m, sc.pulse.rms_width_m, sc.pulse.duration_s.value_or(0.0)};
  if (sc.pulse.direction != Direction::forward)
    throw ConfigError("scenario.pulse.direction", "the stored pulse must travel forward");
  s.stages = {sc.t_store_s, sc.t_hold_s, sc.t_release_s, sc.t_trap_end_s, sc.t_final_s};
  s.ramp_time = sc.ramp_time_s;
  s.dt = sc.dt_s;
  s.snapshot_stride = sc.snapshot_stride;
  s.margins = {config.checks.much_greater, config.checks.much_less, config.checks.at_most_slack};

  const double delta = hz_to_angular(drive.detuning_hz);
  if (drive.has_segments()) {
    for (const auto& [value, key] : {std::pair{sc.omega_c_in_hz, "scenario.omega_c_in_hz"},
                                     std::pair{sc.omega_c_0_hz, "scenario.omega_c_0_hz"},
                                     std::pair{sc.omega_s_hz, "scenario.omega_s_hz"}})
      if (value)
        throw ConfigError(key, "amplitudes come from the drive segment lists when those are given");
    s.schedule = drive.schedule();
    s.omega_c_in = s.schedule.omega_c(0.0);
    s.omega_c_0 = s.schedule.omega_c(s.stages.t_final);
    s.omega_s = s.schedule.omega_s(0.5 * (s.stages.t_release + s.stages.t_trap_end));
  } else {
    if (drive.control_hz || drive.standing_wave_hz)
      throw ConfigError(drive.control_hz ? "drive.control_hz" : "drive.standing_wave_hz",
                        "protocol runs take segment lists here, or nothing");
    const auto need = [](const std::optional<double>& v, const char* key) {
      if (!v) throw ConfigError(key, "required key is missing");
      return hz_to_angular(*v);
    };
    s.omega_c_in = need(sc.omega_c_in_hz, "scenario.omega_c_in_hz");
    s.omega_c_0 = need(sc.omega_c_0_hz, "scenario.omega_c_0_hz");
    s.omega_s = need(sc.omega_s_hz, "scenario.omega_s_hz");
    try {
      s.schedule = staged_schedule(s.stages, s.omega_c_in, s.omega_c_0, s.omega_s, s.ramp_time,
                                   delta, drive.delta_k_per_m);
    } catch (const DomainError& e) {
      throw ConfigError("scenario", e.what());
    }
  }
  s.schedule.delta = delta;
  s.schedule.delta_k = drive.delta_k_per_m;
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError("scenario", e.what());
  }
  return s;
}

}  // namespace eitgap
