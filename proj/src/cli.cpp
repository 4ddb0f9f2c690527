#include "eitgap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "eitgap/bandstructure.hpp"
#include "eitgap/config.hpp"
#include "eitgap/dynamics.hpp"
#include "eitgap/errors.hpp"
#include "eitgap/output.hpp"
#include "eitgap/protocol.hpp"
#include "eitgap/reflection.hpp"
#include "eitgap/units.hpp"
#include "eitgap/version.hpp"

namespace eitgap {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config_path;
  std::string output_dir;
  std::string prefix;
  bool svg = false;
  bool binary = false;
};

struct Outputs {
  fs::path directory;
  std::string prefix;
  bool svg = false;
  bool binary = false;

  fs::path file(const std::string& suffix) const { return directory / (prefix + suffix); }
};

Outputs resolve_outputs(const Config& config, const Common& common) {
  Outputs o;
  o.directory = common.output_dir.empty() ? fs::path(config.output.directory) : fs::path(common.output_dir);
  o.prefix = common.prefix.empty() ? config.output.prefix : common.prefix;
  o.svg = config.output.svg || common.svg;
  o.binary = config.output.binary || common.binary;
  return o;
}

std::string compact_config(const Config& config) {
  return nlohmann::json::parse(serialize_config(config)).dump();
}

void add_medium_meta(CsvTable& t, const MediumParams& m) {
  t.add_meta("coupling_rad_per_s", m.coupling);
  t.add_meta("gamma_ab_rad_per_s", m.gamma_ab);
  t.add_meta("gamma_bc_rad_per_s", m.gamma_bc);
  t.add_meta("length_m", m.length);
  t.add_meta("carrier_wavenumber_rad_per_m", m.carrier_wavenumber);
}

void add_drive_meta(CsvTable& t, const StaticDrive& d) {
  t.add_meta("omega_c_rad_per_s", d.omega_c);
  t.add_meta("omega_s_rad_per_s", d.omega_s);
  t.add_meta("delta_rad_per_s", d.delta);
  t.add_meta("delta_k_rad_per_m", d.delta_k);
  t.add_meta("light_shift_rad_per_s", d.light_shift());
}

void write_text(const fs::path& path, const std::string& text, std::ostream& out) {
  write_atomic(path, text);
  out << "wrote " << path.string() << '\n';
}

void write_table(const fs::path& path, const CsvTable& table, std::ostream& out) {
  table.write(path);
  out << "wrote " << path.string() << '\n';
}

std::string on_off(bool b) { return b ? "1" : "0"; }

// ---------------------------------------------------------------- band

int run_band(const Common& common, std::ostream& out) {
  const Config config = load_config(common.config_path);
  const MediumParams medium = config.require_medium().params();
  medium.validate();
  const SpectrumConfig& spectrum = config.require_spectrum();
  const StaticDrive drive = static_drive(config);
  if (!(drive.omega_c > 0.0))
    throw ConfigError("drive.control_hz", "must be > 0 for a band structure");
  const PeriodCell cell = PeriodCell::make(drive, medium, spectrum.slabs);
  const double slowdown = std::pow(medium.coupling / drive.omega_c, 2);
  const double delta_s = drive.light_shift();
  const Outputs outputs = resolve_outputs(config, common);

  CsvTable table;
  table.columns = {"omega",          "k_real_offset",          "k_imag",
                   "in_gap",         "analytic_k_real_offset", "analytic_k_imag",
                   "analytic_in_gap"};
  table.add_meta("command", "band");
  table.add_meta("config", compact_config(config));
  add_medium_meta(table, medium);
  add_drive_meta(table, drive);
  table.add_meta("period_m", cell.period);
  table.add_meta("slabs", std::to_string(cell.slab_count()));
  table.add_meta("slowdown", slowdown);
  table.add_meta("units", "omega rad/s detuning from the averaged two-photon resonance; k rad/m, K - k_s");

  std::optional<BandEdges> edges;
  if (delta_s != 0.0) {
    edges = band_edges(cell, drive, medium);
    table.add_meta("analytic_gap_rad_per_s",
                   format_number(edges->analytic_lower) + " " + format_number(edges->analytic_upper));
    table.add_meta("numeric_gap_rad_per_s",
                   edges->numeric ? format_number(edges->numeric->first) + " " +
                                        format_number(edges->numeric->second)
                                  : std::string("none"));
  }

  Series re{"Re(K - k_s)", {}, {}}, im{"Im K", {}, {}}, re_a{"Re analytic", {}, {}},
      im_a{"Im analytic", {}, {}};
  std::size_t gap_points = 0;
  for (double w : spectrum.omega_grid()) {
    const BandPoint n = bloch_k_numeric(w, cell, drive, medium);
    const BandPoint a = bloch_k_analytic(w, delta_s, slowdown, cell.period);
    gap_points += n.in_gap;
    table.add_row({format_number(w), format_number(n.k_real), format_number(n.k_imag),
                   on_off(n.in_gap), format_number(a.k_real), format_number(a.k_imag),
                   on_off(a.in_gap)});
    for (auto* s : {&re, &im, &re_a, &im_a}) s->x.push_back(w);
    re.y.push_back(n.k_real);
    im.y.push_back(n.k_imag);
    re_a.y.push_back(a.k_real);
    im_a.y.push_back(a.k_imag);
  }
  write_table(outputs.file("_band.csv"), table, out);
  if (outputs.svg)
    write_text(outputs.file("_band.svg"),
               svg_line_chart("Bloch wavevector", "omega (rad/s)", "rad/m", {re, im, re_a, im_a}),
               out);

  out << "light_shift_rad_per_s = " << format_number(delta_s) << '\n';
  out << "in_gap_points = " << gap_points << '\n';
  if (edges) {
    out << "analytic_edges_rad_per_s = " << format_number(edges->analytic_lower) << ' '
        << format_number(edges->analytic_upper) << '\n';
    if (edges->numeric)
      out << "numeric_edges_rad_per_s = " << format_number(edges->numeric->first) << ' '
          << format_number(edges->numeric->second) << '\n';
    else
      out << "numeric_edges_rad_per_s = none\n";
  }
  return exit_success;
}

// ---------------------------------------------------------------- reflect

int run_reflect(const Common& common, std::ostream& out) {
  const Config config = load_config(common.config_path);
  const MediumParams medium = config.require_medium().params();
  medium.validate();
  const SpectrumConfig& spectrum = config.require_spectrum();
  const StaticDrive drive = static_drive(config);
  const PeriodCell cell = PeriodCell::make(drive, medium, spectrum.slabs);
  const SampleGeometry geometry = SampleGeometry::for_cell(cell, medium);
  if (geometry.periods < 1) throw ConfigError("medium.length_m", "shorter than one period");
  const Outputs outputs = resolve_outputs(config, common);

  const std::vector<double> grid = spectrum.omega_grid();
  const std::vector<SpectrumPoint> points = reflection_spectrum(grid, cell, drive, medium);

  CsvTable table;
  table.columns = {"omega", "re_r", "im_r", "re_t", "im_t", "reflectivity", "transmissivity",
                   "absorption"};
  table.add_meta("command", "reflect");
  table.add_meta("config", compact_config(config));
  add_medium_meta(table, medium);
  add_drive_meta(table, drive);
  table.add_meta("period_m", geometry.period);
  table.add_meta("periods", std::to_string(geometry.periods));
  table.add_meta("dropped_length_m", geometry.dropped_length);
  table.add_meta("slabs", std::to_string(cell.slab_count()));
  table.add_meta("units", "omega rad/s detuning from the averaged two-photon resonance");
  Series r{"|r|^2", {}, {}}, t{"|t|^2", {}, {}};
  for (const auto& p : points) {
    table.add_row(std::vector<double>{p.omega, p.r.real(), p.r.imag(), p.t.real(), p.t.imag(),
                                      p.reflectivity, p.transmissivity, p.absorption});
    r.x.push_back(p.omega);
    r.y.push_back(p.reflectivity);
    t.x.push_back(p.omega);
    t.y.push_back(p.transmissivity);
  }
  const ReflectionPeak peak = find_peak(points);
  table.add_meta("peak_reflectivity", peak.reflectivity);
  table.add_meta("peak_omega_rad_per_s", peak.omega);
  write_table(outputs.file("_reflect.csv"), table, out);
  if (outputs.svg)
    write_text(outputs.file("_reflect.svg"),
               svg_line_chart("Reflection spectrum", "omega (rad/s)", "power fraction", {r, t}),
               out);

  out << "periods = " << geometry.periods << '\n'
      << "peak_reflectivity = " << format_number(peak.reflectivity) << '\n'
      << "peak_omega_rad_per_s = " << format_number(peak.omega) << '\n'
      << "half_max_width_rad_per_s = " << (peak.width ? format_number(*peak.width) : "unresolved")
      << '\n';
  return exit_success;
}

// ---------------------------------------------------------------- trajectories

CsvTable trajectory_table(const std::vector<Snapshot>& snapshots) {
  CsvTable t;
  t.columns = {"t",           "z",           "re_psi_plus", "im_psi_plus",
               "re_psi_minus", "im_psi_minus", "e_plus_sq",   "e_minus_sq"};
  for (const auto& s : snapshots) {
    const double c2 = std::pow(std::cos(s.theta), 2);
    for (std::size_t i = 0; i < s.state.grid.n_points; ++i) {
      const auto p = s.state.psi_plus[i];
      const auto m = s.state.psi_minus[i];
      t.rows.push_back({format_number(s.state.time), format_number(s.state.grid.z(i)),
                        format_number(p.real()), format_number(p.imag()),
                        format_number(m.real()), format_number(m.imag()),
                        format_number(c2 * std::norm(p)), format_number(c2 * std::norm(m))});
    }
  }
  return t;
}

CsvTable diagnostics_table(const std::vector<Snapshot>& snapshots) {
  CsvTable t;
  t.columns = {"t",    "tau",          "omega_c",       "omega_s",  "theta",
               "norm", "forward_norm", "backward_norm", "centroid", "rms_width"};
  for (const auto& s : snapshots) {
    const Diagnostics d = measure(s.state, s.theta);
    t.add_row(std::vector<double>{s.state.time, s.tau, s.omega_c, s.omega_s, s.theta, d.norm,
                                  d.forward_norm, d.backward_norm, d.centroid, d.rms_width});
  }
  return t;
}

void write_trajectory_outputs(const Outputs& outputs, const std::vector<Snapshot>& snapshots,
                              const GridSpec& grid,
                              const std::vector<std::pair<std::string, std::string>>& meta,
                              std::ostream& out) {
  CsvTable traj = trajectory_table(snapshots);
  CsvTable diag = diagnostics_table(snapshots);
  for (auto* t : {&traj, &diag}) {
    t->metadata = meta;
    t->add_meta("grid", format_number(grid.z_min) + " " + format_number(grid.z_max) + " " +
                            std::to_string(grid.n_points));
    t->add_meta("units", "t s; z m; omega rad/s; psi in 1/sqrt(m)");
  }
  write_table(outputs.file("_trajectory.csv"), traj, out);
  write_table(outputs.file("_diagnostics.csv"), diag, out);
  if (outputs.binary) write_text(outputs.file("_trajectory.bin"), encode_trajectory(grid, snapshots), out);
  if (outputs.svg && !snapshots.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& s : snapshots) rows.push_back(measure(s.state, s.theta).intensity);
    write_text(outputs.file("_intensity.svg"),
               svg_heatmap("|E+|^2 + |E-|^2", "z (m)", "t (s)", grid.z_min, grid.z_max,
                           snapshots.front().state.time, snapshots.back().state.time, rows),
               out);
  }
}

// ---------------------------------------------------------------- evolve

int run_evolve(const Common& common, std::ostream& out, std::ostream& err) {
  const Config config = load_config(common.config_path);
  const MediumParams medium = config.require_medium().params();
  medium.validate();
  const DriveSchedule schedule = config.require_drive().schedule();
  schedule.validate();
  const GridSpec grid = config.require_grid().spec();
  const EvolveConfig& ev = config.require_evolve();
  const Outputs outputs = resolve_outputs(config, common);

  const PolaritonState initial = PolaritonState::gaussian(
      grid, ev.pulse.center_m, ev.pulse.rms_width_m, ev.pulse.direction, ev.t0_s);
  EvolveSettings settings;
  settings.t0 = ev.t0_s;
  settings.t1 = ev.t1_s;
  settings.dt = ev.dt_s;
  settings.snapshot_stride = ev.snapshot_stride;
  Trajectory traj;
  try {
    traj = evolve(initial, schedule, medium, settings);
  } catch (const DomainError& e) {
    throw ConfigError("evolve", e.what());
  }
  for (const auto& w : traj.warnings) err << "warning: " << w << '\n';

  std::vector<std::pair<std::string, std::string>> meta{
      {"command", "evolve"}, {"config", compact_config(config)}};
  write_trajectory_outputs(outputs, traj.snapshots, grid, meta, out);

  const Diagnostics d = measure(traj.final_state, traj.snapshots.back().theta);
  out << "steps = " << traj.step_count << '\n'
      << "final_norm = " << format_number(d.norm) << '\n'
      << "final_forward_norm = " << format_number(d.forward_norm) << '\n'
      << "final_backward_norm = " << format_number(d.backward_norm) << '\n'
      << "final_centroid_m = " << format_number(d.centroid) << '\n'
      << "stretched_time_s = " << format_number(traj.final_tau) << '\n';
  return exit_success;
}

// ---------------------------------------------------------------- protocol / check

CsvTable validity_table(const ValidityReport& report, const Config& config) {
  CsvTable t;
  t.columns = {"check", "value", "bound", "ratio", "status"};
  t.add_meta("config", compact_config(config));
  for (const auto& c : report.checks) {
    t.add_meta(c.name, c.expression);
    t.add_row({c.name, format_number(c.value), format_number(c.bound), format_number(c.ratio),
               std::string(to_string(c.status))});
  }
  return t;
}

void print_report(const ValidityReport& report, std::ostream& out) {
  for (const auto& c : report.checks)
    out << c.name << ": " << c.expression << "  ratio = " << format_number(c.ratio) << "  "
        << to_string(c.status) << '\n';
}

int run_protocol_command(const Common& common, std::ostream& out, std::ostream& err) {
  const Config config = load_config(common.config_path);
  const Scenario scenario = build_scenario(config);
  const Outputs outputs = resolve_outputs(config, common);

  const ProtocolResult result = run_protocol(scenario);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';

  std::vector<std::pair<std::string, std::string>> meta{
      {"command", "protocol"}, {"config", compact_config(config)}};
  write_trajectory_outputs(outputs, result.snapshots, scenario.grid, meta, out);

  CsvTable trace;
  trace.columns = {"t", "omega_c", "omega_s"};
  trace.metadata = meta;
  trace.add_meta("units", "t s; omega rad/s");
  Series oc{"Omega_c", {}, {}}, os{"Omega_s", {}, {}};
  for (const auto& s : result.trace) {
    trace.add_row(std::vector<double>{s.time, s.omega_c, s.omega_s});
    oc.x.push_back(s.time);
    oc.y.push_back(s.omega_c);
    os.x.push_back(s.time);
    os.y.push_back(s.omega_s);
  }
  write_table(outputs.file("_schedule.csv"), trace, out);
  if (outputs.svg)
    write_text(outputs.file("_schedule.svg"),
               svg_line_chart("Drive schedule", "t (s)", "rad/s", {oc, os}), out);

  const std::string summary_text = format_summary(result.summary);
  write_text(outputs.file("_summary.txt"), summary_text, out);
  CsvTable summary;
  summary.columns = {"key", "value"};
  summary.metadata = meta;
  std::istringstream lines(summary_text);
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) summary.add_row({line.substr(0, eq), line.substr(eq + 3)});
  }
  write_table(outputs.file("_summary.csv"), summary, out);
  write_table(outputs.file("_validity.csv"), validity_table(result.report, config), out);

  out << summary_text;
  print_report(result.report, out);
  return exit_success;
}

int run_check(const Common& common, bool strict, std::ostream& out) {
  const Config config = load_config(common.config_path);
  const Scenario scenario = build_scenario(config);
  const Outputs outputs = resolve_outputs(config, common);
  const ValidityReport report = validity_report(scenario);
  write_table(outputs.file("_validity.csv"), validity_table(report, config), out);
  print_report(report, out);
  if (strict && report.any_fail()) {
    out << "validity: FAIL\n";
    return exit_validity_failure;
  }
  out << "validity: " << (report.any_fail() ? "FAIL" : report.all_pass() ? "PASS" : "WARN") << '\n';
  return exit_success;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photonic bandgap and polariton trapping simulator for modulated EIT media",
               "eitgap"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);

  Common common;
  const auto add_common = [&common](CLI::App* sub) {
    sub->add_option("config", common.config_path, "JSON configuration file")->required();
    sub->add_option("-o,--output-dir", common.output_dir, "Override output.directory");
    sub->add_option("-p,--prefix", common.prefix, "Override output.prefix");
    sub->add_flag("--svg", common.svg, "Also write SVG quick-look plots");
  };
  CLI::App* band = app.add_subcommand("band", "Bloch wavevector over a frequency grid");
  CLI::App* reflect = app.add_subcommand("reflect", "Reflection and transmission spectrum");
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "Raw polariton dynamics run");
  CLI::App* protocol = app.add_subcommand("protocol", "Storage, trapping and release scenario");
  CLI::App* check = app.add_subcommand("check", "Validity report for a scenario");
  bool strict = false;
  for (auto* sub : {band, reflect, evolve_cmd, protocol, check}) add_common(sub);
  for (auto* sub : {evolve_cmd, protocol})
    sub->add_flag("--binary", common.binary, "Also write the binary trajectory dump");
  check->add_flag("--strict", strict, "Exit with status 3 if any check fails");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_success;
  } catch (const CLI::CallForVersion&) {
    out << version << '\n';
    return exit_success;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_success;
    }
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }

  try {
    if (*band) return run_band(common, out);
    if (*reflect) return run_reflect(common, out);
    if (*evolve_cmd) return run_evolve(common, out, err);
    if (*protocol) return run_protocol_command(common, out, err);
    if (*check) return run_check(common, strict, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical_failure;
  } catch (const fs::filesystem_error& e) {
    err << "output error: " << e.what() << '\n';
    return exit_config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numerical_failure;
  }
  return exit_config_error;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace eitgap
