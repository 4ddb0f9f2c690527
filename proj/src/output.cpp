#include "eitgap/output.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "eitgap/errors.hpp"
#include "eitgap/version.hpp"

namespace eitgap {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void CsvTable::add_meta(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
}

void CsvTable::add_meta(std::string key, double value) {
  metadata.emplace_back(std::move(key), format_number(value));
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("csv: row width mismatch");
  rows.push_back(std::move(row));
}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::string CsvTable::render() const {
  std::string out;
  const auto join = [](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    return line;
  };
  out += "# tool: eitgap " + std::string(version) + "\n";
  for (const auto& [k, v] : metadata) out += "# " + k + ": " + v + "\n";
  out += "# columns: " + join(columns) + "\n";
  out += join(columns) + "\n";
  for (const auto& row : rows) out += join(row) + "\n";
  return out;
}

CsvTable CsvTable::parse(std::string_view text) {
  CsvTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      key.erase(0, key.find_first_not_of(' '));
      value.erase(0, value.find_first_not_of(' '));
      if (key != "columns") t.metadata.emplace_back(std::move(key), std::move(value));
      continue;
    }
    if (!have_header) {
      t.columns = split(line);
      have_header = true;
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

CsvTable CsvTable::read(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("csv: no column " + std::string(name));
}

std::string_view CsvTable::meta(std::string_view key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  throw std::out_of_range("csv: no metadata " + std::string(key));
}

// ---------------------------------------------------------------- svg

namespace {

constexpr double width = 800.0;
constexpr double height = 500.0;
constexpr double left = 90.0;
constexpr double right = 30.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(4);
  o << v;
  return o.str();
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
  double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : 0.5 * std::abs(lo);
    lo -= pad;
    hi += pad;
  }
}

void axes(std::ostringstream& o, const Frame& f, std::string_view title, std::string_view xl,
          std::string_view yl) {
  o << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='16'>"
    << escape(title) << "</text>\n";
  o << "<rect x='" << left << "' y='" << top << "' width='" << width - left - right
    << "' height='" << height - top - bottom << "' fill='none' stroke='black'/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
    const double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
    o << "<text x='" << f.px(x) << "' y='" << height - bottom + 18
      << "' text-anchor='middle' font-size='11'>" << fmt(x) << "</text>\n";
    o << "<text x='" << left - 6 << "' y='" << f.py(y) + 4
      << "' text-anchor='end' font-size='11'>" << fmt(y) << "</text>\n";
  }
  o << "<text x='" << width / 2 << "' y='" << height - 16
    << "' text-anchor='middle' font-size='13'>" << escape(xl) << "</text>\n";
  o << "<text x='18' y='" << height / 2 << "' text-anchor='middle' font-size='13' "
    << "transform='rotate(-90 18 " << height / 2 << ")'>" << escape(yl) << "</text>\n";
}

std::string open_svg() {
  std::ostringstream o;
  o << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
    << "' viewBox='0 0 " << width << ' ' << height << "'>\n"
    << "<rect width='100%' height='100%' fill='white'/>\n";
  return o.str();
}

std::array<int, 3> palette(double s) {
  static constexpr std::array<std::array<int, 3>, 5> stops{
      {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
  s = std::clamp(s, 0.0, 1.0) * (stops.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), stops.size() - 2);
  const double w = s - static_cast<double>(i);
  std::array<int, 3> c{};
  for (int k = 0; k < 3; ++k)
    c[k] = static_cast<int>(std::lround(stops[i][k] * (1 - w) + stops[i + 1][k] * w));
  return c;
}

}  // namespace

std::string svg_line_chart(std::string_view title, std::string_view x_label,
                           std::string_view y_label, const std::vector<Series>& series) {
  static constexpr std::array<const char*, 6> colors{"#1f77b4", "#d62728", "#2ca02c",
                                                     "#9467bd", "#ff7f0e", "#17becf"};
  Frame f{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      f.x0 = std::min(f.x0, s.x[i]);
      f.x1 = std::max(f.x1, s.x[i]);
      f.y0 = std::min(f.y0, s.y[i]);
      f.y1 = std::max(f.y1, s.y[i]);
    }
  if (!std::isfinite(f.x0)) f = {0.0, 1.0, 0.0, 1.0};
  widen(f.x0, f.x1);
  widen(f.y0, f.y1);

  std::ostringstream o;
  o << open_svg();
  axes(o, f, title, x_label, y_label);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % colors.size()];
    o << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
        o << fmt(f.px(s.x[i])) << ',' << fmt(f.py(s.y[i])) << ' ';
    o << "'/>\n";
    o << "<text x='" << width - right - 8 << "' y='" << top + 16 + 16 * k
      << "' text-anchor='end' font-size='12' fill='" << color << "'>" << escape(s.name)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_heatmap(std::string_view title, std::string_view x_label,
                        std::string_view y_label, double x_min, double x_max, double y_min,
                        double y_max, const std::vector<std::vector<double>>& values) {
  Frame f{x_min, x_max, y_min, y_max};
  widen(f.x0, f.x1);
  widen(f.y0, f.y1);
  std::ostringstream o;
  o << open_svg();
  const std::size_t rows = values.size();
  const std::size_t cols = rows ? values.front().size() : 0;
  if (rows && cols) {
    constexpr std::size_t cap = 200;
    const std::size_t nr = std::min(rows, cap);
    const std::size_t nc = std::min(cols, cap);
    double vmax = 0.0;
    for (const auto& r : values)
      for (double v : r)
        if (std::isfinite(v)) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    const double cw = (width - left - right) / nc;
    const double ch = (height - top - bottom) / nr;
    for (std::size_t i = 0; i < nr; ++i) {
      const auto& r = values[i * rows / nr];
      for (std::size_t j = 0; j < nc; ++j) {
        // Peak over the cell keeps narrow features visible.
        double v = 0.0;
        for (std::size_t jj = j * cols / nc; jj < (j + 1) * cols / nc; ++jj) v = std::max(v, r[jj]);
        const auto c = palette(v / vmax);
        o << "<rect x='" << fmt(left + j * cw) << "' y='" << fmt(height - bottom - (i + 1) * ch)
          << "' width='" << fmt(cw + 0.5) << "' height='" << fmt(ch + 0.5) << "' fill='rgb("
          << c[0] << ',' << c[1] << ',' << c[2] << ")'/>\n";
      }
    }
  }
  axes(o, f, title, x_label, y_label);
  o << "</svg>\n";
  return o.str();
}

// ---------------------------------------------------------------- binary

namespace {

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::uint64_t u64() { return take(8); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view raw(std::size_t n) {
    need(n);
    const auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw std::runtime_error("trajectory file is truncated");
  }
  std::uint64_t take(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_trajectory(const GridSpec& grid, const std::vector<Snapshot>& snapshots) {
  std::string out(trajectory_magic);
  put_u32(out, trajectory_format_version);
  put_u32(out, 0);
  put_u64(out, grid.n_points);
  put_f64(out, grid.z_min);
  put_f64(out, grid.z_max);
  put_u64(out, snapshots.size());
  out.reserve(out.size() + snapshots.size() * (24 + 32 * grid.n_points));
  for (const auto& snap : snapshots) {
    if (snap.state.psi_plus.size() != grid.n_points)
      throw std::logic_error("trajectory: snapshot does not match grid");
    put_f64(out, snap.state.time);
    put_f64(out, snap.omega_c);
    put_f64(out, snap.omega_s);
    for (const auto* field : {&snap.state.psi_plus, &snap.state.psi_minus})
      for (const auto& v : *field) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
      }
  }
  return out;
}

TrajectoryFile decode_trajectory(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.raw(trajectory_magic.size()) != trajectory_magic)
    throw std::runtime_error("not a trajectory file (bad magic)");
  if (r.u32() != trajectory_format_version)
    throw std::runtime_error("unsupported trajectory format version");
  (void)r.u32();
  TrajectoryFile file;
  file.grid.n_points = r.u64();
  file.grid.z_min = r.f64();
  file.grid.z_max = r.f64();
  const std::uint64_t count = r.u64();
  for (std::uint64_t s = 0; s < count; ++s) {
    TrajectoryRecord rec;
    rec.time = r.f64();
    rec.omega_c = r.f64();
    rec.omega_s = r.f64();
    for (auto* field : {&rec.psi_plus, &rec.psi_minus}) {
      field->resize(file.grid.n_points);
      for (auto& v : *field) {
        const double re = r.f64();
        v = {re, r.f64()};
      }
    }
    file.records.push_back(std::move(rec));
  }
  if (!r.done()) throw std::runtime_error("trajectory file has trailing bytes");
  return file;
}

TrajectoryFile read_trajectory(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_trajectory(buf.str());
}

}  // namespace eitgap
