#include "iontomo/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "iontomo/error.hpp"

namespace iontomo::io {

namespace {

constexpr const char* kFormatName = "iontomo-container";

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void append_le(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  char raw[8];
  std::memcpy(raw, &bits, 8);
  out.append(raw, 8);
}

double read_le(const char* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, 8);
  if constexpr (std::endian::native == std::endian::big) {
    bits = __builtin_bswap64(bits);
  }
  return std::bit_cast<double>(bits);
}

nlohmann::json axis_json(const char* name, const Axis& a) {
  return {{"name", name}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

Axis axis_from_json(const nlohmann::json& j, const char* name) {
  if (j.at("name").get<std::string>() != name) {
    throw FormatError(std::string("container: expected axis '") + name + "'");
  }
  Axis a{j.at("min").get<double>(), j.at("max").get<double>(),
         j.at("count").get<std::size_t>()};
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return a;
}

std::string container(const nlohmann::json& axes, const char* kind,
                      const std::vector<double>& values) {
  nlohmann::json h;
  h["format"] = kFormatName;
  h["version"] = 1;
  h["kind"] = kind;
  h["dtype"] = "float64";
  h["byte_order"] = "little";
  h["layout"] = "row-major";
  h["axes"] = axes;
  h["payload_bytes"] = values.size() * 8;
  std::string out = h.dump();
  out.push_back('\n');
  out.reserve(out.size() + values.size() * 8);
  for (double v : values) append_le(out, v);
  return out;
}

struct Parsed {
  nlohmann::json header;
  std::vector<double> values;
};

Parsed parse_container(std::string_view bytes, const char* kind) {
  const auto nl = bytes.find('\n');
  if (nl == std::string_view::npos) throw FormatError("container: no header");
  Parsed p;
  try {
    p.header = nlohmann::json::parse(bytes.substr(0, nl));
    if (p.header.at("format").get<std::string>() != kFormatName ||
        p.header.at("version").get<int>() != 1) {
      throw FormatError("container: unknown format or version");
    }
    if (p.header.at("kind").get<std::string>() != kind) {
      throw FormatError(std::string("container: expected kind ") + kind);
    }
    if (p.header.at("dtype") != "float64" ||
        p.header.at("byte_order") != "little" ||
        p.header.at("layout") != "row-major") {
      throw FormatError("container: unsupported dtype/byte order/layout");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("container header: ") + e.what());
  }
  const std::string_view payload = bytes.substr(nl + 1);
  const auto expected = p.header.at("payload_bytes").get<std::size_t>();
  if (payload.size() != expected || expected % 8 != 0) {
    throw FormatError("container: payload size mismatch");
  }
  p.values.resize(expected / 8);
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    p.values[i] = read_le(payload.data() + 8 * i);
  }
  return p;
}

std::vector<std::vector<double>> parse_csv(std::string_view text,
                                           std::string_view header) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw FormatError("csv: expected header '" + std::string(header) + "'");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw FormatError("csv: bad number '" + cell + "'");
      }
      row.push_back(v);
    }
    if (row.size() != 3) throw FormatError("csv: expected 3 columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

// Splits rows (slow, fast, value) into the distinct slow/fast coordinates.
void split_axes(const std::vector<std::vector<double>>& rows,
                std::vector<double>& slow, std::vector<double>& fast) {
  if (rows.empty()) throw FormatError("csv: no data rows");
  for (const auto& r : rows) {
    if (r[0] != rows.front()[0]) break;
    fast.push_back(r[1]);
  }
  if (rows.size() % fast.size() != 0) {
    throw FormatError("csv: rows do not form a complete grid");
  }
  for (std::size_t i = 0; i < rows.size(); i += fast.size()) {
    slow.push_back(rows[i][0]);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i][0] != slow[i / fast.size()] ||
        rows[i][1] != fast[i % fast.size()]) {
      throw FormatError("csv: rows are not in grid order");
    }
  }
}

Axis uniform_axis(const std::vector<double>& v, const char* name) {
  if (v.size() < 2) {
    throw FormatError(std::string("csv: axis ") + name + " needs >= 2 points");
  }
  Axis a{v.front(), v.back(), v.size()};
  const double tol = 1e-9 * std::max(1.0, std::abs(a.max - a.min));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i] - a.at(i)) > tol) {
      throw FormatError(std::string("csv: axis ") + name + " is not uniform");
    }
  }
  return a;
}

bool looks_binary(std::string_view bytes) {
  return !bytes.empty() && bytes.front() == '{';
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::kCsv;
  if (name == "bin") return Format::kBin;
  throw std::invalid_argument("unknown format '" + std::string(name) +
                              "' (expected csv or bin)");
}

std::string grid_to_csv(const WignerGrid& grid) {
  std::string out = "q,p,W\n";
  for (std::size_t i = 0; i < grid.q_axis.count; ++i) {
    const std::string q = fmt17(grid.q_axis.at(i));
    for (std::size_t j = 0; j < grid.p_axis.count; ++j) {
      out += q;
      out += ',';
      out += fmt17(grid.p_axis.at(j));
      out += ',';
      out += fmt17(grid(i, j));
      out += '\n';
    }
  }
  return out;
}

WignerGrid grid_from_csv(std::string_view text) {
  const auto rows = parse_csv(text, "q,p,W");
  std::vector<double> qs, ps;
  split_axes(rows, qs, ps);
  WignerGrid g;
  g.q_axis = uniform_axis(qs, "q");
  g.p_axis = uniform_axis(ps, "p");
  g.values.reserve(rows.size());
  for (const auto& r : rows) g.values.push_back(r[2]);
  g.validate();
  return g;
}

std::string grid_to_bin(const WignerGrid& grid) {
  grid.validate();
  return container({axis_json("q", grid.q_axis), axis_json("p", grid.p_axis)},
                   "wigner_grid", grid.values);
}

WignerGrid grid_from_bin(std::string_view bytes) {
  Parsed p = parse_container(bytes, "wigner_grid");
  WignerGrid g;
  try {
    const auto& axes = p.header.at("axes");
    if (axes.size() != 2) throw FormatError("container: expected 2 axes");
    g.q_axis = axis_from_json(axes[0], "q");
    g.p_axis = axis_from_json(axes[1], "p");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("container header: ") + e.what());
  }
  g.values = std::move(p.values);
  g.validate();
  return g;
}

std::string sinogram_to_csv(const OpticalSinogram& s) {
  std::string out = "phi,x,w\n";
  for (std::size_t i = 0; i < s.phi_axis.count; ++i) {
    const std::string phi = fmt17(s.phi_axis.at(i));
    for (std::size_t j = 0; j < s.x_axis.count; ++j) {
      out += phi;
      out += ',';
      out += fmt17(s.x_axis.at(j));
      out += ',';
      out += fmt17(s(i, j));
      out += '\n';
    }
  }
  return out;
}

OpticalSinogram sinogram_from_csv(std::string_view text) {
  const auto rows = parse_csv(text, "phi,x,w");
  std::vector<double> phis, xs;
  split_axes(rows, phis, xs);
  OpticalSinogram s;
  s.phi_axis = AngleAxis{phis.size()};
  for (std::size_t i = 0; i < phis.size(); ++i) {
    if (std::abs(phis[i] - s.phi_axis.at(i)) > 1e-9) {
      throw FormatError("csv: phi values must be i*pi/N on [0, pi)");
    }
  }
  s.x_axis = uniform_axis(xs, "x");
  s.values.reserve(rows.size());
  for (const auto& r : rows) s.values.push_back(r[2]);
  s.validate();
  return s;
}

std::string sinogram_to_bin(const OpticalSinogram& s) {
  s.validate();
  return container({{{"name", "phi"}, {"count", s.phi_axis.count}},
                    axis_json("x", s.x_axis)},
                   "sinogram", s.values);
}

OpticalSinogram sinogram_from_bin(std::string_view bytes) {
  Parsed p = parse_container(bytes, "sinogram");
  OpticalSinogram s;
  try {
    const auto& axes = p.header.at("axes");
    if (axes.size() != 2 || axes[0].at("name") != "phi") {
      throw FormatError("container: expected axes phi, x");
    }
    s.phi_axis = AngleAxis{axes[0].at("count").get<std::size_t>()};
    s.x_axis = axis_from_json(axes[1], "x");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("container header: ") + e.what());
  }
  s.values = std::move(p.values);
  s.validate();
  return s;
}

std::string trajectory_to_csv(const EpsilonTrajectory& traj) {
  std::string out = "t,re_eps,im_eps,re_deps,im_deps,wronskian\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ModePoint m = traj.at(i);
    out += fmt17(traj.times()[i]) + ',' + fmt17(m.eps.real()) + ',' +
           fmt17(m.eps.imag()) + ',' + fmt17(m.deps.real()) + ',' +
           fmt17(m.deps.imag()) + ',' + fmt17(m.wronskian()) + '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw FormatError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_grid(const std::filesystem::path& path, const WignerGrid& grid,
                Format format) {
  write_file_atomic(path, format == Format::kCsv ? grid_to_csv(grid)
                                                 : grid_to_bin(grid));
}

WignerGrid read_grid(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  return looks_binary(bytes) ? grid_from_bin(bytes) : grid_from_csv(bytes);
}

void write_sinogram(const std::filesystem::path& path, const OpticalSinogram& s,
                    Format format) {
  write_file_atomic(path, format == Format::kCsv ? sinogram_to_csv(s)
                                                 : sinogram_to_bin(s));
}

OpticalSinogram read_sinogram(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  return looks_binary(bytes) ? sinogram_from_bin(bytes)
                             : sinogram_from_csv(bytes);
}

}  // namespace iontomo::io
