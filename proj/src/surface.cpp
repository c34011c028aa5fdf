#include "rdc/surface.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rdc/error.hpp"

namespace rdc {
namespace {

using nlohmann::json;

std::optional<std::size_t> grid_index(const std::vector<double>& grid, double value) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::isinf(value) || std::isinf(grid[i])) {
      if (grid[i] == value) return i;
      continue;
    }
    if (std::abs(grid[i] - value) <= 1e-12 * std::max(1.0, std::abs(value))) return i;
  }
  return std::nullopt;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_double(j.get<std::string>());
  throw ValidationError("surface JSON: expected a number or \"inf\"/\"nan\"");
}

// Rebuild the (d, e) grids from row-major cell bounds.
void rebuild_grids(RdcSurface& s, const std::vector<std::pair<double, double>>& bounds) {
  for (const auto& [d, e] : bounds) {
    if (s.d_grid.empty() || s.d_grid.back() != d) s.d_grid.push_back(d);
  }
  for (const auto& [d, e] : bounds) {
    if (d != bounds.front().first) break;
    s.e_grid.push_back(e);
  }
  if (s.d_grid.size() * s.e_grid.size() != bounds.size()) {
    throw ValidationError("surface file: rows do not form a complete d-major grid");
  }
  for (std::size_t c = 0; c < bounds.size(); ++c) {
    const double d = s.d_grid[c / s.e_grid.size()];
    const double e = s.e_grid[c % s.e_grid.size()];
    const bool same_e = bounds[c].second == e || (std::isnan(e) && std::isnan(bounds[c].second));
    if (bounds[c].first != d || !same_e) {
      throw ValidationError("surface file: row " + std::to_string(c + 1) + " is out of grid order");
    }
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

void validate_grid(const std::vector<double>& grid, const char* name) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = grid[i];
    if (std::isnan(v) || v < 0.0) throw ValidationError(std::string(name) + ": entries must be nonnegative");
    if (std::isinf(v) && i + 1 != grid.size()) {
      throw ValidationError(std::string(name) + ": inf may only be the last entry");
    }
    if (i > 0 && !(v > grid[i - 1])) {
      throw ValidationError(std::string(name) + ": must be strictly increasing");
    }
  }
}

void RdcSurface::validate() const {
  if (points.size() != d_grid.size() * e_grid.size()) {
    throw DimensionError("surface has " + std::to_string(points.size()) + " points for a " +
                         std::to_string(d_grid.size()) + "x" + std::to_string(e_grid.size()) + " grid");
  }
}

MonotoneReport check_monotone(const RdcSurface& surface, double tolerance) {
  surface.validate();
  MonotoneReport report;
  report.tolerance = tolerance;
  const std::size_t nd = surface.d_grid.size();
  const std::size_t ne = surface.e_grid.size();
  auto compare = [&](std::size_t i, std::size_t j, std::size_t i2, std::size_t j2, char dir) {
    const RdcPoint& a = surface.at(i, j);
    const RdcPoint& b = surface.at(i2, j2);
    if (!a.feasible || !b.feasible) return;
    ++report.checked_pairs;
    const double increase = b.rate_bits - a.rate_bits;
    if (increase > tolerance) report.violations.push_back({i, j, i2, j2, dir, increase});
  };
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < ne; ++j) {
      if (i + 1 < nd) compare(i, j, i + 1, j, 'd');
      if (j + 1 < ne) compare(i, j, i, j + 1, 'e');
    }
  }
  return report;
}

ConvexityReport check_convexity(const RdcSurface& surface, const ConvexityOptions& options,
                                const MidpointSolver& solver) {
  surface.validate();
  ConvexityReport report;
  report.tolerance = options.tolerance;

  std::vector<std::size_t> feasible;
  for (std::size_t c = 0; c < surface.points.size(); ++c) {
    if (surface.points[c].feasible) feasible.push_back(c);
  }
  if (feasible.size() < 2) return report;

  const std::size_t ne = surface.e_grid.size();
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
  for (std::size_t s = 0; s < options.pairs; ++s) {
    std::size_t a = feasible[pick(rng)];
    std::size_t b = feasible[pick(rng)];
    while (b == a) b = feasible[pick(rng)];
    ++report.sampled_pairs;

    const std::size_t i1 = a / ne, j1 = a % ne, i2 = b / ne, j2 = b % ne;
    const double d_mid = 0.5 * (surface.d_grid[i1] + surface.d_grid[i2]);
    const double e_mid = 0.5 * (surface.e_grid[j1] + surface.e_grid[j2]);

    std::optional<double> mid_rate;
    const auto gi = grid_index(surface.d_grid, d_mid);
    const auto gj = grid_index(surface.e_grid, e_mid);
    if (gi && gj && surface.at(*gi, *gj).feasible) {
      mid_rate = surface.at(*gi, *gj).rate_bits;
      ++report.on_grid;
    } else if (solver) {
      mid_rate = solver(d_mid, e_mid);
      if (mid_rate) ++report.solved_on_demand;
    }
    if (!mid_rate) {
      ++report.skipped;
      continue;
    }
    ++report.checked_pairs;
    const double chord = 0.5 * (surface.points[a].rate_bits + surface.points[b].rate_bits);
    if (*mid_rate > chord + options.tolerance) {
      report.violations.push_back({i1, j1, i2, j2, d_mid, e_mid, *mid_rate, chord});
    }
  }
  return report;
}

std::string to_csv(const RdcSurface& surface) {
  surface.validate();
  std::string out = kCsvHeader;
  out += '\n';
  for (std::size_t i = 0; i < surface.d_grid.size(); ++i) {
    for (std::size_t j = 0; j < surface.e_grid.size(); ++j) {
      const RdcPoint& pt = surface.at(i, j);
      out += format_double(surface.d_grid[i]) + ',' + format_double(surface.e_grid[j]) + ',' +
             format_double(pt.rate_bits) + ',' + format_double(pt.distortion) + ',' +
             format_double(pt.class_error) + ',' + format_double(pt.lambda_d) + ',' +
             format_double(pt.lambda_e) + ',' + std::to_string(pt.iterations) + ',' +
             (pt.converged ? '1' : '0') + '\n';
    }
  }
  return out;
}

RdcSurface surface_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ValidationError("surface CSV: header must be exactly '" + std::string(kCsvHeader) + "'");
  }
  RdcSurface s;
  std::vector<std::pair<double, double>> bounds;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw ValidationError("surface CSV line " + std::to_string(line_no) + ": expected 9 fields");
    }
    RdcPoint pt;
    pt.rate_bits = parse_double(f[2]);
    pt.distortion = parse_double(f[3]);
    pt.class_error = parse_double(f[4]);
    pt.lambda_d = parse_double(f[5]);
    pt.lambda_e = parse_double(f[6]);
    pt.iterations = static_cast<std::size_t>(std::stoull(f[7]));
    if (f[8] != "0" && f[8] != "1") {
      throw ValidationError("surface CSV line " + std::to_string(line_no) + ": converged must be 0 or 1");
    }
    pt.converged = f[8] == "1";
    pt.feasible = !std::isnan(pt.rate_bits);
    bounds.emplace_back(parse_double(f[0]), parse_double(f[1]));
    s.points.push_back(std::move(pt));
  }
  rebuild_grids(s, bounds);
  return s;
}

std::string to_json(const RdcSurface& surface, bool include_timestamp) {
  surface.validate();
  json j;
  j["d_grid"] = json::array();
  for (double d : surface.d_grid) j["d_grid"].push_back(number(d));
  j["e_grid"] = json::array();
  for (double e : surface.e_grid) j["e_grid"].push_back(number(e));
  if (surface.metadata) {
    const auto& m = *surface.metadata;
    json meta;
    meta["source_hash"] = m.source_hash;
    meta["config"] = {{"inner_tol", m.config.inner_tol},
                      {"max_inner_iters", m.config.max_inner_iters},
                      {"constraint_tol", m.config.constraint_tol},
                      {"multiplier_max", m.config.multiplier_max},
                      {"outer_max_iters", m.config.outer_max_iters}};
    if (include_timestamp) meta["timestamp"] = m.timestamp;
    j["metadata"] = meta;
  }
  j["points"] = json::array();
  for (std::size_t i = 0; i < surface.d_grid.size(); ++i) {
    for (std::size_t jj = 0; jj < surface.e_grid.size(); ++jj) {
      const RdcPoint& pt = surface.at(i, jj);
      j["points"].push_back({{"d_bound", number(surface.d_grid[i])},
                             {"e_bound", number(surface.e_grid[jj])},
                             {"rate_bits", number(pt.rate_bits)},
                             {"distortion", number(pt.distortion)},
                             {"class_error", number(pt.class_error)},
                             {"lambda_d", number(pt.lambda_d)},
                             {"lambda_e", number(pt.lambda_e)},
                             {"iterations", pt.iterations},
                             {"converged", pt.converged},
                             {"feasible", pt.feasible}});
    }
  }
  return j.dump(2) + "\n";
}

RdcSurface surface_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("surface JSON: ") + e.what());
  }
  RdcSurface s;
  try {
    for (const auto& d : j.at("d_grid")) s.d_grid.push_back(number_from(d));
    for (const auto& e : j.at("e_grid")) s.e_grid.push_back(number_from(e));
    if (j.contains("metadata")) {
      const json& m = j.at("metadata");
      SurfaceMetadata meta;
      meta.source_hash = m.at("source_hash").get<std::string>();
      const json& c = m.at("config");
      meta.config.inner_tol = c.at("inner_tol").get<double>();
      meta.config.max_inner_iters = c.at("max_inner_iters").get<std::size_t>();
      meta.config.constraint_tol = c.at("constraint_tol").get<double>();
      meta.config.multiplier_max = c.at("multiplier_max").get<double>();
      meta.config.outer_max_iters = c.at("outer_max_iters").get<std::size_t>();
      if (m.contains("timestamp")) meta.timestamp = m.at("timestamp").get<std::string>();
      s.metadata = meta;
    }
    for (const auto& p : j.at("points")) {
      RdcPoint pt;
      pt.rate_bits = number_from(p.at("rate_bits"));
      pt.distortion = number_from(p.at("distortion"));
      pt.class_error = number_from(p.at("class_error"));
      pt.lambda_d = number_from(p.at("lambda_d"));
      pt.lambda_e = number_from(p.at("lambda_e"));
      pt.iterations = p.at("iterations").get<std::size_t>();
      pt.converged = p.at("converged").get<bool>();
      pt.feasible = p.at("feasible").get<bool>();
      s.points.push_back(std::move(pt));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("surface JSON: ") + e.what());
  }
  s.validate();
  return s;
}

void export_surface(const RdcSurface& surface, const std::filesystem::path& path,
                    SurfaceFormat format, bool include_timestamp) {
  const std::string text =
      format == SurfaceFormat::csv ? to_csv(surface) : to_json(surface, include_timestamp);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

RdcSurface import_surface(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open surface file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return surface_from_json(text);
  return surface_from_csv(text);
}

}  // namespace rdc
