#pragma once

// Tabulated R(D, E) surfaces: monotonicity and midpoint-convexity checks,
// plus CSV / JSON export and import.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rdc/solver_types.hpp"

namespace rdc {

struct SurfaceMetadata {
  std::string source_hash;
  SolverConfig config;
  std::string timestamp;  ///< ISO-8601 UTC; the only non-deterministic field
};

/// Grid of solved points, row-major with the D index outer.
struct RdcSurface {
  std::vector<double> d_grid;
  std::vector<double> e_grid;
  std::vector<RdcPoint> points;
  std::optional<SurfaceMetadata> metadata;

  RdcPoint& at(std::size_t i, std::size_t j) { return points[i * e_grid.size() + j]; }
  const RdcPoint& at(std::size_t i, std::size_t j) const { return points[i * e_grid.size() + j]; }

  /// Throws DimensionError if points does not match the grids.
  void validate() const;
};

/// Strictly increasing, nonnegative, non-NaN. `inf` is allowed as the last entry.
void validate_grid(const std::vector<double>& grid, const char* name);

inline constexpr double kMonotoneTolerance = 1e-4;
inline constexpr double kConvexityTolerance = 1e-3;

struct MonotoneViolation {
  std::size_t i_from, j_from, i_to, j_to;
  char direction;  ///< 'd' or 'e'
  double increase_bits;
};

struct MonotoneReport {
  double tolerance = kMonotoneTolerance;
  std::size_t checked_pairs = 0;
  std::vector<MonotoneViolation> violations;
  bool passed() const { return violations.empty(); }
};

/// Flags every adjacent pair (along D and along E) where the rate grows by more
/// than `tolerance`. Pairs touching an infeasible cell are skipped.
MonotoneReport check_monotone(const RdcSurface& surface, double tolerance = kMonotoneTolerance);

/// Solves R at an off-grid (D, E) for the convexity check; returns nullopt when
/// the point is infeasible.
using MidpointSolver = std::function<std::optional<double>(double d, double e)>;

struct ConvexityViolation {
  std::size_t i1, j1, i2, j2;
  double mid_d, mid_e;
  double mid_rate_bits;
  double chord_rate_bits;
};

struct ConvexityReport {
  double tolerance = kConvexityTolerance;
  std::size_t sampled_pairs = 0;
  std::size_t checked_pairs = 0;
  std::size_t on_grid = 0;
  std::size_t solved_on_demand = 0;
  std::size_t skipped = 0;  ///< midpoint off-grid with no solver, or infeasible
  std::vector<ConvexityViolation> violations;
  bool passed() const { return violations.empty(); }
};

struct ConvexityOptions {
  std::size_t pairs = 200;
  std::uint64_t seed = 1;
  double tolerance = kConvexityTolerance;
};

/// Midpoint convexity R(mid) <= (R1 + R2) / 2 + tolerance over random pairs of
/// feasible cells. Midpoints that land on the grid reuse the tabulated value;
/// others go through `solver` if one is given and are skipped otherwise.
ConvexityReport check_convexity(const RdcSurface& surface, const ConvexityOptions& options = {},
                                const MidpointSolver& solver = {});

enum class SurfaceFormat { csv, json };

inline constexpr const char* kCsvHeader =
    "d_bound,e_bound,rate_bits,distortion,class_error,lambda_d,lambda_e,iterations,converged";

/// Serializes the surface. Doubles use the shortest representation that reads
/// back to the same bits; infinities are written as `inf`, infeasible cells
/// carry `nan` in their value columns. With include_timestamp = false the JSON
/// form omits the timestamp (CSV never carries metadata).
std::string to_csv(const RdcSurface& surface);
std::string to_json(const RdcSurface& surface, bool include_timestamp = true);

RdcSurface surface_from_csv(const std::string& text);
RdcSurface surface_from_json(const std::string& text);

void export_surface(const RdcSurface& surface, const std::filesystem::path& path,
                    SurfaceFormat format, bool include_timestamp = true);
RdcSurface import_surface(const std::filesystem::path& path);

/// Shortest round-trip text for a double, with `inf`, `-inf` and `nan` spelled out.
std::string format_double(double value);
/// Inverse of format_double; throws ValidationError on garbage.
double parse_double(std::string_view text);

}  // namespace rdc
