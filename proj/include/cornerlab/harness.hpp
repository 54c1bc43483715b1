#pragma once
// Sweep orchestration: config parsing, FEM solves over mesh levels,
// Richardson extrapolation, reference columns, and the CSV/JSON/SVG
// artifacts.  Everything here is deterministic and seed free.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cornerlab {

struct RunConfig {
  double omega = 1.5707963267948966;
  double beta = 1.0;
  std::vector<double> L_values;   // strictly ascending
  std::vector<int> mesh_levels;   // strictly ascending
  bool grade_corners = true;
  double truncation_tol = 1e-8;
  double solver_tol = 1e-9;
  double quad_tol = 1e-9;
  std::string outputs = "out";

  void validate() const;  // std::invalid_argument naming the bad field

  // Fixed key order, %.17g floats; parsing the canonical text reproduces
  // the config bit for bit.
  std::string canonical() const;
  std::uint64_t config_hash() const;  // FNV-1a 64 over canonical()
};

// Flat key=value lines, '#' comments, keys exactly the RunConfig field
// names, lists comma separated.  Unknown or repeated keys throw.  The
// result is validated before it is returned.
RunConfig parse_config(std::istream& is);
RunConfig parse_config_file(const std::string& path);

// One eigenvalue-order-two Richardson step from the two finest entries.
// With three or more levels the level-to-level ratio must sit in [3,5];
// otherwise the finest raw value is reported with flagged set.  An exactly
// converged tail short-circuits to the finest value unflagged.
struct Extrapolation {
  std::optional<double> value;
  bool flagged = false;
};
Extrapolation richardson(const std::vector<double>& values_by_level);

struct LevelSolve {
  int level = 0;
  double E1 = 0.0, E2 = 0.0;
  double res1 = 0.0, res2 = 0.0;
  int nodes = 0, triangles = 0;
  int iterations = 0;
  std::vector<double> extra_eigenvalues;  // beyond the pair, equilateral runs
};

// One sweep point.  Optional columns are genuinely absent (not zero) when
// the quantity does not apply at this angle or configuration.
struct SweepRow {
  double L = 0.0;
  std::vector<LevelSolve> levels;
  std::optional<double> height;  // dirichlet cut, unbounded domains only
  std::optional<double> E1_extrap, E2_extrap;
  bool extrap_flagged = false;
  std::optional<double> E1_thm1, E2_thm1, split_thm1;
  std::optional<double> split_fem;  // only when it clears 10x the mesh error
  std::optional<double> E1_quasi, E2_quasi, split_quasi;
  std::optional<double> E1_1d, E2_1d;  // right angle only
  std::optional<int> count_below;      // inertia count under -beta^2 - tol
};

struct SweepResult {
  RunConfig config;
  std::vector<SweepRow> rows;  // sorted by L
  bool solver_failed = false;
  std::vector<std::string> failures;  // "L=... level=...: what"
};

// Runs every (L, level) point sequentially.  A failing point records a
// failure entry and the sweep moves on, so partial results survive.
SweepResult run_sweep(const RunConfig& cfg);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares of ln(values) against xs.  Needs at least three points,
// all positive; throws std::invalid_argument otherwise.
SlopeFit fit_loglinear(const std::vector<double>& xs,
                       const std::vector<double>& values);

// Column variant over sweep rows.  Recognized columns: split_fem,
// split_thm1, split_quasi, split_1d.  Rows missing the column are
// skipped; a present nonpositive value is an error.
SlopeFit fit_slope(const std::vector<SweepRow>& rows,
                   const std::string& column);

// Header pinned to
// L,level,E1_fem,E2_fem,res1,res2,E1_extrap,E2_extrap,E1_thm1,E2_thm1,
// split_fem,split_thm1,split_quasi,E1_1d,E2_1d
// one line per (L, level), derived columns on the finest level row only,
// floats at %.17g.
std::string csv_text(const std::vector<SweepRow>& rows);

// Deterministic JSON manifest: config echo, config hash, versions,
// tolerances, mesh statistics, solver iterations, failures.  No clocks.
std::string manifest_text(const SweepResult& result);

// Log plot of the splitting columns against L, one polyline per series
// with at least two positive points, plus a fitted line and a slope
// annotation when any series has three.
std::string svg_text(const std::vector<SweepRow>& rows);

// Writes sweep.csv, manifest.json, splitting.svg under out_dir, creating
// the directory if needed.  Throws std::runtime_error on I/O failure.
void emit(const SweepResult& result, const std::string& out_dir);

}  // namespace cornerlab
