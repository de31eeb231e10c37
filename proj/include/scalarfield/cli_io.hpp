#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "scalarfield/grid.hpp"
#include "scalarfield/nonlinearity.hpp"

namespace scalarfield {

/// Flat `section.key = value` configuration. Every key has a default; unknown
/// keys are rejected. Schema:
///
///   problem.N, problem.M, problem.class (radial|o1tau|o2tau|line),
///   problem.nonlinearity (cubic | power:a,b,p | cubic_quintic:a,b,c)
///   grid.extent, grid.h
///   solver.stages, solver.tol, solver.tol_first, solver.max_iter,
///   solver.nodes, solver.seed, solver.n_rho, solver.n_half
///   task.command, task.k, task.R, task.input, task.directions
///   output.dir
struct RunConfig {
  std::map<std::string, std::string> values;

  static RunConfig defaults();
  /// `key = value` lines; `[section]` headers prefix later keys; `#` comments.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& file);

  /// Throws ConfigError for unknown keys.
  void set(const std::string& key, const std::string& value);
  /// `key=value`.
  void set_assignment(const std::string& assignment);

  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  int integer(const std::string& key) const;

  SymmetryClass symmetry_class() const;
  NonlinearityModel model() const;
  std::filesystem::path output_dir() const { return str("output.dir"); }

  /// Cross-field checks, run before any compute. Throws ConfigError.
  void validate() const;
};

const std::vector<std::string>& command_names();

/// Runs task.command and writes report.json, provenance.json, curves.csv and
/// Field CSVs into output.dir. Returns 0 on success, 1 when the solver does
/// not converge or a check fails, 2 on configuration errors.
int run(const RunConfig& config);

/// Rows of curves.csv (header `x,y,series`).
struct Curve {
  std::string series;
  std::vector<std::pair<double, double>> points;
};

void write_curves(const std::vector<Curve>& curves, const std::filesystem::path& file);

}  // namespace scalarfield
