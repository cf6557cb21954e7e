#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "afem/adapt.hpp"
#include "afem/assembly.hpp"
#include "afem/history.hpp"
#include "afem/mesh.hpp"
#include "afem/problem.hpp"

namespace afem {

struct ErrorNorms {
  double e_u = 0.0;    // ||u - u_M||
  double e_p = 0.0;    // ||p - p_M||
  double e_div = 0.0;  // ||div p - div p_M|| with div p = f - gamma u
};

/// L2 errors against the exact solution with the 7-point degree-5 rule;
/// triangles touching the singular point are subdivided toward it
/// `singular_depth` times. Throws Error(NoExactSolution) and
/// Error(MeshMismatch).
ErrorNorms error_norms(const Triangulation& mesh, const MixedSolution& mixed, const ProblemInstance& instance,
                       int singular_depth = 3);

/// Errors of a coarse solution against a solution on a mesh obtained by
/// `levels` uniform red refinements (children of triangle t are 4t..4t+3).
ErrorNorms nested_errors(const Triangulation& fine, const MixedSolution& fine_solution,
                         const MixedSolution& coarse, int levels);

struct ExperimentConfig {
  std::string problem = "lshape";
  RefinementMode mode = RefinementMode::Uniform;
  double theta = 0.5;
  std::size_t max_ndof = 65000;
  /// eigen_sweep: a single value; the default grid is used when unset.
  std::optional<double> gamma;
  std::filesystem::path out;
  std::optional<std::filesystem::path> mesh;
  bool dump_systems = false;
};

/// `key = value` lines with the CLI flag names (problem, mode, theta,
/// max-ndof, gamma, out, mesh, dump-systems); '#' starts a comment.
/// Throws Error(ConfigError).
ExperimentConfig parse_config(std::istream& in);

struct ExperimentResult {
  std::vector<ConvergenceHistory> runs;
  std::vector<std::filesystem::path> files;
  bool singular = false;
};

/// Runs the configured experiment, writes the CSV file(s) and prints the
/// table to `log`. eigen_sweep writes one CSV per gamma, a combined C_rel
/// CSV and a gnuplot script. Throws Error(ConfigError) and Error(IoError).
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace afem
