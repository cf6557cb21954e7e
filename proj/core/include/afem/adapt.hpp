#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "afem/history.hpp"
#include "afem/mesh.hpp"
#include "afem/problem.hpp"
#include "afem/solver.hpp"

namespace afem {

enum class RefinementMode { Uniform, Adaptive };

std::string_view to_string(RefinementMode mode) noexcept;
/// "uniform" or "adaptive"; throws Error(ConfigError) otherwise.
RefinementMode parse_mode(std::string_view text);

struct LoopOptions {
  RefinementMode mode = RefinementMode::Adaptive;
  double theta = 0.5;
  /// Levels are computed while Ndof <= max_ndof.
  std::size_t max_ndof = 50000;
  SolverTolerances tolerances{};
  /// Replaces the benchmark's initial mesh.
  std::optional<Triangulation> initial_mesh;
  /// Writes the modified nonconforming and mixed systems of every level here.
  std::optional<std::filesystem::path> dump_dir;
  /// Without an exact solution, uniform runs measure errors against the
  /// solution this many uniform levels beyond the last one (0 disables).
  int reference_levels = 2;
  /// Upper bound on the size of that reference solve.
  std::size_t reference_max_ndof = 300000;
  /// Radius around the singular point used for marked_near_singularity.
  double near_radius = 0.25;
  /// Called after each completed level.
  std::function<void(const LevelRecord&)> on_level;
};

/// SOLVE (via the equivalence, cross-checked by the direct mixed solve),
/// ESTIMATE, MARK, REFINE until the next level would exceed max_ndof.
///
/// Throws Error(ConfigError) if the initial mesh is already too large,
/// Error(BadTheta), and Error(EquivalenceMismatch) when the two solution
/// routes disagree by more than the tolerance. A singular solve ends the
/// run; the partial history is returned with singular_event set.
ConvergenceHistory adaptive_loop(const ProblemInstance& instance, const LoopOptions& options);
ConvergenceHistory adaptive_loop(const ProblemInstance& instance, double theta, std::size_t max_ndof,
                                 RefinementMode mode);

}  // namespace afem
