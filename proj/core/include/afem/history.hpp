#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace afem {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One level of a refinement run. Quantities that are not available (rates
/// on the first level, errors without an exact or reference solution) are NaN.
struct LevelRecord {
  int level = 0;
  std::size_t ndof = 0;
  double e_u = kNaN;
  double rate_u = kNaN;
  double e_p = kNaN;
  double rate_p = kNaN;
  double e_div = kNaN;
  double eta = kNaN;
  double rate_eta = kNaN;
  double c_rel = kNaN;       // (||p - p_M||_H(div) + ||u - u_M||) / eta
  double efficiency = kNaN;  // eta / e_p

  // Diagnostics, not part of the CSV.
  std::size_t triangles = 0;
  double eta_with_data = kNaN;
  double equivalence_flux = kNaN;
  double equivalence_scalar = kNaN;
  double divergence_defect = kNaN;
  double min_angle = kNaN;
  std::size_t marked = 0;
  double marked_near_singularity = kNaN;
  double seconds = 0.0;
};

struct ConvergenceHistory {
  std::string problem;
  std::string mode;
  double theta = kNaN;
  std::optional<double> gamma;
  std::vector<LevelRecord> levels;
  /// Set when a solve was singular; `levels` then holds the completed levels.
  std::optional<std::string> singular_event;
  /// True when the errors were measured against a finer discrete solution.
  bool reference_errors = false;
};

/// log(e_prev / e) / log(n / n_prev).
double convergence_rate(double e_prev, double e, std::size_t n_prev, std::size_t n);

/// Fills rate_u, rate_p and rate_eta from level 1 on. Throws
/// Error(InsufficientLevels) for fewer than two levels.
ConvergenceHistory convergence_rate(ConvergenceHistory history);

/// Fills c_rel and efficiency from the errors and eta.
void derive_ratios(LevelRecord& record);

inline constexpr const char* kCsvHeader = "level,ndof,e_u,rate_u,e_p,rate_p,e_div,eta,rate_eta,c_rel,efficiency";

/// CSV with kCsvHeader; NaN is written as an empty field. Values use 17
/// significant digits so read_csv reproduces them exactly.
void write_csv(std::ostream& out, const ConvergenceHistory& history);
/// Parses the CSV columns back. Throws Error(ParseError).
std::vector<LevelRecord> read_csv(std::istream& in);

/// Aligned plain-text table of the CSV columns.
void write_table(std::ostream& out, const ConvergenceHistory& history);

}  // namespace afem
