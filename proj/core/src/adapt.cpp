#include "afem/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <string>

#include "afem/assembly.hpp"
#include "afem/bench.hpp"
#include "afem/errors.hpp"
#include "afem/estimate.hpp"
#include "afem/marking.hpp"
#include "afem/refine.hpp"

namespace afem {

std::string_view to_string(RefinementMode mode) noexcept {
  return mode == RefinementMode::Uniform ? "uniform" : "adaptive";
}

RefinementMode parse_mode(std::string_view text) {
  if (text == "uniform") return RefinementMode::Uniform;
  if (text == "adaptive") return RefinementMode::Adaptive;
  throw Error(ErrorCode::ConfigError, "mode must be uniform or adaptive, got '" + std::string(text) + "'");
}

namespace {

// max_T |div p_M - (f_h - gamma_h u_M)| relative to the largest magnitude of
// the terms entering the identity: |f_h|, |gamma_h u_M| and the edge fluxes
// sum_E |E| |p . nu_E| / |T| that div p_M is computed from.
double divergence_defect(const Triangulation& mesh, const MixedSolution& m, const PiecewiseData& pw) {
  const auto& geo = mesh.geometry();
  double worst = 0.0, scale = 0.0;
  for (std::size_t t = 0; t < m.num_triangles(); ++t) {
    const int i = static_cast<int>(t);
    worst = std::max(worst, std::abs(m.divergence(i) - (pw.f[t] - pw.gamma[t] * m.u[t])));
    double flux = 0.0;
    for (int e : mesh.triangle_edges()[t]) flux += geo.length[e] * std::abs(m.edge_flux[e]);
    scale = std::max({scale, std::abs(pw.f[t]) + std::abs(pw.gamma[t] * m.u[t]), flux / geo.area[t]});
  }
  return scale > 0.0 ? worst / scale : worst;
}

void dump_systems(const std::filesystem::path& dir, int level, const Triangulation& mesh,
                  const PiecewiseData& pw, const ScalarFn& u_D) {
  std::filesystem::create_directories(dir);
  const auto write = [&](const std::string& name, const SparseSystem& sys) {
    const auto path = dir / ("level_" + std::to_string(level) + "_" + name + ".mtx");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    write_triplets(out, sys);
  };
  write("modified_ncfem", apply_dirichlet(assemble_modified_ncfem(mesh, pw), u_D, mesh));
  write("mixed", apply_dirichlet(assemble_mixed_direct(mesh, pw), u_D, mesh));
}

void fill_rates(LevelRecord& rec, const LevelRecord& prev) {
  rec.rate_u = convergence_rate(prev.e_u, rec.e_u, prev.ndof, rec.ndof);
  rec.rate_p = convergence_rate(prev.e_p, rec.e_p, prev.ndof, rec.ndof);
  rec.rate_eta = convergence_rate(prev.eta, rec.eta, prev.ndof, rec.ndof);
}

// Errors of the kept uniform levels against a finer uniform solution.
void add_reference_errors(ConvergenceHistory& history, const ProblemInstance& instance, const LoopOptions& opt,
                          const std::vector<MixedSolution>& kept, const Triangulation& last_mesh,
                          const Triangulation& next_mesh) {
  Triangulation fine = next_mesh;
  int extra = 1;
  if (fine.mixed_ndof() > opt.reference_max_ndof) {
    fine = last_mesh;
    extra = 0;
  }
  while (extra < opt.reference_levels) {
    Triangulation candidate = uniform_red_refine(fine);
    if (candidate.mixed_ndof() > opt.reference_max_ndof) break;
    fine = std::move(candidate);
    ++extra;
  }
  const int last = static_cast<int>(kept.size()) - 1;
  MixedSolution reference;
  if (extra == 0) {
    reference = kept.back();
  } else {
    try {
      const PiecewiseData pw = project_p0(instance.field, fine);
      reference = solve_mixed_via_equivalence(fine, pw, instance.field.u_D, opt.tolerances).mixed;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SingularMatrix) return;
      throw;
    }
  }
  for (int l = 0; l <= last; ++l) {
    const int levels = last + extra - l;
    if (levels <= 0) continue;
    const ErrorNorms n = nested_errors(fine, reference, kept[l], levels);
    auto& rec = history.levels[l];
    rec.e_u = n.e_u;
    rec.e_p = n.e_p;
    rec.e_div = n.e_div;
    derive_ratios(rec);
    if (l > 0) fill_rates(rec, history.levels[l - 1]);
  }
  history.reference_errors = true;
}

}  // namespace

ConvergenceHistory adaptive_loop(const ProblemInstance& instance, const LoopOptions& opt) {
  if (!(opt.theta > 0.0 && opt.theta <= 1.0)) {
    throw Error(ErrorCode::BadTheta, "theta must lie in (0, 1], got " + std::to_string(opt.theta));
  }
  Triangulation mesh = opt.initial_mesh ? *opt.initial_mesh : instance.initial_mesh();
  if (mesh.mixed_ndof() > opt.max_ndof) {
    throw Error(ErrorCode::ConfigError, "initial Ndof " + std::to_string(mesh.mixed_ndof()) + " exceeds max_ndof " +
                                            std::to_string(opt.max_ndof));
  }
  ConvergenceHistory history;
  history.problem = instance.name;
  history.mode = std::string(to_string(opt.mode));
  history.theta = opt.theta;

  const bool want_reference =
      !instance.exact && opt.mode == RefinementMode::Uniform && opt.reference_levels > 0;
  std::vector<MixedSolution> kept;
  Triangulation last_mesh;

  for (int level = 0; mesh.mixed_ndof() <= opt.max_ndof; ++level) {
    const auto start = std::chrono::steady_clock::now();
    LevelRecord rec;
    rec.level = level;
    rec.ndof = mesh.mixed_ndof();
    rec.triangles = mesh.num_triangles();
    rec.min_angle = mesh.min_angle();

    const PiecewiseData pw = project_p0(instance.field, mesh);
    ReconstructedMixed recon;
    MixedSolution direct;
    try {
      recon = solve_mixed_via_equivalence(mesh, pw, instance.field.u_D, opt.tolerances);
      direct = solve_mixed_direct(mesh, pw, instance.field.u_D, opt.tolerances);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMatrix) throw;
      history.singular_event = "level " + std::to_string(level) + " (Ndof " + std::to_string(rec.ndof) +
                               "): " + e.what();
      break;
    }
    const EquivalenceResidual res = equivalence_residual(mesh, direct, recon.mixed);
    rec.equivalence_flux = res.flux;
    rec.equivalence_scalar = res.scalar;
    if (!(res.flux <= opt.tolerances.equivalence && res.scalar <= opt.tolerances.equivalence)) {
      throw Error(ErrorCode::EquivalenceMismatch,
                  "level " + std::to_string(level) + ": flux " + std::to_string(res.flux) + ", scalar " +
                      std::to_string(res.scalar));
    }
    rec.divergence_defect =
        std::max(divergence_defect(mesh, recon.mixed, pw), divergence_defect(mesh, direct, pw));

    const EstimatorReport report = estimate_mixed(mesh, recon.mixed, recon.u_cr, instance.field, pw);
    rec.eta = report.eta();
    rec.eta_with_data = report.eta_with_data();
    if (instance.exact) {
      const ErrorNorms n = error_norms(mesh, recon.mixed, instance);
      rec.e_u = n.e_u;
      rec.e_p = n.e_p;
      rec.e_div = n.e_div;
      derive_ratios(rec);
    }
    if (opt.dump_dir) dump_systems(*opt.dump_dir, level, mesh, pw, instance.field.u_D);

    Triangulation next;
    if (opt.mode == RefinementMode::Uniform) {
      rec.marked = mesh.num_triangles();
      next = uniform_red_refine(mesh);
    } else {
      const MarkedSet marked = dorfler_mark(report.eta_squared_per_triangle(), opt.theta);
      rec.marked = marked.triangles.size();
      if (instance.exact && instance.exact->singular_point && !marked.triangles.empty()) {
        std::size_t near = 0;
        for (int t : marked.triangles) {
          near += (mesh.geometry().centroid[t] - *instance.exact->singular_point).norm() < opt.near_radius;
        }
        rec.marked_near_singularity = static_cast<double>(near) / static_cast<double>(marked.triangles.size());
      }
      next = rgb_refine(mesh, marked.triangles);
    }
    if (!history.levels.empty()) fill_rates(rec, history.levels.back());
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    history.levels.push_back(rec);
    if (want_reference) kept.push_back(std::move(recon.mixed));
    if (opt.on_level) opt.on_level(rec);
    last_mesh = std::move(mesh);
    mesh = std::move(next);
  }

  if (want_reference && !kept.empty()) add_reference_errors(history, instance, opt, kept, last_mesh, mesh);
  return history;
}

ConvergenceHistory adaptive_loop(const ProblemInstance& instance, double theta, std::size_t max_ndof,
                                 RefinementMode mode) {
  LoopOptions opt;
  opt.theta = theta;
  opt.max_ndof = max_ndof;
  opt.mode = mode;
  return adaptive_loop(instance, opt);
}

}  // namespace afem
