#include "afem/bench.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "afem/errors.hpp"
#include "afem/mesh_io.hpp"
#include "afem/quadrature.hpp"

namespace afem {

ErrorNorms error_norms(const Triangulation& mesh, const MixedSolution& mixed, const ProblemInstance& instance,
                       int singular_depth) {
  if (!instance.exact) throw Error(ErrorCode::NoExactSolution, instance.name + " has no exact solution");
  if (mixed.num_triangles() != mesh.num_triangles()) {
    throw Error(ErrorCode::MeshMismatch, "mixed solution does not match the mesh");
  }
  const ExactSolution& ex = *instance.exact;
  const CoefficientField& field = instance.field;
  const auto rule = quad::degree5_rule();
  double eu = 0.0, ep = 0.0, ediv = 0.0;
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const quad::Tri tri{mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2)};
    int corner = -1;
    if (ex.singular_point) {
      const double tol = 1e-12 * std::max(1.0, mesh.geometry().diameter[t]);
      for (int k = 0; k < 3; ++k) {
        if ((mesh.vertex(t, k) - *ex.singular_point).norm() <= tol) corner = k;
      }
    }
    const std::vector<quad::Tri> pieces =
        corner >= 0 ? quad::graded_toward(tri, corner, singular_depth) : std::vector<quad::Tri>{tri};
    const double u_m = mixed.u[t];
    const double div_m = mixed.divergence(t);
    for (const auto& piece : pieces) {
      for (const auto& qp : rule) {
        const Vec2 x = quad::map(piece.a, piece.b, piece.c, qp);
        const double w = qp.weight * piece.area();
        const double u = ex.u(x);
        eu += w * (u - u_m) * (u - u_m);
        ep += w * (ex.p(x) - mixed.flux(t, x)).squaredNorm();
        const double div_p = field.f(x) - field.gamma(x) * u;
        ediv += w * (div_p - div_m) * (div_p - div_m);
      }
    }
  }
  return {std::sqrt(eu), std::sqrt(ep), std::sqrt(ediv)};
}

ErrorNorms nested_errors(const Triangulation& fine, const MixedSolution& fine_solution, const MixedSolution& coarse,
                         int levels) {
  if (fine_solution.num_triangles() != fine.num_triangles() || levels < 0 ||
      (coarse.num_triangles() << (2 * levels)) != fine.num_triangles()) {
    throw Error(ErrorCode::MeshMismatch, "solutions are not related by uniform refinement");
  }
  const auto rule = quad::edge_midpoint_rule();
  double eu = 0.0, ep = 0.0, ediv = 0.0;
  for (int i = 0; i < static_cast<int>(fine.num_triangles()); ++i) {
    const int parent = i >> (2 * levels);
    const double area = fine.geometry().area[i];
    for (const auto& qp : rule) {
      const Vec2 x = quad::map(fine.vertex(i, 0), fine.vertex(i, 1), fine.vertex(i, 2), qp);
      ep += qp.weight * area * (fine_solution.flux(i, x) - coarse.flux(parent, x)).squaredNorm();
    }
    eu += area * std::pow(fine_solution.u[i] - coarse.u[parent], 2);
    ediv += area * std::pow(fine_solution.divergence(i) - coarse.divergence(parent), 2);
  }
  return {std::sqrt(eu), std::sqrt(ep), std::sqrt(ediv)};
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::ConfigError, key + ": not a number: '" + value + "'");
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorCode::ConfigError, key + ": not a boolean: '" + value + "'");
}

std::string gamma_label(double g) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", g);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void write_history_file(const std::filesystem::path& path, const ConvergenceHistory& h) {
  auto out = open_output(path);
  write_csv(out, h);
}

void print_summary(std::ostream& log, const ConvergenceHistory& h) {
  log << h.problem << " (" << h.mode;
  if (h.mode == "adaptive") log << ", theta " << h.theta;
  if (h.gamma) log << ", gamma " << *h.gamma;
  log << ")\n";
  write_table(log, h);
  if (h.reference_errors) log << "errors measured against a finer uniform solution\n";
  for (const auto& r : h.levels) {
    if (r.c_rel > 10.0) {
      log << "large error/estimator ratio at level " << r.level << ": C_rel = " << r.c_rel << '\n';
      break;
    }
  }
  if (h.singular_event) log << "singular solve at " << *h.singular_event << '\n';
}

void write_sweep_script(const std::filesystem::path& path, const std::vector<std::filesystem::path>& csvs,
                        const std::vector<double>& gammas, const std::filesystem::path& combined) {
  auto out = open_output(path);
  out << "# gnuplot script: eta, e_p and C_rel against Ndof for each gamma\n";
  out << "set datafile separator ','\nset logscale xy\nset key outside\nset xlabel 'Ndof'\n";
  out << "set terminal pngcairo size 1200,400\nset output '" << path.stem().string() << ".png'\n";
  out << "set multiplot layout 1,3\n";
  const char* columns[] = {"5", "8", "10"};
  const char* titles[] = {"e_p", "eta", "C_rel"};
  for (int c = 0; c < 3; ++c) {
    out << "set title '" << titles[c] << "'\nplot ";
    for (std::size_t i = 0; i < csvs.size(); ++i) {
      out << (i ? ", \\\n     " : "") << "'" << csvs[i].filename().string() << "' using 2:" << columns[c]
          << " every ::1 with linespoints title 'gamma=" << gamma_label(gammas[i]) << "'";
    }
    out << '\n';
  }
  out << "unset multiplot\n# combined table: " << combined.filename().string() << '\n';
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "problem") {
      cfg.problem = value;
    } else if (key == "mode") {
      cfg.mode = parse_mode(value);
    } else if (key == "theta") {
      cfg.theta = to_double(key, value);
    } else if (key == "max-ndof" || key == "max_ndof") {
      const double v = to_double(key, value);
      if (v < 1.0 || v != std::floor(v)) throw Error(ErrorCode::ConfigError, "max-ndof must be a positive integer");
      cfg.max_ndof = static_cast<std::size_t>(v);
    } else if (key == "gamma") {
      cfg.gamma = to_double(key, value);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "mesh") {
      cfg.mesh = value;
    } else if (key == "dump-systems" || key == "dump_systems") {
      cfg.dump_systems = to_bool(key, value);
    } else {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) throw Error(ErrorCode::ConfigError, "theta must lie in (0, 1]");
  if (cfg.problem != "lshape" && cfg.problem != "crack" && cfg.problem != "eigen_sweep") {
    throw Error(ErrorCode::ConfigError, "unknown problem '" + cfg.problem + "'");
  }
  if (cfg.gamma && cfg.problem != "eigen_sweep") {
    throw Error(ErrorCode::ConfigError, "gamma only applies to eigen_sweep");
  }

  LoopOptions opt;
  opt.mode = cfg.mode;
  opt.theta = cfg.theta;
  opt.max_ndof = cfg.max_ndof;
  if (cfg.mesh) opt.initial_mesh = read_mesh(*cfg.mesh);

  const std::string stem = cfg.problem + "_" + std::string(to_string(cfg.mode));
  std::filesystem::path out = cfg.out.empty() ? std::filesystem::path(stem + ".csv") : cfg.out;
  ExperimentResult result;

  const auto run_one = [&](const ProblemInstance& inst, const std::filesystem::path& csv,
                           std::optional<double> gamma) {
    if (cfg.dump_systems) {
      opt.dump_dir = csv.parent_path() / (csv.stem().string() + "_systems");
    }
    ConvergenceHistory h = adaptive_loop(inst, opt);
    h.gamma = gamma;
    write_history_file(csv, h);
    print_summary(log, h);
    result.singular = result.singular || h.singular_event.has_value();
    result.files.push_back(csv);
    result.runs.push_back(std::move(h));
  };

  if (cfg.problem != "eigen_sweep") {
    run_one(benchmark(cfg.problem), out, std::nullopt);
    return result;
  }

  const std::vector<double> gammas = cfg.gamma ? std::vector<double>{*cfg.gamma} : default_gamma_grid();
  const std::filesystem::path dir = out.parent_path();
  const std::string prefix = out.stem().string();
  std::vector<std::filesystem::path> csvs;
  for (double g : gammas) {
    const auto csv = dir / (prefix + "_gamma_" + gamma_label(g) + ".csv");
    run_one(benchmark("eigen_sweep", g), csv, g);
    csvs.push_back(csv);
  }
  const auto combined = dir / (prefix + "_c_rel.csv");
  {
    auto f = open_output(combined);
    f << "gamma,level,ndof,eta,e_p,c_rel\n";
    for (const auto& h : result.runs) {
      for (const auto& r : h.levels) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.17g,%d,%zu,%.17g,%.17g,%.17g\n", *h.gamma, r.level, r.ndof, r.eta, r.e_p,
                      r.c_rel);
        f << buf;
      }
    }
  }
  result.files.push_back(combined);
  const auto script = dir / (prefix + "_plot.gp");
  write_sweep_script(script, csvs, gammas, combined);
  result.files.push_back(script);
  return result;
}

}  // namespace afem
