// Command line driver: `afem run ...` executes an experiment, `afem mesh ...`
// writes a benchmark's initial mesh.

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <fstream>
#include <iostream>
#include <string>

#include "afem/bench.hpp"
#include "afem/errors.hpp"
#include "afem/mesh_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSingular = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive mixed finite element experiments"};
  app.require_subcommand(1);

  afem::ExperimentConfig cfg;
  std::string config_file;
  std::string mode = "uniform";
  double gamma = 0.0;
  std::string out;
  std::string mesh_path;

  auto* run = app.add_subcommand("run", "run a convergence experiment");
  run->add_option("--config", config_file, "key = value file; command line flags override it")
      ->check(CLI::ExistingFile);
  auto* problem_opt = run->add_option("--problem", cfg.problem, "lshape | crack | eigen_sweep")
                          ->check(CLI::IsMember({"lshape", "crack", "eigen_sweep"}));
  auto* mode_opt = run->add_option("--mode", mode, "uniform | adaptive")->check(CLI::IsMember({"uniform", "adaptive"}));
  auto* theta_opt = run->add_option("--theta", cfg.theta, "bulk marking fraction in (0, 1]");
  auto* max_opt = run->add_option("--max-ndof", cfg.max_ndof, "largest Ndof to solve");
  auto* gamma_opt = run->add_option("--gamma", gamma, "eigen_sweep: single gamma (default: built-in grid)");
  auto* out_opt = run->add_option("--out", out, "CSV path (eigen_sweep: prefix of the output files)");
  auto* mesh_opt = run->add_option("--mesh", mesh_path, "initial mesh file")->check(CLI::ExistingFile);
  auto* dump_opt = run->add_flag("--dump-systems", cfg.dump_systems, "write every level's linear systems");

  std::string mesh_problem = "lshape";
  std::string mesh_out;
  auto* mesh_cmd = app.add_subcommand("mesh", "write the initial mesh of a benchmark");
  mesh_cmd->add_option("--problem", mesh_problem, "lshape | crack")->check(CLI::IsMember({"lshape", "crack"}));
  mesh_cmd->add_option("--out", mesh_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (mesh_cmd->parsed()) {
      afem::write_mesh(std::filesystem::path(mesh_out), afem::benchmark(mesh_problem).initial_mesh());
      return kExitOk;
    }
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      afem::ExperimentConfig from_file = afem::parse_config(in);
      // Flags given on the command line take precedence over the file.
      if (problem_opt->count()) from_file.problem = cfg.problem;
      if (mode_opt->count()) from_file.mode = afem::parse_mode(mode);
      if (theta_opt->count()) from_file.theta = cfg.theta;
      if (max_opt->count()) from_file.max_ndof = cfg.max_ndof;
      if (gamma_opt->count()) from_file.gamma = gamma;
      if (out_opt->count()) from_file.out = out;
      if (mesh_opt->count()) from_file.mesh = mesh_path;
      if (dump_opt->count()) from_file.dump_systems = cfg.dump_systems;
      cfg = from_file;
    } else {
      cfg.mode = afem::parse_mode(mode);
      if (gamma_opt->count()) cfg.gamma = gamma;
      if (out_opt->count()) cfg.out = out;
      if (mesh_opt->count()) cfg.mesh = mesh_path;
    }
    const afem::ExperimentResult result = afem::run_experiment(cfg, std::cout);
    for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
    return result.singular ? kExitSingular : kExitOk;
  } catch (const afem::Error& e) {
    std::cerr << "afem: " << e.what() << '\n';
    return e.code() == afem::ErrorCode::SingularMatrix ? kExitSingular : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "afem: " << e.what() << '\n';
    return kExitConfig;
  }
}
