// Batch front end: scalarfield <command> [--config FILE] [--set key=value ...]

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "scalarfield/cli_io.hpp"
#include "scalarfield/errors.hpp"

int main(int argc, char** argv) {
  using scalarfield::RunConfig;

  CLI::App app{"Solver for -Lu = f(u) on R^N: minimax, Pohozaev and profile diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file, out_dir;
  std::vector<std::string> assignments;
  app.add_option("-c,--config", config_file, "config file (key = value, [section] headers)");
  app.add_option("-s,--set", assignments, "override, e.g. --set grid.h=0.1");
  app.add_option("-o,--out", out_dir, "output directory (output.dir)");

  // per-command flags map onto config keys
  std::string cls, input;
  double R = -1.0;
  int k = -1;
  auto* c_check = app.add_subcommand("check-nonlinearity", "sampled Berestycki-Lions checks and the f1/f2 split");
  auto* c_radial = app.add_subcommand("solve-radial", "lambda-continuation mountain pass, radial class");
  auto* c_excited = app.add_subcommand("solve-radial-excited", "symmetric minimax over odd disk maps");
  c_excited->add_option("--k", k, "disk dimension (1 or 2)");
  auto* c_nonradial = app.add_subcommand("solve-nonradial", "tau-antisymmetric continuation plus c_mp comparison");
  c_nonradial->add_option("--class", cls, "o1tau or o2tau")->check(CLI::IsMember({"o1tau", "o2tau"}));
  auto* c_maps = app.add_subcommand("testmaps", "U_k membership, pi_k and the lower-bound integral");
  c_maps->add_option("--k", k, "k >= 1");
  c_maps->add_option("--R", R, "radius; 0 searches R(k)");
  auto* c_dec = app.add_subcommand("decompose", "profile decomposition of a stored sequence");
  c_dec->add_option("--input", input, "directory with manifest.json")->required();
  auto* c_oracle = app.add_subcommand("oracle", "radial shooting oracle");
  c_oracle->add_option("--k", k, "k-th radial bound state, 1 = ground state");
  auto* c_compare = app.add_subcommand("compare", "minimax vs Pohozaev minimization vs oracle");
  auto* c_verify = app.add_subcommand("verify", "classify a stored Field CSV");
  c_verify->add_option("--input", input, "Field CSV")->required();
  (void)c_check;
  (void)c_radial;
  (void)c_compare;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    if (rc == 0) return 0;
    std::cerr << app.help();
    return 2;
  }

  try {
    RunConfig config = config_file.empty() ? RunConfig::defaults() : RunConfig::load(config_file);
    for (const auto& a : assignments) config.set_assignment(a);
    config.set("task.command", app.get_subcommands().front()->get_name());
    if (!out_dir.empty()) config.set("output.dir", out_dir);
    if (!cls.empty()) config.set("problem.class", cls);
    if (!input.empty()) config.set("task.input", input);
    if (k >= 0) config.set("task.k", std::to_string(k));
    if (R >= 0.0) config.set("task.R", std::to_string(R));
    const int rc = scalarfield::run(config);
    std::cout << "exit " << rc << ", artifacts in " << config.output_dir().string() << '\n';
    return rc;
  } catch (const scalarfield::Error& e) {
    std::cerr << "config error: " << e.what() << '\n' << app.help();
    return 2;
  }
}
