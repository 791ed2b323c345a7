#include "nanorod/harness.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iostream>

int main(int argc, char** argv) {
  using namespace nanorod;
  CLI::App app{"Thin-rod plasmon resonance solver"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string config, out;
  int threads = 0, resolution = -1, which = 1;
  bool dump = false, vtk = false;
  app.add_option("--config", config, "JSON scenario file");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  app.add_option("--resolution", resolution, "resolution level 0..3")->check(CLI::Range(0, 3));
  app.add_flag("--dump-operators", dump, "write S and K matrices as text (solve)");
  app.add_flag("--vtk", vtk, "also write field slices as VTK");

  auto* fig = app.add_subcommand("figure", "reproduce a figure scenario");
  fig->add_option("--which", which, "1 = straight rod, 2 = curved rod")->check(CLI::Range(1, 2));
  for (const char* name : {"mesh", "spectrum", "solve", "scan", "scaling", "asymptotic-compare"})
    app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Scenario sc;
  try {
    json cfg = config.empty() ? json::object() : load_config(config);
    apply_env_overrides(cfg);
    const std::string sub = app.get_subcommands().front()->get_name();
    cfg["mode"] = sub == "figure" ? (which == 1 ? "figure1" : "figure2") : sub;
    sc = scenario_from_json(cfg);
    if (resolution >= 0) apply_resolution(sc, resolution);
    if (!out.empty()) sc.out_dir = out;
    if (dump) sc.dump_operators = true;
    if (vtk) sc.vtk = true;
    if ((sc.mode == "scan" || sc.mode == "scaling") && sc.sweep.values.empty())
      throw ConfigError("sweep.values must not be empty");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (threads > 0) omp_set_num_threads(threads);
  return run(sc, std::cerr);
}
