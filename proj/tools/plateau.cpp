#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "plateau/config.hpp"
#include "plateau/error.hpp"
#include "plateau/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"plateau: phase-field Plateau solver and lemma checks"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  for (const char* name : {"solve", "analyze", "lsc-test", "sweep"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides [run] out)");
    sub->add_option("--seed", seed, "seed for sampled checks (overrides [run] seed)");
    sub->add_option("--threads", threads, "OpenMP threads (default: PLATEAU_THREADS)")->check(CLI::PositiveNumber);
  }
  CLI11_PARSE(app, argc, argv);

  const std::string mode_name = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();

  if (threads == 0) {
    if (const char* env = std::getenv("PLATEAU_THREADS")) {
      threads = std::atoi(env);
      if (threads <= 0) {
        std::cerr << "PLATEAU_THREADS must be a positive integer\n";
        return 2;
      }
    }
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    plateau::RunConfig cfg = plateau::parse_config(config_path, plateau::parse_mode(mode_name));
    if (sub->count("--out")) cfg.out_dir = out_dir;
    if (sub->count("--seed")) cfg.seed = seed;
    plateau::run(cfg, std::cout);
  } catch (const plateau::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
