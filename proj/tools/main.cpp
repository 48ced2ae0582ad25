#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nlslab/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"radial NLS laboratory: ground states, functionals, evolution, campaigns"};
  std::string config_path;
  std::string out_dir;
  std::size_t threads = 0;
  bool verbose = false;
  app.add_option("--config", config_path, "path to the run configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--threads", threads, "worker pool size (0 = available parallelism)");
  app.add_flag("--verbose", verbose, "chatty progress output");
  CLI11_PARSE(app, argc, argv);

  nlslab::RunConfig cfg;
  try {
    cfg = nlslab::parse_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (threads != 0) cfg.threads = threads;
  if (verbose) cfg.verbosity = 1;

  const int status = nlslab::execute(cfg);
  if (cfg.verbosity > 0)
    std::cerr << nlslab::subcommand_name(cfg.subcommand) << " finished with status " << status
              << "\n";
  return status;
}
