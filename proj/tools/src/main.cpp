#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "kdvflat/error.hpp"
#include "kdvflat_cli/commands.hpp"
#include "kdvflat_cli/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Flatness-based boundary control for the linear KdV equation"};
  std::filesystem::path config;
  std::filesystem::path out = "out";
  int verbosity = 0;
  app.add_option("-c,--config", config, "Run configuration (JSON)")->required();
  app.add_option("-o,--out", out, "Output directory");
  app.add_flag("-v,--verbose", verbosity, "Log progress to stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kdvflat::cli::exit_config;
  }

  kdvflat::cli::RunConfig cfg;
  try {
    cfg = kdvflat::cli::load_config(config);
  } catch (const kdvflat::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kdvflat::cli::exit_config;
  }
  return kdvflat::cli::run(cfg, out, verbosity);
}
