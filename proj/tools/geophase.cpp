#include <iostream>

#include "CLI11.hpp"
#include "geophase/cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Geometric-phase simulator for degenerate entangled spin pairs"};
  geophase::cli::CliOptions options;
  std::string out_path;
  std::string plot_path;
  app.add_option("--config", options.config_path, "JSON run configuration")->required();
  app.add_option("--out", out_path, "CSV output path (overrides output_path)");
  app.add_option("--plot", plot_path, "gnuplot-compatible column output path");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (!out_path.empty()) options.out_path = out_path;
  if (!plot_path.empty()) options.plot_path = plot_path;
  return geophase::cli::run(options, std::cout, std::cerr);
}
