#include <iostream>

#include <CLI11.hpp>

#include "ngl/config.hpp"
#include "ngl/parallel.hpp"
#include "ngl/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ngl: nodal length, growth and Carleman experiments on conformal tori"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string kernel;
  double radius = 0.0;
  int samples = 0;

  for (const auto& name : ngl::pipeline::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: out)");
    sub->add_option("--seed", seed, "overrides the config seed");
    sub->add_option("--threads", threads, "worker threads (1 = bit-reproducible)")->check(CLI::Range(1, 256));
    if (name == "crofton") {
      sub->add_option("--kernel", kernel, "disk or circle");
      sub->add_option("--r", radius, "probe radius");
      sub->add_option("--samples", samples, "Monte Carlo samples");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    auto config = ngl::load_config(config_path);
    auto* sub = app.get_subcommands().front();
    if (sub->count("--seed")) config.seed = seed;
    if (command == "crofton") {
      if (sub->count("--kernel")) config.crofton_kernel = kernel;
      if (sub->count("--r")) config.crofton_r = radius;
      if (sub->count("--samples")) config.crofton_samples = samples;
      ngl::validate(config);
    }
    ngl::set_thread_count(threads);
    ngl::pipeline::run_command(command, config, out_dir.empty() ? "out" : out_dir, std::cout);
  } catch (const ngl::ValidationError& e) {
    std::cerr << "ngl: " << e.what() << "\n";
    return 2;
  } catch (const ngl::NumericalError& e) {
    std::cerr << "ngl: numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
