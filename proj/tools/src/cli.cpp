#include <CLI11.hpp>

#include "fracmaps/cli/experiments.hpp"
#include "fracmaps/parallel.hpp"

namespace fracmaps::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional s-energy experiments on manifold-valued maps of the line", "fracmaps"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "key = value experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  app.add_option("--threads", threads, "worker thread cap, 0 = hardware concurrency");
  app.add_option("--seed", seed, "random seed (overrides seed)");

  using Runner = RunResult (*)(const ExperimentConfig&, const std::filesystem::path&);
  const std::vector<std::tuple<std::string, std::string, Runner>> commands = {
      {"minimize", "minimize the discrete energy with the configured exterior data", run_minimize},
      {"extend", "extend a map to the half-plane; field, residuals and density profiles", run_extension},
      {"stability", "closed-form competitor energies and variations over an (s, angle) grid", run_stability},
      {"blowup", "singular set, tangent classification and Hoelder exponents", run_blowup},
      {"selftest", "invariant checks of the library", run_selftest},
  };
  Runner selected = nullptr;
  for (const auto& [name, help, runner] : commands) {
    app.add_subcommand(name, help)->fallthrough()->callback([&selected, r = runner] { selected = r; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_config;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (config_path.empty()) validate(cfg);
    if (seed) cfg.seed = *seed;
    const std::filesystem::path dir = out_dir.empty() ? cfg.output_dir : std::filesystem::path(out_dir);
    set_max_threads(threads);
    const RunResult r = selected(cfg, dir);
    out << r.summary << "\n";
    for (const auto& p : r.artifacts) out << "  wrote " << p.generic_string() << "\n";
    return r.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const NoConvergence& e) {
    err << "no convergence: " << e.what() << "\n";
    return exit_no_convergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace fracmaps::cli
