#include "oscistrip/config.hpp"
#include "oscistrip/errors.hpp"
#include "oscistrip/parallel.hpp"
#include "oscistrip/studies.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

int main(int argc, char **argv) {
  using namespace oscistrip;
  CLI::App app{"Reaction-diffusion with oscillating boundary-strip terms: experiment harness"};
  std::string suite, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("suite", suite, "Experiment family")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  app.add_option("--config", config_path, "INI configuration file")->required();
  app.add_option("--out", out_dir, "Output directory (default: [run] out)");
  app.add_option("--seed", seed, "RNG seed (overrides [run] seed)");
  app.add_option("--threads", threads, "Worker threads (fallback: OSCISTRIP_THREADS)")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  if (!threads)
    if (const char *env = std::getenv("OSCISTRIP_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception &) {
        std::cerr << "OSCISTRIP_THREADS: expected a positive integer, got '" << env << "'\n";
        return 2;
      }
      if (*threads < 1) {
        std::cerr << "OSCISTRIP_THREADS: expected a positive integer, got '" << env << "'\n";
        return 2;
      }
    }
  set_thread_count(threads.value_or(1));

  try {
    ExperimentConfig cfg = load_config(config_path);
    if (seed)
      cfg.seed = *seed;
    if (!out_dir.empty())
      cfg.out = out_dir;
    const RunReport report = run_suite(cfg, suite, cfg.out, &std::cerr);
    for (const auto &c : report.checks)
      std::cout << (c.passed ? "PASS" : "FAIL") << (c.acceptance ? " [acceptance] " : " [property] ")
                << c.id << ": " << c.detail << "\n";
    std::cout << (report.passed() ? "all acceptance checks passed" : "acceptance checks failed")
              << " (" << cfg.out << "/summary.txt)\n";
    return report.passed() ? 0 : 1;
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
