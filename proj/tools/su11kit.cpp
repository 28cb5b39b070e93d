#include <iostream>

#include <CLI11.hpp>

#include "su11/cli.hpp"

namespace cli = su11::cli;

int main(int argc, char** argv) {
  CLI::App app{"su(1,1) coherent states and the pseudoharmonic oscillator"};
  app.set_version_flag("--version", "su11kit 0.1.0");

  cli::RunConfig cfg;
  std::string hbar_list;
  std::string egrid;
  std::string k_list;
  std::string z_list;
  std::string format = "csv";

  app.add_option("command", cfg.command, "fig1 | expansion | invariants | pho-stats")
      ->required()
      ->check(CLI::IsMember({"fig1", "expansion", "invariants", "pho-stats"}));
  app.add_option("--mu", cfg.mu, "mass");
  app.add_option("--omega", cfg.omega, "frequency");
  app.add_option("--lambda", cfg.lambda, "strength of the 1/q^2 term");
  app.add_option("--hbar-list", hbar_list, "hbar values in units of sigma, a,b,c");
  app.add_option("--egrid", egrid, "classical energies in units of sigma omega, lo:hi:n:log|lin");
  app.add_option("--out", cfg.output_path, "output file (default: standard output)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", cfg.seed, "seed for the randomized invariant suites");
  app.add_option("--op-a", cfg.op_a, "expansion: left operator, e.g. \"K1*K2 + 0.5*K3\"");
  app.add_option("--op-b", cfg.op_b, "expansion: right operator");
  app.add_option("--k-list", k_list, "expansion: weights k");
  app.add_option("--z-list", z_list, "expansion: moduli |z| of the coherent parameter");
  app.add_option("--z-phase", cfg.z_phase, "expansion: arg z in radians");
  app.add_option("--max-order", cfg.max_order, "expansion: highest order");
  app.add_flag("--corrupt-metric", cfg.corrupt_metric, "invariants: self-test with a Euclidean metric");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kConfigError;
  }

  try {
    if (!hbar_list.empty()) cfg.hbar_list = cli::parse_list(hbar_list);
    if (!egrid.empty()) cfg.energy_grid = cli::parse_grid(egrid);
    if (!k_list.empty()) cfg.k_list = cli::parse_list(k_list);
    if (!z_list.empty()) cfg.z_moduli = cli::parse_list(z_list);
    cfg.format = format == "json" ? cli::Format::json : cli::Format::csv;
    return cli::run(cfg, std::cout);
  } catch (const cli::ConfigError& e) {
    std::cerr << "su11kit: configuration error: " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const cli::IoError& e) {
    std::cerr << "su11kit: I/O error: " << e.what() << '\n';
    return cli::kIoError;
  } catch (const std::domain_error& e) {
    std::cerr << "su11kit: parameter out of range: " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "su11kit: computation failed: " << e.what() << '\n';
    return cli::kInvariantFailure;
  }
}
