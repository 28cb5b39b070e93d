#pragma once

// Command implementations behind the su11kit executable. Each command fills
// one or more tables that are written as CSV or JSON.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace su11::cli {

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kConfigError = 2, kIoError = 3 };

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

/// "lo:hi:n:log" or "lo:hi:n:lin".
std::vector<double> parse_grid(const std::string& text);
/// "a,b,c".
std::vector<double> parse_list(const std::string& text);
/// sqrt(2) to 300 sigma omega, 60 log-spaced points.
std::vector<double> default_energy_grid();

struct RunConfig {
  std::string command;
  double mu = 1.0;
  double omega = 1.0;
  double lambda = 1.0;
  /// Classical energies in units of sigma omega.
  std::vector<double> energy_grid = default_energy_grid();
  /// hbar values in units of sigma.
  std::vector<double> hbar_list{0.05, 0.1, 0.2, 0.5, 1.0};
  /// Empty: standard output.
  std::string output_path;
  Format format = Format::csv;
  std::uint64_t seed = 12345;

  // expansion
  std::string op_a = "K1*K2";
  std::string op_b = "K3*K1";
  std::vector<double> k_list{5.0, 20.0};
  std::vector<double> z_moduli{0.3};
  double z_phase = 0.0;
  int max_order = 12;

  // invariants
  bool corrupt_metric = false;

  /// Throws ConfigError.
  void validate() const;
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string name;
  /// key/value pairs written as '#' comments (CSV) or a config object (JSON).
  std::vector<std::pair<std::string, std::string>> meta;
  /// Unit-tagged column names such as "E_cl[sigma_omega]".
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void write_csv(const Table& t, std::ostream& out);
void write_json(const Table& t, std::ostream& out);
/// Several tables as one JSON array (standard output).
void write_json(const std::vector<Table>& tables, std::ostream& out);

struct CommandResult {
  std::vector<Table> tables;
  int exit_code = kOk;
};

CommandResult cmd_fig1(const RunConfig& cfg);
CommandResult cmd_expansion(const RunConfig& cfg);
CommandResult cmd_invariants(const RunConfig& cfg);
CommandResult cmd_pho_stats(const RunConfig& cfg);

/// Dispatches on cfg.command and writes the artifacts. Tables after the first
/// go to sibling files suffixed with the table name, e.g. fig1.csv and
/// fig1_pg.csv; on standard output they follow one another. Throws
/// ConfigError or IoError.
int run(const RunConfig& cfg, std::ostream& default_out);

}  // namespace su11::cli
