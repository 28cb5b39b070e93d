#include "su11/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "su11/errors.hpp"
#include "su11/pho.hpp"
#include "su11/semiclassical.hpp"

namespace su11::cli {

namespace {

constexpr double kEminSigmaOmega = 1.4142135623730951;  // sqrt(2)

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  }
  if (used != s.size() || !std::isfinite(v)) throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += fmt::format("{}{}", i ? "," : "", v[i]);
  return out;
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(fmt::format("{} must be a positive number, got {}", name, v));
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(to_double(item, "list"));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 4) throw ConfigError(fmt::format("grid '{}': expected lo:hi:n:log or lo:hi:n:lin", text));
  const double lo = to_double(parts[0], "grid lower end");
  const double hi = to_double(parts[1], "grid upper end");
  const double nd = to_double(parts[2], "grid point count");
  if (nd < 1.0 || nd != std::floor(nd) || nd > 1e6) throw ConfigError(fmt::format("grid '{}': bad point count", text));
  const int n = static_cast<int>(nd);
  const std::string& kind = parts[3];
  if (kind != "log" && kind != "lin") throw ConfigError(fmt::format("grid '{}': spacing must be log or lin", text));
  if (n > 1 && !(hi > lo)) throw ConfigError(fmt::format("grid '{}': upper end must exceed lower end", text));
  if (kind == "log" && !(lo > 0.0)) throw ConfigError(fmt::format("grid '{}': log spacing needs lo > 0", text));
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(kind == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  out.front() = lo;
  if (n > 1) out.back() = hi;
  return out;
}

std::vector<double> default_energy_grid() { return parse_grid(fmt::format("{}:300:60:log", kEminSigmaOmega)); }

void RunConfig::validate() const {
  static const std::vector<std::string> commands{"fig1", "expansion", "invariants", "pho-stats"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
    throw ConfigError(fmt::format("unknown command '{}' (fig1, expansion, invariants, pho-stats)", command));
  }
  check_positive(mu, "--mu");
  check_positive(omega, "--omega");
  check_positive(lambda, "--lambda");
  if (hbar_list.empty()) throw ConfigError("--hbar-list is empty");
  for (double h : hbar_list) check_positive(h, "--hbar-list entry");
  if (energy_grid.empty()) throw ConfigError("energy grid is empty");
  for (std::size_t i = 0; i < energy_grid.size(); ++i) {
    const double e = energy_grid[i];
    if (!(e >= kEminSigmaOmega * (1.0 - 1e-12))) {
      throw ConfigError(fmt::format(
          "energy grid value {} is below the classical minimum sqrt(2) = {:.6f} (units sigma omega)", e,
          kEminSigmaOmega));
    }
    if (i > 0 && !(e > energy_grid[i - 1])) throw ConfigError("energy grid must be strictly increasing");
  }
  if (k_list.empty()) throw ConfigError("--k-list is empty");
  for (double k : k_list) check_positive(k, "--k-list entry");
  if (z_moduli.empty()) throw ConfigError("--z-list is empty");
  for (double r : z_moduli) {
    if (!(r >= 0.0 && r < 0.95)) throw ConfigError(fmt::format("--z-list entry {} outside [0, 0.95)", r));
  }
  if (!std::isfinite(z_phase)) throw ConfigError("--z-phase must be finite");
  if (max_order < 0 || max_order > 40) throw ConfigError("--max-order must lie in [0, 40]");
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return fmt::format("{}", *d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return fmt::format("{}", *i);
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

nlohmann::ordered_json table_json(const Table& t) {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.meta) meta[k] = v;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const Cell& c : row) {
      std::visit([&](const auto& v) { r.push_back(v); }, c);
    }
    rows.push_back(std::move(r));
  }
  nlohmann::ordered_json out;
  out["table"] = t.name;
  out["config"] = std::move(meta);
  out["columns"] = t.columns;
  out["rows"] = std::move(rows);
  return out;
}

}  // namespace

void write_csv(const Table& t, std::ostream& out) {
  out << "# su11kit " << t.name << '\n';
  for (const auto& [k, v] : t.meta) out << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

void write_json(const Table& t, std::ostream& out) { out << table_json(t).dump(1) << '\n'; }

void write_json(const std::vector<Table>& tables, std::ostream& out) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Table& t : tables) arr.push_back(table_json(t));
  out << arr.dump(1) << '\n';
}

namespace {

std::vector<std::pair<std::string, std::string>> base_meta(const RunConfig& cfg) {
  return {{"command", cfg.command},
          {"mu", fmt::format("{}", cfg.mu)},
          {"omega", fmt::format("{}", cfg.omega)},
          {"lambda", fmt::format("{}", cfg.lambda)},
          {"hbar_list[sigma]", join(cfg.hbar_list)},
          {"energy_grid[sigma_omega]", join(cfg.energy_grid)},
          {"seed", fmt::format("{}", cfg.seed)},
          {"units", "sigma = sqrt(mu lambda), sigma_omega = sigma * omega"}};
}

pho::PhoParams params_for(const RunConfig& cfg, double hbar_sigma) {
  return pho::PhoParams::from_sigma_units(hbar_sigma, cfg.mu, cfg.omega, cfg.lambda);
}

}  // namespace

CommandResult cmd_fig1(const RunConfig& cfg) {
  cfg.validate();
  Table bg{"fig1", base_meta(cfg),
           {"hbar[sigma]", "E_cl[sigma_omega]", "k[1]", "abs_w[1]", "H_BG_minus_E_cl[sigma_omega]",
            "dH_BG_over_H_BG[1]"},
           {}};
  bg.meta.emplace_back("family", "Barut-Girardello, matched w");
  Table pg{"pg", base_meta(cfg),
           {"hbar[sigma]", "E_cl[sigma_omega]", "k[1]", "abs_z[1]", "H_PG_minus_E_cl[sigma_omega]",
            "dH_PG_over_H_PG[1]"},
           {}};
  pg.meta.emplace_back("family", "Perelomov-Gilmore, matched z");
  for (double hb : cfg.hbar_list) {
    const pho::PhoParams p = params_for(cfg, hb);
    const double so = p.sigma_omega();
    for (double e : cfg.energy_grid) {
      const double e_cl = std::max(e * so, p.e_min());
      const pho::MatchedParameters mp = pho::match_parameters({e_cl, 0.0}, p);
      const pho::EnergyStats b = pho::bg_energy_stats(mp.w, p);
      const pho::EnergyStats g = pho::pg_energy_stats_at(e_cl, p);
      bg.rows.push_back({hb, e, p.k(), std::abs(mp.w), (b.mean - e_cl) / so, b.relative_spread()});
      pg.rows.push_back({hb, e, p.k(), std::abs(mp.z), (g.mean - e_cl) / so, g.relative_spread()});
    }
  }
  return {{std::move(bg), std::move(pg)}, kOk};
}

CommandResult cmd_expansion(const RunConfig& cfg) {
  cfg.validate();
  GeneratorPolynomial a;
  GeneratorPolynomial b;
  try {
    a = GeneratorPolynomial::parse(cfg.op_a);
    b = GeneratorPolynomial::parse(cfg.op_b);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  Table t{"expansion",
          {{"command", cfg.command},
           {"op_a", a.to_string()},
           {"op_b", b.to_string()},
           {"k_list", join(cfg.k_list)},
           {"z_moduli", join(cfg.z_moduli)},
           {"z_phase[rad]", fmt::format("{}", cfg.z_phase)},
           {"max_order", fmt::format("{}", cfg.max_order)},
           {"state", "Perelomov-Gilmore, z = |z| exp(i z_phase)"},
           {"tolerance", "1e-9 relative to max(1, |<AB>|)"}},
          {"k[1]", "abs_z[1]", "order[1]", "prefactor[1]", "term_re[1]", "term_im[1]", "term_abs[1]",
           "partial_re[1]", "partial_im[1]", "brute_re[1]", "brute_im[1]", "converged_order[1]"},
          {}};
  for (double k : cfg.k_list) {
    for (double r : cfg.z_moduli) {
      const PGState p = pg_state(std::polar(r, cfg.z_phase), FockRep(k, 64));
      const ExpansionReport rep = product_expansion(a, b, p, cfg.max_order);
      for (std::size_t m = 0; m < rep.terms.size(); ++m) {
        t.rows.push_back({k, r, static_cast<std::int64_t>(m), rep.prefactors[m], rep.terms[m].real(),
                          rep.terms[m].imag(), rep.term_magnitudes[m], rep.partial_sums[m].real(),
                          rep.partial_sums[m].imag(), rep.brute_force.real(), rep.brute_force.imag(),
                          static_cast<std::int64_t>(rep.converged_order)});
      }
    }
  }
  return {{std::move(t)}, kOk};
}

CommandResult cmd_pho_stats(const RunConfig& cfg) {
  cfg.validate();
  Table t{"pho-stats", base_meta(cfg),
          {"hbar[sigma]", "E_cl[sigma_omega]", "k[1]", "casimir[1]", "abs_z[1]", "abs_w[1]", "H_PG[sigma_omega]",
           "dH_PG[sigma_omega]", "H_BG[sigma_omega]", "dH_BG[sigma_omega]", "PG_brute_dev[1]",
           "BG_brute_dev[1]"},
          {}};
  t.meta.emplace_back("brute_dev", "max relative deviation of mean and variance from truncated Fock evaluation");
  for (double hb : cfg.hbar_list) {
    const pho::PhoParams p = params_for(cfg, hb);
    const double so = p.sigma_omega();
    for (double e : cfg.energy_grid) {
      const double e_cl = std::max(e * so, p.e_min());
      const pho::MatchedParameters mp = pho::match_parameters({e_cl, 0.0}, p);
      const pho::EnergyStats g = pho::pg_energy_stats(mp.z, p);
      const pho::EnergyStats b = pho::bg_energy_stats(mp.w, p);
      auto dev = [](const pho::EnergyStats& x, const pho::EnergyStats& y) {
        return std::max(std::abs(x.mean - y.mean) / std::abs(y.mean),
                        std::abs(x.variance - y.variance) / std::max(std::abs(y.variance), 1e-12 * y.mean * y.mean));
      };
      const double g_dev = dev(pho::pg_energy_stats_brute(mp.z, p), g);
      const double b_dev = dev(pho::bg_energy_stats_brute(mp.w, p), b);
      t.rows.push_back({hb, e, p.k(), p.casimir(), std::abs(mp.z), std::abs(mp.w), g.mean / so, g.spread() / so,
                        b.mean / so, b.spread() / so, g_dev, b_dev});
    }
  }
  return {{std::move(t)}, kOk};
}

namespace {

std::string sibling_path(const std::string& base, const std::string& suffix) {
  const std::filesystem::path p(base);
  std::filesystem::path out = p.parent_path() / (p.stem().string() + "_" + suffix + p.extension().string());
  return out.string();
}

void write_file(const std::string& path, const Table& t, Format f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  if (f == Format::csv) {
    write_csv(t, out);
  } else {
    write_json(t, out);
  }
  out.flush();
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& default_out) {
  cfg.validate();
  CommandResult res;
  if (cfg.command == "fig1") {
    res = cmd_fig1(cfg);
  } else if (cfg.command == "expansion") {
    res = cmd_expansion(cfg);
  } else if (cfg.command == "invariants") {
    res = cmd_invariants(cfg);
  } else {
    res = cmd_pho_stats(cfg);
  }

  if (cfg.output_path.empty()) {
    if (cfg.format == Format::json) {
      if (res.tables.size() == 1) {
        write_json(res.tables.front(), default_out);
      } else {
        write_json(res.tables, default_out);
      }
    } else {
      for (std::size_t i = 0; i < res.tables.size(); ++i) {
        if (i) default_out << '\n';
        write_csv(res.tables[i], default_out);
      }
    }
    default_out.flush();
    if (!default_out) throw IoError("write to standard output failed");
  } else {
    for (std::size_t i = 0; i < res.tables.size(); ++i) {
      const std::string path = i == 0 ? cfg.output_path : sibling_path(cfg.output_path, res.tables[i].name);
      write_file(path, res.tables[i], cfg.format);
    }
  }
  return res.exit_code;
}

}  // namespace su11::cli
