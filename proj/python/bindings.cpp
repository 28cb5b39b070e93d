#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "su11/algebra.hpp"
#include "su11/cli.hpp"
#include "su11/coherent.hpp"
#include "su11/errors.hpp"
#include "su11/fockrep.hpp"
#include "su11/pho.hpp"
#include "su11/semiclassical.hpp"
#include "su11/specialfn.hpp"

namespace py = pybind11;
using namespace su11;

namespace {

Vec3M vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
Eigen::Vector3d arr(const Vec3M& v) { return v.to_eigen(); }

py::dict report_dict(const ExpansionReport& r) {
  py::dict d;
  d["terms"] = r.terms;
  d["partial_sums"] = r.partial_sums;
  d["term_magnitudes"] = r.term_magnitudes;
  d["prefactors"] = r.prefactors;
  d["brute_force"] = r.brute_force;
  d["converged_order"] = r.converged_order;
  return d;
}

py::dict table_dict(const cli::Table& t) {
  py::dict d;
  d["name"] = t.name;
  py::dict meta;
  for (const auto& [k, v] : t.meta) meta[py::str(k)] = v;
  d["meta"] = meta;
  d["columns"] = t.columns;
  py::list rows;
  for (const auto& row : t.rows) {
    py::list r;
    for (const cli::Cell& c : row) std::visit([&](const auto& v) { r.append(v); }, c);
    rows.append(r);
  }
  d["rows"] = rows;
  return d;
}

cli::RunConfig run_config(const std::string& command, const py::kwargs& kw) {
  cli::RunConfig c;
  c.command = command;
  for (const auto& item : kw) {
    const std::string key = py::cast<std::string>(item.first);
    const py::handle v = item.second;
    if (key == "mu") c.mu = py::cast<double>(v);
    else if (key == "omega") c.omega = py::cast<double>(v);
    else if (key == "lambda_") c.lambda = py::cast<double>(v);
    else if (key == "energy_grid") c.energy_grid = py::cast<std::vector<double>>(v);
    else if (key == "hbar_list") c.hbar_list = py::cast<std::vector<double>>(v);
    else if (key == "seed") c.seed = py::cast<std::uint64_t>(v);
    else if (key == "op_a") c.op_a = py::cast<std::string>(v);
    else if (key == "op_b") c.op_b = py::cast<std::string>(v);
    else if (key == "k_list") c.k_list = py::cast<std::vector<double>>(v);
    else if (key == "z_moduli") c.z_moduli = py::cast<std::vector<double>>(v);
    else if (key == "z_phase") c.z_phase = py::cast<double>(v);
    else if (key == "max_order") c.max_order = py::cast<int>(v);
    else if (key == "corrupt_metric") c.corrupt_metric = py::cast<bool>(v);
    else throw py::key_error("unknown option '" + key + "'");
  }
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "su(1,1) coherent states and the pseudoharmonic oscillator";

  py::register_exception<ContractError>(m, "ContractError", PyExc_TypeError);
  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
  py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

  auto sf = m.def_submodule("specialfn");
  sf.def("gamma", &specialfn::gamma, py::arg("x"));
  sf.def("log_gamma", &specialfn::log_gamma, py::arg("x"));
  sf.def("bessel_i", [](double nu, double x) { return specialfn::bessel_i(nu, x); }, py::arg("nu"), py::arg("x"));
  sf.def("bessel_i_ratio", [](double nu, int d, double x) { return specialfn::bessel_i_ratio(nu, d, x); },
         py::arg("nu"), py::arg("d"), py::arg("x"), "I_{nu+d}(x) / I_nu(x)");
  sf.def("laguerre", &specialfn::laguerre, py::arg("alpha"), py::arg("m"), py::arg("x"));

  m.def("boost_matrix", [](double tau, const Eigen::Vector3d& n) { return boost_matrix(tau, vec(n)).entries; },
        py::arg("tau"), py::arg("n"), "3x3 matrix M(tau, n) acting on contravariant vectors");
  m.def(
      "generators",
      [](double k, int m_max) {
        const FockRep rep(k, m_max);
        py::dict d;
        d["K1"] = CMatrix(rep.k1());
        d["K2"] = CMatrix(rep.k2());
        d["K3"] = CMatrix(rep.k3());
        d["K+"] = CMatrix(rep.k_plus());
        d["K-"] = CMatrix(rep.k_minus());
        return d;
      },
      py::arg("k"), py::arg("m_max"), "Dense truncated generators of the weight-k representation");
  m.def(
      "operator",
      [](const std::string& text, double k, int m_max) {
        return CMatrix(GeneratorPolynomial::parse(text).materialize(FockRep(k, m_max)));
      },
      py::arg("text"), py::arg("k"), py::arg("m_max"), "Matrix of a polynomial such as \"K1*K2 + 0.5*K3\"");

  m.def(
      "pg_state", [](cplx z, double k, int m_max) { return pg_state(z, FockRep(k, m_max)).state.coeffs; },
      py::arg("z"), py::arg("k"), py::arg("m_max") = 64,
      "Coefficients of the Perelomov-Gilmore state; m_max grows until the tail is negligible");
  m.def(
      "bg_state", [](cplx w, double k, int m_max) { return bg_state(w, FockRep(k, m_max)).state.coeffs; },
      py::arg("w"), py::arg("k"), py::arg("m_max") = 64, "Coefficients of the Barut-Girardello state");
  m.def(
      "general_cs",
      [](double tau, const Eigen::Vector3d& n, double k, int m_max) {
        return general_cs(tau, vec(n), FockRep(k, m_max)).state.coeffs;
      },
      py::arg("tau"), py::arg("n"), py::arg("k"), py::arg("m_max") = 64, "exp(i tau n.K) |k,0>");
  m.def(
      "pg_vector", [](cplx z, double k) { return arr(pg_state(z, FockRep(k, 16)).s); }, py::arg("z"), py::arg("k"),
      "Contravariant unit vector s of the PG state");

  m.def(
      "product_expansion",
      [](const std::string& a, const std::string& b, double k, cplx z, int max_order) {
        const PGState p = pg_state(z, FockRep(k, 64));
        return report_dict(product_expansion(GeneratorPolynomial::parse(a), GeneratorPolynomial::parse(b), p,
                                             max_order));
      },
      py::arg("a"), py::arg("b"), py::arg("k"), py::arg("z"), py::arg("max_order") = kDefaultMaxOrder,
      "Order-by-order expansion of <AB> in the PG state z");
  m.def(
      "variance_expansion",
      [](const std::string& a, double k, cplx z, int max_order) {
        const PGState p = pg_state(z, FockRep(k, 64));
        return report_dict(variance_expansion(GeneratorPolynomial::parse(a), p, max_order));
      },
      py::arg("a"), py::arg("k"), py::arg("z"), py::arg("max_order") = kDefaultMaxOrder);

  py::class_<pho::PhoParams>(m, "PhoParams")
      .def(py::init([](double mu, double omega, double lambda, double hbar) {
             pho::PhoParams p{mu, omega, lambda, hbar};
             p.validate();
             return p;
           }),
           py::arg("mu") = 1.0, py::arg("omega") = 1.0, py::arg("lambda_") = 1.0, py::arg("hbar") = 1.0)
      .def_static("from_sigma_units", &pho::PhoParams::from_sigma_units, py::arg("hbar"), py::arg("mu") = 1.0,
                  py::arg("omega") = 1.0, py::arg("lambda_") = 1.0)
      .def_readonly("mu", &pho::PhoParams::mu)
      .def_readonly("omega", &pho::PhoParams::omega)
      .def_readonly("lambda_", &pho::PhoParams::lambda)
      .def_readonly("hbar", &pho::PhoParams::hbar)
      .def_property_readonly("alpha", &pho::PhoParams::alpha)
      .def_property_readonly("k", &pho::PhoParams::k)
      .def_property_readonly("casimir", &pho::PhoParams::casimir)
      .def_property_readonly("e_min", &pho::PhoParams::e_min)
      .def_property_readonly("sigma", &pho::PhoParams::sigma)
      .def_property_readonly("sigma_omega", &pho::PhoParams::sigma_omega)
      .def("__repr__", [](const pho::PhoParams& p) {
        return "PhoParams(mu=" + std::to_string(p.mu) + ", omega=" + std::to_string(p.omega) +
               ", lambda_=" + std::to_string(p.lambda) + ", hbar=" + std::to_string(p.hbar) + ")";
      });

  auto ph = m.def_submodule("pho");
  ph.def(
      "match_parameters",
      [](double e_cl, double phi, const pho::PhoParams& p) {
        const pho::MatchedParameters mp = pho::match_parameters({e_cl, phi}, p);
        return py::make_tuple(mp.z, mp.w);
      },
      py::arg("e_cl"), py::arg("phi"), py::arg("params"), "(z, w) of the coherent states following the orbit");
  ph.def(
      "classical_trajectory",
      [](double e_cl, double phi, const pho::PhoParams& p, double t) {
        const pho::PhasePoint x = pho::classical_trajectory({e_cl, phi}, p, t);
        return py::make_tuple(x.q, x.qdot);
      },
      py::arg("e_cl"), py::arg("phi"), py::arg("params"), py::arg("t"));
  auto stats = [](const pho::EnergyStats& s) { return py::make_tuple(s.mean, s.variance); };
  ph.def("pg_energy_stats", [stats](cplx z, const pho::PhoParams& p) { return stats(pho::pg_energy_stats(z, p)); },
         py::arg("z"), py::arg("params"), "(mean, variance) of H");
  ph.def("bg_energy_stats", [stats](cplx w, const pho::PhoParams& p) { return stats(pho::bg_energy_stats(w, p)); },
         py::arg("w"), py::arg("params"), "(mean, variance) of H");
  ph.def("pg_energy_stats_brute",
         [stats](cplx z, const pho::PhoParams& p) { return stats(pho::pg_energy_stats_brute(z, p)); }, py::arg("z"),
         py::arg("params"));
  ph.def("bg_energy_stats_brute",
         [stats](cplx w, const pho::PhoParams& p) { return stats(pho::bg_energy_stats_brute(w, p)); }, py::arg("w"),
         py::arg("params"));
  ph.def("evolve_stability_pg",
         [](cplx z, const pho::PhoParams& p, double t) {
           return pho::evolve_stability(pg_state(z, FockRep(p.k(), 64)), p, t);
         },
         py::arg("z"), py::arg("params"), py::arg("t"));
  ph.def("evolve_stability_bg",
         [](cplx w, const pho::PhoParams& p, double t) {
           return pho::evolve_stability(bg_state(w, FockRep(p.k(), pho::bg_truncation_hint(std::abs(w)))), p, t);
         },
         py::arg("w"), py::arg("params"), py::arg("t"));
  ph.def("wavefunction", &pho::wavefunction, py::arg("params"), py::arg("m"), py::arg("q"));
  ph.def("overlap", &pho::overlap, py::arg("params"), py::arg("m1"), py::arg("m2"));

  m.def(
      "run_command",
      [](const std::string& command, const py::kwargs& kw) {
        const cli::RunConfig c = run_config(command, kw);
        c.validate();
        cli::CommandResult r;
        if (command == "fig1") r = cli::cmd_fig1(c);
        else if (command == "expansion") r = cli::cmd_expansion(c);
        else if (command == "invariants") r = cli::cmd_invariants(c);
        else r = cli::cmd_pho_stats(c);
        py::list tables;
        for (const cli::Table& t : r.tables) tables.append(table_dict(t));
        return py::make_tuple(tables, r.exit_code);
      },
      py::arg("command"),
      "Run a su11kit command in-process; returns (tables, exit_code). Options mirror the command line with "
      "underscores, e.g. hbar_list=[0.1], energy_grid=[...], lambda_=1.0");
}
