// Acceptance suite: one PASS/FAIL line per release criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "su11/algebra.hpp"
#include "su11/coherent.hpp"
#include "su11/fockrep.hpp"
#include "su11/pho.hpp"
#include "su11/semiclassical.hpp"

using namespace su11;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vec3M random_spacelike(Rng& rng, double max_rapidity = 1.0) {
  const double rho = uniform(rng, -max_rapidity, max_rapidity);
  const double th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return {std::cosh(rho) * std::cos(th), std::cosh(rho) * std::sin(th), std::sinh(rho)};
}

Vec3M random_timelike(Rng& rng, double max_rapidity = 1.0) {
  const double rho = uniform(rng, 0.0, max_rapidity);
  const double th = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  return Vec3M{std::sinh(rho) * std::cos(th), std::sinh(rho) * std::sin(th), std::cosh(rho)} * sign;
}

double block_max(const CMatrix& m, int n) { return m.topLeftCorner(n, n).cwiseAbs().maxCoeff(); }

// distance between two states after removing the relative global phase
double phase_distance(const StateVec& a, const StateVec& b) {
  const int m = std::max(a.m_max(), b.m_max());
  const CVector va = embed(a, m).coeffs;
  const CVector vb = embed(b, m).coeffs;
  const cplx ov = vb.dot(va);
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0, 0.0);
  return (va - phase * vb).norm();
}

// Defects are measured relative to the largest entry of the products that
// enter them: entries reach (k + m_max)^2 ~ 3e4, whose spacing in double
// precision already exceeds 1e-13.
Outcome representation_exactness() {
  double worst_comm = 0.0;
  double worst_cas = 0.0;
  double worst_raw = 0.0;
  for (double k : {0.6, 0.75, 1.25, 5.0, 40.0}) {
    for (int m_max : {32, 128}) {
      const FockRep rep(k, m_max);
      const int n = rep.interior();
      const CMatrix kp(rep.k_plus());
      const CMatrix km(rep.k_minus());
      const CMatrix k3(rep.k3());
      const double scale = std::max(1.0, block_max(kp * km, n + 1));
      const CMatrix c1 = k3 * kp - kp * k3 - kp;
      const CMatrix c2 = k3 * km - km * k3 + km;
      const CMatrix c3 = kp * km - km * kp + 2.0 * k3;
      const double raw = std::max({block_max(c1, n), block_max(c2, n), block_max(c3, n)});
      worst_raw = std::max(worst_raw, raw);
      worst_comm = std::max(worst_comm, raw / scale);
      const CMatrix cas = CMatrix(rep.casimir()) - k * (k - 1.0) * CMatrix::Identity(rep.dim(), rep.dim());
      worst_cas = std::max(worst_cas, block_max(cas, n) / scale);
    }
  }
  return {worst_comm <= 1e-13 && worst_cas <= 1e-12,
          fmt::format("relative commutator defect {:.2e} (tol 1e-13, absolute {:.2e}), relative Casimir defect "
                      "{:.2e} (tol 1e-12)",
                      worst_comm, worst_raw, worst_cas)};
}

Outcome o21_structure() {
  Rng rng(20240101);
  double worst_pseudo = 0.0;
  double worst_inv = 0.0;
  for (int s = 0; s < 200; ++s) {
    const Vec3M n = s % 2 == 0 ? random_spacelike(rng) : random_timelike(rng);
    const double tau = uniform(rng, -3.0, 3.0);
    const BoostMatrix m = boost_matrix(tau, n);
    worst_pseudo = std::max(worst_pseudo, pseudo_orthogonality_defect(m.entries).cwiseAbs().maxCoeff());
    const Eigen::Matrix3d prod = boost_matrix(-tau, n).entries * m.entries - Eigen::Matrix3d::Identity();
    worst_inv = std::max(worst_inv, prod.cwiseAbs().maxCoeff());
  }
  return {worst_pseudo <= 1e-12 && worst_inv <= 1e-12,
          fmt::format("200 samples: |M eta M^T - eta| {:.2e}, |M(-tau)M(tau) - 1| {:.2e} (tol 1e-12)", worst_pseudo,
                      worst_inv)};
}

Outcome pg_equivalence() {
  Rng rng(7);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const double tau = uniform(rng, 0.0, 2.5);
    const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double k = std::array<double, 4>{0.6, 1.25, 3.0, 7.5}[static_cast<std::size_t>(s % 4)];
    const FockRep rep(k, 64);
    const GroupState g = general_cs(tau, Vec3M{std::sin(phi), -std::cos(phi), 0.0}, rep);
    const PGState p = pg_state(std::polar(std::tanh(0.5 * tau), phi), rep);
    worst = std::max(worst, phase_distance(g.state, p.state));
  }
  return {worst <= 1e-8, fmt::format("20 samples: max state distance up to phase {:.2e} (tol 1e-8)", worst)};
}

Outcome closed_form_moments() {
  Rng rng(11);
  double worst_ev1 = 0.0;
  double worst_ev2 = 0.0;
  double worst_ev3 = 0.0;
  double worst_pg_min = 0.0;
  double worst_bg_min = 0.0;
  for (int s = 0; s < 50; ++s) {
    const double k = std::array<double, 5>{0.6, 0.75, 1.25, 5.0, 12.0}[static_cast<std::size_t>(s % 5)];
    const cplx z = std::polar(uniform(rng, 0.0, 0.8), uniform(rng, 0.0, 2.0 * std::numbers::pi));
    const PGState p = pg_state(z, FockRep(k, 64));
    const FockRep& rep = *p.rep;
    for (int i = 0; i < 3; ++i) {
      const double got = expval(p.state, rep.generator(i)).real();
      worst_ev1 = std::max(worst_ev1, std::abs(got + k * p.s[i]) / std::max(1.0, k * std::abs(p.s[i])));
    }
    const Vec3M e = s % 2 == 0 ? random_spacelike(rng) : random_timelike(rng);
    const SpMatrix ek = rep.contract(e);
    const CVector ekpsi = ek * p.state.coeffs;
    const double second = ekpsi.squaredNorm();
    const double second_cf = closed_form_second_moment(k, p.s, e);
    worst_ev2 = std::max(worst_ev2, std::abs(second - second_cf) / std::max(1.0, second_cf));
    const double var_cf = closed_form_variance(k, p.s, e);
    worst_ev3 = std::max(worst_ev3, std::abs(variance(p.state, ek) - var_cf) / std::max(1.0, var_cf));

    const Vec3M u = p.transform.row_contravariant(0);
    const Vec3M v = p.transform.row_contravariant(1);
    const double prod = std::sqrt(variance(p.state, rep.contract(u)) * variance(p.state, rep.contract(v)));
    worst_pg_min = std::max(worst_pg_min, std::abs(prod - 0.5 * k) / k);

    const cplx w = std::polar(uniform(rng, 0.2, 6.0), uniform(rng, 0.0, 2.0 * std::numbers::pi));
    const BGState b = bg_state(w, FockRep(k, 64));
    const double bprod = std::sqrt(variance(b.state, b.rep->k1()) * variance(b.state, b.rep->k2()));
    const double half_k3 = 0.5 * expval(b.state, b.rep->k3()).real();
    worst_bg_min = std::max(worst_bg_min, std::abs(bprod - half_k3) / half_k3);
  }
  const bool ok = worst_ev1 <= 1e-8 && worst_ev2 <= 1e-8 && worst_ev3 <= 1e-8 && worst_pg_min <= 1e-8 &&
                  worst_bg_min <= 1e-8;
  return {ok, fmt::format("50 samples: <K> {:.1e}, <(eK)^2> {:.1e}, Var {:.1e}, PG k/2 {:.1e}, BG <K3>/2 {:.1e} "
                          "(tol 1e-8)",
                          worst_ev1, worst_ev2, worst_ev3, worst_pg_min, worst_bg_min)};
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

GeneratorPolynomial random_polynomial(Rng& rng, int max_degree) {
  using L = GeneratorPolynomial::Letter;
  const std::array<L, 3> letters{L::k1, L::k2, L::k3};
  GeneratorPolynomial out;
  const int n_terms = 1 + static_cast<int>(uniform(rng, 0.0, 3.0));
  for (int t = 0; t < n_terms; ++t) {
    GeneratorPolynomial word = GeneratorPolynomial::identity();
    const int deg = 1 + static_cast<int>(uniform(rng, 0.0, max_degree));
    for (int d = 0; d < deg; ++d) {
      word = word * GeneratorPolynomial::generator(letters[static_cast<std::size_t>(uniform(rng, 0.0, 3.0))]);
    }
    out = out + word * cplx(uniform(rng, -1.0, 1.0), 0.0);
  }
  return out;
}

Outcome expansion_convergence() {
  Rng rng(5);
  int worst_order = 0;
  double worst_dev = 0.0;
  bool all_converged = true;
  for (int s = 0; s < 10; ++s) {
    const GeneratorPolynomial a = random_polynomial(rng, 3);
    const GeneratorPolynomial b = random_polynomial(rng, 3);
    const cplx z = std::polar(uniform(rng, 0.05, 0.5), uniform(rng, 0.0, 2.0 * std::numbers::pi));
    const PGState p = pg_state(z, FockRep(20.0, 64));
    const ExpansionReport r = product_expansion(a, b, p, 10);
    if (r.converged_order < 0 || r.converged_order > 10) all_converged = false;
    worst_order = std::max(worst_order, r.converged_order);
    worst_dev = std::max(worst_dev, std::abs(r.final_sum() - r.brute_force) / std::max(1.0, std::abs(r.brute_force)));
  }

  // linear operators: one nonzero variance term
  double worst_extra = 0.0;
  double worst_lin = 0.0;
  for (int s = 0; s < 10; ++s) {
    const Vec3M e = s % 2 == 0 ? random_spacelike(rng) : random_timelike(rng);
    const double k = uniform(rng, 0.6, 20.0);
    const PGState p = pg_state(std::polar(uniform(rng, 0.0, 0.7), uniform(rng, 0.0, 6.0)), FockRep(k, 64));
    const ExpansionReport r = variance_expansion(GeneratorPolynomial::linear(e), p);
    for (std::size_t m = 2; m < r.terms.size(); ++m) worst_extra = std::max(worst_extra, std::abs(r.terms[m]));
    worst_lin = std::max(worst_lin, std::abs(r.terms[1] - r.brute_force) / std::max(1.0, std::abs(r.brute_force)));
  }

  // 1/k scaling at fixed geometry
  const GeneratorPolynomial a = GeneratorPolynomial::parse("K1*K2 + K3*K3");
  const GeneratorPolynomial b = GeneratorPolynomial::parse("K3*K1 + 0.5*K2");
  const std::vector<double> ks{5, 10, 20, 40, 80};
  const Vec3M n{std::sin(0.4), -std::cos(0.4), 0.0};
  std::vector<std::vector<double>> mags(3);
  std::vector<double> logk;
  for (double k : ks) {
    const GroupState g = general_cs(0.6, n, FockRep(k, 64));
    const ExpansionReport r = product_expansion(a, b, g, 4);
    logk.push_back(std::log(k));
    for (int m = 0; m < 3; ++m) mags[static_cast<std::size_t>(m)].push_back(std::log(r.term_magnitudes[static_cast<std::size_t>(m)]));
  }
  double worst_slope = 0.0;
  std::string slopes;
  for (int m = 0; m < 3; ++m) {
    const double slope = fit_slope(logk, mags[static_cast<std::size_t>(m)]);
    const double predicted = 4.0 - m;
    worst_slope = std::max(worst_slope, std::abs(slope - predicted));
    slopes += fmt::format("{}m={}: {:.3f}/{:.0f}", m ? ", " : "", m, slope, predicted);
  }
  const bool ok = all_converged && worst_dev <= 1e-9 && worst_extra <= 1e-12 && worst_lin <= 1e-12 &&
                  worst_slope <= 0.15;
  return {ok, fmt::format("10 pairs at k=20: max converged order {}, final deviation {:.1e} (tol 1e-9); linear "
                          "variance extra terms {:.1e}, term-1 deviation {:.1e} (tol 1e-12); slopes {} (tol 0.15)",
                          worst_order, worst_dev, worst_extra, worst_lin, slopes)};
}

Outcome energy_variance() {
  const std::vector<std::pair<std::string, std::string>> hams{
      {"K3", "K3"}, {"K1+2K3", "K1 + 2*K3"}, {"K3^2", "K3*K3"}, {"K1K2+K2K1+K3", "K1*K2 + K2*K1 + K3"},
      {"K1^2-0.3K2", "K1*K1 - 0.3*K2"}};
  double worst = 0.0;
  int idx = 0;
  for (const auto& [name, text] : hams) {
    const double k = 5.0 + 3.0 * idx;
    const PGState p = pg_state(std::polar(0.3 + 0.05 * idx, 0.7 * idx + 0.2), FockRep(k, 64));
    const SpMatrix h = GeneratorPolynomial::parse(text).materialize(*p.rep);
    const double lo = leading_order_variance(h, p);
    const double fd = energy_variance_from_dynamics(h, p, default_time_step(h, p.state));
    worst = std::max(worst, std::abs(fd - lo) / std::max(1e-300, std::abs(lo)));
    ++idx;
  }
  return {worst <= 1e-6, fmt::format("5 Hamiltonians: max relative deviation {:.2e} (tol 1e-6)", worst)};
}

Outcome fig1() {
  const pho::PhoParams p = pho::PhoParams::from_sigma_units(0.1);
  const double so = p.sigma_omega();
  const double half = 0.5 * p.hbar * p.omega;
  const pho::EnergyStats at100 = pho::bg_energy_stats_at(100.0 * so, p);
  const double zp_dev = std::abs((at100.mean - 100.0 * so) - half) / half;

  std::vector<double> lx;
  std::vector<double> ly;
  for (int i = 0; i < 40; ++i) {
    const double e = 30.0 * std::pow(10.0, i / 39.0);
    const pho::EnergyStats s = pho::bg_energy_stats_at(e * so, p);
    lx.push_back(std::log(e));
    ly.push_back(std::log(s.relative_spread()));
  }
  const double slope = fit_slope(lx, ly);

  const double pg_rel = pho::pg_energy_stats_at(300.0 * so, p).relative_spread();
  const double pg_target = 1.0 / std::sqrt(2.0 * p.k());
  const double pg_dev = std::abs(pg_rel - pg_target) / pg_target;

  // the full default sweep, for timing
  for (double hb : {0.05, 0.1, 0.2, 0.5, 1.0}) {
    const pho::PhoParams q = pho::PhoParams::from_sigma_units(hb);
    for (int i = 0; i < 60; ++i) {
      const double e = std::sqrt(2.0) * std::pow(300.0 / std::sqrt(2.0), i / 59.0) * q.sigma_omega();
      (void)pho::bg_energy_stats_at(e, q);
      (void)pho::pg_energy_stats_at(e, q);
    }
  }
  const bool ok = zp_dev <= 0.02 && std::abs(slope + 0.5) <= 0.03 && pg_dev <= 0.01;
  return {ok, fmt::format("hbar=0.1 sigma: (<H>-E)/(hbar omega/2) off by {:.2f}% (tol 2%); log-log slope {:.4f} "
                          "(target -0.5 +- 0.03); PG spread at 300 off 1/sqrt(2k) by {:.3f}% (tol 1%)",
                          100.0 * zp_dev, slope, 100.0 * pg_dev)};
}

Outcome stability() {
  Rng rng(3);
  double worst_pg = 0.0;
  double worst_bg = 0.0;
  const pho::PhoParams p{1.0, 1.0, 1.0, 1.0};
  for (int s = 0; s < 10; ++s) {
    const cplx z = std::polar(uniform(rng, 0.0, 0.8), uniform(rng, 0.0, 2.0 * std::numbers::pi));
    const double t = uniform(rng, -2.0, 2.0);
    const PGState pg = pg_state(z, FockRep(p.k(), 64));
    worst_pg = std::max(worst_pg, std::abs(1.0 - pho::evolve_stability(pg, p, t)));
    const cplx w = std::polar(uniform(rng, 0.0, 8.0), uniform(rng, 0.0, 2.0 * std::numbers::pi));
    const BGState bg = bg_state(w, FockRep(p.k(), pho::bg_truncation_hint(std::abs(w))));
    worst_bg = std::max(worst_bg, std::abs(1.0 - pho::evolve_stability(bg, p, t)));
  }
  return {worst_pg <= 1e-8 && worst_bg <= 1e-8,
          fmt::format("10 (z,t) and 10 (w,t): max |1 - fidelity| PG {:.2e}, BG {:.2e} (tol 1e-8)", worst_pg,
                      worst_bg)};
}

Outcome classical_matching() {
  const pho::PhoParams p{1.0, 1.0, 1.0, 1.0};
  const pho::ClassicalOrbit orbit{5.0, 0.4};
  const pho::MatchedParameters mp = pho::match_parameters(orbit, p);
  const PGState pg = pg_state(mp.z, FockRep(p.k(), 64));
  const BGState bg = bg_state(mp.w, FockRep(p.k(), pho::bg_truncation_hint(std::abs(mp.w))));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double t = 0.37 * i;
    const pho::Transversal cl = pho::classical_transversal(orbit, p, t);
    const pho::Transversal a = pho::transversal_expectations(pg, p, t);
    const pho::Transversal b = pho::transversal_expectations(bg, p, t);
    worst = std::max({worst, std::abs(a.k1 - cl.k1), std::abs(a.k2 - cl.k2), std::abs(b.k1 - cl.k1),
                      std::abs(b.k2 - cl.k2)});
  }
  return {worst <= 1e-7, fmt::format("E_cl=5, 10 times, PG and BG: max |<K> - classical| {:.2e} (tol 1e-7)", worst)};
}

// normalized Hermite functions by the three-term recurrence
double hermite_function(int n, double x) {
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  for (int j = 0; j < n; ++j) {
    const double next = std::sqrt(2.0 / (j + 1.0)) * x * cur - std::sqrt(j / (j + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Outcome eigenfunctions() {
  const pho::PhoParams p{1.0, 1.0, 1.0, 1.0};
  double worst_gram = 0.0;
  for (int a = 0; a <= 10; ++a) {
    for (int b = a; b <= 10; ++b) {
      worst_gram = std::max(worst_gram, std::abs(pho::overlap(p, a, b) - (a == b ? 1.0 : 0.0)));
    }
  }
  const pho::PhoParams free{1.0, 1.0, 0.0, 1.0};
  double worst_ho = 0.0;
  for (int m = 0; m <= 10; ++m) {
    for (int i = 1; i <= 60; ++i) {
      const double q = 0.1 * i;
      const double ho = std::sqrt(2.0) * hermite_function(2 * m + 1, q);
      const double got = pho::wavefunction(free, m, q);
      worst_ho = std::max(worst_ho, std::min(std::abs(got - ho), std::abs(got + ho)));
    }
  }
  return {worst_gram <= 1e-8 && worst_ho <= 1e-8,
          fmt::format("Gram m<=10 max defect {:.2e}; lambda=0 vs odd oscillator functions {:.2e} (tol 1e-8)",
                      worst_gram, worst_ho)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "representation exactness", 5.0, representation_exactness},
      {2, "O(2,1) structure", 1.0, o21_structure},
      {3, "PG construction equivalence", 10.0, pg_equivalence},
      {4, "closed-form moments", 0.0, closed_form_moments},
      {5, "expansion convergence", 0.0, expansion_convergence},
      {6, "leading-order energy variance", 0.0, energy_variance},
      {7, "energy statistics figure", 60.0, fig1},
      {8, "stability fidelity", 0.0, stability},
      {9, "classical matching", 0.0, classical_matching},
      {10, "eigenfunction suite", 0.0, eigenfunctions},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& ex) {
      out = {false, fmt::format("exception: {}", ex.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt::format("{:.2f} s", secs);
    if (c.time_limit_s > 0.0) {
      timing += fmt::format(" (limit {:.0f} s)", c.time_limit_s);
      if (secs > c.time_limit_s) out.pass = false;
    }
    fmt::print("{} [{}] {}: {}; {}\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail, timing);
    if (!out.pass) ++failures;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
