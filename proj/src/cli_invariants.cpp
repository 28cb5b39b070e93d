// The invariants command: randomized property suites over every module.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "su11/algebra.hpp"
#include "su11/cli.hpp"
#include "su11/coherent.hpp"
#include "su11/fockrep.hpp"
#include "su11/pho.hpp"
#include "su11/semiclassical.hpp"
#include "su11/specialfn.hpp"

namespace su11::cli {

namespace {

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

Vec3M random_axis(Rng& rng, int s) { return s % 2 == 0 ? random_spacelike(rng) : random_timelike(rng); }

cplx random_disc(Rng& rng, double r_max) {
  return std::polar(uniform(rng, 0.0, r_max), uniform(rng, 0.0, 2.0 * std::numbers::pi));
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

struct Suite {
  std::string module;
  std::string name;
  double tolerance;
  bool lower_bound;  // pass when observed >= tolerance
  std::function<double(Rng&)> worst;
};

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

// sum of c (w + reversed w) / 2 over random words w in K1, K2, K3
GeneratorPolynomial random_hermitian_polynomial(Rng& rng, int max_degree) {
  using L = GeneratorPolynomial::Letter;
  const std::array<L, 3> letters{L::k1, L::k2, L::k3};
  GeneratorPolynomial out;
  const int n_terms = 1 + static_cast<int>(uniform(rng, 0.0, 3.0));
  for (int t = 0; t < n_terms; ++t) {
    const int deg = 1 + static_cast<int>(uniform(rng, 0.0, max_degree));
    std::vector<L> word;
    for (int d = 0; d < deg; ++d) word.push_back(letters[static_cast<std::size_t>(uniform(rng, 0.0, 3.0))]);
    GeneratorPolynomial fwd = GeneratorPolynomial::identity();
    GeneratorPolynomial rev = GeneratorPolynomial::identity();
    for (std::size_t d = 0; d < word.size(); ++d) {
      fwd = fwd * GeneratorPolynomial::generator(word[d]);
      rev = rev * GeneratorPolynomial::generator(word[word.size() - 1 - d]);
    }
    out = out + (fwd + rev) * cplx(0.5 * uniform(rng, -1.0, 1.0), 0.0);
  }
  return out;
}

std::vector<Suite> suites(bool corrupt_metric) {
  const Eigen::Matrix3d metric =
      corrupt_metric ? Eigen::Matrix3d::Identity() : Eigen::Matrix3d(Eigen::Vector3d(1, 1, -1).asDiagonal());
  std::vector<Suite> out;

  out.push_back({"specialfn", "gamma functional equation", 1e-12, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int i = 0; i < 200; ++i) {
                     const double x = uniform(rng, 1e-3, 100.0);
                     w = std::max(w, std::abs(specialfn::gamma(x + 1.0) / (x * specialfn::gamma(x)) - 1.0));
                   }
                   return w;
                 }});
  out.push_back({"specialfn", "Laguerre three-term recurrence", 1e-10, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int i = 0; i < 100; ++i) {
                     const double a = uniform(rng, -0.9, 20.0);
                     const int m = 1 + static_cast<int>(uniform(rng, 0.0, 49.0));
                     const double x = uniform(rng, 0.0, 50.0);
                     const double lhs = (m + 1.0) * specialfn::laguerre(a, m + 1, x);
                     const double t1 = (2.0 * m + 1.0 + a - x) * specialfn::laguerre(a, m, x);
                     const double t2 = (m + a) * specialfn::laguerre(a, m - 1, x);
                     const double scale = std::max({std::abs(lhs), std::abs(t1), std::abs(t2), 1e-300});
                     w = std::max(w, std::abs(lhs - (t1 - t2)) / scale);
                   }
                   return w;
                 }});
  out.push_back({"specialfn", "Bessel I recurrence", 1e-10, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int i = 0; i < 100; ++i) {
                     const double nu = uniform(rng, 1.0, 60.0);
                     const double x = uniform(rng, 0.1, 80.0);
                     const double lhs = specialfn::bessel_i(nu - 1.0, x) - specialfn::bessel_i(nu + 1.0, x);
                     const double rhs = 2.0 * nu / x * specialfn::bessel_i(nu, x);
                     w = std::max(w, std::abs(lhs - rhs) / std::abs(rhs));
                   }
                   return w;
                 }});

  out.push_back({"algebra", "pseudo-orthogonality M eta M^T = eta", 1e-12, false, [metric](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 200; ++s) {
                     const BoostMatrix m = boost_matrix(uniform(rng, -3.0, 3.0), random_axis(rng, s));
                     w = std::max(w, pseudo_orthogonality_defect(m.entries, metric).cwiseAbs().maxCoeff());
                   }
                   return w;
                 }});
  out.push_back({"algebra", "inverse M(-tau) M(tau) = 1", 1e-12, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 200; ++s) {
                     const Vec3M n = random_axis(rng, s);
                     const double tau = uniform(rng, -3.0, 3.0);
                     const Eigen::Matrix3d d =
                         boost_matrix(-tau, n).entries * boost_matrix(tau, n).entries - Eigen::Matrix3d::Identity();
                     w = std::max(w, d.cwiseAbs().maxCoeff());
                   }
                   return w;
                 }});
  out.push_back({"algebra", "group property (relative)", 1e-12, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 100; ++s) {
                     const Vec3M n = random_axis(rng, s);
                     const double t1 = uniform(rng, -1.5, 1.5);
                     const double t2 = uniform(rng, -1.5, 1.5);
                     const Eigen::Matrix3d want = boost_matrix(t1 + t2, n).entries;
                     const Eigen::Matrix3d got = boost_matrix(t1, n).entries * boost_matrix(t2, n).entries;
                     w = std::max(w, (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff());
                   }
                   return w;
                 }});
  out.push_back({"algebra", "det M = 1", 1e-12, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 100; ++s) {
                     w = std::max(w, std::abs(boost_matrix(uniform(rng, -1.5, 1.5), random_axis(rng, s))
                                                  .entries.determinant() -
                                              1.0));
                   }
                   return w;
                 }});

  out.push_back({"fockrep", "commutation relations (relative, interior block)", 1e-13, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 6; ++s) {
                     const double k = s < 3 ? uniform(rng, 0.51, 2.0) : uniform(rng, 2.0, 40.0);
                     const FockRep rep(k, s % 2 == 0 ? 32 : 128);
                     const int n = rep.interior();
                     const CMatrix kp(rep.k_plus());
                     const CMatrix km(rep.k_minus());
                     const CMatrix k3(rep.k3());
                     const double scale = std::max(1.0, (kp * km).topLeftCorner(n + 1, n + 1).cwiseAbs().maxCoeff());
                     const CMatrix c1 = k3 * kp - kp * k3 - kp;
                     const CMatrix c2 = kp * km - km * kp + 2.0 * k3;
                     const CMatrix c3 = CMatrix(rep.casimir()) - k * (k - 1.0) * CMatrix::Identity(rep.dim(), rep.dim());
                     for (const CMatrix* c : {&c1, &c2, &c3}) {
                       w = std::max(w, c->topLeftCorner(n, n).cwiseAbs().maxCoeff() / scale);
                     }
                   }
                   return w;
                 }});
  out.push_back({"fockrep", "hermiticity of K1, K2, K3", 1e-14, false, [](Rng& rng) {
                   const FockRep rep(uniform(rng, 0.51, 20.0), 64);
                   double w = 0.0;
                   for (int i = 0; i < 3; ++i) {
                     const SpMatrix& g = rep.generator(i);
                     w = std::max(w, (g - SpMatrix(g.adjoint())).norm() / g.norm());
                   }
                   return w;
                 }});
  out.push_back({"fockrep", "Casimir k(k-1) for the oscillator mapping", 1e-12, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 50; ++s) {
                     const pho::PhoParams p{uniform(rng, 0.1, 5.0), uniform(rng, 0.1, 5.0), uniform(rng, 0.0, 5.0),
                                            uniform(rng, 0.05, 2.0)};
                     const double k = p.k();
                     w = std::max(w, rel(k * (k - 1.0), p.casimir()));
                   }
                   return w;
                 }});

  out.push_back({"coherent", "PG expectation <K^i> = -k s^i", 1e-9, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 50; ++s) {
                     const double k = uniform(rng, 0.55, 12.0);
                     const PGState p = pg_state(random_disc(rng, 0.8), FockRep(k, 64));
                     for (int i = 0; i < 3; ++i) {
                       const double got = expval(p.state, p.rep->generator(i)).real();
                       w = std::max(w, std::abs(got + k * p.s[i]) / std::max(1.0, k * std::abs(p.s[i])));
                     }
                   }
                   return w;
                 }});
  out.push_back({"coherent", "PG second moment <(e.K)^2>", 1e-8, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 20; ++s) {
                     const double k = uniform(rng, 0.55, 12.0);
                     const PGState p = pg_state(random_disc(rng, 0.8), FockRep(k, 64));
                     const Vec3M e = random_axis(rng, s);
                     const double got = (p.rep->contract(e) * p.state.coeffs).squaredNorm();
                     w = std::max(w, rel(got, closed_form_second_moment(k, p.s, e)));
                   }
                   return w;
                 }});
  out.push_back({"coherent", "BG eigen-equation residual", 1e-9, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 20; ++s) {
                     const cplx bw = random_disc(rng, 10.0);
                     const BGState b =
                         bg_state(bw, FockRep(uniform(rng, 0.55, 12.0), pho::bg_truncation_hint(std::abs(bw))));
                     w = std::max(w, b.eigen_residual());
                   }
                   return w;
                 }});
  out.push_back({"coherent", "BG states are not PG (min timelike residual)", 0.05, true, [](Rng& rng) {
                   double w = std::numeric_limits<double>::infinity();
                   for (int s = 0; s < 2; ++s) {
                     // for |w| << k the BG state agrees with a PG state to second order
                     const double r = uniform(rng, 2.0, 5.0);
                     const BGState b = bg_state(std::polar(r, uniform(rng, 0.0, 2.0 * std::numbers::pi)),
                                                FockRep(uniform(rng, 0.6, r), 64));
                     w = std::min(w, std::sqrt(no_real_timelike_eigen_check(b, 31, 36).min_variance));
                   }
                   return w;
                 }});

  out.push_back({"semiclassical", "product expansion converges to <AB>", 1e-9, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 3; ++s) {
                     const GeneratorPolynomial a = random_polynomial(rng, 3);
                     const GeneratorPolynomial b = random_polynomial(rng, 3);
                     const PGState p = pg_state(random_disc(rng, 0.5), FockRep(20.0, 64));
                     const ExpansionReport r = product_expansion(a, b, p, 10);
                     w = std::max(w, std::abs(r.final_sum() - r.brute_force) / std::max(1.0, std::abs(r.brute_force)));
                   }
                   return w;
                 }});
  out.push_back({"semiclassical", "ordering: (AB) - (BA) = <[A,B]>", 1e-9, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 3; ++s) {
                     const GeneratorPolynomial a = random_polynomial(rng, 2);
                     const GeneratorPolynomial b = random_polynomial(rng, 2);
                     const PGState p = pg_state(random_disc(rng, 0.5), FockRep(10.0, 64));
                     const cplx ab = product_expansion(a, b, p, 10).final_sum();
                     const cplx ba = product_expansion(b, a, p, 10).final_sum();
                     const FockRep wide(10.0, 2 * p.rep->m_max());
                     const StateVec psi = embed(p.state, wide.m_max());
                     const cplx comm = expval(psi, SpMatrix((a * b - b * a).materialize(wide)));
                     w = std::max(w, std::abs((ab - ba) - comm) / std::max(1.0, std::abs(comm)));
                   }
                   return w;
                 }});
  out.push_back({"semiclassical", "linear operators: one variance term", 1e-12, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 6; ++s) {
                     const PGState p = pg_state(random_disc(rng, 0.7), FockRep(uniform(rng, 0.6, 20.0), 64));
                     const ExpansionReport r = variance_expansion(GeneratorPolynomial::linear(random_axis(rng, s)), p);
                     for (std::size_t m = 2; m < r.terms.size(); ++m) w = std::max(w, std::abs(r.terms[m]));
                     w = std::max(w, std::abs(r.terms[1] - r.brute_force) / std::max(1.0, std::abs(r.brute_force)));
                   }
                   return w;
                 }});
  out.push_back({"semiclassical", "variance terms non-negative (min term)", -1e-14, true, [](Rng& rng) {
                   double w = std::numeric_limits<double>::infinity();
                   for (int s = 0; s < 3; ++s) {
                     const GeneratorPolynomial a = random_hermitian_polynomial(rng, 3);
                     const PGState p = pg_state(random_disc(rng, 0.5), FockRep(8.0, 64));
                     const ExpansionReport r = variance_expansion(a, p, 8);
                     for (std::size_t m = 1; m < r.terms.size(); ++m) {
                       w = std::min(w, r.terms[m].real() / std::max(1.0, std::abs(r.brute_force)));
                     }
                   }
                   return w;
                 }});
  out.push_back({"semiclassical", "dynamics vs leading-order energy variance", 1e-6, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 3; ++s) {
                     const PGState p = pg_state(random_disc(rng, 0.5), FockRep(uniform(rng, 4.0, 12.0), 64));
                     const GeneratorPolynomial hp = random_polynomial(rng, 2);
                     const SpMatrix h0 = hp.materialize(*p.rep);
                     const SpMatrix h = 0.5 * (h0 + SpMatrix(h0.adjoint()));
                     const double lo = leading_order_variance(h, p);
                     const double fd = energy_variance_from_dynamics(h, p, default_time_step(h, p.state));
                     w = std::max(w, std::abs(fd - lo) / std::max(1e-12, std::abs(lo)));
                   }
                   return w;
                 }});

  out.push_back({"pho", "time-evolution stability |1 - fidelity|", 1e-8, false, [](Rng& rng) {
                   const pho::PhoParams p{1.0, 1.0, uniform(rng, 0.2, 3.0), 1.0};
                   double w = 0.0;
                   for (int s = 0; s < 5; ++s) {
                     const double t = uniform(rng, -2.0, 2.0);
                     const PGState pg = pg_state(random_disc(rng, 0.8), FockRep(p.k(), 64));
                     w = std::max(w, std::abs(1.0 - pho::evolve_stability(pg, p, t)));
                     const cplx bw = random_disc(rng, 8.0);
                     const BGState bg = bg_state(bw, FockRep(p.k(), pho::bg_truncation_hint(std::abs(bw))));
                     w = std::max(w, std::abs(1.0 - pho::evolve_stability(bg, p, t)));
                   }
                   return w;
                 }});
  out.push_back({"pho", "matched <K1>, <K2> follow the classical orbit", 1e-7, false, [](Rng& rng) {
                   const pho::PhoParams p{1.0, 1.0, uniform(rng, 0.2, 3.0), 1.0};
                   const pho::ClassicalOrbit orbit{p.e_min() * uniform(rng, 1.0, 4.0), uniform(rng, 0.0, 6.0)};
                   const pho::MatchedParameters mp = pho::match_parameters(orbit, p);
                   const PGState pg = pg_state(mp.z, FockRep(p.k(), 64));
                   const BGState bg = bg_state(mp.w, FockRep(p.k(), pho::bg_truncation_hint(std::abs(mp.w))));
                   double w = 0.0;
                   for (int i = 0; i < 5; ++i) {
                     const double t = uniform(rng, 0.0, 3.0);
                     const pho::Transversal cl = pho::classical_transversal(orbit, p, t);
                     const pho::Transversal a = pho::transversal_expectations(pg, p, t);
                     const pho::Transversal b = pho::transversal_expectations(bg, p, t);
                     w = std::max({w, std::abs(a.k1 - cl.k1), std::abs(a.k2 - cl.k2), std::abs(b.k1 - cl.k1),
                                   std::abs(b.k2 - cl.k2)});
                   }
                   return w;
                 }});
  out.push_back({"pho", "energy statistics closed form vs truncated", 1e-9, false, [](Rng& rng) {
                   double w = 0.0;
                   for (int s = 0; s < 10; ++s) {
                     const pho::PhoParams p = pho::PhoParams::from_sigma_units(uniform(rng, 0.1, 1.0));
                     const double e = p.e_min() * uniform(rng, 1.0, 5.0);
                     const pho::MatchedParameters mp = pho::match_parameters({e, 0.0}, p);
                     const pho::EnergyStats g = pho::pg_energy_stats(mp.z, p);
                     const pho::EnergyStats gb = pho::pg_energy_stats_brute(mp.z, p);
                     const pho::EnergyStats b = pho::bg_energy_stats(mp.w, p);
                     const pho::EnergyStats bb = pho::bg_energy_stats_brute(mp.w, p);
                     w = std::max({w, rel(gb.mean, g.mean), rel(gb.variance, g.variance), rel(bb.mean, b.mean),
                                   rel(bb.variance, b.variance)});
                   }
                   return w;
                 }});
  out.push_back({"pho", "eigenfunction Gram matrix (m <= 6)", 1e-8, false, [](Rng& rng) {
                   const pho::PhoParams p{uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.1, 3.0),
                                          uniform(rng, 0.5, 1.5)};
                   double w = 0.0;
                   for (int a = 0; a <= 6; ++a) {
                     for (int b = a; b <= 6; ++b) w = std::max(w, std::abs(pho::overlap(p, a, b) - (a == b ? 1.0 : 0.0)));
                   }
                   return w;
                 }});
  return out;
}

}  // namespace

CommandResult cmd_invariants(const RunConfig& cfg) {
  cfg.validate();
  Table t{"invariants",
          {{"command", cfg.command},
           {"seed", fmt::format("{}", cfg.seed)},
           {"corrupt_metric", cfg.corrupt_metric ? "yes" : "no"},
           {"bound", "upper: pass when worst <= tolerance; lower: pass when worst >= tolerance"}},
          {"module[1]", "invariant[1]", "bound[1]", "tolerance[1]", "worst[1]", "verdict[1]"},
          {}};
  int exit_code = kOk;
  const std::vector<Suite> all = suites(cfg.corrupt_metric);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Suite& s = all[i];
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(i)};
    Rng rng(seq);
    double worst = 0.0;
    bool pass = false;
    try {
      worst = s.worst(rng);
      pass = s.lower_bound ? worst >= s.tolerance : worst <= s.tolerance;
    } catch (const std::exception& e) {
      worst = std::numeric_limits<double>::quiet_NaN();
      t.meta.emplace_back(fmt::format("error[{}]", s.name), e.what());
    }
    if (!pass) exit_code = kInvariantFailure;
    t.rows.push_back({s.module, s.name, std::string(s.lower_bound ? "lower" : "upper"), s.tolerance, worst,
                      std::string(pass ? "PASS" : "FAIL")});
  }
  return {{std::move(t)}, exit_code};
}

}  // namespace su11::cli
