#include "su11/pho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "su11/errors.hpp"
#include "su11/specialfn.hpp"

namespace su11::pho {

void PhoParams::validate() const {
  if (!(mu > 0.0)) throw DomainError("PhoParams: mass mu must be positive");
  if (!(omega > 0.0)) throw DomainError("PhoParams: frequency omega must be positive");
  if (!(hbar > 0.0)) throw DomainError("PhoParams: hbar must be positive");
  if (!(lambda >= 0.0)) throw DomainError("PhoParams: lambda must be non-negative");
}

double PhoParams::alpha() const { return std::sqrt(8.0 * mu * lambda / (hbar * hbar) + 1.0); }
double PhoParams::k() const { return 0.25 * alpha() + 0.5; }
double PhoParams::casimir() const { return -3.0 / 16.0 + mu * lambda / (2.0 * hbar * hbar); }
double PhoParams::e_min() const { return std::sqrt(2.0 * mu * lambda * omega * omega); }
double PhoParams::sigma() const { return std::sqrt(mu * lambda); }
double PhoParams::sigma_omega() const { return std::sqrt(mu * lambda * omega * omega); }

PhoParams PhoParams::from_sigma_units(double hbar_in_sigma, double mu, double omega, double lambda) {
  PhoParams p{mu, omega, lambda, 1.0};
  p.hbar = hbar_in_sigma * p.sigma();
  p.validate();
  return p;
}

double orbit_eta(const ClassicalOrbit& orbit, const PhoParams& p) {
  p.validate();
  const double e_min = p.e_min();
  if (orbit.e_cl < e_min * (1.0 - 1e-14)) {
    throw DomainError(fmt::format("classical energy {} below the minimum {}", orbit.e_cl, e_min));
  }
  const double a = orbit.e_cl / (p.mu * p.omega * p.omega);
  const double b = 2.0 * p.lambda / (p.mu * p.omega * p.omega);
  // differences at rounding level are the bottom of the well, not a tiny orbit
  const double d = a * a - b;
  return d <= 8.0 * std::numeric_limits<double>::epsilon() * a * a ? 0.0 : std::sqrt(d);
}

PhasePoint classical_trajectory(const ClassicalOrbit& orbit, const PhoParams& p, double t) {
  const double eta = orbit_eta(orbit, p);
  const double phase = 2.0 * p.omega * t + orbit.phi;
  const double q2 = orbit.e_cl / (p.mu * p.omega * p.omega) + eta * std::cos(phase);
  PhasePoint out;
  out.q = std::sqrt(std::max(0.0, q2));
  // d(q^2)/dt = -2 omega eta sin(phase) = 2 q qdot
  out.qdot = out.q > 0.0 ? -p.omega * eta * std::sin(phase) / out.q : 0.0;
  return out;
}

double energy_residual(const ClassicalOrbit& orbit, const PhoParams& p, double t) {
  const PhasePoint x = classical_trajectory(orbit, p, t);
  const double e = 0.5 * p.mu * x.qdot * x.qdot + 0.5 * p.mu * p.omega * p.omega * x.q * x.q +
                   p.lambda / (x.q * x.q);
  return std::abs(e - orbit.e_cl) / orbit.e_cl;
}

MatchedParameters match_parameters(const ClassicalOrbit& orbit, const PhoParams& p) {
  const double eta = orbit_eta(orbit, p);
  const double k = p.k();
  const double abs_w = p.mu * p.omega / (2.0 * p.hbar) * eta;
  MatchedParameters out;
  out.w = std::polar(abs_w, -orbit.phi);
  if (abs_w == 0.0) {
    out.z = cplx(0.0, 0.0);
  } else {
    // k - sqrt(k^2+|w|^2) = -|w|^2 / (k + sqrt(k^2+|w|^2)), free of cancellation
    const double num = -abs_w * abs_w / (k + std::hypot(k, abs_w));
    out.z = num / out.w;
  }
  return out;
}

double matching_defect(cplx z, cplx w, double k) {
  return std::abs(-2.0 * k * z / (1.0 - std::norm(z)) - std::conj(w));
}

PhoSystem pho_rep(const PhoParams& p, int m_max) {
  p.validate();
  PhoSystem sys;
  sys.params = p;
  sys.rep = build_rep(p.k(), m_max);
  sys.hamiltonian = cplx(2.0 * p.hbar * p.omega, 0.0) * sys.rep->k3();
  return sys;
}

int bg_truncation_hint(double abs_w) {
  const double m = abs_w + 10.0 * std::sqrt(abs_w) + 40.0;
  return std::max(32, static_cast<int>(std::ceil(m)));
}

Transversal classical_transversal(const ClassicalOrbit& orbit, const PhoParams& p, double t) {
  const PhasePoint x = classical_trajectory(orbit, p, t);
  return {p.mu * p.omega / (2.0 * p.hbar) * x.q * x.q - orbit.e_cl / (2.0 * p.hbar * p.omega),
          -p.mu / (2.0 * p.hbar) * x.qdot * x.q};
}

StateVec evolve(const StateVec& psi, const FockRep& rep, const PhoParams& p, double t) {
  const SpMatrix h = cplx(2.0 * p.hbar * p.omega, 0.0) * rep.k3();
  return make_state(expm_action(cplx(0.0, -t / p.hbar) * h, psi.coeffs), psi.k);
}

namespace {

Transversal transversal_of(const StateVec& psi, const FockRep& rep) {
  return {expval(psi, rep.k1()).real(), expval(psi, rep.k2()).real()};
}

double overlap_abs(const StateVec& a, const StateVec& b) {
  const int m = std::max(a.m_max(), b.m_max());
  return std::abs(embed(a, m).coeffs.dot(embed(b, m).coeffs));
}

}  // namespace

Transversal transversal_expectations(const PGState& s, const PhoParams& p, double t) {
  return transversal_of(evolve(s.state, *s.rep, p, t), *s.rep);
}

Transversal transversal_expectations(const BGState& s, const PhoParams& p, double t) {
  return transversal_of(evolve(s.state, *s.rep, p, t), *s.rep);
}

double evolve_stability(const PGState& s, const PhoParams& p, double t) {
  const StateVec moved = evolve(s.state, *s.rep, p, t);
  const PGState target = pg_state(s.z * std::polar(1.0, 2.0 * p.omega * t), *s.rep);
  return overlap_abs(target.state, moved);
}

double evolve_stability(const BGState& s, const PhoParams& p, double t) {
  const StateVec moved = evolve(s.state, *s.rep, p, t);
  const BGState target = bg_state(s.w * std::polar(1.0, -2.0 * p.omega * t), *s.rep);
  return overlap_abs(target.state, moved);
}

double EnergyStats::spread() const { return std::sqrt(std::max(0.0, variance)); }
double EnergyStats::relative_spread() const { return spread() / mean; }

EnergyStats pg_energy_stats(cplx z, const PhoParams& p) {
  p.validate();
  const double r2 = std::norm(z);
  if (!(r2 < 1.0)) throw DomainError("pg_energy_stats: |z| must be below 1");
  const double k = p.k();
  const double e0 = 2.0 * p.hbar * p.omega;
  const double cosh_tau = (1.0 + r2) / (1.0 - r2);
  const double sinh_tau = 2.0 * std::sqrt(r2) / (1.0 - r2);
  return {e0 * k * cosh_tau, e0 * e0 * 0.5 * k * sinh_tau * sinh_tau};
}

EnergyStats pg_energy_stats_at(double e_cl, const PhoParams& p) {
  // E^2 - E_min^2 = (mu omega^2 eta)^2
  const double excess_root = p.mu * p.omega * p.omega * orbit_eta({e_cl, 0.0}, p);
  const double k = p.k();
  const double e0 = 2.0 * p.hbar * p.omega * k;
  const double excess = excess_root * excess_root;
  return {std::sqrt(excess + e0 * e0), excess / (2.0 * k)};
}

EnergyStats pg_energy_stats_brute(cplx z, const PhoParams& p) {
  p.validate();
  const PGState s = pg_state(z, FockRep(p.k(), 64));
  const SpMatrix h = cplx(2.0 * p.hbar * p.omega, 0.0) * s.rep->k3();
  return {expval(s.state, h).real(), variance(s.state, h)};
}

EnergyStats bg_energy_stats(cplx w, const PhoParams& p) {
  p.validate();
  const double k = p.k();
  const double e0 = 2.0 * p.hbar * p.omega;
  const double r = std::abs(w);
  if (r == 0.0) return {e0 * k, 0.0};
  const double nu = 2.0 * k - 1.0;
  const double r1 = r * specialfn::bessel_i_ratio(nu, 1, 2.0 * r);
  const double r2 = r * r * specialfn::bessel_i_ratio(nu, 2, 2.0 * r);
  return {e0 * (k + r1), e0 * e0 * (r2 + r1 - r1 * r1)};
}

EnergyStats bg_energy_stats_at(double e_cl, const PhoParams& p) {
  return bg_energy_stats(match_parameters({e_cl, 0.0}, p).w, p);
}

EnergyStats bg_energy_stats_brute(cplx w, const PhoParams& p) {
  p.validate();
  const BGState s = bg_state(w, FockRep(p.k(), bg_truncation_hint(std::abs(w))));
  const SpMatrix h = cplx(2.0 * p.hbar * p.omega, 0.0) * s.rep->k3();
  return {expval(s.state, h).real(), variance(s.state, h)};
}

namespace {

double eigenfunction(const PhoParams& p, double a, int m, double q) {
  if (m < 0) throw DomainError("wavefunction: m must be non-negative");
  if (!(q > 0.0)) throw DomainError("wavefunction: q must be positive");
  const double scale = p.mu * p.omega / p.hbar;
  const double xi2 = scale * q * q;
  const double log_pref = 0.5 * (0.5 * std::log(scale) + std::log(2.0) + specialfn::log_gamma(m + 1.0) -
                                 specialfn::log_gamma(a + 1.0 + m));
  const double log_env = log_pref - 0.5 * xi2 + (a + 0.5) * 0.5 * std::log(xi2);
  return std::exp(log_env) * specialfn::laguerre(a, m, xi2);
}

}  // namespace

double wavefunction(const PhoParams& p, int m, double q) {
  p.validate();
  // (sqrt(scale) q)^{(alpha+1)/2} = (xi^2)^{(alpha/2 + 1/2)/2}
  return eigenfunction(p, 0.5 * p.alpha(), m, q);
}

double wavefunction_divergent(const PhoParams& p, int m, double q) {
  p.validate();
  const double alpha = p.alpha();
  if (!(alpha < 2.0)) throw DomainError("wavefunction_divergent: requires alpha < 2 (k' > 0)");
  return eigenfunction(p, -0.5 * alpha, m, q);
}

double quadrature_cutoff(const PhoParams& p, int m_top) {
  p.validate();
  const double ell = std::sqrt(p.hbar / (p.mu * p.omega));
  double q = ell * std::sqrt(4.0 * m_top + 2.0 * p.alpha() + 10.0);
  for (int guard = 0; guard < 10000; ++guard, q += 0.25 * ell) {
    double worst = 0.0;
    for (int m = 0; m <= m_top; ++m) {
      const double v = wavefunction(p, m, q);
      worst = std::max(worst, v * v);
    }
    if (worst < 1e-24) return q;
  }
  throw DomainError("quadrature_cutoff: envelope did not decay");
}

// Panels of width l/4 keep each Kronrod rule well inside one oscillation.
// The adaptive rule alone stops relative to |integral|, which never
// terminates for orthogonal pairs.
double overlap(const PhoParams& p, int m1, int m2) {
  const double cut = quadrature_cutoff(p, std::max(m1, m2));
  const double panel = 0.25 * std::sqrt(p.hbar / (p.mu * p.omega));
  const int n = std::max(1, static_cast<int>(std::ceil(cut / panel)));
  auto f = [&](double q) { return q <= 0.0 ? 0.0 : wavefunction(p, m1, q) * wavefunction(p, m2, q); };
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = cut * i / n;
    const double b = cut * (i + 1) / n;
    acc += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 3, 1e-14);
  }
  return acc;
}

}  // namespace su11::pho
