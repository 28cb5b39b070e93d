#pragma once

// Pseudoharmonic oscillator H = p^2/2mu + mu omega^2 q^2/2 + lambda/q^2 as an
// su(1,1) system with H = 2 hbar omega K^3.

#include "su11/coherent.hpp"
#include "su11/fockrep.hpp"

namespace su11::pho {

struct PhoParams {
  double mu = 1.0;
  double omega = 1.0;
  double lambda = 1.0;
  double hbar = 1.0;

  /// Throws DomainError unless mu, omega, hbar > 0 and lambda >= 0.
  void validate() const;

  /// alpha = sqrt(8 mu lambda / hbar^2 + 1).
  double alpha() const;
  /// Representation weight k = alpha/4 + 1/2.
  double k() const;
  /// k(k-1) written through the physical parameters: -3/16 + mu lambda / (2 hbar^2).
  double casimir() const;
  /// Minimum classical energy sqrt(2 mu lambda omega^2).
  double e_min() const;
  /// Length-momentum unit sigma = sqrt(mu lambda).
  double sigma() const;
  /// Energy unit sigma omega = sqrt(mu lambda omega^2).
  double sigma_omega() const;

  /// hbar given in units of sigma.
  static PhoParams from_sigma_units(double hbar_in_sigma, double mu = 1.0, double omega = 1.0, double lambda = 1.0);
};

struct ClassicalOrbit {
  double e_cl = 0.0;
  double phi = 0.0;
};

/// eta(E_cl) = sqrt((E/(mu omega^2))^2 - 2 lambda/(mu omega^2)); throws for E < E_min.
double orbit_eta(const ClassicalOrbit& orbit, const PhoParams& p);

struct PhasePoint {
  double q = 0.0;
  double qdot = 0.0;
};

PhasePoint classical_trajectory(const ClassicalOrbit& orbit, const PhoParams& p, double t);

/// Relative deviation of mu qdot^2/2 + mu omega^2 q^2/2 + lambda/q^2 from E_cl.
double energy_residual(const ClassicalOrbit& orbit, const PhoParams& p, double t);

struct MatchedParameters {
  cplx z;
  cplx w;
};

/// |w| = (mu omega / 2 hbar) eta, w = |w| e^{-i phi}, z = (k - sqrt(k^2+|w|^2)) / w.
MatchedParameters match_parameters(const ClassicalOrbit& orbit, const PhoParams& p);

/// |-2kz/(1-|z|^2) - conj(w)|.
double matching_defect(cplx z, cplx w, double k);

struct PhoSystem {
  PhoParams params;
  RepPtr rep;
  SpMatrix hamiltonian;  ///< 2 hbar omega K^3
};

PhoSystem pho_rep(const PhoParams& p, int m_max);

/// Truncation large enough for a BG state of modulus |w|: the coefficient
/// distribution peaks near m = |w| with width ~ sqrt(|w|).
int bg_truncation_hint(double abs_w);

struct Transversal {
  double k1 = 0.0;
  double k2 = 0.0;
};

/// (mu omega / 2 hbar) q^2 - E/(2 hbar omega) and -(mu / 2 hbar) qdot q.
Transversal classical_transversal(const ClassicalOrbit& orbit, const PhoParams& p, double t);

/// <K^1>, <K^2> after evolving the state for time t under exp(-iHt/hbar).
Transversal transversal_expectations(const PGState& s, const PhoParams& p, double t);
Transversal transversal_expectations(const BGState& s, const PhoParams& p, double t);

/// exp(-iHt/hbar) psi on the state's own representation.
StateVec evolve(const StateVec& psi, const FockRep& rep, const PhoParams& p, double t);

/// |<target(t)| exp(-iHt/hbar) |state>| with target the PG state at z e^{2i omega t}
/// (resp. BG state at w e^{-2i omega t}).
double evolve_stability(const PGState& s, const PhoParams& p, double t);
double evolve_stability(const BGState& s, const PhoParams& p, double t);

struct EnergyStats {
  double mean = 0.0;
  double variance = 0.0;

  double spread() const;
  double relative_spread() const;
};

/// 2 hbar omega k cosh(tau) and (2 hbar omega)^2 (k/2) sinh^2(tau), tau = 2 artanh |z|.
EnergyStats pg_energy_stats(cplx z, const PhoParams& p);
/// The same statistics written through the matched classical energy.
EnergyStats pg_energy_stats_at(double e_cl, const PhoParams& p);
/// Brute-force <H>, Var(H) in a truncated representation.
EnergyStats pg_energy_stats_brute(cplx z, const PhoParams& p);

/// Bessel-ratio closed forms for a BG state.
EnergyStats bg_energy_stats(cplx w, const PhoParams& p);
EnergyStats bg_energy_stats_at(double e_cl, const PhoParams& p);
EnergyStats bg_energy_stats_brute(cplx w, const PhoParams& p);

/// <q|k,m>, the regular eigenfunction on q > 0.
double wavefunction(const PhoParams& p, int m, double q);

/// <q|k',m> for the second (alpha -> -alpha) family, which diverges at q = 0
/// for lambda > 0 and has no hbar -> 0 limit. Requires alpha < 2.
double wavefunction_divergent(const PhoParams& p, int m, double q);

/// Upper integration limit beyond which every |<q|k,m>|^2, m <= m_top, is
/// below 1e-24.
double quadrature_cutoff(const PhoParams& p, int m_top);

/// Integral over (0, inf) of <q|k,m1><q|k,m2>, adaptive Gauss-Kronrod.
double overlap(const PhoParams& p, int m1, int m2);

}  // namespace su11::pho
