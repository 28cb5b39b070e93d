#pragma once

// Coherent states of the discrete series: group-generated (including
// Perelomov-Gilmore), Barut-Girardello, and generic analytic series.

#include <functional>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/fockrep.hpp"

namespace su11 {

/// Truncation policy shared by the state constructors. Each constructor
/// starts at the supplied representation's m_max and doubles it until the
/// guard-row weight drops below tail_tol or max_m is exceeded.
struct TruncationPolicy {
  double tail_tol = kDefaultTailTol;
  int max_m = kMaxTruncation;
};

/// A state reached from |k,0> by the group element U(tau, n).
struct GroupState {
  RepPtr rep;
  StateVec state;
  /// M(tau, n); row 3 holds the covariant polarization s_i.
  BoostMatrix transform;
  /// Polarization, contravariant components: <K^i> = -k s^i and s.s = -1.
  Vec3M s;

  double k() const { return rep->k(); }
  /// s_i K^i psi - k psi, the defining eigen-equation residual.
  double eigen_residual() const;
};

/// Perelomov-Gilmore state |Phi(z)>, |z| < 1.
struct PGState : GroupState {
  cplx z;
  double phi = 0.0;  ///< arg z
  /// 2 ln cosh(tau/2), the K^3 exponent of the disentangled group element.
  double eta = 0.0;
};

/// Barut-Girardello state: K^- psi = w psi.
struct BGState {
  RepPtr rep;
  StateVec state;
  cplx w;
  /// N(w, k) = (|w|^{1-2k} I_{2k-1}(2|w|))^{-1/2}, or sqrt(Gamma(2k)) at w = 0.
  double normalization = 1.0;

  double k() const { return rep->k(); }
  double eigen_residual() const;
};

/// State sum_m c_m z^m |k,m>, normalized by the directly summed series.
struct SeriesState {
  RepPtr rep;
  StateVec state;
  cplx z;
  /// M(z) = (sum_m |c_m|^2 |z|^{2m})^{-1/2}.
  double normalization = 1.0;
  /// sum_{m>=1} conj(c_m) c_{m-1} sqrt(m(2k-1+m)) |z|^{2m-1}, unnormalized.
  cplx f_raw;
  /// M(z)^2 f_raw, so that <K^+> = (conj z / |z|) f.
  cplx f;
};

using CoefficientFn = std::function<cplx(int m)>;

PGState pg_state(cplx z, const FockRep& rep, const TruncationPolicy& policy = {});
BGState bg_state(cplx w, const FockRep& rep, const TruncationPolicy& policy = {});
GroupState general_cs(double tau, const Vec3M& n, const FockRep& rep, const TruncationPolicy& policy = {});
SeriesState series_state(const CoefficientFn& c, cplx z, const FockRep& rep,
                         const TruncationPolicy& policy = {});

/// Closed-form N(w, k) through the Bessel function I_{2k-1}.
double bg_normalization(cplx w, double k);

/// PG coefficients c_m for the analytic-series constructor (without the
/// (1-|z|^2)^k prefactor and the z^m factor): sqrt(Gamma(2k+m)/(m! Gamma(2k))) (-1)^m,
/// for use with z replaced by conj(z).
CoefficientFn pg_series_coefficients(double k);
/// c_m = 1 / sqrt(m! Gamma(2k+m)).
CoefficientFn bg_series_coefficients(double k);

/// Minimum of Var(t_i K^i) over a grid of real timelike unit t with rapidity
/// up to max_rapidity. Strictly positive for every BG state with w != 0.
struct TimelikeScan {
  double min_variance = 0.0;
  Vec3M argmin;
};

/// Precondition |w| > 0.1; |k,0> (w = 0) is itself a K^3 eigenstate.
TimelikeScan no_real_timelike_eigen_check(const BGState& bg, int n_rapidity = 61, int n_angle = 72,
                                          double max_rapidity = 3.0);

/// Residual of the eigen-equation for a PG-type polarization t applied to an
/// arbitrary state: || t_i K^i psi - <t_i K^i> psi ||.
double eigen_equation_residual(const StateVec& psi, const FockRep& rep, const Vec3M& t);

/// Expected <(e_i K^i)^2> in a group coherent state with polarization s.
double closed_form_second_moment(double k, const Vec3M& s, const Vec3M& e);
/// Expected Var(e_i K^i) = (k/2)(e.e + (e.s)^2).
double closed_form_variance(double k, const Vec3M& s, const Vec3M& e);

}  // namespace su11
