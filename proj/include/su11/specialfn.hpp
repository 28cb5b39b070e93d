#pragma once

// Special-function kernel: Gamma, modified Bessel I_nu and generalized
// Laguerre polynomials. Everything here is a pure function of its arguments.

namespace su11::specialfn {

struct SpecialFnConfig {
  /// Relative size of the last retained series term.
  double series_tol = 1e-17;
  /// Lower bound on x for the large-argument Bessel expansion; the actual
  /// switch point is max(asymptotic_switch, nu^2).
  double asymptotic_switch = 30.0;

  /// Throws DomainError unless 0 < series_tol <= 1e-10 and
  /// asymptotic_switch >= 30.
  void validate() const;
};

/// Gamma function for x > 0. Overflows to +inf above x ~ 171.6; use
/// log_gamma there.
double gamma(double x);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Modified Bessel function of the first kind, I_nu(x), nu >= 0, x >= 0.
/// Overflows to +inf for x beyond ~ 713; use log_bessel_i or
/// bessel_i_scaled for large arguments.
double bessel_i(double nu, double x, const SpecialFnConfig& cfg = {});

/// log I_nu(x). Returns -inf at x = 0 for nu > 0.
double log_bessel_i(double nu, double x, const SpecialFnConfig& cfg = {});

/// exp(-x) I_nu(x); finite for every admissible argument.
double bessel_i_scaled(double nu, double x, const SpecialFnConfig& cfg = {});

/// log I_nu(x) from the ascending power series alone, summed in the log
/// domain. Valid for any x but slow once x is in the thousands.
double log_bessel_i_series(double nu, double x, const SpecialFnConfig& cfg = {});

/// log I_nu(x) from the large-argument (Hankel) expansion alone. Accurate
/// only when x is well above max(30, nu^2).
double log_bessel_i_asymptotic(double nu, double x, const SpecialFnConfig& cfg = {});

/// I_{nu+d}(x) / I_nu(x) for integer offset d >= 0, evaluated in the log
/// domain so that neither function is ever formed explicitly.
double bessel_i_ratio(double nu, int d, double x, const SpecialFnConfig& cfg = {});

/// Generalized Laguerre polynomial L^alpha_m(x) = binom(m+alpha, m) F(-m, alpha+1, x).
///
/// The terminating Kummer series alternates in sign; the sum is carried in
/// as much binary precision as the largest term demands, so the result is
/// accurate in absolute terms relative to the polynomial's envelope.
double laguerre(double alpha, int m, double x);

/// Kummer's function F(-m, b, x) for non-negative integer m (a polynomial).
double kummer_terminating(int m, double b, double x);

}  // namespace su11::specialfn
