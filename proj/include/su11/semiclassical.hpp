#pragma once

// 1/k expansion of coherent-state expectation values of operator products.
//
// For a state |tau,n> = U|k,0>,
//
//   <AB> = sum_m Gamma(2k)/(m! Gamma(2k+m)) <[i Kt^+, A]_m> <[i Kt^-, B]_m>
//
// with Kt^i = M(tau,n)^i_j K^j. The m-th prefactor falls like k^-m while the
// commutator expectations stay of fixed order, so truncating the sum is a
// semiclassical approximation. For A and B polynomial in the generators the
// sum terminates at the smaller of the two degrees.

#include <vector>

#include "su11/coherent.hpp"
#include "su11/fockrep.hpp"

namespace su11 {

inline constexpr int kDefaultMaxOrder = 12;

struct ExpansionReport {
  std::vector<cplx> terms;
  std::vector<cplx> partial_sums;
  std::vector<double> term_magnitudes;
  /// Gamma(2k) / (m! Gamma(2k+m)) for each order.
  std::vector<double> prefactors;
  cplx brute_force;
  /// |partial_sum - brute_force| <= tolerance * max(1, |brute_force|).
  double tolerance = 1e-9;
  /// Smallest order meeting the tolerance, or -1.
  int converged_order = -1;

  cplx final_sum() const { return partial_sums.empty() ? cplx{} : partial_sums.back(); }
};

/// Gamma(2k) / (m! Gamma(2k+m)), evaluated in the log domain.
double expansion_prefactor(double k, int m);

/// Operators given as matrices on cs.rep; the reference <AB> is evaluated on
/// the same representation. The expansion is then that of the truncated
/// operators: matrix elements near the truncation edge are amplified at high
/// order, so prefer the symbolic overloads when the state reaches the edge.
ExpansionReport product_expansion(const SpMatrix& a, const SpMatrix& b, const GroupState& cs,
                                  int max_order = kDefaultMaxOrder, double tolerance = 1e-9);

/// Operators given symbolically. Commutators are taken on a representation
/// padded above the state's truncation so that no truncation artifact reaches
/// the state; the reference <AB> is evaluated with twice the truncation.
ExpansionReport product_expansion(const GeneratorPolynomial& a, const GeneratorPolynomial& b,
                                  const GroupState& cs, int max_order = kDefaultMaxOrder,
                                  double tolerance = 1e-9);

/// Always throws ContractError: BG states are not group orbits of |k,0>.
[[noreturn]] ExpansionReport product_expansion(const SpMatrix& a, const SpMatrix& b, const BGState& bg,
                                               int max_order = kDefaultMaxOrder, double tolerance = 1e-9);

/// (Delta A)^2 = sum_{m>=1} Gamma(2k)/(m! Gamma(2k+m)) |<[i Kt^-, A]_m>|^2.
/// Throws DomainError for non-hermitian A.
ExpansionReport variance_expansion(const SpMatrix& a, const GroupState& cs, int max_order = kDefaultMaxOrder,
                                   double tolerance = 1e-9);
ExpansionReport variance_expansion(const GeneratorPolynomial& a, const GroupState& cs,
                                   int max_order = kDefaultMaxOrder, double tolerance = 1e-9);
[[noreturn]] ExpansionReport variance_expansion(const SpMatrix& a, const BGState& bg,
                                                int max_order = kDefaultMaxOrder, double tolerance = 1e-9);

/// (1/2k) eta_ij <[iK^i, A]> <[iK^j, A]> with untransformed generators.
double leading_order_variance(const SpMatrix& a, const GroupState& cs);

/// (1/2k) eta_ij <d_t K^i> <d_t K^j>, the time derivatives taken by central
/// differences of <K^i>(t) under exp(-iHt) with step dt (hbar = 1).
double energy_variance_from_dynamics(const SpMatrix& h, const GroupState& cs, double dt);

/// 1e-4 / max(1, ||H psi||).
double default_time_step(const SpMatrix& h, const StateVec& psi);

}  // namespace su11
