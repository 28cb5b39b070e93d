#include "su11/semiclassical.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "su11/errors.hpp"
#include "su11/specialfn.hpp"

namespace su11 {

namespace {

constexpr const char* kBgContract =
    "semiclassical expansion needs a state generated from |k,0> by an SU(1,1) group element; "
    "Barut-Girardello states are not of that form (no real timelike t solves t.K psi = kappa psi), "
    "so the transformed generators and the relation between |<[iKt^-,A]>|^2 and eta_ij "
    "<[iK^i,A]><[iK^j,A]> are unavailable";

void check_square(const SpMatrix& a, const GroupState& cs, const char* who) {
  if (a.rows() != cs.rep->dim() || a.cols() != cs.rep->dim()) {
    throw DimensionError(fmt::format("{}: operator is {}x{} but the state's representation has dimension {}", who,
                                     a.rows(), a.cols(), cs.rep->dim()));
  }
}

bool is_hermitian(const SpMatrix& a) {
  const SpMatrix diff = a - SpMatrix(a.adjoint());
  const double scale = std::max(1.0, a.norm());
  return diff.norm() <= 1e-12 * scale;
}

void finish(ExpansionReport& r) {
  r.partial_sums.clear();
  r.term_magnitudes.clear();
  cplx acc(0.0, 0.0);
  for (const cplx& t : r.terms) {
    acc += t;
    r.partial_sums.push_back(acc);
    r.term_magnitudes.push_back(std::abs(t));
  }
  const double bound = r.tolerance * std::max(1.0, std::abs(r.brute_force));
  r.converged_order = -1;
  for (int m = static_cast<int>(r.partial_sums.size()) - 1; m >= 0; --m) {
    if (std::abs(r.partial_sums[static_cast<std::size_t>(m)] - r.brute_force) <= bound) {
      r.converged_order = m;
    } else {
      break;
    }
  }
}

cplx ev(const StateVec& psi, const SpMatrix& op) { return psi.coeffs.dot(op * psi.coeffs); }

// <psi|A B|psi>
cplx product_ev(const StateVec& psi, const SpMatrix& a, const SpMatrix& b) {
  const CVector b_psi = b * psi.coeffs;
  return psi.coeffs.dot(a * b_psi);
}

}  // namespace

double expansion_prefactor(double k, int m) {
  if (m < 0) throw DomainError("expansion_prefactor: order must be non-negative");
  return std::exp(specialfn::log_gamma(2.0 * k) - specialfn::log_gamma(m + 1.0) -
                  specialfn::log_gamma(2.0 * k + m));
}

namespace {

// Rows added above the state's truncation so that every matrix element the
// state touches is exact through the highest commutator order.
int padding(int max_order, int deg_a, int deg_b) { return 2 * (max_order + deg_a + deg_b) + 8; }

ExpansionReport expand_product(const SpMatrix& a, const SpMatrix& b, const FockRep& rep, const StateVec& psi,
                               const BoostMatrix& transform, int max_order, double tolerance) {
  if (max_order < 0) throw DomainError("product_expansion: max_order must be non-negative");
  const GeneratorTriple kt = adjoint_action(transform, rep);
  const SpMatrix up = kI * kt.raising();
  const SpMatrix down = kI * kt.lowering();

  ExpansionReport r;
  r.tolerance = tolerance;
  SpMatrix xa = a;
  SpMatrix xb = b;
  for (int m = 0; m <= max_order; ++m) {
    const double pref = expansion_prefactor(rep.k(), m);
    r.prefactors.push_back(pref);
    r.terms.push_back(pref * ev(psi, xa) * ev(psi, xb));
    if (m < max_order) {
      xa = iterated_commutator(up, xa, 1);
      xb = iterated_commutator(down, xb, 1);
    }
  }
  r.brute_force = product_ev(psi, a, b);
  finish(r);
  return r;
}

ExpansionReport expand_variance(const SpMatrix& a, const FockRep& rep, const StateVec& psi,
                                const BoostMatrix& transform, int max_order, double tolerance) {
  if (!is_hermitian(a)) throw DomainError("variance_expansion: operator must be hermitian");
  if (max_order < 1) throw DomainError("variance_expansion: max_order must be at least 1");
  const GeneratorTriple kt = adjoint_action(transform, rep);
  const SpMatrix down = kI * kt.lowering();

  ExpansionReport r;
  r.tolerance = tolerance;
  r.terms.push_back(cplx(0.0, 0.0));
  r.prefactors.push_back(1.0);
  SpMatrix x = a;
  for (int m = 1; m <= max_order; ++m) {
    x = iterated_commutator(down, x, 1);
    const double pref = expansion_prefactor(rep.k(), m);
    r.prefactors.push_back(pref);
    r.terms.push_back(cplx(pref * std::norm(ev(psi, x)), 0.0));
  }
  r.brute_force = cplx(variance(psi, a), 0.0);
  finish(r);
  return r;
}

}  // namespace

ExpansionReport product_expansion(const SpMatrix& a, const SpMatrix& b, const GroupState& cs, int max_order,
                                  double tolerance) {
  check_square(a, cs, "product_expansion");
  check_square(b, cs, "product_expansion");
  return expand_product(a, b, *cs.rep, cs.state, cs.transform, max_order, tolerance);
}

ExpansionReport product_expansion(const GeneratorPolynomial& a, const GeneratorPolynomial& b, const GroupState& cs,
                                  int max_order, double tolerance) {
  const int m_pad = cs.rep->m_max() + padding(max_order, a.degree(), b.degree());
  const FockRep padded(cs.k(), m_pad);
  ExpansionReport r = expand_product(a.materialize(padded), b.materialize(padded), padded,
                                     embed(cs.state, m_pad), cs.transform, max_order, tolerance);
  const FockRep wide(cs.k(), std::max(m_pad, 2 * cs.rep->m_max()));
  r.brute_force = product_ev(embed(cs.state, wide.m_max()), a.materialize(wide), b.materialize(wide));
  finish(r);
  return r;
}

ExpansionReport product_expansion(const SpMatrix&, const SpMatrix&, const BGState&, int, double) {
  throw ContractError(kBgContract);
}

ExpansionReport variance_expansion(const SpMatrix& a, const GroupState& cs, int max_order, double tolerance) {
  check_square(a, cs, "variance_expansion");
  return expand_variance(a, *cs.rep, cs.state, cs.transform, max_order, tolerance);
}

ExpansionReport variance_expansion(const GeneratorPolynomial& a, const GroupState& cs, int max_order,
                                   double tolerance) {
  const int m_pad = cs.rep->m_max() + padding(max_order, a.degree(), a.degree());
  const FockRep padded(cs.k(), m_pad);
  ExpansionReport r = expand_variance(a.materialize(padded), padded, embed(cs.state, m_pad), cs.transform,
                                      max_order, tolerance);
  const FockRep wide(cs.k(), std::max(m_pad, 2 * cs.rep->m_max()));
  r.brute_force = cplx(variance(embed(cs.state, wide.m_max()), a.materialize(wide)), 0.0);
  finish(r);
  return r;
}

ExpansionReport variance_expansion(const SpMatrix&, const BGState&, int, double) {
  throw ContractError(kBgContract);
}

double leading_order_variance(const SpMatrix& a, const GroupState& cs) {
  check_square(a, cs, "leading_order_variance");
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const SpMatrix ki = kI * cs.rep->generator(i);
    const cplx c = ev(cs.state, iterated_commutator(ki, a, 1));
    acc += kMetric[static_cast<std::size_t>(i)] * (c * c).real();
  }
  return acc / (2.0 * cs.k());
}

double default_time_step(const SpMatrix& h, const StateVec& psi) {
  const double scale = (h * psi.coeffs).norm();
  return 1e-4 / std::max(1.0, scale);
}

double energy_variance_from_dynamics(const SpMatrix& h, const GroupState& cs, double dt) {
  check_square(h, cs, "energy_variance_from_dynamics");
  if (!(dt > 0.0)) throw DomainError("energy_variance_from_dynamics: dt must be positive");
  const StateVec fwd = make_state(expm_action(cplx(0.0, -dt) * h, cs.state.coeffs), cs.k());
  const StateVec bwd = make_state(expm_action(cplx(0.0, dt) * h, cs.state.coeffs), cs.k());
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const SpMatrix& g = cs.rep->generator(i);
    const double d = (ev(fwd, g).real() - ev(bwd, g).real()) / (2.0 * dt);
    acc += kMetric[static_cast<std::size_t>(i)] * d * d;
  }
  return acc / (2.0 * cs.k());
}

}  // namespace su11
