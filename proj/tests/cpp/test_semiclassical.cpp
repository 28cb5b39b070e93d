#include <cmath>
#include <numbers>

#include "doctest.h"
#include "su11/errors.hpp"
#include "su11/semiclassical.hpp"
#include "su11/specialfn.hpp"

using namespace su11;

namespace {

using P = GeneratorPolynomial;

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

}  // namespace

TEST_CASE("prefactor") {
  CHECK(expansion_prefactor(1.25, 0) == doctest::Approx(1.0));
  CHECK(expansion_prefactor(1.25, 1) == doctest::Approx(1.0 / 2.5));
  CHECK(expansion_prefactor(1.25, 2) == doctest::Approx(1.0 / (2.0 * 2.5 * 3.5)));
  for (int m = 1; m < 12; ++m) CHECK(expansion_prefactor(20.0, m + 1) < expansion_prefactor(20.0, m));
  CHECK(std::isfinite(expansion_prefactor(5000.0, 12)));
  CHECK(expansion_prefactor(5000.0, 12) > 0.0);
}

TEST_CASE("identity and linear products") {
  const PGState p = pg_state(cplx(0.3, 0.2), FockRep(2.0, 64));
  const ExpansionReport id = product_expansion(P::identity(), P::identity(), p);
  CHECK(std::abs(id.terms[0] - 1.0) < 1e-13);
  for (std::size_t m = 1; m < id.terms.size(); ++m) CHECK(std::abs(id.terms[m]) < 1e-14);
  CHECK(id.converged_order == 0);

  const Vec3M e{0.4, 1.1, 0.5};
  const ExpansionReport lin = product_expansion(P::linear(e), P::linear(e), p);
  // e is not a unit vector; rescale the closed form by |e.e|
  const double scale = std::abs(minkowski_norm(e));
  const Vec3M eu = e * (1.0 / std::sqrt(scale));
  CHECK(std::abs(lin.partial_sums[1].real() - scale * closed_form_second_moment(2.0, p.s, eu)) < 1e-10);
  for (std::size_t m = 2; m < lin.terms.size(); ++m) CHECK(std::abs(lin.terms[m]) < 1e-12);
}

TEST_CASE("order zero factorizes and ordering gives the commutator") {
  const PGState p = pg_state(cplx(0.1, -0.25), FockRep(5.0, 64));
  const P a = P::parse("K1*K2");
  const P b = P::parse("K3*K1");
  const ExpansionReport ab = product_expansion(a, b, p);
  const FockRep& rep = *p.rep;
  const cplx ea = expval(p.state, a.materialize(rep));
  const cplx eb = expval(p.state, b.materialize(rep));
  CHECK(std::abs(ab.terms[0] - ea * eb) < 1e-10);
  CHECK(ab.converged_order >= 0);
  CHECK(ab.converged_order <= 6);
  CHECK(std::abs(ab.final_sum() - ab.brute_force) < 1e-9 * std::max(1.0, std::abs(ab.brute_force)));

  const ExpansionReport ba = product_expansion(b, a, p);
  const FockRep wide(5.0, 2 * rep.m_max());
  const StateVec psi = embed(p.state, wide.m_max());
  const SpMatrix am = a.materialize(wide);
  const SpMatrix bm = b.materialize(wide);
  const cplx comm = psi.coeffs.dot((am * bm - bm * am) * psi.coeffs);
  CHECK(std::abs((ab.final_sum() - ba.final_sum()) - comm) < 1e-9 * std::max(1.0, std::abs(comm)));
}

TEST_CASE("matrix overload agrees with the symbolic one away from the edge") {
  const PGState p = pg_state(cplx(0.2, 0.0), FockRep(3.0, 128));
  const P a = P::parse("K1*K3");
  const P b = P::parse("K2 + K3*K3");
  const ExpansionReport sym = product_expansion(a, b, p, 6);
  const ExpansionReport mat = product_expansion(a.materialize(*p.rep), b.materialize(*p.rep), p, 6);
  for (std::size_t m = 0; m < sym.terms.size(); ++m) {
    CHECK(std::abs(sym.terms[m] - mat.terms[m]) < 1e-9 * std::max(1.0, std::abs(sym.terms[m])));
  }
}

TEST_CASE("variance expansion") {
  const PGState s = pg_state(cplx(0.5, 0.0), FockRep(1.25, 64));
  const ExpansionReport k1 = variance_expansion(P::generator(P::Letter::k1), s);
  CHECK(std::abs(k1.final_sum() - k1.brute_force) < 1e-9);
  CHECK(k1.converged_order <= 8);
  // linear operator: one term, (k/2)(1 + (s^1)^2)
  CHECK(k1.terms[1].real() == doctest::Approx(0.625 * (1.0 + s.s[0] * s.s[0])).epsilon(1e-12));
  for (std::size_t m = 2; m < k1.terms.size(); ++m) CHECK(std::abs(k1.terms[m]) < 1e-12);
  for (const cplx& t : k1.terms) {
    CHECK(std::abs(t.imag()) == 0.0);
    CHECK(t.real() >= -1e-14);
  }

  const ExpansionReport eig = variance_expansion(s.rep->contract(s.s), s);
  for (const cplx& t : eig.terms) CHECK(std::abs(t) < 1e-10);

  CHECK_THROWS_AS(variance_expansion(SpMatrix(s.rep->k_plus()), s), DomainError);
  CHECK_THROWS_AS(variance_expansion(SpMatrix(8, 8), s), DimensionError);
}

TEST_CASE("quadratic operator variance: truncation after order one is O(1/k^2)") {
  std::vector<double> lk;
  std::vector<double> lr;
  for (double k : {5.0, 20.0, 80.0}) {
    const GroupState g = general_cs(0.5, Vec3M{std::sin(0.3), -std::cos(0.3), 0.0}, FockRep(k, 64));
    const ExpansionReport r = variance_expansion(P::parse("K3*K3 + K1*K2 + K2*K1"), g);
    const double leading = r.terms[1].real();
    const double residual = std::abs(r.brute_force.real() - leading);
    lk.push_back(std::log(k));
    lr.push_back(std::log(residual / leading));
  }
  CHECK(std::abs(fit_slope(lk, lr) + 1.0) < 0.15);
}

TEST_CASE("term magnitudes scale as k^(pA+pB-m)") {
  const P a = P::parse("K1*K2 + K3*K3");
  const P b = P::parse("K3*K1 + 0.5*K2");
  std::vector<double> lk;
  std::vector<std::vector<double>> lt(3);
  for (double k : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    const GroupState g = general_cs(0.6, Vec3M{std::sin(0.4), -std::cos(0.4), 0.0}, FockRep(k, 64));
    const ExpansionReport r = product_expansion(a, b, g, 4);
    lk.push_back(std::log(k));
    for (int m = 0; m < 3; ++m) lt[static_cast<std::size_t>(m)].push_back(std::log(r.term_magnitudes[static_cast<std::size_t>(m)]));
    CHECK(r.term_magnitudes[3] < 1e-12 * r.term_magnitudes[0]);
  }
  for (int m = 0; m < 3; ++m) CHECK(std::abs(fit_slope(lk, lt[static_cast<std::size_t>(m)]) - (4.0 - m)) < 0.15);
}

TEST_CASE("leading-order variance") {
  const FockRep rep(1.25, 32);
  const PGState lw = pg_state(cplx(0.0, 0.0), rep);
  CHECK(std::abs(leading_order_variance(rep.k3(), lw)) < 1e-14);

  const PGState p = pg_state(cplx(0.5, 0.0), rep);
  CHECK(leading_order_variance(p.rep->k1(), p) == doctest::Approx(variance(p.state, p.rep->k1())).epsilon(1e-10));

  const PGState q = pg_state(cplx(0.3, 0.0), FockRep(20.0, 64));
  const P a = P::parse("K3*K3");
  const ExpansionReport r = variance_expansion(a, q);
  CHECK(leading_order_variance(a.materialize(*q.rep), q) == doctest::Approx(r.terms[1].real()).epsilon(1e-10));
}

TEST_CASE("energy variance from dynamics") {
  const PGState p = pg_state(cplx(0.0, 0.4), FockRep(5.0, 64));
  const SpMatrix h = p.rep->k1() + cplx(2.0, 0.0) * p.rep->k3();
  const double fd = energy_variance_from_dynamics(h, p, 1e-4);
  CHECK(fd == doctest::Approx(leading_order_variance(h, p)).epsilon(1e-6));

  // H = K3: the full contraction is (k/2) sinh^2 tau
  const SpMatrix k3 = p.rep->k3();
  const double tau = 2.0 * std::atanh(0.4);
  CHECK(energy_variance_from_dynamics(k3, p, default_time_step(k3, p.state)) ==
        doctest::Approx(2.5 * std::sinh(tau) * std::sinh(tau)).epsilon(1e-6));
  CHECK(std::abs(energy_variance_from_dynamics(p.rep->identity(), p, 1e-4)) < 1e-10);
  CHECK_THROWS_AS(energy_variance_from_dynamics(h, p, 0.0), DomainError);
  CHECK(default_time_step(h, p.state) <= 1e-4);
}

TEST_CASE("BG states are rejected with a contract error") {
  const BGState b = bg_state(cplx(1.0, 0.0), FockRep(1.25, 32));
  CHECK_THROWS_AS(product_expansion(b.rep->k1(), b.rep->k1(), b), ContractError);
  CHECK_THROWS_AS(variance_expansion(b.rep->k1(), b), ContractError);
  try {
    variance_expansion(b.rep->k1(), b);
  } catch (const ContractError& e) {
    CHECK(std::string(e.what()).find("Barut-Girardello") != std::string::npos);
  }
}
