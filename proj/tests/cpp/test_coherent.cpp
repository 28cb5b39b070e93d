#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "su11/coherent.hpp"
#include "su11/errors.hpp"
#include "su11/specialfn.hpp"

using namespace su11;

namespace {

double phase_distance(const StateVec& a, const StateVec& b) {
  const int m = std::max(a.m_max(), b.m_max());
  const CVector va = embed(a, m).coeffs;
  const CVector vb = embed(b, m).coeffs;
  const cplx ov = vb.dot(va);
  const cplx phase = std::abs(ov) > 0.0 ? ov / std::abs(ov) : cplx(1.0, 0.0);
  return (va - phase * vb).norm();
}

}  // namespace

TEST_CASE("pg_state basics") {
  const FockRep rep(1.25, 32);
  const PGState zero = pg_state(cplx(0.0, 0.0), rep);
  CHECK(zero.state.coeffs[0] == cplx(1.0, 0.0));
  CHECK(zero.state.coeffs.tail(zero.state.coeffs.size() - 1).norm() == 0.0);

  const cplx z = std::polar(0.4, std::numbers::pi / 3.0);
  const PGState p = pg_state(z, rep);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(expval(p.state, p.rep->generator(i)).real() + 1.25 * p.s[i]) < 1e-9);
  }
  const double r2 = std::norm(z);
  // covariant row of the transform carries the explicit form
  const Vec3M s_cov = p.s.lowered();
  CHECK(s_cov[0] == doctest::Approx(2.0 * z.real() / (1.0 - r2)).epsilon(1e-12));
  CHECK(s_cov[1] == doctest::Approx(2.0 * z.imag() / (1.0 - r2)).epsilon(1e-12));
  CHECK(s_cov[2] == doctest::Approx((1.0 + r2) / (1.0 - r2)).epsilon(1e-12));
  CHECK(minkowski_norm(p.s) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(p.eigen_residual() < 1e-8);
  CHECK(variance(p.state, p.rep->contract(p.s)) < 1e-10);
}

TEST_CASE("pg_state normalization with truncation escalation") {
  const PGState p = pg_state(cplx(0.9, 0.0), FockRep(0.75, 16));
  CHECK(p.rep->m_max() > 16);
  CHECK(p.state.tail_weight < 1e-12);
  // binomial series: sum_m Gamma(2k+m)/(m! Gamma(2k)) r^{2m} = (1-r^2)^{-2k}
  double direct = 0.0;
  for (int m = 0; m <= p.state.m_max(); ++m) {
    direct += std::exp(specialfn::log_gamma(1.5 + m) - specialfn::log_gamma(m + 1.0) - specialfn::log_gamma(1.5) +
                       2.0 * m * std::log(0.9));
  }
  CHECK(direct * std::pow(1.0 - 0.81, 1.5) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(p.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(pg_state(cplx(1.0, 0.0), FockRep(1.0, 16)), DomainError);
  CHECK_THROWS_AS(pg_state(cplx(0.0, 0.9999999), FockRep(1.0, 16)), DomainError);
}

TEST_CASE("pg_state is independent of the starting truncation") {
  const cplx z(0.3, -0.5);
  const PGState a = pg_state(z, FockRep(2.0, 64));
  const PGState b = pg_state(z, FockRep(2.0, 256));
  const int n = a.state.m_max();
  CHECK((a.state.coeffs - b.state.coeffs.head(n + 1)).norm() < 1e-12);
}

TEST_CASE("general_cs") {
  const FockRep rep(1.25, 32);
  const GroupState id = general_cs(0.0, Vec3M{1.0, 0.0, 0.0}, rep);
  CHECK(std::abs(id.state.coeffs[0] - cplx(1.0, 0.0)) < 1e-15);

  for (double phi : {0.0, 1.0, 2.5, 4.0}) {
    const double tau = 1.3;
    const Vec3M n{std::sin(phi), -std::cos(phi), 0.0};
    const GroupState g = general_cs(tau, n, rep);
    const PGState p = pg_state(std::polar(std::tanh(tau / 2.0), phi), rep);
    CHECK(phase_distance(g.state, p.state) < 1e-8);
    const BoostMatrix m = boost_matrix(tau, n);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(g.s[i] - m.row_contravariant(2)[i]) < 1e-12);
    CHECK(g.eigen_residual() < 1e-7);
  }

  // a timelike axis only rotates |k,0> by a phase
  const GroupState rot = general_cs(0.8, Vec3M{0.0, 0.0, 1.0}, rep);
  CHECK(std::abs(std::abs(rot.state.coeffs[0]) - 1.0) < 1e-13);

  // a generic axis still satisfies the eigen-equation
  const GroupState gen = general_cs(0.9, Vec3M{0.6, 0.9, std::sqrt(0.36 + 0.81 - 1.0)}, rep);
  CHECK(gen.eigen_residual() < 1e-7);

  TruncationPolicy tight;
  tight.max_m = 40;
  CHECK_THROWS_AS(general_cs(4.0, Vec3M{1.0, 0.0, 0.0}, FockRep(1.0, 16), tight), TruncationError);
}

TEST_CASE("bg_state") {
  const FockRep rep(1.25, 32);
  const BGState zero = bg_state(cplx(0.0, 0.0), rep);
  CHECK(std::abs(zero.state.coeffs[0] - cplx(1.0, 0.0)) < 1e-15);
  CHECK(zero.normalization == doctest::Approx(std::sqrt(specialfn::gamma(2.5))));

  const cplx w(3.0, 2.0);
  const BGState b = bg_state(w, rep);
  CHECK(b.eigen_residual() < 1e-9);
  CHECK(b.state.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // closed-form normalization versus the direct series
  double series = 0.0;
  const double r = std::abs(w);
  for (int m = 0; m < 400; ++m) {
    series += std::exp(2.0 * m * std::log(r) - specialfn::log_gamma(m + 1.0) - specialfn::log_gamma(2.5 + m));
  }
  CHECK(b.normalization == doctest::Approx(1.0 / std::sqrt(series)).epsilon(1e-12));
  CHECK(expval(b.state, b.rep->k_minus()).real() == doctest::Approx(3.0).epsilon(1e-10));

  // <K3> through Bessel functions
  const double k3 = 1.25 + r * specialfn::bessel_i(2.5, 2.0 * r) / specialfn::bessel_i(1.5, 2.0 * r);
  CHECK(expval(b.state, b.rep->k3()).real() == doctest::Approx(k3).epsilon(1e-12));

  // small k uses the direct sum for the normalization
  const BGState small = bg_state(cplx(0.7, 0.1), FockRep(0.3, 32));
  CHECK(small.eigen_residual() < 1e-9);
  CHECK(small.normalization > 0.0);
}

TEST_CASE("series_state reproduces PG and BG") {
  const FockRep rep(1.25, 64);
  const cplx z(0.2, 0.35);
  const SeriesState s = series_state(pg_series_coefficients(1.25), std::conj(z), rep);
  const PGState p = pg_state(z, rep);
  CHECK((embed(s.state, std::max(s.state.m_max(), p.state.m_max())).coeffs -
         embed(p.state, std::max(s.state.m_max(), p.state.m_max())).coeffs)
            .norm() < 1e-10);

  const cplx w(1.5, -0.5);
  const SeriesState sb = series_state(bg_series_coefficients(1.25), w, rep);
  const double res = (sb.rep->k_minus() * sb.state.coeffs - w * sb.state.coeffs).norm();
  CHECK(res < 1e-9);

  // <K+> = (conj z / |z|) f
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<cplx> table = [&] {
    std::vector<cplx> t;
    for (int m = 0; m < 20; ++m) t.emplace_back(u(rng), u(rng));
    return t;
  }();
  const CoefficientFn finite = [&](int m) { return m < 20 ? table[static_cast<std::size_t>(m)] : cplx(0.0, 0.0); };
  const cplx zz(0.6, 0.3);
  const SeriesState g = series_state(finite, zz, rep);
  const cplx kplus = expval(g.state, g.rep->k_plus());
  CHECK(std::abs(kplus - std::conj(zz) / std::abs(zz) * g.f) < 1e-9);

  const CoefficientFn divergent = [](int m) { return cplx(std::exp(0.05 * m * m), 0.0); };
  CHECK_THROWS_AS(series_state(divergent, cplx(0.5, 0.0), rep), DomainError);
}

TEST_CASE("BG states satisfy no real timelike eigen-equation") {
  const BGState a = bg_state(cplx(2.0, 0.0), FockRep(1.25, 64));
  const TimelikeScan sa = no_real_timelike_eigen_check(a);
  CHECK(sa.min_variance > 0.01);
  CHECK(std::sqrt(sa.min_variance) > 0.05);
  const BGState b = bg_state(cplx(5.0, 0.0), FockRep(5.0, 64));
  CHECK(no_real_timelike_eigen_check(b).min_variance > 0.01);
  const BGState c = bg_state(cplx(-1.0, 3.0), FockRep(0.75, 64));
  CHECK(std::sqrt(no_real_timelike_eigen_check(c).min_variance) > 0.05);
  CHECK_THROWS_AS(no_real_timelike_eigen_check(bg_state(cplx(0.0, 0.0), FockRep(1.25, 32))), DomainError);

  // the same grid finds the PG polarization for a PG state
  const PGState p = pg_state(cplx(0.3, 0.0), FockRep(1.25, 64));
  CHECK(eigen_equation_residual(p.state, *p.rep, p.s) < 1e-8);
}

TEST_CASE("closed-form moments and minimal uncertainty") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double k = 0.6 + 8.0 * u(rng);
    const cplx z = std::polar(0.8 * u(rng), 6.3 * u(rng));
    const PGState p = pg_state(z, FockRep(k, 64));
    const double rho = 2.0 * u(rng) - 1.0;
    const double th = 6.3 * u(rng);
    const Vec3M e = i % 2 ? Vec3M{std::cosh(rho) * std::cos(th), std::cosh(rho) * std::sin(th), std::sinh(rho)}
                          : Vec3M{std::sinh(rho) * std::cos(th), std::sinh(rho) * std::sin(th), std::cosh(rho)};
    const SpMatrix ek = p.rep->contract(e);
    const double second = (ek * p.state.coeffs).squaredNorm();
    CHECK(second == doctest::Approx(closed_form_second_moment(k, p.s, e)).epsilon(1e-8));
    CHECK(variance(p.state, ek) == doctest::Approx(closed_form_variance(k, p.s, e)).epsilon(1e-8));
    const double pu = variance(p.state, p.rep->contract(p.transform.row_contravariant(0)));
    const double pv = variance(p.state, p.rep->contract(p.transform.row_contravariant(1)));
    CHECK(std::sqrt(pu * pv) == doctest::Approx(k / 2.0).epsilon(1e-8));
  }
  const BGState b = bg_state(cplx(1.0, 2.0), FockRep(1.25, 64));
  const double prod = std::sqrt(variance(b.state, b.rep->k1()) * variance(b.state, b.rep->k2()));
  CHECK(prod == doctest::Approx(0.5 * expval(b.state, b.rep->k3()).real()).epsilon(1e-8));
}
