#include "su11/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "su11/errors.hpp"
#include "su11/specialfn.hpp"

namespace su11 {

namespace {

int next_truncation(int m_max, const TruncationPolicy& policy, double tail, const char* who) {
  const int next = 2 * m_max;
  if (next > policy.max_m) {
    throw TruncationError(fmt::format("{}: guard-row weight {:.3e} still above {:.1e} at m_max = {}",
                                      who, tail, policy.tail_tol, m_max));
  }
  return next;
}

// log-sum-exp of 2*logmag
double log_norm_sq(const std::vector<double>& logmag) {
  const double top = *std::max_element(logmag.begin(), logmag.end());
  double acc = 0.0;
  for (double l : logmag) acc += std::exp(2.0 * (l - top));
  return 2.0 * top + std::log(acc);
}

// Coefficients normalized in closed form: weight beyond m_max is what the
// truncated vector fails to capture. Guard rows alone miss it when the
// distribution peaks far above m_max.
double missing_weight(const StateVec& st) {
  const double rounding = static_cast<double>(st.coeffs.size()) * std::numeric_limits<double>::epsilon();
  return 1.0 - st.coeffs.squaredNorm() - rounding;
}

}  // namespace

double GroupState::eigen_residual() const {
  const SpMatrix op = rep->contract(s);
  return (op * state.coeffs - k() * state.coeffs).norm();
}

double BGState::eigen_residual() const {
  return (rep->k_minus() * state.coeffs - w * state.coeffs).norm();
}

PGState pg_state(cplx z, const FockRep& rep, const TruncationPolicy& policy) {
  const double r = std::abs(z);
  if (!(r < 1.0 - 1e-6)) throw DomainError(fmt::format("pg_state: |z| = {} outside the unit disk", r));
  const double k = rep.k();
  const double log_r = std::log(r);
  const double theta = std::arg(-std::conj(z));

  int m_max = rep.m_max();
  while (true) {
    CVector c(m_max + 1);
    double logmag = k * std::log1p(-r * r);
    for (int m = 0; m <= m_max; ++m) {
      c[m] = m == 0 ? cplx(std::exp(logmag), 0.0) : std::polar(std::exp(logmag), m * theta);
      logmag += 0.5 * std::log((2.0 * k + m) / (m + 1.0)) + log_r;
    }
    StateVec st = make_state(std::move(c), k);
    st.tail_weight = std::max(st.tail_weight, missing_weight(st));
    if (st.tail_weight < policy.tail_tol) {
      PGState out;
      out.rep = build_rep(k, m_max);
      out.state = std::move(st);
      out.z = z;
      out.phi = std::arg(z);
      const double tau = 2.0 * std::atanh(r);
      out.eta = 2.0 * std::log(std::cosh(0.5 * tau));
      out.transform = boost_matrix(tau, Vec3M{std::sin(out.phi), -std::cos(out.phi), 0.0});
      out.s = out.transform.row_contravariant(2);
      return out;
    }
    m_max = next_truncation(m_max, policy, st.tail_weight, "pg_state");
  }
}

double bg_normalization(cplx w, double k) {
  const double r = std::abs(w);
  if (r == 0.0) return std::exp(0.5 * specialfn::log_gamma(2.0 * k));
  const double nu = 2.0 * k - 1.0;
  double log_s = 0.0;
  if (nu >= 0.0) {
    log_s = -nu * std::log(r) + specialfn::log_bessel_i(nu, 2.0 * r);
  } else {
    // order in (-1, 0): sum sum_m |w|^{2m} / (m! Gamma(2k+m)) directly
    std::vector<double> lm;
    double l = -0.5 * specialfn::log_gamma(2.0 * k);
    for (int m = 0; m < 100000; ++m) {
      lm.push_back(l);
      const double next = l + std::log(r) - 0.5 * std::log((m + 1.0) * (2.0 * k + m));
      if (m > r && next < lm.front() - 80.0 && next < l) break;
      l = next;
    }
    log_s = log_norm_sq(lm);
  }
  return std::exp(-0.5 * log_s);
}

BGState bg_state(cplx w, const FockRep& rep, const TruncationPolicy& policy) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) throw DomainError("bg_state: w must be finite");
  const double k = rep.k();
  const double r = std::abs(w);
  const double log_r = std::log(r);
  const double theta = std::arg(w);

  int m_max = rep.m_max();
  while (true) {
    std::vector<double> lm(static_cast<std::size_t>(m_max) + 1);
    double l = -0.5 * specialfn::log_gamma(2.0 * k);
    for (int m = 0; m <= m_max; ++m) {
      lm[static_cast<std::size_t>(m)] = l;
      l += log_r - 0.5 * std::log((m + 1.0) * (2.0 * k + m));
    }
    // normalize by the directly summed series
    double full = log_norm_sq(lm);
    if (r > 0.0) {
      // add the analytic remainder beyond m_max if it is not negligible
      std::vector<double> rest;
      double lr = l;
      for (int m = m_max + 1; m < 8 * (m_max + 1); ++m) {
        rest.push_back(lr);
        lr += log_r - 0.5 * std::log((m + 1.0) * (2.0 * k + m));
        if (lr < 0.5 * full - 60.0) break;
      }
      if (!rest.empty()) {
        const double lrest = log_norm_sq(rest);
        full = std::max(full, lrest) + std::log1p(std::exp(-std::abs(full - lrest)));
      }
    }
    CVector c(m_max + 1);
    for (int m = 0; m <= m_max; ++m) {
      const double mag = std::exp(lm[static_cast<std::size_t>(m)] - 0.5 * full);
      c[m] = m == 0 ? cplx(mag, 0.0) : std::polar(mag, m * theta);
    }
    StateVec st = make_state(std::move(c), k);
    st.tail_weight = std::max(st.tail_weight, missing_weight(st));
    if (st.tail_weight < policy.tail_tol) {
      BGState out;
      out.rep = build_rep(k, m_max);
      out.state = std::move(st);
      out.w = w;
      out.normalization = bg_normalization(w, k);
      return out;
    }
    m_max = next_truncation(m_max, policy, st.tail_weight, "bg_state");
  }
}

GroupState general_cs(double tau, const Vec3M& n, const FockRep& rep, const TruncationPolicy& policy) {
  const BoostMatrix transform = boost_matrix(tau, n);
  const double k = rep.k();
  int m_max = rep.m_max();
  while (true) {
    RepPtr r = build_rep(k, m_max);
    const SpMatrix gen = cplx(0.0, tau) * r->contract(n);
    StateVec st = make_state(expm_action(gen, lowest_weight(*r).coeffs), k);
    if (st.tail_weight < policy.tail_tol) {
      GroupState out;
      out.rep = std::move(r);
      out.state = std::move(st);
      out.transform = transform;
      out.s = transform.row_contravariant(2);
      return out;
    }
    m_max = next_truncation(m_max, policy, st.tail_weight, "general_cs");
  }
}

CoefficientFn pg_series_coefficients(double k) {
  const double lg2k = specialfn::log_gamma(2.0 * k);
  return [k, lg2k](int m) {
    const double mag = std::exp(0.5 * (specialfn::log_gamma(2.0 * k + m) - specialfn::log_gamma(m + 1.0) - lg2k));
    return cplx(m % 2 == 0 ? mag : -mag, 0.0);
  };
}

CoefficientFn bg_series_coefficients(double k) {
  return [k](int m) {
    return cplx(std::exp(-0.5 * (specialfn::log_gamma(m + 1.0) + specialfn::log_gamma(2.0 * k + m))), 0.0);
  };
}

SeriesState series_state(const CoefficientFn& c, cplx z, const FockRep& rep, const TruncationPolicy& policy) {
  const double k = rep.k();
  const double r = std::abs(z);

  // normalization and f(|z|) summed until the terms are negligible
  double norm_sum = 0.0;
  cplx f_raw(0.0, 0.0);
  cplx prev = c(0);
  norm_sum = std::norm(prev);
  double prev_term = norm_sum;
  bool converged = r == 0.0;
  int small_run = 0;
  for (int m = 1; m <= policy.max_m && !converged; ++m) {
    const cplx cm = c(m);
    const double term = std::norm(cm) * std::pow(r, 2.0 * m);
    norm_sum += term;
    f_raw += std::conj(cm) * prev * std::sqrt(m * (2.0 * k - 1.0 + m)) * std::pow(r, 2.0 * m - 1.0);
    prev = cm;
    if (term < 1e-16 * norm_sum && term <= prev_term) {
      if (++small_run >= 8) converged = true;
    } else {
      small_run = 0;
    }
    prev_term = term;
  }
  if (!converged || !std::isfinite(norm_sum) || norm_sum <= 0.0) {
    throw DomainError(fmt::format("series_state: normalization series does not converge at |z| = {}", r));
  }
  const double norm = 1.0 / std::sqrt(norm_sum);

  int m_max = rep.m_max();
  while (true) {
    CVector coeffs(m_max + 1);
    cplx zp(1.0, 0.0);
    for (int m = 0; m <= m_max; ++m) {
      coeffs[m] = norm * c(m) * zp;
      zp *= z;
    }
    StateVec st = make_state(std::move(coeffs), k);
    if (st.tail_weight < policy.tail_tol) {
      SeriesState out;
      out.rep = build_rep(k, m_max);
      out.state = std::move(st);
      out.z = z;
      out.normalization = norm;
      out.f_raw = f_raw;
      out.f = norm * norm * f_raw;
      return out;
    }
    m_max = next_truncation(m_max, policy, st.tail_weight, "series_state");
  }
}

double eigen_equation_residual(const StateVec& psi, const FockRep& rep, const Vec3M& t) {
  const SpMatrix op = rep.contract(t);
  const CVector a_psi = op * psi.coeffs;
  const cplx mean = psi.coeffs.dot(a_psi);
  return (a_psi - mean * psi.coeffs).norm();
}

TimelikeScan no_real_timelike_eigen_check(const BGState& bg, int n_rapidity, int n_angle, double max_rapidity) {
  if (!(std::abs(bg.w) > 0.1)) {
    throw DomainError("no_real_timelike_eigen_check: requires |w| > 0.1 (|k,0> is a K^3 eigenstate)");
  }
  const FockRep& rep = *bg.rep;
  // covariance of the three generators; Var(t.K) is a quadratic form in t
  std::array<CVector, 3> kpsi;
  std::array<double, 3> mean{};
  for (int i = 0; i < 3; ++i) {
    kpsi[static_cast<std::size_t>(i)] = rep.generator(i) * bg.state.coeffs;
    mean[static_cast<std::size_t>(i)] = bg.state.coeffs.dot(kpsi[static_cast<std::size_t>(i)]).real();
  }
  Eigen::Matrix3d second;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      second(i, j) = kpsi[static_cast<std::size_t>(i)].dot(kpsi[static_cast<std::size_t>(j)]).real();
    }
  }
  TimelikeScan best;
  best.min_variance = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n_rapidity; ++a) {
    const double rho = n_rapidity == 1 ? 0.0 : max_rapidity * a / (n_rapidity - 1);
    for (int b = 0; b < n_angle; ++b) {
      const double th = 2.0 * std::numbers::pi * b / n_angle;
      const Vec3M t{std::sinh(rho) * std::cos(th), std::sinh(rho) * std::sin(th), std::cosh(rho)};
      const Vec3M tl = t.lowered();
      double m2 = 0.0;
      double m1 = 0.0;
      for (int i = 0; i < 3; ++i) {
        m1 += tl[i] * mean[static_cast<std::size_t>(i)];
        for (int j = 0; j < 3; ++j) m2 += tl[i] * tl[j] * second(i, j);
      }
      const double var = m2 - m1 * m1;
      if (var < best.min_variance) {
        best.min_variance = var;
        best.argmin = t;
      }
      if (rho == 0.0) break;  // all angles coincide at the apex
    }
  }
  return best;
}

double closed_form_second_moment(double k, const Vec3M& s, const Vec3M& e) {
  const double es = minkowski_dot(e, s);
  return k * k * es * es + 0.5 * k * (minkowski_dot(e, e) + es * es);
}

double closed_form_variance(double k, const Vec3M& s, const Vec3M& e) {
  const double es = minkowski_dot(e, s);
  return 0.5 * k * (minkowski_dot(e, e) + es * es);
}

}  // namespace su11
