#include "su11/algebra.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "su11/errors.hpp"
#include "su11/fockrep.hpp"

namespace su11 {

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  // even permutations of (0,1,2)
  if ((i == 0 && j == 1 && k == 2) || (i == 1 && j == 2 && k == 0) || (i == 2 && j == 0 && k == 1)) return 1;
  return -1;
}

double levi_civita_mixed(int i, int j, int k) {
  double acc = 0.0;
  for (int l = 0; l < 3; ++l) acc += levi_civita(i, l, k) * kMetric[static_cast<std::size_t>(l)] * (l == j ? 1.0 : 0.0);
  return acc;
}

Vec3M Vec3M::spacelike_unit(double x1, double x2, double x3) {
  const Vec3M v{x1, x2, x3};
  const double nn = minkowski_norm(v);
  if (std::abs(nn - 1.0) > 1e-12) {
    throw DomainError(fmt::format("spacelike unit vector expected, got n.n = {}", nn));
  }
  return v;
}

Vec3M Vec3M::timelike_unit(double x1, double x2, double x3) {
  const Vec3M v{x1, x2, x3};
  const double nn = minkowski_norm(v);
  if (std::abs(nn + 1.0) > 1e-12) {
    throw DomainError(fmt::format("timelike unit vector expected, got n.n = {}", nn));
  }
  return v;
}

AxisKind classify_unit(const Vec3M& n, double tol) {
  const double nn = minkowski_norm(n);
  if (std::abs(nn - 1.0) <= tol) return AxisKind::spacelike;
  if (std::abs(nn + 1.0) <= tol) return AxisKind::timelike;
  throw DomainError(fmt::format("unit axis required (n.n = +-1), got n.n = {}", nn));
}

Vec3M BoostMatrix::apply(const Vec3M& v) const {
  const Eigen::Vector3d r = entries * v.to_eigen();
  return {r[0], r[1], r[2]};
}

Vec3M BoostMatrix::row_covariant(int i) const {
  return {entries(i, 0), entries(i, 1), entries(i, 2)};
}

Vec3M BoostMatrix::row_contravariant(int i) const { return row_covariant(i).lowered(); }

BoostMatrix boost_matrix(double tau, const Vec3M& n) {
  const AxisKind kind = classify_unit(n);
  const Vec3M nl = n.lowered();
  const bool space = kind == AxisKind::spacelike;
  const double c = space ? std::cosh(tau) : std::cos(tau);
  const double s = space ? std::sinh(tau) : std::sin(tau);
  const double sign = space ? 1.0 : -1.0;

  BoostMatrix out;
  out.kind = kind;
  out.tau = tau;
  out.axis = n;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double nn = n[i] * nl[j];
      double eps_n = 0.0;
      for (int k = 0; k < 3; ++k) eps_n += levi_civita_mixed(i, j, k) * nl[k];
      out.entries(i, j) = sign * nn + (-sign * nn + (i == j ? 1.0 : 0.0)) * c - eps_n * s;
    }
  }
  return out;
}

Eigen::Matrix3d pseudo_orthogonality_defect(const Eigen::Matrix3d& m, const Eigen::Matrix3d& metric) {
  return m * metric * m.transpose() - metric;
}

CMatrix iterated_commutator(const CMatrix& x, const CMatrix& y, int m) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows()) {
    throw DimensionError("iterated_commutator: operands must be square and of equal size");
  }
  if (m < 0) throw DomainError("iterated_commutator: order must be non-negative");
  CMatrix acc = y;
  for (int i = 0; i < m; ++i) acc = (x * acc - acc * x).eval();
  return acc;
}

SpMatrix iterated_commutator(const SpMatrix& x, const SpMatrix& y, int m) {
  if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows()) {
    throw DimensionError("iterated_commutator: operands must be square and of equal size");
  }
  if (m < 0) throw DomainError("iterated_commutator: order must be non-negative");
  SpMatrix acc = y;
  for (int i = 0; i < m; ++i) {
    SpMatrix next = SpMatrix(x * acc) - SpMatrix(acc * x);
    next.prune(cplx(0.0, 0.0));
    acc = std::move(next);
  }
  return acc;
}

namespace {

double one_norm(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

double one_norm(const SpMatrix& a) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    double col = 0.0;
    for (SpMatrix::InnerIterator it(a, c); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix must be square");
  constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const Eigen::Index n = a.rows();
  const double norm = one_norm(a);
  int squarings = 0;
  if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  const CMatrix as = a / std::ldexp(1.0, squarings);

  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = as * as;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = (r * r).eval();
  return r;
}

CVector expm_action(const SpMatrix& a, const CVector& v) {
  if (a.rows() != a.cols() || a.cols() != v.size()) {
    throw DimensionError("expm_action: dimension mismatch");
  }
  const double norm = one_norm(a);
  const int steps = std::max(1, static_cast<int>(std::ceil(norm)));
  const SpMatrix as = a / static_cast<double>(steps);
  CVector out = v;
  for (int s = 0; s < steps; ++s) {
    CVector term = out;
    CVector acc = out;
    const double scale = out.cwiseAbs().maxCoeff();
    for (int j = 1; j < 80; ++j) {
      term = (as * term) / static_cast<double>(j);
      acc += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-18 * scale) break;
    }
    out = std::move(acc);
  }
  return out;
}

SpMatrix GeneratorTriple::raising() const { return k[0] + kI * k[1]; }
SpMatrix GeneratorTriple::lowering() const { return k[0] - kI * k[1]; }

GeneratorTriple adjoint_action(const BoostMatrix& m, const FockRep& rep) {
  GeneratorTriple out;
  for (int i = 0; i < 3; ++i) {
    SpMatrix acc(rep.dim(), rep.dim());
    for (int j = 0; j < 3; ++j) {
      const double mij = m.entries(i, j);
      if (mij != 0.0) acc += cplx(mij, 0.0) * rep.generator(j);
    }
    out.k[static_cast<std::size_t>(i)] = std::move(acc);
  }
  return out;
}

CMatrix group_element(double tau, const Vec3M& n, const FockRep& rep) {
  classify_unit(n);
  const CMatrix gen = CMatrix(rep.contract(n));
  return expm(kI * tau * gen);
}

}  // namespace su11
