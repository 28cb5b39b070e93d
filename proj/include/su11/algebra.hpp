#pragma once

// Minkowski-signature 3-vectors, the O(2,1) adjoint matrices M(tau, n) and the
// matrix exponential / commutator machinery used on truncated representations.

#include <array>

#include "su11/types.hpp"

namespace su11 {

class FockRep;

/// Metric eta = diag(1, 1, -1); indices run 0..2 for components 1..3.
inline constexpr std::array<double, 3> kMetric = {1.0, 1.0, -1.0};

/// All-upper Levi-Civita symbol with eps^{123} = +1.
int levi_civita(int i, int j, int k);

/// eps^i_j^k = eps^{i l k} eta_{l j}.
double levi_civita_mixed(int i, int j, int k);

enum class AxisKind { spacelike, timelike };

/// Real 3-vector with contravariant components x^1, x^2, x^3.
class Vec3M {
 public:
  constexpr Vec3M() = default;
  constexpr Vec3M(double x1, double x2, double x3) : c_{x1, x2, x3} {}

  /// Unit vector with v.v = +1; rejects |v.v - 1| > 1e-12.
  static Vec3M spacelike_unit(double x1, double x2, double x3);
  /// Unit vector with v.v = -1; rejects |v.v + 1| > 1e-12.
  static Vec3M timelike_unit(double x1, double x2, double x3);

  constexpr double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  constexpr double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  /// Covariant components x_i = eta_ij x^j.
  constexpr Vec3M lowered() const { return {c_[0], c_[1], -c_[2]}; }

  constexpr Vec3M operator-() const { return {-c_[0], -c_[1], -c_[2]}; }
  constexpr Vec3M operator+(const Vec3M& o) const {
    return {c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2]};
  }
  constexpr Vec3M operator-(const Vec3M& o) const {
    return {c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2]};
  }
  constexpr Vec3M operator*(double a) const { return {a * c_[0], a * c_[1], a * c_[2]}; }

  Eigen::Vector3d to_eigen() const { return {c_[0], c_[1], c_[2]}; }

 private:
  std::array<double, 3> c_{};
};

/// a_i b^i with the (+,+,-) metric.
constexpr double minkowski_dot(const Vec3M& a, const Vec3M& b) {
  return a[0] * b[0] + a[1] * b[1] - a[2] * b[2];
}
constexpr double minkowski_norm(const Vec3M& v) { return minkowski_dot(v, v); }

/// Classifies a unit vector; throws DomainError for null or non-unit input.
AxisKind classify_unit(const Vec3M& n, double tol = 1e-12);

/// The matrix (M(tau, n))^i_j with e^{i tau n.K} K^i e^{-i tau n.K} = M^i_j K^j.
struct BoostMatrix {
  Eigen::Matrix3d entries;
  AxisKind kind = AxisKind::spacelike;
  double tau = 0.0;
  Vec3M axis;

  /// (M v)^i = M^i_j v^j.
  Vec3M apply(const Vec3M& v) const;
  /// Row i as covariant components M^i_j (j lower).
  Vec3M row_covariant(int i) const;
  /// Row i with its index raised: eta^{jl} M^i_l.
  Vec3M row_contravariant(int i) const;
};

BoostMatrix boost_matrix(double tau, const Vec3M& n);

/// M eta M^T - eta, the pseudo-orthogonality defect (zero for O(2,1)).
Eigen::Matrix3d pseudo_orthogonality_defect(const Eigen::Matrix3d& m,
                                            const Eigen::Matrix3d& metric = Eigen::Vector3d(1, 1, -1).asDiagonal());

/// [X, Y]_m with [X, Y]_0 = Y and [X, Y]_m = [X, [X, Y]_{m-1}].
CMatrix iterated_commutator(const CMatrix& x, const CMatrix& y, int m);
SpMatrix iterated_commutator(const SpMatrix& x, const SpMatrix& y, int m);

/// Dense matrix exponential, scaling and squaring with a degree-13 Pade
/// approximant (Higham 2005).
CMatrix expm(const CMatrix& a);

/// exp(a) v for sparse a, by a Taylor series on sub-steps with ||a/s||_1 <= 1.
CVector expm_action(const SpMatrix& a, const CVector& v);

/// Transformed generators Kt^i = M^i_j K^j as matrices on the representation.
struct GeneratorTriple {
  std::array<SpMatrix, 3> k;

  SpMatrix raising() const;   // Kt^1 + i Kt^2
  SpMatrix lowering() const;  // Kt^1 - i Kt^2
};

GeneratorTriple adjoint_action(const BoostMatrix& m, const FockRep& rep);

/// U(tau, n) = exp(i tau n_i K^i) on the truncated representation (dense).
CMatrix group_element(double tau, const Vec3M& n, const FockRep& rep);

}  // namespace su11
