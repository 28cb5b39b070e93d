#pragma once

// Truncated realization of the ascending discrete series on |k,m>, m = 0..m_max.

#include <memory>
#include <string>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/types.hpp"

namespace su11 {

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr int kMaxTruncation = 1 << 14;

/// Rows at the top of a truncated matrix that are excluded from interior
/// checks: ceil(4 + 2 sqrt(m_max)).
int guard_rows(int m_max);

class FockRep {
 public:
  /// Throws DomainError for k <= 0 or m_max < 8.
  FockRep(double k, int m_max);

  double k() const { return k_; }
  int m_max() const { return m_max_; }
  int dim() const { return m_max_ + 1; }
  int guard() const { return guard_rows(m_max_); }
  /// Size of the leading block free of truncation artifacts.
  int interior() const { return dim() - guard(); }

  const SpMatrix& k_plus() const { return kp_; }
  const SpMatrix& k_minus() const { return km_; }
  const SpMatrix& k1() const { return k1_; }
  const SpMatrix& k2() const { return k2_; }
  const SpMatrix& k3() const { return k3_; }
  /// Generator K^{i+1}, i = 0..2.
  const SpMatrix& generator(int i) const;
  SpMatrix identity() const;

  /// v_i K^i, with v given by its contravariant components.
  SpMatrix contract(const Vec3M& v) const;

  /// -1/2 (K+K- + K-K+) + K3 K3.
  SpMatrix casimir() const;

 private:
  double k_;
  int m_max_;
  SpMatrix kp_, km_, k1_, k2_, k3_;
};

using RepPtr = std::shared_ptr<const FockRep>;

RepPtr build_rep(double k, int m_max);

/// Coefficients over |k,m> plus the squared weight in the top guard rows.
struct StateVec {
  CVector coeffs;
  double k = 0.0;
  double tail_weight = 0.0;

  int m_max() const { return static_cast<int>(coeffs.size()) - 1; }
  double norm() const { return coeffs.norm(); }
};

/// Wraps coefficients, computing the guard-row tail weight.
StateVec make_state(CVector coeffs, double k);

/// Zero-pads a state to a larger truncation.
StateVec embed(const StateVec& s, int m_max);

/// |k, 0>.
StateVec lowest_weight(const FockRep& rep);

/// <psi|A|psi>. Throws DimensionError on mismatch.
cplx expval(const StateVec& psi, const SpMatrix& op);
cplx expval(const StateVec& psi, const CMatrix& op);

/// <A^2> - <A>^2 for hermitian A (real part).
double variance(const StateVec& psi, const SpMatrix& op);

/// Linear combination of words in the generators {I, K1, K2, K3, K+, K-},
/// materializable on a representation of any size.
class GeneratorPolynomial {
 public:
  enum class Letter { k1, k2, k3, kp, km };
  struct Term {
    cplx coeff;
    std::vector<Letter> word;  // empty word = identity
  };

  GeneratorPolynomial() = default;
  static GeneratorPolynomial identity();
  static GeneratorPolynomial generator(Letter l);
  /// e_i K^i for a vector given by contravariant components.
  static GeneratorPolynomial linear(const Vec3M& e);
  /// Parses sums of products such as "K1*K2 + 2*K3*K3 - 0.5*I".
  static GeneratorPolynomial parse(const std::string& text);

  GeneratorPolynomial operator+(const GeneratorPolynomial& o) const;
  GeneratorPolynomial operator-(const GeneratorPolynomial& o) const;
  GeneratorPolynomial operator*(const GeneratorPolynomial& o) const;
  GeneratorPolynomial operator*(cplx a) const;

  int degree() const;
  const std::vector<Term>& terms() const { return terms_; }
  std::string to_string() const;

  SpMatrix materialize(const FockRep& rep) const;

 private:
  std::vector<Term> terms_;
};

}  // namespace su11
