#include "su11/fockrep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "su11/errors.hpp"

namespace su11 {

int guard_rows(int m_max) {
  return static_cast<int>(std::ceil(4.0 + 2.0 * std::sqrt(static_cast<double>(m_max))));
}

FockRep::FockRep(double k, int m_max) : k_(k), m_max_(m_max) {
  if (!(k > 0.0)) throw DomainError("build_rep: weight k must be positive (ascending discrete series)");
  if (m_max < 8) throw DomainError("build_rep: m_max must be at least 8");
  const int n = dim();
  std::vector<Eigen::Triplet<cplx>> up;
  std::vector<Eigen::Triplet<cplx>> diag;
  up.reserve(static_cast<std::size_t>(n));
  diag.reserve(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    diag.emplace_back(m, m, cplx(k + m, 0.0));
    if (m + 1 < n) {
      const double md = m;
      up.emplace_back(m + 1, m, cplx(std::sqrt((md + 1.0) * (2.0 * k + md)), 0.0));
    }
  }
  kp_.resize(n, n);
  kp_.setFromTriplets(up.begin(), up.end());
  km_ = SpMatrix(kp_.adjoint());
  k3_.resize(n, n);
  k3_.setFromTriplets(diag.begin(), diag.end());
  k1_ = 0.5 * (kp_ + km_);
  k2_ = cplx(0.0, -0.5) * (kp_ - km_);
}

const SpMatrix& FockRep::generator(int i) const {
  switch (i) {
    case 0: return k1_;
    case 1: return k2_;
    case 2: return k3_;
    default: throw DomainError("generator index must be 0, 1 or 2");
  }
}

SpMatrix FockRep::identity() const {
  SpMatrix id(dim(), dim());
  id.setIdentity();
  return id;
}

SpMatrix FockRep::contract(const Vec3M& v) const {
  const Vec3M vl = v.lowered();
  return cplx(vl[0], 0.0) * k1_ + cplx(vl[1], 0.0) * k2_ + cplx(vl[2], 0.0) * k3_;
}

SpMatrix FockRep::casimir() const {
  return SpMatrix(-0.5 * (SpMatrix(kp_ * km_) + SpMatrix(km_ * kp_))) + SpMatrix(k3_ * k3_);
}

RepPtr build_rep(double k, int m_max) { return std::make_shared<const FockRep>(k, m_max); }

StateVec make_state(CVector coeffs, double k) {
  StateVec s;
  const int m_max = static_cast<int>(coeffs.size()) - 1;
  const int g = std::min(guard_rows(m_max), m_max + 1);
  s.tail_weight = coeffs.tail(g).squaredNorm();
  s.coeffs = std::move(coeffs);
  s.k = k;
  return s;
}

StateVec embed(const StateVec& s, int m_max) {
  if (m_max < s.m_max()) throw DimensionError("embed: target truncation is smaller than the state");
  CVector c = CVector::Zero(m_max + 1);
  c.head(s.coeffs.size()) = s.coeffs;
  return make_state(std::move(c), s.k);
}

StateVec lowest_weight(const FockRep& rep) {
  CVector c = CVector::Zero(rep.dim());
  c[0] = 1.0;
  return make_state(std::move(c), rep.k());
}

cplx expval(const StateVec& psi, const SpMatrix& op) {
  if (op.rows() != psi.coeffs.size() || op.cols() != psi.coeffs.size()) {
    throw DimensionError(fmt::format("expval: operator is {}x{} but state has {} coefficients",
                                     op.rows(), op.cols(), psi.coeffs.size()));
  }
  return psi.coeffs.dot(op * psi.coeffs);
}

cplx expval(const StateVec& psi, const CMatrix& op) {
  if (op.rows() != psi.coeffs.size() || op.cols() != psi.coeffs.size()) {
    throw DimensionError(fmt::format("expval: operator is {}x{} but state has {} coefficients",
                                     op.rows(), op.cols(), psi.coeffs.size()));
  }
  return psi.coeffs.dot(op * psi.coeffs);
}

double variance(const StateVec& psi, const SpMatrix& op) {
  if (op.rows() != psi.coeffs.size() || op.cols() != psi.coeffs.size()) {
    throw DimensionError("variance: dimension mismatch");
  }
  const CVector a_psi = op * psi.coeffs;
  const double mean = psi.coeffs.dot(a_psi).real();
  // <A^2> = ||A psi||^2 for hermitian A
  return std::max(0.0, a_psi.squaredNorm() - mean * mean);
}

// ---------------------------------------------------------------------------
// GeneratorPolynomial

GeneratorPolynomial GeneratorPolynomial::identity() {
  GeneratorPolynomial p;
  p.terms_.push_back({cplx(1.0, 0.0), {}});
  return p;
}

GeneratorPolynomial GeneratorPolynomial::generator(Letter l) {
  GeneratorPolynomial p;
  p.terms_.push_back({cplx(1.0, 0.0), {l}});
  return p;
}

GeneratorPolynomial GeneratorPolynomial::linear(const Vec3M& e) {
  const Vec3M el = e.lowered();
  GeneratorPolynomial p;
  const Letter letters[] = {Letter::k1, Letter::k2, Letter::k3};
  for (int i = 0; i < 3; ++i) {
    if (el[i] != 0.0) p.terms_.push_back({cplx(el[i], 0.0), {letters[i]}});
  }
  return p;
}

GeneratorPolynomial GeneratorPolynomial::operator+(const GeneratorPolynomial& o) const {
  GeneratorPolynomial p = *this;
  p.terms_.insert(p.terms_.end(), o.terms_.begin(), o.terms_.end());
  return p;
}

GeneratorPolynomial GeneratorPolynomial::operator-(const GeneratorPolynomial& o) const {
  return *this + o * cplx(-1.0, 0.0);
}

GeneratorPolynomial GeneratorPolynomial::operator*(const GeneratorPolynomial& o) const {
  GeneratorPolynomial p;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Term t{a.coeff * b.coeff, a.word};
      t.word.insert(t.word.end(), b.word.begin(), b.word.end());
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

GeneratorPolynomial GeneratorPolynomial::operator*(cplx a) const {
  GeneratorPolynomial p = *this;
  for (auto& t : p.terms_) t.coeff *= a;
  return p;
}

int GeneratorPolynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    if (t.coeff != cplx(0.0, 0.0)) d = std::max(d, static_cast<int>(t.word.size()));
  }
  return d;
}

std::string GeneratorPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    if (t.coeff.imag() == 0.0) {
      os << t.coeff.real();
    } else {
      os << "(" << t.coeff.real() << (t.coeff.imag() < 0 ? "" : "+") << t.coeff.imag() << "i)";
    }
    if (t.word.empty()) os << "*I";
    for (Letter l : t.word) {
      switch (l) {
        case Letter::k1: os << "*K1"; break;
        case Letter::k2: os << "*K2"; break;
        case Letter::k3: os << "*K3"; break;
        case Letter::kp: os << "*Kp"; break;
        case Letter::km: os << "*Km"; break;
      }
    }
  }
  return os.str();
}

SpMatrix GeneratorPolynomial::materialize(const FockRep& rep) const {
  SpMatrix acc(rep.dim(), rep.dim());
  for (const auto& t : terms_) {
    SpMatrix prod = rep.identity();
    for (Letter l : t.word) {
      const SpMatrix* g = nullptr;
      switch (l) {
        case Letter::k1: g = &rep.k1(); break;
        case Letter::k2: g = &rep.k2(); break;
        case Letter::k3: g = &rep.k3(); break;
        case Letter::kp: g = &rep.k_plus(); break;
        case Letter::km: g = &rep.k_minus(); break;
      }
      prod = SpMatrix(prod * *g);
    }
    acc += t.coeff * prod;
  }
  acc.prune(cplx(0.0, 0.0));
  return acc;
}

namespace {

// Recursive-descent parser for GeneratorPolynomial::parse.
class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  GeneratorPolynomial parse() {
    GeneratorPolynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  using Letter = GeneratorPolynomial::Letter;

  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError(fmt::format("operator expression '{}': {} at position {}", s_, what, pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  GeneratorPolynomial expr() {
    GeneratorPolynomial acc;
    bool negate = false;
    if (eat('-')) negate = true;
    else eat('+');
    GeneratorPolynomial first = term();
    acc = negate ? first * cplx(-1.0, 0.0) : first;
    while (true) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else break;
    }
    return acc;
  }

  GeneratorPolynomial term() {
    GeneratorPolynomial acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  GeneratorPolynomial factor() {
    skip();
    if (pos_ >= s_.size()) fail("expected a factor");
    if (eat('(')) {
      GeneratorPolynomial inner = expr();
      if (!eat(')')) fail("missing ')'");
      return inner;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == 'I') {
      ++pos_;
      return GeneratorPolynomial::identity();
    }
    if (c == 'K') {
      ++pos_;
      if (pos_ >= s_.size()) fail("incomplete generator name");
      const char d = s_[pos_++];
      switch (d) {
        case '1': return GeneratorPolynomial::generator(Letter::k1);
        case '2': return GeneratorPolynomial::generator(Letter::k2);
        case '3': return GeneratorPolynomial::generator(Letter::k3);
        case 'p': return GeneratorPolynomial::generator(Letter::kp);
        case 'm': return GeneratorPolynomial::generator(Letter::km);
        default: fail("unknown generator (use K1, K2, K3, Kp, Km)");
      }
    }
    fail("unexpected character");
  }

  GeneratorPolynomial number() {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s_.substr(pos_), &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    cplx coeff(v, 0.0);
    if (pos_ < s_.size() && s_[pos_] == 'i') {
      ++pos_;
      coeff = cplx(0.0, v);
    }
    return GeneratorPolynomial::identity() * coeff;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

GeneratorPolynomial GeneratorPolynomial::parse(const std::string& text) { return PolyParser(text).parse(); }

}  // namespace su11
