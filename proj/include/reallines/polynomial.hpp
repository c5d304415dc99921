#pragma once

#include <algorithm>
#include <complex>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace reallines {

using Exponents = std::vector<int>;

inline double magnitude(double x) { return std::abs(x); }
template <class T>
double magnitude(const std::complex<T>& x) {
  return static_cast<double>(std::abs(x));
}

// Coefficients smaller than this are dropped when canonicalizing term maps.
constexpr double kCoeffDropTol = 1e-14;

/// Sparse homogeneous form of fixed degree in a fixed number of variables.
/// The term map never stores zero coefficients, so equal polynomials have
/// equal maps.
template <class Scalar>
class HomogeneousPolynomial {
 public:
  using TermMap = std::map<Exponents, Scalar>;

  HomogeneousPolynomial(int num_vars, int degree)
      : num_vars_(num_vars), degree_(degree) {
    if (num_vars < 1 || degree < 0)
      throw std::invalid_argument("bad polynomial shape");
  }

  static HomogeneousPolynomial monomial(int num_vars, const Exponents& e,
                                        Scalar c) {
    HomogeneousPolynomial p(num_vars, sum(e));
    p.add_term(e, c);
    return p;
  }

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, Scalar c) {
    if (static_cast<int>(e.size()) != num_vars_)
      throw std::invalid_argument("exponent vector length mismatch");
    for (int k : e)
      if (k < 0) throw std::invalid_argument("negative exponent");
    if (sum(e) != degree_)
      throw std::invalid_argument("exponents do not sum to degree");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (magnitude(c) > kCoeffDropTol) terms_.emplace(e, c);
    } else {
      it->second += c;
      if (magnitude(it->second) <= kCoeffDropTol) terms_.erase(it);
    }
  }

  Scalar evaluate(const std::vector<Scalar>& point) const {
    if (static_cast<int>(point.size()) != num_vars_)
      throw std::invalid_argument("point dimension mismatch");
    Scalar acc{};
    for (const auto& [e, c] : terms_) {
      Scalar t = c;
      for (int i = 0; i < num_vars_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= point[i];
      acc += t;
    }
    return acc;
  }

  HomogeneousPolynomial partial(int var) const {
    if (var < 0 || var >= num_vars_)
      throw std::invalid_argument("variable index out of range");
    HomogeneousPolynomial out(num_vars_, degree_ > 0 ? degree_ - 1 : 0);
    if (degree_ == 0) return out;
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      out.add_term(d, c * Scalar(static_cast<double>(e[var])));
    }
    return out;
  }

  /// Composition with x_i -> sum_j M(i,j) x_j; requires invertible M.
  HomogeneousPolynomial substitute_linear(
      const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& M) const {
    if (M.rows() != num_vars_ || M.cols() != num_vars_)
      throw std::invalid_argument("substitution matrix shape mismatch");
    Eigen::FullPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(
        M);
    if (!lu.isInvertible())
      throw std::invalid_argument("singular substitution matrix");

    std::vector<HomogeneousPolynomial> rows;
    rows.reserve(num_vars_);
    for (int i = 0; i < num_vars_; ++i) {
      HomogeneousPolynomial r(num_vars_, 1);
      for (int j = 0; j < num_vars_; ++j) {
        Exponents e(num_vars_, 0);
        e[j] = 1;
        r.add_term(e, M(i, j));
      }
      rows.push_back(std::move(r));
    }

    HomogeneousPolynomial out(num_vars_, degree_);
    for (const auto& [e, c] : terms_) {
      HomogeneousPolynomial prod(num_vars_, 0);
      prod.add_term(Exponents(num_vars_, 0), Scalar(1));
      for (int i = 0; i < num_vars_; ++i)
        for (int k = 0; k < e[i]; ++k) prod = prod * rows[i];
      out += prod.scaled(c);
    }
    return out;
  }

  HomogeneousPolynomial scaled(Scalar s) const {
    HomogeneousPolynomial out(num_vars_, degree_);
    for (const auto& [e, c] : terms_) out.add_term(e, c * s);
    return out;
  }

  HomogeneousPolynomial& operator+=(const HomogeneousPolynomial& o) {
    if (o.num_vars_ != num_vars_ || o.degree_ != degree_)
      throw std::invalid_argument("degree mismatch on add");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  friend HomogeneousPolynomial operator+(HomogeneousPolynomial a,
                                         const HomogeneousPolynomial& b) {
    a += b;
    return a;
  }
  friend HomogeneousPolynomial operator-(HomogeneousPolynomial a,
                                         const HomogeneousPolynomial& b) {
    a += b.scaled(Scalar(-1));
    return a;
  }
  friend HomogeneousPolynomial operator*(const HomogeneousPolynomial& a,
                                         const HomogeneousPolynomial& b) {
    if (a.num_vars_ != b.num_vars_)
      throw std::invalid_argument("variable count mismatch on multiply");
    HomogeneousPolynomial out(a.num_vars_, a.degree_ + b.degree_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.num_vars_);
        for (int i = 0; i < a.num_vars_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  bool operator==(const HomogeneousPolynomial& o) const {
    return num_vars_ == o.num_vars_ && degree_ == o.degree_ &&
           terms_ == o.terms_;
  }

 private:
  static int sum(const Exponents& e) {
    int s = 0;
    for (int k : e) s += k;
    return s;
  }

  int num_vars_;
  int degree_;
  TermMap terms_;
};

/// Binary form of degree d in (u, v); coeffs[k] multiplies u^{d-k} v^k.
template <class Scalar>
class BinaryForm {
 public:
  explicit BinaryForm(int degree)
      : degree_(degree), coeffs_(degree + 1, Scalar{}) {
    if (degree < 0) throw std::invalid_argument("negative degree");
  }
  BinaryForm(int degree, std::vector<Scalar> coeffs)
      : degree_(degree), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != degree_ + 1)
      throw std::invalid_argument("binary form length mismatch");
  }

  int degree() const { return degree_; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  Scalar& operator[](int k) { return coeffs_[k]; }
  const Scalar& operator[](int k) const { return coeffs_[k]; }

  Scalar evaluate(Scalar u, Scalar v) const {
    Scalar acc{};
    for (int k = 0; k <= degree_; ++k) {
      Scalar t = coeffs_[k];
      for (int i = 0; i < degree_ - k; ++i) t *= u;
      for (int i = 0; i < k; ++i) t *= v;
      acc += t;
    }
    return acc;
  }

  double max_coeff_magnitude() const {
    double m = 0;
    for (const auto& c : coeffs_) m = std::max(m, magnitude(c));
    return m;
  }

  friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) {
    if (a.degree_ != b.degree_)
      throw std::invalid_argument("degree mismatch on add");
    BinaryForm out(a.degree_);
    for (int k = 0; k <= a.degree_; ++k)
      out.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
    return out;
  }
  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
    BinaryForm out(a.degree_ + b.degree_);
    for (int i = 0; i <= a.degree_; ++i)
      for (int j = 0; j <= b.degree_; ++j)
        out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return out;
  }
  BinaryForm scaled(Scalar s) const {
    BinaryForm out(degree_, coeffs_);
    for (auto& c : out.coeffs_) c *= s;
    return out;
  }
  bool operator==(const BinaryForm& o) const {
    return degree_ == o.degree_ && coeffs_ == o.coeffs_;
  }

 private:
  int degree_;
  std::vector<Scalar> coeffs_;
};

/// General (non-homogeneous) sparse polynomial; used for the affine line
/// systems handed to the homotopy tracker.
template <class Scalar>
class AffinePolynomial {
 public:
  using TermMap = std::map<Exponents, Scalar>;

  explicit AffinePolynomial(int num_vars) : num_vars_(num_vars) {
    if (num_vars < 1) throw std::invalid_argument("bad variable count");
  }

  static AffinePolynomial constant(int num_vars, Scalar c) {
    AffinePolynomial p(num_vars);
    p.add_term(Exponents(num_vars, 0), c);
    return p;
  }
  static AffinePolynomial variable(int num_vars, int idx) {
    AffinePolynomial p(num_vars);
    Exponents e(num_vars, 0);
    e[idx] = 1;
    p.add_term(e, Scalar(1));
    return p;
  }

  int num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  void add_term(const Exponents& e, Scalar c) {
    if (static_cast<int>(e.size()) != num_vars_)
      throw std::invalid_argument("exponent vector length mismatch");
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (magnitude(c) > kCoeffDropTol) terms_.emplace(e, c);
    } else {
      it->second += c;
      if (magnitude(it->second) <= kCoeffDropTol) terms_.erase(it);
    }
  }

  Scalar evaluate(const std::vector<Scalar>& point) const {
    Scalar acc{};
    for (const auto& [e, c] : terms_) {
      Scalar t = c;
      for (int i = 0; i < num_vars_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= point[i];
      acc += t;
    }
    return acc;
  }

  AffinePolynomial partial(int var) const {
    AffinePolynomial out(num_vars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      out.add_term(d, c * Scalar(static_cast<double>(e[var])));
    }
    return out;
  }

  friend AffinePolynomial operator+(AffinePolynomial a,
                                    const AffinePolynomial& b) {
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }
  friend AffinePolynomial operator*(const AffinePolynomial& a,
                                    const AffinePolynomial& b) {
    AffinePolynomial out(a.num_vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.num_vars_);
        for (int i = 0; i < a.num_vars_; ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  AffinePolynomial scaled(Scalar s) const {
    AffinePolynomial out(num_vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, c * s);
    return out;
  }

 private:
  int num_vars_;
  TermMap terms_;
};

}  // namespace reallines
