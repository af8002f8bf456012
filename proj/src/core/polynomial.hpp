#ifndef FR_CORE_POLYNOMIAL_HPP
#define FR_CORE_POLYNOMIAL_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "core/common.hpp"

namespace fr {

using Complex = std::complex<double>;

enum class ScalarKind { Real, Complex };

/// Exponent vector alpha of a monomial x^alpha.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  std::size_t size() const noexcept { return exponents_.size(); }
  int operator[](std::size_t i) const { return exponents_[i]; }
  const std::vector<int>& exponents() const noexcept { return exponents_; }
  /// |alpha|, the sum of the exponents.
  int order() const noexcept { return order_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    return a.exponents_ < b.exponents_;
  }

 private:
  std::vector<int> exponents_;
  int order_ = 0;
};

/// All multi-indices with n components and order <= d, in graded
/// lexicographic order (order ascending, then exponent of x_1 descending).
class MonomialBasis {
 public:
  MonomialBasis(int num_vars, int degree);

  int num_vars() const noexcept { return num_vars_; }
  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return terms_[i]; }
  const std::vector<MultiIndex>& terms() const noexcept { return terms_; }
  /// Position of alpha, or size() when alpha is not in the basis.
  std::size_t find(const MultiIndex& alpha) const;

 private:
  int num_vars_;
  int degree_;
  std::vector<MultiIndex> terms_;
  std::map<MultiIndex, std::size_t> lookup_;
};

/// Shared, cached basis for (num_vars, degree).
std::shared_ptr<const MonomialBasis> monomial_basis(int num_vars, int degree);

/// Number of monomials of total degree <= d in n variables.
std::size_t monomial_count(int num_vars, int degree);

/// Dense polynomial in n variables with a total-degree bound. Coefficients
/// are stored over the graded monomial basis. Complex coefficients are only
/// supported for univariate polynomials.
class Polynomial {
 public:
  /// The zero polynomial.
  Polynomial(int num_vars, int degree_bound, ScalarKind kind = ScalarKind::Real);

  static Polynomial constant(int num_vars, double value);
  /// The coordinate function x_i (0-based).
  static Polynomial variable(int num_vars, int index);
  /// Real coefficients listed in basis order.
  static Polynomial from_coefficients(int num_vars, int degree_bound,
                                      std::vector<double> coeffs);
  /// Univariate complex polynomial sum c_j z^j.
  static Polynomial from_complex_coefficients(std::vector<Complex> coeffs);
  /// Univariate monic polynomial prod (z - r_j).
  static Polynomial from_roots(std::span<const Complex> roots);

  int num_vars() const noexcept { return basis_->num_vars(); }
  int degree_bound() const noexcept { return basis_->degree(); }
  ScalarKind kind() const noexcept { return kind_; }
  /// Largest order carrying a nonzero coefficient; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const;

  const MonomialBasis& basis() const noexcept { return *basis_; }
  std::span<const Complex> coefficients() const noexcept { return coeffs_; }
  /// Real parts of the coefficients in basis order.
  std::vector<double> real_coefficients() const;
  Complex coefficient(const MultiIndex& alpha) const;

  /// Evaluation at a real point. For complex polynomials returns the real
  /// part; use eval_complex instead.
  double eval(std::span<const double> x) const;
  Complex eval_complex(std::span<const Complex> z) const;
  Complex eval_complex(Complex z) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator-() const;
  Polynomial scaled(Complex factor) const;
  Polynomial scaled(double factor) const { return scaled(Complex(factor, 0.0)); }

  /// Partial derivative with respect to x_var. Degree bound drops by one.
  Polynomial derivative(int var) const;
  /// q(x) = p(scale .* x + shift), computed by exact expansion.
  Polynomial affine_substitute(std::span<const double> scale,
                               std::span<const double> shift) const;
  /// Same polynomial with a different degree bound (must cover degree()).
  Polynomial with_degree_bound(int degree_bound) const;

 private:
  Polynomial(std::shared_ptr<const MonomialBasis> basis, ScalarKind kind,
             std::vector<Complex> coeffs);

  std::shared_ptr<const MonomialBasis> basis_;
  ScalarKind kind_;
  std::vector<Complex> coeffs_;
};

/// Chebyshev polynomial of the first kind, T_0 = 1, T_1 = x,
/// T_{k+1} = 2x T_k - T_{k-1}.
Polynomial chebyshev(int k);

/// T_k(x) by the three-term recurrence, without building the polynomial.
double chebyshev_value(int k, double x);

/// Components d p / d x_i. Real polynomials only.
std::vector<Polynomial> gradient(const Polynomial& p);

/// Exact binomial coefficient from Pascal's triangle, n <= 60.
std::uint64_t binomial(int n, int k);

using RealFunction = std::function<double(std::span<const double>)>;

/// k-th forward difference sum_{j=0}^k (-1)^{k-j} C(k,j) f(x + j h).
double finite_difference(const RealFunction& f, int k, std::span<const double> x,
                         std::span<const double> h);

/// Random real polynomial of total degree <= d with independent standard
/// normal coefficients.
Polynomial random_polynomial(int num_vars, int degree, Rng& rng);

}  // namespace fr

#endif
