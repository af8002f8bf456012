#include "core/polynomial.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>
#include <sstream>

namespace fr {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
  for (int e : exponents_) {
    if (e < 0) fail(ErrorCode::InvalidArgument, "MultiIndex: negative exponent");
    order_ += e;
  }
}

namespace {

void enumerate_order(int num_vars, int order, int var, std::vector<int>& current,
                     std::vector<MultiIndex>& out) {
  if (var == num_vars - 1) {
    current[var] = order;
    out.emplace_back(current);
    return;
  }
  for (int e = order; e >= 0; --e) {
    current[var] = e;
    enumerate_order(num_vars, order - e, var + 1, current, out);
  }
  current[var] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(int num_vars, int degree)
    : num_vars_(num_vars), degree_(degree) {
  if (num_vars < 1) fail(ErrorCode::InvalidArgument, "MonomialBasis: num_vars must be positive");
  if (degree < 0) fail(ErrorCode::InvalidArgument, "MonomialBasis: negative degree");
  std::vector<int> current(static_cast<std::size_t>(num_vars), 0);
  for (int o = 0; o <= degree; ++o) enumerate_order(num_vars, o, 0, current, terms_);
  for (std::size_t i = 0; i < terms_.size(); ++i) lookup_.emplace(terms_[i], i);
}

std::size_t MonomialBasis::find(const MultiIndex& alpha) const {
  auto it = lookup_.find(alpha);
  return it == lookup_.end() ? terms_.size() : it->second;
}

std::shared_ptr<const MonomialBasis> monomial_basis(int num_vars, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{num_vars, degree}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(num_vars, degree);
  return slot;
}

std::size_t monomial_count(int num_vars, int degree) {
  if (degree < 0) return 0;
  return static_cast<std::size_t>(binomial(num_vars + degree, degree));
}

std::uint64_t binomial(int n, int k) {
  constexpr int kMax = 60;
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMax + 1>, kMax + 1> t{};
    for (int i = 0; i <= kMax; ++i) {
      t[i][0] = t[i][i] = 1;
      for (int j = 1; j < i; ++j) t[i][j] = t[i - 1][j - 1] + t[i - 1][j];
    }
    return t;
  }();
  if (n < 0 || n > kMax) fail(ErrorCode::InvalidArgument, "binomial: n out of range");
  if (k < 0 || k > n) return 0;
  return table[n][k];
}

Polynomial::Polynomial(int num_vars, int degree_bound, ScalarKind kind)
    : basis_(monomial_basis(num_vars, degree_bound)), kind_(kind) {
  if (kind == ScalarKind::Complex && num_vars != 1)
    fail(ErrorCode::InvalidArgument, "Polynomial: complex coefficients require num_vars == 1");
  coeffs_.assign(basis_->size(), Complex(0.0, 0.0));
}

Polynomial::Polynomial(std::shared_ptr<const MonomialBasis> basis, ScalarKind kind,
                       std::vector<Complex> coeffs)
    : basis_(std::move(basis)), kind_(kind), coeffs_(std::move(coeffs)) {}

Polynomial Polynomial::constant(int num_vars, double value) {
  Polynomial p(num_vars, 0);
  p.coeffs_[0] = value;
  return p;
}

Polynomial Polynomial::variable(int num_vars, int index) {
  if (index < 0 || index >= num_vars)
    fail(ErrorCode::InvalidArgument, "Polynomial::variable: index out of range");
  Polynomial p(num_vars, 1);
  std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
  e[static_cast<std::size_t>(index)] = 1;
  p.coeffs_[p.basis_->find(MultiIndex(e))] = 1.0;
  return p;
}

Polynomial Polynomial::from_coefficients(int num_vars, int degree_bound,
                                         std::vector<double> coeffs) {
  Polynomial p(num_vars, degree_bound);
  if (coeffs.size() != p.coeffs_.size()) {
    std::ostringstream msg;
    msg << "Polynomial::from_coefficients: expected " << p.coeffs_.size()
        << " coefficients, got " << coeffs.size();
    fail(ErrorCode::DimensionMismatch, msg.str());
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) p.coeffs_[i] = coeffs[i];
  return p;
}

Polynomial Polynomial::from_complex_coefficients(std::vector<Complex> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  const int d = static_cast<int>(coeffs.size()) - 1;
  return Polynomial(monomial_basis(1, d), ScalarKind::Complex, std::move(coeffs));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      next[j + 1] += c[j];
      next[j] -= r * c[j];
    }
    c = std::move(next);
  }
  return from_complex_coefficients(std::move(c));
}

int Polynomial::degree() const {
  int d = -1;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != Complex(0.0, 0.0)) d = std::max(d, (*basis_)[i].order());
  return d;
}

bool Polynomial::is_zero() const { return degree() < 0; }

std::vector<double> Polynomial::real_coefficients() const {
  std::vector<double> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i].real();
  return out;
}

Complex Polynomial::coefficient(const MultiIndex& alpha) const {
  const std::size_t i = basis_->find(alpha);
  return i == basis_->size() ? Complex(0.0, 0.0) : coeffs_[i];
}

namespace {

template <class Scalar>
Scalar eval_dense(const MonomialBasis& basis, std::span<const Complex> coeffs,
                  std::span<const Scalar> x, bool real_only) {
  const int n = basis.num_vars();
  const int d = basis.degree();
  const std::size_t stride = static_cast<std::size_t>(d + 1);
  std::array<Scalar, 128> small{};
  std::vector<Scalar> large;
  Scalar* powers = small.data();
  if (static_cast<std::size_t>(n) * stride > small.size()) {
    large.resize(static_cast<std::size_t>(n) * stride);
    powers = large.data();
  }
  for (int i = 0; i < n; ++i) {
    Scalar* row = powers + static_cast<std::size_t>(i) * stride;
    row[0] = Scalar(1.0);
    for (int e = 1; e <= d; ++e) row[e] = row[e - 1] * x[static_cast<std::size_t>(i)];
  }
  Scalar sum(0.0);
  for (std::size_t t = 0; t < basis.size(); ++t) {
    const auto& alpha = basis[t];
    Scalar term(1.0);
    for (int i = 0; i < n; ++i) term *= powers[static_cast<std::size_t>(i) * stride + alpha[i]];
    if constexpr (std::is_same_v<Scalar, double>) {
      (void)real_only;
      sum += coeffs[t].real() * term;
    } else {
      sum += coeffs[t] * term;
    }
  }
  return sum;
}

void check_dim(std::size_t got, int expected) {
  if (got != static_cast<std::size_t>(expected)) {
    std::ostringstream msg;
    msg << "dimension mismatch: polynomial has " << expected << " variables, point has "
        << got;
    fail(ErrorCode::DimensionMismatch, msg.str());
  }
}

}  // namespace

double Polynomial::eval(std::span<const double> x) const {
  check_dim(x.size(), num_vars());
  return eval_dense<double>(*basis_, coeffs_, x, true);
}

Complex Polynomial::eval_complex(std::span<const Complex> z) const {
  check_dim(z.size(), num_vars());
  return eval_dense<Complex>(*basis_, coeffs_, z, false);
}

Complex Polynomial::eval_complex(Complex z) const {
  return eval_complex(std::span<const Complex>(&z, 1));
}

namespace {

ScalarKind join(ScalarKind a, ScalarKind b) {
  return (a == ScalarKind::Complex || b == ScalarKind::Complex) ? ScalarKind::Complex
                                                                : ScalarKind::Real;
}

}  // namespace

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.num_vars() != num_vars())
    fail(ErrorCode::DimensionMismatch, "Polynomial::operator+: variable count mismatch");
  const int d = std::max(degree_bound(), other.degree_bound());
  Polynomial out(num_vars(), d, join(kind_, other.kind_));
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    out.coeffs_[out.basis_->find((*basis_)[i])] += coeffs_[i];
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i)
    out.coeffs_[out.basis_->find(other.basis()[i])] += other.coeffs_[i];
  return out;
}

Polynomial Polynomial::operator-() const { return scaled(Complex(-1.0, 0.0)); }

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + (-other); }

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.num_vars() != num_vars())
    fail(ErrorCode::DimensionMismatch, "Polynomial::operator*: variable count mismatch");
  const int n = num_vars();
  Polynomial out(n, degree_bound() + other.degree_bound(), join(kind_, other.kind_));
  std::vector<int> e(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == Complex(0.0, 0.0)) continue;
    for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
      if (other.coeffs_[j] == Complex(0.0, 0.0)) continue;
      for (int v = 0; v < n; ++v) e[v] = (*basis_)[i][v] + other.basis()[j][v];
      out.coeffs_[out.basis_->find(MultiIndex(e))] += coeffs_[i] * other.coeffs_[j];
    }
  }
  return out;
}

Polynomial Polynomial::scaled(Complex factor) const {
  ScalarKind kind = kind_;
  if (factor.imag() != 0.0) {
    if (num_vars() != 1)
      fail(ErrorCode::InvalidArgument, "Polynomial::scaled: complex factor needs num_vars == 1");
    kind = ScalarKind::Complex;
  }
  std::vector<Complex> c(coeffs_);
  for (auto& v : c) v *= factor;
  return Polynomial(basis_, kind, std::move(c));
}

Polynomial Polynomial::derivative(int var) const {
  const int n = num_vars();
  if (var < 0 || var >= n) fail(ErrorCode::InvalidArgument, "derivative: variable out of range");
  const int d = std::max(degree_bound() - 1, 0);
  Polynomial out(n, d, kind_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto& alpha = (*basis_)[i];
    if (alpha[var] == 0) continue;
    std::vector<int> e = alpha.exponents();
    e[var] -= 1;
    out.coeffs_[out.basis_->find(MultiIndex(e))] += coeffs_[i] * static_cast<double>(alpha[var]);
  }
  return out;
}

Polynomial Polynomial::affine_substitute(std::span<const double> scale,
                                         std::span<const double> shift) const {
  const int n = num_vars();
  check_dim(scale.size(), n);
  check_dim(shift.size(), n);
  const int d = degree_bound();
  Polynomial out(n, d, kind_);
  // (scale_v x_v + shift_v)^e = sum_j C(e,j) scale_v^j shift_v^(e-j) x_v^j
  std::vector<int> e(static_cast<std::size_t>(n));
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    if (coeffs_[t] == Complex(0.0, 0.0)) continue;
    const auto& alpha = (*basis_)[t];
    // iterate over all j <= alpha componentwise
    std::vector<int> j(static_cast<std::size_t>(n), 0);
    for (;;) {
      double w = 1.0;
      for (int v = 0; v < n; ++v) {
        w *= static_cast<double>(binomial(alpha[v], j[v])) * std::pow(scale[v], j[v]) *
             std::pow(shift[v], alpha[v] - j[v]);
      }
      out.coeffs_[out.basis_->find(MultiIndex(j))] += coeffs_[t] * w;
      int v = 0;
      while (v < n && j[v] == alpha[v]) {
        j[v] = 0;
        ++v;
      }
      if (v == n) break;
      ++j[v];
    }
  }
  return out;
}

Polynomial Polynomial::with_degree_bound(int degree_bound) const {
  if (degree() > degree_bound)
    fail(ErrorCode::InvalidArgument, "with_degree_bound: bound below actual degree");
  Polynomial out(num_vars(), degree_bound, kind_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if ((*basis_)[i].order() > degree_bound) continue;
    out.coeffs_[out.basis_->find((*basis_)[i])] = coeffs_[i];
  }
  return out;
}

Polynomial chebyshev(int k) {
  if (k < 0) fail(ErrorCode::InvalidArgument, "chebyshev: negative degree");
  Polynomial prev = Polynomial::constant(1, 1.0);
  if (k == 0) return prev;
  const Polynomial x = Polynomial::variable(1, 0);
  Polynomial cur = x;
  const Polynomial two_x = x.scaled(2.0);
  for (int j = 1; j < k; ++j) {
    Polynomial next = two_x * cur - prev.with_degree_bound(j + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur.with_degree_bound(k);
}

double chebyshev_value(int k, double x) {
  if (k < 0) fail(ErrorCode::InvalidArgument, "chebyshev_value: negative degree");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  if (p.kind() != ScalarKind::Real)
    fail(ErrorCode::InvalidArgument, "gradient: real polynomial required");
  std::vector<Polynomial> out;
  out.reserve(static_cast<std::size_t>(p.num_vars()));
  for (int i = 0; i < p.num_vars(); ++i) out.push_back(p.derivative(i));
  return out;
}

double finite_difference(const RealFunction& f, int k, std::span<const double> x,
                         std::span<const double> h) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "finite_difference: k must be >= 1");
  if (x.size() != h.size())
    fail(ErrorCode::DimensionMismatch, "finite_difference: point and step dimensions differ");
  std::vector<double> y(x.size());
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + static_cast<double>(j) * h[i];
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * static_cast<double>(binomial(k, j)) * f(y);
  }
  return sum;
}

Polynomial random_polynomial(int num_vars, int degree, Rng& rng) {
  const std::size_t m = monomial_count(num_vars, degree);
  std::vector<double> c(m);
  for (auto& v : c) v = rng.normal();
  return Polynomial::from_coefficients(num_vars, degree, std::move(c));
}

}  // namespace fr
