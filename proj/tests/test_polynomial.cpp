#include <doctest.h>

#include <cmath>

#include "core/polynomial.hpp"
#include "core/remez.hpp"

using namespace fr;

namespace {

// naive sum of c_alpha * prod x_i^alpha_i
double naive_eval(const Polynomial& p, std::span<const double> x) {
  double acc = 0.0;
  const auto& b = p.basis();
  for (std::size_t t = 0; t < b.size(); ++t) {
    double m = p.coefficients()[t].real();
    for (std::size_t i = 0; i < x.size(); ++i) m *= std::pow(x[i], b[t][i]);
    acc += m;
  }
  return acc;
}

double cheb_oracle(int k, double x) {
  if (std::abs(x) <= 1.0) return std::cos(k * std::acos(x));
  const double v = std::cosh(k * std::acosh(std::abs(x)));
  return (x < 0 && k % 2) ? -v : v;
}

}  // namespace

TEST_CASE("monomial basis is graded lexicographic with the binomial count") {
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 6; ++d) {
      const auto b = monomial_basis(n, d);
      CHECK(b->size() == binomial(n + d, d));
      CHECK(monomial_count(n, d) == b->size());
      for (std::size_t t = 1; t < b->size(); ++t) CHECK((*b)[t - 1].order() <= (*b)[t].order());
    }
  const auto b = monomial_basis(2, 1);
  CHECK((*b)[1] == MultiIndex({1, 0}));
  CHECK((*b)[2] == MultiIndex({0, 1}));
}

TEST_CASE("chebyshev matches cos(k arccos x) and cosh(k arccosh x)") {
  for (int k = 0; k <= 12; ++k) {
    const auto T = chebyshev(k);
    CHECK(T.degree() == k);
    for (double x : {-3.0, -1.0, -0.7, 0.0, 0.31, 0.99, 1.0, 1.5, 4.0}) {
      const std::vector<double> pt{x};
      const double want = cheb_oracle(k, x);
      CHECK(T.eval(pt) == doctest::Approx(want).epsilon(1e-10));
      CHECK(chebyshev_value(k, x) == doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("evaluation agrees with the naive monomial sum") {
  Rng rng(7);
  for (int n = 1; n <= 3; ++n)
    for (int d = 0; d <= 5; ++d) {
      const auto p = random_polynomial(n, d, rng);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (auto& v : x) v = rng.uniform(-2, 2);
        CHECK(p.eval(x) == doctest::Approx(naive_eval(p, x)).epsilon(1e-11));
      }
    }
}

TEST_CASE("ring operations are pointwise") {
  Rng rng(8);
  const auto p = random_polynomial(2, 3, rng), q = random_polynomial(2, 2, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK((p + q).eval(x) == doctest::Approx(p.eval(x) + q.eval(x)));
    CHECK((p - q).eval(x) == doctest::Approx(p.eval(x) - q.eval(x)));
    CHECK((p * q).eval(x) == doctest::Approx(p.eval(x) * q.eval(x)));
    CHECK(p.scaled(-2.5).eval(x) == doctest::Approx(-2.5 * p.eval(x)));
  }
  CHECK((p * q).degree() == 5);
}

TEST_CASE("derivative matches a central difference") {
  Rng rng(9);
  const auto p = random_polynomial(2, 4, rng);
  const auto g = gradient(p);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    for (int i = 0; i < 2; ++i) {
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[static_cast<std::size_t>(i)] += h;
      xm[static_cast<std::size_t>(i)] -= h;
      CHECK(g[static_cast<std::size_t>(i)].eval(x) == doctest::Approx((p.eval(xp) - p.eval(xm)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("affine substitution is composition") {
  Rng rng(10);
  const auto p = random_polynomial(2, 3, rng);
  const std::vector<double> a{2.0, -0.5}, b{0.25, 1.0};
  const auto q = p.affine_substitute(a, b);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const std::vector<double> y{a[0] * x[0] + b[0], a[1] * x[1] + b[1]};
    CHECK(q.eval(x) == doctest::Approx(p.eval(y)).epsilon(1e-11));
  }
}

TEST_CASE("from_roots builds the monic product") {
  const std::vector<Complex> roots{{1, 0}, {0, 2}, {-0.5, -0.5}};
  const auto p = Polynomial::from_roots(roots);
  CHECK(p.degree() == 3);
  const Complex z{0.3, -0.7};
  Complex want = 1.0;
  for (const auto& r : roots) want *= (z - r);
  CHECK(std::abs(p.eval_complex(z) - want) < 1e-12);
}

TEST_CASE("finite differences annihilate low degree and give k! h^k for x^k") {
  for (int k = 1; k <= 4; ++k) {
    const auto mono = Polynomial::from_coefficients(1, k, [&] {
      std::vector<double> c(static_cast<std::size_t>(k + 1), 0.0);
      c.back() = 1.0;
      return c;
    }());
    const RealFunction f = [&](std::span<const double> x) { return mono.eval(x); };
    const std::vector<double> x{0.3}, h{0.1};
    double fact = 1;
    for (int j = 2; j <= k; ++j) fact *= j;
    CHECK(finite_difference(f, k, x, h) == doctest::Approx(fact * std::pow(0.1, k)).epsilon(1e-8));
    CHECK(std::abs(finite_difference(f, k + 1, x, h)) < 1e-12);
  }
}

TEST_CASE("bound formulas") {
  // bg bound oracle: T_k at (1 + beta) / (1 - beta), beta = (1 - lambda)^(1/n)
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 6; ++k)
      for (double lambda : {0.01, 0.2, 0.5, 0.9}) {
        const double beta = std::pow(1 - lambda, 1.0 / n);
        CHECK(bg_bound(n, k, lambda) == doctest::Approx(cheb_oracle(k, (1 + beta) / (1 - beta))).epsilon(1e-10));
        CHECK(simple_bound(n, k, lambda) == doctest::Approx(std::pow(4.0 * n / lambda, k)));
      }
  CHECK(bg_bound(1, 3, 1.0) == 1.0);
  CHECK_THROWS_AS(bg_bound(1, 3, 0.0), Error);
  CHECK_THROWS_AS(simple_bound(1, 3, 1.5), Error);
}

TEST_CASE("property: bg <= simple, bg monotone in lambda and k") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 8; ++k) {
      double prev = kInf;
      for (int i = 1; i <= 100; ++i) {
        const double lambda = i / 100.0;
        const double bg = bg_bound(n, k, lambda);
        CHECK(bg <= simple_bound(n, k, lambda) * (1 + 1e-12));
        CHECK(bg <= prev * (1 + 1e-12));
        prev = bg;
        if (k > 1) CHECK(bg_bound(n, k - 1, lambda) <= bg * (1 + 1e-12));
      }
    }
}

TEST_CASE("evaluation examples") {
  // x^2 + y in graded order: [1, x, y, x^2, xy, y^2]
  const auto p = Polynomial::from_coefficients(2, 2, {0, 0, 1, 1, 0, 0});
  const std::vector<double> x12{1.0, 2.0};
  CHECK(p.eval(x12) == doctest::Approx(3.0));
  CHECK(Polynomial(2, 3).eval(x12) == 0.0);
  const auto s = Polynomial::variable(2, 0) + Polynomial::variable(2, 1);
  const std::vector<double> x11{1.0, 1.0};
  CHECK((s * s * s).eval(x11) == doctest::Approx(8.0));
}

TEST_CASE("chebyshev examples and random angles") {
  const std::vector<double> two{2.0}, c8{std::cos(M_PI / 8)};
  CHECK(chebyshev(0).eval(two) == 1.0);
  CHECK(chebyshev(3).eval(two) == doctest::Approx(26.0));
  CHECK(std::abs(chebyshev(4).eval(c8)) < 1e-12);
  Rng rng(17);
  for (int k = 0; k <= 12; ++k) {
    const auto T = chebyshev(k);
    for (int t = 0; t < 200; ++t) {
      const double theta = rng.uniform(0.0, M_PI);
      const std::vector<double> x{std::cos(theta)};
      CHECK(std::abs(T.eval(x) - std::cos(k * theta)) < 1e-10);
    }
  }
}

TEST_CASE("gradient examples") {
  const auto x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  const std::vector<double> p11{1.0, 1.0}, p21{2.0, 1.0};
  const auto g = gradient(x * x + y * y);
  CHECK(g[0].eval(p11) == doctest::Approx(2.0));
  CHECK(g[1].eval(p11) == doctest::Approx(2.0));
  for (const auto& d : gradient(Polynomial::constant(2, 5.0))) CHECK(d.is_zero());
  const auto h = gradient(x * x * x * y);
  CHECK(h[0].eval(p21) == doctest::Approx(12.0));
  CHECK(h[1].eval(p21) == doctest::Approx(8.0));
}

TEST_CASE("finite difference examples and random annihilation") {
  const RealFunction sq = [](std::span<const double> x) { return x[0] * x[0]; };
  const std::vector<double> zero{0.0}, one{1.0};
  CHECK(finite_difference(sq, 2, zero, one) == doctest::Approx(2.0));
  const std::vector<double> x{0.7}, h{0.2};
  CHECK(finite_difference(sq, 1, x, h) == doctest::Approx(0.81 - 0.49));
  Rng rng(18);
  for (int k = 1; k <= 5; ++k)
    for (int t = 0; t < 100; ++t) {
      const auto p = random_polynomial(2, k - 1, rng);
      const RealFunction f = [&](std::span<const double> z) { return p.eval(z); };
      const std::vector<double> z{rng.uniform(-1, 1), rng.uniform(-1, 1)}, d{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
      double scale = 0;
      for (const auto& c : p.coefficients()) scale = std::max(scale, std::abs(c));
      CHECK(std::abs(finite_difference(f, k, z, d)) < 1e-9 * std::max(1.0, scale));
    }
}

TEST_CASE("bound examples") {
  CHECK(bg_bound(2, 0, 0.3) == 1.0);
  CHECK(bg_bound(1, 1, 0.5) == doctest::Approx(3.0));
  for (int k = 0; k <= 6; ++k) CHECK(bg_bound(1, k, 1.0) == doctest::Approx(1.0));
  CHECK(simple_bound(1, 0, 0.3) == 1.0);
  CHECK(simple_bound(2, 3, 0.5) == doctest::Approx(4096.0));
  CHECK(simple_bound(1, 5, 1.0) == doctest::Approx(1024.0));
}
