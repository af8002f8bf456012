#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "core/covering.hpp"

using namespace fr;

namespace {

DiscreteMeasureSpace random_space(Rng& rng, std::size_t n) {
  std::vector<double> pts, ms;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(rng.uniform());
    pts.push_back(rng.uniform());
    ms.push_back(rng.uniform(0.1, 1.0));
  }
  return DiscreteMeasureSpace(2, pts, ms);
}

// brute-force log potential
double potential_oracle(const std::vector<double>& pts, const std::vector<double>& ms, double x, double y) {
  double u = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) u += ms[i] * std::log(std::hypot(x - pts[2 * i], y - pts[2 * i + 1]));
  return u;
}

}  // namespace

TEST_CASE("majorant function inverse") {
  const auto phi = MajorantFn::power(2.0, 1.5);
  for (double t : {0.01, 0.3, 2.0}) CHECK(phi.inverse(phi(t)) == doctest::Approx(t));
  const auto tab = MajorantFn::table({0.1, 1.0}, {0.2, 3.0});
  CHECK(tab.inverse(tab(0.5)) == doctest::Approx(0.5));
}

TEST_CASE("tau is the largest radius with mass exceeding phi") {
  Rng rng(1);
  const auto space = random_space(rng, 20);
  const auto phi = MajorantFn::power(4.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> x{rng.uniform(), rng.uniform()};
    const double tv = tau(space, phi, x);
    if (tv > 0) CHECK(space.closed_ball_mass(x, tv) >= phi(tv) - 1e-12);
    // nothing larger qualifies
    for (double f : {1.1, 1.5, 3.0}) CHECK(space.closed_ball_mass(x, f * std::max(tv, 1e-3)) <= phi(f * std::max(tv, 1e-3)) + 1e-9);
  }
}

TEST_CASE("potential matches direct sum") {
  Rng rng(2);
  std::vector<double> pts, ms;
  for (int i = 0; i < 10; ++i) {
    pts.push_back(rng.uniform());
    pts.push_back(rng.uniform());
    ms.push_back(1.0);
  }
  const DiscreteMeasureSpace space(2, pts, ms);
  for (int t = 0; t < 10; ++t) {
    const double x = rng.uniform(), y = rng.uniform();
    const std::vector<double> p{x, y};
    CHECK(potential(space, p) == doctest::Approx(potential_oracle(pts, ms, x, y)));
  }
  const std::vector<double> atom{pts[0], pts[1]};
  CHECK(std::isinf(potential(space, atom)));
}

TEST_CASE("property: gorin cover leaves only regular points") {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto space = random_space(rng, 1 + rng.index(30));
    const auto phi = MajorantFn::power(1.0 / rng.uniform(0.05, 0.4), 1.0);
    const GorinParams params;
    const std::vector<double> mid{0.5, 0.5};
    const auto probes = square_grid(mid, 0.7, 12);
    const auto cover = gorin_cover(space, phi, params, probes);
    double budget = 0;
    for (const auto& b : cover.balls) budget += phi(params.gamma * b.radius);
    CHECK(cover.budget_used == doctest::Approx(budget));
    CHECK(cover.budget_used <= space.total_mass() * (1 + 1e-9));
    for (std::size_t i = 0; i < probes.size() / 2; ++i) {
      const std::vector<double> x{probes[2 * i], probes[2 * i + 1]};
      bool inside = false;
      for (const auto& b : cover.balls) inside |= euclidean_distance(x, b.center) <= b.radius;
      if (!inside) CHECK(tau(space, phi, x) == 0.0);
    }
  }
}

TEST_CASE("cor1 certificate on 50 configurations in the unit disk") {
  Rng rng(4);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> pts, ms;
    const std::size_t n = 1 + rng.index(20);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::sqrt(rng.uniform()), a = 2 * M_PI * rng.uniform();
      pts.push_back(r * std::cos(a));
      pts.push_back(r * std::sin(a));
      ms.push_back(1.0);
    }
    const DiscreteMeasureSpace space(2, pts, ms);
    const std::vector<double> c{0.0, 0.0};
    const auto rep = cor1_verify(space, 0.25, 1.0, GorinParams{}, square_grid(c, 1.0, 200));
    CHECK(rep.violations == 0);
    CHECK(rep.radius_power_sum <= rep.radius_bound * (1 + 1e-12));
    CHECK(rep.passed);
  }
}

TEST_CASE("invalid parameters are rejected") {
  GorinParams p;
  p.gamma = 0.5;
  CHECK_THROWS_AS(validate_gorin_params(p), Error);
  p = GorinParams{};
  p.alpha = 1.0;
  CHECK_THROWS_AS(validate_gorin_params(p), Error);
}

TEST_CASE("roots of a product of linear factors") {
  const std::vector<Complex> roots{{0.5, 0}, {-1, 1}, {-1, -1}, {2, 0.25}};
  auto found = polynomial_roots(Polynomial::from_roots(roots));
  REQUIRE(found.size() == roots.size());
  for (const auto& r : roots) {
    double best = kInf;
    for (const auto& f : found) best = std::min(best, std::abs(f - r));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("cartan disks on a known polynomial") {
  // f(z) = (1 - z/0.5)(1 - z/(1+i)), f(0) = 1
  const std::vector<Complex> roots{{0.5, 0}, {1, 1}};
  auto monic = Polynomial::from_roots(roots);
  std::vector<Complex> c(monic.coefficients().begin(), monic.coefficients().end());
  const Complex c0 = c[0];
  for (auto& v : c) v /= c0;
  c[0] = 1.0;
  const auto f = Polynomial::from_complex_coefficients(c);
  for (double eta : {0.1, 1.0}) {
    const auto rep = cartan_disks(f, 2.0, eta, 200);
    CHECK(rep.passed);
    CHECK(rep.zeros.size() == 2);
    CHECK(rep.radius_sum <= 4 * eta * 2.0 + 1e-12);
    CHECK(rep.h_eta == doctest::Approx(2 + std::log(3 * std::exp(1.0) / (2 * eta))));
  }
  CHECK_THROWS_AS(cartan_disks(Polynomial::from_roots(roots), 2.0, 1.0), Error);
}

TEST_CASE("tau examples") {
  const auto phi = MajorantFn::power(1.0, 1.0);
  const DiscreteMeasureSpace empty(2, {0.0, 0.0}, {0.0});
  const std::vector<double> o{0.0, 0.0}, far{100.0, 0.0};
  CHECK(tau(empty, phi, o) == 0.0);
  const DiscreteMeasureSpace one(2, {0.0, 0.0}, {1.0});
  CHECK(tau(one, phi, o) == doctest::Approx(1.0));
  CHECK(tau(one, phi, far) == 0.0);
}

TEST_CASE("gorin examples") {
  const auto phi = MajorantFn::power(1.0, 1.0);
  GorinParams params;
  params.alpha = 0.9;
  params.beta = 2.5;
  const DiscreteMeasureSpace light(2, {0.0, 0.0, 5.0, 0.0}, {0.0, 0.0});
  const std::vector<double> probes{1.0, 1.0, 3.0, -2.0};
  const auto none = gorin_cover(light, MajorantFn::power(1.0, 1.0), params, probes);
  CHECK(none.balls.empty());

  const DiscreteMeasureSpace two(2, {0.0, 0.0, 10.0, 0.0}, {1.0, 1.0});
  const auto cover = gorin_cover(two, phi, params);
  REQUIRE(!cover.balls.empty());
  CHECK(cover.taus[0] == doctest::Approx(1.0));
  CHECK(cover.balls[0].radius == doctest::Approx(2.5));
  // exhaustive oracle over the finite candidate radii {d(x, x_i)} and phi^-1(mass)
  const std::vector<double> atoms{0.0, 0.0, 10.0, 0.0};
  double best = 0;
  for (int a = 0; a < 2; ++a) {
    const std::vector<double> x{atoms[2 * a], atoms[2 * a + 1]};
    for (double t : {0.5, 1.0, 1.0 + 1e-9, 10.0, 2.0}) {
      if (two.closed_ball_mass(x, t) >= phi(t)) best = std::max(best, t);
    }
  }
  CHECK(best == doctest::Approx(cover.taus[0]));
}

TEST_CASE("property: gorin postconditions on 200 random measures") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.index(64);
    std::vector<double> pts, ms;
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(rng.uniform());
      pts.push_back(rng.uniform());
      ms.push_back(rng.uniform(0.05, 1.0));
    }
    const DiscreteMeasureSpace space(2, pts, ms);
    const auto phi = MajorantFn::power(space.total_mass() / rng.uniform(0.02, 0.5), 1.0);
    const GorinParams params;
    const auto cover = gorin_cover(space, phi, params);
    CHECK(cover.budget_used < space.total_mass());
    for (std::size_t k = 1; k < cover.taus.size(); ++k) CHECK(cover.taus[k] <= cover.taus[k - 1] * (1 + 1e-12));
    CHECK(cover.balls.size() <= n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> x{pts[2 * i], pts[2 * i + 1]};
      bool inside = false;
      for (const auto& b : cover.balls) inside |= euclidean_distance(x, b.center) <= b.radius;
      if (!inside) CHECK(tau(space, phi, x) == 0.0);
    }
  }
}

TEST_CASE("unit atoms: at most n balls and the tau-balls cover the support") {
  Rng rng(6);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.index(15);
    std::vector<double> pts, ms(n, 1.0);
    for (std::size_t i = 0; i < 2 * n; ++i) pts.push_back(rng.uniform(0, 2));
    const DiscreteMeasureSpace space(2, pts, ms);
    // phi(t) = t: every atom carries mass 1 >= phi(t) for t <= 1, so all are irregular
    const auto cover = gorin_cover(space, MajorantFn::power(1.0, 1.0), GorinParams{});
    CHECK(cover.balls.size() <= n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> x{pts[2 * i], pts[2 * i + 1]};
      bool inside = false;
      for (std::size_t k = 0; k < cover.balls.size(); ++k)
        inside |= euclidean_distance(x, cover.balls[k].center) <= cover.taus[k] + 1e-12 ||
                  euclidean_distance(x, cover.balls[k].center) <= cover.balls[k].radius;
      CHECK(inside);
    }
  }
}

TEST_CASE("property: scale equivariance") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> pts, scaled, ms;
    const double c = rng.uniform(0.2, 5.0);
    for (int i = 0; i < 12; ++i) {
      pts.push_back(rng.uniform());
      pts.push_back(rng.uniform());
      scaled.push_back(c * pts[pts.size() - 2]);
      scaled.push_back(c * pts.back());
      ms.push_back(1.0);
    }
    const double H = rng.uniform(0.1, 0.5);
    const auto a = gorin_cover(DiscreteMeasureSpace(2, pts, ms), MajorantFn::power_over(H, 1.0), GorinParams{});
    const auto b = gorin_cover(DiscreteMeasureSpace(2, scaled, ms), MajorantFn::power_over(c * H, 1.0), GorinParams{});
    REQUIRE(a.balls.size() == b.balls.size());
    for (std::size_t k = 0; k < a.balls.size(); ++k)
      CHECK(b.balls[k].radius == doctest::Approx(c * a.balls[k].radius).epsilon(1e-9));
  }
}

TEST_CASE("potential and cor1 examples") {
  const DiscreteMeasureSpace one(2, {1.0, 1.0}, {1.0});
  const std::vector<double> x{4.0, 5.0};
  CHECK(potential(one, x) == doctest::Approx(std::log(5.0)));
  const DiscreteMeasureSpace two(2, {1.0, 0.0, 0.0, std::exp(1.0)}, {1.0, 1.0});
  const std::vector<double> o{0.0, 0.0};
  CHECK(potential(two, o) == doctest::Approx(1.0));
  const DiscreteMeasureSpace empty(2, {}, {});
  CHECK(cor1_verify(empty, 0.25, 1.0, GorinParams{}, square_grid(o, 1.0, 20)).passed);
  // a tight cluster far from the grid points
  const DiscreteMeasureSpace cluster(2, {0.0, 0.0, 1e-3, 0.0, 0.0, 1e-3}, {1.0, 1.0, 1.0});
  const std::vector<double> grid{2.0, 0.0, 0.0, 2.0, -2.0, -2.0};
  const auto rep = cor1_verify(cluster, 0.5, 1.0, GorinParams{}, grid);
  CHECK(rep.violations == 0);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::vector<double> g{grid[2 * i], grid[2 * i + 1]};
    CHECK(potential(cluster, g) >= 3 * std::log(0.5));
  }
}

TEST_CASE("cartan examples") {
  // H(3e/2) = 2 + ln 1
  CHECK(cartan_h(1.5 * std::exp(1.0)) == doctest::Approx(2.0));
  const auto one = Polynomial::from_complex_coefficients({Complex(1.0, 0.0)});
  const auto r1 = cartan_disks(one, 2.0, 1.0, 100);
  CHECK(r1.zeros.empty());
  CHECK(r1.disks.empty());
  CHECK(r1.lower_bound == doctest::Approx(0.0));
  CHECK(r1.passed);
  const double R = 1.0;
  const Complex w{0.0, 2 * std::exp(1.0) * R * 1.1};
  const auto lin = Polynomial::from_complex_coefficients({Complex(1.0, 0.0), -1.0 / w});
  const auto r2 = cartan_disks(lin, R, 1.0, 200);
  CHECK(r2.zeros.empty());
  CHECK(r2.passed);
  CHECK(r2.min_margin > 0);
  // |ln|1 - z/w|| <= -ln(1 - R/|w|) on |z| <= R
  CHECK(r2.min_margin >= r2.log_max_modulus * r2.h_eta + std::log(1 - R / std::abs(w)) - 1e-12);
}

TEST_CASE("property: half-radius disks cover the zeros") {
  Rng rng(8);
  for (int t = 0; t < 25; ++t) {
    std::vector<Complex> roots;
    const int deg = 1 + static_cast<int>(rng.index(8));
    for (int j = 0; j < deg; ++j) roots.push_back(std::polar(4 * std::sqrt(rng.uniform()), 2 * M_PI * rng.uniform()));
    auto monic = Polynomial::from_roots(roots);
    std::vector<Complex> c(monic.coefficients().begin(), monic.coefficients().end());
    const Complex c0 = c[0];
    for (auto& v : c) v /= c0;
    c[0] = 1.0;
    const auto rep = cartan_disks(Polynomial::from_complex_coefficients(c), 2.0, 0.5, 120);
    CHECK(rep.zeros_covered);
    for (const auto& z : rep.zeros) {
      bool in = false;
      for (const auto& d : rep.disks) in |= std::abs(z - d.center) <= d.radius / 2 + 1e-12;
      CHECK(in);
    }
    CHECK(rep.passed);
  }
}
