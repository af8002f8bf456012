#include <doctest.h>

#include <cmath>
#include <sstream>

#include "core/fractal.hpp"
#include "core/registry.hpp"

using namespace fr;

namespace {

// brute force open-ball mass
double scan_mass(const FractalSet& X, std::span<const double> x, double r) {
  double m = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double d2 = 0;
    for (int j = 0; j < X.ambient_dim(); ++j) {
      const double t = X.point(i)[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)];
      d2 += t * t;
    }
    if (std::sqrt(d2) < r) m += X.mass(i);
  }
  return m;
}

}  // namespace

TEST_CASE("cantor construction") {
  const auto X = make_set("cantor:1/3", 6);
  CHECK(X.size() == 64);
  CHECK(X.ambient_dim() == 1);
  CHECK(X.s() == doctest::Approx(std::log(2.0) / std::log(3.0)));
  CHECK(X.diam() == doctest::Approx(1.0));
  CHECK(X.cell_size() == doctest::Approx(std::pow(3.0, -6)));
  double total = 0;
  for (std::size_t i = 0; i < X.size(); ++i) total += X.mass(i);
  CHECK(total == doctest::Approx(1.0));
  // representatives are left endpoints of depth-6 triadic cells: digits 0 or 2
  for (std::size_t i = 0; i < X.size(); ++i) {
    double v = X.point(i)[0] * std::pow(3.0, 6);
    CHECK(std::abs(v - std::round(v)) < 1e-7);
    long long m = std::llround(v);
    for (int d = 0; d < 6; ++d, m /= 3) CHECK(m % 3 != 1);
  }
}

TEST_CASE("similarity dimension of the presets") {
  CHECK(make_set("dust2d:1/4", 3).s() == doctest::Approx(1.0));
  CHECK(make_set("cube:2", 3).s() == doctest::Approx(2.0));
  const auto P = make_set("cantor:1/3*cantor:1/3", 4);
  CHECK(P.ambient_dim() == 2);
  CHECK(P.size() == 256);
  CHECK(P.s() == doctest::Approx(2 * std::log(2.0) / std::log(3.0)));
  CHECK(P.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("indexed ball measure equals a linear scan") {
  Rng rng(3);
  for (const char* id : {"cantor:1/3", "dust2d:1/4", "cantor:1/3*cantor:1/3"}) {
    const auto X = make_set(id, 5);
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(static_cast<std::size_t>(X.ambient_dim()));
      for (auto& v : x) v = rng.uniform(-0.1, 1.1);
      const double r = std::exp(rng.uniform(std::log(1e-3), std::log(2.0)));
      CHECK(X.ball_measure(x, r) == doctest::Approx(scan_mass(X, x, r)).epsilon(1e-12));
      CHECK(X.ball_measure_scan(x, r) == doctest::Approx(scan_mass(X, x, r)).epsilon(1e-12));
    }
  }
}

TEST_CASE("transform and restriction") {
  const auto X = make_set("cantor:1/3", 5);
  const std::vector<double> shift{-1.0};
  const auto Y = X.transformed(2.0, shift);
  CHECK(Y.size() == X.size());
  CHECK(Y.diam() == doctest::Approx(2.0));
  CHECK(Y.point(3)[0] == doctest::Approx(2 * X.point(3)[0] - 1));
  const std::vector<double> lo{0.0}, hi{1.0 / 3};
  const auto Z = X.restricted(lo, hi);
  CHECK(Z.size() == 16);
  CHECK(Z.total_mass() == doctest::Approx(0.5));
}

TEST_CASE("regularity estimate is scale-consistent") {
  const auto X = make_set("cantor:1/3", 9);
  const auto est = estimate_regularity(X, 500, 4 * X.cell_size(), 1.0, 1);
  CHECK(est.a_hat >= est.b_hat);
  CHECK(est.b_hat > 0);
  CHECK(est.a_hat / est.b_hat < 25);
  // mass of a centred ball of radius 3^-j is at least 2^-j
  for (int j = 1; j <= 6; ++j) {
    const double r = std::pow(3.0, -j);
    CHECK(X.ball_measure(X.point(0), r * 1.0001) >= std::pow(2.0, -j) - 1e-12);
  }
}

TEST_CASE("registry errors") {
  CHECK_THROWS_AS(make_set("cantr:1/3", 4), Error);
  try {
    make_set("cantr:1/3", 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    CHECK(std::string(e.what()).find("cantr:1/3") != std::string::npos);
  }
  CHECK_THROWS_AS(make_set("cantor:0.7", 4), Error);
  CHECK_THROWS_AS(make_set("cube:2", 40), Error);
  CHECK(!list_sets().empty());
  CHECK(!list_majorants().empty());
}

TEST_CASE("csv round trip has one row per point") {
  const auto X = make_set("dust2d:1/4", 2);
  std::ostringstream out;
  X.write_csv(out);
  const std::string s = out.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(X.size()) + 1);
}

TEST_CASE("construction examples") {
  const auto c1 = make_set("cantor:1/3", 1);
  CHECK(c1.size() == 2);
  CHECK(c1.mass(0) == doctest::Approx(0.5));
  CHECK(c1.mass(1) == doctest::Approx(0.5));
  CHECK(c1.s() == doctest::Approx(0.63093).epsilon(1e-5));
  for (int d : {1, 4, 7}) {
    const auto I = make_set("cube:1", d);
    CHECK(I.s() == doctest::Approx(1.0));
    for (std::size_t i = 0; i < I.size(); ++i) CHECK(I.mass(i) == doctest::Approx(1.0 / static_cast<double>(I.size())));
  }
  CHECK(make_set("dust2d:1/4", 4).size() == 256);
}

TEST_CASE("ball measure examples") {
  const auto X = make_set("cantor:1/3", 6);
  const std::vector<double> zero{0.0};
  CHECK(X.ball_measure(X.point(5), X.diam() + 1) == doctest::Approx(X.total_mass()));
  const std::vector<double> gap{0.5};  // middle third is empty
  CHECK(X.ball_measure(gap, 0.1) == 0.0);
  CHECK(X.ball_measure(zero, 1.0 / 3 + 1e-9) == doctest::Approx(0.5));
}

TEST_CASE("mass conservation under refinement") {
  for (const char* id : {"cantor:1/3", "dust2d:1/4", "cube:1", "cube:2", "cantor:1/3*cube:1"}) {
    for (int d = 1; d <= 4; ++d) {
      const auto A = make_set(id, d), B = make_set(id, d + 1);
      CHECK(A.total_mass() == doctest::Approx(B.total_mass()).epsilon(1e-12));
      const std::size_t m = B.size() / A.size();
      for (std::size_t c = 0; c < A.size(); ++c) {
        double sum = 0;
        for (std::size_t i = 0; i < m; ++i) sum += B.mass(c * m + i);
        CHECK(sum == doctest::Approx(A.mass(c)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("product examples") {
  const auto C = make_set("cantor:1/3", 3), I = make_set("cube:1", 3);
  const auto P = product_set(C, I);
  CHECK(P.s() == doctest::Approx(C.s() + 1));
  const auto Q = product_set(make_set("cantor:1/3", 2, 2.0), make_set("cantor:1/3", 2, 3.0));
  CHECK(Q.total_mass() == doctest::Approx(6.0));
  CHECK(Q.mass(0) == doctest::Approx(0.5 * 0.75));
  Rng rng(4);
  const auto CC = product_set(C, C);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> x{rng.uniform(), rng.uniform()};
    const double r = rng.uniform(0.01, 0.6);
    const std::vector<double> x1{x[0]}, x2{x[1]};
    CHECK(CC.ball_measure(x, r) <= C.ball_measure(x1, r) * C.ball_measure(x2, r) + 1e-12);
  }
}

TEST_CASE("regularity examples") {
  const auto I = make_set("cube:1", 10);
  // the cloud adds up to one cell (2^-10) to a ball of radius >= 0.05
  const auto est = estimate_regularity(I, 500, 0.05, 0.2, 2);
  CHECK(est.b_hat >= 1 - 0.03);
  CHECK(est.a_hat <= 2 + 0.03);
  const FractalSet single(1, {0.5}, {1.0}, 1.0, 1.0);
  CHECK_THROWS_AS(estimate_regularity(single, 10, 0.1, 1.0, 1), Error);
}

TEST_CASE("ahlfors sandwich on Cantor depth 10") {
  const auto X = make_set("cantor:1/3", 10);
  const auto est = estimate_regularity(X, 1000, 4 * std::pow(3.0, -10), 1.0, 5);
  CHECK(est.a_hat / est.b_hat < 25);
  const auto X8 = make_set("cantor:1/3", 8);
  const auto est8 = estimate_regularity(X8, 1000, 4 * std::pow(3.0, -8), 1.0, 5);
  CHECK(est.a_hat / est8.a_hat == doctest::Approx(1.0).epsilon(0.1));
  CHECK(est.b_hat / est8.b_hat == doctest::Approx(1.0).epsilon(0.1));
}
