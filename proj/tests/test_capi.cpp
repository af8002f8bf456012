#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fractal_remez/fractal_remez.h"

TEST_CASE("set handles") {
  fr_set* s = nullptr;
  REQUIRE(fr_set_preset("cantor:1/3", 5, 1.0, &s) == FR_OK);
  fr_set_info info{};
  REQUIRE(fr_set_info_get(s, &info) == FR_OK);
  CHECK(info.points == 32);
  CHECK(info.ambient_dim == 1);
  CHECK(info.s == doctest::Approx(std::log(2.0) / std::log(3.0)));
  std::vector<double> pts(info.points);
  CHECK(fr_set_points(s, pts.data(), pts.size()) == FR_OK);
  CHECK(fr_set_points(s, pts.data(), 3) == FR_ERR_DIMENSION_MISMATCH);
  double m = 0;
  const double x = 0.0;
  CHECK(fr_set_ball_measure(s, &x, 0.34, &m) == FR_OK);
  CHECK(m == doctest::Approx(0.5));
  fr_set* p = nullptr;
  CHECK(fr_set_product(s, s, &p) == FR_OK);
  CHECK(fr_set_info_get(p, &info) == FR_OK);
  CHECK(info.points == 1024);
  double a = 0, b = 0;
  CHECK(fr_set_regularity(s, 100, 0.05, 1.0, 1, &a, &b) == FR_OK);
  CHECK(a >= b);
  fr_set_free(p);
  fr_set_free(s);
}

TEST_CASE("errors carry codes and messages") {
  fr_set* s = nullptr;
  CHECK(fr_set_preset("cantr:1/3", 5, 1.0, &s) == FR_ERR_CONFIG);
  CHECK(std::string(fr_last_error()).find("cantr") != std::string::npos);
  CHECK(fr_set_preset(nullptr, 5, 1.0, &s) == FR_ERR_INVALID_ARGUMENT);
  double v = 0;
  CHECK(fr_bound_bg(1, 3, 0.0, &v) == FR_ERR_DOMAIN);
}

TEST_CASE("polynomials and bounds") {
  fr_poly* t = nullptr;
  REQUIRE(fr_poly_chebyshev(5, &t) == FR_OK);
  double v = 0, x = 0.3;
  CHECK(fr_poly_eval(t, &x, &v) == FR_OK);
  CHECK(v == doctest::Approx(std::cos(5 * std::acos(0.3))));
  int d = 0;
  CHECK(fr_poly_degree(t, &d) == FR_OK);
  CHECK(d == 5);
  fr_poly_free(t);
  const double c[3] = {1.0, 2.0, 3.0};  // 1 + 2x + 3y
  fr_poly* q = nullptr;
  REQUIRE(fr_poly_from_coeffs(2, 1, c, 3, &q) == FR_OK);
  const double xy[2] = {0.5, -1.0};
  CHECK(fr_poly_eval(q, xy, &v) == FR_OK);
  CHECK(v == doctest::Approx(1 + 1 - 3));
  fr_poly_free(q);
  CHECK(fr_poly_from_coeffs(2, 1, c, 2, &q) != FR_OK);
  CHECK(fr_bound_simple(2, 3, 0.5, &v) == FR_OK);
  CHECK(v == doctest::Approx(4096.0));
}

TEST_CASE("config runs and listings") {
  int code = -1;
  char* report = nullptr;
  CHECK(fr_run_config_json(R"({"experiment":"covering","mode":"cartan","degree":3,"grid":50})", nullptr, nullptr, &code,
                           &report) == FR_OK);
  CHECK(code == 0);
  CHECK(std::string(report).find("\"passed\": true") != std::string::npos);
  fr_string_free(report);
  CHECK(fr_run_config_json("{}", nullptr, nullptr, &code, nullptr) == FR_ERR_CONFIG);
  char* sets = nullptr;
  CHECK(fr_list_sets(&sets) == FR_OK);
  CHECK(std::string(sets).find("cantor") != std::string::npos);
  fr_string_free(sets);
  const char* bad[] = {"no_such_threshold=1"};
  int failed = 0;
  CHECK(fr_suite_acceptance(bad, 1, nullptr, nullptr, &failed, nullptr) == FR_ERR_CONFIG);
}
