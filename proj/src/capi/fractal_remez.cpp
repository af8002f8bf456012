#include "fractal_remez/fractal_remez.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "core/acceptance.hpp"
#include "core/experiment.hpp"
#include "core/registry.hpp"
#include "core/remez.hpp"

struct fr_set {
  fr::FractalSet set;
};

struct fr_poly {
  fr::Polynomial poly;
};

namespace {

thread_local std::string g_last_error;

fr_status record(fr_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
fr_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return FR_OK;
  } catch (const fr::Error& e) {
    return record(static_cast<fr_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return record(FR_ERR_OVERFLOW, "out of memory");
  } catch (const std::exception& e) {
    return record(FR_ERR_INTERNAL, e.what());
  } catch (...) {
    return record(FR_ERR_INTERNAL, "unknown exception");
  }
}

void need(bool ok, const char* what) {
  if (!ok) fr::fail(fr::ErrorCode::InvalidArgument, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string listing(const std::vector<std::pair<std::string, std::string>>& items) {
  std::string out;
  for (const auto& [id, desc] : items) out += id + "\t" + desc + "\n";
  return out;
}

}  // namespace

extern "C" {

const char* fr_last_error(void) { return g_last_error.c_str(); }
const char* fr_version(void) { return "0.1.0"; }
void fr_string_free(char* s) { std::free(s); }

fr_status fr_set_preset(const char* id, int depth, double total_mass, fr_set** out) {
  return guarded([&] {
    need(id && out, "null argument");
    *out = new fr_set{fr::make_set(id, depth, total_mass)};
  });
}

fr_status fr_set_product(const fr_set* a, const fr_set* b, fr_set** out) {
  return guarded([&] {
    need(a && b && out, "null argument");
    *out = new fr_set{fr::product_set(a->set, b->set)};
  });
}

void fr_set_free(fr_set* set) { delete set; }

fr_status fr_set_info_get(const fr_set* set, fr_set_info* out) {
  return guarded([&] {
    need(set && out, "null argument");
    const auto& X = set->set;
    *out = {X.ambient_dim(), X.depth(), X.size(), X.s(), X.diam(), X.cell_size(), X.total_mass()};
  });
}

fr_status fr_set_points(const fr_set* set, double* out, size_t capacity) {
  return guarded([&] {
    need(set && out, "null argument");
    const auto pts = set->set.points();
    if (capacity < pts.size()) fr::fail(fr::ErrorCode::DimensionMismatch, "output buffer too small");
    std::memcpy(out, pts.data(), pts.size() * sizeof(double));
  });
}

fr_status fr_set_ball_measure(const fr_set* set, const double* x, double r, double* out) {
  return guarded([&] {
    need(set && x && out, "null argument");
    *out = set->set.ball_measure({x, static_cast<std::size_t>(set->set.ambient_dim())}, r);
  });
}

fr_status fr_set_regularity(const fr_set* set, size_t samples, double r_min, double r_max, uint64_t seed,
                            double* a_hat, double* b_hat) {
  return guarded([&] {
    need(set && a_hat && b_hat, "null argument");
    const auto est = fr::estimate_regularity(set->set, samples, r_min, r_max, seed);
    *a_hat = est.a_hat;
    *b_hat = est.b_hat;
  });
}

fr_status fr_set_write_csv(const fr_set* set, const char* path) {
  return guarded([&] {
    need(set && path, "null argument");
    std::ofstream f(path, std::ios::binary);
    if (!f) fr::fail(fr::ErrorCode::InvalidArgument, std::string("cannot open '") + path + "'");
    set->set.write_csv(f);
  });
}

fr_status fr_poly_chebyshev(int k, fr_poly** out) {
  return guarded([&] {
    need(out != nullptr, "null argument");
    *out = new fr_poly{fr::chebyshev(k)};
  });
}

fr_status fr_poly_from_coeffs(int num_vars, int degree, const double* coeffs, size_t count, fr_poly** out) {
  return guarded([&] {
    need(out && (coeffs || count == 0), "null argument");
    *out = new fr_poly{fr::Polynomial::from_coefficients(num_vars, degree, std::vector<double>(coeffs, coeffs + count))};
  });
}

void fr_poly_free(fr_poly* p) { delete p; }

fr_status fr_poly_eval(const fr_poly* p, const double* x, double* out) {
  return guarded([&] {
    need(p && out && (x || p->poly.num_vars() == 0), "null argument");
    *out = p->poly.eval({x, static_cast<std::size_t>(p->poly.num_vars())});
  });
}

fr_status fr_poly_degree(const fr_poly* p, int* out) {
  return guarded([&] {
    need(p && out, "null argument");
    *out = p->poly.degree();
  });
}

fr_status fr_bound_bg(int n, int k, double lambda, double* out) {
  return guarded([&] {
    need(out != nullptr, "null argument");
    *out = fr::bg_bound(n, k, lambda);
  });
}

fr_status fr_bound_simple(int n, int k, double lambda, double* out) {
  return guarded([&] {
    need(out != nullptr, "null argument");
    *out = fr::simple_bound(n, k, lambda);
  });
}

fr_status fr_run_config_json(const char* config_json, const uint64_t* seed, const char* out_dir, int* exit_code,
                             char** report_json) {
  return guarded([&] {
    need(config_json && exit_code, "null argument");
    std::optional<std::uint64_t> s;
    if (seed) s = *seed;
    const auto res = fr::run_experiment(config_json, s);
    if (out_dir) fr::write_run(res, out_dir);
    else if (!res.out_dir.empty()) fr::write_run(res, res.out_dir);
    *exit_code = res.exit_code;
    if (report_json) *report_json = dup(res.report_json);
  });
}

fr_status fr_suite_acceptance(const char* const* overrides, size_t count, fr_line_fn progress, void* user, int* failed,
                              char** report) {
  return guarded([&] {
    need(failed && (overrides || count == 0), "null argument");
    fr::Thresholds t;
    for (size_t i = 0; i < count; ++i) {
      const std::string item = overrides[i] ? overrides[i] : "";
      const auto eq = item.find('=');
      if (eq == std::string::npos) fr::fail(fr::ErrorCode::Config, "override '" + item + "' is not name=value");
      const std::string name = item.substr(0, eq), text = item.substr(eq + 1);
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (text.empty() || *end != '\0') fr::fail(fr::ErrorCode::Config, "override '" + item + "' has no numeric value");
      if (!fr::set_threshold(t, name, v)) fr::fail(fr::ErrorCode::Config, "unknown threshold '" + name + "'");
    }
    std::string text;
    int bad = 0;
    fr::run_acceptance(t, [&](const fr::CriterionResult& r) {
      const std::string line = fr::format_result(r);
      text += line + "\n";
      bad += r.pass ? 0 : 1;
      if (progress) progress(line.c_str(), user);
    });
    *failed = bad;
    if (report) *report = dup(text);
  });
}

fr_status fr_list_sets(char** out) {
  return guarded([&] {
    need(out != nullptr, "null argument");
    *out = dup(listing(fr::list_sets()));
  });
}

fr_status fr_list_majorants(char** out) {
  return guarded([&] {
    need(out != nullptr, "null argument");
    *out = dup(listing(fr::list_majorants()));
  });
}

fr_status fr_list_thresholds(char** out) {
  return guarded([&] {
    need(out != nullptr, "null argument");
    std::string s;
    for (const auto& n : fr::threshold_names()) s += n + "\n";
    *out = dup(s);
  });
}

}  // extern "C"
