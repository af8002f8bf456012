#include "core/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/covering.hpp"
#include "core/extension.hpp"
#include "core/registry.hpp"
#include "core/remez.hpp"

namespace fr {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::Config, "config: " + msg); }

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) config_error(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) config_error("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error("key '" + key + "' has the wrong type");
  }
}

template <class T>
T require(const json& j, const std::string& key) {
  if (!j.contains(key)) config_error("missing key '" + key + "'");
  return get_or<T>(j, key, T{});
}

double exponent(const json& j, const std::string& key) {
  if (!j.contains(key)) return kInf;
  const auto& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInf;
    config_error("exponent '" + key + "' must be 1, 2 or \"inf\"");
  }
  if (!v.is_number()) config_error("exponent '" + key + "' must be 1, 2 or \"inf\"");
  const double e = v.get<double>();
  if (e != 1.0 && e != 2.0) config_error("exponent '" + key + "' must be 1, 2 or \"inf\"");
  return e;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string exponent_text(double e) { return std::isinf(e) ? "inf" : num(e); }

std::string dat(const std::string& x_label, const std::string& y_label,
                const std::vector<std::pair<double, double>>& rows) {
  std::string out = "# " + x_label + " " + y_label + "\n";
  for (const auto& [x, y] : rows) out += num(x) + " " + num(y) + "\n";
  return out;
}

FractalSet load_set(const json& cfg) {
  const auto id = require<std::string>(cfg, "set");
  const int depth = get_or<int>(cfg, "depth", 8);
  const double mass = get_or<double>(cfg, "mass", 1.0);
  if (!(mass > 0.0)) config_error("mass must be positive");
  FractalSet X = make_set(id, depth, mass);
  if (cfg.contains("transform")) {
    const auto& tr = cfg.at("transform");
    check_keys(tr, {"scale", "shift"}, "transform");
    const double scale = get_or<double>(tr, "scale", 1.0);
    auto shift = get_or<std::vector<double>>(tr, "shift", std::vector<double>(static_cast<std::size_t>(X.ambient_dim()), 0.0));
    if (!(scale > 0.0) || shift.size() != static_cast<std::size_t>(X.ambient_dim()))
      config_error("transform needs scale > 0 and one shift per coordinate");
    X = X.transformed(scale, shift);
  }
  return X;
}

json set_info(const FractalSet& X) {
  return {{"name", X.name()}, {"ambient_dim", X.ambient_dim()}, {"depth", X.depth()}, {"points", X.size()},
          {"s", X.s()},       {"diam", X.diam()},               {"cell_size", X.cell_size()},
          {"total_mass", X.total_mass()}};
}

std::vector<Polynomial> load_polynomials(const json& cfg, int n, std::uint64_t seed) {
  if (!cfg.contains("polynomial")) config_error("missing key 'polynomial'");
  const auto& spec = cfg.at("polynomial");
  check_keys(spec, {"seed", "degree", "count", "coeffs", "chebyshev"}, "polynomial");
  if (spec.contains("chebyshev")) {
    if (n != 1) config_error("chebyshev polynomials need a one-dimensional set");
    const int k = get_or<int>(spec, "chebyshev", 0);
    if (k < 0) config_error("chebyshev degree must be non-negative");
    return {chebyshev(k)};
  }
  const int degree = require<int>(spec, "degree");
  if (degree < 0 || degree > 30) config_error("polynomial degree must lie in [0, 30]");
  if (spec.contains("coeffs")) {
    auto c = get_or<std::vector<double>>(spec, "coeffs", {});
    if (c.size() != monomial_count(n, degree))
      config_error("polynomial needs " + std::to_string(monomial_count(n, degree)) + " coefficients");
    return {Polynomial::from_coefficients(n, degree, std::move(c))};
  }
  const int count = get_or<int>(spec, "count", 1);
  if (count < 1 || count > 100000) config_error("polynomial count must lie in [1, 100000]");
  Rng rng(get_or<std::uint64_t>(spec, "seed", seed));
  std::vector<Polynomial> out;
  for (int i = 0; i < count; ++i) out.push_back(random_polynomial(n, degree, rng));
  return out;
}

std::vector<double> sample_values(const json& cfg, const FractalSet& X, std::uint64_t seed) {
  std::vector<double> v(X.size());
  if (cfg.contains("function")) {
    const auto f = make_function(require<std::string>(cfg, "function"));
    for (std::size_t i = 0; i < X.size(); ++i) v[i] = f(X.point(i));
  } else if (cfg.contains("polynomial")) {
    const auto ps = load_polynomials(cfg, X.ambient_dim(), seed);
    for (std::size_t i = 0; i < X.size(); ++i) v[i] = ps.front().eval(X.point(i));
  } else {
    config_error("need 'function' or 'polynomial'");
  }
  return v;
}

Majorant load_omega(const json& cfg) { return make_majorant(get_or<std::string>(cfg, "omega", "power:1")); }

CubeFamily load_family(const json& cfg, const FractalSet& X, std::uint64_t seed, std::size_t default_centers) {
  CubeFamilyOptions opt;
  opt.r_min = get_or<double>(cfg, "r_min", 0.0);
  opt.max_centers = get_or<std::size_t>(cfg, "max_centers", default_centers);
  opt.seed = seed;
  try {
    return CubeFamily::build(X, opt);
  } catch (const Error& e) {
    config_error(e.what());
  }
}

json cube_json(const Cube& q) { return {{"center", q.center}, {"radius", q.radius}}; }

// ---------------------------------------------------------------------------

void run_remez(const json& cfg, std::uint64_t seed, RunResult& out, json& report) {
  check_keys(cfg, {"experiment", "id", "set", "depth", "mass", "transform", "polynomial", "q", "r", "V", "omega_box",
                   "budget", "seed"},
             "remez config");
  const FractalSet X = load_set(cfg);
  const int n = X.ambient_dim();
  const double q = exponent(cfg, "q"), r = exponent(cfg, "r");
  const auto budget = get_or<std::size_t>(cfg, "budget", kDefaultSupBudget);
  if (budget < 16) config_error("budget must be at least 16");

  Region V = Box{X.box_lo(), X.box_hi()};
  if (cfg.contains("V")) {
    const auto& v = cfg.at("V");
    check_keys(v, {"lo", "hi", "center", "radius"}, "V");
    if (v.contains("radius")) V = Ball{require<std::vector<double>>(v, "center"), require<double>(v, "radius")};
    else V = Box{require<std::vector<double>>(v, "lo"), require<std::vector<double>>(v, "hi")};
    if (region_dim(V) != n) config_error("V has the wrong dimension");
  }
  FractalSet omega = X;
  if (cfg.contains("omega_box")) {
    const auto& b = cfg.at("omega_box");
    check_keys(b, {"lo", "hi"}, "omega_box");
    const auto lo = require<std::vector<double>>(b, "lo"), hi = require<std::vector<double>>(b, "hi");
    if (lo.size() != static_cast<std::size_t>(n) || hi.size() != lo.size()) config_error("omega_box has the wrong dimension");
    omega = X.restricted(lo, hi);
    if (omega.size() == 0) config_error("omega_box selects no cloud points");
  }
  const auto polys = load_polynomials(cfg, n, seed);

  out.summary_csv = "experiment,n,k,s,lambda,q,r,bound_bg,bound_simple,empirical_ratio\n";
  json reports = json::array();
  std::vector<std::pair<double, double>> ratio_rows;
  std::vector<RemezReport> reps(polys.size());
  try {
    parallel_for(polys.size(), [&](std::size_t i) { reps[i] = empirical_remez(polys[i], V, omega, q, r, budget); });
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Domain || e.code() == ErrorCode::Empty || e.code() == ErrorCode::DimensionMismatch)
      config_error(e.what());
    throw;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const auto& rep = reps[i];
    reports.push_back({{"index", i},
                       {"n", rep.n},
                       {"k", rep.k},
                       {"s", rep.s},
                       {"q", exponent_text(rep.q)},
                       {"r", exponent_text(rep.r)},
                       {"lambda", number(rep.lambda)},
                       {"bound_bg", number(rep.bound_bg)},
                       {"bound_simple", number(rep.bound_simple)},
                       {"lhs", number(rep.lhs)},
                       {"rhs", number(rep.rhs)},
                       {"empirical_ratio", number(rep.empirical_ratio)},
                       {"hypothesis_violated", rep.hypothesis_violated}});
    out.summary_csv += out.id + "," + std::to_string(rep.n) + "," + std::to_string(rep.k) + "," + num(rep.s) + "," +
                       num(rep.lambda) + "," + exponent_text(rep.q) + "," + exponent_text(rep.r) + "," +
                       num(rep.bound_bg) + "," + num(rep.bound_simple) + "," + num(rep.empirical_ratio) + "\n";
    ratio_rows.emplace_back(static_cast<double>(i), rep.empirical_ratio);
    worst = std::max(worst, rep.empirical_ratio);
    if (rep.hypothesis_violated) out.failures.push_back("polynomial " + std::to_string(i) + " vanishes on omega");
    if (std::isinf(q) && std::isinf(r) && rep.empirical_ratio < 1.0 - 1e-9)
      out.failures.push_back("polynomial " + std::to_string(i) + ": sup ratio below 1 although omega lies in V");
    if (std::isinf(q) && std::isinf(r) && std::abs(rep.s - n) < 1e-12 && std::isfinite(rep.bound_simple) &&
        rep.empirical_ratio > rep.bound_simple * (1.0 + 1e-9))
      out.failures.push_back("polynomial " + std::to_string(i) + ": ratio exceeds (4n/lambda)^k");
  }
  report["set"] = set_info(X);
  report["omega_points"] = omega.size();
  report["budget"] = budget;
  report["max_ratio"] = number(worst);
  report["reports"] = reports;

  // sup over V against the sampling budget, first polynomial
  std::vector<std::pair<double, double>> conv;
  for (std::size_t b = 16; b <= budget; b *= 2)
    conv.emplace_back(static_cast<double>(b), sup_norm(polys.front(), V, b));
  out.files.emplace_back("ratios.dat", dat("polynomial_index", "empirical_ratio", ratio_rows));
  out.files.emplace_back("sup_vs_budget.dat", dat("budget", "sup_V_abs_p", conv));
}

void run_covering(const json& cfg, std::uint64_t seed, RunResult& out, json& report) {
  const auto mode = get_or<std::string>(cfg, "mode", "cor1");
  GorinParams params;
  params.gamma = get_or<double>(cfg, "gamma", params.gamma);
  params.alpha = get_or<double>(cfg, "alpha", params.alpha);
  params.beta = get_or<double>(cfg, "beta", params.beta);
  try {
    validate_gorin_params(params);
  } catch (const Error& e) {
    config_error(e.what());
  }
  report["params"] = {{"gamma", params.gamma}, {"alpha", params.alpha}, {"beta", params.beta}};
  std::vector<std::pair<double, double>> radii;

  if (mode == "cor1") {
    check_keys(cfg, {"experiment", "id", "mode", "set", "depth", "mass", "transform", "atoms", "H", "s", "grid",
                     "gamma", "alpha", "beta", "seed"},
               "covering config");
    std::vector<double> pts, ms;
    int dim = 2;
    if (cfg.contains("set")) {
      const FractalSet X = load_set(cfg);
      dim = X.ambient_dim();
      if (dim > 2) config_error("covering works on sets in R or R^2");
      pts.assign(X.points().begin(), X.points().end());
      ms.assign(X.masses().begin(), X.masses().end());
      report["set"] = set_info(X);
    } else {
      const auto& a = cfg.contains("atoms") ? cfg.at("atoms") : json::object();
      check_keys(a, {"count", "seed", "mass"}, "atoms");
      const int count = get_or<int>(a, "count", 16);
      if (count < 0 || count > 100000) config_error("atom count must lie in [0, 100000]");
      Rng rng(get_or<std::uint64_t>(a, "seed", seed));
      const double m = get_or<double>(a, "mass", 1.0);
      for (int i = 0; i < count; ++i) {
        pts.push_back(rng.uniform());
        pts.push_back(rng.uniform());
        ms.push_back(m);
      }
    }
    const double H = get_or<double>(cfg, "H", 0.25), s = get_or<double>(cfg, "s", 1.0);
    if (!(H > 0.0) || !(s > 0.0)) config_error("H and s must be positive");
    const auto m = get_or<std::size_t>(cfg, "grid", 100);
    if (m < 2 || m > 2000) config_error("grid must lie in [2, 2000]");
    std::vector<double> probes;
    if (dim == 2) {
      const std::vector<double> mid{0.5, 0.5};
      probes = square_grid(mid, 0.75, m);
    } else {
      for (std::size_t i = 0; i < m; ++i) probes.push_back(-0.25 + 1.5 * static_cast<double>(i) / static_cast<double>(m - 1));
    }
    const DiscreteMeasureSpace space(dim, pts, ms);
    const auto rep = cor1_verify(space, H, s, params, probes);
    json balls = json::array();
    for (std::size_t k = 0; k < rep.cover.balls.size(); ++k) {
      balls.push_back({{"center", rep.cover.balls[k].center}, {"radius", rep.cover.balls[k].radius},
                       {"tau", rep.cover.taus[k]}});
      radii.emplace_back(static_cast<double>(k), rep.cover.balls[k].radius);
    }
    report["mode"] = "cor1";
    report["atoms"] = ms.size();
    report["H"] = H;
    report["s"] = s;
    report["total_mass"] = rep.total_mass;
    report["budget_used"] = rep.cover.budget_used;
    report["radius_power_sum"] = rep.radius_power_sum;
    report["radius_bound"] = rep.radius_bound;
    report["potential_bound"] = number(rep.potential_bound);
    report["points_checked"] = rep.points_checked;
    report["violations"] = rep.violations;
    report["min_potential"] = number(rep.witness_value);
    report["witness"] = rep.witness;
    report["passed"] = rep.passed;
    report["balls"] = balls;
    if (!rep.passed) out.failures.push_back("cor1 certificate failed (" + std::to_string(rep.violations) + " grid violations)");
    out.summary_csv = "experiment,atoms,H,s,balls,radius_power_sum,radius_bound,points_checked,violations\n" + out.id + "," +
                      std::to_string(ms.size()) + "," + num(H) + "," + num(s) + "," +
                      std::to_string(rep.cover.balls.size()) + "," + num(rep.radius_power_sum) + "," +
                      num(rep.radius_bound) + "," + std::to_string(rep.points_checked) + "," +
                      std::to_string(rep.violations) + "\n";
  } else if (mode == "cartan") {
    check_keys(cfg, {"experiment", "id", "mode", "roots", "degree", "root_radius", "R", "eta", "grid", "gamma", "alpha",
                     "beta", "seed"},
               "covering config");
    const double R = get_or<double>(cfg, "R", 2.0), eta = get_or<double>(cfg, "eta", 1.0);
    const auto m = get_or<std::size_t>(cfg, "grid", 400);
    if (m < 2 || m > 4000) config_error("grid must lie in [2, 4000]");
    std::vector<Complex> roots;
    if (cfg.contains("roots")) {
      for (const auto& z : cfg.at("roots")) {
        if (!z.is_array() || z.size() != 2) config_error("roots are [re, im] pairs");
        roots.emplace_back(z[0].get<double>(), z[1].get<double>());
      }
    } else {
      const int degree = get_or<int>(cfg, "degree", 5);
      if (degree < 0 || degree > 50) config_error("degree must lie in [0, 50]");
      const double rr = get_or<double>(cfg, "root_radius", 2.0 * R);
      Rng rng(seed);
      for (int j = 0; j < degree; ++j) roots.push_back(std::polar(rr * std::sqrt(rng.uniform()), 2.0 * M_PI * rng.uniform()));
    }
    for (const auto& z : roots)
      if (z == Complex(0.0, 0.0)) config_error("a root at 0 is incompatible with f(0) = 1");
    const auto monic = Polynomial::from_roots(roots);
    std::vector<Complex> c(monic.coefficients().begin(), monic.coefficients().end());
    const Complex c0 = c[0];
    for (auto& v : c) v /= c0;
    c[0] = 1.0;
    CartanReport rep;
    try {
      rep = cartan_disks(Polynomial::from_complex_coefficients(c), R, eta, m, params);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidArgument) config_error(e.what());
      throw;
    }
    json disks = json::array(), zeros = json::array();
    for (std::size_t k = 0; k < rep.disks.size(); ++k) {
      disks.push_back({{"center", {rep.disks[k].center.real(), rep.disks[k].center.imag()}}, {"radius", rep.disks[k].radius}});
      radii.emplace_back(static_cast<double>(k), rep.disks[k].radius);
    }
    for (const auto& z : rep.zeros) zeros.push_back({z.real(), z.imag()});
    report["mode"] = "cartan";
    report["R"] = R;
    report["eta"] = eta;
    report["H_eta"] = rep.h_eta;
    report["log_M_2eR"] = rep.log_max_modulus;
    report["lower_bound"] = rep.lower_bound;
    report["radius_sum"] = rep.radius_sum;
    report["radius_limit"] = rep.radius_limit;
    report["zeros_covered"] = rep.zeros_covered;
    report["grid_checked"] = rep.grid_checked;
    report["violations"] = rep.violations;
    report["min_margin"] = number(rep.min_margin);
    report["passed"] = rep.passed;
    report["zeros"] = zeros;
    report["disks"] = disks;
    if (!rep.passed) out.failures.push_back("Cartan certificate failed");
    out.summary_csv = "experiment,zeros,disks,radius_sum,radius_limit,violations,min_margin\n" + out.id + "," +
                      std::to_string(rep.zeros.size()) + "," + std::to_string(rep.disks.size()) + "," +
                      num(rep.radius_sum) + "," + num(rep.radius_limit) + "," + std::to_string(rep.violations) + "," +
                      num(rep.min_margin) + "\n";
  } else {
    config_error("covering mode must be \"cor1\" or \"cartan\"");
  }
  out.files.emplace_back("radii.dat", dat("ball_index", "radius", radii));
}

void run_campanato(const json& cfg, std::uint64_t seed, RunResult& out, json& report) {
  check_keys(cfg, {"experiment", "id", "set", "depth", "mass", "transform", "function", "polynomial", "k", "q", "omega",
                   "r_min", "max_centers", "seed"},
             "campanato config");
  const FractalSet X = load_set(cfg);
  const auto values = sample_values(cfg, X, seed);
  const int k = get_or<int>(cfg, "k", 1);
  if (k < 0 || k > 8) config_error("k must lie in [0, 8]");
  const double q = exponent(cfg, "q");
  const Majorant omega = load_omega(cfg);
  const CubeFamily fam = load_family(cfg, X, seed, 1000);
  const auto res = campanato_seminorm(values, X, fam, k, q, omega);
  const auto qp = quasipower_check(omega, std::max(k, 1));

  // largest E_k / omega per rung
  std::vector<std::pair<double, double>> profile;
  const std::size_t L = fam.ladder().size();
  std::vector<double> per(fam.size());
  parallel_for(fam.size(), [&](std::size_t i) {
    per[i] = local_best_approx(values, X, fam[i], k, q).value / omega(fam[i].radius);
  });
  for (std::size_t j = 0; j < L; ++j) {
    double m = 0.0;
    for (std::size_t i = j; i < fam.size(); i += L) m = std::max(m, per[i]);
    profile.emplace_back(fam.ladder()[j], m);
  }
  report["set"] = set_info(X);
  report["k"] = k;
  report["q"] = exponent_text(q);
  report["omega"] = omega.id();
  report["quasipower"] = {{"is_quasipower", qp.is_quasipower}, {"C_omega", number(qp.c_omega)}, {"reason", qp.reason}};
  report["seminorm"] = number(res.value);
  report["witness"] = cube_json(fam[res.witness]);
  report["cubes"] = res.cubes;
  report["centers"] = fam.centers().size();
  report["rank_deficient"] = res.rank_deficient;
  report["lower_bound"] = res.lower_bound;
  if (!std::isfinite(res.value)) out.failures.push_back("Campanato seminorm is not finite");
  out.summary_csv = "experiment,n,s,k,q,omega,seminorm,cubes,lower_bound\n" + out.id + "," +
                    std::to_string(X.ambient_dim()) + "," + num(X.s()) + "," + std::to_string(k) + "," +
                    exponent_text(q) + "," + omega.id() + "," + num(res.value) + "," + std::to_string(res.cubes) + "," +
                    (res.lower_bound ? "true" : "false") + "\n";
  out.files.emplace_back("ek_profile.dat", dat("radius", "max_E_k_over_omega", profile));
}

void run_extension(const json& cfg, std::uint64_t seed, RunResult& out, json& report) {
  check_keys(cfg, {"experiment", "id", "set", "depth", "mass", "transform", "function", "polynomial", "k", "q", "omega",
                   "r_min", "max_centers", "nodes", "margin", "budget", "seed"},
             "extension config");
  const FractalSet X = load_set(cfg);
  const auto values = sample_values(cfg, X, seed);
  const int k = get_or<int>(cfg, "k", 2);
  if (k < 1 || k > 6) config_error("k must lie in [1, 6]");
  const double q = exponent(cfg, "q");
  const Majorant omega = load_omega(cfg);
  const auto qp = quasipower_check(omega, k);
  if (!qp.is_quasipower) config_error("extension needs a quasipower majorant: " + qp.reason);
  const CubeFamily fam = load_family(cfg, X, seed, std::size_t{1} << 20);
  const auto nodes = get_or<std::size_t>(cfg, "nodes", 65);
  const double margin = get_or<double>(cfg, "margin", 0.25);
  if (nodes < 2 || std::pow(static_cast<double>(nodes), X.ambient_dim()) > 4e6) config_error("grid too small or too large");
  const auto budget = get_or<std::size_t>(cfg, "budget", std::size_t{1} << 14);

  Chain chain;
  try {
    chain = build_chain(values, X, fam, k, omega, true);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Domain) config_error(e.what());
    throw;
  }
  const auto field = whitney_extend(chain, fam, X, GridSpec::around(X, nodes, margin));
  const auto rep = verify_extension(values, field, X, fam, k, omega, q == 2.0 || std::isinf(q) ? q : 2.0, budget);

  report["set"] = set_info(X);
  report["k"] = k;
  report["omega"] = omega.id();
  report["C_omega"] = number(qp.c_omega);
  report["grid"] = {{"lo", field.grid().lo}, {"hi", field.grid().hi}, {"nodes", nodes}};
  report["chain"] = {{"entries", chain.entries.size()},
                     {"seminorm_estimate", number(chain.seminorm_estimate)},
                     {"pairs_admissible", chain.pairs_admissible},
                     {"pairs_checked", chain.pairs_checked},
                     {"rank_deficient", chain.rank_deficient},
                     {"big_cubes", chain.big_cubes}};
  const auto pn = sampled_projection_norm(fam, k, X);
  report["projection_norm"] = {{"max", number(pn.max)}, {"mean", number(pn.mean)}, {"cubes", pn.cubes}};
  // local oscillation estimate, both sides, on a few centers and nested rungs
  json split = json::array();
  const auto& ladder = fam.ladder();
  const auto& centers = fam.centers();
  for (std::size_t c = 0; c < std::min<std::size_t>(4, centers.size()); ++c) {
    const std::size_t ci = centers[c * centers.size() / std::min<std::size_t>(4, centers.size())];
    auto x = X.point(ci);
    const Cube Q{std::vector<double>(x.begin(), x.end()), ladder.front(), ci};
    for (std::size_t j = 1; j < ladder.size() && ladder[j] <= X.diam(); j += 2) {
      const Cube Kc{Q.center, ladder[j], ci};
      const auto sp = oscillation_split(values, X, Q, Kc, omega, q);
      split.push_back({{"center", ci},
                       {"r", Q.radius},
                       {"R", Kc.radius},
                       {"lhs", number(sp.lhs)},
                       {"integral_term", number(sp.integral_term)},
                       {"norm_term", number(sp.norm_term)},
                       {"ratio", number(sp.ratio)}});
    }
  }
  report["oscillation_split"] = std::move(split);
  report["trace_error"] = rep.trace_error;
  report["trace_mean_error"] = rep.trace_mean_error;
  report["lipschitz_seminorm"] = number(rep.lipschitz);
  report["campanato_seminorm"] = number(rep.campanato);
  report["ratio"] = rep.ratio_applicable ? number(rep.ratio) : json("not applicable");
  report["holes"] = rep.holes;
  if (rep.holes > 0) out.failures.push_back(std::to_string(rep.holes) + " grid nodes not covered by any cube");
  if (rep.ratio_applicable && !std::isfinite(rep.ratio)) out.failures.push_back("operator-norm proxy is not finite");
  out.summary_csv = "experiment,n,k,omega,nodes,trace_error,lipschitz,campanato,ratio,chain_seminorm\n" + out.id + "," +
                    std::to_string(X.ambient_dim()) + "," + std::to_string(k) + "," + omega.id() + "," +
                    std::to_string(nodes) + "," + num(rep.trace_error) + "," + num(rep.lipschitz) + "," +
                    num(rep.campanato) + "," + (rep.ratio_applicable ? num(rep.ratio) : "na") + "," +
                    num(chain.seminorm_estimate) + "\n";
  std::ostringstream grid_csv;
  field.write_csv(grid_csv);
  out.files.emplace_back("field.csv", grid_csv.str());
  if (X.ambient_dim() == 1) {
    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < field.grid().size(); ++i) rows.emplace_back(field.grid().node(i)[0], field.values()[i]);
    out.files.emplace_back("field.dat", dat("x", "extension", rows));
  }
}

}  // namespace

RunResult run_experiment(const std::string& config_json, std::optional<std::uint64_t> seed_override) {
  json cfg;
  try {
    cfg = json::parse(config_json);
  } catch (const json::exception& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!cfg.is_object()) config_error("top level must be an object");
  const auto kind = require<std::string>(cfg, "experiment");
  const std::uint64_t seed = seed_override ? *seed_override : get_or<std::uint64_t>(cfg, "seed", 42);

  RunResult out;
  out.id = get_or<std::string>(cfg, "id", kind);
  out.out_dir = get_or<std::string>(cfg, "out", "");
  cfg.erase("out");
  json report;
  report["experiment"] = kind;
  report["id"] = out.id;
  report["seed"] = seed;
  try {
    if (kind == "remez") run_remez(cfg, seed, out, report);
    else if (kind == "covering") run_covering(cfg, seed, out, report);
    else if (kind == "campanato") run_campanato(cfg, seed, out, report);
    else if (kind == "extension") run_extension(cfg, seed, out, report);
    else config_error("unknown experiment '" + kind + "' (remez, covering, campanato, extension)");
  } catch (const Error& e) {
    // oversized constructions are configuration problems too
    if (e.code() == ErrorCode::Overflow) fail(ErrorCode::Config, e.what());
    throw;
  }
  report["failures"] = out.failures;
  report["passed"] = out.failures.empty();
  out.exit_code = out.failures.empty() ? 0 : 1;
  out.report_json = report.dump(2) + "\n";
  return out;
}

void write_run(const RunResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::InvalidArgument, "cannot create output directory '" + dir + "': " + ec.message());
  auto put = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) fail(ErrorCode::InvalidArgument, "cannot write '" + name + "' in '" + dir + "'");
    f << content;
  };
  put("report.json", result.report_json);
  put("summary.csv", result.summary_csv);
  for (const auto& [name, content] : result.files) put(name, content);
}

}  // namespace fr
