#include "core/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "core/covering.hpp"
#include "core/extension.hpp"
#include "core/registry.hpp"
#include "core/remez.hpp"

namespace fr {

namespace {

std::map<std::string, double Thresholds::*> threshold_fields() {
  return {
      {"remez_sharpness_rel", &Thresholds::remez_sharpness_rel},
      {"bound_order_violations", &Thresholds::bound_order_violations},
      {"gorin_violations", &Thresholds::gorin_violations},
      {"cartan_violations", &Thresholds::cartan_violations},
      {"ahlfors_spread", &Thresholds::ahlfors_spread},
      {"ahlfors_depth_change", &Thresholds::ahlfors_depth_change},
      {"weak_remez_noise", &Thresholds::weak_remez_noise},
      {"markov_max_over_median", &Thresholds::markov_max_over_median},
      {"ek_l2_tol", &Thresholds::ek_l2_tol},
      {"ek_linf_tol", &Thresholds::ek_linf_tol},
      {"c_omega_tol", &Thresholds::c_omega_tol},
      {"majorant_cap_slack", &Thresholds::majorant_cap_slack},
      {"extension_reproduction", &Thresholds::extension_reproduction},
      {"extension_linearity", &Thresholds::extension_linearity},
      {"extension_stability", &Thresholds::extension_stability},
      {"bmo_depth_ratio", &Thresholds::bmo_depth_ratio},
  };
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. extremal Chebyshev polynomial on [-1, 1 - eps] inside [-1, 1]

CriterionResult remez_sharpness(const Thresholds& t) {
  CriterionResult r;
  r.id = 1;
  r.name = "remez_sharpness";
  r.relation = "<=";
  r.threshold = t.remez_sharpness_rel;
  const FractalSet unit = make_set("cube:1", 12);
  Box V{{-1.0}, {1.0}};
  double worst = 0.0;
  std::ostringstream d;
  for (double eps : {0.1, 0.5}) {
    const std::vector<double> shift{-1.0};
    const FractalSet omega = unit.transformed(2.0 - eps, shift);
    for (int k = 1; k <= 6; ++k) {
      const std::vector<double> scale{2.0 / (2.0 - eps)}, sh{eps / (2.0 - eps)};
      const Polynomial p = chebyshev(k).affine_substitute(scale, sh);
      const auto rep = empirical_remez(p, V, omega, kInf, kInf);
      const double bound = bg_bound(1, k, (2.0 - eps) / 2.0);
      const double rel = std::abs(rep.empirical_ratio - bound) / bound;
      if (rel > worst) {
        worst = rel;
        d.str("");
        d << "worst at eps=" << eps << " k=" << k << ": ratio " << rep.empirical_ratio << " vs bound " << bound;
      }
    }
  }
  r.measured = worst;
  r.pass = worst <= t.remez_sharpness_rel;
  r.detail = d.str();
  return r;
}

// 2. bg_bound <= simple_bound on the full grid

CriterionResult bound_ordering(const Thresholds& t) {
  CriterionResult r;
  r.id = 2;
  r.name = "bound_ordering";
  r.relation = "<=";
  r.threshold = t.bound_order_violations;
  std::size_t violations = 0, checked = 0;
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 8; ++k)
      for (int i = 1; i <= 100; ++i) {
        const double lambda = i / 100.0;
        ++checked;
        if (bg_bound(n, k, lambda) > simple_bound(n, k, lambda) * (1.0 + 1e-12)) ++violations;
      }
  r.measured = static_cast<double>(violations);
  r.pass = r.measured <= t.bound_order_violations;
  r.detail = std::to_string(checked) + " (n,k,lambda) triples";
  return r;
}

// 3. Gorin covering postconditions against an independent regularity oracle

/// x is regular iff no positive atom sits at x and the closed-ball mass at
/// every jump radius d_j stays below phi(d_j).
bool regular_oracle(const DiscreteMeasureSpace& space, const MajorantFn& phi, std::span<const double> x) {
  std::vector<std::pair<double, double>> dm;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (space.mass(i) > 0.0) dm.emplace_back(space.distance(x, space.point(i)), space.mass(i));
  std::sort(dm.begin(), dm.end());
  double cum = 0.0;
  for (std::size_t j = 0; j < dm.size();) {
    const double d = dm[j].first;
    while (j < dm.size() && dm[j].first == d) cum += dm[j++].second;
    if (d == 0.0 || cum >= phi(d)) return false;
  }
  return true;
}

CriterionResult gorin(const Thresholds& t) {
  CriterionResult r;
  r.id = 3;
  r.name = "gorin_cover";
  r.relation = "<=";
  r.threshold = t.gorin_violations;
  Rng rng(2024);
  std::size_t violations = 0, balls = 0;
  std::string first;
  const std::vector<double> mid{0.5, 0.5};
  const auto probes = square_grid(mid, 0.7, 16);
  for (int run = 0; run < 200; ++run) {
    const std::size_t atoms = 1 + rng.index(64);
    std::vector<double> pts, ms;
    for (std::size_t i = 0; i < atoms; ++i) {
      pts.push_back(rng.uniform());
      pts.push_back(rng.uniform());
      ms.push_back(rng.uniform(0.05, 1.0));
    }
    DiscreteMeasureSpace space(2, pts, ms);
    const double A = space.total_mass();
    const double s = std::array<double, 3>{0.5, 1.0, 2.0}[rng.index(3)];
    const double H = rng.uniform(0.02, 0.5);
    const MajorantFn phi = MajorantFn::power(std::pow(A, 1.0 / s) / H, s);
    const GorinParams params;
    const auto cover = gorin_cover(space, phi, params, probes);
    balls += cover.balls.size();
    std::size_t bad = 0;
    if (!(cover.budget_used < A)) ++bad;
    for (std::size_t k = 1; k < cover.balls.size(); ++k)
      if (cover.balls[k].radius > cover.balls[k - 1].radius) ++bad;
    if (cover.balls.size() > atoms) ++bad;
    auto check = [&](std::span<const double> x) {
      for (const auto& b : cover.balls)
        if (space.distance(x, b.center) <= b.radius) return;
      if (!regular_oracle(space, phi, x)) ++bad;
    };
    for (std::size_t i = 0; i < atoms; ++i) check(space.point(i));
    for (std::size_t i = 0; i < probes.size(); i += 2) check(std::span<const double>(probes).subspan(i, 2));
    if (bad && first.empty()) first = "first failing run " + std::to_string(run);
    violations += bad;
  }
  r.measured = static_cast<double>(violations);
  r.pass = r.measured <= t.gorin_violations;
  r.detail = first.empty() ? "200 measures, " + std::to_string(balls) + " balls in total" : first;
  return r;
}

// 4. Cartan disks for random f with f(0) = 1

CriterionResult cartan(const Thresholds& t) {
  CriterionResult r;
  r.id = 4;
  r.name = "cartan_disks";
  r.relation = "<=";
  r.threshold = t.cartan_violations;
  Rng rng(77);
  std::size_t violations = 0, zeros = 0;
  double min_margin = kInf;
  for (int run = 0; run < 50; ++run) {
    const int degree = 1 + static_cast<int>(rng.index(10));
    std::vector<Complex> roots;
    for (int j = 0; j < degree; ++j) roots.push_back(std::polar(4.0 * std::sqrt(rng.uniform()), 2.0 * M_PI * rng.uniform()));
    const auto monic = Polynomial::from_roots(roots);
    std::vector<Complex> c(monic.coefficients().begin(), monic.coefficients().end());
    const Complex c0 = c[0];
    for (auto& v : c) v /= c0;
    c[0] = 1.0;
    const auto f = Polynomial::from_complex_coefficients(c);
    for (double eta : {0.1, 1.0}) {
      const auto rep = cartan_disks(f, 2.0, eta, 400);
      zeros += rep.zeros.size();
      min_margin = std::min(min_margin, rep.min_margin);
      violations += rep.violations;
      if (!rep.zeros_covered) ++violations;
      if (rep.radius_sum > rep.radius_limit) ++violations;
    }
  }
  r.measured = static_cast<double>(violations);
  r.pass = r.measured <= t.cartan_violations;
  r.detail = "100 runs, " + std::to_string(zeros) + " zeros in |z|<=2R, smallest margin " + fmt("%.3g", min_margin);
  return r;
}

// 5. Ahlfors sandwich and depth stability on Cantor(1/3)

CriterionResult ahlfors(const Thresholds& t) {
  CriterionResult r;
  r.id = 5;
  r.name = "ahlfors_regularity";
  r.relation = "<=";
  r.threshold = t.ahlfors_depth_change;
  const FractalSet X8 = make_set("cantor:1/3", 8), X10 = make_set("cantor:1/3", 10);
  const auto e10 = estimate_regularity(X10, 1000, 4.0 * std::pow(3.0, -10), 1.0, 5);
  const double spread = e10.a_hat / e10.b_hat;
  // same centers and radii at both depths: cell c at depth 8 is cell 4c at depth 10
  Rng rng(6);
  std::vector<std::size_t> c8, c10;
  std::vector<double> radii;
  const double lo = std::log(4.0 * std::pow(3.0, -8));
  for (int i = 0; i < 1000; ++i) {
    const std::size_t c = rng.index(X8.size());
    c8.push_back(c);
    c10.push_back(4 * c);
    radii.push_back(std::exp(rng.uniform(lo, 0.0)));
  }
  const auto a = estimate_regularity(X8, c8, radii), b = estimate_regularity(X10, c10, radii);
  const double change = std::max(std::abs(a.a_hat - b.a_hat) / b.a_hat, std::abs(a.b_hat - b.b_hat) / b.b_hat);
  r.measured = change;
  r.pass = change <= t.ahlfors_depth_change && spread < t.ahlfors_spread;
  std::ostringstream d;
  d << "depth 10: a_hat=" << e10.a_hat << " b_hat=" << e10.b_hat << " spread=" << spread << " (< "
    << t.ahlfors_spread << "); depth 8 vs 10 a_hat " << a.a_hat << "/" << b.a_hat << ", b_hat " << a.b_hat
    << "/" << b.b_hat;
  r.detail = d.str();
  return r;
}

// 6. weak Remez constant over nested Cantor subsets

CriterionResult weak_remez(const Thresholds& t) {
  CriterionResult r;
  r.id = 6;
  r.name = "weak_remez_monotone";
  r.relation = ">=";
  r.threshold = 1.0 - t.weak_remez_noise;
  const FractalSet X = make_set("cantor:1/3", 10);
  const Box V{{0.0}, {1.0}};
  Rng rng(31);
  std::vector<Polynomial> polys;
  for (int i = 0; i < 50; ++i) polys.push_back(random_polynomial(1, 3, rng));
  // random cubics alone level off at sup_V|p| / |p(0)|; T_3 pulled back to
  // each hull [0, 3^-j] keeps the family sensitive to shrinking omega
  for (int j = 0; j <= 4; ++j) {
    const std::vector<double> scale{2.0 * std::pow(3.0, j)}, shift{-1.0};
    polys.push_back(chebyshev(3).affine_substitute(scale, shift));
  }
  std::vector<double> C, lambdas;
  for (int j = 0; j <= 4; ++j) {
    const std::vector<double> lo{0.0}, hi{std::pow(3.0, -j)};
    const FractalSet omega = X.restricted(lo, hi);
    double c = 0.0, lambda = 0.0;
    for (const auto& p : polys) {
      const auto rep = empirical_remez(p, V, omega, kInf, kInf);
      c = std::max(c, rep.empirical_ratio);
      lambda = rep.lambda;
    }
    C.push_back(c);
    lambdas.push_back(lambda);
  }
  double worst = kInf;
  for (std::size_t j = 0; j + 1 < C.size(); ++j) worst = std::min(worst, C[j + 1] / C[j]);
  // least-squares slope of ln C against ln(1/lambda), recorded only
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(C.size());
  for (std::size_t j = 0; j < C.size(); ++j) {
    const double x = std::log(1.0 / lambdas[j]), y = std::log(C[j]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  r.measured = worst;
  r.pass = worst >= 1.0 - t.weak_remez_noise;
  std::ostringstream d;
  d << "C =";
  for (double c : C) d << " " << fmt("%.4g", c);
  d << " at lambda =";
  for (double l : lambdas) d << " " << fmt("%.4g", l);
  d << "; fitted exponent " << fmt("%.3f", slope);
  r.detail = d.str();
  return r;
}

// 7. Markov constants on Cantor x Cantor

CriterionResult markov(const Thresholds& t) {
  CriterionResult r;
  r.id = 7;
  r.name = "markov_bounded";
  r.relation = "<";
  r.threshold = t.markov_max_over_median;
  const FractalSet X = make_set("cantor:1/3*cantor:1/3", 6);
  Rng rng(41);
  std::vector<double> cs;
  for (int i = 0; i < 100; ++i) {
    const auto p = random_polynomial(2, 3, rng);
    for (int j = 1; j <= 7; ++j)
      for (int c = 0; c < 4; ++c) {
        const std::size_t x = rng.index(X.size());
        cs.push_back(markov_check(p, X, X.point(x), X.diam() * std::ldexp(1.0, -j)).constant);
      }
  }
  std::sort(cs.begin(), cs.end());
  const double median = cs[cs.size() / 2];
  r.measured = cs.back() / median;
  r.pass = std::isfinite(r.measured) && r.measured < t.markov_max_over_median;
  r.detail = "s=" + fmt("%.4f", X.s()) + ", " + std::to_string(cs.size()) + " (p,x,r) samples, r = diam*2^-1..2^-7, max " +
             fmt("%.4g", cs.back()) + ", median " + fmt("%.4g", median);
  return r;
}

// 8. E_k against coefficient-grid brute force

double brute_force(const std::function<double(const std::vector<double>&)>& F, std::size_t d, double width) {
  std::vector<double> center(d, 0.0), c(d);
  double best = F(center);
  for (int level = 0; level < 90; ++level) {
    const int m = 10;
    std::vector<double> best_c = center;
    std::vector<int> idx(d, -m);
    while (true) {
      for (std::size_t a = 0; a < d; ++a) c[a] = center[a] + width * idx[a] / m;
      const double v = F(c);
      if (v < best) {
        best = v;
        best_c = c;
      }
      std::size_t a = 0;
      while (a < d && ++idx[a] > m) idx[a++] = -m;
      if (a == d) break;
    }
    center = best_c;
    width *= 0.6;
  }
  return best;
}

CriterionResult ek_oracle(const Thresholds& t) {
  CriterionResult r;
  r.id = 8;
  r.name = "ek_brute_force";
  r.relation = "<=";
  r.threshold = 1.0;
  Rng rng(88);
  double worst2 = 0.0, worst_inf = 0.0;
  std::size_t instances = 0;
  for (int run = 0; run < 120; ++run) {
    const int n = 1 + static_cast<int>(rng.index(2));
    const int k = n == 1 ? 1 + static_cast<int>(rng.index(3)) : 1 + static_cast<int>(rng.index(2));
    const std::size_t m = 1 + rng.index(5);
    std::vector<double> pts, ms, vs;
    for (std::size_t i = 0; i < m * static_cast<std::size_t>(n); ++i) pts.push_back(rng.uniform(-1.0, 1.0));
    for (std::size_t i = 0; i < m; ++i) {
      ms.push_back(rng.uniform(0.1, 1.0));
      vs.push_back(rng.uniform(-1.0, 1.0));
    }
    const std::vector<double> center(static_cast<std::size_t>(n), 0.0);
    const auto basis = monomial_basis(n, k - 1);
    const std::size_t d = basis->size();
    double mu = 0.0;
    for (double v : ms) mu += v;
    auto objective = [&](const std::vector<double>& c, double q) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double p = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          double mono = 1.0;
          for (int a = 0; a < n; ++a)
            for (int e = 0; e < (*basis)[j][static_cast<std::size_t>(a)]; ++e) mono *= pts[i * n + a];
          p += c[j] * mono;
        }
        const double res = std::abs(vs[i] - p);
        if (std::isinf(q)) acc = std::max(acc, res);
        else acc += ms[i] / mu * res * res;
      }
      return std::isinf(q) ? acc : std::sqrt(acc);
    };
    for (double q : {2.0, kInf}) {
      const auto la = best_approx_points(n, pts, ms, vs, center, 1.0, k, q);
      const double bf = brute_force([&](const std::vector<double>& c) { return objective(c, q); }, d, 1000.0);
      const double diff = std::max(0.0, la.value - bf);
      if (q == 2.0) worst2 = std::max(worst2, diff);
      else worst_inf = std::max(worst_inf, diff);
    }
    ++instances;
  }
  // one normalized figure: each deviation over its own tolerance
  r.measured = std::max(worst2 / t.ek_l2_tol, worst_inf / t.ek_linf_tol);
  r.pass = worst2 <= t.ek_l2_tol && worst_inf <= t.ek_linf_tol;
  std::ostringstream d;
  d << instances << " instances; excess over brute force: q=2 " << fmt("%.3g", worst2) << " (tol " << t.ek_l2_tol
    << "), q=inf " << fmt("%.3g", worst_inf) << " (tol " << t.ek_linf_tol << ")";
  r.detail = d.str();
  return r;
}

// 9. C_omega and the majorant sum cap

CriterionResult majorant(const Thresholds& t) {
  CriterionResult r;
  r.id = 9;
  r.name = "majorant_arithmetic";
  r.relation = "<=";
  r.threshold = 1.0;
  double c_err = 0.0, cap_use = 0.0;
  for (double lambda : {0.25, 0.5, 1.0}) {
    const auto omega = Majorant::power(lambda);
    const auto qp = quasipower_check(omega, 1);
    c_err = std::max(c_err, std::abs(qp.c_omega - 1.0 / lambda));
    // numeric Dini quotient on a log grid, independent of the closed form
    for (int e = -20; e <= 20; ++e) {
      const double tt = std::ldexp(1.0, e);
      c_err = std::max(c_err, std::abs(omega.dini_integral(0.0, tt) / omega(tt) - 1.0 / lambda));
    }
    for (int k = 1; k <= 4; ++k)
      for (int ip : {-5, 0, 3})
        for (int i = ip - 1; i >= ip - 40; --i) {
          const auto res = majorant_sum_check(omega, k, i, ip);
          cap_use = std::max(cap_use, res.ratio / (res.cap * (1.0 + t.majorant_cap_slack)));
        }
  }
  r.measured = std::max(c_err / t.c_omega_tol, cap_use);
  r.pass = c_err <= t.c_omega_tol && cap_use <= 1.0;
  r.detail = "max |C_omega - 1/lambda| = " + fmt("%.3g", c_err) + ", max ratio/cap = " + fmt("%.4f", cap_use);
  return r;
}

// 10. extension operator

std::vector<double> sample(const FractalSet& X, const RealFunction& f) {
  std::vector<double> v(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) v[i] = f(X.point(i));
  return v;
}

struct ExtensionSetup {
  FractalSet X;
  CubeFamily family;
  GridSpec grid;
};

ExtensionSetup extension_setup(int n, std::size_t nodes) {
  CubeFamilyOptions opt;
  opt.max_centers = std::size_t{1} << 20;
  if (n == 1) {
    FractalSet X = make_set("cube:1", 8);
    auto fam = CubeFamily::build(X, opt);
    auto grid = GridSpec::around(X, nodes);
    return {std::move(X), std::move(fam), std::move(grid)};
  }
  FractalSet X = make_set("cube:2", 4);
  opt.r_min = 1.0 / 8.0;  // two grid spacings: every cube holds a 3x3 block
  auto fam = CubeFamily::build(X, opt);
  auto grid = GridSpec::around(X, nodes);
  return {std::move(X), std::move(fam), std::move(grid)};
}

CriterionResult extension(const Thresholds& t) {
  CriterionResult r;
  r.id = 10;
  r.name = "extension_operator";
  r.relation = "<=";
  r.threshold = 1.0;
  const auto omega = Majorant::power(1.0);
  Rng rng(1010);

  double repro = 0.0;
  std::size_t holes = 0;
  const ExtensionSetup s1 = extension_setup(1, 65), s2 = extension_setup(2, 17);
  for (int i = 0; i < 20; ++i) {
    const int n = 1 + i % 2;
    const int k = 1 + (i / 2) % 3;
    const ExtensionSetup& s = n == 1 ? s1 : s2;
    const Polynomial P = random_polynomial(n, k - 1, rng);
    const auto values = sample(s.X, [&](std::span<const double> x) { return P.eval(x); });
    const auto chain = build_chain(values, s.X, s.family, k, omega, false);
    const auto field = whitney_extend(chain, s.family, s.X, s.grid);
    holes += field.holes().size();
    double scale = 1.0;
    for (double c : P.real_coefficients()) scale = std::max(scale, std::abs(c));
    for (std::size_t node = 0; node < s.grid.size(); ++node)
      repro = std::max(repro, std::abs(field.values()[node] - P.eval(s.grid.node(node))) / scale);
  }

  double lin = 0.0;
  for (int n : {1, 2}) {
    const ExtensionSetup& s = n == 1 ? s1 : s2;
    std::vector<double> f(s.X.size()), g(s.X.size()), h(s.X.size());
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = rng.normal();
      g[i] = rng.normal();
      h[i] = a * f[i] + b * g[i];
    }
    auto field_of = [&](const std::vector<double>& v) {
      return whitney_extend(build_chain(v, s.X, s.family, 2, omega, false), s.family, s.X, s.grid);
    };
    const auto F = field_of(f), G = field_of(g), Hf = field_of(h);
    double scale = 1.0;
    for (std::size_t node = 0; node < s.grid.size(); ++node) scale = std::max(scale, std::abs(Hf.values()[node]));
    for (std::size_t node = 0; node < s.grid.size(); ++node)
      lin = std::max(lin, std::abs(Hf.values()[node] - a * F.values()[node] - b * G.values()[node]) / scale);
  }

  // operator-norm proxy for the nonsmooth suite, grid 65 vs 129 nodes
  double instability = 1.0;
  std::ostringstream d;
  for (const std::string name : {"abs_half", "xabsx"}) {
    FractalSet X = make_set("cube:1", 10);
    if (name == "xabsx") {
      const std::vector<double> shift{-1.0};
      X = X.transformed(2.0, shift);
    }
    CubeFamilyOptions opt;
    opt.max_centers = std::size_t{1} << 20;
    const auto fam = CubeFamily::build(X, opt);
    const auto values = sample(X, make_function(name));
    const auto chain = build_chain(values, X, fam, 2, omega, false);
    double ratios[2];
    int slot = 0;
    for (std::size_t nodes : {65, 129}) {
      const auto field = whitney_extend(chain, fam, X, GridSpec::around(X, nodes));
      holes += field.holes().size();
      const auto rep = verify_extension(values, field, X, fam, 2, omega);
      ratios[slot++] = rep.ratio_applicable ? rep.ratio : kInf;
    }
    const double q = std::isfinite(ratios[0]) && std::isfinite(ratios[1])
                         ? std::max(ratios[0] / ratios[1], ratios[1] / ratios[0])
                         : kInf;
    instability = std::max(instability, q);
    d << name << " ratio " << fmt("%.4g", ratios[0]) << " -> " << fmt("%.4g", ratios[1]) << "; ";
  }
  r.measured = std::max({repro / t.extension_reproduction, lin / t.extension_linearity,
                         instability / t.extension_stability});
  if (holes > 0) r.measured = kInf;
  r.pass = repro <= t.extension_reproduction && lin <= t.extension_linearity &&
           instability < t.extension_stability && holes == 0;
  d << "reproduction " << fmt("%.3g", repro) << ", linearity " << fmt("%.3g", lin) << ", holes " << holes;
  r.detail = d.str();
  return r;
}

// 11. BMO and reverse Hoelder depth stability

CriterionResult bmo(const Thresholds& t) {
  CriterionResult r;
  r.id = 11;
  r.name = "bmo_reverse_holder";
  r.relation = "<";
  r.threshold = t.bmo_depth_ratio;
  const auto p = Polynomial::from_complex_coefficients({0.0, 1.0});
  const std::vector<double> scales{1.0, 1.0 / 3, 1.0 / 9, 1.0 / 27, 1.0 / 81};
  const std::vector<double> origin{0.0};
  double osc[2], rh_all[2], rh_third[2];
  int slot = 0;
  for (int depth : {8, 10}) {
    const FractalSet X = make_set("cantor:1/3", depth);
    osc[slot] = bmo_oscillation(p, X, scales).max_oscillation;
    rh_all[slot] = reverse_holder(p, X, origin, 2.0, 2.0);
    rh_third[slot] = reverse_holder(p, X, origin, 0.5, 2.0);
    ++slot;
  }
  auto q = [](const double* v) { return std::max(v[0] / v[1], v[1] / v[0]); };
  r.measured = std::max({q(osc), q(rh_all), q(rh_third)});
  r.pass = std::isfinite(osc[0]) && std::isfinite(osc[1]) && r.measured < t.bmo_depth_ratio;
  std::ostringstream d;
  d << "oscillation " << fmt("%.4g", osc[0]) << " / " << fmt("%.4g", osc[1]) << ", reverse Hoelder (whole set) "
    << fmt("%.4g", rh_all[0]) << " / " << fmt("%.4g", rh_all[1]) << ", (r=1/2) " << fmt("%.4g", rh_third[0])
    << " / " << fmt("%.4g", rh_third[1]);
  r.detail = d.str();
  return r;
}

}  // namespace

bool set_threshold(Thresholds& t, const std::string& name, double value) {
  const auto fields = threshold_fields();
  const auto it = fields.find(name);
  if (it == fields.end()) return false;
  t.*(it->second) = value;
  return true;
}

std::vector<std::string> threshold_names() {
  std::vector<std::string> out;
  for (const auto& [name, field] : threshold_fields()) out.push_back(name);
  return out;
}

std::string format_result(const CriterionResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[%s] %2d %-22s measured=%-12.6g %s %-10.4g %8.2fs  ", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.measured, r.relation.c_str(), r.threshold, r.seconds);
  return std::string(buf) + r.detail;
}

std::vector<CriterionResult> run_acceptance(const Thresholds& t,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  const std::vector<std::function<CriterionResult(const Thresholds&)>> criteria{
      remez_sharpness, bound_ordering, gorin, cartan, ahlfors, weak_remez,
      markov, ek_oracle, majorant, extension, bmo};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = criteria[i](t);
    } catch (const std::exception& e) {
      res.id = static_cast<int>(i + 1);
      res.name = "criterion";
      res.pass = false;
      res.measured = kNaN;
      res.detail = std::string("error: ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(res);
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace fr
