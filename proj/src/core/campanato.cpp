#include "core/campanato.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

namespace fr {

namespace {
constexpr std::size_t kNpos = static_cast<std::size_t>(-1);
}

CubeFamily CubeFamily::build(const FractalSet& X, const CubeFamilyOptions& options) {
  if (X.size() == 0) fail(ErrorCode::Empty, "CubeFamily: empty set");
  const double cap = 4.0 * X.diam();
  double r_min = options.r_min > 0.0 ? options.r_min : 4.0 * X.cell_size();
  if (!(r_min > 0.0)) r_min = X.diam() / 1024.0;
  const double r_max = options.r_max > 0.0 ? std::min(options.r_max, cap) : cap;
  if (!(r_min > 0.0) || !(r_max >= r_min))
    fail(ErrorCode::Domain, "CubeFamily: radius range is empty (r_min exceeds the cap 4 diam)");
  const int j0 = static_cast<int>(std::ceil(std::log2(r_min) - 1e-12));
  const int j1 = static_cast<int>(std::floor(std::log2(r_max) + 1e-12));
  if (j1 < j0) fail(ErrorCode::Domain, "CubeFamily: no dyadic radius inside the range");

  CubeFamily fam;
  fam.radius_cap_ = cap;
  fam.first_exponent_ = j0;
  for (int j = j0; j <= j1; ++j) fam.ladder_.push_back(std::ldexp(1.0, j));

  const std::size_t n = X.size();
  if (n <= options.max_centers) {
    fam.centers_.resize(n);
    std::iota(fam.centers_.begin(), fam.centers_.end(), std::size_t{0});
    fam.exhaustive_ = true;
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.max_centers; ++i) std::swap(all[i], all[i + rng.index(n - i)]);
    fam.centers_.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(options.max_centers));
    std::sort(fam.centers_.begin(), fam.centers_.end());
  }
  fam.slot_of_.assign(n, kNpos);
  for (std::size_t slot = 0; slot < fam.centers_.size(); ++slot) {
    const std::size_t c = fam.centers_[slot];
    fam.slot_of_[c] = slot;
    auto p = X.point(c);
    for (double r : fam.ladder_) fam.cubes_.push_back({std::vector<double>(p.begin(), p.end()), r, c});
  }
  return fam;
}

CubeFamily::CubeFamily(std::vector<Cube> cubes, double radius_cap)
    : cubes_(std::move(cubes)), radius_cap_(radius_cap) {
  for (const auto& q : cubes_)
    if (!(q.radius > 0.0)) fail(ErrorCode::InvalidArgument, "CubeFamily: cube radius must be positive");
}

std::size_t CubeFamily::find(std::size_t cloud_index, std::size_t rung) const {
  if (ladder_.empty() || cloud_index >= slot_of_.size() || rung >= ladder_.size()) return kNpos;
  const std::size_t slot = slot_of_[cloud_index];
  if (slot == kNpos) return kNpos;
  return slot * ladder_.size() + rung;
}

// ---------------------------------------------------------------------------

Majorant Majorant::power(double lambda) {
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "Majorant::power: exponent must be positive");
  Majorant m;
  m.kind_ = Kind::Power;
  m.param_ = lambda;
  std::ostringstream id;
  id << "power:" << lambda;
  m.id_ = id.str();
  return m;
}

Majorant Majorant::constant(double value) {
  if (!(value > 0.0)) fail(ErrorCode::InvalidArgument, "Majorant::constant: value must be positive");
  Majorant m;
  m.kind_ = Kind::Constant;
  m.param_ = value;
  std::ostringstream id;
  id << "const:" << value;
  m.id_ = id.str();
  return m;
}

Majorant Majorant::table(std::vector<double> t, std::vector<double> values) {
  if (t.empty() || t.size() != values.size())
    fail(ErrorCode::InvalidArgument, "Majorant::table: knots and values must be nonempty and aligned");
  double pt = 0.0, pv = 0.0;
  std::ostringstream id;
  id << "table:";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > pt)) fail(ErrorCode::InvalidArgument, "Majorant::table: knots must increase from 0");
    if (!(values[i] >= pv)) fail(ErrorCode::InvalidArgument, "Majorant::table: values must not decrease");
    pt = t[i];
    pv = values[i];
    id << (i ? "," : "") << t[i] << "/" << values[i];
  }
  if (!(values[0] > 0.0)) fail(ErrorCode::InvalidArgument, "Majorant::table: first value must be positive");
  Majorant m;
  m.kind_ = Kind::Table;
  m.t_ = std::move(t);
  m.v_ = std::move(values);
  m.t_.insert(m.t_.begin(), 0.0);
  m.v_.insert(m.v_.begin(), 0.0);
  m.id_ = id.str();
  return m;
}

namespace {

double parse_number(const std::string& text, const std::string& id) {
  // accepts plain decimals and simple fractions "a/b"
  const auto slash = text.find('/');
  std::size_t used = 0;
  try {
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else {
      std::size_t u2 = 0;
      const double a = std::stod(text.substr(0, slash), &used);
      const double b = std::stod(text.substr(slash + 1), &u2);
      if (used == slash && u2 == text.size() - slash - 1) return a / b;
    }
  } catch (const std::exception&) {
  }
  fail(ErrorCode::Config, "unknown majorant id '" + id + "'");
}

}  // namespace

Majorant Majorant::parse(const std::string& id) {
  const auto colon = id.find(':');
  if (colon == std::string::npos) fail(ErrorCode::Config, "unknown majorant id '" + id + "'");
  const std::string kind = id.substr(0, colon);
  const std::string arg = id.substr(colon + 1);
  try {
    if (kind == "power") return power(parse_number(arg, id));
    if (kind == "const") return constant(parse_number(arg, id));
    if (kind == "table") {
      std::vector<double> t, v;
      std::stringstream ss(arg);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto slash = item.find('/');
        if (slash == std::string::npos) fail(ErrorCode::Config, "unknown majorant id '" + id + "'");
        t.push_back(parse_number(item.substr(0, slash), id));
        v.push_back(parse_number(item.substr(slash + 1), id));
      }
      return table(std::move(t), std::move(v));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    fail(ErrorCode::Config, "invalid majorant id '" + id + "': " + e.what());
  }
  fail(ErrorCode::Config, "unknown majorant id '" + id + "'");
}

double Majorant::operator()(double t) const {
  if (t <= 0.0) return kind_ == Kind::Constant ? param_ : 0.0;
  switch (kind_) {
    case Kind::Power: return std::pow(t, param_);
    case Kind::Constant: return param_;
    case Kind::Table: {
      auto it = std::upper_bound(t_.begin(), t_.end(), t);
      std::size_t j = static_cast<std::size_t>(it - t_.begin());
      if (j >= t_.size()) j = t_.size() - 1;
      const std::size_t i = j - 1;
      const double slope = (v_[j] - v_[i]) / (t_[j] - t_[i]);
      return v_[i] + slope * (t - t_[i]);
    }
  }
  return 0.0;
}

double Majorant::dini_integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  a = std::max(a, 0.0);
  switch (kind_) {
    case Kind::Power: return (std::pow(b, param_) - std::pow(a, param_)) / param_;
    case Kind::Constant: return a > 0.0 ? param_ * std::log(b / a) : kInf;
    case Kind::Table: {
      double sum = 0.0;
      const std::size_t last = t_.size() - 1;
      for (std::size_t i = 0; i <= last; ++i) {
        const double seg_lo = t_[i];
        const double seg_hi = i < last ? t_[i + 1] : kInf;
        const double u1 = std::max(a, seg_lo), u2 = std::min(b, seg_hi);
        if (!(u2 > u1)) continue;
        const std::size_t j = i < last ? i + 1 : last;
        const std::size_t h = i < last ? i : last - 1;
        const double slope = (v_[j] - v_[h]) / (t_[j] - t_[h]);
        const double intercept = v_[h] - slope * t_[h];  // omega(u) = intercept + slope u
        sum += slope * (u2 - u1);
        if (intercept != 0.0) sum += intercept * std::log(u2 / u1);
      }
      return sum;
    }
  }
  return 0.0;
}

QuasipowerResult quasipower_check(const Majorant& omega, int k) {
  QuasipowerResult res;
  if (k < 1) {
    res.reason = "k must be at least 1";
    return res;
  }
  if (omega(1e-300) != 0.0 && omega.kind() == Majorant::Kind::Constant) {
    res.reason = "omega(+0) != 0";
    return res;
  }
  // log grid 1e-8 .. 1e8
  constexpr int kGrid = 1601;
  double prev = 0.0, prev_ratio = kInf, sup_c = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double t = std::pow(10.0, -8.0 + 16.0 * i / (kGrid - 1));
    const double w = omega(t);
    if (!(w > 0.0)) {
      res.reason = "omega vanishes at a positive t";
      return res;
    }
    if (w < prev * (1.0 - 1e-12)) {
      res.reason = "omega is not nondecreasing";
      return res;
    }
    const double ratio = w / std::pow(t, k);
    if (ratio > prev_ratio * (1.0 + 1e-9)) {
      res.reason = "omega(t)/t^k increasing";
      return res;
    }
    prev = w;
    prev_ratio = ratio;
    sup_c = std::max(sup_c, omega.dini_integral(0.0, t) / w);
  }
  if (omega.kind() == Majorant::Kind::Table && omega(2e8) == omega(1e8)) {
    res.reason = "C_omega infinite (constant tail)";
    return res;
  }
  res.is_quasipower = true;
  res.c_omega = omega.kind() == Majorant::Kind::Power ? 1.0 / omega.parameter() : sup_c;
  return res;
}

MajorantSumResult majorant_sum_check(const Majorant& omega, int k, int i, int i_prime) {
  if (!(i < i_prime)) fail(ErrorCode::InvalidArgument, "majorant_sum_check: need i < i'");
  const auto qp = quasipower_check(omega, k);
  if (!qp.is_quasipower)
    fail(ErrorCode::Domain, "majorant_sum_check: omega is not a quasipower majorant (" + qp.reason + ")");
  MajorantSumResult res;
  for (int j = i; j <= i_prime; ++j) res.lhs += omega(std::ldexp(1.0, j));
  res.rhs = omega(std::ldexp(1.0, i_prime));
  res.ratio = res.lhs / res.rhs;
  res.cap = std::ldexp(1.0, k) * qp.c_omega / std::log(2.0);
  res.within_cap = res.ratio <= res.cap * (1.0 + 1e-6);
  return res;
}

// ---------------------------------------------------------------------------

std::size_t approx_dim(int num_vars, int k) {
  return k <= 0 ? 0 : monomial_count(num_vars, k - 1);
}

namespace {

double normalized_norm(const Eigen::VectorXd& res, const Eigen::VectorXd& w, double q) {
  if (std::isinf(q)) return res.cwiseAbs().maxCoeff();
  if (q == 2.0) return std::sqrt(w.dot(res.cwiseAbs2()));
  return w.dot(res.cwiseAbs());
}

Eigen::VectorXd weighted_ls(const Eigen::MatrixXd& A, const Eigen::VectorXd& f, const Eigen::VectorXd& w,
                            Eigen::Index* rank) {
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd B = sw.asDiagonal() * A;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(B);
  if (rank) *rank = cod.rank();
  return cod.solve(sw.cwiseProduct(f));
}

Eigen::VectorXd solve_l1(const Eigen::MatrixXd& A, const Eigen::VectorXd& f, const Eigen::VectorXd& w,
                         Eigen::VectorXd c) {
  const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
  double best = normalized_norm(f - A * c, w, 1.0);
  Eigen::VectorXd best_c = c;
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd res = f - A * c;
    Eigen::VectorXd v(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) v[i] = w[i] / std::max(std::abs(res[i]), 1e-13 * scale);
    c = weighted_ls(A, f, v, nullptr);
    const double val = normalized_norm(f - A * c, w, 1.0);
    if (val < best) {
      if (best - val <= 1e-15 * scale) {
        best = val;
        best_c = c;
        break;
      }
      best = val;
      best_c = c;
    }
  }
  return best_c;
}

Eigen::VectorXd solve_minimax(const Eigen::MatrixXd& A, const Eigen::VectorXd& f, Eigen::VectorXd c) {
  const Eigen::Index m = A.rows(), d = A.cols();
  const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
  Eigen::VectorXd best_c = c;
  double best = (f - A * c).cwiseAbs().maxCoeff();
  // Lawson iteration
  Eigen::VectorXd v = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  for (int it = 0; it < 1000; ++it) {
    c = weighted_ls(A, f, v, nullptr);
    const Eigen::VectorXd res = f - A * c;
    const double val = res.cwiseAbs().maxCoeff();
    if (val < best) {
      best = val;
      best_c = c;
    }
    const double lower = std::sqrt(v.dot(res.cwiseAbs2()));
    if (best - lower <= 1e-12 * scale) break;
    Eigen::VectorXd nv = v.cwiseProduct(res.cwiseAbs());
    const double total = nv.sum();
    if (!(total > 0.0)) break;
    v = nv / total;
  }
  // reference polish: level the d+1 largest residuals
  if (m > d) {
    for (int it = 0; it < 30; ++it) {
      const Eigen::VectorXd res = f - A * best_c;
      std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
      std::iota(order.begin(), order.end(), Eigen::Index{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](Eigen::Index a, Eigen::Index b) { return std::abs(res[a]) > std::abs(res[b]); });
      Eigen::MatrixXd S(d + 1, d + 1);
      Eigen::VectorXd rhs(d + 1);
      for (Eigen::Index r = 0; r <= d; ++r) {
        const Eigen::Index i = order[static_cast<std::size_t>(r)];
        S.row(r).head(d) = A.row(i);
        S(r, d) = res[i] >= 0.0 ? 1.0 : -1.0;
        rhs[r] = f[i];
      }
      const Eigen::VectorXd sol = S.completeOrthogonalDecomposition().solve(rhs);
      const Eigen::VectorXd cand = sol.head(d);
      const double val = (f - A * cand).cwiseAbs().maxCoeff();
      if (!(val < best * (1.0 - 1e-15))) break;
      best = val;
      best_c = cand;
    }
  }
  return best_c;
}

}  // namespace

LocalApprox best_approx_points(int num_vars, std::span<const double> points,
                               std::span<const double> masses, std::span<const double> values,
                               std::span<const double> center, double radius, int k, double q) {
  if (k < 0) fail(ErrorCode::InvalidArgument, "best approximation: k must be non-negative");
  if (!(q == 1.0 || q == 2.0 || std::isinf(q)))
    fail(ErrorCode::InvalidArgument, "best approximation: q must be 1, 2 or inf");
  if (!(radius > 0.0)) fail(ErrorCode::InvalidArgument, "best approximation: radius must be positive");
  const auto n = static_cast<std::size_t>(num_vars);
  if (points.size() != masses.size() * n || values.size() != masses.size() || center.size() != n)
    fail(ErrorCode::DimensionMismatch, "best approximation: inconsistent input sizes");

  std::vector<std::size_t> use;
  double mu = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i)
    if (masses[i] > 0.0) {
      use.push_back(i);
      mu += masses[i];
    }
  if (use.empty()) fail(ErrorCode::Empty, "best approximation: cube holds no mass");

  const auto m = static_cast<Eigen::Index>(use.size());
  Eigen::VectorXd f(m), w(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    f[r] = values[use[static_cast<std::size_t>(r)]];
    w[r] = masses[use[static_cast<std::size_t>(r)]] / mu;
  }

  LocalApprox out;
  out.points = use.size();
  out.poly = Polynomial(num_vars, 0);
  if (k == 0) {
    out.value = normalized_norm(f, w, q);
    return out;
  }

  const auto basis = monomial_basis(num_vars, k - 1);
  const auto d = static_cast<Eigen::Index>(basis->size());
  Eigen::MatrixXd A(m, d);
  std::vector<double> y(n);
  for (Eigen::Index r = 0; r < m; ++r) {
    const std::size_t i = use[static_cast<std::size_t>(r)];
    for (std::size_t a = 0; a < n; ++a) y[a] = (points[i * n + a] - center[a]) / radius;
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& alpha = (*basis)[static_cast<std::size_t>(j)];
      double v = 1.0;
      for (std::size_t a = 0; a < n; ++a)
        for (int e = 0; e < alpha[a]; ++e) v *= y[a];
      A(r, j) = v;
    }
  }
  Eigen::Index rank = 0;
  Eigen::VectorXd c = weighted_ls(A, f, w, &rank);
  out.rank_deficient = rank < d;
  if (q == 1.0) c = solve_l1(A, f, w, c);
  else if (std::isinf(q)) c = solve_minimax(A, f, c);
  out.value = normalized_norm(f - A * c, w, q);

  std::vector<double> coeffs(c.data(), c.data() + c.size());
  const Polynomial local = Polynomial::from_coefficients(num_vars, k - 1, std::move(coeffs));
  std::vector<double> scale(n, 1.0 / radius), shift(n);
  for (std::size_t a = 0; a < n; ++a) shift[a] = -center[a] / radius;
  out.poly = local.affine_substitute(scale, shift);
  return out;
}

LocalApprox local_best_approx(std::span<const double> values, const FractalSet& X, const Cube& Q,
                              int k, double q) {
  if (values.size() != X.size())
    fail(ErrorCode::DimensionMismatch, "local_best_approx: one value per cloud point required");
  if (Q.center.size() != static_cast<std::size_t>(X.ambient_dim()))
    fail(ErrorCode::DimensionMismatch, "local_best_approx: cube dimension differs from the set");
  const auto idx = X.cube_indices(Q.center, Q.radius);
  if (idx.empty()) fail(ErrorCode::Empty, "local_best_approx: cube misses the cloud");
  const auto n = static_cast<std::size_t>(X.ambient_dim());
  std::vector<double> pts, ms, vs;
  pts.reserve(idx.size() * n);
  for (std::size_t i : idx) {
    auto p = X.point(i);
    pts.insert(pts.end(), p.begin(), p.end());
    ms.push_back(X.mass(i));
    vs.push_back(values[i]);
  }
  return best_approx_points(X.ambient_dim(), pts, ms, vs, Q.center, Q.radius, k, q);
}

SeminormResult campanato_seminorm(std::span<const double> values, const FractalSet& X,
                                  const CubeFamily& family, int k, double q, const Majorant& omega) {
  SeminormResult res;
  res.cubes = family.size();
  res.lower_bound = !family.exhaustive();
  if (family.size() == 0) return res;
  std::vector<double> ratio(family.size(), 0.0);
  std::vector<char> deficient(family.size(), 0);
  parallel_for(family.size(), [&](std::size_t i) {
    const auto la = local_best_approx(values, X, family[i], k, q);
    deficient[i] = la.rank_deficient;
    const double w = omega(family[i].radius);
    ratio[i] = la.value == 0.0 ? 0.0 : (w > 0.0 ? la.value / w : kInf);
  });
  for (std::size_t i = 0; i < family.size(); ++i) {
    res.rank_deficient += deficient[i] ? 1 : 0;
    if (ratio[i] > res.value) {
      res.value = ratio[i];
      res.witness = i;
    }
  }
  return res;
}

LipschitzResult lipschitz_seminorm(const RealFunction& g, int k, const Majorant& omega,
                                   const LipschitzOptions& options) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "lipschitz_seminorm: k must be at least 1");
  const std::size_t n = options.lo.size();
  if (n == 0 || options.hi.size() != n) fail(ErrorCode::InvalidArgument, "lipschitz_seminorm: probe box missing");
  if (2 * n + 1 > 20) fail(ErrorCode::InvalidArgument, "lipschitz_seminorm: dimension too large");
  double diag = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (!(options.hi[a] > options.lo[a])) fail(ErrorCode::InvalidArgument, "lipschitz_seminorm: empty probe box");
    diag += (options.hi[a] - options.lo[a]) * (options.hi[a] - options.lo[a]);
  }
  diag = std::sqrt(diag);
  const double h_max = options.h_max > 0.0 ? options.h_max : diag / k;
  const double log_span = options.decades * std::log(10.0);

  LipschitzResult res;
  std::vector<double> x(n), h(n), dir(n);
  for (std::size_t i = 0; i < options.budget; ++i) {
    double norm = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      dir[a] = 2.0 * halton(i, static_cast<int>(n + a)) - 1.0;
      norm += dir[a] * dir[a];
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) continue;
    const double len = h_max * std::exp(-log_span * halton(i, static_cast<int>(2 * n)));
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      h[a] = dir[a] / norm * len;
      const double lo = options.lo[a] - std::min(0.0, k * h[a]);
      const double hi = options.hi[a] - std::max(0.0, k * h[a]);
      if (hi < lo) ok = false;
      else x[a] = lo + (hi - lo) * halton(i, static_cast<int>(a));
    }
    if (!ok) continue;
    ++res.probes;
    const double w = omega(len);
    const double v = std::abs(finite_difference(g, k, x, h)) / w;
    if (v > res.value) {
      res.value = v;
      res.witness_x = x;
      res.witness_h = h;
    }
  }
  return res;
}

}  // namespace fr
