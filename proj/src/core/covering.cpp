#include "core/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fr {

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d2);
}

DiscreteMeasureSpace::DiscreteMeasureSpace(int dim, std::vector<double> points,
                                           std::vector<double> masses, DistanceFn distance)
    : dim_(dim), points_(std::move(points)), masses_(std::move(masses)), distance_(std::move(distance)) {
  if (dim_ < 1) fail(ErrorCode::InvalidArgument, "DiscreteMeasureSpace: dimension must be positive");
  if (points_.size() != masses_.size() * static_cast<std::size_t>(dim_))
    fail(ErrorCode::DimensionMismatch, "DiscreteMeasureSpace: point and mass counts disagree");
  for (double m : masses_) {
    if (!(m >= 0.0)) fail(ErrorCode::InvalidArgument, "DiscreteMeasureSpace: masses must be non-negative");
    total_mass_ += m;
  }
}

double DiscreteMeasureSpace::closed_ball_mass(std::span<const double> x, double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    if (distance_(x, point(i)) <= t) sum += masses_[i];
  return sum;
}

std::size_t DiscreteMeasureSpace::verify_pseudometric(std::size_t triples, std::uint64_t seed) const {
  if (size() == 0) return 0;
  Rng rng(seed);
  std::size_t bad = 0;
  for (std::size_t k = 0; k < triples; ++k) {
    auto a = point(rng.index(size()));
    auto b = point(rng.index(size()));
    auto c = point(rng.index(size()));
    const double ab = distance_(a, b), ba = distance_(b, a);
    const double ac = distance_(a, c), cb = distance_(c, b);
    const double scale = std::max({1.0, ab, ac, cb});
    if (ab < 0.0 || std::abs(ab - ba) > 1e-12 * scale) ++bad;
    else if (ab > ac + cb + 1e-12 * scale) ++bad;
  }
  return bad;
}

MajorantFn MajorantFn::power(double p, double s) {
  if (!(p > 0.0) || !(s > 0.0)) fail(ErrorCode::InvalidArgument, "majorant: p and s must be positive");
  MajorantFn f;
  f.kind_ = Kind::Power;
  f.scale_ = p;
  f.s_ = s;
  return f;
}

MajorantFn MajorantFn::power_over(double H, double s) {
  if (!(H > 0.0) || !(s > 0.0)) fail(ErrorCode::InvalidArgument, "majorant: H and s must be positive");
  MajorantFn f;
  f.kind_ = Kind::PowerOverH;
  f.scale_ = H;
  f.s_ = s;
  return f;
}

MajorantFn MajorantFn::table(std::vector<double> t, std::vector<double> values) {
  if (t.empty() || t.size() != values.size())
    fail(ErrorCode::InvalidArgument, "majorant table: knots and values must be nonempty and aligned");
  double pt = 0.0, pv = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > pt) || !(values[i] > pv))
      fail(ErrorCode::InvalidArgument, "majorant table: must be strictly increasing from (0,0)");
    pt = t[i];
    pv = values[i];
  }
  MajorantFn f;
  f.kind_ = Kind::Table;
  f.t_ = std::move(t);
  f.v_ = std::move(values);
  f.t_.insert(f.t_.begin(), 0.0);
  f.v_.insert(f.v_.begin(), 0.0);
  return f;
}

double MajorantFn::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power: return std::pow(scale_ * t, s_);
    case Kind::PowerOverH: return std::pow(t, s_) / scale_;
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

double MajorantFn::inverse(double level) const {
  if (level <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::Power: return std::pow(level, 1.0 / s_) / scale_;
    case Kind::PowerOverH: return std::pow(level * scale_, 1.0 / s_);
    case Kind::Table: {
      auto it = std::upper_bound(v_.begin(), v_.end(), level);
      std::size_t j = static_cast<std::size_t>(it - v_.begin());
      if (j >= v_.size()) j = v_.size() - 1;
      const std::size_t i = j - 1;
      const double slope = (v_[j] - v_[i]) / (t_[j] - t_[i]);
      return t_[i] + (level - v_[i]) / slope;
    }
  }
  return 0.0;
}

double tau(const DiscreteMeasureSpace& space, const MajorantFn& phi, std::span<const double> x) {
  std::vector<std::pair<double, double>> dm;
  dm.reserve(space.size());
  for (std::size_t i = 0; i < space.size(); ++i)
    if (space.mass(i) > 0.0) dm.emplace_back(space.distance(x, space.point(i)), space.mass(i));
  std::sort(dm.begin(), dm.end());
  // mu(closed B_t(x)) is constant, equal to `cum`, on [d_j, d_{j+1})
  double best = 0.0;
  double cum = 0.0;
  std::size_t j = 0;
  while (j < dm.size()) {
    const double d = dm[j].first;
    while (j < dm.size() && dm[j].first == d) cum += dm[j++].second;
    const double next = j < dm.size() ? dm[j].first : kInf;
    if (phi(d) <= cum) best = std::max(best, std::min(next, phi.inverse(cum)));
  }
  return best;
}

void validate_gorin_params(const GorinParams& p) {
  std::ostringstream msg;
  if (!(p.gamma > 0.0 && p.gamma < 0.5)) msg << "gamma must lie in (0, 1/2); ";
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) msg << "alpha must lie in (0, 1); ";
  if (!(p.beta > 2.0)) msg << "beta must exceed 2; ";
  if (!(p.gamma < p.alpha / p.beta)) msg << "gamma must be below alpha/beta; ";
  if (!msg.str().empty()) fail(ErrorCode::InvalidArgument, "gorin_cover: " + msg.str());
}

CoverOutput gorin_cover(const DiscreteMeasureSpace& space, const MajorantFn& phi,
                        const GorinParams& params, std::span<const double> probes) {
  validate_gorin_params(params);
  const auto dim = static_cast<std::size_t>(space.dim());
  if (probes.size() % dim != 0)
    fail(ErrorCode::DimensionMismatch, "gorin_cover: probe coordinates not a multiple of the dimension");
  std::vector<std::span<const double>> cand;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (space.mass(i) > 0.0) cand.push_back(space.point(i));
  for (std::size_t i = 0; i < probes.size() / dim; ++i) cand.push_back(probes.subspan(i * dim, dim));

  std::vector<double> taus(cand.size());
  parallel_for(cand.size(), [&](std::size_t i) { taus[i] = tau(space, phi, cand[i]); });

  CoverOutput out;
  out.params = params;
  out.candidates = cand.size();
  std::vector<char> covered(cand.size(), 0);
  for (std::size_t iter = 0; iter <= cand.size(); ++iter) {
    double tau_k = 0.0;
    std::size_t pick = cand.size();
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (covered[i]) continue;
      if (taus[i] > tau_k) {
        tau_k = taus[i];
        pick = i;
      }
    }
    if (pick == cand.size()) break;
    // the maximal-tau candidate trivially satisfies tau >= alpha * tau_k
    CoverBall ball;
    ball.center.assign(cand[pick].begin(), cand[pick].end());
    ball.radius = params.beta * tau_k;
    ball.candidate = pick;
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (!covered[i] && space.distance(cand[i], ball.center) <= ball.radius) covered[i] = 1;
    covered[pick] = 1;
    out.budget_used += phi(params.gamma * ball.radius);
    out.taus.push_back(tau_k);
    out.balls.push_back(std::move(ball));
  }
  return out;
}

double potential(const DiscreteMeasureSpace& space, std::span<const double> x) {
  double u = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (!(space.mass(i) > 0.0)) continue;
    const double d = space.distance(x, space.point(i));
    if (d == 0.0) return -kInf;
    u += space.mass(i) * std::log(d);
  }
  return u;
}

namespace {

bool outside_balls(const DiscreteMeasureSpace& space, const std::vector<CoverBall>& balls,
                   std::span<const double> x, double inflate = 1.0) {
  for (const auto& b : balls)
    if (space.distance(x, b.center) <= inflate * b.radius) return false;
  return true;
}

}  // namespace

Cor1Report cor1_verify(const DiscreteMeasureSpace& space, double H, double s,
                       const GorinParams& params, std::span<const double> probes) {
  if (!(H > 0.0) || !(s > 0.0)) fail(ErrorCode::InvalidArgument, "cor1_verify: H and s must be positive");
  validate_gorin_params(params);
  Cor1Report rep;
  const double k = space.total_mass();
  rep.total_mass = k;
  rep.radius_bound = std::pow(H / params.gamma, s) / s;
  rep.potential_bound = k * std::log(H / M_E);
  if (!(k > 0.0)) return rep;  // vacuous

  const double p = std::pow(k * s, 1.0 / s) / H;
  rep.cover = gorin_cover(space, MajorantFn::power(p, s), params, probes);
  for (const auto& b : rep.cover.balls) rep.radius_power_sum += std::pow(b.radius, s);
  if (!(rep.radius_power_sum < rep.radius_bound)) rep.passed = false;

  const auto dim = static_cast<std::size_t>(space.dim());
  const double tol = 1e-9 * std::max(1.0, std::abs(rep.potential_bound));
  rep.witness_value = kInf;
  for (std::size_t i = 0; i < probes.size() / dim; ++i) {
    auto x = probes.subspan(i * dim, dim);
    if (!outside_balls(space, rep.cover.balls, x)) continue;
    ++rep.points_checked;
    const double u = potential(space, x);
    if (u < rep.witness_value) {
      rep.witness_value = u;
      rep.witness.assign(x.begin(), x.end());
    }
    if (u < rep.potential_bound - tol) ++rep.violations;
  }
  if (rep.violations > 0) rep.passed = false;
  return rep;
}

std::vector<double> square_grid(std::span<const double> center, double half_width, std::size_t m) {
  std::vector<double> out;
  out.reserve(m * m * 2);
  const double step = m > 1 ? 2.0 * half_width / static_cast<double>(m - 1) : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out.push_back(center[0] - half_width + step * static_cast<double>(i));
      out.push_back(center[1] - half_width + step * static_cast<double>(j));
    }
  }
  return out;
}

std::vector<Complex> polynomial_roots(const Polynomial& f) {
  if (f.num_vars() != 1) fail(ErrorCode::InvalidArgument, "polynomial_roots: univariate polynomial required");
  const int d = f.degree();
  if (d > 50) fail(ErrorCode::InvalidArgument, "polynomial_roots: degree above 50");
  if (d <= 0) return {};
  auto c = f.coefficients();
  // basis order for one variable is x^0, x^1, ...
  const Complex lead = c[static_cast<std::size_t>(d)];
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) fail(ErrorCode::Internal, "polynomial_roots: eigenvalue solver failed");
  const Polynomial df = f.derivative(0);
  std::vector<Complex> roots;
  for (int i = 0; i < d; ++i) {
    Complex z = solver.eigenvalues()(i);
    for (int it = 0; it < 5; ++it) {
      const Complex fz = f.eval_complex(z);
      const Complex dz = df.eval_complex(z);
      if (std::abs(dz) == 0.0) break;
      const Complex next = z - fz / dz;
      if (std::abs(f.eval_complex(next)) < std::abs(fz)) z = next;
      else break;
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return roots;
}

double cartan_h(double eta) { return 2.0 + std::log(3.0 * M_E / (2.0 * eta)); }

namespace {

double log_max_modulus(const Polynomial& f, double radius) {
  constexpr int kSamples = 8192;
  double best = 0.0;
  double best_theta = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double th = 2.0 * M_PI * i / kSamples;
    const double v = std::abs(f.eval_complex(std::polar(radius, th)));
    if (v > best) {
      best = v;
      best_theta = th;
    }
  }
  // golden-section polish around the best sample
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_theta - 2.0 * M_PI / kSamples, hi = best_theta + 2.0 * M_PI / kSamples;
  for (int it = 0; it < 60; ++it) {
    const double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    const double fc = std::abs(f.eval_complex(std::polar(radius, c)));
    const double fd = std::abs(f.eval_complex(std::polar(radius, d)));
    best = std::max({best, fc, fd});
    if (fc > fd) hi = d;
    else lo = c;
  }
  return std::log(best);
}

}  // namespace

CartanReport cartan_disks(const Polynomial& f, double R, double eta, std::size_t grid,
                          const GorinParams& params) {
  if (f.num_vars() != 1) fail(ErrorCode::InvalidArgument, "cartan_disks: univariate polynomial required");
  if (f.coefficients()[0] != Complex(1.0, 0.0))
    fail(ErrorCode::InvalidArgument, "cartan_disks: f(0) must equal 1");
  if (!(R > 0.0)) fail(ErrorCode::InvalidArgument, "cartan_disks: R must be positive");
  if (!(eta > 0.0 && eta <= 1.5 * M_E)) fail(ErrorCode::InvalidArgument, "cartan_disks: eta must lie in (0, 3e/2]");
  validate_gorin_params(params);

  CartanReport rep;
  rep.h_eta = cartan_h(eta);
  rep.log_max_modulus = log_max_modulus(f, 2.0 * M_E * R);
  rep.lower_bound = -rep.h_eta * rep.log_max_modulus;
  rep.radius_limit = 4.0 * eta * R;
  for (const Complex& z : polynomial_roots(f))
    if (std::abs(z) <= 2.0 * R) rep.zeros.push_back(z);

  std::vector<double> probes;
  const std::vector<double> origin{0.0, 0.0};
  {
    auto sq = square_grid(origin, R, grid);
    for (std::size_t i = 0; i < sq.size(); i += 2)
      if (std::hypot(sq[i], sq[i + 1]) <= R) {
        probes.push_back(sq[i]);
        probes.push_back(sq[i + 1]);
      }
  }

  const std::size_t nz = rep.zeros.size();
  std::vector<double> pts;
  for (const Complex& z : rep.zeros) {
    pts.push_back(z.real());
    pts.push_back(z.imag());
  }
  DiscreteMeasureSpace space(2, pts, std::vector<double>(nz, 1.0));
  std::vector<CoverBall> balls;
  if (nz > 0) {
    // sum phi(gamma t_k) < N with phi(t) = N t / H gives sum t_k < H / gamma;
    // doubling the radii and H = 2 gamma eta R keeps sum r_i below 4 eta R.
    const double H = 2.0 * params.gamma * eta * R;
    const auto cover = gorin_cover(space, MajorantFn::power(static_cast<double>(nz) / H, 1.0), params, probes);
    balls = cover.balls;
  }
  for (const auto& b : balls) {
    rep.disks.push_back({Complex(b.center[0], b.center[1]), 2.0 * b.radius});
    rep.radius_sum += 2.0 * b.radius;
  }
  for (const Complex& z : rep.zeros) {
    bool hit = false;
    for (const auto& d : rep.disks) hit = hit || std::abs(z - d.center) <= 0.5 * d.radius;
    if (!hit) rep.zeros_covered = false;
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(rep.lower_bound));
  for (std::size_t i = 0; i < probes.size(); i += 2) {
    const Complex z(probes[i], probes[i + 1]);
    bool inside = false;
    for (const auto& d : rep.disks) inside = inside || std::abs(z - d.center) <= d.radius;
    if (inside) continue;
    ++rep.grid_checked;
    const double a = std::abs(f.eval_complex(z));
    const double lf = a > 0.0 ? std::log(a) : -kInf;
    const double margin = lf - rep.lower_bound;
    if (margin < rep.min_margin) {
      rep.min_margin = margin;
      rep.witness = z;
    }
    if (margin < -tol) ++rep.violations;
  }
  rep.passed = rep.violations == 0 && rep.zeros_covered && rep.radius_sum <= rep.radius_limit &&
               rep.disks.size() <= nz;
  return rep;
}

}  // namespace fr
