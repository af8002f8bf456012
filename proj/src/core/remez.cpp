#include "core/remez.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace fr {

Box Box::cube(std::span<const double> center, double radius) {
  Box b;
  for (double c : center) {
    b.lo.push_back(c - radius);
    b.hi.push_back(c + radius);
  }
  return b;
}

int region_dim(const Region& region) {
  return std::visit([](const auto& r) -> int {
    using T = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<T, Ball>) return static_cast<int>(r.center.size());
    else return static_cast<int>(r.lo.size());
  }, region);
}

double region_volume(const Region& region) {
  if (const auto* b = std::get_if<Ball>(&region)) {
    const double n = static_cast<double>(b->center.size());
    return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(b->radius, n);
  }
  const auto& box = std::get<Box>(region);
  double v = 1.0;
  for (std::size_t i = 0; i < box.lo.size(); ++i) v *= box.hi[i] - box.lo[i];
  return v;
}

bool region_contains(const Region& region, std::span<const double> x, double tol) {
  if (const auto* b = std::get_if<Ball>(&region)) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - b->center[i]) * (x[i] - b->center[i]);
    return std::sqrt(d2) <= b->radius + tol;
  }
  const auto& box = std::get<Box>(region);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < box.lo[i] - tol || x[i] > box.hi[i] + tol) return false;
  return true;
}

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0)) fail(ErrorCode::Domain, "Remez bound: lambda must be positive");
  if (lambda > 1.0) fail(ErrorCode::Domain, "Remez bound: lambda must not exceed 1");
}

void check_region(const Region& region) {
  if (const auto* b = std::get_if<Ball>(&region)) {
    if (b->center.empty() || !(b->radius > 0.0))
      fail(ErrorCode::Empty, "region: ball must have positive radius");
  } else {
    const auto& box = std::get<Box>(region);
    if (box.lo.empty() || box.lo.size() != box.hi.size())
      fail(ErrorCode::Empty, "region: malformed box");
    for (std::size_t i = 0; i < box.lo.size(); ++i)
      if (!(box.hi[i] >= box.lo[i])) fail(ErrorCode::Empty, "region: empty box");
  }
}

/// Halton points inside the region; balls use rejection from the bounding
/// cube, which keeps the prefix property.
class RegionSampler {
 public:
  explicit RegionSampler(const Region& region) : region_(region), dim_(region_dim(region)) {
    if (const auto* b = std::get_if<Ball>(&region)) {
      for (double c : b->center) {
        lo_.push_back(c - b->radius);
        hi_.push_back(c + b->radius);
      }
    } else {
      lo_ = std::get<Box>(region).lo;
      hi_ = std::get<Box>(region).hi;
    }
  }

  void next(std::span<double> out) {
    for (;;) {
      for (int i = 0; i < dim_; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        out[ui] = lo_[ui] + (hi_[ui] - lo_[ui]) * halton(counter_, i);
      }
      ++counter_;
      if (region_contains(region_, out)) return;
    }
  }

  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

 private:
  const Region& region_;
  int dim_;
  std::vector<double> lo_, hi_;
  std::uint64_t counter_ = 0;
};

/// Feasible interval for coordinate i through x inside the region.
std::pair<double, double> coordinate_span(const Region& region, std::span<const double> x,
                                          std::size_t i) {
  if (const auto* b = std::get_if<Ball>(&region)) {
    double rest = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) rest += (x[j] - b->center[j]) * (x[j] - b->center[j]);
    const double half = std::sqrt(std::max(0.0, b->radius * b->radius - rest));
    return {b->center[i] - half, b->center[i] + half};
  }
  const auto& box = std::get<Box>(region);
  return {box.lo[i], box.hi[i]};
}

double refine(const Polynomial& p, const Region& region, std::vector<double> x, double start_value,
              double step) {
  constexpr int kSweeps = 20;
  constexpr int kGolden = 30;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double best = start_value;
  for (int sweep = 0; sweep < kSweeps; ++sweep) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto [a, b] = coordinate_span(region, x, i);
      a = std::max(a, x[i] - step);
      b = std::min(b, x[i] + step);
      if (!(b > a)) continue;
      const double keep = x[i];
      auto value_at = [&](double t) {
        x[i] = t;
        return std::abs(p.eval(x));
      };
      double arg = keep;
      double val = best;
      for (double t : {a, b}) {
        const double v = value_at(t);
        if (v > val) {
          val = v;
          arg = t;
        }
      }
      double lo = a, hi = b;
      double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
      double fc = value_at(c), fd = value_at(d);
      for (int it = 0; it < kGolden; ++it) {
        if (fc > fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - g * (hi - lo);
          fc = value_at(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + g * (hi - lo);
          fd = value_at(d);
        }
        if (fc > val) {
          val = fc;
          arg = c;
        }
        if (fd > val) {
          val = fd;
          arg = d;
        }
      }
      x[i] = val > best ? arg : keep;
      best = std::max(best, val);
    }
    step *= 0.6;
  }
  return best;
}

}  // namespace

double bg_bound(int n, int k, double lambda) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "bg_bound: n must be positive");
  if (k < 0) fail(ErrorCode::InvalidArgument, "bg_bound: k must be non-negative");
  check_lambda(lambda);
  if (lambda == 1.0) return chebyshev_value(k, 1.0);
  const double beta = std::pow(1.0 - lambda, 1.0 / n);
  return chebyshev_value(k, (1.0 + beta) / (1.0 - beta));
}

double simple_bound(int n, int k, double lambda) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "simple_bound: n must be positive");
  if (k < 0) fail(ErrorCode::InvalidArgument, "simple_bound: k must be non-negative");
  check_lambda(lambda);
  return std::pow(4.0 * n / lambda, k);
}

double sup_norm(const Polynomial& p, const FractalSet& cloud) {
  if (cloud.size() == 0) fail(ErrorCode::Empty, "sup_norm: empty domain");
  double best = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) best = std::max(best, abs_at(p, cloud.point(i)));
  return best;
}

double sup_norm(const Polynomial& p, const Region& region, std::size_t budget) {
  check_region(region);
  const int n = region_dim(region);
  if (n != p.num_vars()) fail(ErrorCode::DimensionMismatch, "sup_norm: region dimension mismatch");
  budget = std::max<std::size_t>(budget, 1);
  RegionSampler sampler(region);
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> pts(budget * un);
  std::vector<double> vals(budget);
  double best = 0.0;
  for (std::size_t i = 0; i < budget; ++i) {
    std::span<double> x(pts.data() + i * un, un);
    sampler.next(x);
    vals[i] = std::abs(p.eval(x));
    best = std::max(best, vals[i]);
  }
  double extent = 0.0;
  for (std::size_t i = 0; i < un; ++i) extent = std::max(extent, sampler.hi()[i] - sampler.lo()[i]);

  // Starts: the first few samples, then the best few of every dyadic prefix.
  // Each start keeps the step of the prefix that first selected it, so the
  // refined set only grows with the budget and the result is monotone.
  constexpr std::size_t kStarts = 8;
  std::map<std::size_t, double> refined;
  auto refine_at = [&](std::size_t idx, std::size_t level) {
    if (refined.count(idx)) return;
    const double step = 2.0 * extent / std::pow(static_cast<double>(level), 1.0 / n);
    std::vector<double> x(pts.begin() + static_cast<std::ptrdiff_t>(idx * un),
                          pts.begin() + static_cast<std::ptrdiff_t>((idx + 1) * un));
    refined[idx] = refine(p, region, std::move(x), vals[idx], step);
    best = std::max(best, refined[idx]);
  };
  for (std::size_t idx = 0; idx < std::min(budget, kStarts); ++idx) refine_at(idx, 16);
  for (std::size_t level = 16; level <= budget; level *= 2) {
    std::vector<std::size_t> order(level);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kStarts), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return vals[a] > vals[b] || (vals[a] == vals[b] && a < b);
                      });
    for (std::size_t t = 0; t < kStarts; ++t) refine_at(order[t], level);
  }
  return best;
}

double region_mean_norm(const Polynomial& p, const Region& region, double r, std::size_t budget) {
  check_region(region);
  if (std::isinf(r)) return sup_norm(p, region, budget);
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "region_mean_norm: exponent must be positive");
  const auto un = static_cast<std::size_t>(region_dim(region));
  RegionSampler sampler(region);
  std::vector<double> x(un);
  double sum = 0.0;
  budget = std::max<std::size_t>(budget, 1);
  for (std::size_t i = 0; i < budget; ++i) {
    sampler.next(x);
    sum += std::pow(std::abs(p.eval(x)), r);
  }
  return std::pow(sum / static_cast<double>(budget), 1.0 / r);
}

double cloud_mean_norm(const Polynomial& p, const FractalSet& cloud, double q) {
  if (cloud.size() == 0) fail(ErrorCode::Empty, "cloud_mean_norm: empty set");
  if (std::isinf(q)) return sup_norm(p, cloud);
  if (!(q > 0.0)) fail(ErrorCode::InvalidArgument, "cloud_mean_norm: exponent must be positive");
  double sum = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    sum += cloud.mass(i) * std::pow(abs_at(p, cloud.point(i)), q);
  return std::pow(sum / cloud.total_mass(), 1.0 / q);
}

namespace {

void check_exponent(double e, const char* name) {
  if (!(e == 1.0 || e == 2.0 || std::isinf(e))) {
    std::ostringstream msg;
    msg << "empirical_remez: exponent " << name << " must be 1, 2 or inf";
    fail(ErrorCode::InvalidArgument, msg.str());
  }
}

}  // namespace

RemezReport empirical_remez(const Polynomial& p, const Region& V, const FractalSet& omega,
                            double q, double r, std::size_t budget) {
  check_exponent(q, "q");
  check_exponent(r, "r");
  check_region(V);
  if (omega.size() == 0) fail(ErrorCode::Empty, "empirical_remez: omega is empty");
  const int n = region_dim(V);
  if (n != omega.ambient_dim() || n != p.num_vars())
    fail(ErrorCode::DimensionMismatch, "empirical_remez: dimension mismatch");
  const double tol = omega.cell_size() + 1e-12;
  for (std::size_t i = 0; i < omega.size(); ++i)
    if (!region_contains(V, omega.point(i), tol))
      fail(ErrorCode::Domain, "empirical_remez: omega is not contained in V");

  RemezReport rep;
  rep.n = n;
  rep.k = std::max(p.degree(), 0);
  rep.s = omega.s();
  rep.q = q;
  rep.r = r;
  rep.lambda = std::pow(omega.total_mass(), n / omega.s()) / region_volume(V);
  if (rep.lambda > 0.0 && rep.lambda <= 1.0) {
    rep.bound_bg = bg_bound(n, rep.k, rep.lambda);
    rep.bound_simple = simple_bound(n, rep.k, rep.lambda);
  }
  rep.lhs = region_mean_norm(p, V, r, budget);
  rep.rhs = cloud_mean_norm(p, omega, q);
  if (rep.rhs > 0.0) {
    rep.empirical_ratio = rep.lhs / rep.rhs;
  } else if (rep.lhs > 0.0) {
    rep.hypothesis_violated = true;
    rep.empirical_ratio = kInf;
  } else {
    rep.empirical_ratio = 1.0;
  }
  return rep;
}

MarkovResult markov_check(const Polynomial& p, const FractalSet& F, std::span<const double> x,
                          double r) {
  if (p.kind() != ScalarKind::Real) fail(ErrorCode::InvalidArgument, "markov_check: real polynomial required");
  if (p.num_vars() != F.ambient_dim()) fail(ErrorCode::DimensionMismatch, "markov_check: dimension mismatch");
  const auto idx = F.ball_indices(x, r, true);
  if (idx.empty()) fail(ErrorCode::Empty, "markov_check: ball does not meet the set");
  const auto grad = gradient(p);
  MarkovResult res;
  res.points = idx.size();
  for (std::size_t i : idx) {
    auto y = F.point(i);
    res.max_value = std::max(res.max_value, std::abs(p.eval(y)));
    double g2 = 0.0;
    for (const auto& gi : grad) {
      const double v = gi.eval(y);
      g2 += v * v;
    }
    res.max_gradient = std::max(res.max_gradient, std::sqrt(g2));
  }
  if (res.max_value > 0.0) {
    res.constant = r * res.max_gradient / res.max_value;
  } else {
    res.vanishes = true;
    res.constant = res.max_gradient > 0.0 ? kInf : 0.0;
  }
  return res;
}

double abs_at(const Polynomial& p, std::span<const double> point) {
  if (p.kind() == ScalarKind::Complex) {
    if (point.size() == 1) return std::abs(p.eval_complex(Complex(point[0], 0.0)));
    if (point.size() == 2) return std::abs(p.eval_complex(Complex(point[0], point[1])));
    fail(ErrorCode::DimensionMismatch, "complex polynomial needs points in R or C");
  }
  return std::abs(p.eval(point));
}

BmoResult bmo_oscillation(const Polynomial& p, const FractalSet& X, std::span<const double> scales,
                          std::size_t max_centers) {
  if (p.is_zero()) fail(ErrorCode::InvalidArgument, "bmo_oscillation: p must not vanish identically");
  if (X.size() == 0) fail(ErrorCode::Empty, "bmo_oscillation: empty set");
  if (scales.empty()) fail(ErrorCode::InvalidArgument, "bmo_oscillation: no scales given");
  const std::size_t n = X.size();
  std::vector<double> logs(n);
  std::vector<char> keep(n);
  BmoResult res;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = abs_at(p, X.point(i));
    keep[i] = a >= kLogClamp;
    logs[i] = keep[i] ? std::log(a) : 0.0;
    if (!keep[i]) res.excluded_mass += X.mass(i);
  }
  if (res.excluded_mass >= X.total_mass())
    fail(ErrorCode::Domain, "bmo_oscillation: all mass excluded (p vanishes on the set)");
  const std::size_t stride = std::max<std::size_t>(1, (n + max_centers - 1) / std::max<std::size_t>(max_centers, 1));
  for (std::size_t c = 0; c < n; c += stride) {
    for (double r : scales) {
      const auto idx = X.ball_indices(X.point(c), r);
      double mass = 0.0, sum = 0.0;
      for (std::size_t i : idx) {
        if (!keep[i]) continue;
        mass += X.mass(i);
        sum += X.mass(i) * logs[i];
      }
      if (!(mass > 0.0)) continue;
      const double mean = sum / mass;
      double dev = 0.0;
      for (std::size_t i : idx)
        if (keep[i]) dev += X.mass(i) * std::abs(logs[i] - mean);
      dev /= mass;
      ++res.balls;
      if (dev > res.max_oscillation || res.witness_center.empty()) {
        res.max_oscillation = dev;
        auto pc = X.point(c);
        res.witness_center.assign(pc.begin(), pc.end());
        res.witness_radius = r;
      }
    }
  }
  return res;
}

double reverse_holder(const Polynomial& p, const FractalSet& X, std::span<const double> x,
                      double r, double l) {
  if (!(l >= 1.0)) fail(ErrorCode::InvalidArgument, "reverse_holder: exponent must be >= 1");
  const auto idx = X.ball_indices(x, r);
  double mass = 0.0, l1 = 0.0, ll = 0.0, mx = 0.0;
  for (std::size_t i : idx) {
    const double a = abs_at(p, X.point(i));
    mass += X.mass(i);
    l1 += X.mass(i) * a;
    if (std::isinf(l)) mx = std::max(mx, a);
    else ll += X.mass(i) * std::pow(a, l);
  }
  if (!(mass > 0.0) || !(l1 > 0.0)) fail(ErrorCode::Domain, "reverse_holder: zero denominator");
  const double num = std::isinf(l) ? mx : std::pow(ll / mass, 1.0 / l);
  return num / (l1 / mass);
}

}  // namespace fr
