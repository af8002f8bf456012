#include "core/extension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/Dense>

#include "core/remez.hpp"

namespace fr {

namespace {

constexpr std::size_t kNpos = static_cast<std::size_t>(-1);

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double bump(double t) { return t < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }

double default_floor(const FractalSet& X) {
  const double r = 4.0 * X.cell_size();
  return r > 0.0 ? r : X.diam() / 1024.0;
}

}  // namespace

Projection project(std::span<const double> values, const Cube& Q, int k, const FractalSet& X) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "project: k must be at least 1");
  const auto la = local_best_approx(values, X, Q, k, 2.0);
  return {la.poly, la.points, la.rank_deficient};
}

double projection_norm(const Cube& Q, int k, const FractalSet& X) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "projection_norm: k must be at least 1");
  const auto idx = X.cube_indices(Q.center, Q.radius);
  if (idx.empty()) fail(ErrorCode::Empty, "projection_norm: cube misses the cloud");
  const auto n = static_cast<std::size_t>(X.ambient_dim());
  const auto basis = monomial_basis(X.ambient_dim(), k - 1);
  const auto m = static_cast<Eigen::Index>(idx.size());
  const auto d = static_cast<Eigen::Index>(basis->size());
  Eigen::MatrixXd A(m, d);
  Eigen::VectorXd w(m);
  double wsum = 0.0;
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto p = X.point(idx[static_cast<std::size_t>(r)]);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& alpha = (*basis)[static_cast<std::size_t>(j)];
      double v = 1.0;
      for (std::size_t a = 0; a < n; ++a)
        for (int e = 0; e < alpha[a]; ++e) v *= (p[a] - Q.center[a]) / Q.radius;
      A(r, j) = v;
    }
    w(r) = X.mass(idx[static_cast<std::size_t>(r)]);
    wsum += w(r);
  }
  // zero-mass clouds fall back to counting measure, as the projection does
  if (!(wsum > 0.0)) w.setOnes();
  const Eigen::MatrixXd gram = A.transpose() * w.asDiagonal() * A;
  const Eigen::MatrixXd G = A * gram.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::MatrixXd Aw = w.asDiagonal() * A;
  double best = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) best = std::max(best, (Aw * G.row(i).transpose()).cwiseAbs().sum());
  return best;
}

ProjectionNormSample sampled_projection_norm(const CubeFamily& family, int k, const FractalSet& X,
                                             std::size_t samples, std::size_t max_points) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < family.size(); ++i)
    if (family[i].radius <= X.diam()) eligible.push_back(i);
  ProjectionNormSample out;
  if (eligible.empty() || samples == 0) return out;
  const std::size_t take = std::min(samples, eligible.size());
  std::vector<double> norms(take, kNaN);
  parallel_for(take, [&](std::size_t t) {
    const Cube& Q = family[eligible[t * eligible.size() / take]];
    if (X.cube_indices(Q.center, Q.radius).size() <= max_points) norms[t] = projection_norm(Q, k, X);
  });
  for (std::size_t t = 0; t < take; ++t) {
    if (std::isnan(norms[t])) continue;
    ++out.cubes;
    out.mean += norms[t];
    if (norms[t] > out.max) {
      out.max = norms[t];
      out.witness = eligible[t * eligible.size() / take];
    }
  }
  if (out.cubes > 0) out.mean /= static_cast<double>(out.cubes);
  return out;
}

OscillationSplit oscillation_split(std::span<const double> values, const FractalSet& X, const Cube& Q,
                                   const Cube& K, const Majorant& omega, double q) {
  const double r = Q.radius, R = K.radius;
  if (!(r > 0.0) || r > R) fail(ErrorCode::Domain, "oscillation_split: need 0 < r_Q <= r_K");
  OscillationSplit out;
  out.lhs = local_best_approx(values, X, Q, 1, q).value;
  // int_r^{2R} omega(t)/t^2 dt with t = e^u, composite Simpson
  const int steps = 2048;
  const double a = std::log(r), h = (std::log(2.0 * R) - a) / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double u = a + i * h;
    const double c = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += c * omega(std::exp(u)) * std::exp(-u);
  }
  out.integral_term = r * acc * h / 3.0;
  const Cube K2{K.center, 2.0 * R, K.center_index};
  out.norm_term = (r / R) * local_best_approx(values, X, K2, 0, q).value;
  const double rhs = out.integral_term + out.norm_term;
  if (rhs > 0.0) out.ratio = out.lhs / rhs;
  return out;
}

TraceResult trace_tilde(std::span<const double> values, std::size_t index, int k, const FractalSet& X,
                        int ladder_depth, double r_min) {
  if (index >= X.size()) fail(ErrorCode::InvalidArgument, "trace_tilde: point index out of range");
  if (ladder_depth < 3) fail(ErrorCode::Domain, "trace_tilde: at least 3 rungs are required");
  const double floor_r = r_min > 0.0 ? r_min : default_floor(X);
  const int j0 = static_cast<int>(std::ceil(std::log2(floor_r) - 1e-12));
  auto x = X.point(index);
  TraceResult res;
  for (int j = j0; j < j0 + ladder_depth; ++j) {
    const double r = std::ldexp(1.0, j);
    if (r > X.diam()) break;
    res.radii.push_back(r);
  }
  if (res.radii.size() < 3) fail(ErrorCode::Domain, "trace_tilde: fewer than 3 resolvable rungs below diam");
  for (double r : res.radii) {
    const Cube Q{std::vector<double>(x.begin(), x.end()), r, index};
    res.rung_values.push_back(project(values, Q, k, X).poly.eval(x));
  }
  for (std::size_t j = 0; j + 1 < res.rung_values.size(); ++j)
    res.increments.push_back(std::abs(res.rung_values[j + 1] - res.rung_values[j]));
  res.value = res.rung_values.front();
  return res;
}

ChainSeminorm chain_seminorm(const Chain& chain, const CubeFamily& family, const FractalSet& X,
                             std::size_t partners,
                             std::size_t budget) {
  if (chain.entries.size() != family.size())
    fail(ErrorCode::DimensionMismatch, "chain_seminorm: chain and family sizes differ");
  ChainSeminorm out;
  if (!family.laddered() || family.size() == 0) return out;
  const auto& ladder = family.ladder();
  const std::size_t L = ladder.size();
  const std::size_t n = family[0].center.size();

  struct Local {
    double value = 0.0;
    std::size_t large = 0;
    std::size_t admissible = 0, checked = 0;
  };
  std::vector<Local> local(family.size());
  parallel_for(family.size(), [&](std::size_t a) {
    const Cube& Q = family[a];
    const std::size_t rung = a % L;
    std::vector<std::size_t> cand;
    for (std::size_t up = rung + 1; up <= rung + 2 && up < L; ++up) {
      const double reach = ladder[up] - Q.radius;
      for (std::size_t c : X.cube_indices(Q.center, reach)) {
        const std::size_t b = family.find(c, up);
        if (b != kNpos) cand.push_back(b);
      }
    }
    Local& loc = local[a];
    loc.admissible = cand.size();
    if (cand.empty()) return;
    const std::size_t take = std::min(partners, cand.size());
    std::vector<std::size_t> pick;
    for (std::size_t t = 0; t < take; ++t) pick.push_back(cand[t * cand.size() / take]);
    const Box box = Box::cube(Q.center, Q.radius);
    for (std::size_t b : pick) {
      const Polynomial diff = chain.entries[a] - chain.entries[b];
      double m = 0.0;
      if (diff.degree() <= 1) {
        std::vector<double> v(n);
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
          for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i & 1) ? box.hi[i] : box.lo[i];
          m = std::max(m, std::abs(diff.eval(v)));
        }
      } else {
        m = sup_norm(diff, Region{box}, budget);
      }
      const double w = chain.omega(family[b].radius);
      const double ratio = m == 0.0 ? 0.0 : m / w;
      ++loc.checked;
      if (ratio > loc.value) {
        loc.value = ratio;
        loc.large = b;
      }
    }
  });
  for (std::size_t a = 0; a < local.size(); ++a) {
    out.admissible += local[a].admissible;
    out.checked += local[a].checked;
    if (local[a].value > out.value) {
      out.value = local[a].value;
      out.small = a;
      out.large = local[a].large;
    }
  }
  return out;
}

Chain build_chain(std::span<const double> values, const FractalSet& X, const CubeFamily& family, int k,
                  const Majorant& omega, bool compute_seminorm) {
  if (!family.laddered()) fail(ErrorCode::InvalidArgument, "build_chain: family must carry a dyadic ladder");
  const auto qp = quasipower_check(omega, k);
  if (!qp.is_quasipower)
    fail(ErrorCode::Domain, "build_chain: omega is not a quasipower majorant (" + qp.reason + ")");
  if (values.size() != X.size())
    fail(ErrorCode::DimensionMismatch, "build_chain: one value per cloud point required");

  Chain chain;
  chain.k = k;
  chain.omega = omega;
  const double floor_r = family.ladder().front();
  const auto& centers = family.centers();
  std::vector<double> trace(X.size(), kNaN);
  parallel_for(centers.size(), [&](std::size_t s) {
    trace[centers[s]] = trace_tilde(values, centers[s], k, X, 3, floor_r).value;
  });

  // substitute for cubes larger than the set: radius 2 diam at point 0
  auto p0 = X.point(0);
  const Cube big{std::vector<double>(p0.begin(), p0.end()), 2.0 * X.diam(), 0};
  const Projection big_proj = project(values, big, k, X);

  const int n = X.ambient_dim();
  chain.entries.assign(family.size(), Polynomial(n, 0));
  std::vector<char> deficient(family.size(), 0), is_big(family.size(), 0);
  parallel_for(family.size(), [&](std::size_t i) {
    const Cube& Q = family[i];
    Projection pr;
    if (Q.radius > X.diam()) {
      pr = big_proj;
      is_big[i] = 1;
    } else {
      pr = project(values, Q, k, X);
    }
    deficient[i] = pr.rank_deficient;
    const double shift = trace[Q.center_index] - pr.poly.eval(Q.center);
    chain.entries[i] = pr.poly + Polynomial::constant(n, shift);
  });
  for (std::size_t i = 0; i < family.size(); ++i) {
    chain.rank_deficient += deficient[i] ? 1 : 0;
    chain.big_cubes += is_big[i] ? 1 : 0;
  }
  if (compute_seminorm) {
    const auto cs = chain_seminorm(chain, family, X);
    chain.seminorm_estimate = cs.value;
    chain.witness_small = cs.small;
    chain.witness_large = cs.large;
    chain.pairs_admissible = cs.admissible;
    chain.pairs_checked = cs.checked;
  }
  return chain;
}

// ---------------------------------------------------------------------------

std::size_t GridSpec::size() const {
  std::size_t total = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) total *= nodes;
  return total;
}

double GridSpec::spacing(std::size_t axis) const {
  return nodes > 1 ? (hi[axis] - lo[axis]) / static_cast<double>(nodes - 1) : 0.0;
}

std::vector<double> GridSpec::node(std::size_t flat) const {
  std::vector<double> x(lo.size());
  for (std::size_t a = 0; a < lo.size(); ++a) {
    const std::size_t i = flat % nodes;
    flat /= nodes;
    x[a] = nodes > 1 ? lo[a] + spacing(a) * static_cast<double>(i) : lo[a];
  }
  return x;
}

GridSpec GridSpec::around(const FractalSet& X, std::size_t nodes, double margin) {
  GridSpec g;
  g.nodes = nodes;
  for (std::size_t a = 0; a < X.box_lo().size(); ++a) {
    g.lo.push_back(X.box_lo()[a] - margin * X.diam());
    g.hi.push_back(X.box_hi()[a] + margin * X.diam());
  }
  return g;
}

ExtensionField::ExtensionField(GridSpec grid, std::vector<double> values,
                               std::vector<std::vector<NodeWeight>> provenance, std::vector<std::size_t> holes)
    : grid_(std::move(grid)), values_(std::move(values)), provenance_(std::move(provenance)),
      holes_(std::move(holes)) {
  if (values_.size() != grid_.size() || provenance_.size() != grid_.size())
    fail(ErrorCode::DimensionMismatch, "ExtensionField: value count differs from the grid size");
}

double ExtensionField::interpolate(std::span<const double> x) const {
  const std::size_t n = grid_.lo.size();
  if (x.size() != n) fail(ErrorCode::DimensionMismatch, "ExtensionField::interpolate: wrong point dimension");
  const std::size_t m = grid_.nodes;
  std::vector<std::size_t> base(n);
  std::vector<double> frac(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double h = grid_.spacing(a);
    double u = h > 0.0 ? (x[a] - grid_.lo[a]) / h : 0.0;
    u = std::clamp(u, 0.0, static_cast<double>(m - 1));
    std::size_t i = static_cast<std::size_t>(std::floor(u));
    if (i >= m - 1) i = m > 1 ? m - 2 : 0;
    base[a] = i;
    frac[a] = m > 1 ? u - static_cast<double>(i) : 0.0;
  }
  double sum = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double w = 1.0;
    std::size_t flat = 0, stride = 1;
    for (std::size_t a = 0; a < n; ++a) {
      const bool up = (mask >> a) & 1;
      w *= up ? frac[a] : 1.0 - frac[a];
      flat += (base[a] + (up && m > 1 ? 1 : 0)) * stride;
      stride *= m;
    }
    if (w != 0.0) sum += w * values_[flat];
  }
  return sum;
}

void ExtensionField::write_csv(std::ostream& out) const {
  const std::size_t n = grid_.lo.size();
  for (std::size_t a = 0; a < n; ++a) out << "x" << (a + 1) << ",";
  out << "value\n";
  char buf[64];
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const auto x = grid_.node(i);
    for (double v : x) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", values_[i]);
    out << buf;
  }
}

ExtensionField whitney_extend(const Chain& chain, const CubeFamily& family, const FractalSet& X,
                              const GridSpec& grid) {
  if (!family.laddered()) fail(ErrorCode::InvalidArgument, "whitney_extend: family must carry a dyadic ladder");
  if (chain.entries.size() != family.size())
    fail(ErrorCode::DimensionMismatch, "whitney_extend: chain and family sizes differ");
  if (grid.lo.size() != static_cast<std::size_t>(X.ambient_dim()) || grid.hi.size() != grid.lo.size() ||
      grid.nodes < 2)
    fail(ErrorCode::InvalidArgument, "whitney_extend: malformed grid");
  const auto& ladder = family.ladder();
  const std::size_t total = grid.size();
  std::vector<double> values(total, 0.0);
  std::vector<std::vector<NodeWeight>> prov(total);
  std::vector<char> hole(total, 0);

  parallel_for(total, [&](std::size_t node) {
    const auto y = grid.node(node);
    double d = kInf;
    for (std::size_t i = 0; i < X.size(); ++i) d = std::min(d, sup_distance(y, X.point(i)));
    // scale weight: smooth in log2(r / d) on (0, 2), so r ranges over (d, 4d);
    // below half the finest rung only the finest rung carries weight
    const double d_eff = std::max(d, 0.5 * ladder.front());
    std::vector<std::pair<std::size_t, double>> rungs;
    for (std::size_t j = 0; j < ladder.size(); ++j) {
      const double w = bump(std::abs(std::log2(ladder[j] / d_eff) - 1.0));
      if (w > 0.0) rungs.emplace_back(j, w);
    }
    double wsum = 0.0, acc = 0.0;
    auto& pv = prov[node];
    for (const auto& [j, scale_w] : rungs) {
      const double r = ladder[j];
      for (std::size_t c : X.cube_indices(y, 2.0 * r)) {
        const std::size_t cube = family.find(c, j);
        if (cube == kNpos) continue;
        const double w = scale_w * bump(sup_distance(y, family[cube].center) / (2.0 * r));
        if (!(w > 0.0)) continue;
        wsum += w;
        acc += w * chain.entries[cube].eval(y);
        pv.push_back({cube, w});
      }
    }
    if (wsum > 0.0) {
      values[node] = acc / wsum;
      for (auto& e : pv) e.weight /= wsum;
    } else {
      hole[node] = 1;
      pv.clear();
    }
  });
  std::vector<std::size_t> holes;
  for (std::size_t i = 0; i < total; ++i)
    if (hole[i]) holes.push_back(i);
  return ExtensionField(grid, std::move(values), std::move(prov), std::move(holes));
}

ExtensionReport verify_extension(std::span<const double> values, const ExtensionField& field,
                                 const FractalSet& X, const CubeFamily& family, int k, const Majorant& omega,
                                 double q, std::size_t budget) {
  if (values.size() != X.size())
    fail(ErrorCode::DimensionMismatch, "verify_extension: one value per cloud point required");
  ExtensionReport rep;
  rep.holes = field.holes().size();
  double wsum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double e = std::abs(field.interpolate(X.point(i)) - values[i]);
    rep.trace_error = std::max(rep.trace_error, e);
    rep.trace_mean_error += X.mass(i) * e;
    wsum += X.mass(i);
  }
  if (wsum > 0.0) rep.trace_mean_error /= wsum;

  const auto& g = field.grid();
  LipschitzOptions opt;
  opt.lo = g.lo;
  opt.hi = g.hi;
  opt.budget = budget;
  double diag = 0.0, h_min = kInf;
  for (std::size_t a = 0; a < g.lo.size(); ++a) {
    diag += (g.hi[a] - g.lo[a]) * (g.hi[a] - g.lo[a]);
    h_min = std::min(h_min, g.spacing(a));
  }
  opt.h_max = std::sqrt(diag) / k;
  opt.decades = std::max(0.0, std::log10(opt.h_max / h_min));
  rep.lipschitz = lipschitz_seminorm([&](std::span<const double> x) { return field.interpolate(x); }, k, omega,
                                     opt)
                      .value;
  rep.campanato = campanato_seminorm(values, X, family, k, q, omega).value;
  // roundoff-level seminorms (f in P_{k-1}) count as zero
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (rep.campanato > 1e-10 * scale) {
    rep.ratio = rep.lipschitz / rep.campanato;
    rep.ratio_applicable = true;
  }
  return rep;
}

}  // namespace fr
