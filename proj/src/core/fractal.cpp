#include "core/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

namespace fr {

void Similarity::apply(std::span<const double> x, std::span<double> out) const {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    if (orthogonal.empty()) {
      v = x[i];
    } else {
      for (std::size_t j = 0; j < n; ++j) v += orthogonal[i * n + j] * x[j];
    }
    out[i] = ratio * v + translation[i];
  }
}

namespace {

double solve_similarity_dim(const std::vector<Similarity>& maps) {
  auto g = [&](double s) {
    double sum = 0.0;
    for (const auto& m : maps) sum += std::pow(m.ratio, s);
    return sum - 1.0;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

IFS::IFS(int ambient_dim, std::vector<Similarity> maps, bool open_set_condition,
         std::string name)
    : ambient_dim_(ambient_dim), maps_(std::move(maps)), osc_(open_set_condition),
      name_(std::move(name)) {
  if (ambient_dim_ < 1) fail(ErrorCode::InvalidArgument, "IFS: ambient dimension must be positive");
  if (maps_.size() < 2) fail(ErrorCode::InvalidArgument, "IFS: need at least two maps");
  const auto n = static_cast<std::size_t>(ambient_dim_);
  for (auto& m : maps_) {
    if (!(m.ratio > 0.0 && m.ratio < 1.0))
      fail(ErrorCode::InvalidArgument, "IFS: similarity ratios must lie in (0,1)");
    if (m.translation.size() != n)
      fail(ErrorCode::DimensionMismatch, "IFS: translation dimension mismatch");
    if (!m.orthogonal.empty() && m.orthogonal.size() != n * n)
      fail(ErrorCode::DimensionMismatch, "IFS: orthogonal part must be n x n");
  }
  similarity_dim_ = solve_similarity_dim(maps_);

  // anchor: (I - r O) x = t for the first map
  const auto& f0 = maps_.front();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(ambient_dim_, ambient_dim_);
  Eigen::VectorXd t(ambient_dim_);
  for (std::size_t i = 0; i < n; ++i) {
    t(static_cast<Eigen::Index>(i)) = f0.translation[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double o = f0.orthogonal.empty() ? (i == j ? 1.0 : 0.0) : f0.orthogonal[i * n + j];
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -= f0.ratio * o;
    }
  }
  Eigen::VectorXd p = a.partialPivLu().solve(t);
  anchor_.assign(p.data(), p.data() + ambient_dim_);

  // attractor lies in the ball of radius max|f_i(p) - p| / (1 - r_max) around p
  double reach = 0.0;
  std::vector<double> y(n);
  for (const auto& m : maps_) {
    m.apply(anchor_, y);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (y[i] - anchor_[i]) * (y[i] - anchor_[i]);
    reach = std::max(reach, std::sqrt(d2));
  }
  reach /= (1.0 - max_ratio());
  box_lo_.resize(n);
  box_hi_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    box_lo_[i] = anchor_[i] - reach;
    box_hi_[i] = anchor_[i] + reach;
  }
  const std::size_t corners = std::size_t{1} << n;
  std::vector<double> corner(n), img(n);
  for (int it = 0; it < 400; ++it) {
    std::vector<double> lo(n, kInf), hi(n, -kInf);
    for (const auto& m : maps_) {
      for (std::size_t c = 0; c < corners; ++c) {
        for (std::size_t i = 0; i < n; ++i) corner[i] = (c >> i) & 1 ? box_hi_[i] : box_lo_[i];
        m.apply(corner, img);
        for (std::size_t i = 0; i < n; ++i) {
          lo[i] = std::min(lo[i], img[i]);
          hi[i] = std::max(hi[i], img[i]);
        }
      }
    }
    const bool same = lo == box_lo_ && hi == box_hi_;
    box_lo_ = lo;
    box_hi_ = hi;
    if (same) break;
  }
}

double IFS::max_ratio() const {
  double r = 0.0;
  for (const auto& m : maps_) r = std::max(r, m.ratio);
  return r;
}

IFS IFS::cantor(double rho) {
  if (!(rho > 0.0 && rho < 0.5)) fail(ErrorCode::InvalidArgument, "cantor: ratio must lie in (0, 1/2)");
  std::vector<Similarity> maps{{rho, {0.0}, {}}, {rho, {1.0 - rho}, {}}};
  return IFS(1, std::move(maps), true, "cantor");
}

IFS IFS::dust2d(double rho) {
  if (!(rho > 0.0 && rho <= 0.5)) fail(ErrorCode::InvalidArgument, "dust2d: ratio must lie in (0, 1/2]");
  const double t = 1.0 - rho;
  std::vector<Similarity> maps{
      {rho, {0.0, 0.0}, {}}, {rho, {t, 0.0}, {}}, {rho, {0.0, t}, {}}, {rho, {t, t}, {}}};
  return IFS(2, std::move(maps), true, "dust2d");
}

IFS IFS::unit_cube(int n) {
  if (n < 1 || n > 4) fail(ErrorCode::InvalidArgument, "unit_cube: dimension must be in [1,4]");
  std::vector<Similarity> maps;
  for (int c = 0; c < (1 << n); ++c) {
    Similarity m{0.5, std::vector<double>(static_cast<std::size_t>(n)), {}};
    for (int i = 0; i < n; ++i) m.translation[static_cast<std::size_t>(i)] = (c >> i) & 1 ? 0.5 : 0.0;
    maps.push_back(std::move(m));
  }
  return IFS(n, std::move(maps), true, "cube");
}

// ---------------------------------------------------------------------------

struct FractalSet::GridIndex {
  std::vector<double> lo;
  std::vector<double> width;  // cell width per dimension
  std::vector<std::size_t> cells;  // cells per dimension
  std::vector<std::size_t> start;  // CSR offsets, size total+1
  std::vector<std::size_t> order;  // point indices grouped by cell, ascending within a cell

  std::size_t coord(std::size_t dim, double v) const {
    const double c = std::floor((v - lo[dim]) / width[dim]);
    if (c < 0.0) return 0;
    const auto ci = static_cast<std::size_t>(c);
    return std::min(ci, cells[dim] - 1);
  }
};

FractalSet FractalSet::build(const IFS& ifs, int depth, double total_mass) {
  if (depth < 1) fail(ErrorCode::InvalidArgument, "build_set: depth must be >= 1");
  if (!(total_mass > 0.0)) fail(ErrorCode::InvalidArgument, "build_set: total mass must be positive");
  const std::size_t m = ifs.maps().size();
  double count = std::pow(static_cast<double>(m), depth);
  if (count > static_cast<double>(kMaxCells)) {
    std::ostringstream msg;
    msg << "build_set: " << m << "^" << depth << " cells exceeds the limit of " << kMaxCells;
    fail(ErrorCode::Overflow, msg.str());
  }
  const std::size_t cells = static_cast<std::size_t>(std::llround(count));
  const int n = ifs.ambient_dim();
  const auto un = static_cast<std::size_t>(n);
  const double s = ifs.similarity_dim();

  FractalSet set;
  set.dim_ = n;
  set.s_ = s;
  set.depth_ = depth;
  set.name_ = ifs.name();
  set.points_.resize(cells * un);
  set.masses_.resize(cells);

  // Composed map F(x) = ratio * O x + t along the current word.
  struct Frame {
    double ratio;
    double mass;
    std::vector<double> o;  // row-major n x n
    std::vector<double> t;
  };
  std::vector<double> mass_factor(m);
  for (std::size_t i = 0; i < m; ++i) mass_factor[i] = std::pow(ifs.maps()[i].ratio, s);

  std::vector<Frame> stack(static_cast<std::size_t>(depth) + 1);
  stack[0].ratio = 1.0;
  stack[0].mass = total_mass;
  stack[0].o.assign(un * un, 0.0);
  for (std::size_t i = 0; i < un; ++i) stack[0].o[i * un + i] = 1.0;
  stack[0].t.assign(un, 0.0);
  std::vector<std::size_t> letter(static_cast<std::size_t>(depth), 0);

  auto push = [&](std::size_t level, std::size_t i) {
    const Frame& f = stack[level];
    Frame& g = stack[level + 1];
    const Similarity& map = ifs.maps()[i];
    g.ratio = f.ratio * map.ratio;
    g.mass = f.mass * mass_factor[i];
    g.o.assign(un * un, 0.0);
    g.t = f.t;
    for (std::size_t r = 0; r < un; ++r) {
      for (std::size_t c = 0; c < un; ++c) {
        double v = 0.0;
        for (std::size_t k = 0; k < un; ++k) {
          const double mo = map.orthogonal.empty() ? (k == c ? 1.0 : 0.0) : map.orthogonal[k * un + c];
          v += f.o[r * un + k] * mo;
        }
        g.o[r * un + c] = v;
      }
      double v = 0.0;
      for (std::size_t k = 0; k < un; ++k) v += f.o[r * un + k] * map.translation[k];
      g.t[r] += f.ratio * v;
    }
  };

  const auto& anchor = ifs.anchor();
  const auto d = static_cast<std::size_t>(depth);
  for (std::size_t level = 0; level < d; ++level) push(level, 0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const Frame& leaf = stack[d];
    for (std::size_t r = 0; r < un; ++r) {
      double v = 0.0;
      for (std::size_t k = 0; k < un; ++k) v += leaf.o[r * un + k] * anchor[k];
      set.points_[cell * un + r] = leaf.ratio * v + leaf.t[r];
    }
    set.masses_[cell] = leaf.mass;
    // advance the word like an odometer
    std::size_t level = d;
    while (level > 0 && letter[level - 1] + 1 == m) {
      letter[level - 1] = 0;
      --level;
    }
    if (level == 0) break;
    ++letter[level - 1];
    push(level - 1, letter[level - 1]);
    for (std::size_t l = level; l < d; ++l) push(l, 0);
  }

  set.box_lo_ = ifs.box_lo();
  set.box_hi_ = ifs.box_hi();
  double diag = 0.0;
  for (std::size_t i = 0; i < un; ++i) diag += std::pow(set.box_hi_[i] - set.box_lo_[i], 2);
  set.cell_size_ = std::sqrt(diag) * std::pow(ifs.max_ratio(), depth);
  set.finalize(false);
  return set;
}

FractalSet::FractalSet(int ambient_dim, std::vector<double> points, std::vector<double> masses,
                       double s, double cell_size, std::string name)
    : dim_(ambient_dim), points_(std::move(points)), masses_(std::move(masses)), s_(s),
      cell_size_(cell_size), name_(std::move(name)) {
  if (dim_ < 1) fail(ErrorCode::InvalidArgument, "FractalSet: ambient dimension must be positive");
  if (points_.size() != masses_.size() * static_cast<std::size_t>(dim_))
    fail(ErrorCode::DimensionMismatch, "FractalSet: point and mass counts disagree");
  for (double m : masses_)
    if (!(m > 0.0)) fail(ErrorCode::InvalidArgument, "FractalSet: masses must be positive");
  if (!(s_ > 0.0)) fail(ErrorCode::InvalidArgument, "FractalSet: dimension s must be positive");
  finalize(true);
}

void FractalSet::finalize(bool compute_box) {
  const auto un = static_cast<std::size_t>(dim_);
  total_mass_ = 0.0;
  for (double m : masses_) total_mass_ += m;
  if (compute_box) {
    box_lo_.assign(un, kInf);
    box_hi_.assign(un, -kInf);
    for (std::size_t p = 0; p < size(); ++p) {
      for (std::size_t i = 0; i < un; ++i) {
        box_lo_[i] = std::min(box_lo_[i], points_[p * un + i]);
        box_hi_[i] = std::max(box_hi_[i], points_[p * un + i]);
      }
    }
    if (size() == 0) {
      box_lo_.assign(un, 0.0);
      box_hi_.assign(un, 0.0);
    }
  }
  double diag = 0.0;
  for (std::size_t i = 0; i < un; ++i) diag += std::pow(box_hi_[i] - box_lo_[i], 2);
  diam_ = std::sqrt(diag);

  index_.reset();
  if (size() >= kIndexThreshold) {
    auto idx = std::make_shared<GridIndex>();
    const double per_dim = std::pow(static_cast<double>(size()), 1.0 / dim_);
    idx->lo = box_lo_;
    idx->width.resize(un);
    idx->cells.resize(un);
    std::size_t total = 1;
    for (std::size_t i = 0; i < un; ++i) {
      const double extent = box_hi_[i] - box_lo_[i];
      idx->cells[i] = extent > 0.0 ? std::max<std::size_t>(1, static_cast<std::size_t>(per_dim)) : 1;
      idx->width[i] = extent > 0.0 ? extent / static_cast<double>(idx->cells[i]) : 1.0;
      total *= idx->cells[i];
    }
    std::vector<std::size_t> cell_of(size());
    std::vector<std::size_t> counts(total + 1, 0);
    for (std::size_t p = 0; p < size(); ++p) {
      std::size_t c = 0;
      for (std::size_t i = un; i-- > 0;) c = c * idx->cells[i] + idx->coord(i, points_[p * un + i]);
      cell_of[p] = c;
      ++counts[c + 1];
    }
    for (std::size_t c = 0; c < total; ++c) counts[c + 1] += counts[c];
    idx->start = counts;
    idx->order.resize(size());
    std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
    for (std::size_t p = 0; p < size(); ++p) idx->order[fill[cell_of[p]]++] = p;
    index_ = std::move(idx);
  }
}

template <class Accept>
std::vector<std::size_t> FractalSet::query(std::span<const double> lo, std::span<const double> hi,
                                           Accept&& accept) const {
  std::vector<std::size_t> out;
  const auto un = static_cast<std::size_t>(dim_);
  if (index_) {
    std::vector<std::size_t> c0(un), c1(un);
    std::size_t visit = 1;
    for (std::size_t i = 0; i < un; ++i) {
      c0[i] = index_->coord(i, lo[i]);
      c1[i] = index_->coord(i, hi[i]);
      visit *= c1[i] - c0[i] + 1;
    }
    if (visit * 4 < index_->start.size()) {
      std::vector<std::size_t> c = c0;
      for (;;) {
        std::size_t flat = 0;
        for (std::size_t i = un; i-- > 0;) flat = flat * index_->cells[i] + c[i];
        for (std::size_t k = index_->start[flat]; k < index_->start[flat + 1]; ++k) {
          const std::size_t p = index_->order[k];
          if (accept(p)) out.push_back(p);
        }
        std::size_t i = 0;
        while (i < un && c[i] == c1[i]) {
          c[i] = c0[i];
          ++i;
        }
        if (i == un) break;
        ++c[i];
      }
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  for (std::size_t p = 0; p < size(); ++p)
    if (accept(p)) out.push_back(p);
  return out;
}

namespace {

double dist2(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

void check_point(std::span<const double> x, int dim) {
  if (x.size() != static_cast<std::size_t>(dim))
    fail(ErrorCode::DimensionMismatch, "point dimension does not match the set");
}

}  // namespace

std::vector<std::size_t> FractalSet::ball_indices(std::span<const double> x, double r,
                                                  bool closed) const {
  check_point(x, dim_);
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "ball query: radius must be positive");
  const auto un = static_cast<std::size_t>(dim_);
  std::vector<double> lo(un), hi(un);
  for (std::size_t i = 0; i < un; ++i) {
    lo[i] = x[i] - r;
    hi[i] = x[i] + r;
  }
  const double r2 = r * r;
  if (closed) return query(lo, hi, [&](std::size_t p) { return dist2(point(p), x) <= r2; });
  return query(lo, hi, [&](std::size_t p) { return dist2(point(p), x) < r2; });
}

std::vector<std::size_t> FractalSet::cube_indices(std::span<const double> center,
                                                  double radius) const {
  check_point(center, dim_);
  const auto un = static_cast<std::size_t>(dim_);
  std::vector<double> lo(un), hi(un);
  for (std::size_t i = 0; i < un; ++i) {
    lo[i] = center[i] - radius;
    hi[i] = center[i] + radius;
  }
  return query(lo, hi, [&](std::size_t p) {
    auto y = point(p);
    for (std::size_t i = 0; i < un; ++i)
      if (std::abs(y[i] - center[i]) > radius) return false;
    return true;
  });
}

double FractalSet::ball_measure(std::span<const double> x, double r) const {
  double sum = 0.0;
  for (std::size_t p : ball_indices(x, r)) sum += masses_[p];
  return sum;
}

double FractalSet::ball_measure_scan(std::span<const double> x, double r) const {
  check_point(x, dim_);
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "ball query: radius must be positive");
  const double r2 = r * r;
  double sum = 0.0;
  for (std::size_t p = 0; p < size(); ++p)
    if (dist2(point(p), x) < r2) sum += masses_[p];
  return sum;
}

FractalSet FractalSet::transformed(double scale, std::span<const double> shift) const {
  check_point(shift, dim_);
  if (!(scale > 0.0)) fail(ErrorCode::InvalidArgument, "transformed: scale must be positive");
  const auto un = static_cast<std::size_t>(dim_);
  FractalSet out = *this;
  for (std::size_t p = 0; p < size(); ++p)
    for (std::size_t i = 0; i < un; ++i) out.points_[p * un + i] = scale * points_[p * un + i] + shift[i];
  const double mass_scale = std::pow(scale, s_);
  for (double& m : out.masses_) m *= mass_scale;
  for (std::size_t i = 0; i < un; ++i) {
    out.box_lo_[i] = scale * box_lo_[i] + shift[i];
    out.box_hi_[i] = scale * box_hi_[i] + shift[i];
  }
  out.cell_size_ = cell_size_ * scale;
  out.finalize(false);
  return out;
}

FractalSet FractalSet::restricted(std::span<const double> lo, std::span<const double> hi) const {
  check_point(lo, dim_);
  check_point(hi, dim_);
  const auto un = static_cast<std::size_t>(dim_);
  FractalSet out;
  out.dim_ = dim_;
  out.s_ = s_;
  out.cell_size_ = cell_size_;
  out.depth_ = depth_;
  out.name_ = name_ + "|box";
  for (std::size_t p = 0; p < size(); ++p) {
    auto y = point(p);
    bool inside = true;
    for (std::size_t i = 0; i < un; ++i) inside = inside && y[i] >= lo[i] && y[i] <= hi[i];
    if (!inside) continue;
    out.points_.insert(out.points_.end(), y.begin(), y.end());
    out.masses_.push_back(masses_[p]);
  }
  out.finalize(true);
  return out;
}

void FractalSet::write_csv(std::ostream& out) const {
  for (int i = 0; i < dim_; ++i) out << 'x' << (i + 1) << ',';
  out << "mass\n";
  char buf[32];
  for (std::size_t p = 0; p < size(); ++p) {
    for (double v : point(p)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", masses_[p]);
    out << buf << '\n';
  }
}

FractalSet product_set(const FractalSet& a, const FractalSet& b) {
  const double count = static_cast<double>(a.size()) * static_cast<double>(b.size());
  if (count > static_cast<double>(kMaxCells)) {
    std::ostringstream msg;
    msg << "product_set: " << a.size() << " x " << b.size() << " cells exceeds the limit of "
        << kMaxCells;
    fail(ErrorCode::Overflow, msg.str());
  }
  FractalSet out;
  out.dim_ = a.dim_ + b.dim_;
  out.s_ = a.s_ + b.s_;
  out.depth_ = std::max(a.depth_, b.depth_);
  out.name_ = a.name_ + "*" + b.name_;
  out.points_.reserve(a.size() * b.size() * static_cast<std::size_t>(out.dim_));
  out.masses_.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      auto pa = a.point(i);
      auto pb = b.point(j);
      out.points_.insert(out.points_.end(), pa.begin(), pa.end());
      out.points_.insert(out.points_.end(), pb.begin(), pb.end());
      out.masses_.push_back(a.masses_[i] * b.masses_[j]);
    }
  }
  out.box_lo_ = a.box_lo_;
  out.box_lo_.insert(out.box_lo_.end(), b.box_lo_.begin(), b.box_lo_.end());
  out.box_hi_ = a.box_hi_;
  out.box_hi_.insert(out.box_hi_.end(), b.box_hi_.begin(), b.box_hi_.end());
  out.cell_size_ = std::hypot(a.cell_size_, b.cell_size_);
  out.finalize(false);
  return out;
}

namespace {

void check_regularity_range(const FractalSet& set, double r_min, double r_max) {
  if (set.size() < 2 || !(set.diam() > 0.0))
    fail(ErrorCode::Domain, "estimate_regularity: degenerate set (fewer than two distinct points)");
  const double lower = 4.0 * set.cell_size();
  if (!(r_min < r_max) || r_min < lower * (1.0 - 1e-12) || r_max > set.diam() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "estimate_regularity: degenerate radius range [" << r_min << ", " << r_max
        << "]; need 4*cell_size = " << lower << " <= r_min < r_max <= diam = " << set.diam();
    fail(ErrorCode::Domain, msg.str());
  }
}

}  // namespace

RegularityEstimate estimate_regularity(const FractalSet& set, std::span<const std::size_t> centers,
                                       std::span<const double> radii) {
  if (centers.empty() || centers.size() != radii.size())
    fail(ErrorCode::InvalidArgument, "estimate_regularity: centers and radii must be nonempty and aligned");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  check_regularity_range(set, *lo, *hi > *lo ? *hi : *lo * (1.0 + 1e-9));
  RegularityEstimate est;
  est.s = set.s();
  est.num_samples = centers.size();
  est.r_min = *lo;
  est.r_max = *hi;
  est.a_hat = 0.0;
  est.b_hat = kInf;
  std::vector<double> ratio(centers.size());
  parallel_for(centers.size(), [&](std::size_t k) {
    if (centers[k] >= set.size()) fail(ErrorCode::InvalidArgument, "estimate_regularity: center index out of range");
    ratio[k] = set.ball_measure(set.point(centers[k]), radii[k]) / std::pow(radii[k], set.s());
  });
  for (double v : ratio) {
    est.a_hat = std::max(est.a_hat, v);
    est.b_hat = std::min(est.b_hat, v);
  }
  return est;
}

RegularityEstimate estimate_regularity(const FractalSet& set, std::size_t num_samples,
                                       double r_min, double r_max, std::uint64_t seed) {
  check_regularity_range(set, r_min, r_max);
  if (num_samples == 0) fail(ErrorCode::InvalidArgument, "estimate_regularity: no samples requested");
  Rng rng(seed);
  std::vector<std::size_t> centers(num_samples);
  std::vector<double> radii(num_samples);
  const double log_lo = std::log(r_min);
  const double log_hi = std::log(r_max);
  for (std::size_t k = 0; k < num_samples; ++k) {
    centers[k] = rng.index(set.size());
    radii[k] = std::exp(rng.uniform(log_lo, log_hi));
  }
  auto est = estimate_regularity(set, centers, radii);
  est.r_min = r_min;
  est.r_max = r_max;
  return est;
}

}  // namespace fr
