#ifndef FR_CORE_FRACTAL_HPP
#define FR_CORE_FRACTAL_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace fr {

/// x -> ratio * O x + translation, with O orthogonal (row-major; empty means
/// identity).
struct Similarity {
  double ratio = 0.5;
  std::vector<double> translation;
  std::vector<double> orthogonal;

  void apply(std::span<const double> x, std::span<double> out) const;
};

/// Iterated function system of contracting similarities.
class IFS {
 public:
  IFS(int ambient_dim, std::vector<Similarity> maps, bool open_set_condition,
      std::string name = {});

  /// Two maps of ratio rho on [0,1]; rho in (0, 1/2).
  static IFS cantor(double rho);
  /// Four maps of ratio rho on [0,1]^2 anchored at the corners; rho in (0, 1/2].
  static IFS dust2d(double rho);
  /// The unit cube [0,1]^n as 2^n maps of ratio 1/2.
  static IFS unit_cube(int n);

  int ambient_dim() const noexcept { return ambient_dim_; }
  const std::vector<Similarity>& maps() const noexcept { return maps_; }
  /// s with sum r_i^s = 1.
  double similarity_dim() const noexcept { return similarity_dim_; }
  bool open_set_condition() const noexcept { return osc_; }
  const std::string& name() const noexcept { return name_; }
  double max_ratio() const;
  /// Fixed point of the first map; lies on the attractor.
  const std::vector<double>& anchor() const noexcept { return anchor_; }
  /// Bounding box of the attractor (Hutchinson iteration on boxes).
  const std::vector<double>& box_lo() const noexcept { return box_lo_; }
  const std::vector<double>& box_hi() const noexcept { return box_hi_; }

 private:
  int ambient_dim_;
  std::vector<Similarity> maps_;
  bool osc_;
  std::string name_;
  double similarity_dim_ = 0.0;
  std::vector<double> anchor_;
  std::vector<double> box_lo_, box_hi_;
};

/// Largest number of cells a single construction may produce.
inline constexpr std::size_t kMaxCells = 10'000'000;

/// Weighted point cloud standing in for the s-dimensional Hausdorff measure
/// on a self-similar set: one representative point per cell of the
/// construction, carrying the self-similar mass of that cell.
class FractalSet {
 public:
  /// One point per depth-level cell; cell w = i_1...i_d is represented by
  /// f_{i_1} o ... o f_{i_d}(anchor) with mass total_mass * prod r_{i_j}^s.
  /// Cells are ordered lexicographically, so the children of cell c at depth
  /// d are cells c*m .. c*m+m-1 at depth d+1.
  static FractalSet build(const IFS& ifs, int depth, double total_mass = 1.0);

  /// Arbitrary weighted cloud; used for hand-made test sets.
  FractalSet(int ambient_dim, std::vector<double> points, std::vector<double> masses,
             double s, double cell_size, std::string name = "cloud");

  int ambient_dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> masses() const noexcept { return masses_; }
  double mass(std::size_t i) const { return masses_[i]; }
  double total_mass() const noexcept { return total_mass_; }
  double s() const noexcept { return s_; }
  /// Diagonal of the bounding box (equal to the attractor diameter for every
  /// shipped preset).
  double diam() const noexcept { return diam_; }
  /// Diameter bound for one construction cell.
  double cell_size() const noexcept { return cell_size_; }
  int depth() const noexcept { return depth_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& box_lo() const noexcept { return box_lo_; }
  const std::vector<double>& box_hi() const noexcept { return box_hi_; }

  /// Mass of cloud points at Euclidean distance < r from x.
  double ball_measure(std::span<const double> x, double r) const;
  /// Indices of cloud points at distance < r (open) or <= r (closed), ascending.
  std::vector<std::size_t> ball_indices(std::span<const double> x, double r,
                                        bool closed = false) const;
  /// Indices of points in the closed sup-metric cube of the given radius.
  std::vector<std::size_t> cube_indices(std::span<const double> center, double radius) const;
  /// Brute-force reference for ball_measure (no index).
  double ball_measure_scan(std::span<const double> x, double r) const;
  bool indexed() const noexcept { return static_cast<bool>(index_); }

  /// Image under x -> scale*x + shift; masses scale by scale^s.
  FractalSet transformed(double scale, std::span<const double> shift) const;
  /// Points inside the closed box [lo, hi].
  FractalSet restricted(std::span<const double> lo, std::span<const double> hi) const;

  /// CSV with columns x1..xn,mass.
  void write_csv(std::ostream& out) const;

  friend FractalSet product_set(const FractalSet& a, const FractalSet& b);

 private:
  struct GridIndex;
  FractalSet() = default;
  void finalize(bool compute_box);
  template <class Accept>
  std::vector<std::size_t> query(std::span<const double> lo, std::span<const double> hi,
                                 Accept&& accept) const;

  int dim_ = 0;
  std::vector<double> points_;
  std::vector<double> masses_;
  double total_mass_ = 0.0;
  double s_ = 0.0;
  double diam_ = 0.0;
  double cell_size_ = 0.0;
  int depth_ = 0;
  std::string name_;
  std::vector<double> box_lo_, box_hi_;
  std::shared_ptr<const GridIndex> index_;
};

/// Tensor product of two clouds: dimensions and masses multiply, s adds.
FractalSet product_set(const FractalSet& a, const FractalSet& b);

/// Clouds at or above this size get a bucketed ball-query index.
inline constexpr std::size_t kIndexThreshold = 100'000;

struct RegularityEstimate {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double s = 0.0;
  std::size_t num_samples = 0;
  double r_min = 0.0;
  double r_max = 0.0;
};

/// Samples x uniformly among cloud points and r log-uniformly in
/// [r_min, r_max]; a_hat and b_hat are the max and min of mu(B_r(x))/r^s.
RegularityEstimate estimate_regularity(const FractalSet& set, std::size_t num_samples,
                                       double r_min, double r_max, std::uint64_t seed);
/// Same estimator on explicit (cloud index, radius) samples.
RegularityEstimate estimate_regularity(const FractalSet& set, std::span<const std::size_t> centers,
                                       std::span<const double> radii);

}  // namespace fr

#endif
