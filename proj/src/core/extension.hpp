#ifndef FR_CORE_EXTENSION_HPP
#define FR_CORE_EXTENSION_HPP

#include <iosfwd>
#include <span>
#include <vector>

#include "core/campanato.hpp"

namespace fr {

struct Projection {
  Polynomial poly{1, 0};
  std::size_t points = 0;
  bool rank_deficient = false;
};

/// Weighted L2 projection of the sampled f onto P_{k-1} over Q cap X.
Projection project(std::span<const double> values, const Cube& Q, int k, const FractalSet& X);

/// Operator norm of the projection on (Q cap X, sup norm): the largest
/// mass-weighted absolute row sum of its kernel on the cloud points of Q.
double projection_norm(const Cube& Q, int k, const FractalSet& X);

struct ProjectionNormSample {
  double max = 0.0;
  double mean = 0.0;
  std::size_t cubes = 0;
  std::size_t witness = 0;  ///< family index of the max
};

/// projection_norm over an evenly strided sample of at most `samples`
/// family cubes of radius <= diam holding at most `max_points` points.
ProjectionNormSample sampled_projection_norm(const CubeFamily& family, int k, const FractalSet& X,
                                             std::size_t samples = 32, std::size_t max_points = 4096);

/// Both sides of the local oscillation estimate for Q inside K (r <= R):
///   E_1(f; Q)  vs  r * int_r^{2R} omega(t)/t^2 dt + (r/R) |||f; K~ cap X|||,
/// K~ being K with doubled radius. Recorded, never asserted.
struct OscillationSplit {
  double lhs = 0.0;
  double integral_term = 0.0;
  double norm_term = 0.0;
  double ratio = kNaN;  ///< lhs / (integral_term + norm_term)
};
OscillationSplit oscillation_split(std::span<const double> values, const FractalSet& X, const Cube& Q,
                                   const Cube& K, const Majorant& omega, double q = 2.0);

struct TraceResult {
  double value = 0.0;               ///< P_{Q_min}(x)
  std::vector<double> radii;        ///< rungs, finest first
  std::vector<double> rung_values;  ///< P_{Q_j}(x) per rung
  std::vector<double> increments;   ///< |P_{j+1}(x) - P_j(x)|
};

/// f~(x) at cloud point `index` from dyadic cubes Q_{2^j}(x), the finest
/// rung at or above `r_min` (0 selects 4 * cell_size). At least 3 rungs must
/// fit below diam.
TraceResult trace_tilde(std::span<const double> values, std::size_t index, int k, const FractalSet& X,
                        int ladder_depth = 3, double r_min = 0.0);

struct Chain {
  int k = 1;
  Majorant omega = Majorant::power(1.0);
  std::vector<Polynomial> entries;  ///< aligned with the family's cubes
  double seminorm_estimate = kNaN;
  std::size_t witness_small = 0, witness_large = 0;
  std::size_t pairs_admissible = 0;
  std::size_t pairs_checked = 0;
  std::size_t rank_deficient = 0;
  std::size_t big_cubes = 0;  ///< cubes handled through the radius-2 diam substitute
};

struct ChainSeminorm {
  double value = 0.0;
  std::size_t small = 0, large = 0;
  std::size_t admissible = 0;
  std::size_t checked = 0;
};

/// Largest max_Q |P_Q - P_Q'| / omega(r_Q') over nested pairs Q in Q' with
/// 2^i <= r_Q < r_Q' <= 2^(i+2). At most `partners` larger cubes are checked
/// per small cube (evenly strided among the admissible ones).
ChainSeminorm chain_seminorm(const Chain& chain, const CubeFamily& family, const FractalSet& X,
                             std::size_t partners = 16,
                             std::size_t budget = 256);

/// Recentered projections P_Q - P_Q(c_Q) + f~(c_Q) for every cube of a
/// laddered family.
Chain build_chain(std::span<const double> values, const FractalSet& X, const CubeFamily& family, int k,
                  const Majorant& omega, bool compute_seminorm = true);

struct GridSpec {
  std::vector<double> lo, hi;
  std::size_t nodes = 33;  ///< per axis

  std::size_t size() const;
  double spacing(std::size_t axis) const;
  std::vector<double> node(std::size_t flat) const;
  /// Box around X padded by `margin` times its diameter.
  static GridSpec around(const FractalSet& X, std::size_t nodes, double margin = 0.25);
};

struct NodeWeight {
  std::size_t cube = 0;
  double weight = 0.0;
};

class ExtensionField {
 public:
  ExtensionField(GridSpec grid, std::vector<double> values, std::vector<std::vector<NodeWeight>> provenance,
                 std::vector<std::size_t> holes);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<NodeWeight>& provenance(std::size_t node) const { return provenance_[node]; }
  const std::vector<std::size_t>& holes() const noexcept { return holes_; }
  /// Multilinear interpolation of the node values; points are clamped to
  /// the grid box.
  double interpolate(std::span<const double> x) const;
  /// Columns x1..xn,value.
  void write_csv(std::ostream& out) const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
  std::vector<std::vector<NodeWeight>> provenance_;
  std::vector<std::size_t> holes_;
};

/// Blends chain polynomials at grid nodes with bump weights over cubes of
/// Whitney scale: for a node at sup-distance d from X, cubes with radius in
/// (d, 4d) whose doubles contain the node, weighted by a bump in the cube
/// distance times a bump in log2(r/d). Nodes closer than half the finest
/// radius use the finest rung only.
ExtensionField whitney_extend(const Chain& chain, const CubeFamily& family, const FractalSet& X,
                              const GridSpec& grid);

struct ExtensionReport {
  double trace_error = 0.0;       ///< max over the cloud |field - f|
  double trace_mean_error = 0.0;  ///< mass-weighted mean
  double lipschitz = 0.0;         ///< Lambda seminorm of the interpolated field
  double campanato = 0.0;         ///< C seminorm of f over the family
  double ratio = kNaN;            ///< lipschitz / campanato
  bool ratio_applicable = false;  ///< false when campanato is roundoff-level
  std::size_t holes = 0;
};

ExtensionReport verify_extension(std::span<const double> values, const ExtensionField& field,
                                 const FractalSet& X, const CubeFamily& family, int k, const Majorant& omega,
                                 double q = 2.0, std::size_t budget = 1u << 14);

}  // namespace fr

#endif
