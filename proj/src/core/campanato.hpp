#ifndef FR_CORE_CAMPANATO_HPP
#define FR_CORE_CAMPANATO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/fractal.hpp"
#include "core/polynomial.hpp"

namespace fr {

/// Closed sup-metric cube [c - r, c + r]^n.
struct Cube {
  std::vector<double> center;
  double radius = 1.0;
  /// Cloud point the cube is centered at; npos for free cubes.
  std::size_t center_index = static_cast<std::size_t>(-1);
};

struct CubeFamilyOptions {
  /// Smallest radius; 0 selects 4 * cell_size.
  double r_min = 0.0;
  /// Largest radius; 0 selects the cap 4 * diam.
  double r_max = 0.0;
  /// All cloud points are centers below this count; otherwise this many are
  /// drawn without replacement.
  std::size_t max_centers = 1000;
  std::uint64_t seed = 1;
};

/// Cubes centered at cloud points with radii on the dyadic ladder 2^j.
/// Every center carries the full ladder, so cube `slot * rungs + j` has
/// center centers[slot] and radius ladder[j].
class CubeFamily {
 public:
  static CubeFamily build(const FractalSet& X, const CubeFamilyOptions& options = {});
  /// Hand-made family without a ladder.
  CubeFamily(std::vector<Cube> cubes, double radius_cap);

  const std::vector<Cube>& cubes() const noexcept { return cubes_; }
  std::size_t size() const noexcept { return cubes_.size(); }
  const Cube& operator[](std::size_t i) const { return cubes_[i]; }
  double radius_cap() const noexcept { return radius_cap_; }
  /// Dyadic radii in increasing order (empty for hand-made families).
  const std::vector<double>& ladder() const noexcept { return ladder_; }
  /// ladder[j] == 2^(first_exponent + j).
  int first_exponent() const noexcept { return first_exponent_; }
  /// Cloud indices used as centers, ascending.
  const std::vector<std::size_t>& centers() const noexcept { return centers_; }
  /// True when every cloud point is a center.
  bool exhaustive() const noexcept { return exhaustive_; }
  /// Cube index for (cloud index, rung), or npos.
  std::size_t find(std::size_t cloud_index, std::size_t rung) const;
  bool laddered() const noexcept { return !ladder_.empty(); }

 private:
  CubeFamily() = default;
  std::vector<Cube> cubes_;
  double radius_cap_ = 0.0;
  std::vector<double> ladder_;
  int first_exponent_ = 0;
  std::vector<std::size_t> centers_;
  std::vector<std::size_t> slot_of_;
  bool exhaustive_ = false;
};

/// omega(t) for the Campanato and Lipschitz seminorms.
class Majorant {
 public:
  enum class Kind { Power, Constant, Table };

  /// t^lambda, lambda > 0.
  static Majorant power(double lambda);
  static Majorant constant(double value);
  /// Piecewise linear through (0,0) and the knots, last slope extended.
  static Majorant table(std::vector<double> t, std::vector<double> values);
  /// "power:0.5", "const:1", "table:t1/v1,t2/v2,...".
  static Majorant parse(const std::string& id);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  const std::string& id() const noexcept { return id_; }
  double operator()(double t) const;
  /// int_a^b omega(u)/u du (closed form for every kind).
  double dini_integral(double a, double b) const;

 private:
  Majorant() = default;
  Kind kind_ = Kind::Power;
  double param_ = 1.0;
  std::vector<double> t_, v_;
  std::string id_;
};

struct QuasipowerResult {
  bool is_quasipower = false;
  double c_omega = kInf;
  std::string reason;
};

/// Checks omega(+0) = 0, monotonicity and omega(t)/t^k nonincreasing on a
/// log grid, and computes C_omega = sup_t (1/omega(t)) int_0^t omega(u)/u du.
QuasipowerResult quasipower_check(const Majorant& omega, int k);

struct MajorantSumResult {
  double lhs = 0.0;    ///< sum_{j=i}^{i'} omega(2^j)
  double rhs = 0.0;    ///< omega(2^{i'})
  double ratio = 0.0;
  double cap = 0.0;    ///< 2^k C_omega / ln 2
  bool within_cap = false;
};

MajorantSumResult majorant_sum_check(const Majorant& omega, int k, int i, int i_prime);

struct LocalApprox {
  double value = 0.0;         ///< E_k(f; Q)
  Polynomial poly{1, 0};      ///< minimizer in P_{k-1}, global coordinates
  std::size_t points = 0;     ///< cloud points in Q
  bool rank_deficient = false;
};

/// Degree-(k-1) basis size in n variables; 0 for k = 0.
std::size_t approx_dim(int num_vars, int k);

/// Best approximation of the sampled f (one value per cloud point) by P_{k-1}
/// in the normalized L_q(Q cap X) norm, q in {1, 2, inf}.
LocalApprox local_best_approx(std::span<const double> values, const FractalSet& X, const Cube& Q,
                              int k, double q);

/// Same, on an explicit weighted point list (used by the chain code and by
/// small oracle tests).
LocalApprox best_approx_points(int num_vars, std::span<const double> points,
                               std::span<const double> masses, std::span<const double> values,
                               std::span<const double> center, double radius, int k, double q);

struct SeminormResult {
  double value = 0.0;
  std::size_t witness = 0;  ///< cube index attaining the max
  std::size_t cubes = 0;
  std::size_t rank_deficient = 0;
  /// Sampled family, so the value is a lower bound for the true sup.
  bool lower_bound = true;
};

SeminormResult campanato_seminorm(std::span<const double> values, const FractalSet& X,
                                  const CubeFamily& family, int k, double q, const Majorant& omega);

struct LipschitzResult {
  double value = 0.0;
  std::vector<double> witness_x;
  std::vector<double> witness_h;
  std::size_t probes = 0;
};

struct LipschitzOptions {
  std::vector<double> lo, hi;  ///< every x + j h stays inside this box
  std::size_t budget = 1u << 14;
  /// |h| is log-uniform on [h_max * 10^-decades, h_max]; h_max = 0 uses the
  /// box diagonal divided by k.
  double h_max = 0.0;
  double decades = 4.0;
};

/// sup |Delta_h^k g(x)| / omega(|h|) over quasi-random (x, h).
LipschitzResult lipschitz_seminorm(const RealFunction& g, int k, const Majorant& omega,
                                   const LipschitzOptions& options);

}  // namespace fr

#endif
