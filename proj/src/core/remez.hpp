#ifndef FR_CORE_REMEZ_HPP
#define FR_CORE_REMEZ_HPP

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "core/fractal.hpp"
#include "core/polynomial.hpp"

namespace fr {

/// Closed Euclidean ball.
struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

/// Closed axis-aligned box; a cube Q_r(c) is the box [c - r, c + r].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(std::span<const double> center, double radius);
};

using Region = std::variant<Ball, Box>;

int region_dim(const Region& region);
/// Lebesgue measure of the region.
double region_volume(const Region& region);
bool region_contains(const Region& region, std::span<const double> x, double tol = 0.0);

inline constexpr std::size_t kDefaultSupBudget = std::size_t{1} << 14;

/// beta_n(lambda) = (1 - lambda)^(1/n); returns T_k((1+beta)/(1-beta)).
double bg_bound(int n, int k, double lambda);
/// (4n / lambda)^k.
double simple_bound(int n, int k, double lambda);

/// max |p| over the cloud points (exact).
double sup_norm(const Polynomial& p, const FractalSet& cloud);
/// max |p| over a continuous region: Halton sampling of `budget` points, then
/// per-coordinate golden-section ascent from the best 8 samples of each
/// power-of-two prefix. Nondecreasing in budget.
double sup_norm(const Polynomial& p, const Region& region, std::size_t budget = kDefaultSupBudget);

/// Mean of |p|^r over the region by quasi-Monte Carlo, raised to 1/r.
double region_mean_norm(const Polynomial& p, const Region& region, double r, std::size_t budget);
/// (1/mu(X) sum m_i |p(x_i)|^q)^(1/q); q = inf gives the max over the cloud.
double cloud_mean_norm(const Polynomial& p, const FractalSet& cloud, double q);

struct RemezReport {
  int n = 0;
  int k = 0;
  double s = 0.0;
  double q = kInf;
  double r = kInf;
  /// mu(omega)^(n/s) / vol(V); the cloud's total mass stands in for H_s(omega).
  double lambda = 0.0;
  double bound_bg = kNaN;
  double bound_simple = kNaN;
  double lhs = 0.0;
  double rhs = 0.0;
  double empirical_ratio = 0.0;
  /// p vanishes on omega while not on V.
  bool hypothesis_violated = false;
};

/// Both sides of the normalized-L_r(V) vs normalized-L_q(omega) inequality
/// and their ratio. q and r must be 1, 2 or inf.
RemezReport empirical_remez(const Polynomial& p, const Region& V, const FractalSet& omega,
                            double q, double r, std::size_t budget = kDefaultSupBudget);

struct MarkovResult {
  double constant = 0.0;  ///< r * max|grad p| / max|p|
  double max_gradient = 0.0;
  double max_value = 0.0;
  std::size_t points = 0;
  bool vanishes = false;  ///< p == 0 on F cap B; constant is then +inf (or 0 if grad == 0)
};

/// Markov constant of p on F intersected with the closed ball B_r(x).
MarkovResult markov_check(const Polynomial& p, const FractalSet& F, std::span<const double> x,
                          double r);

/// |p| at a cloud point; complex univariate polynomials read 1-d points as
/// real z and 2-d points as x + iy.
double abs_at(const Polynomial& p, std::span<const double> point);

inline constexpr double kLogClamp = 1e-300;

struct BmoResult {
  double max_oscillation = 0.0;
  std::vector<double> witness_center;
  double witness_radius = 0.0;
  double excluded_mass = 0.0;  ///< mass of points with |p| < 1e-300
  std::size_t balls = 0;
};

/// Largest mean oscillation of ln|p| over balls B_r(x), x a cloud point and
/// r in `scales`. At most `max_centers` centers are used (evenly strided).
BmoResult bmo_oscillation(const Polynomial& p, const FractalSet& X, std::span<const double> scales,
                          std::size_t max_centers = 4096);

/// (mean_B |p|^l)^(1/l) / mean_B |p| over the open ball B_r(x); l = inf
/// uses the max.
double reverse_holder(const Polynomial& p, const FractalSet& X, std::span<const double> x,
                      double r, double l);

}  // namespace fr

#endif
