#ifndef FR_CORE_COVERING_HPP
#define FR_CORE_COVERING_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "core/polynomial.hpp"

namespace fr {

using DistanceFn = std::function<double(std::span<const double>, std::span<const double>)>;

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Finite weighted point set with a (pseudo)metric. Zero distance between
/// distinct points is allowed.
class DiscreteMeasureSpace {
 public:
  DiscreteMeasureSpace(int dim, std::vector<double> points, std::vector<double> masses,
                       DistanceFn distance = euclidean_distance);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  double mass(std::size_t i) const { return masses_[i]; }
  /// A: the total mass.
  double total_mass() const noexcept { return total_mass_; }
  double distance(std::span<const double> a, std::span<const double> b) const { return distance_(a, b); }
  /// mu of the closed ball of radius t around x.
  double closed_ball_mass(std::span<const double> x, double t) const;
  /// Number of violated symmetry / triangle-inequality checks over random
  /// triples of points.
  std::size_t verify_pseudometric(std::size_t triples, std::uint64_t seed) const;

 private:
  int dim_;
  std::vector<double> points_;
  std::vector<double> masses_;
  DistanceFn distance_;
  double total_mass_ = 0.0;
};

/// Continuous strictly increasing phi with phi(0) = 0.
class MajorantFn {
 public:
  enum class Kind { Power, PowerOverH, Table };

  /// phi(t) = (p t)^s
  static MajorantFn power(double p, double s);
  /// phi(t) = t^s / H
  static MajorantFn power_over(double H, double s);
  /// Piecewise linear through (0,0) and the given knots, extended with the
  /// last slope.
  static MajorantFn table(std::vector<double> t, std::vector<double> values);

  Kind kind() const noexcept { return kind_; }
  double operator()(double t) const;
  double inverse(double level) const;
  /// lim phi > A, checked at t = 10 * diam.
  bool exceeds(double A, double diam) const { return (*this)(10.0 * diam) > A; }

 private:
  MajorantFn() = default;
  Kind kind_ = Kind::Power;
  double scale_ = 1.0;  // p for Power, H for PowerOverH
  double s_ = 1.0;
  std::vector<double> t_, v_;
};

struct GorinParams {
  double gamma = 1.0 / 3.0;
  double alpha = 0.9;
  double beta = 2.5;
};

struct CoverBall {
  std::vector<double> center;
  double radius = 0.0;
  std::size_t candidate = 0;  ///< index into atoms-then-probes
};

struct CoverOutput {
  std::vector<CoverBall> balls;
  std::vector<double> taus;  ///< tau_k per ball
  GorinParams params;
  double budget_used = 0.0;  ///< sum phi(gamma t_k)
  std::size_t candidates = 0;
  std::size_t uncovered_irregular = 0;  ///< always 0 on return; kept for reports
};

/// tau(x) = sup{t : mu(closed B_t(x)) >= phi(t)}, exact for atomic measures.
double tau(const DiscreteMeasureSpace& space, const MajorantFn& phi, std::span<const double> x);

/// Greedy covering of the irregular points among atoms and probe points
/// (probes are flat, space.dim() coordinates each). Terminates when every
/// uncovered candidate has tau = 0.
CoverOutput gorin_cover(const DiscreteMeasureSpace& space, const MajorantFn& phi,
                        const GorinParams& params, std::span<const double> probes = {});

void validate_gorin_params(const GorinParams& params);

/// u(x) = sum m_i ln d(x, x_i); -inf when x carries positive mass.
double potential(const DiscreteMeasureSpace& space, std::span<const double> x);

struct Cor1Report {
  bool passed = true;
  double total_mass = 0.0;
  double radius_power_sum = 0.0;  ///< sum r_j^s
  double radius_bound = 0.0;      ///< (H/gamma)^s / s
  double potential_bound = 0.0;   ///< k ln(H/e)
  std::size_t points_checked = 0;
  std::size_t violations = 0;
  std::vector<double> witness;
  double witness_value = 0.0;
  CoverOutput cover;
};

/// Runs the covering with phi(t) = (pt)^s, p = (ks)^(1/s)/H and checks the
/// radius budget and the potential lower bound at every probe point outside
/// the balls.
Cor1Report cor1_verify(const DiscreteMeasureSpace& space, double H, double s,
                       const GorinParams& params, std::span<const double> probes);

/// m x m grid over [c - h, c + h]^2, flattened.
std::vector<double> square_grid(std::span<const double> center, double half_width, std::size_t m);

/// All complex roots of a univariate polynomial (companion-matrix
/// eigenvalues followed by Newton polishing). Degree is capped at 50.
std::vector<Complex> polynomial_roots(const Polynomial& f);

struct CartanDisk {
  Complex center;
  double radius = 0.0;
};

struct CartanReport {
  std::vector<Complex> zeros;  ///< zeros in |z| <= 2R
  std::vector<CartanDisk> disks;
  double h_eta = 0.0;          ///< 2 + ln(3e / (2 eta))
  double log_max_modulus = 0.0;  ///< ln M(2eR)
  double lower_bound = 0.0;    ///< -H(eta) ln M(2eR)
  double radius_sum = 0.0;
  double radius_limit = 0.0;   ///< 4 eta R
  bool zeros_covered = true;   ///< half-radius disks cover the zeros
  std::size_t grid_checked = 0;
  std::size_t violations = 0;
  double min_margin = kInf;    ///< min over checked points of ln|f| - lower_bound
  Complex witness;
  bool passed = true;
};

double cartan_h(double eta);

/// Exclusion disks for ln|f| >= -H(eta) ln M(2eR) in |z| <= R, built from the
/// covering of the zero-counting measure, and the grid certificate of the
/// bound.
CartanReport cartan_disks(const Polynomial& f, double R, double eta, std::size_t grid = 400,
                          const GorinParams& params = {});

}  // namespace fr

#endif
