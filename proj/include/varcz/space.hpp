#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "varcz/types.hpp"

namespace varcz {

enum class SpaceKind { euclidean, heisenberg };

struct BallQuery {
  int center = 0;   // point id
  double radius = 0;
};

/// Finite weighted point cloud with a quasi-metric: a discretized space of
/// homogeneous type. Each point carries the measure of the cell it
/// represents; integrals are exact weighted sums. Immutable after
/// construction.
class Space {
 public:
  static constexpr std::int64_t kDefaultPointBudget = 100000;

  /// Regular lattice in R^d (d = 1 or 2), unit quasi-triangle constant,
  /// cell weight spacing^d.
  static Space euclidean_grid(int dimension, int side_count, double spacing,
                              std::int64_t point_budget = kDefaultPointBudget);

  /// Heisenberg group lattice: (x, y, t) with x, y on a side_count grid of
  /// step `spacing` and t on a side_count^2 grid of step spacing^2, so the
  /// box is gauge-isotropic. Distance is the homogeneous gauge
  /// ((x^2+y^2)^2 + tau t^2)^{1/4} of the group difference; homogeneous
  /// dimension 4; cell weight spacing^4 (Haar measure).
  static Space heisenberg_grid(int side_count, double spacing,
                               std::int64_t point_budget = kDefaultPointBudget);

  SpaceKind kind() const { return kind_; }
  int size() const { return static_cast<int>(coords_.rows()); }
  int dimension() const { return dim_; }
  double homogeneous_dimension() const { return hdim_; }
  double spacing() const { return spacing_; }
  int side_count() const { return side_; }
  double quasi_triangle_constant() const { return a0_; }
  double gauge_tau() const { return tau_; }

  const Mat& coords() const { return coords_; }
  const Vec& weights() const { return weights_; }
  double weight(int i) const { return weights_[i]; }
  double total_measure() const { return weights_.sum(); }
  double min_spacing() const { return min_spacing_; }
  double diameter() const { return diameter_; }

  double distance(int i, int j) const;

  /// Points y with rho(center, y) <= radius (closed ball), ascending ids.
  std::vector<int> ball(int center, double radius) const;
  double ball_measure(int center, double radius) const;

  Complex integral(const CVec& f) const;
  double integral(const Vec& f) const;
  double l1_norm(const CVec& f) const;
  double lp_norm(const CVec& f, double p) const;

  /// True when the closed gauge ball of this radius around the point,
  /// taken in the infinite lattice, lies inside the stored grid. Used to
  /// keep validation samples away from the hull.
  bool is_interior(int i, double radius) const;
  std::vector<int> interior_points(double radius) const;

 private:
  Space() = default;

  SpaceKind kind_ = SpaceKind::euclidean;
  int dim_ = 1;         // coordinate columns
  int side_ = 0;
  double spacing_ = 1;
  double hdim_ = 1;     // D
  double a0_ = 1;       // declared quasi-triangle constant
  double tau_ = 16;     // heisenberg gauge constant
  double min_spacing_ = 1;
  double diameter_ = 0;
  Mat coords_;
  Vec weights_;
};

struct RegularityReport {
  double min_ratio = 0;        // min over samples of mu(B)/r^D
  double max_ratio = 0;
  double fitted_exponent = 0;  // slope of log mu(B(x,r)) against log r
  int center_count = 0;
  int radius_count = 0;
};

/// Measures c, C in c r^D <= mu(B(x,r)) <= C r^D over the given samples.
/// Radii must lie in [2 * min_spacing, diameter / 4]; centers whose ball
/// leaves the hull are skipped.
RegularityReport check_regularity(const Space& space,
                                  std::span<const double> radii,
                                  std::span<const int> centers);

struct HolderReport {
  double eta = 1;
  double constant = 0;  // max sampled ratio
  int triples = 0;      // triples actually evaluated
};

/// Largest sampled value of
/// |rho(x,z) - rho(y,z)| / (max(rho(x,z), rho(y,z))^{1-eta} rho(x,y)^eta).
HolderReport check_holder_metric(const Space& space, double eta, int samples,
                                 std::uint64_t seed = 1);

struct QuasiTriangleReport {
  double max_ratio = 0;  // max rho(x,y) / (rho(x,z) + rho(z,y))
  std::int64_t violations = 0;
  std::int64_t triples = 0;
};

QuasiTriangleReport check_quasi_triangle(const Space& space,
                                         std::int64_t samples,
                                         std::uint64_t seed = 1);

}  // namespace varcz
