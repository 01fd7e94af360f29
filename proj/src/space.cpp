#include "varcz/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "varcz/random.hpp"

namespace varcz {

namespace {

void check_budget(std::int64_t points, std::int64_t budget) {
  if (points > budget) {
    throw std::invalid_argument("point budget exceeded: " +
                                std::to_string(points) + " > " +
                                std::to_string(budget));
  }
}

double fit_slope(const std::vector<double>& logx,
                 const std::vector<double>& logy) {
  const double n = static_cast<double>(logx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < logx.size(); ++i) {
    sx += logx[i];
    sy += logy[i];
    sxx += logx[i] * logx[i];
    sxy += logx[i] * logy[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

Space Space::euclidean_grid(int dimension, int side_count, double spacing,
                            std::int64_t point_budget) {
  if (dimension != 1 && dimension != 2) {
    throw std::invalid_argument("euclidean_grid: dimension must be 1 or 2");
  }
  if (side_count < 2) {
    throw std::invalid_argument("euclidean_grid: side_count must be >= 2");
  }
  if (!(spacing > 0)) {
    throw std::invalid_argument("euclidean_grid: spacing must be positive");
  }
  std::int64_t n = side_count;
  if (dimension == 2) n *= side_count;
  check_budget(n, point_budget);

  Space s;
  s.kind_ = SpaceKind::euclidean;
  s.dim_ = dimension;
  s.side_ = side_count;
  s.spacing_ = spacing;
  s.hdim_ = dimension;
  s.a0_ = 1.0;
  s.coords_.resize(n, dimension);
  if (dimension == 1) {
    for (int i = 0; i < side_count; ++i) s.coords_(i, 0) = i * spacing;
  } else {
    int row = 0;
    for (int i = 0; i < side_count; ++i) {
      for (int j = 0; j < side_count; ++j, ++row) {
        s.coords_(row, 0) = i * spacing;
        s.coords_(row, 1) = j * spacing;
      }
    }
  }
  s.weights_ = Vec::Constant(n, std::pow(spacing, dimension));
  s.min_spacing_ = spacing;
  const double extent = (side_count - 1) * spacing;
  s.diameter_ = dimension == 1 ? extent : extent * std::sqrt(2.0);
  return s;
}

Space Space::heisenberg_grid(int side_count, double spacing,
                             std::int64_t point_budget) {
  if (side_count < 2) {
    throw std::invalid_argument("heisenberg_grid: side_count must be >= 2");
  }
  if (!(spacing > 0)) {
    throw std::invalid_argument("heisenberg_grid: spacing must be positive");
  }
  const std::int64_t tn = static_cast<std::int64_t>(side_count) * side_count;
  const std::int64_t n = tn * tn;  // side^2 in (x,y) times side^2 in t
  check_budget(n, point_budget);

  Space s;
  s.kind_ = SpaceKind::heisenberg;
  s.dim_ = 3;
  s.side_ = side_count;
  s.spacing_ = spacing;
  s.hdim_ = 4.0;
  s.a0_ = 2.0;  // conservative; the gauge below is measured close to a metric
  s.tau_ = 16.0;
  s.coords_.resize(n, 3);
  const double h2 = spacing * spacing;
  int row = 0;
  for (int i = 0; i < side_count; ++i) {
    for (int j = 0; j < side_count; ++j) {
      for (int k = 0; k < side_count * side_count; ++k, ++row) {
        s.coords_(row, 0) = i * spacing;
        s.coords_(row, 1) = j * spacing;
        s.coords_(row, 2) = k * h2;
      }
    }
  }
  s.weights_ = Vec::Constant(n, h2 * h2);
  s.min_spacing_ = spacing;
  // Gauge diameter of the box, measured over the eight corners.
  s.diameter_ = 0;
  std::vector<int> corners;
  const int t_count = side_count * side_count;
  for (int i : {0, side_count - 1}) {
    for (int j : {0, side_count - 1}) {
      for (int k : {0, t_count - 1}) {
        corners.push_back((i * side_count + j) * t_count + k);
      }
    }
  }
  for (int a : corners) {
    for (int b : corners) s.diameter_ = std::max(s.diameter_, s.distance(a, b));
  }
  return s;
}

double Space::distance(int i, int j) const {
  if (kind_ == SpaceKind::euclidean) {
    return (coords_.row(i) - coords_.row(j)).norm();
  }
  // Gauge of h^{-1} g for g = point i, h = point j, with group law
  // (x,y,t)(x',y',t') = (x+x', y+y', t+t'+(x y' - y x')/2).
  const double dx = coords_(i, 0) - coords_(j, 0);
  const double dy = coords_(i, 1) - coords_(j, 1);
  const double dt = coords_(i, 2) - coords_(j, 2) +
                    (coords_(j, 1) * coords_(i, 0) -
                     coords_(j, 0) * coords_(i, 1)) * 0.5;
  const double horiz = dx * dx + dy * dy;
  return std::pow(horiz * horiz + tau_ * dt * dt, 0.25);
}

std::vector<int> Space::ball(int center, double radius) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (distance(center, j) <= radius) out.push_back(j);
  }
  return out;
}

double Space::ball_measure(int center, double radius) const {
  double m = 0;
  for (int j = 0; j < size(); ++j) {
    if (distance(center, j) <= radius) m += weights_[j];
  }
  return m;
}

Complex Space::integral(const CVec& f) const {
  return (f.array() * weights_.array().cast<Complex>()).sum();
}

double Space::integral(const Vec& f) const { return f.dot(weights_); }

double Space::l1_norm(const CVec& f) const {
  return (f.array().abs() * weights_.array()).sum();
}

double Space::lp_norm(const CVec& f, double p) const {
  return std::pow((f.array().abs().pow(p) * weights_.array()).sum(), 1.0 / p);
}

bool Space::is_interior(int i, double radius) const {
  if (kind_ == SpaceKind::euclidean) {
    const double lo = 0, hi = (side_ - 1) * spacing_;
    for (int a = 0; a < dim_; ++a) {
      const double c = coords_(i, a);
      if (c - radius < lo || c + radius > hi) return false;
    }
    return true;
  }
  // The gauge ball around (x1, x2, x3) in the infinite lattice spans
  // |dx|, |dy| <= r and a t-range shifted by the group twist; check that
  // the bounding index box stays inside the grid.
  const double r = radius;
  const double x1 = coords_(i, 0), x2 = coords_(i, 1), x3 = coords_(i, 2);
  const double h = spacing_, h2 = spacing_ * spacing_;
  const double xy_hi = (side_ - 1) * h;
  if (x1 - r < 0 || x1 + r > xy_hi || x2 - r < 0 || x2 + r > xy_hi)
    return false;
  const double twist = 0.5 * r * (std::abs(x1) + std::abs(x2) + 2 * r);
  const double t_half = r * r / std::sqrt(tau_) + twist;
  const double t_hi = (side_ * side_ - 1) * h2;
  return x3 - t_half >= 0 && x3 + t_half <= t_hi;
}

std::vector<int> Space::interior_points(double radius) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (is_interior(i, radius)) out.push_back(i);
  }
  return out;
}

RegularityReport check_regularity(const Space& space,
                                  std::span<const double> radii,
                                  std::span<const int> centers) {
  if (radii.empty() || centers.empty()) {
    throw std::invalid_argument("check_regularity: empty sample set");
  }
  for (double r : radii) {
    if (!(r >= 2 * space.min_spacing() && r <= space.diameter() / 4)) {
      throw std::invalid_argument(
          "check_regularity: radius outside [2*min_spacing, diameter/4]");
    }
  }
  const double d = space.homogeneous_dimension();
  RegularityReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0;
  std::vector<double> logr, logmu;
  for (double r : radii) {
    double log_sum = 0;
    int used = 0;
    for (int c : centers) {
      if (!space.is_interior(c, r)) continue;
      const double mu = space.ball_measure(c, r);
      const double ratio = mu / std::pow(r, d);
      rep.min_ratio = std::min(rep.min_ratio, ratio);
      rep.max_ratio = std::max(rep.max_ratio, ratio);
      log_sum += std::log(mu);
      ++used;
    }
    if (used > 0) {
      logr.push_back(std::log(r));
      logmu.push_back(log_sum / used);
      rep.center_count = std::max(rep.center_count, used);
      ++rep.radius_count;
    }
  }
  if (rep.radius_count < 2) {
    throw std::invalid_argument(
        "check_regularity: fewer than two usable radii (interior too small)");
  }
  rep.fitted_exponent = fit_slope(logr, logmu);
  return rep;
}

HolderReport check_holder_metric(const Space& space, double eta, int samples,
                                 std::uint64_t seed) {
  if (!(eta > 0 && eta <= 1)) {
    throw std::invalid_argument("check_holder_metric: eta must be in (0,1]");
  }
  if (samples < 1) {
    throw std::invalid_argument("check_holder_metric: samples must be >= 1");
  }
  Rng rng(seed);
  const int n = space.size();
  HolderReport rep;
  rep.eta = eta;
  for (int s = 0; s < samples; ++s) {
    const int x = rng.uniform_int(0, n - 1);
    const int y = rng.uniform_int(0, n - 1);
    const int z = rng.uniform_int(0, n - 1);
    if (x == z || y == z || x == y) continue;  // degenerate, skipped
    const double dxz = space.distance(x, z);
    const double dyz = space.distance(y, z);
    const double dxy = space.distance(x, y);
    const double denom =
        std::pow(std::max(dxz, dyz), 1.0 - eta) * std::pow(dxy, eta);
    rep.constant = std::max(rep.constant, std::abs(dxz - dyz) / denom);
    ++rep.triples;
  }
  return rep;
}

QuasiTriangleReport check_quasi_triangle(const Space& space,
                                         std::int64_t samples,
                                         std::uint64_t seed) {
  Rng rng(seed);
  const int n = space.size();
  const double a0 = space.quasi_triangle_constant();
  QuasiTriangleReport rep;
  for (std::int64_t s = 0; s < samples; ++s) {
    const int x = rng.uniform_int(0, n - 1);
    const int y = rng.uniform_int(0, n - 1);
    const int z = rng.uniform_int(0, n - 1);
    if (x == y || x == z || y == z) continue;
    const double lhs = space.distance(x, y);
    const double rhs = space.distance(x, z) + space.distance(z, y);
    rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    if (lhs > a0 * rhs * (1 + 1e-12)) ++rep.violations;
    ++rep.triples;
  }
  return rep;
}

}  // namespace varcz
