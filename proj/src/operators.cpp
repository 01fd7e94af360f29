#include "varcz/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "varcz/parallel.hpp"
#include "varcz/random.hpp"
#include "varcz/variation.hpp"

namespace varcz {

Kernel make_kernel(const std::string& name) {
  if (name == "hilbert") {
    return Kernel(name,
                  [](const Space& space, int x, int y) -> Complex {
                    if (space.dimension() != 1) {
                      throw std::invalid_argument("hilbert kernel needs 1D");
                    }
                    return 1.0 / (space.coords()(x, 0) - space.coords()(y, 0));
                  },
                  1.0);
  }
  if (name == "riesz-0" || name == "riesz-1") {
    const int j = name.back() - '0';
    return Kernel(name,
                  [j](const Space& space, int x, int y) -> Complex {
                    if (space.dimension() != 2) {
                      throw std::invalid_argument("riesz kernel needs 2D");
                    }
                    const double u0 = space.coords()(x, 0) - space.coords()(y, 0);
                    const double u1 = space.coords()(x, 1) - space.coords()(y, 1);
                    const double r = std::sqrt(u0 * u0 + u1 * u1);
                    return (j == 0 ? u0 : u1) / (r * r * r);
                  },
                  1.0);
  }
  if (name == "zero") {
    return Kernel(name, [](const Space&, int, int) -> Complex { return 0.0; },
                  1.0);
  }
  if (name == "test-positive") {
    return Kernel(name,
                  [](const Space& space, int x, int y) -> Complex {
                    return std::pow(space.distance(x, y),
                                    -space.homogeneous_dimension());
                  },
                  1.0);
  }
  throw std::invalid_argument("unknown kernel: " + name);
}

Complex average(const Space& space, const CVec& f, double t, int x) {
  Complex sum = 0;
  double mass = 0;
  for (int y = 0; y < space.size(); ++y) {
    if (space.distance(x, y) <= t) {
      sum += f[y] * space.weight(y);
      mass += space.weight(y);
    }
  }
  return sum / mass;
}

Complex truncated_si(const Space& space, const Kernel& kernel, const CVec& f,
                     double t, int x) {
  if (!(t > 0)) {
    throw std::invalid_argument("truncated_si: t must be positive");
  }
  Complex sum = 0;
  for (int y = 0; y < space.size(); ++y) {
    if (space.distance(x, y) > t) {
      sum += kernel(space, x, y) * f[y] * space.weight(y);
    }
  }
  return sum;
}

namespace {

/// (distance, point) pairs sorted by distance then id, excluding x itself.
std::vector<std::pair<double, int>> sorted_distances(const Space& space,
                                                     int x) {
  std::vector<std::pair<double, int>> d;
  d.reserve(space.size() - 1);
  for (int y = 0; y < space.size(); ++y) {
    if (y != x) d.push_back({space.distance(x, y), y});
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

OperatorProfile OperatorProfile::averages(const Space& space, const CVec& f,
                                          int x) {
  const auto d = sorted_distances(space, x);
  OperatorProfile p;
  p.values_.push_back(f[x]);  // ball = {x} for t below the first breakpoint
  Complex sum = f[x] * space.weight(x);
  double mass = space.weight(x);
  std::size_t i = 0;
  while (i < d.size()) {
    const double dist = d[i].first;
    while (i < d.size() && d[i].first == dist) {
      sum += f[d[i].second] * space.weight(d[i].second);
      mass += space.weight(d[i].second);
      ++i;
    }
    p.breaks_.push_back(dist);
    p.values_.push_back(sum / mass);
  }
  return p;
}

OperatorProfile OperatorProfile::singular(const Space& space,
                                          const Kernel& kernel, const CVec& f,
                                          int x) {
  const auto d = sorted_distances(space, x);
  OperatorProfile p;
  // Tail sums: value on the plateau past breakpoint d_i excludes rho <= d_i.
  Complex total = 0;
  for (const auto& [dist, y] : d) {
    (void)dist;
    total += kernel(space, x, y) * f[y] * space.weight(y);
  }
  p.values_.push_back(total);
  std::size_t i = 0;
  while (i < d.size()) {
    const double dist = d[i].first;
    while (i < d.size() && d[i].first == dist) {
      const int y = d[i].second;
      total -= kernel(space, x, y) * f[y] * space.weight(y);
      ++i;
    }
    p.breaks_.push_back(dist);
    p.values_.push_back(total);
  }
  // The final plateau is an empty sum; pin it to exactly zero.
  if (!p.values_.empty()) p.values_.back() = 0.0;
  return p;
}

int OperatorProfile::plateau(double t) const {
  return static_cast<int>(
      std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
}

Complex OperatorProfile::at(double t) const { return values_[plateau(t)]; }

std::vector<Complex> OperatorProfile::window(double lo, double hi) const {
  const int a = plateau(lo), b = plateau(hi);
  return std::vector<Complex>(values_.begin() + a, values_.begin() + b + 1);
}

std::vector<Complex> OperatorProfile::annulus_window(double lo,
                                                     double hi) const {
  // Value at t in (d_j, d_{j+1}] is sum over lo < rho < t, i.e. the tail
  // at lo minus the tail at d_j.
  const int a = plateau(lo);
  std::vector<Complex> out{0.0};
  for (int j = a + 1; j < static_cast<int>(values_.size()); ++j) {
    if (breaks_[j - 1] >= hi) break;
    out.push_back(values_[a] - values_[j]);
  }
  return out;
}

KernelReport validate_kernel(const Space& space, const Kernel& kernel,
                             int samples, std::uint64_t seed) {
  if (samples < 1) {
    throw std::invalid_argument("validate_kernel: samples must be >= 1");
  }
  Rng rng(seed);
  const int n = space.size();
  const double dim = space.homogeneous_dimension();
  const double eta = kernel.holder_eta();
  KernelReport rep;

  while (rep.pairs < samples) {
    const int x = rng.uniform_int(0, n - 1);
    const int y = rng.uniform_int(0, n - 1);
    if (x == y) continue;
    const double rho = space.distance(x, y);
    rep.size_ratio = std::max(
        rep.size_ratio, std::pow(rho, dim) * std::abs(kernel(space, x, y)));
    ++rep.pairs;
  }

  long attempts = 0;
  while (rep.triples < samples && attempts < 100LL * samples) {
    ++attempts;
    const int x = rng.uniform_int(0, n - 1);
    const int xp = rng.uniform_int(0, n - 1);
    const int y = rng.uniform_int(0, n - 1);
    if (x == xp || x == y || xp == y) continue;
    const double rxx = space.distance(x, xp);
    const double rxy = space.distance(x, y);
    if (!(rxy >= 2 * rxx && rxx > 0)) continue;
    const double bound =
        std::pow(rxx / rxy, eta) * std::pow(rxy, -dim);
    const double d1 = std::abs(kernel(space, x, y) - kernel(space, xp, y));
    const double d2 = std::abs(kernel(space, y, x) - kernel(space, y, xp));
    rep.smoothness_single =
        std::max({rep.smoothness_single, d1 / bound, d2 / bound});
    rep.smoothness_sum = std::max(rep.smoothness_sum, (d1 + d2) / bound);
    ++rep.triples;
  }

  // Cancellation at interior base points over a ladder of (r, R) pairs.
  const double margin = space.diameter() / 4;
  const std::vector<int> interior = space.interior_points(margin);
  if (!interior.empty()) {
    const int zs = std::min<int>(8, static_cast<int>(interior.size()));
    for (int zi = 0; zi < zs; ++zi) {
      const int z = interior[static_cast<std::size_t>(zi) *
                             interior.size() / zs];
      for (double r = space.min_spacing(); r < margin / 2; r *= 2) {
        for (double R = 2 * r; R <= margin; R *= 2) {
          Complex in_y = 0, in_x = 0;
          for (int y = 0; y < n; ++y) {
            const double rho = space.distance(z, y);
            if (rho > r && rho < R) {
              in_y += kernel(space, z, y) * space.weight(y);
              in_x += kernel(space, y, z) * space.weight(y);
            }
          }
          ++rep.annuli;
          const double worst = std::max(std::abs(in_y), std::abs(in_x));
          if (worst > rep.cancellation_max) {
            rep.cancellation_max = worst;
            rep.cancellation_witness =
                "z=" + std::to_string(z) + " r=" + std::to_string(r) +
                " R=" + std::to_string(R) + " |I|=" + std::to_string(worst);
          }
        }
      }
    }
  }
  return rep;
}

double psi_smoothstep(double s) {
  if (s <= -1) return 0;
  if (s >= 0) return 1;
  const double u = s + 1;
  return u * u * (3 - 2 * u);
}

double psi_bump(double u, double kappa) {
  if (!(u > 0)) return 0;
  const double l = std::log(u) / std::log(kappa);
  return psi_smoothstep(l) - psi_smoothstep(l - 1);
}

Kernel dyadic_piece(const Kernel& kernel, int k, double kappa) {
  const double scale = std::pow(kappa, -k);
  return Kernel(kernel.name() + "@" + std::to_string(k),
                [base = kernel, scale, kappa](const Space& space, int x,
                                              int y) -> Complex {
                  const double rho = space.distance(x, y);
                  const double psi = psi_bump(scale * rho, kappa);
                  return psi == 0 ? Complex(0) : base(space, x, y) * psi;
                },
                kernel.holder_eta());
}

namespace {

/// Inhomogeneous r-variation of one scale window for every point, shared
/// profile per point across scales.
struct ShortVariationTable {
  // value[s][x'] for scale index s
  std::vector<Vec> value;
};

ShortVariationTable short_variation_values(const Space& space,
                                           const CubeSystem& system,
                                           const CVec& f,
                                           ShortVariationMode mode,
                                           const Kernel* kernel,
                                           const ShortVariationParams& params) {
  if (mode == ShortVariationMode::singular && kernel == nullptr) {
    throw std::invalid_argument("short variation: singular mode needs kernel");
  }
  const int n = space.size();
  const int scales = system.num_scales();
  ShortVariationTable table;
  table.value.assign(scales, Vec::Zero(n));

  // E_k f per point, needed only in averages mode.
  std::vector<CVec> ek;
  if (mode == ShortVariationMode::averages) {
    ek.reserve(scales);
    for (int k = system.k_min(); k <= system.k_max(); ++k) {
      ek.push_back(CVec());
      CVec& e = ek.back();
      e.resize(n);
      for (const Cube& q : system.cubes_at(k)) {
        Complex sum = 0;
        for (int m : q.members) sum += f[m] * space.weight(m);
        const Complex mean = sum / q.measure;
        for (int m : q.members) e[m] = mean;
      }
    }
  }

  parallel_for(n, [&](int xp) {
    const OperatorProfile profile =
        mode == ShortVariationMode::averages
            ? OperatorProfile::averages(space, f, xp)
            : OperatorProfile::singular(space, *kernel, f, xp);
    for (int s = 0; s < scales; ++s) {
      const int k = system.k_min() + s;
      const double lo = std::pow(system.kappa(), k - 1);
      const double hi = std::pow(system.kappa(), k + 1);
      std::vector<Complex> vals;
      if (mode == ShortVariationMode::averages) {
        vals = profile.window(lo, hi);
        const Complex e = ek[s][xp];
        for (Complex& v : vals) v -= e;
      } else {
        vals = profile.annulus_window(lo, hi);
      }
      if (vals.size() <= 1) {
        double sup = 0;
        for (const Complex& v : vals) sup = std::max(sup, std::abs(v));
        table.value[s][xp] = sup;
      } else {
        table.value[s][xp] = r_variation(std::span<const Complex>(vals),
                                         params.variation_r,
                                         /*homogeneous=*/false);
      }
    }
  });
  return table;
}

Vec nontangential_max(const Space& space, const Vec& values, double radius) {
  const int n = space.size();
  Vec out = Vec::Zero(n);
  parallel_for(n, [&](int x) {
    double best = 0;
    for (int y = 0; y < n; ++y) {
      if (space.distance(x, y) <= radius) best = std::max(best, values[y]);
    }
    out[x] = best;
  });
  return out;
}

}  // namespace

Vec short_variation(const Space& space, const CubeSystem& system,
                    const CVec& f, int k, ShortVariationMode mode,
                    const Kernel* kernel, const ShortVariationParams& params) {
  if (k < system.k_min() || k > system.k_max()) {
    throw std::out_of_range("short_variation: scale outside system range");
  }
  const ShortVariationTable table =
      short_variation_values(space, system, f, mode, kernel, params);
  const double radius = params.aperture * std::pow(system.kappa(), k);
  return nontangential_max(space, table.value[k - system.k_min()], radius);
}

Vec short_variation_square(const Space& space, const CubeSystem& system,
                           const CVec& f, ShortVariationMode mode,
                           const Kernel* kernel,
                           const ShortVariationParams& params) {
  const std::vector<Vec> fields =
      short_variation_fields(space, system, f, mode, kernel, params);
  Vec sq = Vec::Zero(space.size());
  for (const Vec& sk : fields) sq += sk.cwiseProduct(sk);
  return sq.cwiseSqrt();
}

std::vector<Vec> short_variation_fields(const Space& space,
                                        const CubeSystem& system,
                                        const CVec& f, ShortVariationMode mode,
                                        const Kernel* kernel,
                                        const ShortVariationParams& params) {
  const ShortVariationTable table =
      short_variation_values(space, system, f, mode, kernel, params);
  std::vector<Vec> fields;
  fields.reserve(system.num_scales());
  for (int s = 0; s < system.num_scales(); ++s) {
    const double radius =
        params.aperture * std::pow(system.kappa(), system.k_min() + s);
    fields.push_back(nontangential_max(space, table.value[s], radius));
  }
  return fields;
}

CMat dyadic_piece_matrix(const Space& space, const Kernel& kernel, int k,
                         double kappa) {
  const int n = space.size();
  const double scale = std::pow(kappa, -k);
  CMat m(n, n);
  const Vec root = space.weights().cwiseSqrt();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y) {
        m(x, y) = 0;
        continue;
      }
      const double psi = psi_bump(scale * space.distance(x, y), kappa);
      m(x, y) = psi == 0 ? Complex(0)
                         : kernel(space, x, y) * psi * root[x] * root[y];
    }
  }
  return m;
}

double operator_norm(const CMat& m, int iterations) {
  if (m.rows() == 0) return 0;
  CVec v = CVec::Ones(m.cols());
  for (int i = 0; i < m.cols(); ++i) {
    v[i] += Complex(0, 1e-3 * ((i % 7) + 1));  // break symmetry, fixed
  }
  v /= v.norm();
  double sigma = 0;
  for (int it = 0; it < iterations; ++it) {
    CVec w = m * v;
    v = m.adjoint() * w;
    const double nv = v.norm();
    if (nv == 0) return 0;
    v /= nv;
    const double next = std::sqrt(nv);
    if (it > 8 && std::abs(next - sigma) <= 1e-12 * std::max(1.0, sigma)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

double almost_orthogonality(const Space& space, const Kernel& kernel, int k,
                            int k_prime, double kappa, int max_points) {
  if (space.size() > max_points) {
    throw std::invalid_argument(
        "almost_orthogonality: space exceeds the matrix budget");
  }
  const CMat a = dyadic_piece_matrix(space, kernel, k, kappa);
  const CMat b = dyadic_piece_matrix(space, kernel, k_prime, kappa);
  return operator_norm(b.adjoint() * a) + operator_norm(b * a.adjoint());
}

}  // namespace varcz
