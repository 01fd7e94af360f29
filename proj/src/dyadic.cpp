#include "varcz/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "varcz/random.hpp"

namespace varcz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cube_diameter(const Space& space, const std::vector<int>& members,
                     int center, bool* exact) {
  const auto n = members.size();
  if (n <= 1) {
    *exact = true;
    return 0;
  }
  if (n <= 4096) {
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        d = std::max(d, space.distance(members[i], members[j]));
      }
    }
    *exact = true;
    return d;
  }
  // Double sweep: farthest point from the center, then farthest from that.
  auto farthest = [&](int from) {
    int arg = from;
    double best = 0;
    for (int m : members) {
      const double d = space.distance(from, m);
      if (d > best) {
        best = d;
        arg = m;
      }
    }
    return std::pair<int, double>{arg, best};
  };
  const auto [a, _] = farthest(center);
  const auto [b, d] = farthest(a);
  (void)b;
  *exact = false;
  return d;
}

void finalize_cube(const Space& space, Cube& q) {
  std::sort(q.members.begin(), q.members.end());
  q.measure = 0;
  for (int m : q.members) q.measure += space.weight(m);
  q.diameter = cube_diameter(space, q.members, q.center, &q.diameter_exact);
}

/// Measured sandwich constants: a0 = min over cubes of (distance from the
/// center to the nearest non-member) / kappa^k, C1 = max over cubes of
/// (distance from the center to the farthest member) / kappa^k.
void measure_sandwich(const Space& space,
                      const std::vector<std::vector<Cube>>& cubes,
                      double kappa, int k_min, double* a0, double* c1) {
  *a0 = kInf;
  *c1 = 0;
  const int n = space.size();
  for (std::size_t s = 0; s < cubes.size(); ++s) {
    const double scale = std::pow(kappa, k_min + static_cast<int>(s));
    for (const Cube& q : cubes[s]) {
      double outer = 0;
      for (int m : q.members) {
        outer = std::max(outer, space.distance(q.center, m));
      }
      *c1 = std::max(*c1, outer / scale);
      if (static_cast<int>(q.members.size()) == n) continue;  // no outside
      std::vector<char> in(n, 0);
      for (int m : q.members) in[m] = 1;
      double inner = kInf;
      for (int y = 0; y < n; ++y) {
        if (!in[y]) inner = std::min(inner, space.distance(q.center, y));
      }
      *a0 = std::min(*a0, inner / scale);
    }
  }
  if (*a0 == kInf) *a0 = 1;  // single-cube-per-scale chain
}

}  // namespace

CubeSystem::CubeSystem(std::shared_ptr<const Space> space, double kappa,
                       int k_min, std::vector<std::vector<Cube>> cubes_by_scale,
                       std::vector<IVec> point_to_cube, double a0, double c1,
                       int shift_index)
    : space_(std::move(space)),
      kappa_(kappa),
      k_min_(k_min),
      cubes_(std::move(cubes_by_scale)),
      point_to_cube_(std::move(point_to_cube)),
      a0_(a0),
      c1_(c1),
      shift_index_(shift_index) {
  if (cubes_.empty() || cubes_.size() != point_to_cube_.size()) {
    throw std::invalid_argument("CubeSystem: inconsistent scale data");
  }
}

int CubeSystem::index(int k) const {
  const int i = k - k_min_;
  if (i < 0 || i >= num_scales()) {
    throw std::out_of_range("CubeSystem: scale " + std::to_string(k) +
                            " outside [" + std::to_string(k_min_) + ", " +
                            std::to_string(k_max()) + "]");
  }
  return i;
}

int CubeSystem::total_cubes() const {
  int n = 0;
  for (const auto& level : cubes_) n += static_cast<int>(level.size());
  return n;
}

std::vector<CubeSystem> build_shifted_grids(std::shared_ptr<const Space> space,
                                            int k_min, int k_max) {
  if (space->kind() != SpaceKind::euclidean) {
    throw std::invalid_argument("build_shifted_grids: Euclidean space only");
  }
  if (k_min > k_max) {
    throw std::invalid_argument("build_shifted_grids: empty scale range");
  }
  const int dim = space->dimension();
  const int n = space->size();
  const int num_systems = dim == 1 ? 3 : 9;

  std::vector<CubeSystem> systems;
  systems.reserve(num_systems);
  for (int alpha_idx = 0; alpha_idx < num_systems; ++alpha_idx) {
    const std::array<int, 2> alpha{{alpha_idx % 3, alpha_idx / 3}};
    std::vector<std::vector<Cube>> cubes(k_max - k_min + 1);
    std::vector<IVec> p2c(k_max - k_min + 1);

    // Box index of a coordinate at scale k: m = floor(x / 2^k - (-1)^k a/3).
    std::vector<std::vector<std::array<long long, 2>>> keys_by_scale;
    keys_by_scale.reserve(cubes.size());
    for (int k = k_min; k <= k_max; ++k) {
      const double side = std::pow(2.0, k);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      std::vector<std::array<long long, 2>> keys(n, {{0, 0}});
      for (int p = 0; p < n; ++p) {
        for (int a = 0; a < dim; ++a) {
          keys[p][a] = static_cast<long long>(
              std::floor(space->coords()(p, a) / side - sign * alpha[a] / 3.0));
        }
      }
      keys_by_scale.push_back(std::move(keys));
    }

    for (int s = 0; s < static_cast<int>(cubes.size()); ++s) {
      const int k = k_min + s;
      const double side = std::pow(2.0, k);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      std::map<std::array<long long, 2>, int> id_of;
      p2c[s] = IVec::Constant(n, -1);
      for (int p = 0; p < n; ++p) {
        const auto& key = keys_by_scale[s][p];
        auto [it, fresh] = id_of.try_emplace(key, static_cast<int>(cubes[s].size()));
        if (fresh) {
          Cube q;
          q.k = k;
          q.id = it->second;
          q.has_box = true;
          for (int a = 0; a < dim; ++a) {
            q.box_lo[a] = side * (static_cast<double>(key[a]) + sign * alpha[a] / 3.0);
            q.box_hi[a] = q.box_lo[a] + side;
          }
          cubes[s].push_back(std::move(q));
        }
        cubes[s][it->second].members.push_back(p);
        p2c[s][p] = it->second;
      }
      for (Cube& q : cubes[s]) {
        // Center: member closest to the box midpoint, lowest id on ties.
        double best = kInf;
        for (int m : q.members) {
          double d2 = 0;
          for (int a = 0; a < dim; ++a) {
            const double mid = 0.5 * (q.box_lo[a] + q.box_hi[a]);
            d2 += (space->coords()(m, a) - mid) * (space->coords()(m, a) - mid);
          }
          if (d2 < best) {
            best = d2;
            q.center = m;
          }
        }
        finalize_cube(*space, q);
      }
      if (s > 0) {
        for (Cube& child : cubes[s - 1]) {
          const int parent = p2c[s][child.members.front()];
          child.parent = parent;
          cubes[s][parent].children.push_back(child.id);
        }
      }
    }

    double a0 = 0, c1 = 0;
    measure_sandwich(*space, cubes, 2.0, k_min, &a0, &c1);
    systems.emplace_back(space, 2.0, k_min, std::move(cubes), std::move(p2c),
                         a0, c1, alpha_idx);
  }
  return systems;
}

CubeSystem build_christ_cubes(std::shared_ptr<const Space> space, double kappa,
                              int k_min, int k_max, std::uint64_t seed) {
  if (!(kappa > 1)) {
    throw std::invalid_argument("build_christ_cubes: kappa must exceed 1");
  }
  if (k_min > k_max) {
    throw std::invalid_argument("build_christ_cubes: empty scale range");
  }
  const int n = space->size();
  if (n > 1 && std::pow(kappa, k_max) > space->diameter() * (1 + 1e-12)) {
    throw std::invalid_argument(
        "build_christ_cubes: kappa^k_max exceeds the diameter");
  }
  if (std::pow(kappa, k_min) < space->min_spacing() * (1 - 1e-12)) {
    throw std::invalid_argument(
        "build_christ_cubes: kappa^k_min below the minimum spacing");
  }

  // Seeded visit order shared by all scales.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_int(0, i)]);
  }

  const int scales = k_max - k_min + 1;
  std::vector<std::vector<Cube>> cubes(scales);
  std::vector<IVec> p2c(scales);

  // Nearest point of `net`, ties to the lowest point id.
  const auto nearest = [&](int p, const std::vector<int>& net) {
    int arg = -1;
    double best = kInf;
    for (std::size_t c = 0; c < net.size(); ++c) {
      const double d = space->distance(p, net[c]);
      if (d < best || (d == best && arg >= 0 && net[c] < net[arg])) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    return arg;
  };

  // Top scale: global maximal kappa^K-separated net and its Voronoi cells.
  {
    const int s = scales - 1;
    const double sep = std::pow(kappa, k_max);
    std::vector<int> net;
    for (int p : order) {
      bool ok = true;
      for (int c : net) {
        if (space->distance(p, c) < sep) {
          ok = false;
          break;
        }
      }
      if (ok) net.push_back(p);
    }
    cubes[s].resize(net.size());
    for (std::size_t c = 0; c < net.size(); ++c) {
      cubes[s][c].k = k_max;
      cubes[s][c].id = static_cast<int>(c);
      cubes[s][c].center = net[c];
    }
    p2c[s] = IVec::Constant(n, -1);
    for (int p = 0; p < n; ++p) {
      const int arg = nearest(p, net);
      p2c[s][p] = arg;
      cubes[s][arg].members.push_back(p);
    }
    for (Cube& q : cubes[s]) finalize_cube(*space, q);
  }

  // Finer scales, top-down. Within each parent, net points are drawn from
  // the points clear of the parent's boundary by theta kappa^k, so the
  // sandwich ball B(c, theta kappa^k) never leaks into a sibling; the
  // parent's own center qualifies by induction, so the net is never empty.
  const double theta = 1.0 / (2.0 * space->quasi_triangle_constant());
  for (int s = scales - 2; s >= 0; --s) {
    const int k = k_min + s;
    const double sep = std::pow(kappa, k);
    const double clearance = theta * sep;
    p2c[s] = IVec::Constant(n, -1);
    for (Cube& parent : cubes[s + 1]) {
      std::vector<char> in(n, 0);
      for (int m : parent.members) in[m] = 1;
      const auto boundary_clear = [&](int p) {
        for (int y = 0; y < n; ++y) {
          if (!in[y] && space->distance(p, y) <= clearance) return false;
        }
        return true;
      };
      std::vector<int> net{parent.center};
      for (int p : order) {
        if (!in[p] || p == parent.center || !boundary_clear(p)) continue;
        bool ok = true;
        for (int c : net) {
          if (space->distance(p, c) < sep) {
            ok = false;
            break;
          }
        }
        if (ok) net.push_back(p);
      }
      const int base = static_cast<int>(cubes[s].size());
      for (std::size_t c = 0; c < net.size(); ++c) {
        Cube q;
        q.k = k;
        q.id = base + static_cast<int>(c);
        q.center = net[c];
        q.parent = parent.id;
        cubes[s].push_back(std::move(q));
      }
      for (int m : parent.members) {
        const int arg = base + nearest(m, net);
        p2c[s][m] = arg;
        cubes[s][arg].members.push_back(m);
      }
      for (std::size_t c = 0; c < net.size(); ++c) {
        parent.children.push_back(base + static_cast<int>(c));
      }
    }
    for (Cube& q : cubes[s]) finalize_cube(*space, q);
  }
  if (n > 1 && cubes[0].size() <= 1) {
    throw std::invalid_argument(
        "build_christ_cubes: net degenerates to one point at k_min");
  }

  double a0 = 0, c1 = 0;
  measure_sandwich(*space, cubes, kappa, k_min, &a0, &c1);
  return CubeSystem(space, kappa, k_min, std::move(cubes), std::move(p2c), a0,
                    c1);
}

AxiomReport verify_cube_axioms(const CubeSystem& system) {
  const Space& space = system.space();
  const int n = space.size();
  AxiomReport rep;

  // Coverage and disjointness per scale, from the member lists alone.
  rep.coverage = true;
  rep.disjointness = true;
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    std::vector<int> owner(n, -1);
    for (const Cube& q : system.cubes_at(k)) {
      for (int m : q.members) {
        if (owner[m] != -1) {
          rep.disjointness = false;
          rep.witness = "point " + std::to_string(m) + " in cubes " +
                        std::to_string(owner[m]) + " and " +
                        std::to_string(q.id) + " at scale " + std::to_string(k);
          break;
        }
        owner[m] = q.id;
      }
      if (!rep.disjointness) break;
    }
    for (int p = 0; p < n && rep.disjointness; ++p) {
      if (owner[p] == -1) {
        rep.coverage = false;
        rep.witness = "point " + std::to_string(p) + " uncovered at scale " +
                      std::to_string(k);
        break;
      }
      if (owner[p] != system.cube_id_of(k, p)) {
        rep.coverage = false;
        rep.witness = "point index disagrees with members at scale " +
                      std::to_string(k);
        break;
      }
    }
    if (!rep.coverage || !rep.disjointness) break;
  }

  // Nesting: all members of a cube share the cube's parent, so the unique
  // coarser cube exists at every scale by transitivity.
  rep.nesting = rep.coverage && rep.disjointness;
  if (rep.nesting) {
    for (int k = system.k_min(); k < system.k_max() && rep.nesting; ++k) {
      for (const Cube& q : system.cubes_at(k)) {
        for (int m : q.members) {
          if (system.cube_id_of(k + 1, m) != q.parent) {
            rep.nesting = false;
            rep.witness = "cube " + std::to_string(q.id) + " at scale " +
                          std::to_string(k) + " splits across parents";
            break;
          }
        }
        if (!rep.nesting) break;
      }
    }
  }

  // Ball sandwich with the recorded constants.
  rep.ball_sandwich = true;
  const double a0 = system.a0(), c1 = system.c1();
  for (int k = system.k_min(); k <= system.k_max() && rep.ball_sandwich; ++k) {
    const double scale = std::pow(system.kappa(), k);
    for (const Cube& q : system.cubes_at(k)) {
      std::vector<char> in(n, 0);
      for (int m : q.members) in[m] = 1;
      for (int y = 0; y < n; ++y) {
        const double d = space.distance(q.center, y);
        if (in[y] && d > c1 * scale * (1 + 1e-12)) {
          rep.ball_sandwich = false;
          rep.witness = "member outside B(c, C1 kappa^k) at scale " +
                        std::to_string(k);
          break;
        }
        if (!in[y] && d < a0 * scale * (1 - 1e-12)) {
          rep.ball_sandwich = false;
          rep.witness = "non-member inside B(c, a0 kappa^k) at scale " +
                        std::to_string(k);
          break;
        }
      }
      if (!rep.ball_sandwich) break;
    }
  }
  return rep;
}

AdjacencyReport check_adjacency(std::span<const CubeSystem> systems,
                                std::span<const BallQuery> queries) {
  if (systems.empty()) {
    throw std::invalid_argument("check_adjacency: no systems");
  }
  const double kappa = systems[0].kappa();
  for (const CubeSystem& s : systems) {
    if (s.kappa() != kappa || s.k_min() != systems[0].k_min() ||
        s.k_max() != systems[0].k_max()) {
      throw std::invalid_argument(
          "check_adjacency: systems must share kappa and scale range");
    }
  }
  const Space& space = systems[0].space();
  const int dim = space.dimension();

  AdjacencyReport rep;
  for (const BallQuery& b : queries) {
    BallCover best;
    best.ratio = kInf;
    for (std::size_t si = 0; si < systems.size(); ++si) {
      const CubeSystem& sys = systems[si];
      for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
        const Cube& q = sys.cube_of(k, b.center);
        bool contains;
        if (q.has_box) {
          contains = true;
          for (int a = 0; a < dim; ++a) {
            const double c = space.coords()(b.center, a);
            if (c - b.radius < q.box_lo[a] || c + b.radius >= q.box_hi[a]) {
              contains = false;
              break;
            }
          }
        } else {
          contains = true;
          for (int y = 0; y < space.size(); ++y) {
            if (space.distance(b.center, y) <= b.radius &&
                sys.cube_id_of(k, y) != q.id) {
              contains = false;
              break;
            }
          }
        }
        if (contains) {
          const double ratio = q.diameter / b.radius;
          if (ratio < best.ratio) {
            best = BallCover{static_cast<int>(si), k, q.id, ratio};
          }
          break;  // coarser cubes of this system can only be larger
        }
      }
    }
    if (best.cube < 0) {
      throw std::runtime_error(
          "check_adjacency: ball at point " + std::to_string(b.center) +
          " radius " + std::to_string(b.radius) +
          " not contained in any top-scale cube");
    }
    if (best.ratio > rep.worst_ratio) {
      rep.worst_ratio = best.ratio;
      rep.covering_system = best.system;
    }
    rep.covers.push_back(best);
  }
  return rep;
}

namespace {

/// Distance from each point to the other side of the target's boundary:
/// for members, to the complement; for outside points, to the target.
/// Shared across tau values.
std::vector<double> boundary_distances(const Space& space,
                                       const std::vector<int>& members) {
  const int n = space.size();
  std::vector<char> in(n, 0);
  for (int m : members) in[m] = 1;
  std::vector<double> nearest(n, kInf);
  for (int x = 0; x < n; ++x) {
    if (in[x]) {
      for (int y = 0; y < n; ++y) {
        if (!in[y]) nearest[x] = std::min(nearest[x], space.distance(x, y));
      }
    } else {
      for (int m : members) {
        nearest[x] = std::min(nearest[x], space.distance(x, m));
      }
    }
  }
  return nearest;
}

double collar_ratio(const Space& space, const std::vector<double>& nearest,
                    double mu, double width) {
  double mass = 0;
  for (int x = 0; x < space.size(); ++x) {
    if (nearest[x] <= width) mass += space.weight(x);
  }
  return mass / mu;
}

BoundaryReport fit_boundary(const std::vector<double>& taus,
                            const std::vector<std::vector<double>>& ratios,
                            int targets) {
  BoundaryReport rep;
  rep.targets = targets;
  std::vector<double> logt, logr;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (ratios[i].empty()) continue;
    double mean = 0;
    for (double r : ratios[i]) mean += r;
    mean /= static_cast<double>(ratios[i].size());
    rep.rows.push_back(BoundaryRow{taus[i], mean});
    if (mean > 0) {
      logt.push_back(std::log(taus[i]));
      logr.push_back(std::log(mean));
    }
  }
  if (logt.size() >= 2) {
    const double n = static_cast<double>(logt.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < logt.size(); ++i) {
      sx += logt[i];
      sy += logr[i];
      sxx += logt[i] * logt[i];
      sxy += logt[i] * logr[i];
    }
    rep.fitted_eta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.fitted_c3 = std::exp((sy - rep.fitted_eta * sx) / n);
  } else if (!rep.rows.empty()) {
    rep.fitted_c3 = rep.rows.back().ratio;
  }
  return rep;
}

}  // namespace

BoundaryReport measure_small_boundary(const CubeSystem& system,
                                      std::span<const double> taus,
                                      int max_cubes_per_scale) {
  if (taus.empty()) {
    throw std::invalid_argument("measure_small_boundary: empty tau list");
  }
  const Space& space = system.space();
  std::vector<double> tau_list(taus.begin(), taus.end());
  std::vector<std::vector<double>> ratios(tau_list.size());
  int targets = 0;
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    int used = 0;
    for (const Cube& q : system.cubes_at(k)) {
      if (used >= max_cubes_per_scale) break;
      if (q.diameter <= 0 ||
          static_cast<int>(q.members.size()) == space.size()) {
        continue;
      }
      std::vector<double> nearest;
      bool usable = false;
      for (std::size_t i = 0; i < tau_list.size(); ++i) {
        const double width = tau_list[i] * q.diameter;
        if (width < 2 * space.min_spacing()) continue;  // below the floor
        if (nearest.empty()) nearest = boundary_distances(space, q.members);
        ratios[i].push_back(collar_ratio(space, nearest, q.measure, width));
        usable = true;
      }
      if (usable) {
        ++targets;
        ++used;
      }
    }
  }
  return fit_boundary(tau_list, ratios, targets);
}

BoundaryReport measure_small_boundary_balls(const Space& space,
                                            std::span<const BallQuery> balls,
                                            std::span<const double> taus) {
  if (taus.empty()) {
    throw std::invalid_argument("measure_small_boundary: empty tau list");
  }
  std::vector<double> tau_list(taus.begin(), taus.end());
  std::vector<std::vector<double>> ratios(tau_list.size());
  int targets = 0;
  for (const BallQuery& b : balls) {
    const std::vector<int> members = space.ball(b.center, b.radius);
    if (members.empty() || static_cast<int>(members.size()) == space.size()) {
      continue;
    }
    double diam = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        diam = std::max(diam, space.distance(members[i], members[j]));
      }
    }
    if (diam <= 0) continue;
    double mu = 0;
    for (int m : members) mu += space.weight(m);
    std::vector<double> nearest;
    bool usable = false;
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
      const double width = tau_list[i] * diam;
      if (width < 2 * space.min_spacing()) continue;
      if (nearest.empty()) nearest = boundary_distances(space, members);
      ratios[i].push_back(collar_ratio(space, nearest, mu, width));
      usable = true;
    }
    if (usable) ++targets;
  }
  return fit_boundary(tau_list, ratios, targets);
}

}  // namespace varcz
