#include "varcz/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "varcz/random.hpp"

namespace varcz {

namespace {

void check_family(const CubeSystem& system, std::span<const CubeKey> family) {
  for (const CubeKey& key : family) {
    if (key.k < system.k_min() || key.k > system.k_max() || key.id < 0 ||
        key.id >= static_cast<int>(system.cubes_at(key.k).size())) {
      throw std::invalid_argument("sparse: cube not in system");
    }
  }
}

/// Mean of |f| over the dilated ball around the cube center.
double dilated_average(const CubeSystem& system, const CVec& f,
                       const Cube& q, double dilate) {
  const Space& space = system.space();
  const double radius =
      dilate * system.c1() * std::pow(system.kappa(), q.k);
  double sum = 0, mass = 0;
  for (int y = 0; y < space.size(); ++y) {
    if (space.distance(q.center, y) <= radius) {
      sum += std::abs(f[y]) * space.weight(y);
      mass += space.weight(y);
    }
  }
  return sum / mass;
}

}  // namespace

double carleson_constant(const CubeSystem& system,
                         std::span<const CubeKey> family) {
  check_family(system, family);
  // stacked[k][id] = total family measure sitting inside cube (k, id).
  std::vector<std::vector<double>> stacked(system.num_scales());
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    stacked[k - system.k_min()].assign(system.cubes_at(k).size(), 0.0);
  }
  for (const CubeKey& key : family) {
    stacked[key.k - system.k_min()][key.id] +=
        system.cube(key.k, key.id).measure;
  }
  double best = 0;
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    for (const Cube& q : system.cubes_at(k)) {
      if (k > system.k_min()) {
        for (int child : q.children) {
          stacked[k - system.k_min()][q.id] +=
              stacked[k - 1 - system.k_min()][child];
        }
      }
      best = std::max(best, stacked[k - system.k_min()][q.id] / q.measure);
    }
  }
  return best;
}

WitnessResult sparse_witness(const CubeSystem& system,
                             std::span<const CubeKey> family, double eta) {
  if (!(eta > 0 && eta <= 1)) {
    throw std::invalid_argument("sparse_witness: eta must be in (0, 1]");
  }
  check_family(system, family);
  const Space& space = system.space();

  std::vector<std::size_t> order(family.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return family[a] < family[b];  // finest scale first, then by id
  });

  WitnessResult res;
  res.sets.resize(family.size());
  std::vector<char> claimed(space.size(), 0);
  res.ok = true;
  for (std::size_t idx : order) {
    const Cube& q = system.cube(family[idx].k, family[idx].id);
    double mass = 0;
    for (int m : q.members) {
      if (!claimed[m]) {
        res.sets[idx].push_back(m);
        claimed[m] = 1;
        mass += space.weight(m);
      }
    }
    const double fraction = mass / q.measure;
    res.worst_fraction = std::min(res.worst_fraction, fraction);
    if (fraction < eta - 1e-12 && res.ok) {
      res.ok = false;
      res.blocking = family[idx];
    }
  }
  return res;
}

bool fractional_witness_exists(const CubeSystem& system,
                               std::span<const CubeKey> family, double eta) {
  if (!(eta > 0 && eta <= 1)) {
    throw std::invalid_argument(
        "fractional_witness_exists: eta must be in (0, 1]");
  }
  check_family(system, family);
  const Space& space = system.space();

  std::vector<std::size_t> order(family.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return family[a] < family[b];
  });

  std::vector<double> remaining(space.size());
  for (int i = 0; i < space.size(); ++i) remaining[i] = space.weight(i);
  for (std::size_t idx : order) {
    const Cube& q = system.cube(family[idx].k, family[idx].id);
    double needed = eta * q.measure;
    for (int m : q.members) {
      if (needed <= 0) break;
      const double take = std::min(remaining[m], needed);
      remaining[m] -= take;
      needed -= take;
    }
    if (needed > 1e-12 * q.measure) return false;
  }
  return true;
}

Vec sparse_operator(const CubeSystem& system, const SparseFamily& family,
                    const CVec& f, double exponent, double dilate) {
  if (!(exponent >= 1)) {
    throw std::invalid_argument("sparse_operator: exponent must be >= 1");
  }
  check_family(system, family.cubes);
  const Space& space = system.space();
  Vec acc = Vec::Zero(space.size());
  for (const CubeKey& key : family.cubes) {
    const Cube& q = system.cube(key.k, key.id);
    const double avg = dilated_average(system, f, q, dilate);
    const double term = std::pow(avg, exponent);
    for (int m : q.members) acc[m] += term;
  }
  return acc.array().pow(1.0 / exponent);
}

Vec nontangential_n(const CubeSystem& system, const PairFunctional& f,
                    std::optional<CubeKey> scope) {
  const Space& space = system.space();
  Vec out = Vec::Zero(space.size());
  for (int x = 0; x < space.size(); ++x) {
    double best = 0;
    if (scope) {
      const Cube& top = system.cube(scope->k, scope->id);
      if (system.cube_id_of(scope->k, x) != scope->id) {
        out[x] = 0;  // empty supremum
        continue;
      }
      for (int k = system.k_min(); k <= scope->k; ++k) {
        best = std::max(best, f.eval(system, system.cube_of(k, x), top));
      }
    } else {
      for (int kq = system.k_min(); kq <= system.k_max(); ++kq) {
        const Cube& top = system.cube_of(kq, x);
        for (int k = system.k_min(); k <= kq; ++k) {
          best = std::max(best, f.eval(system, system.cube_of(k, x), top));
        }
      }
    }
    out[x] = best;
  }
  return out;
}

SpotCheckReport spot_check_functional(const CubeSystem& system,
                                      const PairFunctional& f, int probes,
                                      std::uint64_t seed) {
  Rng rng(seed);
  SpotCheckReport rep;
  const int n = system.space().size();
  const int k_min = system.k_min(), k_max = system.k_max();
  if (k_max - k_min < 3) return rep;
  for (int p = 0; p < probes; ++p) {
    const int x = rng.uniform_int(0, n - 1);
    // k3 <= k2 <= k1 <= k0 along the chain of cubes containing x.
    int ks[4];
    for (int& k : ks) k = rng.uniform_int(k_min, k_max);
    std::sort(ks, ks + 4);
    const Cube& q3 = system.cube_of(ks[0], x);
    const Cube& q2 = system.cube_of(ks[1], x);
    const Cube& q1 = system.cube_of(ks[2], x);
    const Cube& q0 = system.cube_of(ks[3], x);
    ++rep.probes;
    const double mid = f.eval(system, q2, q1);
    const double outer = f.eval(system, q3, q0);
    if (mid > outer * (1 + 1e-9) && mid > 1e-300) {
      ++rep.monotonicity_violations;
      rep.worst_monotonicity =
          std::max(rep.worst_monotonicity, outer > 0 ? mid / outer : 1e300);
    }
    const double r = f.subadditivity_r;
    const double whole = f.eval(system, q3, q1);
    const double left = f.eval(system, q3, q2);
    const double right = f.eval(system, q2, q1);
    if (std::pow(whole, r) >
        (std::pow(left, r) + std::pow(right, r)) * (1 + 1e-9) + 1e-300) {
      ++rep.subadditivity_violations;
    }
  }
  return rep;
}

SparseFamily build_sparse_family(const CubeSystem& system,
                                 const PairFunctional* functional,
                                 const CVec& f, int k0,
                                 const StoppingPolicy& policy) {
  if (k0 < system.k_min() || k0 > system.k_max()) {
    throw std::out_of_range("build_sparse_family: k0 outside scale range");
  }
  SparseFamily family;
  family.eta_target = 0.5;
  family.avg_threshold = policy.avg_factor;
  family.func_threshold = policy.func_factor;

  // Memoized dilated averages.
  std::map<CubeKey, double> avg_cache;
  const auto avg = [&](const Cube& q) {
    const CubeKey key{q.k, q.id};
    auto it = avg_cache.find(key);
    if (it != avg_cache.end()) return it->second;
    const double v = dilated_average(system, f, q, policy.dilate);
    avg_cache.emplace(key, v);
    return v;
  };

  std::vector<CubeKey> pending;
  for (const Cube& q : system.cubes_at(k0)) {
    pending.push_back(CubeKey{k0, q.id});
  }

  while (!pending.empty()) {
    const CubeKey key = pending.back();
    pending.pop_back();
    const Cube& top = system.cube(key.k, key.id);
    family.cubes.push_back(key);
    if (key.k == system.k_min()) continue;

    const double base = avg(top);
    double a = policy.avg_factor, b = policy.func_factor;
    std::vector<CubeKey> children;
    for (int doubling = 0; doubling <= policy.max_doublings; ++doubling) {
      children.clear();
      double child_mass = 0;
      // Maximal strict subcubes exceeding a threshold: walk down, stop at
      // the first hit on each branch.
      std::vector<CubeKey> frontier;
      for (int c : top.children) frontier.push_back(CubeKey{key.k - 1, c});
      while (!frontier.empty()) {
        const CubeKey ck = frontier.back();
        frontier.pop_back();
        const Cube& q = system.cube(ck.k, ck.id);
        bool selected = avg(q) > a * base;
        if (!selected && functional != nullptr) {
          selected = functional->eval(system, q, top) > b * base;
        }
        if (selected) {
          children.push_back(ck);
          child_mass += q.measure;
        } else if (ck.k > system.k_min()) {
          for (int c : q.children) frontier.push_back(CubeKey{ck.k - 1, c});
        }
      }
      if (child_mass <= 0.5 * top.measure) break;
      a *= 2;
      b *= 2;
    }
    family.avg_threshold = std::max(family.avg_threshold, a);
    family.func_threshold = std::max(family.func_threshold, b);
    for (const CubeKey& c : children) pending.push_back(c);
  }

  std::sort(family.cubes.begin(), family.cubes.end());
  family.carleson = carleson_constant(system, family.cubes);
  const WitnessResult wit = sparse_witness(system, family.cubes, 0.5);
  if (wit.ok) family.witnesses = wit.sets;
  return family;
}

DominationReport verify_domination(const Vec& lhs, const CubeSystem& system,
                                   const SparseFamily& family, const CVec& f,
                                   double exponent, double dilate) {
  const Vec rhs = sparse_operator(system, family, f, exponent, dilate);
  DominationReport rep;
  rep.ratios = Vec::Zero(lhs.size());
  for (int x = 0; x < lhs.size(); ++x) {
    if (rhs[x] > 0) {
      rep.ratios[x] = lhs[x] / rhs[x];
    } else if (lhs[x] > 0) {
      rep.ratios[x] = std::numeric_limits<double>::infinity();
      ++rep.violations;
    }
    rep.max_ratio = std::max(rep.max_ratio, rep.ratios[x]);
  }
  Vec sorted = rep.ratios;
  std::sort(sorted.begin(), sorted.end());
  const auto quantile = [&](double q) {
    const int idx = std::min<int>(static_cast<int>(q * sorted.size()),
                                  static_cast<int>(sorted.size()) - 1);
    return sorted[idx];
  };
  if (sorted.size() > 0) {
    rep.q50 = quantile(0.50);
    rep.q90 = quantile(0.90);
    rep.q99 = quantile(0.99);
  }
  return rep;
}

}  // namespace varcz
