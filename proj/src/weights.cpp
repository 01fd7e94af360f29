#include "varcz/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varcz {

Vec make_weight(const Space& space, const std::string& spec) {
  const int n = space.size();
  if (spec == "const") return Vec::Ones(n);
  if (spec.rfind("power:", 0) == 0) {
    const double a = std::stod(spec.substr(6));
    // Centered power weight, floored at one cell to stay locally
    // integrable on the lattice.
    Vec center(space.coords().cols());
    for (int c = 0; c < center.size(); ++c) {
      center[c] = space.coords().col(c).mean();
    }
    Vec w(n);
    for (int i = 0; i < n; ++i) {
      double r2 = 0;
      for (int c = 0; c < center.size(); ++c) {
        const double d = space.coords()(i, c) - center[c];
        r2 += d * d;
      }
      w[i] = std::pow(std::max(std::sqrt(r2), space.spacing()), a);
    }
    return w;
  }
  if (spec.rfind("checkerboard:", 0) == 0) {
    const double h = std::stod(spec.substr(13));
    if (!(h > 0)) {
      throw std::invalid_argument("checkerboard weight needs h > 0");
    }
    Vec w(n);
    for (int i = 0; i < n; ++i) {
      long long parity = 0;
      for (int c = 0; c < space.coords().cols(); ++c) {
        parity += llround(space.coords()(i, c) / space.spacing());
      }
      w[i] = (parity % 2 == 0) ? 1.0 : h;
    }
    return w;
  }
  throw std::invalid_argument("unknown weight: " + spec);
}

namespace {

void check_weight(const Vec& w) {
  for (int i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0)) {
      throw std::invalid_argument("weight values must be strictly positive");
    }
  }
}

}  // namespace

double two_weight_characteristic(const CubeSystem& system, const Vec& w,
                                 const Vec& sigma, double p) {
  if (!(p > 1)) {
    throw std::invalid_argument("A_p characteristic needs p > 1");
  }
  check_weight(w);
  check_weight(sigma);
  const Space& space = system.space();
  double best = 0;
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    for (const Cube& q : system.cubes_at(k)) {
      double ws = 0, ss = 0;
      for (int m : q.members) {
        ws += w[m] * space.weight(m);
        ss += sigma[m] * space.weight(m);
      }
      best = std::max(best, (ws / q.measure) *
                                std::pow(ss / q.measure, p - 1));
    }
  }
  return best;
}

double ap_characteristic(const CubeSystem& system, const Vec& w, double p) {
  if (!(p > 1)) {
    throw std::invalid_argument("A_p characteristic needs p > 1");
  }
  const double pprime = p / (p - 1);
  const Vec sigma = w.array().pow(1.0 - pprime);
  return two_weight_characteristic(system, w, sigma, p);
}

double ainfty_characteristic(const CubeSystem& system, const Vec& w) {
  check_weight(w);
  const Space& space = system.space();

  // Cube sums of w mu, by scale.
  std::vector<std::vector<double>> wsum(system.num_scales());
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    auto& level = wsum[k - system.k_min()];
    level.resize(system.cubes_at(k).size());
    for (const Cube& q : system.cubes_at(k)) {
      double s = 0;
      for (int m : q.members) s += w[m] * space.weight(m);
      level[q.id] = s;
    }
  }

  double best = 0;
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    for (const Cube& q : system.cubes_at(k)) {
      // M_D(w 1_Q)(x) over subcubes of Q: running max of <w> down the
      // chain from Q to each member's finest cube.
      double integral = 0;
      // For every member, walk its chain from scale k down; the chain
      // average at each scale comes from the precomputed sums.
      for (int m : q.members) {
        double mx = 0;
        for (int l = system.k_min(); l <= k; ++l) {
          const Cube& c = system.cube_of(l, m);
          mx = std::max(mx, wsum[l - system.k_min()][c.id] / c.measure);
        }
        integral += mx * space.weight(m);
      }
      best = std::max(best, integral / wsum[k - system.k_min()][q.id]);
    }
  }
  return best;
}

double weighted_norm(const Space& space, const CVec& f, const Vec& w,
                     double p) {
  if (!(p >= 1)) {
    throw std::invalid_argument("weighted_norm: p must be >= 1");
  }
  check_weight(w);
  double s = 0;
  for (int i = 0; i < f.size(); ++i) {
    s += std::pow(std::abs(f[i]), p) * w[i] * space.weight(i);
  }
  return std::pow(s, 1.0 / p);
}

namespace {

double weak_norm_impl(const Space& space, const CVec& f, double p,
                      const Vec* w) {
  const int n = space.size();
  std::vector<std::pair<double, double>> levels(n);  // (|f|, weighted mass)
  for (int i = 0; i < n; ++i) {
    levels[i] = {std::abs(f[i]), (w ? (*w)[i] : 1.0) * space.weight(i)};
  }
  std::sort(levels.begin(), levels.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  // sup over lambda of lambda mu{|f| > lambda}^{1/p} is attained with
  // lambda tending to a value v of |f| from below, where the level set
  // mass is mu{|f| >= v}.
  double best = 0;
  double mass = 0;
  std::size_t i = 0;
  while (i < levels.size()) {
    const double v = levels[i].first;
    while (i < levels.size() && levels[i].first == v) {
      mass += levels[i].second;
      ++i;
    }
    if (v > 0) best = std::max(best, v * std::pow(mass, 1.0 / p));
  }
  return best;
}

}  // namespace

double weak_lp_quasinorm(const Space& space, const CVec& f, double p) {
  if (!(p > 0)) {
    throw std::invalid_argument("weak_lp_quasinorm: p must be positive");
  }
  return weak_norm_impl(space, f, p, nullptr);
}

double weak_lp_quasinorm(const Space& space, const CVec& f, double p,
                         const Vec& w) {
  if (!(p > 0)) {
    throw std::invalid_argument("weak_lp_quasinorm: p must be positive");
  }
  check_weight(w);
  return weak_norm_impl(space, f, p, &w);
}

SubadditivityReport check_weak_lp_subadditivity(const Space& space,
                                                std::span<const Vec> gs,
                                                double p) {
  if (!(p > 0 && p < 1)) {
    throw std::invalid_argument(
        "check_weak_lp_subadditivity: p must be in (0, 1)");
  }
  SubadditivityReport rep;
  rep.bound = std::pow(2.0, p) * (1 + 1 / (1 - p));
  Vec total = Vec::Zero(space.size());
  for (const Vec& g : gs) {
    for (int i = 0; i < g.size(); ++i) {
      if (g[i] < 0) {
        throw std::invalid_argument(
            "check_weak_lp_subadditivity: g_j must be nonnegative");
      }
    }
    total += g;
    rep.rhs_sum +=
        std::pow(weak_lp_quasinorm(space, g.cast<Complex>(), p), p);
  }
  rep.lhs = std::pow(weak_lp_quasinorm(space, total.cast<Complex>(), p), p);
  rep.ratio = rep.rhs_sum > 0 ? rep.lhs / rep.rhs_sum : 0;
  rep.pass = rep.lhs <= rep.bound * rep.rhs_sum * (1 + 1e-12) ||
             (rep.lhs == 0 && rep.rhs_sum == 0);
  return rep;
}

}  // namespace varcz
