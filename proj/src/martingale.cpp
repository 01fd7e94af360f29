#include "varcz/martingale.hpp"

#include <cmath>
#include <stdexcept>

namespace varcz {

CubeAverages::CubeAverages(const CubeSystem& system, const CVec& f)
    : system_(&system), k_min_(system.k_min()) {
  const Space& space = system.space();
  means_.resize(system.num_scales());
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    auto& level = means_[k - k_min_];
    level.resize(system.cubes_at(k).size());
    for (const Cube& q : system.cubes_at(k)) {
      Complex sum = 0;
      for (int m : q.members) sum += f[m] * space.weight(m);
      level[q.id] = sum / q.measure;
    }
  }
}

CVec expectation(const CubeSystem& system, const CVec& f, int k) {
  const Space& space = system.space();
  CVec out(space.size());
  for (const Cube& q : system.cubes_at(k)) {
    Complex sum = 0;
    for (int m : q.members) sum += f[m] * space.weight(m);
    const Complex mean = sum / q.measure;
    for (int m : q.members) out[m] = mean;
  }
  return out;
}

CVec difference(const CubeSystem& system, const CVec& f, int k) {
  return expectation(system, f, k) - expectation(system, f, k + 1);
}

Vec dyadic_maximal(const CubeSystem& system, const CVec& f) {
  const Space& space = system.space();
  Vec out = Vec::Zero(space.size());
  for (int k = system.k_min(); k <= system.k_max(); ++k) {
    for (const Cube& q : system.cubes_at(k)) {
      double sum = 0;
      for (int m : q.members) sum += std::abs(f[m]) * space.weight(m);
      const double mean = sum / q.measure;
      for (int m : q.members) out[m] = std::max(out[m], mean);
    }
  }
  return out;
}

std::vector<int> greedy_stopping(const CubeAverages& avgs, int x,
                                 double lambda, int k_start) {
  const CubeSystem& system = avgs.system();
  if (k_start < system.k_min() || k_start > system.k_max()) {
    throw std::out_of_range("greedy_stopping: k_start outside scale range");
  }
  std::vector<int> stops{k_start};
  int current = k_start;
  const double threshold = lambda / 8;
  while (true) {
    int next = -1;
    const Complex base = avgs.at(current, x);
    for (int l = current - 1; l >= system.k_min(); --l) {
      if (std::abs(avgs.at(l, x) - base) > threshold) {
        next = l;
        break;  // the largest such scale below current
      }
    }
    if (next < 0) break;
    stops.push_back(next);
    current = next;
  }
  return stops;
}

std::vector<int> greedy_stopping(const CubeSystem& system, const CVec& f,
                                 int x, double lambda, int k_start) {
  return greedy_stopping(CubeAverages(system, f), x, lambda, k_start);
}

double martingale_jump_majorant(const CubeAverages& avgs, int x, double lambda,
                                const Cube& q_inner, const Cube& q_outer) {
  const CubeSystem& system = avgs.system();
  const int k0 = q_inner.k, k1 = q_outer.k;
  if (k0 > k1) {
    throw std::invalid_argument("martingale_jump_majorant: inner cube coarser");
  }
  if (system.cube_id_of(k0, x) != q_inner.id ||
      system.cube_id_of(k1, x) != q_outer.id) {
    throw std::invalid_argument(
        "martingale_jump_majorant: point outside the nested pair");
  }
  if (k0 == k1) return 0;
  // g = (E_{k0} - E_{k1}) f; E_l g(x) = E_{max(l,k0)} f(x) - E_{max(l,k1)} f(x).
  const auto eg = [&](int l) {
    return avgs.at(std::max(l, k0), x) - avgs.at(std::max(l, k1), x);
  };
  const std::vector<int> stops =
      greedy_stopping(avgs, x, lambda, system.k_max());
  double sq = 0;
  for (std::size_t j = 0; j + 1 < stops.size(); ++j) {
    const Complex d = eg(stops[j + 1]) - eg(stops[j]);
    sq += std::norm(d);
  }
  return std::sqrt(sq);
}

double martingale_jump_majorant(const CubeSystem& system, const CVec& f, int x,
                                double lambda, const Cube& q_inner,
                                const Cube& q_outer) {
  return martingale_jump_majorant(CubeAverages(system, f), x, lambda, q_inner,
                                  q_outer);
}

CzDecomposition cz_decompose(const CubeSystem& system, const CVec& f,
                             double lambda) {
  if (!(lambda > 0)) {
    throw std::invalid_argument("cz_decompose: lambda must be positive");
  }
  const Space& space = system.space();
  CubeAverages abs_avgs(system, f.array().abs().matrix().cast<Complex>());

  CzDecomposition dec;
  dec.good = f;
  // Walk down from the top scale; a cube whose |f|-average exceeds lambda
  // is selected and its subtree skipped, so selections are maximal.
  std::vector<std::pair<int, int>> stack;  // (k, cube id)
  for (const Cube& q : system.cubes_at(system.k_max())) {
    stack.push_back({system.k_max(), q.id});
  }
  while (!stack.empty()) {
    const auto [k, id] = stack.back();
    stack.pop_back();
    const Cube& q = system.cube(k, id);
    if (abs_avgs.mean(k, id).real() > lambda) {
      Complex sum = 0;
      for (int m : q.members) sum += f[m] * space.weight(m);
      const Complex mean = sum / q.measure;
      BadPart part;
      part.k = k;
      part.cube = id;
      part.values.resize(q.members.size());
      for (std::size_t i = 0; i < q.members.size(); ++i) {
        part.values[i] = f[q.members[i]] - mean;
        dec.good[q.members[i]] = mean;
      }
      dec.bad.push_back(std::move(part));
      continue;
    }
    if (k > system.k_min()) {
      for (int child : q.children) stack.push_back({k - 1, child});
    }
  }
  return dec;
}

CVec cz_reassemble(const CubeSystem& system, const CzDecomposition& dec) {
  CVec out = dec.good;
  for (const BadPart& part : dec.bad) {
    const Cube& q = system.cube(part.k, part.cube);
    for (std::size_t i = 0; i < q.members.size(); ++i) {
      out[q.members[i]] += part.values[i];
    }
  }
  return out;
}

}  // namespace varcz
