#pragma once

#include <utility>
#include <vector>

#include "varcz/dyadic.hpp"
#include "varcz/types.hpp"

namespace varcz {

/// Per-cube means of one function over every scale of a system; the
/// backing store for conditional expectations evaluated many times.
class CubeAverages {
 public:
  CubeAverages(const CubeSystem& system, const CVec& f);

  Complex mean(int k, int cube_id) const {
    return means_[k - k_min_][cube_id];
  }
  /// E_k f at a point.
  Complex at(int k, int point) const {
    return means_[k - k_min_][system_->cube_id_of(k, point)];
  }
  const CubeSystem& system() const { return *system_; }

 private:
  const CubeSystem* system_;
  int k_min_;
  std::vector<std::vector<Complex>> means_;
};

/// Conditional expectation onto the scale-k partition: constant on each
/// cube, equal to the cube average.
CVec expectation(const CubeSystem& system, const CVec& f, int k);

/// Martingale difference E_k - E_{k+1}; requires both scales in range.
CVec difference(const CubeSystem& system, const CVec& f, int k);

/// Dyadic maximal function: max over cubes containing the point of the
/// cube average of |f|.
Vec dyadic_maximal(const CubeSystem& system, const CVec& f);

/// Greedy stopping scales for f at a point: l_0 = k_start, then repeatedly
/// the largest l < l_j with |E_l f(x) - E_{l_j} f(x)| > lambda / 8.
std::vector<int> greedy_stopping(const CubeAverages& avgs, int x,
                                 double lambda, int k_start);
std::vector<int> greedy_stopping(const CubeSystem& system, const CVec& f,
                                 int x, double lambda, int k_start);

/// Square sum of the increments of (E_{k(Qp)} - E_{k(Q)}) f(x) along the
/// greedy stopping scales; the subadditive jump majorant on nested pairs.
double martingale_jump_majorant(const CubeAverages& avgs, int x, double lambda,
                                const Cube& q_inner, const Cube& q_outer);
double martingale_jump_majorant(const CubeSystem& system, const CVec& f, int x,
                                double lambda, const Cube& q_inner,
                                const Cube& q_outer);

struct BadPart {
  int k = 0;        // scale of the cube
  int cube = -1;    // cube id
  CVec values;      // one value per cube member, in member order
};

struct CzDecomposition {
  CVec good;
  std::vector<BadPart> bad;
};

/// Calderon-Zygmund split at level lambda: bad cubes are the maximal
/// dyadic cubes with cube average of |f| above lambda; on them the good
/// part is the cube mean of f and the bad part carries f minus that mean.
CzDecomposition cz_decompose(const CubeSystem& system, const CVec& f,
                             double lambda);

/// Reassembles good + sum of bad parts (test utility).
CVec cz_reassemble(const CubeSystem& system, const CzDecomposition& dec);

}  // namespace varcz
