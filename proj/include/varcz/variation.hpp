#pragma once

#include <span>
#include <utility>
#include <vector>

#include "varcz/types.hpp"

namespace varcz {

/// A finite family (a_t) over strictly increasing parameters t.
struct Sample {
  std::vector<double> t;
  std::vector<Complex> a;

  void validate() const;
};

/// Homogeneous r-variation seminorm: sup over increasing subsequences of
/// (sum |a_{t_j} - a_{t_{j-1}}|^r)^{1/r}, exact by dynamic programming.
/// Inhomogeneous mode adds sup_t |a_t|. Requires r >= 1.
double r_variation(std::span<const Complex> values, double r,
                   bool homogeneous = true);
double r_variation(const Sample& sample, double r, bool homogeneous = true);

/// Lambda-jump counting function: largest J such that some increasing
/// subsequence has |a_{s_{j+1}} - a_{s_j}| > lambda (strict) for J steps.
/// Exact: memoized earliest-next greedy, maximized over the start index.
int jump_count(std::span<const Complex> values, double lambda);
int jump_count(const Sample& sample, double lambda);

/// Exhaustive-subsequence oracle (independent of the DP/greedy paths).
/// Enumerates every increasing subsequence; length capped at 20.
std::pair<double, int> oracle_variation_jump(std::span<const Complex> values,
                                             double r, double lambda);
std::pair<double, int> oracle_variation_jump(const Sample& sample, double r,
                                             double lambda);

namespace detail {
/// Indices of the endpoints and local extrema of a real-valued profile;
/// an optimal variation subsequence only uses these.
std::vector<int> extrema_indices(std::span<const double> values);
/// Plain O(n^2) endpoint DP, kept as a cross-check for the reduced path.
double r_variation_plain(std::span<const Complex> values, double r);
}  // namespace detail

}  // namespace varcz
