#include "varcz/variation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace varcz {

void Sample::validate() const {
  if (t.size() != a.size()) {
    throw std::invalid_argument("Sample: t and a must have equal length");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i - 1] < t[i])) {
      throw std::invalid_argument("Sample: parameters must strictly increase");
    }
  }
  for (const Complex& v : a) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("Sample: values must be finite");
    }
  }
}

namespace detail {

std::vector<int> extrema_indices(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> idx;
  if (n == 0) return idx;
  idx.push_back(0);
  // Collapse ties, keep turning points.
  int last = 0;
  int dir = 0;  // sign of the last nonzero increment
  for (int i = 1; i < n; ++i) {
    const double d = values[i] - values[last];
    if (d == 0) continue;
    const int s = d > 0 ? 1 : -1;
    if (dir != 0 && s != dir) idx.push_back(last);
    dir = s;
    last = i;
  }
  if (last != 0) idx.push_back(last);
  return idx;
}

double r_variation_plain(std::span<const Complex> values, double r) {
  const int n = static_cast<int>(values.size());
  if (n <= 1) return 0;
  std::vector<double> best(n, 0);  // best sum of |increment|^r ending at i
  double overall = 0;
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const double step = std::pow(std::abs(values[i] - values[j]), r);
      best[i] = std::max(best[i], best[j] + step);
    }
    overall = std::max(overall, best[i]);
  }
  return std::pow(overall, 1.0 / r);
}

namespace {

bool is_real(std::span<const Complex> values) {
  return std::all_of(values.begin(), values.end(),
                     [](const Complex& v) { return v.imag() == 0.0; });
}

double r_variation_real_reduced(std::span<const Complex> values, double r) {
  std::vector<double> re(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) re[i] = values[i].real();
  const std::vector<int> idx = extrema_indices(re);
  const int m = static_cast<int>(idx.size());
  if (m <= 1) return 0;
  std::vector<double> best(m, 0);
  double overall = 0;
  for (int i = 1; i < m; ++i) {
    for (int j = 0; j < i; ++j) {
      const double step = std::pow(std::abs(re[idx[i]] - re[idx[j]]), r);
      best[i] = std::max(best[i], best[j] + step);
    }
    overall = std::max(overall, best[i]);
  }
  return std::pow(overall, 1.0 / r);
}

}  // namespace
}  // namespace detail

double r_variation(std::span<const Complex> values, double r,
                   bool homogeneous) {
  if (!(r >= 1)) {
    throw std::invalid_argument("r_variation: r must be >= 1");
  }
  if (values.empty()) {
    throw std::invalid_argument("r_variation: empty sample");
  }
  if (values.size() > 20000) {
    throw std::invalid_argument("r_variation: sample longer than 20000");
  }
  double v = detail::is_real(values)
                 ? detail::r_variation_real_reduced(values, r)
                 : detail::r_variation_plain(values, r);
  if (!homogeneous) {
    double sup = 0;
    for (const Complex& a : values) sup = std::max(sup, std::abs(a));
    v += sup;
  }
  return v;
}

double r_variation(const Sample& sample, double r, bool homogeneous) {
  sample.validate();
  return r_variation(std::span<const Complex>(sample.a), r, homogeneous);
}

namespace {

/// Max segment tree over value positions; -1 marks an empty slot.
class MaxTree {
 public:
  explicit MaxTree(int n) : n_(n), tree_(2 * n, -1) {}

  void update(int pos, int value) {
    pos += n_;
    tree_[pos] = std::max(tree_[pos], value);
    for (pos /= 2; pos >= 1; pos /= 2) {
      tree_[pos] = std::max(tree_[2 * pos], tree_[2 * pos + 1]);
    }
  }

  int query(int lo, int hi) const {  // max over [lo, hi), -1 if empty
    int best = -1;
    for (lo += n_, hi += n_; lo < hi; lo /= 2, hi /= 2) {
      if (lo & 1) best = std::max(best, tree_[lo++]);
      if (hi & 1) best = std::max(best, tree_[--hi]);
    }
    return best;
  }

 private:
  int n_;
  std::vector<int> tree_;
};

/// Longest chain with all steps > lambda: N(i) = 1 + max N(j) over j > i
/// with |a_j - a_i| > lambda. Real case: the step condition splits into
/// a_j > a_i + lambda or a_j < a_i - lambda, so a value-indexed max tree
/// answers each transition in O(log n).
int jump_count_real(std::span<const Complex> values, double lambda) {
  const int n = static_cast<int>(values.size());
  std::vector<double> sorted(n);
  for (int i = 0; i < n; ++i) sorted[i] = values[i].real();
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const int m = static_cast<int>(sorted.size());
  MaxTree tree(m);
  int best = 0;
  for (int i = n - 1; i >= 0; --i) {
    const double v = values[i].real();
    const int above = static_cast<int>(
        std::upper_bound(sorted.begin(), sorted.end(), v + lambda) -
        sorted.begin());
    const int below = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), v - lambda) -
        sorted.begin());
    int reach = std::max(tree.query(0, below), tree.query(above, m));
    const int ni = reach < 0 ? 0 : 1 + reach;
    best = std::max(best, ni);
    const int pos = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    tree.update(pos, ni);
  }
  return best;
}

int jump_count_complex(std::span<const Complex> values, double lambda) {
  const int n = static_cast<int>(values.size());
  std::vector<int> chain(n, 0);
  int best = 0;
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[j] - values[i]) > lambda) {
        chain[i] = std::max(chain[i], 1 + chain[j]);
      }
    }
    best = std::max(best, chain[i]);
  }
  return best;
}

}  // namespace

int jump_count(std::span<const Complex> values, double lambda) {
  if (!(lambda > 0)) {
    throw std::invalid_argument("jump_count: lambda must be positive");
  }
  const int n = static_cast<int>(values.size());
  if (n <= 1) return 0;
  return detail::is_real(values) ? jump_count_real(values, lambda)
                                 : jump_count_complex(values, lambda);
}

int jump_count(const Sample& sample, double lambda) {
  sample.validate();
  return jump_count(std::span<const Complex>(sample.a), lambda);
}

std::pair<double, int> oracle_variation_jump(std::span<const Complex> values,
                                             double r, double lambda) {
  const int n = static_cast<int>(values.size());
  if (n > 20) {
    throw std::invalid_argument("oracle_variation_jump: length > 20");
  }
  double best_var = 0;
  int best_jumps = 0;
  // Every nonempty increasing subsequence, encoded as a bit mask.
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double sum = 0;
    int jumps = 0;
    bool all_jumps = true;
    int prev = -1;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) continue;
      if (prev >= 0) {
        const double step = std::abs(values[i] - values[prev]);
        sum += std::pow(step, r);
        if (step > lambda) {
          ++jumps;
        } else {
          all_jumps = false;
        }
      }
      prev = i;
    }
    best_var = std::max(best_var, sum);
    if (all_jumps) best_jumps = std::max(best_jumps, jumps);
  }
  return {std::pow(best_var, 1.0 / r), best_jumps};
}

std::pair<double, int> oracle_variation_jump(const Sample& sample, double r,
                                             double lambda) {
  sample.validate();
  return oracle_variation_jump(std::span<const Complex>(sample.a), r, lambda);
}

}  // namespace varcz
