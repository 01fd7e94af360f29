#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "varcz/operators.hpp"
#include "varcz/serialize.hpp"
#include "varcz/sparse.hpp"
#include "varcz/types.hpp"

namespace varcz {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed experiment description; see parse_config for the JSON schema.
struct ExperimentConfig {
  std::string experiment;            // domination | weighted | weak11
  std::string space_kind = "euclidean";
  int dimension = 1;
  double spacing = 1.0;
  std::vector<int> sides;            // one grid per entry
  std::string functional = "var-av"; // var-av | var-tsi | jump-av
  double r = 3.0;
  std::vector<double> r_sweep;
  int lambda_ladder = 7;             // lambda = 2^-l, l = 0 .. ladder-1
  std::string kernel = "hilbert";
  std::string weight = "power";
  std::vector<double> weight_sweep{0.0, 0.25, 0.5, 0.75};
  double p = 2.0;
  int functions = 8;
  std::uint64_t seed = 1;
  double exponent = 1.0;             // sparse operator exponent
  StoppingPolicy policy;
  double stability_threshold = 0;   // 0 = report only
  double ratio_band_threshold = 0;
  double growth_threshold = 0;
  std::int64_t point_budget = 100000;
  std::int64_t kernel_eval_budget = 100000000;
  Json raw;                          // canonical config for hashing
};

ExperimentConfig parse_config(const Json& j);

/// Per-point exact profiles of t -> A_t f(x) (or T_t f(x)) with memoized
/// window variation and jump counts; the backing store for the pair
/// functionals and the lhs fields.
class ProfileCache {
 public:
  ProfileCache(const Space& space, const CVec& f,
               const Kernel* kernel = nullptr);

  const OperatorProfile& profile(int x) const;
  /// Homogeneous r-variation of the profile over t in [lo, hi].
  double window_variation(int x, double lo, double hi, double r) const;
  /// Jump count of the profile over t in [lo, hi].
  int window_jumps(int x, double lo, double hi, double lambda) const;
  /// Full-range homogeneous r-variation at x.
  double full_variation(int x, double r) const;
  /// Full-range jump count at x.
  int full_jumps(int x, double lambda) const;
  const Space& space() const { return space_; }

 private:
  const Space& space_;
  CVec f_;
  const Kernel* kernel_;
  mutable std::vector<std::unique_ptr<OperatorProfile>> profiles_;
  mutable std::map<std::tuple<int, double, double, double>, double> var_memo_;
  mutable std::map<std::tuple<int, double, double, double>, int> jump_memo_;
};

/// F(Q', Q) = sup over x' in Q' of the homogeneous r-variation of the
/// cached profile over [kappa^k(Q'), kappa^k(Q)].
PairFunctional make_variation_functional(std::shared_ptr<ProfileCache> cache,
                                         double r);

/// F(Q', Q) = sup over x' in Q' of lambda sqrt(window jump count).
PairFunctional make_jump_functional(std::shared_ptr<ProfileCache> cache,
                                    double lambda);

/// Subadditive jump majorant: square sum of per-scale non-tangential short
/// variations along the chain plus the greedy-stopping martingale term.
/// The second form reuses precomputed S_k fields (they do not depend on
/// lambda), for ladder sweeps.
PairFunctional make_jump_majorant_functional(const Space& space,
                                             const CubeSystem& system,
                                             const CVec& f, double lambda);
PairFunctional make_jump_majorant_functional(const Space& space,
                                             const CubeSystem& system,
                                             const CVec& f, double lambda,
                                             const std::vector<Vec>& sk_fields);

struct ExperimentResult {
  Json report;
  bool pass = false;
};

ExperimentResult run_domination_experiment(const ExperimentConfig& config,
                                           const std::filesystem::path& outdir);
ExperimentResult run_weighted_experiment(const ExperimentConfig& config,
                                         const std::filesystem::path& outdir);
ExperimentResult run_weak11_experiment(const ExperimentConfig& config,
                                       const std::filesystem::path& outdir);

/// Dispatch on config.experiment.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::filesystem::path& outdir);

/// Builders shared by the experiments and the CLI.
std::shared_ptr<const Space> build_space_from_config(
    const ExperimentConfig& config, int side);
CubeSystem build_system_for_space(std::shared_ptr<const Space> space,
                                  std::uint64_t seed);
CVec make_test_function(const Space& space, const std::string& shape,
                        std::uint64_t seed);

}  // namespace varcz
