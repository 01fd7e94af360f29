#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varcz/dyadic.hpp"
#include "varcz/types.hpp"

namespace varcz {

struct CubeKey {
  int k = 0;
  int id = -1;
  bool operator==(const CubeKey&) const = default;
  bool operator<(const CubeKey& o) const {
    return k != o.k ? k < o.k : id < o.id;
  }
};

/// A cube collection with its sparseness certificate.
struct SparseFamily {
  std::vector<CubeKey> cubes;
  double eta_target = 0.5;
  double carleson = 0;                      // computed on construction
  std::vector<std::vector<int>> witnesses;  // E(Q) point ids, aligned to cubes
  double avg_threshold = 0;                 // final stopping factors used
  double func_threshold = 0;
};

/// Exact Carleson constant: max over all cubes Q of the system of
/// sum_{Q' in family, Q' within Q} mu(Q') / mu(Q), one bottom-up pass.
double carleson_constant(const CubeSystem& system,
                         std::span<const CubeKey> family);

struct WitnessResult {
  bool ok = false;
  std::vector<std::vector<int>> sets;  // aligned to the family order
  CubeKey blocking;                    // set when ok is false
  double worst_fraction = 1;           // min over cubes of mu(E(Q))/mu(Q)
};

/// Greedy witness construction from the finest cubes upward: each cube
/// claims the not-yet-claimed mass of its own points. Succeeds if every
/// cube keeps at least eta of its measure; failure reports the blocker.
WitnessResult sparse_witness(const CubeSystem& system,
                             std::span<const CubeKey> family, double eta);

/// Witness with fractional mass-sharing of atoms: from finest upward each
/// cube claims only eta mu(Q) of the remaining mass of its points. On
/// atomic spaces this realizes the Carleson-to-sparse converse (a
/// Lambda-Carleson family always passes at eta = 1/(2 Lambda)) where
/// disjoint whole-point sets cannot.
bool fractional_witness_exists(const CubeSystem& system,
                               std::span<const CubeKey> family, double eta);

/// Sparse operator (sum_{Q} 1_Q <|f|>_{CQ}^r)^{1/r} with CQ the ball
/// B(c_Q, dilate * C1 * kappa^k(Q)).
Vec sparse_operator(const CubeSystem& system, const SparseFamily& family,
                    const CVec& f, double exponent, double dilate = 1);

/// Nonnegative functional on nested cube pairs with declared regularity.
struct PairFunctional {
  std::function<double(const CubeSystem&, const Cube&, const Cube&)> eval;
  double subadditivity_r = 1;
  std::string name;
};

/// N_Q F(x) = sup over cubes Q' with x in Q' inside Q of F(Q', Q); the
/// empty supremum is 0. Without a scope cube the sup runs over all nested
/// pairs containing x.
Vec nontangential_n(const CubeSystem& system, const PairFunctional& f,
                    std::optional<CubeKey> scope = std::nullopt);

struct StoppingPolicy {
  double avg_factor = 4;   // initial A
  double func_factor = 4;  // initial B
  // CQ dilation for the averages. The window functionals read f up to
  // distance kappa^k(Q) beyond Q', so CQ must reach past the cube edge:
  // dilate * C1 >= C1 + kappa.
  double dilate = 3;
  int max_doublings = 60;
  int spot_checks = 64;    // randomized monotonicity/subadditivity probes
};

struct SpotCheckReport {
  int monotonicity_violations = 0;
  int subadditivity_violations = 0;
  double worst_monotonicity = 0;  // largest F(Q'',Q') / F(Q''',Q) excess
  int probes = 0;
};

/// Randomized probe of the declared monotonicity and subadditivity of F
/// on nested chains through random points.
SpotCheckReport spot_check_functional(const CubeSystem& system,
                                      const PairFunctional& f,
                                      int probes = 64, std::uint64_t seed = 7);

/// Stopping-time construction: from each selected cube, children are the
/// maximal strict subcubes whose dilated average of |f| or whose pair
/// functional against the parent exceeds the thresholds; (A, B) double
/// until the children cover at most half the cube. The output is
/// 1/2-sparse by construction and carries its Carleson constant.
SparseFamily build_sparse_family(const CubeSystem& system,
                                 const PairFunctional* functional,
                                 const CVec& f, int k0,
                                 const StoppingPolicy& policy = {});

struct DominationReport {
  double max_ratio = 0;
  double q50 = 0, q90 = 0, q99 = 0;
  int violations = 0;  // points with lhs > 0 but A_S f = 0
  Vec ratios;
};

/// Pointwise ratio lhs(x) / A_S f(x) with 0/0 treated as 0.
DominationReport verify_domination(const Vec& lhs, const CubeSystem& system,
                                   const SparseFamily& family, const CVec& f,
                                   double exponent, double dilate = 1);

}  // namespace varcz
