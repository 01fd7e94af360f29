#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "varcz/space.hpp"
#include "varcz/types.hpp"

namespace varcz {

/// One dyadic cube. Identity is (scale, member set): the same point set at
/// another scale is a different cube. For shifted Euclidean systems the
/// continuum box [lo, hi) is kept alongside the member list.
struct Cube {
  int k = 0;        // dyadic scale; the cube lives at size kappa^k
  int id = 0;       // index within its scale
  int center = 0;   // point id
  int parent = -1;  // cube id at scale k+1, -1 at the top scale
  std::vector<int> children;  // cube ids at scale k-1
  std::vector<int> members;   // point ids, ascending
  double measure = 0;
  double diameter = 0;        // max pairwise rho over members
  bool diameter_exact = true;
  bool has_box = false;
  std::array<double, 2> box_lo{{0, 0}};
  std::array<double, 2> box_hi{{0, 0}};
};

struct SmallBoundaryCertificate {
  double eta = 0;
  double c3 = 0;
};

/// Scale-indexed nested partitions of a Space. Scales run over integers
/// k_min..k_max; every scale partitions the full point set and every cube
/// has exactly one parent at the next scale. Immutable after construction.
class CubeSystem {
 public:
  CubeSystem(std::shared_ptr<const Space> space, double kappa, int k_min,
             std::vector<std::vector<Cube>> cubes_by_scale,
             std::vector<IVec> point_to_cube, double a0, double c1,
             int shift_index = -1);

  const Space& space() const { return *space_; }
  std::shared_ptr<const Space> space_ptr() const { return space_; }
  double kappa() const { return kappa_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_min_ + num_scales() - 1; }
  int num_scales() const { return static_cast<int>(cubes_.size()); }
  int shift_index() const { return shift_index_; }

  const std::vector<Cube>& cubes_at(int k) const { return cubes_[index(k)]; }
  const Cube& cube(int k, int id) const { return cubes_[index(k)][id]; }
  int cube_id_of(int k, int point) const {
    return point_to_cube_[index(k)][point];
  }
  const Cube& cube_of(int k, int point) const {
    return cube(k, cube_id_of(k, point));
  }
  int total_cubes() const;

  double a0() const { return a0_; }
  double c1() const { return c1_; }

  const std::optional<SmallBoundaryCertificate>& boundary_certificate() const {
    return boundary_;
  }
  void set_boundary_certificate(const SmallBoundaryCertificate& c) {
    boundary_ = c;
  }

 private:
  int index(int k) const;

  std::shared_ptr<const Space> space_;
  double kappa_;
  int k_min_;
  std::vector<std::vector<Cube>> cubes_;   // [k - k_min][id]
  std::vector<IVec> point_to_cube_;        // [k - k_min][point]
  double a0_;
  double c1_;
  int shift_index_;  // alpha index for shifted grids, -1 otherwise
  std::optional<SmallBoundaryCertificate> boundary_;
};

/// The 3^dim shifted dyadic systems on a Euclidean grid: at scale k the
/// cube of index m along an axis is 2^k [m + (-1)^k alpha/3, m+1 + ...).
/// Systems are indexed by alpha in {0,1,2}^dim.
std::vector<CubeSystem> build_shifted_grids(std::shared_ptr<const Space> space,
                                            int k_min, int k_max);

/// Greedy-net dyadic construction on an arbitrary Space: nested maximal
/// kappa^k-separated nets (seeded order), global Voronoi cells at the
/// finest scale, and coarser cubes agglomerated whole from their centers'
/// nearest coarser net point. All four dyadic axioms hold exactly on the
/// finite point set; a0 and C1 are measured from the result.
CubeSystem build_christ_cubes(std::shared_ptr<const Space> space, double kappa,
                              int k_min, int k_max, std::uint64_t seed);

struct AxiomReport {
  bool coverage = false;      // every point carried by some cube, per scale
  bool disjointness = false;  // cubes of one scale do not overlap
  bool nesting = false;       // unique coarser cube containing each cube
  bool ball_sandwich = false; // B(c, a0 k^k) cap X within Q within B(c, C1 k^k)
  std::string witness;        // first failure, empty when all pass
  bool pass() const { return coverage && disjointness && nesting && ball_sandwich; }
};

AxiomReport verify_cube_axioms(const CubeSystem& system);

struct BallCover {
  int system = -1;
  int k = 0;
  int cube = -1;
  double ratio = 0;  // diam(Q) / r
};

struct AdjacencyReport {
  double worst_ratio = 0;    // C3 over all queries
  int covering_system = 0;   // system index attaining the worst ratio
  std::vector<BallCover> covers;
};

/// For each ball finds the smallest cube over the given systems that
/// contains it; throws when a ball is not contained in any top-scale cube.
AdjacencyReport check_adjacency(std::span<const CubeSystem> systems,
                                std::span<const BallQuery> queries);

struct BoundaryRow {
  double tau = 0;
  double ratio = 0;  // mu(boundary strip) / mu(Q)
};

struct BoundaryReport {
  double fitted_eta = 0;
  double fitted_c3 = 0;
  int targets = 0;
  std::vector<BoundaryRow> rows;  // pooled mean ratio per tau
};

/// Collar measure of cubes: for each sampled cube Q and each tau, the
/// measure of points of Q within tau*diam(Q) of the complement plus
/// points outside within the same distance of Q, relative to mu(Q).
/// Fits ratio ~ C3 * tau^eta across the tau range.
BoundaryReport measure_small_boundary(const CubeSystem& system,
                                      std::span<const double> taus,
                                      int max_cubes_per_scale = 16);

/// Same collar measurement for metric balls.
BoundaryReport measure_small_boundary_balls(const Space& space,
                                            std::span<const BallQuery> balls,
                                            std::span<const double> taus);

}  // namespace varcz
