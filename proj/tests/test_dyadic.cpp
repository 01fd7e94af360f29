#include <doctest.h>

#include <cmath>
#include <memory>

#include "varcz/dyadic.hpp"
#include "varcz/random.hpp"
#include "varcz/serialize.hpp"

using namespace varcz;

namespace {

std::shared_ptr<const Space> grid1d(int n, double spacing = 1.0) {
  return std::make_shared<Space>(Space::euclidean_grid(1, n, spacing));
}

}  // namespace

TEST_CASE("shifted grid boxes follow the shift formula") {
  // spacing 1/4 so that scales -1 and -2 are present.
  auto space = std::make_shared<Space>(Space::euclidean_grid(1, 16, 0.25));
  auto systems = build_shifted_grids(space, -2, 2);
  REQUIRE(systems.size() == 3);

  // alpha = 0, scale 0: plain unit intervals [m, m+1).
  {
    const CubeSystem& sys = systems[0];
    const Cube& q = sys.cube_of(0, 0);  // point at coordinate 0
    CHECK(q.box_lo[0] == doctest::Approx(0.0));
    CHECK(q.box_hi[0] == doctest::Approx(1.0));
  }
  // alpha = 1, scale -1 (side 1/2): [m/2 - 1/6, m/2 + 1/3).
  {
    const CubeSystem& sys = systems[1];
    const Cube& q = sys.cube_of(-1, 0);
    CHECK(q.box_lo[0] == doctest::Approx(-1.0 / 6.0));
    CHECK(q.box_hi[0] == doctest::Approx(1.0 / 3.0));
  }
  // alpha = 1, scale -2 (side 1/4): the shift sign flips,
  // [m/4 + 1/12, m/4 + 1/3).
  {
    const CubeSystem& sys = systems[1];
    const Cube& q = sys.cube_of(-2, 0);
    CHECK(q.box_lo[0] == doctest::Approx(1.0 / 12.0 - 0.25));
    CHECK(q.box_hi[0] == doctest::Approx(1.0 / 12.0));
  }

  // Points sit inside their cube's box at every scale.
  for (const CubeSystem& sys : systems) {
    for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
      for (int p = 0; p < space->size(); ++p) {
        const Cube& q = sys.cube_of(k, p);
        const double x = space->coords()(p, 0);
        CHECK(q.box_lo[0] <= x);
        CHECK(x < q.box_hi[0]);
      }
    }
  }
}

TEST_CASE("shifted grids satisfy the dyadic axioms") {
  auto space = grid1d(128);
  for (const CubeSystem& sys : build_shifted_grids(space, 0, 8)) {
    const AxiomReport rep = verify_cube_axioms(sys);
    CHECK(rep.pass());
    CHECK(rep.witness.empty());
  }
  auto flat = std::make_shared<Space>(Space::euclidean_grid(2, 12, 1.0));
  auto systems2d = build_shifted_grids(flat, 0, 5);
  REQUIRE(systems2d.size() == 9);
  for (const CubeSystem& sys : systems2d) {
    CHECK(verify_cube_axioms(sys).pass());
  }
}

TEST_CASE("partition exactness and nesting") {
  auto space = grid1d(200, 0.1);
  auto systems = build_shifted_grids(space, -3, 5);
  const CubeSystem& sys = systems[2];
  for (int k = sys.k_min(); k <= sys.k_max(); ++k) {
    double total = 0;
    for (const Cube& q : sys.cubes_at(k)) total += q.measure;
    CHECK(total == doctest::Approx(space->total_measure()).epsilon(1e-12));
  }
  // Every cube has exactly one ancestor at each coarser scale.
  for (int k = sys.k_min(); k < sys.k_max(); ++k) {
    for (const Cube& q : sys.cubes_at(k)) {
      for (int l = k + 1; l <= sys.k_max(); ++l) {
        const int anc = sys.cube_id_of(l, q.members.front());
        for (int m : q.members) CHECK(sys.cube_id_of(l, m) == anc);
      }
    }
  }
}

TEST_CASE("christ cubes on the 1D grid measure good constants") {
  auto space = grid1d(64);
  for (std::uint64_t seed : {1ull, 2ull}) {
    const CubeSystem sys = build_christ_cubes(space, 2.0, 0, 5, seed);
    const AxiomReport rep = verify_cube_axioms(sys);
    CHECK(rep.pass());
    const double a0_floor = 1.0 / (4.0 * space->quasi_triangle_constant());
    CHECK(sys.a0() >= a0_floor);
    CHECK(sys.c1() <= 4.0 * space->quasi_triangle_constant());
  }
}

TEST_CASE("christ cube preconditions") {
  auto space = grid1d(64);
  CHECK_THROWS_AS(build_christ_cubes(space, 2.0, 3, 2, 1),
                  std::invalid_argument);  // empty range
  CHECK_THROWS_AS(build_christ_cubes(space, 2.0, 0, 12, 1),
                  std::invalid_argument);  // kappa^k_max above diameter
  CHECK_THROWS_AS(build_christ_cubes(space, 2.0, -3, 5, 1),
                  std::invalid_argument);  // kappa^k_min below spacing
  // A single coarse scale still yields a valid (flat) system.
  auto tiny = grid1d(4);
  const CubeSystem flat = build_christ_cubes(tiny, 2.0, 1, 1, 1);
  CHECK(verify_cube_axioms(flat).pass());
}

TEST_CASE("injected defect is caught with a witness") {
  auto space = grid1d(32);
  auto systems = build_shifted_grids(space, 0, 5);
  Json j = cube_system_to_json(systems[0]);
  // Move one point into a different cube at one scale.
  auto& level = j["scales"][2]["point_to_cube"];
  const int old_cube = level[10];
  level[10] = old_cube == 0 ? 1 : 0;
  const CubeSystem broken = cube_system_from_json(space, j);
  const AxiomReport rep = verify_cube_axioms(broken);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("adjacency of three shifted 1D grids") {
  auto space = std::make_shared<Space>(
      Space::euclidean_grid(1, 1024, 1.0 / 256.0));
  auto systems = build_shifted_grids(space, -8, 2);

  Rng rng(99);
  std::vector<BallQuery> balls;
  const double r_lo = 4.0 / 256.0, r_hi = space->diameter() / 8;
  for (int i = 0; i < 10000; ++i) {
    balls.push_back(BallQuery{rng.uniform_int(0, space->size() - 1),
                              rng.uniform(r_lo, r_hi)});
  }
  const AdjacencyReport rep = check_adjacency(systems, balls);
  CHECK(rep.covers.size() == balls.size());
  CHECK(rep.worst_ratio <= 6.0);

  // A ball containing the whole grid cannot be covered at the top scale.
  const std::vector<BallQuery> huge{BallQuery{0, 100.0}};
  CHECK_THROWS_AS(check_adjacency(systems, huge), std::runtime_error);
}

TEST_CASE("adjacency covers a cube's own sandwich ball") {
  auto space = grid1d(256, 0.125);
  auto systems = build_shifted_grids(space, -3, 5);
  const CubeSystem& sys = systems[0];
  const Cube& q = sys.cube_of(0, 128);
  const std::vector<BallQuery> one{
      BallQuery{q.center, sys.a0() * std::pow(2.0, q.k) * 0.99}};
  const AdjacencyReport rep = check_adjacency(systems, one);
  CHECK(rep.covers[0].ratio <=
        2 * sys.c1() / sys.a0() * space->quasi_triangle_constant());
}

TEST_CASE("small boundary of an interval") {
  auto space = grid1d(1024, 1.0 / 256.0);
  // One ball of radius 100 cells around the middle.
  const std::vector<BallQuery> balls{BallQuery{512, 100.0 / 256.0}};
  const std::vector<double> taus{0.02, 0.05, 0.1, 0.2};
  const BoundaryReport rep =
      measure_small_boundary_balls(*space, balls, taus);
  REQUIRE(rep.targets == 1);
  // Both collar strips at each endpoint: ratio = 4 tau diam / (2r) = 0.4
  // at tau = 0.1, up to one cell.
  for (const BoundaryRow& row : rep.rows) {
    if (row.tau == 0.1) CHECK(row.ratio == doctest::Approx(0.4).epsilon(0.05));
  }
  CHECK(std::abs(rep.fitted_eta - 1.0) <= 0.15);

  // tau = 1: the whole set is boundary, plus the outer collar.
  const std::vector<double> tau1{1.0};
  const BoundaryReport rep1 =
      measure_small_boundary_balls(*space, balls, tau1);
  CHECK(rep1.rows[0].ratio >= 1.0);

  CHECK_THROWS_AS(
      measure_small_boundary_balls(*space, balls, std::vector<double>{}),
      std::invalid_argument);
}

TEST_CASE("small boundary of christ cubes on a 2D grid") {
  auto space = std::make_shared<Space>(Space::euclidean_grid(2, 24, 1.0));
  const CubeSystem sys = build_christ_cubes(space, 2.0, 0, 4, 5);
  const std::vector<double> taus{0.1, 0.2, 0.4};
  const BoundaryReport rep = measure_small_boundary(sys, taus, 8);
  CHECK(rep.targets > 0);
  CHECK(rep.fitted_eta > 0);
  CHECK(std::isfinite(rep.fitted_c3));
}

TEST_CASE("christ cubes on a small heisenberg lattice") {
  auto space = std::make_shared<Space>(Space::heisenberg_grid(4, 1.0));
  const CubeSystem sys = build_christ_cubes(space, 2.0, 0, 2, 11);
  CHECK(verify_cube_axioms(sys).pass());
  CHECK(sys.a0() > 0);
}
