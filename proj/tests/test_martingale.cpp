#include <doctest.h>

#include <cmath>
#include <memory>

#include "varcz/dyadic.hpp"
#include "varcz/martingale.hpp"
#include "varcz/random.hpp"
#include "varcz/variation.hpp"

using namespace varcz;

namespace {

struct Fixture {
  std::shared_ptr<const Space> space;
  std::unique_ptr<CubeSystem> system;

  explicit Fixture(int n = 64) {
    space = std::make_shared<Space>(Space::euclidean_grid(1, n, 1.0));
    auto systems = build_shifted_grids(
        space, 0, static_cast<int>(std::ceil(std::log2(n))));
    system = std::make_unique<CubeSystem>(std::move(systems[0]));
  }
};

CVec random_f(const Space& space, std::uint64_t seed, bool complex_values = false) {
  Rng rng(seed);
  CVec f(space.size());
  for (int i = 0; i < f.size(); ++i) {
    f[i] = complex_values ? rng.uniform_complex() : Complex(rng.uniform(-1, 1));
  }
  return f;
}

double l2_norm(const Space& space, const CVec& f) {
  double s = 0;
  for (int i = 0; i < f.size(); ++i) {
    s += std::norm(f[i]) * space.weight(i);
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("expectation preserves constants and indicators") {
  Fixture fx;
  const CVec ones = CVec::Constant(fx.space->size(), Complex(2.5, -1));
  for (int k = 0; k <= fx.system->k_max(); ++k) {
    const CVec e = expectation(*fx.system, ones, k);
    for (int i = 0; i < e.size(); ++i) {
      CHECK(e[i].real() == doctest::Approx(2.5).epsilon(1e-14));
    }
  }

  // Indicator of a scale-2 cube is already measurable at scales <= 2.
  const Cube& q = fx.system->cube_of(2, 8);
  CVec ind = CVec::Zero(fx.space->size());
  for (int m : q.members) ind[m] = 1.0;
  const CVec e2 = expectation(*fx.system, ind, 2);
  for (int i = 0; i < e2.size(); ++i) {
    CHECK(e2[i].real() == doctest::Approx(ind[i].real()));
  }
}

TEST_CASE("expectation is the weighted cube mean") {
  auto space = std::make_shared<Space>(Space::euclidean_grid(1, 8, 1.0));
  auto systems = build_shifted_grids(space, 0, 3);
  CVec f = CVec::Zero(8);
  f[0] = 3.0;
  f[1] = 5.0;
  const CVec e = expectation(systems[0], f, 1);  // cubes {0,1}, {2,3}, ...
  CHECK(e[0].real() == doctest::Approx(4.0));
  CHECK(e[1].real() == doctest::Approx(4.0));
  CHECK(e[2].real() == doctest::Approx(0.0));
  CHECK_THROWS_AS(expectation(systems[0], f, 9), std::out_of_range);
}

TEST_CASE("difference integrates to zero on coarser cubes") {
  Fixture fx;
  const CVec f = random_f(*fx.space, 31, true);
  for (int k = 0; k < fx.system->k_max(); ++k) {
    const CVec d = difference(*fx.system, f, k);
    for (const Cube& q : fx.system->cubes_at(k + 1)) {
      Complex integral = 0;
      for (int m : q.members) integral += d[m] * fx.space->weight(m);
      CHECK(std::abs(integral) <= 1e-12);
    }
  }
}

TEST_CASE("telescoping and orthogonality identities") {
  Fixture fx;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const CVec f = random_f(*fx.space, seed, seed % 2 == 0);
    CVec sum = expectation(*fx.system, f, fx.system->k_max());
    for (int k = fx.system->k_min(); k < fx.system->k_max(); ++k) {
      sum += difference(*fx.system, f, k);
    }
    const CVec bottom = expectation(*fx.system, f, fx.system->k_min());
    CHECK((sum - bottom).lpNorm<Eigen::Infinity>() <= 1e-12);

    // Finest cubes are singletons, so E_bottom f = f and the martingale
    // differences give an exact Pythagoras identity.
    CHECK((bottom - f).lpNorm<Eigen::Infinity>() == 0.0);
    double sq = 0;
    for (int k = fx.system->k_min(); k < fx.system->k_max(); ++k) {
      const double nk = l2_norm(*fx.space, difference(*fx.system, f, k));
      sq += nk * nk;
    }
    const CVec top = expectation(*fx.system, f, fx.system->k_max());
    const double lhs = l2_norm(*fx.space, f - top);
    CHECK(sq == doctest::Approx(lhs * lhs).epsilon(1e-10));
  }
}

TEST_CASE("projection identities") {
  Fixture fx;
  const CVec f = random_f(*fx.space, 77);
  for (int k : {1, 3}) {
    for (int l : {2, 4}) {
      const CVec a = expectation(*fx.system, expectation(*fx.system, f, l), k);
      const CVec b = expectation(*fx.system, f, std::max(k, l));
      CHECK((a - b).lpNorm<Eigen::Infinity>() <= 1e-12);
    }
  }
  // D_k D_l = 0 for k != l.
  const CVec d2 = difference(*fx.system, difference(*fx.system, f, 1), 3);
  CHECK(d2.lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("dyadic maximal function dominates and is weak (1,1)") {
  Fixture fx;
  const CVec ones = CVec::Constant(fx.space->size(), 1.0);
  const Vec m1 = dyadic_maximal(*fx.system, ones);
  for (int i = 0; i < m1.size(); ++i) CHECK(m1[i] == doctest::Approx(1.0));

  for (std::uint64_t seed = 5; seed < 15; ++seed) {
    const CVec f = random_f(*fx.space, seed);
    const Vec m = dyadic_maximal(*fx.system, f);
    // Singleton finest cubes give M_D f >= |f| pointwise.
    for (int i = 0; i < m.size(); ++i) CHECK(m[i] >= std::abs(f[i]) - 1e-14);
    const double l1 = fx.space->l1_norm(f);
    for (double lambda : {0.25, 0.5, 1.0}) {
      double level = 0;
      for (int i = 0; i < m.size(); ++i) {
        if (m[i] > lambda) level += fx.space->weight(i);
      }
      CHECK(level <= l1 / lambda + 1e-12);
    }
  }
}

TEST_CASE("greedy stopping scales") {
  Fixture fx;
  const CVec constant = CVec::Constant(fx.space->size(), 3.0);
  const auto stops =
      greedy_stopping(*fx.system, constant, 5, 1.0, fx.system->k_max());
  CHECK(stops == std::vector<int>{fx.system->k_max()});

  const CVec f = random_f(*fx.space, 4);
  const auto huge =
      greedy_stopping(*fx.system, f, 5, 1e9, fx.system->k_max());
  CHECK(huge == std::vector<int>{fx.system->k_max()});

  // Consecutive stops move the conditional expectation by > lambda/8, and
  // scanning below any stop finds no earlier crossing.
  const double lambda = 0.5;
  CubeAverages avgs(*fx.system, f);
  for (int x : {0, 17, 40}) {
    const auto st = greedy_stopping(avgs, x, lambda, fx.system->k_max());
    for (std::size_t j = 0; j + 1 < st.size(); ++j) {
      CHECK(std::abs(avgs.at(st[j + 1], x) - avgs.at(st[j], x)) > lambda / 8);
      for (int l = st[j] - 1; l > st[j + 1]; --l) {
        CHECK(std::abs(avgs.at(l, x) - avgs.at(st[j], x)) <= lambda / 8);
      }
    }
  }
}

TEST_CASE("two-scale stopping example") {
  // E-values 0 then 1 at a point with lambda = 1: one stop.
  auto space = std::make_shared<Space>(Space::euclidean_grid(1, 4, 1.0));
  auto systems = build_shifted_grids(space, 0, 2);
  CVec f = CVec::Zero(4);
  f[0] = 4.0;  // E_top = 1 everywhere, E_0 f(3) = 0
  const auto stops = greedy_stopping(systems[0], f, 3, 1.0, 2);
  REQUIRE(stops.size() >= 2);
  CHECK(stops[0] == 2);
}

TEST_CASE("martingale jump majorant") {
  Fixture fx;
  const double lambda = 0.4;
  const CVec constant = CVec::Constant(fx.space->size(), 1.0);
  const Cube& inner = fx.system->cube_of(1, 9);
  const Cube& outer = fx.system->cube_of(4, 9);
  CHECK(martingale_jump_majorant(*fx.system, constant, 9, lambda, inner,
                                 outer) == 0.0);
  CHECK(martingale_jump_majorant(*fx.system, constant, 9, lambda, inner,
                                 inner) == 0.0);
  CHECK_THROWS_AS(
      martingale_jump_majorant(*fx.system, constant, 60, lambda, inner, outer),
      std::invalid_argument);

  // Majorant controls the jump count of the E_k sequence with a measured
  // constant; the floor lambda/2 sqrt(N_{lambda/2}) / 8 must always hold.
  double worst = 0;
  for (std::uint64_t seed = 21; seed < 31; ++seed) {
    const CVec f = random_f(*fx.space, seed);
    CubeAverages avgs(*fx.system, f);
    for (int x : {3, 22, 45}) {
      const Cube& qp = fx.system->cube_of(0, x);
      const Cube& q = fx.system->cube_of(fx.system->k_max(), x);
      std::vector<Complex> ek;
      for (int k = qp.k; k <= q.k; ++k) ek.push_back(avgs.at(k, x));
      const int jumps =
          jump_count(std::span<const Complex>(ek), lambda / 2);
      const double majorant =
          martingale_jump_majorant(avgs, x, lambda, qp, q);
      const double floor =
          (lambda / 2) * std::sqrt(static_cast<double>(jumps)) / 8;
      CHECK(majorant >= floor - 1e-12);
      if (majorant > 0 && jumps > 0) {
        worst = std::max(
            worst, (lambda / 2) * std::sqrt(static_cast<double>(jumps)) /
                       majorant);
      }
    }
  }
  CHECK(worst < 8.0);  // measured constant, recorded by the assertion
}

TEST_CASE("calderon-zygmund decomposition") {
  Fixture fx;

  // Small f: nothing selected.
  CVec small = CVec::Constant(fx.space->size(), 0.25);
  const auto quiet = cz_decompose(*fx.system, small, 1.0);
  CHECK(quiet.bad.empty());
  CHECK((quiet.good - small).lpNorm<Eigen::Infinity>() == 0.0);

  // Tall spike: a single bad cube, the maximal ancestor with average > 1.
  CVec spike = CVec::Zero(fx.space->size());
  spike[20] = 16.0;
  const auto dec = cz_decompose(*fx.system, spike, 1.0);
  REQUIRE(dec.bad.size() == 1);
  const Cube& bad = fx.system->cube(dec.bad[0].k, dec.bad[0].cube);
  // Averages up the chain: 16/8 = 2 > 1 at scale 3, 16/16 = 1 at scale 4.
  CHECK(bad.measure == doctest::Approx(8.0));
  Complex sum0 = 0;
  for (std::size_t i = 0; i < bad.members.size(); ++i) {
    sum0 += dec.bad[0].values[i] * fx.space->weight(bad.members[i]);
  }
  CHECK(std::abs(sum0) <= 1e-12);

  for (std::uint64_t seed = 41; seed < 61; ++seed) {
    const CVec f = random_f(*fx.space, seed, seed % 3 == 0);
    for (double lambda : {0.1, 0.35, 0.9}) {
      const auto d = cz_decompose(*fx.system, f, lambda);
      // Exact reassembly.
      const CVec back = cz_reassemble(*fx.system, d);
      CHECK((back - f).lpNorm<Eigen::Infinity>() <= 1e-12);
      // Mean-zero bad parts and the disjoint-measure bound.
      double bad_measure = 0;
      for (const BadPart& part : d.bad) {
        const Cube& q = fx.system->cube(part.k, part.cube);
        Complex integral = 0;
        for (std::size_t i = 0; i < q.members.size(); ++i) {
          integral += part.values[i] * fx.space->weight(q.members[i]);
        }
        CHECK(std::abs(integral) <= 1e-12);
        bad_measure += q.measure;
      }
      CHECK(bad_measure <= fx.space->l1_norm(f) / lambda * (1 + 1e-12));
      // Off the bad cubes the good part is f itself.
      std::vector<char> covered(fx.space->size(), 0);
      for (const BadPart& part : d.bad) {
        const Cube& q = fx.system->cube(part.k, part.cube);
        for (int m : q.members) covered[m] = 1;
      }
      for (int i = 0; i < fx.space->size(); ++i) {
        if (!covered[i]) CHECK(d.good[i] == f[i]);
      }
    }
  }
}
