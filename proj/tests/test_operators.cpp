#include <doctest.h>

#include <cmath>
#include <memory>

#include "varcz/dyadic.hpp"
#include "varcz/operators.hpp"
#include "varcz/martingale.hpp"
#include "varcz/random.hpp"
#include "varcz/variation.hpp"

using namespace varcz;

namespace {

CVec random_f(const Space& space, std::uint64_t seed, bool complex_values = false) {
  Rng rng(seed);
  CVec f(space.size());
  for (int i = 0; i < f.size(); ++i) {
    f[i] = complex_values ? rng.uniform_complex() : Complex(rng.uniform(-1, 1));
  }
  return f;
}

}  // namespace

TEST_CASE("averages preserve constants and degenerate balls") {
  const Space s = Space::euclidean_grid(1, 32, 1.0);
  const CVec c = CVec::Constant(32, Complex(1.5, 0.5));
  for (double t : {0.5, 3.0, 100.0}) {
    CHECK(std::abs(average(s, c, t, 7) - Complex(1.5, 0.5)) <= 1e-14);
  }
  const CVec f = random_f(s, 3);
  CHECK(average(s, f, 0.25, 11) == f[11]);  // ball = {x}
}

TEST_CASE("average counts lattice points exactly") {
  const Space s = Space::euclidean_grid(1, 64, 1.0);
  CVec f = CVec::Zero(64);
  for (int i = 32; i < 42; ++i) f[i] = 1.0;  // ten ones
  // Ball around 32 of radius 19.5 holds 39 points: {13, ..., 51}.
  CHECK(average(s, f, 19.5, 32).real() == doctest::Approx(10.0 / 39.0));
}

TEST_CASE("averages are monotone and sup-contractive") {
  const Space s = Space::euclidean_grid(1, 48, 0.5);
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CVec f = random_f(s, 100 + trial);
    CVec g = f;
    for (int i = 0; i < g.size(); ++i) g[i] += rng.uniform();  // g >= f
    const double t = rng.uniform(0.5, 10.0);
    const int x = rng.uniform_int(0, s.size() - 1);
    CHECK(average(s, f, t, x).real() <= average(s, g, t, x).real() + 1e-12);
    double sup = 0;
    for (int i = 0; i < f.size(); ++i) sup = std::max(sup, std::abs(f[i]));
    CHECK(std::abs(average(s, f, t, x)) <= sup + 1e-12);
  }
}

TEST_CASE("truncated singular integral values") {
  const Space s = Space::euclidean_grid(1, 65, 1.0);
  const Kernel hilbert = make_kernel("hilbert");

  // Odd kernel, even data around the center of a symmetric grid.
  CVec even = CVec::Zero(65);
  for (int i = 0; i < 65; ++i) even[i] = std::exp(-0.01 * (i - 32) * (i - 32));
  CHECK(std::abs(truncated_si(s, hilbert, even, 2.5, 32)) <= 1e-12);

  const CVec zero = CVec::Zero(65);
  CHECK(truncated_si(s, hilbert, zero, 1.0, 10) == Complex(0));
  CHECK_THROWS_AS(truncated_si(s, hilbert, zero, 0.0, 10),
                  std::invalid_argument);

  // Linearity.
  const CVec f = random_f(s, 9, true);
  const CVec g = random_f(s, 10, true);
  const Complex lhs = truncated_si(s, hilbert, f + 2.0 * g, 3.0, 20);
  const Complex rhs = truncated_si(s, hilbert, f, 3.0, 20) +
                      2.0 * truncated_si(s, hilbert, g, 3.0, 20);
  CHECK(std::abs(lhs - rhs) <= 1e-12);

  // Zero kernel annihilates everything.
  const Kernel zk = make_kernel("zero");
  CHECK(truncated_si(s, zk, f, 1.0, 20) == Complex(0));
}

TEST_CASE("truncated hilbert transform approximates the integral") {
  // x at coordinate 3, f = indicator of [4, 5]: T_t f(x) ~ -log 2 for
  // t = 0.5, with Riemann error of order the spacing.
  const double h = 1.0 / 128.0;
  const Space s = Space::euclidean_grid(1, 769, h);  // [0, 6]
  const Kernel hilbert = make_kernel("hilbert");
  CVec f = CVec::Zero(s.size());
  for (int i = 0; i < s.size(); ++i) {
    const double y = s.coords()(i, 0);
    if (y >= 4.0 && y <= 5.0) f[i] = 1.0;
  }
  const int x = 384;  // coordinate 3.0
  const Complex v = truncated_si(s, hilbert, f, 0.5, x);
  CHECK(v.real() == doctest::Approx(-std::log(2.0)).epsilon(0.03));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("kernel registry and validation") {
  const Space s = Space::euclidean_grid(1, 256, 1.0);
  const KernelReport hil = validate_kernel(s, make_kernel("hilbert"), 4000, 2);
  CHECK(hil.size_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hil.smoothness_single <= 2.0 + 1e-9);
  CHECK(hil.cancellation_max <= 1e-12);

  const KernelReport zero = validate_kernel(s, make_kernel("zero"), 500, 2);
  CHECK(zero.size_ratio == 0.0);
  CHECK(zero.cancellation_max == 0.0);

  const KernelReport bad =
      validate_kernel(s, make_kernel("test-positive"), 500, 2);
  CHECK(bad.cancellation_max > 0.1);
  CHECK_FALSE(bad.cancellation_witness.empty());

  const Space plane = Space::euclidean_grid(2, 24, 1.0);
  const KernelReport riesz =
      validate_kernel(plane, make_kernel("riesz-0"), 4000, 2);
  CHECK(riesz.size_ratio <= 1.0 + 1e-12);
  CHECK(riesz.cancellation_max <= 1e-12);

  CHECK_THROWS_AS(make_kernel("nope"), std::invalid_argument);
}

TEST_CASE("smooth bump partitions unity") {
  const double kappa = 2.0;
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const double u = std::exp(rng.uniform(-3, 3));
    double sum = 0;
    for (int k = -12; k <= 12; ++k) {
      sum += psi_bump(u / std::pow(kappa, k), kappa);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(psi_bump(u, kappa) >= 0.0);
    CHECK(psi_bump(u, kappa) <= 1.0);
  }
  CHECK(psi_bump(1.0, kappa) == doctest::Approx(1.0));
  CHECK(psi_bump(0.5, kappa) == 0.0);   // support edge
  CHECK(psi_bump(2.0, kappa) == 0.0);
  CHECK(psi_bump(1.4, kappa) > 0.0);
}

TEST_CASE("dyadic pieces cover the kernel and vanish off-support") {
  const Space s = Space::euclidean_grid(1, 64, 1.0);
  const Kernel hilbert = make_kernel("hilbert");
  const double kappa = 2.0;
  for (int x : {5, 30}) {
    for (int y : {12, 44}) {
      if (x == y) continue;
      Complex sum = 0;
      for (int k = -4; k <= 9; ++k) {
        sum += dyadic_piece(hilbert, k, kappa)(s, x, y);
      }
      CHECK(std::abs(sum - hilbert(s, x, y)) <= 1e-12);

      const double rho = s.distance(x, y);
      const int k_far = static_cast<int>(std::floor(std::log2(rho))) + 3;
      CHECK(std::abs(dyadic_piece(hilbert, k_far, kappa)(s, x, y)) == 0.0);
    }
  }
}

TEST_CASE("long-edge-short split recombines the truncation exactly") {
  const Space s = Space::euclidean_grid(1, 96, 1.0);
  const Kernel hilbert = make_kernel("hilbert");
  const double kappa = 2.0;
  const CVec f = random_f(s, 21, true);
  const int big_k = static_cast<int>(std::ceil(std::log2(s.diameter()))) + 1;
  Rng rng(6);
  for (int trial = 0; trial < 12; ++trial) {
    const double r = rng.uniform(1.0, s.diameter() / 2);
    const int x = rng.uniform_int(0, s.size() - 1);
    const int k0 = static_cast<int>(std::ceil(std::log2(r)));

    Complex total = 0;
    for (int k = k0; k <= big_k; ++k) {
      const Kernel piece = dyadic_piece(hilbert, k, kappa);
      for (int y = 0; y < s.size(); ++y) {
        if (y != x) total += piece(s, x, y) * f[y] * s.weight(y);
      }
    }
    Complex edge = 0, shortpart = 0;
    const Kernel piece0 = dyadic_piece(hilbert, k0, kappa);
    for (int y = 0; y < s.size(); ++y) {
      if (y == x) continue;
      const double rho = s.distance(x, y);
      if (rho > std::pow(kappa, k0 - 1) && rho < std::pow(kappa, k0)) {
        edge += piece0(s, x, y) * f[y] * s.weight(y);
      }
      if (rho > r && rho < std::pow(kappa, k0)) {
        shortpart += hilbert(s, x, y) * f[y] * s.weight(y);
      }
    }
    const Complex lhs = truncated_si(s, hilbert, f, r, x);
    CHECK(std::abs(total - edge + shortpart - lhs) <= 1e-12);
  }
}

TEST_CASE("profiles are piecewise constant with refinement invariance") {
  const Space s = Space::euclidean_grid(1, 40, 0.5);
  const Kernel hilbert = make_kernel("hilbert");
  const CVec f = random_f(s, 33);
  for (int x : {0, 13, 39}) {
    const auto prof = OperatorProfile::averages(s, f, x);
    // at() agrees with the direct operator at breakpoints and between.
    for (double t : {0.26, 0.5, 0.74, 1.0, 3.3, 19.5}) {
      CHECK(std::abs(prof.at(t) - average(s, f, t, x)) <= 1e-14);
    }
    const auto sing = OperatorProfile::singular(s, hilbert, f, x);
    for (double t : {0.26, 0.5, 0.74, 1.0, 3.3, 19.5}) {
      CHECK(std::abs(sing.at(t) - truncated_si(s, hilbert, f, t, x)) <= 1e-12);
    }

    // Variation over the breakpoint grid equals variation over any
    // refinement: sample plateaus plus arbitrary midpoints.
    const auto window = prof.window(0.3, 6.0);
    std::vector<Complex> refined;
    refined.push_back(prof.at(0.3));
    for (double t = 0.35; t <= 6.0; t += 0.05) refined.push_back(prof.at(t));
    refined.push_back(prof.at(6.0));
    const double v1 = r_variation(std::span<const Complex>(window), 2.0);
    const double v2 = r_variation(std::span<const Complex>(refined), 2.0);
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));
  }
}

TEST_CASE("short variation vanishes on constants and scales linearly") {
  auto space = std::make_shared<Space>(Space::euclidean_grid(1, 64, 1.0));
  auto systems = build_shifted_grids(space, 0, 6);
  const CubeSystem& sys = systems[0];

  const CVec c = CVec::Constant(64, 2.0);
  const Vec s_const =
      short_variation_square(*space, sys, c, ShortVariationMode::averages);
  CHECK(s_const.lpNorm<Eigen::Infinity>() <= 1e-13);

  const Kernel hilbert = make_kernel("hilbert");
  const CVec zero = CVec::Zero(64);
  const Vec s_zero = short_variation_square(
      *space, sys, zero, ShortVariationMode::singular, &hilbert);
  CHECK(s_zero.lpNorm<Eigen::Infinity>() == 0.0);

  const CVec f = random_f(*space, 44);
  const Vec s1 =
      short_variation_square(*space, sys, f, ShortVariationMode::averages);
  const Vec s3 = short_variation_square(*space, sys, 3.0 * f,
                                        ShortVariationMode::averages);
  CHECK((s3 - 3.0 * s1).lpNorm<Eigen::Infinity>() <= 1e-10);
}

TEST_CASE("short variation matches brute force on a small grid") {
  auto space = std::make_shared<Space>(Space::euclidean_grid(1, 32, 1.0));
  auto systems = build_shifted_grids(space, 0, 5);
  const CubeSystem& sys = systems[0];
  CVec f = CVec::Zero(32);
  f[9] = 1.0;
  f[10] = 2.0;  // single bump
  const int k = 2;
  const Vec sk =
      short_variation(*space, sys, f, k, ShortVariationMode::averages);

  const CVec ek = expectation(sys, f, k);
  for (int x = 0; x < 32; ++x) {
    double best = 0;
    for (int xp = 0; xp < 32; ++xp) {
      if (space->distance(x, xp) > std::pow(2.0, k)) continue;
      // All plateau values of A_t f(xp) - E_k f(xp) for t in [2^{k-1}, 2^{k+1}].
      std::vector<double> ts;
      for (int y = 0; y < 32; ++y) {
        const double d = space->distance(xp, y);
        if (d >= std::pow(2.0, k - 1) && d <= std::pow(2.0, k + 1)) {
          ts.push_back(d);
        }
      }
      ts.push_back(std::pow(2.0, k - 1));
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      std::vector<Complex> vals;
      for (double t : ts) vals.push_back(average(*space, f, t, xp) - ek[xp]);
      best = std::max(best,
                      r_variation(std::span<const Complex>(vals), 2.0, false));
    }
    CHECK(sk[x] == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("almost orthogonality of dyadic pieces") {
  const Space s = Space::euclidean_grid(1, 256, 1.0);
  const Kernel hilbert = make_kernel("hilbert");

  CHECK(almost_orthogonality(s, make_kernel("zero"), 3, 3, 2.0) == 0.0);

  const double same = almost_orthogonality(s, hilbert, 4, 4, 2.0);
  CHECK(same > 0);
  CHECK(same < 10.0);

  const double far = almost_orthogonality(s, hilbert, 4, 7, 2.0);
  CHECK(far < same);

  CHECK_THROWS_AS(almost_orthogonality(s, hilbert, 3, 3, 2.0, 100),
                  std::invalid_argument);
}
