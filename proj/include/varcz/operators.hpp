#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "varcz/dyadic.hpp"
#include "varcz/space.hpp"
#include "varcz/types.hpp"

namespace varcz {

/// Off-diagonal kernel K(x,y) with its declared Holder exponent. Named
/// kernels come from make_kernel; dyadic_piece wraps an existing kernel
/// with a smooth radial cutoff.
class Kernel {
 public:
  using Fn = std::function<Complex(const Space&, int, int)>;

  Kernel(std::string name, Fn fn, double holder_eta)
      : name_(std::move(name)), fn_(std::move(fn)), eta_(holder_eta) {}

  Complex operator()(const Space& space, int x, int y) const {
    return fn_(space, x, y);
  }
  const std::string& name() const { return name_; }
  double holder_eta() const { return eta_; }

 private:
  std::string name_;
  Fn fn_;
  double eta_;
};

/// Registry: "hilbert" (1/(x-y), 1D), "riesz-0"/"riesz-1" ((x_j-y_j)/|x-y|^3,
/// 2D), "zero", "test-positive" (rho^{-D}, fails cancellation).
Kernel make_kernel(const std::string& name);

/// Averaging operator A_t f(x): exact weighted mean over the closed ball.
Complex average(const Space& space, const CVec& f, double t, int x);

/// Truncated singular integral T_t f(x): exact weighted sum over rho > t.
Complex truncated_si(const Space& space, const Kernel& kernel, const CVec& f,
                     double t, int x);

/// t -> A_t f(x) or t -> T_t f(x) is piecewise constant with breakpoints at
/// the distinct distances from x; this holds the exact plateau values.
class OperatorProfile {
 public:
  static OperatorProfile averages(const Space& space, const CVec& f, int x);
  static OperatorProfile singular(const Space& space, const Kernel& kernel,
                                  const CVec& f, int x);

  /// Distinct positive distances from x, ascending.
  std::span<const double> breakpoints() const { return breaks_; }
  /// values()[i] is the value on the plateau starting at breakpoints()[i-1]
  /// (values()[0] is the limit as t -> 0+); one more entry than breakpoints.
  std::span<const Complex> values() const { return values_; }

  /// Value at a given truncation radius t > 0.
  Complex at(double t) const;

  /// Plateau values met while t runs over [lo, hi] (exact sampling set for
  /// variation over the window).
  std::vector<Complex> window(double lo, double hi) const;

  /// Values of the partial integral int_{lo < rho < t} over t in [lo, hi]
  /// (singular profiles only; starts at 0).
  std::vector<Complex> annulus_window(double lo, double hi) const;

 private:
  int plateau(double t) const;  // number of breakpoints <= t

  std::vector<double> breaks_;
  std::vector<Complex> values_;
};

struct KernelReport {
  double size_ratio = 0;          // worst rho^D |K|
  double smoothness_single = 0;   // worst single-difference smoothness ratio
  double smoothness_sum = 0;      // worst two-sided-sum smoothness ratio
  double cancellation_max = 0;    // worst |annulus integral|, both variables
  long pairs = 0;
  long triples = 0;
  long annuli = 0;
  std::string cancellation_witness;
};

/// Samples the size, smoothness, and cancellation conditions. Cancellation
/// is evaluated at interior base points whose annuli are complete, in both
/// integration variables.
KernelReport validate_kernel(const Space& space, const Kernel& kernel,
                             int samples, std::uint64_t seed = 1);

/// Smooth radial bump: psi(u) = phi(log_kappa u) - phi(log_kappa u - 1)
/// for a C^1 smoothstep phi; supported on (1/kappa, kappa) and summing to
/// one over dyadic dilates.
double psi_bump(double u, double kappa);
/// The telescoping primitive phi (exposed for the reconstruction tests).
double psi_smoothstep(double s);

/// Smoothly truncated dyadic piece K_k(x,y) = K(x,y) psi(kappa^-k rho(x,y)).
Kernel dyadic_piece(const Kernel& kernel, int k, double kappa);

enum class ShortVariationMode { averages, singular };

struct ShortVariationParams {
  double aperture = 1.0;      // sup over rho(x,x') <= aperture * kappa^k
  double variation_r = 2.0;   // inner variation exponent
};

/// Non-tangential short variation at one scale: the inhomogeneous
/// r-variation over the window [kappa^{k-1}, kappa^{k+1}] of
/// A_t f(x') - E_k f(x') (averages) or of the annulus integral of K f
/// (singular), sup over x' near x.
Vec short_variation(const Space& space, const CubeSystem& system,
                    const CVec& f, int k, ShortVariationMode mode,
                    const Kernel* kernel = nullptr,
                    const ShortVariationParams& params = {});

/// Square function S f = (sum_k (S_k f)^2)^{1/2} over the system's scales.
Vec short_variation_square(const Space& space, const CubeSystem& system,
                           const CVec& f, ShortVariationMode mode,
                           const Kernel* kernel = nullptr,
                           const ShortVariationParams& params = {});

/// All S_k fields at once (index 0 = k_min); one shared profile pass.
std::vector<Vec> short_variation_fields(const Space& space,
                                        const CubeSystem& system,
                                        const CVec& f, ShortVariationMode mode,
                                        const Kernel* kernel = nullptr,
                                        const ShortVariationParams& params = {});

/// L^2(mu)-symmetrized matrix of the dyadic piece T_k: entries
/// K_k(x,y) sqrt(w(x) w(y)); operator norms of products of these equal the
/// norms of the corresponding compositions of T_k and adjoints.
CMat dyadic_piece_matrix(const Space& space, const Kernel& kernel, int k,
                         double kappa);

/// ||T_{k'}^* T_k|| + ||T_{k'} T_k^*|| on L^2(mu), by power iteration on
/// the explicit matrices. Throws when the space exceeds the matrix budget.
double almost_orthogonality(const Space& space, const Kernel& kernel, int k,
                            int k_prime, double kappa,
                            int max_points = 2048);

/// Largest singular value by power iteration (deterministic start).
double operator_norm(const CMat& m, int iterations = 120);

}  // namespace varcz
