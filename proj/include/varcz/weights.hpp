#pragma once

#include <span>
#include <string>
#include <vector>

#include "varcz/dyadic.hpp"
#include "varcz/types.hpp"

namespace varcz {

/// Named weights: "const", "power:a" (max(|x - x0|, spacing)^a about the
/// grid midpoint), "checkerboard:h" (alternating 1 and h by lattice parity).
Vec make_weight(const Space& space, const std::string& spec);

/// [w]_{A_p} = sup_Q <w>_Q <w^{1-p'}>_Q^{p-1} over the system's cubes.
double ap_characteristic(const CubeSystem& system, const Vec& w, double p);

/// [w, sigma]_{A_p} = sup_Q <w>_Q <sigma>_Q^{p-1}.
double two_weight_characteristic(const CubeSystem& system, const Vec& w,
                                 const Vec& sigma, double p);

/// Fujii-Wilson [w]_{A_infty} = sup_Q w(Q)^{-1} int_Q M_D(w 1_Q), with the
/// maximal function restricted to subcubes of Q.
double ainfty_characteristic(const CubeSystem& system, const Vec& w);

/// ||f||_{L^p(w)} with the weighted measure w dmu.
double weighted_norm(const Space& space, const CVec& f, const Vec& w,
                     double p);

/// sup_lambda lambda mu_w{|f| > lambda}^{1/p}, exact from the sorted
/// level set of |f|.
double weak_lp_quasinorm(const Space& space, const CVec& f, double p);
double weak_lp_quasinorm(const Space& space, const CVec& f, double p,
                         const Vec& w);

struct SubadditivityReport {
  double lhs = 0;       // ||sum g_j||_{p,infty}^p
  double rhs_sum = 0;   // sum ||g_j||_{p,infty}^p
  double bound = 0;     // 2^p (1 + 1/(1-p))
  double ratio = 0;     // lhs / rhs_sum
  bool pass = false;
};

/// Checks ||sum g_j||_{p,infty}^p <= 2^p (1 + 1/(1-p)) sum ||g_j||_{p,infty}^p
/// for nonnegative g_j and 0 < p < 1, both sides exact.
SubadditivityReport check_weak_lp_subadditivity(const Space& space,
                                                std::span<const Vec> gs,
                                                double p);

}  // namespace varcz
