#pragma once

#include <cstdint>
#include <vector>

#include "hcwalk/environment.hpp"
#include "hcwalk/skeleton.hpp"

namespace hcwalk::oracle {

// Exact law of (Y_n, nu_n), dense over the reachable window.
struct DistributionGrid {
  int64_t y0 = 0;  // level of index 0
  std::vector<double> up;    // mass at (y, +1)
  std::vector<double> down;  // mass at (y, -1)
  double total_mass = 0.0;

  double at(int64_t y, int nu) const;
};

DistributionGrid skeleton_distribution_exact(int64_t n);

// Exact quenched P(M_t = (0,0)) for t = 0..t_max, propagating mass with the
// 1/2-1/2 out-edge rule on the window |x|,|y| <= t_max.
std::vector<double> full_walk_distribution(const EnvironmentSpec& spec,
                                           int64_t t_max);

struct JointPnResult {
  double p_n;             // P(X_{2n} = 0, Y_{2n} = 0)
  double deficit;         // probability mass clipped at the grid border
  double y_marginal_p;    // sum over x of the mass at Y_{2n} = 0 (consistency)
};

// DP over (x, y, nu): each skeleton macro-step convolves the signed odd/even
// geometric jump with the x-marginal. The geometric kernels are applied by
// their two-term recurrence, so the only truncation is at the grid border.
JointPnResult joint_pn_exact(const EnvironmentSpec& spec, int64_t n,
                             double tail_tol = 1e-12);

// The pair chain (Ybar_{n-1}, nu_{n-1}; Ybar_n, nu_n) on 4Q states.
struct WbarDistribution {
  int64_t q = 0;
  std::vector<double> mass;  // index = wbar_index(...)
};

// State is (ybar, nu, nu') with the arrival level ybar' = ybar + nu' mod Q.
size_t wbar_index(int64_t q, int64_t ybar, int nu, int nu_next);

WbarDistribution wbar_distribution_exact(int64_t q,
                                         const std::vector<int>& f_table,
                                         int64_t n);

// pi: direction-changing states carry (2/3)/(2Q), persisting (1/3)/(2Q).
WbarDistribution wbar_stationary(int64_t q);

double total_variation(const WbarDistribution& a, const WbarDistribution& b);

}  // namespace hcwalk::oracle
