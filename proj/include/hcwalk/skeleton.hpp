#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hcwalk/errors.hpp"
#include "hcwalk/rng.hpp"

namespace hcwalk::skeleton {

// Persistence probability of the direction chain: P(nu_{k+1} = nu_k).
inline constexpr double kPersistence = 1.0 / 3.0;

struct SkeletonState {
  int64_t y = 0;
  int nu = +1;  // direction of the last vertical step, -1 or +1

  friend bool operator==(const SkeletonState&, const SkeletonState&) = default;
};

struct Transition {
  SkeletonState to;
  double prob;
};

// From (y,+1): (y+1,+1) w.p. 1/3, (y-1,-1) w.p. 2/3; mirrored for nu = -1.
std::array<Transition, 2> skeleton_transition(const SkeletonState& s);

// Path of length n+1 starting at (0,+1).
std::vector<SkeletonState> simulate_skeleton(int64_t n, uint64_t seed);
std::vector<SkeletonState> simulate_skeleton(int64_t n, rng::Stream& stream);

struct OccupationStats {
  // level -> (visits with nu=+1, visits with nu=-1), over k = 0..n
  std::map<int64_t, std::pair<int64_t, int64_t>> eta;
  // level -> direction-persisting / direction-changing visits, over k = 0..n-1
  std::map<int64_t, int64_t> m_o;
  std::map<int64_t, int64_t> m_e;
  int64_t horizon = 0;  // n = path length - 1

  int64_t eta_total(int64_t y) const;
  int64_t max_eta() const;
};

OccupationStats occupation_stats(const std::vector<SkeletonState>& path);

// Exact P(Y_{2n} = 0) by dynamic programming over (y, nu).
double return_prob_exact(int64_t n);

// p^{(k)}_{a,a} for k = 0..k_max: probability that the chain started at a
// is back at a after exactly k steps. Steps are +-1 in y, so the DP window
// |y - a.y| <= k_max/2 is exact (returning paths cannot leave it).
std::vector<double> return_probability_series(const SkeletonState& a,
                                              int64_t k_max);

struct TiltedMatrix {
  std::array<std::array<double, 2>, 2> m;  // [[q e^t, (1-q)e^-t],[(1-q)e^t, q e^-t]]
  double lambda1;                          // larger eigenvalue
  double lambda2;
};

TiltedMatrix tilted_matrix(double t);

// E(e^{t Y_{2n}}) from the initial state (0,+1); log-space accumulation.
double log_mgf_Y_exact(int64_t n, double t);
double mgf_Y_exact(int64_t n, double t);

struct GreenResult {
  double value;            // truncated series sum
  double truncation_bound; // s^{k_max+1} / (1-s), since every p^(k) <= 1
  int64_t k_max;
};

// G_{a,a}(s) = sum_k p^{(k)}_{a,a} s^k, truncated at k_max.
// k_max <= 0 selects the default ceil(50/(1-s)).
GreenResult green_function(const SkeletonState& a, double s, int64_t k_max = 0,
                           double tolerance = 1e-6);

struct LaplaceResult {
  double value;       // E(e^{-t sigma_{a,a}})
  double diagnostic;  // -ln(value) / sqrt(t)
};

LaplaceResult first_return_laplace(const SkeletonState& a, double t,
                                   int64_t k_max = 0);

// Indices k >= 1 with Y_k = 0, increasing.
std::vector<int64_t> sigma_returns(const std::vector<SkeletonState>& path);

}  // namespace hcwalk::skeleton
