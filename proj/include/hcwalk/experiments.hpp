#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hcwalk/embedded.hpp"
#include "hcwalk/environment.hpp"
#include "hcwalk/skeleton.hpp"

namespace hcwalk::experiments {

struct EventConfig {
  double delta1 = 0.1;
  double delta2 = 0.1;
  double delta3 = 0.15;
  double scale_c = 4.0;  // the C of the sqrt(n)-scale functional constraint

  void validate() const;  // positivity and 2*delta3 + delta1 < 1/2
};

struct EventRecord {
  int64_t n = 0;
  bool a1 = false;  // max |Y_k| < n^{1/2+delta1}
  bool a2 = false;  // max_y eta_{2n-1}(y) < n^{1/2+delta2}
  bool b = false;   // a1 & a2 & |drift| > n^{1/2+delta3}
  double drift = 0.0;
  int64_t max_abs_y = 0;
  int64_t max_eta = 0;
};

// path must have horizon 2n (length 2n+1).
EventRecord classify_events(const std::vector<skeleton::SkeletonState>& path,
                            const EnvironmentSpec& spec,
                            const EventConfig& cfg);

struct SFunctionals {
  int64_t s_e = 0;
  int64_t s_o = 0;
};

// S_e = sum f(Ybar_{i-1}) 1{nu_{i-1} != nu_i}; S_o with equality.
SFunctionals s_functionals(const std::vector<skeleton::SkeletonState>& path,
                           int64_t q, const std::vector<int>& f_table);

struct PerturbedFunctionals {
  int64_t sbar_e = 0;  // with the perturbed orientations in place of f
  int64_t sbar_o = 0;
  int64_t s_e = 0;     // the periodic-f functionals of the same path
  int64_t s_o = 0;
  int64_t low_level_visits = 0;  // # states with |Y_i| <= L
};

// Throws LTooSmall if a level beyond L carries a perturbed orientation
// somewhere on the path.
PerturbedFunctionals s_functionals_perturbed(
    const std::vector<skeleton::SkeletonState>& path,
    const EnvironmentSpec& spec, int64_t level_cutoff);

// Exact sampler of skeleton bridges conditioned on Z_n = {W_2n = W_0}, i.e.
// (Y_{2n-1}, nu_{2n-1}) = (-1,-1) and (Y_{2n}, nu_{2n}) = (0,+1): backward
// DP once, then forward sampling with tilted transitions.
class BridgeSampler {
 public:
  explicit BridgeSampler(int64_t n);

  std::vector<skeleton::SkeletonState> sample(rng::Stream& stream) const;

  double z_probability() const { return z_prob_; }
  int64_t n() const { return n_; }

 private:
  double backward_at(int64_t k, int64_t y, int nu) const;

  int64_t n_;
  int64_t window_;
  double z_prob_;
  std::vector<double> backward_;  // [k][y + window][nu_idx], k = 0..2n-1
};

struct ConditionalSResult {
  double estimate;
  double stderr_p;
  double z_acceptance_rate;
  int64_t n_accepted;
};

// Rejection sampling of skeleton paths on Z_n; estimates
// P(|S_e| + |S_o| <= C sqrt(n) | Z_n).
ConditionalSResult conditional_s_probability(int64_t q,
                                             const std::vector<int>& f_table,
                                             int64_t n, double scale_c,
                                             int64_t n_samples, uint64_t seed);

// Endpoint pairs match W_0 and |S_e| + |S_o| <= C sqrt(n).
bool constrained_path_filter(const std::vector<skeleton::SkeletonState>& path,
                             int64_t q, const std::vector<int>& f_table,
                             double scale_c);

enum class Method { ExactDP, MonteCarlo };

struct DiagnosticRow {
  int64_t n;
  double p;
  double stderr_p;  // 0 for exact DP
};

struct RecurrenceDiagnostic {
  std::vector<DiagnosticRow> rows;
  double exponent;         // -slope of log p vs log n, upper half of the grid
  double exponent_stderr;
  double ci_low;           // exponent +- 1.96 stderr
  double ci_high;
};

RecurrenceDiagnostic recurrence_diagnostic(const EnvironmentSpec& spec,
                                           const std::vector<int64_t>& n_grid,
                                           Method method, uint64_t seed,
                                           int64_t mc_samples = 200000);

}  // namespace hcwalk::experiments
