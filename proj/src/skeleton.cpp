#include "hcwalk/skeleton.hpp"

#include <algorithm>
#include <cmath>

namespace hcwalk::skeleton {

namespace {

constexpr double kQ = kPersistence;

// 12-sigma level window: the stationary step variance of Y is 1/2, and
// P(|Y_k| > 12 sqrt(k/2)) <= 2 exp(-72), far below double resolution.
int64_t level_window(int64_t k) {
  double w = 12.0 * std::sqrt(0.5 * static_cast<double>(k)) + 16.0;
  return std::min<int64_t>(k, static_cast<int64_t>(w));
}

// DP over (y, nu) from a point mass at (0, nu0); calls visit(k, p_at_target)
// with the mass at (0, nu0) after k steps, for k = 0..k_max.
template <typename Visit>
void point_return_dp(int nu0, int64_t k_max, Visit&& visit) {
  const int64_t w_max = level_window(k_max);
  const size_t width = static_cast<size_t>(2 * w_max + 1);
  // plane 0: nu=+1, plane 1: nu=-1
  std::vector<double> cur(2 * width, 0.0), nxt(2 * width, 0.0);
  const size_t origin = static_cast<size_t>(w_max);
  const size_t p0 = nu0 == +1 ? 0 : 1;
  cur[p0 * width + origin] = 1.0;
  visit(0, 1.0);
  for (int64_t k = 1; k <= k_max; ++k) {
    const int64_t w = std::min(level_window(k), w_max);
    std::fill(nxt.begin(), nxt.end(), 0.0);
    double* up_cur = cur.data();
    double* dn_cur = cur.data() + width;
    double* up_nxt = nxt.data();
    double* dn_nxt = nxt.data() + width;
    const int64_t lo = -std::min(w, k - 1), hi = std::min(w, k - 1);
    for (int64_t y = lo; y <= hi; ++y) {
      const size_t i = origin + static_cast<size_t>(y);
      const double mu = up_cur[i];
      const double md = dn_cur[i];
      if (mu != 0.0) {
        if (y + 1 <= w) up_nxt[i + 1] += kQ * mu;
        if (y - 1 >= -w) dn_nxt[i - 1] += (1.0 - kQ) * mu;
      }
      if (md != 0.0) {
        if (y - 1 >= -w) dn_nxt[i - 1] += kQ * md;
        if (y + 1 <= w) up_nxt[i + 1] += (1.0 - kQ) * md;
      }
    }
    cur.swap(nxt);
    visit(k, cur[p0 * width + origin]);
  }
}

}  // namespace

std::array<Transition, 2> skeleton_transition(const SkeletonState& s) {
  if (s.nu == +1)
    return {Transition{{s.y + 1, +1}, kQ}, Transition{{s.y - 1, -1}, 1.0 - kQ}};
  return {Transition{{s.y - 1, -1}, kQ}, Transition{{s.y + 1, +1}, 1.0 - kQ}};
}

std::vector<SkeletonState> simulate_skeleton(int64_t n, rng::Stream& stream) {
  std::vector<SkeletonState> path;
  path.reserve(static_cast<size_t>(n) + 1);
  SkeletonState s{0, +1};
  path.push_back(s);
  for (int64_t k = 0; k < n; ++k) {
    const bool persist = stream.next_double() < kQ;
    const int nu = persist ? s.nu : -s.nu;
    s = SkeletonState{s.y + nu, nu};
    path.push_back(s);
  }
  return path;
}

std::vector<SkeletonState> simulate_skeleton(int64_t n, uint64_t seed) {
  rng::Stream stream(seed);
  return simulate_skeleton(n, stream);
}

int64_t OccupationStats::eta_total(int64_t y) const {
  auto it = eta.find(y);
  if (it == eta.end()) return 0;
  return it->second.first + it->second.second;
}

int64_t OccupationStats::max_eta() const {
  int64_t best = 0;
  for (const auto& [y, counts] : eta)
    best = std::max(best, counts.first + counts.second);
  return best;
}

OccupationStats occupation_stats(const std::vector<SkeletonState>& path) {
  OccupationStats stats;
  stats.horizon = static_cast<int64_t>(path.size()) - 1;
  for (size_t k = 0; k < path.size(); ++k) {
    auto& counts = stats.eta[path[k].y];
    (path[k].nu == +1 ? counts.first : counts.second) += 1;
    if (k + 1 < path.size()) {
      if (path[k].nu == path[k + 1].nu)
        stats.m_o[path[k].y] += 1;
      else
        stats.m_e[path[k].y] += 1;
    }
  }
  return stats;
}

double return_prob_exact(int64_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidParam, "n must be >= 1");
  // Same DP as return_probability_series, but summed over nu at y = 0.
  const int64_t k_max = 2 * n;
  const int64_t w_max = level_window(k_max);
  const size_t width = static_cast<size_t>(2 * w_max + 1);
  std::vector<double> cur(2 * width, 0.0), nxt(2 * width, 0.0);
  const size_t origin = static_cast<size_t>(w_max);
  cur[origin] = 1.0;  // (0, +1)
  for (int64_t k = 1; k <= k_max; ++k) {
    const int64_t w = std::min(level_window(k), w_max);
    std::fill(nxt.begin(), nxt.end(), 0.0);
    const int64_t lo = -std::min(w, k - 1), hi = std::min(w, k - 1);
    for (int64_t y = lo; y <= hi; ++y) {
      const size_t i = origin + static_cast<size_t>(y);
      const double mu = cur[i];
      const double md = cur[width + i];
      if (mu != 0.0) {
        if (y + 1 <= w) nxt[i + 1] += kQ * mu;
        if (y - 1 >= -w) nxt[width + i - 1] += (1.0 - kQ) * mu;
      }
      if (md != 0.0) {
        if (y - 1 >= -w) nxt[width + i - 1] += kQ * md;
        if (y + 1 <= w) nxt[i + 1] += (1.0 - kQ) * md;
      }
    }
    cur.swap(nxt);
  }
  return cur[origin] + cur[width + origin];
}

std::vector<double> return_probability_series(const SkeletonState& a,
                                              int64_t k_max) {
  if (k_max < 0) throw Error(ErrorCode::InvalidParam, "k_max must be >= 0");
  std::vector<double> series(static_cast<size_t>(k_max) + 1, 0.0);
  point_return_dp(a.nu, k_max, [&series](int64_t k, double p) {
    series[static_cast<size_t>(k)] = p;
  });
  return series;
}

TiltedMatrix tilted_matrix(double t) {
  const double et = std::exp(t), emt = std::exp(-t);
  const double ch = std::cosh(t);
  const double disc = std::sqrt(kQ * kQ * ch * ch - (2.0 * kQ - 1.0));
  TiltedMatrix m;
  m.m = {{{kQ * et, (1.0 - kQ) * emt}, {(1.0 - kQ) * et, kQ * emt}}};
  m.lambda1 = kQ * ch + disc;
  m.lambda2 = kQ * ch - disc;
  return m;
}

double log_mgf_Y_exact(int64_t n, double t) {
  const TiltedMatrix tm = tilted_matrix(t);
  // row vector starting as the law of nu_0 = +1, rescaled each step
  double v0 = 1.0, v1 = 0.0, log_scale = 0.0;
  for (int64_t k = 0; k < 2 * n; ++k) {
    const double w0 = v0 * tm.m[0][0] + v1 * tm.m[1][0];
    const double w1 = v0 * tm.m[0][1] + v1 * tm.m[1][1];
    const double s = w0 + w1;
    v0 = w0 / s;
    v1 = w1 / s;
    log_scale += std::log(s);
  }
  return log_scale;  // v0 + v1 == 1 after rescale
}

double mgf_Y_exact(int64_t n, double t) {
  const double lg = log_mgf_Y_exact(n, t);
  if (lg > 709.0)
    throw Error(ErrorCode::Overflow, "E(exp(t Y_2n)) exceeds double range; use log_mgf_Y_exact");
  return std::exp(lg);
}

GreenResult green_function(const SkeletonState& a, double s, int64_t k_max,
                           double tolerance) {
  if (!(s >= 0.0 && s < 1.0))
    throw Error(ErrorCode::InvalidParam, "require s in [0,1)");
  if (k_max <= 0)
    k_max = static_cast<int64_t>(std::ceil(50.0 / (1.0 - s)));
  const double bound = std::pow(s, static_cast<double>(k_max + 1)) / (1.0 - s);
  if (bound > tolerance)
    throw Error(ErrorCode::TruncationTooCoarse,
                "truncation bound " + std::to_string(bound) + " exceeds tolerance");
  double sum = 0.0;
  double sk = 1.0;
  point_return_dp(a.nu, k_max, [&](int64_t, double p) {
    sum += p * sk;
    sk *= s;
  });
  return GreenResult{sum, bound, k_max};
}

LaplaceResult first_return_laplace(const SkeletonState& a, double t,
                                   int64_t k_max) {
  if (!(t > 0.0)) throw Error(ErrorCode::InvalidParam, "require t > 0");
  const double s = std::exp(-t);
  if (k_max <= 0) k_max = std::max<int64_t>(2000, static_cast<int64_t>(std::ceil(20.0 / t)));
  const GreenResult g = green_function(a, s, k_max, 1e-3);
  const double value = 1.0 - 1.0 / g.value;
  return LaplaceResult{value, -std::log(value) / std::sqrt(t)};
}

std::vector<int64_t> sigma_returns(const std::vector<SkeletonState>& path) {
  std::vector<int64_t> out;
  for (size_t k = 1; k < path.size(); ++k)
    if (path[k].y == 0) out.push_back(static_cast<int64_t>(k));
  return out;
}

}  // namespace hcwalk::skeleton
