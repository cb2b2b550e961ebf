#include "hcwalk/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hcwalk::oracle {

namespace {
constexpr double kQPersist = skeleton::kPersistence;
}

double DistributionGrid::at(int64_t y, int nu) const {
  const int64_t i = y - y0;
  if (i < 0 || i >= static_cast<int64_t>(up.size())) return 0.0;
  return nu == +1 ? up[static_cast<size_t>(i)] : down[static_cast<size_t>(i)];
}

DistributionGrid skeleton_distribution_exact(int64_t n) {
  if (n < 0) throw Error(ErrorCode::InvalidParam, "n must be >= 0");
  const int64_t w = n;
  const size_t width = static_cast<size_t>(2 * w + 1);
  if (width > (size_t{1} << 28))
    throw Error(ErrorCode::ResourceLimit, "horizon too large for dense grid");
  DistributionGrid g;
  g.y0 = -w;
  g.up.assign(width, 0.0);
  g.down.assign(width, 0.0);
  g.up[static_cast<size_t>(w)] = 1.0;  // (0, +1)
  std::vector<double> nu_up(width), nu_down(width);
  for (int64_t k = 1; k <= n; ++k) {
    std::fill(nu_up.begin(), nu_up.end(), 0.0);
    std::fill(nu_down.begin(), nu_down.end(), 0.0);
    for (int64_t y = -(k - 1); y <= k - 1; ++y) {
      const size_t i = static_cast<size_t>(y + w);
      const double mu = g.up[i], md = g.down[i];
      if (mu != 0.0) {
        nu_up[i + 1] += kQPersist * mu;
        nu_down[i - 1] += (1.0 - kQPersist) * mu;
      }
      if (md != 0.0) {
        nu_down[i - 1] += kQPersist * md;
        nu_up[i + 1] += (1.0 - kQPersist) * md;
      }
    }
    g.up.swap(nu_up);
    g.down.swap(nu_down);
  }
  g.total_mass = std::accumulate(g.up.begin(), g.up.end(), 0.0) +
                 std::accumulate(g.down.begin(), g.down.end(), 0.0);
  return g;
}

std::vector<double> full_walk_distribution(const EnvironmentSpec& spec,
                                           int64_t t_max) {
  validate(spec);
  if (t_max < 1) throw Error(ErrorCode::InvalidParam, "t_max must be >= 1");
  if (t_max > 2048)
    throw Error(ErrorCode::ResourceLimit,
                "t_max (grid is O(t_max^2) doubles) limited to 2048");
  const int64_t w = t_max;
  const size_t width = static_cast<size_t>(2 * w + 1);
  std::vector<double> cur(width * width, 0.0), nxt(width * width, 0.0);
  const auto idx = [w, width](int64_t x, int64_t y) {
    return static_cast<size_t>(y + w) * width + static_cast<size_t>(x + w);
  };
  cur[idx(0, 0)] = 1.0;
  std::vector<double> result;
  result.reserve(static_cast<size_t>(t_max) + 1);
  result.push_back(1.0);
  // per-row constants: orientation and vertical direction depend on (y, parity of x+y)
  for (int64_t t = 1; t <= t_max; ++t) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    const int64_t reach = t - 1;
    for (int64_t y = -reach; y <= reach; ++y) {
      const int eps = orientation(spec, y);
      for (int64_t x = -reach; x <= reach; ++x) {
        const double m = cur[idx(x, y)];
        if (m == 0.0) continue;
        const int64_t yv = ((x + y) & 1) ? y + 1 : y - 1;
        nxt[idx(x + eps, y)] += 0.5 * m;
        nxt[idx(x, yv)] += 0.5 * m;
      }
    }
    cur.swap(nxt);
    result.push_back(cur[idx(0, 0)]);
  }
  return result;
}

namespace {

// Geometric jump convolution by the two-term recurrence:
//   out[x] = (3/4) in[x - sign*offset] + (1/4) out[x - sign*2]
// offset = 1 for odd jumps, 0 for even, restricted to indices [lo, hi].
// Mass pushed past the band is dropped and shows up in the total-mass deficit.
void convolve_geometric(const double* in, double* out, int64_t lo, int64_t hi,
                        int64_t valid_lo, int64_t valid_hi, int sign,
                        int offset) {
  const auto src_at = [&](int64_t x) {
    return (x >= valid_lo && x <= valid_hi) ? in[x] : 0.0;
  };
  if (sign > 0) {
    for (int64_t x = lo; x <= hi; ++x) {
      const double prev = x - 2 >= lo ? out[x - 2] : 0.0;
      out[x] = 0.75 * src_at(x - offset) + 0.25 * prev;
    }
  } else {
    for (int64_t x = hi; x >= lo; --x) {
      const double prev = x + 2 <= hi ? out[x + 2] : 0.0;
      out[x] = 0.75 * src_at(x + offset) + 0.25 * prev;
    }
  }
}

}  // namespace

JointPnResult joint_pn_exact(const EnvironmentSpec& spec, int64_t n,
                             double tail_tol) {
  validate(spec);
  if (n < 1) throw Error(ErrorCode::InvalidParam, "n must be >= 1");
  if (!(tail_tol > 0.0 && tail_tol < 1e-3))
    throw Error(ErrorCode::TailTolTooLoose, "tail_tol must be in (0, 1e-3)");
  const int64_t steps = 2 * n;
  const int64_t wy = std::min<int64_t>(
      steps, static_cast<int64_t>(12.0 * std::sqrt(0.5 * steps) + 16.0));
  int64_t margin = 64 + 2 * static_cast<int64_t>(-std::log(tail_tol) / std::log(4.0));
  for (int attempt = 0; attempt < 3; ++attempt) {
    const int64_t wx =
        static_cast<int64_t>(12.0 * std::sqrt(3.0 * steps)) + margin;
    const size_t nx = static_cast<size_t>(2 * wx + 1);
    const size_t ny = static_cast<size_t>(2 * wy + 1);
    if (nx * ny * 2 > (size_t{1} << 30))
      throw Error(ErrorCode::ResourceLimit, "x-window: grid exceeds memory cap");
    // mass[nu][y][x], row-contiguous in x
    std::vector<double> cur(2 * ny * nx, 0.0), nxt(2 * ny * nx, 0.0);
    std::vector<double> conv_odd(nx), conv_even(nx);
    const auto row = [&](std::vector<double>& grid, int nu_idx, int64_t y) {
      return grid.data() + (static_cast<size_t>(nu_idx) * ny +
                            static_cast<size_t>(y + wy)) * nx;
    };
    row(cur, 0, 0)[static_cast<size_t>(wx)] = 1.0;  // (x=0, y=0, nu=+1)
    // x-band grows with k; bands are monotone so zeroing the current band
    // always covers everything previously written to the destination buffer
    const auto band_half = [&](int64_t k) {
      return std::min<int64_t>(
          wx, static_cast<int64_t>(12.0 * std::sqrt(3.0 * k)) + margin);
    };
    for (int64_t k = 1; k <= steps; ++k) {
      const int64_t reach = std::min(k - 1, wy);
      const int64_t dst_reach = std::min(k, wy);
      const int64_t lo = wx - band_half(k), hi = wx + band_half(k);
      const int64_t src_lo = wx - band_half(k - 1), src_hi = wx + band_half(k - 1);
      for (int64_t y = -dst_reach; y <= dst_reach; ++y)
        for (int nu_idx = 0; nu_idx < 2; ++nu_idx) {
          double* dst = row(nxt, nu_idx, y);
          std::fill(dst + lo, dst + hi + 1, 0.0);
        }
      for (int64_t y = -reach; y <= reach; ++y) {
        if (((y - (k - 1)) & 1) != 0) continue;  // parity: Y_k == k mod 2
        const int sign = orientation(spec, y);
        for (int nu_idx = 0; nu_idx < 2; ++nu_idx) {
          const double* src = row(cur, nu_idx, y);
          bool empty = true;
          for (int64_t j = src_lo; j <= src_hi && empty; ++j)
            empty = src[j] == 0.0;
          if (empty) continue;
          convolve_geometric(src, conv_odd.data(), lo, hi, src_lo, src_hi,
                             sign, 1);
          convolve_geometric(src, conv_even.data(), lo, hi, src_lo, src_hi,
                             sign, 0);
          const int nu = nu_idx == 0 ? +1 : -1;
          // persist: same nu, level y + nu, odd jump
          if (std::abs(y + nu) <= wy) {
            double* dst = row(nxt, nu_idx, y + nu);
            for (int64_t j = lo; j <= hi; ++j) dst[j] += kQPersist * conv_odd[j];
          }
          // flip: -nu, level y - nu, even jump
          if (std::abs(y - nu) <= wy) {
            double* dst = row(nxt, 1 - nu_idx, y - nu);
            for (int64_t j = lo; j <= hi; ++j)
              dst[j] += (1.0 - kQPersist) * conv_even[j];
          }
        }
      }
      cur.swap(nxt);
    }
    const double total = std::accumulate(cur.begin(), cur.end(), 0.0);
    const double deficit = 1.0 - total;
    if (deficit > std::max(1e-9, 100.0 * tail_tol) && attempt < 2) {
      margin += wx;  // widen and retry
      continue;
    }
    JointPnResult out;
    out.deficit = deficit;
    out.p_n = row(cur, 0, 0)[static_cast<size_t>(wx)] +
              row(cur, 1, 0)[static_cast<size_t>(wx)];
    out.y_marginal_p = 0.0;
    for (size_t j = 0; j < nx; ++j)
      out.y_marginal_p += row(cur, 0, 0)[j] + row(cur, 1, 0)[j];
    return out;
  }
  throw Error(ErrorCode::TailTolTooLoose, "deficit stayed above tolerance");
}

size_t wbar_index(int64_t q, int64_t ybar, int nu, int nu_next) {
  return (static_cast<size_t>(ybar) * 2 + (nu == +1 ? 0 : 1)) * 2 +
         (nu_next == +1 ? 0 : 1);
}

WbarDistribution wbar_distribution_exact(int64_t q,
                                         const std::vector<int>& f_table,
                                         int64_t n) {
  EnvironmentSpec spec = EnvironmentSpec::periodic(q, f_table);
  validate(spec);  // the chain law only depends on Q; f is validated for shape
  if (n < 0) throw Error(ErrorCode::InvalidParam, "n must be >= 0");
  const size_t states = static_cast<size_t>(4 * q);
  WbarDistribution dist;
  dist.q = q;
  dist.mass.assign(states, 0.0);
  // Wbar_0 = (-1 mod Q, -1; 0, +1)
  dist.mass[wbar_index(q, q - 1, -1, +1)] = 1.0;
  std::vector<double> next(states);
  for (int64_t step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int64_t ybar = 0; ybar < q; ++ybar) {
      for (int nu : {+1, -1}) {
        for (int nu_next : {+1, -1}) {
          const double m = dist.mass[wbar_index(q, ybar, nu, nu_next)];
          if (m == 0.0) continue;
          const int64_t arrival = ((ybar + nu_next) % q + q) % q;
          for (int nu2 : {+1, -1}) {
            const double p = nu2 == nu_next ? kQPersist : 1.0 - kQPersist;
            next[wbar_index(q, arrival, nu_next, nu2)] += p * m;
          }
        }
      }
    }
    dist.mass.swap(next);
  }
  return dist;
}

WbarDistribution wbar_stationary(int64_t q) {
  WbarDistribution pi;
  pi.q = q;
  pi.mass.assign(static_cast<size_t>(4 * q), 0.0);
  for (int64_t ybar = 0; ybar < q; ++ybar)
    for (int nu : {+1, -1})
      for (int nu_next : {+1, -1}) {
        const double p = nu_next == nu ? kQPersist : 1.0 - kQPersist;
        pi.mass[wbar_index(q, ybar, nu, nu_next)] =
            p / (2.0 * static_cast<double>(q));
      }
  return pi;
}

double total_variation(const WbarDistribution& a, const WbarDistribution& b) {
  if (a.mass.size() != b.mass.size())
    throw Error(ErrorCode::InvalidParam, "distribution size mismatch");
  double tv = 0.0;
  for (size_t i = 0; i < a.mass.size(); ++i) tv += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * tv;
}

}  // namespace hcwalk::oracle
