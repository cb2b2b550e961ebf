#include "hcwalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hcwalk/oracle.hpp"
#include "hcwalk/stats.hpp"

namespace hcwalk::experiments {

namespace {
int64_t math_mod(int64_t y, int64_t q) {
  int64_t m = y % q;
  return m < 0 ? m + q : m;
}
}  // namespace

void EventConfig::validate() const {
  if (!(delta1 > 0.0 && delta2 > 0.0 && delta3 > 0.0 && scale_c > 0.0))
    throw Error(ErrorCode::InvalidParam, "event deltas and C must be positive");
  if (!(2.0 * delta3 + delta1 < 0.5))
    throw Error(ErrorCode::InvalidParam,
                "admissibility requires 2*delta3 + delta1 < 1/2");
}

EventRecord classify_events(const std::vector<skeleton::SkeletonState>& path,
                            const EnvironmentSpec& spec,
                            const EventConfig& cfg) {
  cfg.validate();
  if (path.size() < 3 || path.size() % 2 == 0)
    throw Error(ErrorCode::InvalidParam, "path must have even horizon 2n >= 2");
  const int64_t n = (static_cast<int64_t>(path.size()) - 1) / 2;
  EventRecord rec;
  rec.n = n;
  for (const auto& s : path) rec.max_abs_y = std::max(rec.max_abs_y, std::abs(s.y));
  // eta_{2n-1}: occupation over k = 0..2n-1 only
  std::unordered_map<int64_t, int64_t> eta;
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const int64_t c = ++eta[path[k].y];
    rec.max_eta = std::max(rec.max_eta, c);
  }
  rec.drift = embedded::path_stats(path, spec).drift();
  const double nd = static_cast<double>(n);
  rec.a1 = static_cast<double>(rec.max_abs_y) < std::pow(nd, 0.5 + cfg.delta1);
  rec.a2 = static_cast<double>(rec.max_eta) < std::pow(nd, 0.5 + cfg.delta2);
  rec.b = rec.a1 && rec.a2 &&
          std::abs(rec.drift) > std::pow(nd, 0.5 + cfg.delta3);
  return rec;
}

SFunctionals s_functionals(const std::vector<skeleton::SkeletonState>& path,
                           int64_t q, const std::vector<int>& f_table) {
  validate(EnvironmentSpec::periodic(q, f_table));
  SFunctionals s;
  for (size_t i = 1; i < path.size(); ++i) {
    const int f = f_table[static_cast<size_t>(math_mod(path[i - 1].y, q))];
    if (path[i - 1].nu != path[i].nu)
      s.s_e += f;
    else
      s.s_o += f;
  }
  return s;
}

PerturbedFunctionals s_functionals_perturbed(
    const std::vector<skeleton::SkeletonState>& path,
    const EnvironmentSpec& spec, int64_t level_cutoff) {
  if (spec.regime != Regime::Perturbed)
    throw Error(ErrorCode::InvalidParam, "spec must be a Perturbed environment");
  validate(spec);
  PerturbedFunctionals out;
  for (size_t i = 1; i < path.size(); ++i) {
    const int64_t y = path[i - 1].y;
    const int eps_bar = orientation(spec, y);
    const int f = spec.f_table[static_cast<size_t>(math_mod(y, spec.period))];
    if (std::abs(y) > level_cutoff && eps_bar != f)
      throw Error(ErrorCode::LTooSmall,
                  "perturbed level |y| = " + std::to_string(std::abs(y)) +
                      " beyond cutoff L = " + std::to_string(level_cutoff));
    if (path[i - 1].nu != path[i].nu) {
      out.sbar_e += eps_bar;
      out.s_e += f;
    } else {
      out.sbar_o += eps_bar;
      out.s_o += f;
    }
  }
  for (const auto& s : path)
    if (std::abs(s.y) <= level_cutoff) ++out.low_level_visits;
  return out;
}

BridgeSampler::BridgeSampler(int64_t n) : n_(n) {
  if (n < 1) throw Error(ErrorCode::InvalidParam, "n must be >= 1");
  const int64_t steps = 2 * n;
  window_ = std::min<int64_t>(
      steps, static_cast<int64_t>(12.0 * std::sqrt(0.5 * steps) + 16.0));
  const size_t width = static_cast<size_t>(2 * window_ + 1);
  backward_.assign(static_cast<size_t>(steps + 1) * width * 2, 0.0);
  const auto at = [&](int64_t k, int64_t y, int nu) -> double& {
    return backward_[(static_cast<size_t>(k) * width +
                      static_cast<size_t>(y + window_)) * 2 + (nu == +1 ? 0 : 1)];
  };
  at(steps, 0, +1) = 1.0;
  for (int64_t k = steps - 1; k >= 0; --k) {
    for (int64_t y = -window_; y <= window_; ++y) {
      for (int nu : {+1, -1}) {
        if (k == steps - 1 && !(y == -1 && nu == -1)) continue;
        double h = 0.0;
        for (const auto& tr : skeleton::skeleton_transition({y, nu}))
          if (std::abs(tr.to.y) <= window_) h += tr.prob * at(k + 1, tr.to.y, tr.to.nu);
        at(k, y, nu) = h;
      }
    }
  }
  z_prob_ = at(0, 0, +1);
}

double BridgeSampler::backward_at(int64_t k, int64_t y, int nu) const {
  if (std::abs(y) > window_) return 0.0;
  const size_t width = static_cast<size_t>(2 * window_ + 1);
  return backward_[(static_cast<size_t>(k) * width +
                    static_cast<size_t>(y + window_)) * 2 + (nu == +1 ? 0 : 1)];
}

std::vector<skeleton::SkeletonState> BridgeSampler::sample(
    rng::Stream& stream) const {
  const int64_t steps = 2 * n_;
  std::vector<skeleton::SkeletonState> path;
  path.reserve(static_cast<size_t>(steps) + 1);
  skeleton::SkeletonState s{0, +1};
  path.push_back(s);
  for (int64_t k = 0; k < steps; ++k) {
    const auto trans = skeleton::skeleton_transition(s);
    const double w0 = trans[0].prob * backward_at(k + 1, trans[0].to.y, trans[0].to.nu);
    const double w1 = trans[1].prob * backward_at(k + 1, trans[1].to.y, trans[1].to.nu);
    const double u = stream.next_double() * (w0 + w1);
    s = u < w0 ? trans[0].to : trans[1].to;
    path.push_back(s);
  }
  return path;
}

ConditionalSResult conditional_s_probability(int64_t q,
                                             const std::vector<int>& f_table,
                                             int64_t n, double scale_c,
                                             int64_t n_samples, uint64_t seed) {
  validate(EnvironmentSpec::periodic(q, f_table));
  if (n < 1 || n_samples < 1)
    throw Error(ErrorCode::InvalidParam, "need n >= 1 and n_samples >= 1");
  const double threshold = scale_c * std::sqrt(static_cast<double>(n));
  int64_t accepted = 0, satisfied = 0;
  for (int64_t i = 0; i < n_samples; ++i) {
    rng::Stream stream = rng::Stream::derive(seed, static_cast<uint64_t>(i));
    const auto path = skeleton::simulate_skeleton(2 * n, stream);
    const auto& prev = path[path.size() - 2];
    const auto& last = path.back();
    if (!(prev.y == -1 && prev.nu == -1 && last.y == 0 && last.nu == +1))
      continue;
    ++accepted;
    const auto s = s_functionals(path, q, f_table);
    if (static_cast<double>(std::abs(s.s_e) + std::abs(s.s_o)) <= threshold)
      ++satisfied;
  }
  if (accepted == 0)
    throw Error(ErrorCode::ZeroAcceptance, "no Z_n hit in the sample budget");
  const double est = static_cast<double>(satisfied) / static_cast<double>(accepted);
  return ConditionalSResult{
      est, std::sqrt(est * (1.0 - est) / static_cast<double>(accepted)),
      static_cast<double>(accepted) / static_cast<double>(n_samples), accepted};
}

bool constrained_path_filter(const std::vector<skeleton::SkeletonState>& path,
                             int64_t q, const std::vector<int>& f_table,
                             double scale_c) {
  if (path.size() < 3 || path.size() % 2 == 0) return false;
  const int64_t n = (static_cast<int64_t>(path.size()) - 1) / 2;
  if (!(path.front().y == 0 && path.front().nu == +1)) return false;
  const auto& prev = path[path.size() - 2];
  const auto& last = path.back();
  if (!(prev.y == -1 && prev.nu == -1 && last.y == 0 && last.nu == +1))
    return false;
  const auto s = s_functionals(path, q, f_table);
  return static_cast<double>(std::abs(s.s_e) + std::abs(s.s_o)) <=
         scale_c * std::sqrt(static_cast<double>(n));
}

RecurrenceDiagnostic recurrence_diagnostic(const EnvironmentSpec& spec,
                                           const std::vector<int64_t>& n_grid,
                                           Method method, uint64_t seed,
                                           int64_t mc_samples) {
  validate(spec);
  if (n_grid.size() < 3)
    throw Error(ErrorCode::InvalidParam, "need at least 3 grid points");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()))
    throw Error(ErrorCode::InvalidParam, "n_grid must be increasing");
  RecurrenceDiagnostic diag;
  for (size_t gi = 0; gi < n_grid.size(); ++gi) {
    const int64_t n = n_grid[gi];
    if (method == Method::ExactDP) {
      const auto r = oracle::joint_pn_exact(spec, n);
      diag.rows.push_back({n, r.p_n, 0.0});
    } else {
      int64_t hits = 0;
      for (int64_t i = 0; i < mc_samples; ++i) {
        rng::Stream stream = rng::Stream::derive(
            seed, (static_cast<uint64_t>(gi) << 40) + static_cast<uint64_t>(i));
        const auto path = skeleton::simulate_skeleton(2 * n, stream);
        if (path.back().y != 0) continue;
        const auto xs = embedded::simulate_embedded(path, spec, stream);
        if (xs.back() == 0) ++hits;
      }
      const double p = static_cast<double>(hits) / static_cast<double>(mc_samples);
      diag.rows.push_back(
          {n, p, std::sqrt(p * (1.0 - p) / static_cast<double>(mc_samples))});
    }
  }
  // fit the upper half of the grid only, to reduce small-n bias
  std::vector<double> lx, ly;
  for (size_t i = diag.rows.size() / 2; i < diag.rows.size(); ++i) {
    if (diag.rows[i].p <= 0.0)
      throw Error(ErrorCode::InvalidParam, "p_n vanished; cannot fit exponent");
    lx.push_back(std::log(static_cast<double>(diag.rows[i].n)));
    ly.push_back(std::log(diag.rows[i].p));
  }
  if (lx.size() < 3)
    for (size_t i = 0; i < diag.rows.size() && lx.size() < 3; ++i) {
      lx.push_back(std::log(static_cast<double>(diag.rows[i].n)));
      ly.push_back(std::log(diag.rows[i].p));
    }
  const auto fit = stats::least_squares(lx, ly);
  diag.exponent = -fit.slope;
  diag.exponent_stderr = fit.slope_stderr;
  diag.ci_low = diag.exponent - 1.96 * fit.slope_stderr;
  diag.ci_high = diag.exponent + 1.96 * fit.slope_stderr;
  return diag;
}

}  // namespace hcwalk::experiments
