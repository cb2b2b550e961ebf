#include "hcwalk/embedded.hpp"

#include <cmath>

namespace hcwalk::embedded {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

bool in_support(GeomKind kind, int64_t value) {
  if (value < 0) return false;
  const bool even = (value % 2 == 0);
  return kind == GeomKind::Even ? even : !even;
}

double pmf(GeomKind kind, int64_t value) {
  if (!in_support(kind, value)) return 0.0;
  const int64_t k = kind == GeomKind::Odd ? (value - 1) / 2 : value / 2;
  return 3.0 * std::pow(0.5, 2.0 * static_cast<double>(k) + 2.0);
}

Moments moments(GeomKind kind) {
  if (kind == GeomKind::Odd) return {kMeanOdd, kVarOdd};
  return {kMeanEven, kVarEven};
}

int64_t sample(GeomKind kind, rng::Stream& stream) {
  // value = 2K + parity with K ~ Geometric(3/4) on {0,1,...}
  const double u = 1.0 - stream.next_double();  // (0, 1]
  const int64_t k = static_cast<int64_t>(std::floor(std::log(u) / std::log(0.25)));
  return kind == GeomKind::Odd ? 2 * k + 1 : 2 * k;
}

std::complex<double> charfn(GeomKind kind, double theta) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> chi_o =
      3.0 * std::exp(i * theta) / (4.0 - std::exp(2.0 * i * theta));
  if (kind == GeomKind::Odd) return chi_o;
  return std::exp(-i * theta) * chi_o;
}

double modulus_r(double theta) {
  return 3.0 / std::sqrt(17.0 - 8.0 * std::cos(2.0 * theta));
}

double mgf(GeomKind kind, double t) {
  if (t >= kLn2)
    throw Error(ErrorCode::DomainError, "mgf finite only for t < ln 2");
  const double phi_o = 3.0 * std::exp(t) / (4.0 - std::exp(2.0 * t));
  return kind == GeomKind::Odd ? phi_o : std::exp(-t) * phi_o;
}

PathStats path_stats(const std::vector<skeleton::SkeletonState>& path,
                     const EnvironmentSpec& spec) {
  if (path.size() < 2)
    throw Error(ErrorCode::InvalidParam, "path must have length >= 2");
  PathStats stats;
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const bool plus = orientation(spec, path[k].y) == +1;
    const bool persists = path[k].nu == path[k + 1].nu;
    if (persists)
      (plus ? stats.n_o_plus : stats.n_o_minus) += 1;
    else
      (plus ? stats.n_e_plus : stats.n_e_minus) += 1;
  }
  return stats;
}

std::complex<double> conditional_charfn(const PathStats& stats, double theta) {
  // log-modulus / argument accumulation keeps huge powers finite
  double log_mod = 0.0, arg = 0.0;
  const auto add = [&](GeomKind kind, double th, int64_t count) {
    if (count == 0) return;
    const std::complex<double> chi = charfn(kind, th);
    log_mod += static_cast<double>(count) * std::log(std::abs(chi));
    arg += static_cast<double>(count) * std::arg(chi);
  };
  add(GeomKind::Even, theta, stats.n_e_plus);
  add(GeomKind::Odd, theta, stats.n_o_plus);
  add(GeomKind::Even, -theta, stats.n_e_minus);
  add(GeomKind::Odd, -theta, stats.n_o_minus);
  const double mod = std::exp(log_mod);
  return {mod * std::cos(arg), mod * std::sin(arg)};
}

InversionResult return_prob_inversion(const PathStats& stats, Support support,
                                      int64_t n_quad, double tolerance) {
  if (n_quad < 64) throw Error(ErrorCode::InvalidParam, "n_quad must be >= 64");
  // Trapezoid on the periodic integrand; the quadrature value with N nodes
  // equals the exact probability plus aliasing terms P(X = +-mN), so
  // resolution doubling converges spectrally.
  const double period = support == Support::AllIntegers ? 2.0 * M_PI : M_PI;
  const auto eval = [&](int64_t n_nodes) {
    double sum = 0.0;
    for (int64_t j = 0; j < n_nodes; ++j) {
      const double theta =
          -period / 2.0 + period * static_cast<double>(j) / static_cast<double>(n_nodes);
      sum += conditional_charfn(stats, theta).real();
    }
    return sum / static_cast<double>(n_nodes);
  };
  double prev = eval(n_quad);
  for (int64_t n = 2 * n_quad; n <= (int64_t{1} << 20); n *= 2) {
    const double cur = eval(n);
    if (std::abs(cur - prev) < tolerance)
      return InversionResult{cur, std::abs(cur - prev), n};
    prev = cur;
  }
  throw Error(ErrorCode::QuadratureNotConverged,
              "inversion did not stabilize below tolerance");
}

GaussianApprox gaussian_approx(const PathStats& stats) {
  const double a = stats.drift();
  const double b2 = kVarOdd * static_cast<double>(stats.sigma_o()) +
                    kVarEven * static_cast<double>(stats.sigma_e());
  if (b2 <= 0.0)
    throw Error(ErrorCode::DegenerateVariance, "B_n vanishes");
  const double b = std::sqrt(b2);
  const double p =
      2.0 / (b * std::sqrt(2.0 * M_PI)) * std::exp(-0.5 * (a / b) * (a / b));
  return GaussianApprox{a, b, p};
}

ChernoffBound chernoff_bound(const PathStats& stats, int64_t n, double delta3) {
  if (!(delta3 > 0.0 && delta3 < 0.5))
    throw Error(ErrorCode::InvalidParam, "require 0 < delta3 < 1/2");
  const double s2 = std::max(kVarOdd, kVarEven);
  const double drift = stats.drift();
  double t = -std::pow(static_cast<double>(n), delta3 - 0.5) / (2.0 * s2);
  if (drift < 0.0) t = -t;
  if (drift == 0.0) t = 0.0;
  if (std::abs(t) >= kLn2)
    throw Error(ErrorCode::DomainError, "optimized tilt outside mgf domain");
  const auto log_phi = [](GeomKind kind, double tt) {
    return std::log(mgf(kind, tt));
  };
  const double log_raw =
      static_cast<double>(stats.n_o_plus) * log_phi(GeomKind::Odd, t) +
      static_cast<double>(stats.n_e_plus) * log_phi(GeomKind::Even, t) +
      static_cast<double>(stats.n_o_minus) * log_phi(GeomKind::Odd, -t) +
      static_cast<double>(stats.n_e_minus) * log_phi(GeomKind::Even, -t);
  const double log_expansion =
      t * drift + t * t * s2 * static_cast<double>(n);
  return ChernoffBound{t, std::exp(log_raw), std::exp(log_expansion)};
}

std::vector<int64_t> simulate_embedded(
    const std::vector<skeleton::SkeletonState>& path,
    const EnvironmentSpec& spec, rng::Stream& stream) {
  std::vector<int64_t> xs;
  xs.reserve(path.size());
  int64_t x = 0;
  xs.push_back(x);
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const GeomKind kind =
        path[k].nu == path[k + 1].nu ? GeomKind::Odd : GeomKind::Even;
    x += orientation(spec, path[k].y) * sample(kind, stream);
    xs.push_back(x);
  }
  return xs;
}

std::vector<int64_t> simulate_embedded(
    const std::vector<skeleton::SkeletonState>& path,
    const EnvironmentSpec& spec, uint64_t seed) {
  rng::Stream stream(seed);
  return simulate_embedded(path, spec, stream);
}

}  // namespace hcwalk::embedded
