#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "hcwalk/environment.hpp"
#include "hcwalk/skeleton.hpp"

namespace hcwalk::embedded {

enum class GeomKind { Odd, Even };

// P(xi_o = 2k+1) = P(xi_e = 2k) = 3 (1/2)^{2k+2}.
double pmf(GeomKind kind, int64_t value);
bool in_support(GeomKind kind, int64_t value);

struct Moments {
  double mean;
  double variance;
};

// Odd: mean 5/3; Even: mean 2/3; both have variance 16/9.
Moments moments(GeomKind kind);

inline constexpr double kMeanOdd = 5.0 / 3.0;
inline constexpr double kMeanEven = 2.0 / 3.0;
inline constexpr double kVarOdd = 16.0 / 9.0;
inline constexpr double kVarEven = 16.0 / 9.0;

int64_t sample(GeomKind kind, rng::Stream& stream);

// chi_o(theta) = 3 e^{i theta} / (4 - e^{2 i theta}); chi_e = e^{-i theta} chi_o.
std::complex<double> charfn(GeomKind kind, double theta);

// |chi_o(theta)| = |chi_e(theta)| = 3 / sqrt(17 - 8 cos 2 theta).
double modulus_r(double theta);

// phi_o(t) = 3 e^t / (4 - e^{2t}) on t < ln 2; phi_e = e^{-t} phi_o.
double mgf(GeomKind kind, double t);

struct PathStats {
  int64_t n_o_plus = 0;
  int64_t n_o_minus = 0;
  int64_t n_e_plus = 0;
  int64_t n_e_minus = 0;

  int64_t delta_o() const { return n_o_plus - n_o_minus; }
  int64_t delta_e() const { return n_e_plus - n_e_minus; }
  int64_t sigma_o() const { return n_o_plus + n_o_minus; }
  int64_t sigma_e() const { return n_e_plus + n_e_minus; }
  int64_t total() const { return sigma_o() + sigma_e(); }

  // m_o Delta_o + m_e Delta_e, the signed-mean drift of X
  double drift() const { return kMeanOdd * delta_o() + kMeanEven * delta_e(); }
};

// Transition k -> k+1 contributes by the orientation at level Y_k (the level
// where the horizontal run occurs); Odd when the direction persists.
PathStats path_stats(const std::vector<skeleton::SkeletonState>& path,
                     const EnvironmentSpec& spec);

// Quenched characteristic function of X given the path statistics:
// chi_e(t)^{Ne+} chi_o(t)^{No+} chi_e(-t)^{Ne-} chi_o(-t)^{No-}.
std::complex<double> conditional_charfn(const PathStats& stats, double theta);

enum class Support { AllIntegers, EvenIntegers };

struct InversionResult {
  double value;
  double error_estimate;  // change under last resolution doubling
  int64_t n_quad;
};

InversionResult return_prob_inversion(const PathStats& stats, Support support,
                                      int64_t n_quad = 256,
                                      double tolerance = 1e-12);

struct GaussianApprox {
  double a_n;       // m_o Delta_o + m_e Delta_e
  double b_n;       // sqrt(s_o^2 Sigma_o + s_e^2 Sigma_e)
  double p_approx;  // 2/(B sqrt(2 pi)) exp(-(A/B)^2/2)
};

GaussianApprox gaussian_approx(const PathStats& stats);

struct ChernoffBound {
  double t;             // the optimized tilt
  double raw_bound;     // phi product; rigorous Markov bound on P(X_{2n}=0)
  double expansion_bound;  // exp(t A_n + t^2 s^2 n), the quadratic form
};

ChernoffBound chernoff_bound(const PathStats& stats, int64_t n, double delta3);

// Jump at transition k -> k+1: sign = orientation at Y_k, kind by persistence.
// Returns X_0..X_{L-1} for a path of length L.
std::vector<int64_t> simulate_embedded(
    const std::vector<skeleton::SkeletonState>& path,
    const EnvironmentSpec& spec, rng::Stream& stream);
std::vector<int64_t> simulate_embedded(
    const std::vector<skeleton::SkeletonState>& path,
    const EnvironmentSpec& spec, uint64_t seed);

}  // namespace hcwalk::embedded
