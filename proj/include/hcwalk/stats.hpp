#pragma once

#include <cstdint>
#include <vector>

namespace hcwalk::stats {

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

// P(chi2_dof >= stat).
double chi_square_p_value(double stat, int dof);

struct ChiSquareResult {
  double statistic;
  int dof;
  double p_value;
};

// Two-sample chi-square on aligned histograms; bins with a pooled expected
// count below min_expected are merged into their neighbour.
ChiSquareResult chi_square_two_sample(const std::vector<double>& counts_a,
                                      const std::vector<double>& counts_b,
                                      double min_expected = 5.0);

struct LineFit {
  double slope;
  double intercept;
  double slope_stderr;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y);

// One-sample Wilcoxon signed-rank, exact null distribution; p-value for the
// alternative "median > mu0". Zero differences are dropped; ties share
// average ranks (p-value then via the same exact-count recursion on the
// doubled-rank lattice).
double wilcoxon_signed_rank_p_greater(const std::vector<double>& values,
                                      double mu0);

}  // namespace hcwalk::stats
