#include "hcwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hcwalk::stats {

namespace {

double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q: bad args");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double chi_square_p_value(double stat, int dof) {
  if (dof <= 0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * stat);
}

ChiSquareResult chi_square_two_sample(const std::vector<double>& counts_a,
                                      const std::vector<double>& counts_b,
                                      double min_expected) {
  if (counts_a.size() != counts_b.size())
    throw std::invalid_argument("histogram size mismatch");
  // merge sparse bins left-to-right until the pooled count is large enough
  std::vector<std::pair<double, double>> bins;
  double acc_a = 0.0, acc_b = 0.0;
  for (size_t i = 0; i < counts_a.size(); ++i) {
    acc_a += counts_a[i];
    acc_b += counts_b[i];
    if (acc_a + acc_b >= 2.0 * min_expected) {
      bins.emplace_back(acc_a, acc_b);
      acc_a = acc_b = 0.0;
    }
  }
  if (acc_a + acc_b > 0.0) {
    if (bins.empty())
      bins.emplace_back(acc_a, acc_b);
    else {
      bins.back().first += acc_a;
      bins.back().second += acc_b;
    }
  }
  const double n_a = std::accumulate(bins.begin(), bins.end(), 0.0,
                                     [](double s, auto& p) { return s + p.first; });
  const double n_b = std::accumulate(bins.begin(), bins.end(), 0.0,
                                     [](double s, auto& p) { return s + p.second; });
  double stat = 0.0;
  for (auto& [a, b] : bins) {
    const double tot = a + b;
    const double ea = tot * n_a / (n_a + n_b);
    const double eb = tot * n_b / (n_a + n_b);
    stat += (a - ea) * (a - ea) / ea + (b - eb) * (b - eb) / eb;
  }
  const int dof = static_cast<int>(bins.size()) - 1;
  return ChiSquareResult{stat, dof, chi_square_p_value(stat, dof)};
}

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("least_squares: need >= 3 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss_res += r * r;
  }
  const double sigma2 = ss_res / (n - 2.0);
  return LineFit{slope, intercept, std::sqrt(sigma2 / sxx)};
}

double wilcoxon_signed_rank_p_greater(const std::vector<double>& values,
                                      double mu0) {
  std::vector<double> diffs;
  for (double v : values)
    if (v != mu0) diffs.push_back(v - mu0);
  const size_t n = diffs.size();
  if (n == 0) return 1.0;
  // ranks of |d|, ties averaged; doubled to stay integral
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    return std::abs(diffs[i]) < std::abs(diffs[j]);
  });
  std::vector<int64_t> rank2(n, 0);
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
    const int64_t sum2 = static_cast<int64_t>(i + 1 + j) * static_cast<int64_t>(j - i);
    for (size_t k = i; k < j; ++k) rank2[order[k]] = sum2 / static_cast<int64_t>(j - i);
    i = j;
  }
  int64_t w2 = 0, total2 = 0;
  for (size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (diffs[i] > 0) w2 += rank2[i];
  }
  // exact null: signs independent fair coins; count sign patterns by sum
  std::vector<double> count(static_cast<size_t>(total2) + 1, 0.0);
  count[0] = 1.0;
  int64_t reach = 0;
  for (size_t i = 0; i < n; ++i) {
    reach += rank2[i];
    for (int64_t s = reach; s >= rank2[i]; --s)
      count[static_cast<size_t>(s)] += count[static_cast<size_t>(s - rank2[i])];
  }
  double tail = 0.0, all = 0.0;
  for (int64_t s = 0; s <= total2; ++s) {
    all += count[static_cast<size_t>(s)];
    if (s >= w2) tail += count[static_cast<size_t>(s)];
  }
  return tail / all;
}

}  // namespace hcwalk::stats
