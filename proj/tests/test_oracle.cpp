#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "hcwalk/embedded.hpp"
#include "hcwalk/lattice_walk.hpp"
#include "hcwalk/oracle.hpp"
#include "hcwalk/stats.hpp"

using namespace hcwalk;
using namespace hcwalk::oracle;

namespace {

// Brute-force p_n: enumerate every skeleton direction sequence of length 2n,
// weight it by the chain, and convolve the jump kernels for P(X=0 | path).
double pn_enumeration(const EnvironmentSpec& spec, int64_t n) {
  const int64_t steps = 2 * n;
  double p = 0.0;
  for (uint64_t bits = 0; bits < (uint64_t{1} << steps); ++bits) {
    std::vector<skeleton::SkeletonState> path{{0, +1}};
    double prob = 1.0;
    for (int64_t k = 0; k < steps; ++k) {
      const auto trans = skeleton::skeleton_transition(path.back());
      const auto& tr = trans[(bits >> k) & 1];
      prob *= tr.prob;
      path.push_back(tr.to);
    }
    if (path.back().y != 0) continue;
    const auto st = embedded::path_stats(path, spec);
    // X = 0 mass by direct kernel convolution
    std::map<int64_t, double> dist{{0, 1.0}};
    const auto apply = [&](embedded::GeomKind kind, int sign, int64_t reps) {
      for (int64_t r = 0; r < reps; ++r) {
        std::map<int64_t, double> next;
        for (const auto& [x, m] : dist)
          for (int64_t k = 0; k <= 60; ++k) {
            const int64_t v = kind == embedded::GeomKind::Odd ? 2 * k + 1 : 2 * k;
            next[x + sign * v] += m * embedded::pmf(kind, v);
          }
        dist = std::move(next);
      }
    };
    apply(embedded::GeomKind::Odd, +1, st.n_o_plus);
    apply(embedded::GeomKind::Odd, -1, st.n_o_minus);
    apply(embedded::GeomKind::Even, +1, st.n_e_plus);
    apply(embedded::GeomKind::Even, -1, st.n_e_minus);
    p += prob * (dist.count(0) ? dist.at(0) : 0.0);
  }
  return p;
}

}  // namespace

TEST_CASE("skeleton distribution at small horizons") {
  const auto g1 = skeleton_distribution_exact(1);
  CHECK(g1.at(1, +1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(g1.at(-1, -1) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(g1.at(0, +1) == 0.0);
  CHECK(g1.total_mass == doctest::Approx(1.0).epsilon(1e-14));

  const auto big = skeleton_distribution_exact(10000);
  CHECK(std::abs(big.total_mass - 1.0) < 1e-12);
}

TEST_CASE("skeleton distribution matches simulation at n=9") {
  const auto grid = skeleton_distribution_exact(9);
  std::map<std::pair<int64_t, int>, int64_t> hist;
  const int64_t n = 1000000;
  for (int64_t i = 0; i < n; ++i) {
    auto s = rng::Stream::derive(1212, static_cast<uint64_t>(i));
    const auto path = skeleton::simulate_skeleton(9, s);
    ++hist[{path.back().y, path.back().nu}];
  }
  std::vector<double> observed, expected;
  for (int64_t y = -9; y <= 9; ++y)
    for (int nu : {+1, -1}) {
      const double p = grid.at(y, nu);
      if (p <= 0.0) continue;
      expected.push_back(p * static_cast<double>(n));
      const auto it = hist.find({y, nu});
      observed.push_back(it == hist.end() ? 0.0 : static_cast<double>(it->second));
    }
  // one-sample chi-square against the exact law
  double stat = 0.0;
  for (size_t i = 0; i < observed.size(); ++i)
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  const double pval = stats::chi_square_p_value(stat, static_cast<int>(observed.size()) - 1);
  CHECK(pval > 0.001);
}

TEST_CASE("full walk distribution basics") {
  for (const auto& spec :
       {EnvironmentSpec::periodic(2, {+1, -1}), EnvironmentSpec::rademacher(6)}) {
    const auto ps = full_walk_distribution(spec, 6);
    CHECK(ps[0] == 1.0);
    CHECK(ps[1] == 0.0);
    CHECK(ps[2] == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("full walk distribution equals brute-force path enumeration") {
  const auto spec = EnvironmentSpec::rademacher(321);
  const int64_t t_max = 10;
  const auto ps = full_walk_distribution(spec, t_max);
  std::vector<double> brute(static_cast<size_t>(t_max) + 1, 0.0);
  brute[0] = 1.0;
  for (int64_t t = 1; t <= t_max; ++t) {
    double hit = 0.0;
    for (uint64_t bits = 0; bits < (uint64_t{1} << t); ++bits) {
      lattice::Vertex v{0, 0};
      for (int64_t k = 0; k < t; ++k) {
        const auto e = lattice::out_edges(v, spec);
        v = ((bits >> k) & 1) ? e.vertical : e.horizontal;
      }
      if (v == lattice::Vertex{0, 0}) hit += 1.0;
    }
    brute[static_cast<size_t>(t)] = hit * std::pow(0.5, static_cast<double>(t));
  }
  for (int64_t t = 0; t <= t_max; ++t)
    CHECK(std::abs(ps[static_cast<size_t>(t)] - brute[static_cast<size_t>(t)]) < 1e-12);
}

TEST_CASE("full walk distribution agrees with Monte Carlo") {
  const auto spec = EnvironmentSpec::periodic(2, {+1, -1});
  const int64_t t_max = 12;
  const auto ps = full_walk_distribution(spec, t_max);
  std::vector<int64_t> hits(static_cast<size_t>(t_max) + 1, 0);
  const int64_t n = 200000;
  for (int64_t i = 0; i < n; ++i) {
    const auto tr = lattice::simulate_walk(spec, t_max, rng::keyed(5150, static_cast<uint64_t>(i)));
    for (int64_t l : tr.returns_to_origin)
      if (l <= t_max) ++hits[static_cast<size_t>(l)];
  }
  for (int64_t t = 2; t <= t_max; t += 2) {
    const double p = ps[static_cast<size_t>(t)];
    const double freq = static_cast<double>(hits[static_cast<size_t>(t)]) /
                        static_cast<double>(n);
    CHECK(std::abs(freq - p) <
          4 * std::sqrt(p * (1 - p) / static_cast<double>(n)) + 1e-9);
  }
}

TEST_CASE("full walk oracle enforces its resource limit") {
  try {
    full_walk_distribution(EnvironmentSpec::rademacher(1), 5000);
    FAIL("expected ResourceLimit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResourceLimit);
  }
}

TEST_CASE("joint p_n equals brute-force enumeration at small n") {
  const std::vector<EnvironmentSpec> specs{
      EnvironmentSpec::periodic(2, {+1, -1}),
      EnvironmentSpec::rademacher(9),
      EnvironmentSpec::perturbed(2, {+1, -1}, 1.0, 2.0, 3)};
  for (const auto& spec : specs)
    for (int64_t n = 1; n <= 3; ++n) {
      const auto r = joint_pn_exact(spec, n);
      CHECK(std::abs(r.p_n - pn_enumeration(spec, n)) < 1e-10);
      CHECK(r.deficit < 1e-9);
    }
}

TEST_CASE("joint p_n y-marginal is consistent with the skeleton DP") {
  const auto spec = EnvironmentSpec::periodic(2, {+1, -1});
  for (int64_t n : {10, 50, 120}) {
    const auto r = joint_pn_exact(spec, n, 1e-12);
    CHECK(std::abs(r.y_marginal_p - skeleton::return_prob_exact(n)) < 1e-11);
  }
}

TEST_CASE("periodic n times p_n stays bounded below") {
  const auto spec = EnvironmentSpec::periodic(2, {+1, -1});
  for (int64_t n : {50, 100, 200}) {
    const auto r = joint_pn_exact(spec, n);
    CHECK(n * r.p_n > 0.05);
    CHECK(n * r.p_n < 10.0);
  }
}

TEST_CASE("wbar stationary law and convergence") {
  const auto pi = wbar_stationary(2);
  double total = 0.0;
  for (double m : pi.mass) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  // direction-changing pairs carry (2/3)/(2Q), persisting (1/3)/(2Q)
  CHECK(pi.mass[wbar_index(2, 0, +1, -1)] == doctest::Approx((2.0 / 3) / 4).epsilon(1e-14));
  CHECK(pi.mass[wbar_index(2, 0, +1, +1)] == doctest::Approx((1.0 / 3) / 4).epsilon(1e-14));

  const auto f = std::vector<int>{+1, -1};
  const auto a = wbar_distribution_exact(2, f, 10000);
  const auto b = wbar_distribution_exact(2, f, 10001);
  WbarDistribution avg{2, a.mass};
  for (size_t i = 0; i < avg.mass.size(); ++i)
    avg.mass[i] = 0.5 * (a.mass[i] + b.mass[i]);
  CHECK(total_variation(avg, pi) <= 1e-8);
  double mass_a = 0.0;
  for (double m : a.mass) mass_a += m;
  CHECK(mass_a == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empirical wbar law approaches stationarity") {
  // sampled two-step-averaged law at a fixed large time vs pi
  const int64_t q = 2;
  const auto pi = wbar_stationary(q);
  std::vector<double> counts(pi.mass.size(), 0.0);
  const int64_t n_samples = 200000;
  for (int64_t i = 0; i < n_samples; ++i) {
    auto s = rng::Stream::derive(86, static_cast<uint64_t>(i));
    const auto path = skeleton::simulate_skeleton(41, s);
    for (size_t k : {40u, 41u}) {
      const auto& prev = path[k - 1];
      const auto& cur = path[k];
      const int64_t ybar = ((prev.y % q) + q) % q;
      counts[wbar_index(q, ybar, prev.nu, cur.nu)] += 0.5;
    }
  }
  double tv = 0.0;
  for (size_t i = 0; i < counts.size(); ++i)
    tv += std::abs(counts[i] / static_cast<double>(n_samples) - pi.mass[i]);
  CHECK(tv / 2.0 < 0.01);
}
