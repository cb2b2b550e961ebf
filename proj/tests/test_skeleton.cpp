#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hcwalk/oracle.hpp"
#include "hcwalk/skeleton.hpp"

using namespace hcwalk;
using namespace hcwalk::skeleton;

TEST_CASE("transition law from both directions") {
  const auto up = skeleton_transition({0, +1});
  CHECK(up[0].to == SkeletonState{1, +1});
  CHECK(up[0].prob == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(up[1].to == SkeletonState{-1, -1});
  CHECK(up[1].prob == doctest::Approx(2.0 / 3).epsilon(1e-15));

  const auto down = skeleton_transition({5, -1});
  CHECK(down[0].to == SkeletonState{4, -1});
  CHECK(down[0].prob == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(down[1].to == SkeletonState{6, +1});
  CHECK(down[1].prob == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(up[0].prob + up[1].prob == doctest::Approx(1.0));
}

TEST_CASE("simulation starts at (0,+1) and sums increments") {
  const auto trivial = simulate_skeleton(0, 4);
  REQUIRE(trivial.size() == 1);
  CHECK(trivial[0] == SkeletonState{0, +1});

  const auto path = simulate_skeleton(2000, 99);
  int64_t y = 0;
  for (size_t k = 1; k < path.size(); ++k) {
    y += path[k].nu;
    CHECK(path[k].y == y);
    CHECK(std::abs(path[k].y - path[k - 1].y) == 1);
  }
}

TEST_CASE("empirical persistence frequency is 1/3") {
  const auto path = simulate_skeleton(1000000, 5);
  int64_t persist = 0;
  for (size_t k = 1; k + 1 < path.size(); ++k)
    if (path[k].nu == path[k + 1].nu) ++persist;
  const double n = static_cast<double>(path.size() - 2);
  const double freq = persist / n;
  CHECK(std::abs(freq - 1.0 / 3) < 3.0 * std::sqrt((1.0 / 3) * (2.0 / 3) / n));
}

TEST_CASE("occupation stats match the hand-counted example") {
  const std::vector<SkeletonState> path{{0, +1}, {1, +1}, {0, -1}};
  const auto st = occupation_stats(path);
  CHECK(st.eta_total(0) == 2);
  CHECK(st.eta_total(1) == 1);
  CHECK(st.m_o.at(0) == 1);
  CHECK(st.m_e.at(1) == 1);
}

TEST_CASE("occupation identities on a sampled path") {
  const auto path = simulate_skeleton(5000, 11);
  const auto st = occupation_stats(path);
  int64_t eta_sum = 0;
  for (const auto& [y, counts] : st.eta) eta_sum += counts.first + counts.second;
  CHECK(eta_sum == static_cast<int64_t>(path.size()));
  // m_o(y) + m_e(y) = eta_{n-1}(y): visits with successor information
  const auto head = std::vector<SkeletonState>(path.begin(), path.end() - 1);
  const auto st_head = occupation_stats(head);
  for (const auto& [y, counts] : st_head.eta) {
    int64_t mo = st.m_o.count(y) ? st.m_o.at(y) : 0;
    int64_t me = st.m_e.count(y) ? st.m_e.at(y) : 0;
    CHECK(mo + me == counts.first + counts.second);
  }
}

TEST_CASE("two-step return probability is exactly 2/3") {
  // enumeration of the 4 two-step paths: up-down 2/9, down-up 4/9
  const double enumerated = (1.0 / 3) * (2.0 / 3) + (2.0 / 3) * (2.0 / 3);
  CHECK(std::abs(enumerated - 2.0 / 3) < 1e-16);
  CHECK(std::abs(return_prob_exact(1) - enumerated) < 1e-14);
}

TEST_CASE("odd horizons carry no mass at the origin") {
  for (int64_t n : {1, 3, 7, 15}) {
    const auto grid = oracle::skeleton_distribution_exact(n);
    CHECK(grid.at(0, +1) + grid.at(0, -1) == 0.0);
  }
}

TEST_CASE("exact DP matches Monte Carlo at n=50") {
  const double exact = return_prob_exact(50);
  int64_t hits = 0;
  const int64_t n_paths = 1000000;
  for (int64_t i = 0; i < n_paths; ++i) {
    auto s = rng::Stream::derive(4242, static_cast<uint64_t>(i));
    const auto path = simulate_skeleton(100, s);
    if (path.back().y == 0) ++hits;
  }
  const double freq = static_cast<double>(hits) / static_cast<double>(n_paths);
  const double se = std::sqrt(exact * (1 - exact) / static_cast<double>(n_paths));
  CHECK(std::abs(freq - exact) < 4 * se);
}

TEST_CASE("tilted matrix spectrum at zero") {
  const auto tm = tilted_matrix(0.0);
  CHECK(tm.lambda1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tm.lambda2 == doctest::Approx(-1.0 / 3).epsilon(1e-14));
  CHECK(tm.m[0][0] == doctest::Approx(1.0 / 3));
  CHECK(tm.m[0][1] == doctest::Approx(2.0 / 3));
}

TEST_CASE("second derivative of the leading eigenvalue at zero is 1/2") {
  const auto l1 = [](double t) { return tilted_matrix(t).lambda1; };
  // Richardson-extrapolated central differences
  const double h = 1e-3;
  const double d_h = (l1(h) - 2.0 * l1(0.0) + l1(-h)) / (h * h);
  const double d_h2 = (l1(h / 2) - 2.0 * l1(0.0) + l1(-h / 2)) / (h * h / 4);
  const double richardson = (4.0 * d_h2 - d_h) / 3.0;
  CHECK(std::abs(richardson - 0.5) < 1e-6);
}

TEST_CASE("MGF basics and small-n enumeration oracle") {
  CHECK(mgf_Y_exact(1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mgf_Y_exact(17, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double t : {-0.7, -0.2, 0.3, 0.9}) {
    // 4 two-step paths from (0,+1): uu e^{2t}/9, ud 2/9, du 4/9, dd e^{-2t} 2/9
    const double direct = std::exp(2 * t) / 9.0 + 2.0 / 9.0 + 4.0 / 9.0 +
                          2.0 / 9.0 * std::exp(-2 * t);
    CHECK(mgf_Y_exact(1, t) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("log-MGF growth rate approaches log lambda1") {
  const double t = 0.1;
  const double rate = log_mgf_Y_exact(500, t) / 1000.0;
  CHECK(std::abs(rate - std::log(tilted_matrix(t).lambda1)) < 1e-3);
}

TEST_CASE("return series agrees with the distribution oracle") {
  const auto series = return_probability_series(SkeletonState{0, +1}, 12);
  CHECK(series[0] == 1.0);
  for (int64_t k = 1; k <= 12; ++k) {
    // independent route: full distribution of (Y_k, nu_k), mass back at (0,+1)
    const auto grid = oracle::skeleton_distribution_exact(k);
    CHECK(std::abs(series[static_cast<size_t>(k)] - grid.at(0, +1)) < 1e-12);
  }
}

TEST_CASE("green function basics") {
  CHECK(green_function({0, +1}, 0.0).value == doctest::Approx(1.0));
  // G(s) sqrt(1-s) stabilizes as s -> 1: consecutive changes shrink and the
  // finest pair agrees within 5%
  std::vector<double> scaled;
  for (double s : {0.99, 0.999, 0.9999}) {
    const auto g = green_function({0, +1}, s, 0, 1e-3);
    scaled.push_back(g.value * std::sqrt(1.0 - s));
    const double es = 1.0 - 1.0 / g.value;  // E(s^sigma)
    CHECK(es > 0.0);
    CHECK(es < 1.0);
  }
  const double d1 = std::abs(scaled[1] - scaled[0]) / scaled[0];
  const double d2 = std::abs(scaled[2] - scaled[1]) / scaled[1];
  CHECK(d2 < d1);
  CHECK(d2 < 0.05);
}

TEST_CASE("green function reports truncation that is too coarse") {
  try {
    green_function({0, +1}, 0.999, 100, 1e-6);
    FAIL("expected TruncationTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationTooCoarse);
  }
}

TEST_CASE("first-return transform is monotone and two-step dominated") {
  const auto a = first_return_laplace({0, +1}, 0.5);
  const auto b = first_return_laplace({0, +1}, 1.0);
  CHECK(a.value > b.value);
  // at t=5 the transform is dominated by sigma=2 returns: P(sigma=2)=2/3
  const auto big = first_return_laplace({0, +1}, 5.0);
  CHECK(big.value == doctest::Approx(std::exp(-10.0) * 2.0 / 3).epsilon(1e-3));
}

TEST_CASE("sigma returns on a fixed path") {
  const std::vector<SkeletonState> path{
      {0, +1}, {1, +1}, {0, -1}, {-1, -1}, {0, +1}};
  CHECK(sigma_returns(path) == std::vector<int64_t>{2, 4});
  const auto sampled = simulate_skeleton(10000, 3);
  for (int64_t k : sigma_returns(sampled)) CHECK(k % 2 == 0);
}
