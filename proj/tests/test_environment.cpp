#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hcwalk/environment.hpp"

using namespace hcwalk;

TEST_CASE("validation accepts the minimal zero-sum even period") {
  CHECK_NOTHROW(validate(EnvironmentSpec::periodic(2, {+1, -1})));
}

TEST_CASE("validation rejects nonzero-sum tables") {
  try {
    validate(EnvironmentSpec::periodic(2, {+1, +1}));
    FAIL("expected NonZeroSum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonZeroSum);
  }
}

TEST_CASE("validation rejects odd periods") {
  try {
    validate(EnvironmentSpec::periodic(3, {+1, -1, +1}));
    FAIL("expected InvalidPeriod");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidPeriod);
  }
}

TEST_CASE("validation rejects bad perturbation parameters") {
  try {
    validate(EnvironmentSpec::perturbed(2, {+1, -1}, -0.5, 2.0, 1));
    FAIL("expected InvalidParam");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParam);
  }
  try {
    validate(EnvironmentSpec::perturbed(2, {+1, -1}, 1.0, 0.0, 1));
    FAIL("expected InvalidParam");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParam);
  }
}

TEST_CASE("periodic orientation uses the nonnegative modulus") {
  const auto spec = EnvironmentSpec::periodic(2, {+1, -1});
  CHECK(orientation(spec, -3) == -1);  // -3 mod 2 = 1
  for (int64_t y = -20; y <= 20; ++y)
    CHECK(orientation(spec, y) == orientation(spec, y + 2));
}

TEST_CASE("perturbation probability formula and clamping") {
  CHECK(perturbation_probability(1.0, 2.0, 4) == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK(perturbation_probability(5.0, 1.0, 2) == 1.0);
  CHECK(perturbation_probability(0.5, 1.5, 0) == 0.5);
}

TEST_CASE("perturbed with c=0 coincides with periodic everywhere") {
  const auto per = EnvironmentSpec::periodic(4, {+1, -1, -1, +1});
  const auto pert = EnvironmentSpec::perturbed(4, {+1, -1, -1, +1}, 0.0, 2.0, 99);
  for (int64_t y = -500; y <= 500; ++y)
    CHECK(orientation(pert, y) == orientation(per, y));
}

TEST_CASE("perturbed with p identically 1 matches the Rademacher stream") {
  const auto rad = EnvironmentSpec::rademacher(31);
  // c=1e9, beta tiny-ish: p(y) = min(1, c/|y|^beta) = 1 on |y| <= 500
  const auto pert = EnvironmentSpec::perturbed(2, {+1, -1}, 1e9, 0.5, 31);
  for (int64_t y = -500; y <= 500; ++y)
    CHECK(orientation(pert, y) == orientation(rad, y));
}

TEST_CASE("rademacher orientation is deterministic and order-independent") {
  const auto spec = EnvironmentSpec::rademacher(12345);
  const int first = orientation(spec, 5);
  CHECK(orientation(spec, 5) == first);
  (void)orientation(spec, 7);
  CHECK(orientation(spec, 5) == first);
}

TEST_CASE("materialize tabulates the periodic pattern") {
  const auto mat = materialize(EnvironmentSpec::periodic(2, {+1, -1}), 0, 3);
  CHECK(mat.at(0) == +1);
  CHECK(mat.at(1) == -1);
  CHECK(mat.at(2) == +1);
  CHECK(mat.at(3) == -1);
}

TEST_CASE("materialize is reproducible and digest-stable") {
  const auto spec = EnvironmentSpec::rademacher(777);
  const auto a = materialize(spec, 0, 10);
  const auto b = materialize(spec, 0, 10);
  CHECK(a.orientations == b.orientations);
  CHECK(a.digest == b.digest);
}

TEST_CASE("materialize rejects inverted ranges") {
  try {
    materialize(EnvironmentSpec::rademacher(1), 5, 4);
    FAIL("expected RangeError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RangeError);
  }
}

TEST_CASE("rademacher single-site marginal is balanced") {
  const auto spec = EnvironmentSpec::rademacher(2024);
  int64_t sum = 0;
  const int64_t half = 1000000;
  for (int64_t y = -half; y <= half; ++y) sum += orientation(spec, y);
  const double n = static_cast<double>(2 * half + 1);
  CHECK(std::abs(static_cast<double>(sum) / n) < 3.0 / std::sqrt(n));
}

TEST_CASE("spec digest separates regimes and parameters") {
  const auto a = spec_digest(EnvironmentSpec::periodic(2, {+1, -1}));
  const auto b = spec_digest(EnvironmentSpec::periodic(2, {-1, +1}));
  const auto c = spec_digest(EnvironmentSpec::rademacher(0));
  CHECK(a != b);
  CHECK(a != c);
}
