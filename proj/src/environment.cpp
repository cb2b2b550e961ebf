#include "hcwalk/environment.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "hcwalk/rng.hpp"

namespace hcwalk {

namespace {

// Stream tags separating the Bernoulli perturbation draws from the
// Rademacher values. A Perturbed spec with p(y) = 1 everywhere reproduces
// the Rademacher environment of the same seed.
constexpr uint64_t kTagRademacher = 0x52414445u;  // "RADE"
constexpr uint64_t kTagBernoulli = 0x4245524Eu;   // "BERN"

int rademacher_value(uint64_t seed, int64_t y) {
  uint64_t h = rng::keyed(seed ^ kTagRademacher, rng::signed_to_u64(y));
  return (h & 1ULL) ? +1 : -1;
}

int64_t math_mod(int64_t y, int64_t q) {
  int64_t m = y % q;
  return m < 0 ? m + q : m;
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Rademacher: return "rademacher";
    case Regime::Periodic: return "periodic";
    case Regime::Perturbed: return "perturbed";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "rademacher") return Regime::Rademacher;
  if (s == "periodic") return Regime::Periodic;
  if (s == "perturbed") return Regime::Perturbed;
  throw Error(ErrorCode::ConfigError, "unknown regime '" + s + "'");
}

EnvironmentSpec EnvironmentSpec::rademacher(uint64_t seed) {
  EnvironmentSpec s;
  s.regime = Regime::Rademacher;
  s.seed = seed;
  return s;
}

EnvironmentSpec EnvironmentSpec::periodic(int64_t q, std::vector<int> f) {
  EnvironmentSpec s;
  s.regime = Regime::Periodic;
  s.period = q;
  s.f_table = std::move(f);
  return s;
}

EnvironmentSpec EnvironmentSpec::perturbed(int64_t q, std::vector<int> f,
                                           double c, double beta,
                                           uint64_t seed) {
  EnvironmentSpec s;
  s.regime = Regime::Perturbed;
  s.period = q;
  s.f_table = std::move(f);
  s.c = c;
  s.beta = beta;
  s.seed = seed;
  return s;
}

void validate(const EnvironmentSpec& spec) {
  if (spec.regime == Regime::Periodic || spec.regime == Regime::Perturbed) {
    if (spec.period <= 1 || spec.period % 2 != 0)
      throw Error(ErrorCode::InvalidPeriod,
                  "period Q must be even and > 1, got " + std::to_string(spec.period));
    if (static_cast<int64_t>(spec.f_table.size()) != spec.period)
      throw Error(ErrorCode::InvalidParam,
                  "f_table must have exactly Q entries");
    int64_t sum = 0;
    for (int v : spec.f_table) {
      if (v != -1 && v != 1)
        throw Error(ErrorCode::InvalidParam, "f_table entries must be -1 or +1");
      sum += v;
    }
    if (sum != 0)
      throw Error(ErrorCode::NonZeroSum,
                  "f_table entries must sum to 0, got " + std::to_string(sum));
  }
  if (spec.regime == Regime::Perturbed) {
    if (spec.c < 0.0)
      throw Error(ErrorCode::InvalidParam, "c must be >= 0");
    if (!(spec.beta > 0.0))
      throw Error(ErrorCode::InvalidParam, "beta must be > 0");
  }
}

double perturbation_probability(double c, double beta, int64_t y) {
  if (c < 0.0 || !(beta > 0.0))
    throw Error(ErrorCode::InvalidParam, "require c >= 0 and beta > 0");
  if (y == 0) return std::min(1.0, c);
  double p = c / std::pow(std::abs(static_cast<double>(y)), beta);
  return std::min(1.0, p);
}

int orientation(const EnvironmentSpec& spec, int64_t y) {
  switch (spec.regime) {
    case Regime::Rademacher:
      return rademacher_value(spec.seed, y);
    case Regime::Periodic:
      return spec.f_table[static_cast<size_t>(math_mod(y, spec.period))];
    case Regime::Perturbed: {
      double p = perturbation_probability(spec.c, spec.beta, y);
      double u = rng::to_unit_double(
          rng::keyed(spec.seed ^ kTagBernoulli, rng::signed_to_u64(y)));
      if (u < p) return rademacher_value(spec.seed, y);
      return spec.f_table[static_cast<size_t>(math_mod(y, spec.period))];
    }
  }
  throw Error(ErrorCode::InvalidParam, "bad regime");
}

MaterializedEnvironment materialize(const EnvironmentSpec& spec, int64_t y_min,
                                    int64_t y_max) {
  validate(spec);
  if (y_min > y_max)
    throw Error(ErrorCode::RangeError, "y_min must be <= y_max");
  MaterializedEnvironment table;
  table.y_min = y_min;
  table.y_max = y_max;
  table.orientations.reserve(static_cast<size_t>(y_max - y_min + 1));
  uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a offset basis
  auto fnv = [&h](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001B3ULL;
    }
  };
  for (int64_t y = y_min; y <= y_max; ++y) {
    int o = orientation(spec, y);
    table.orientations.push_back(o);
    fnv(static_cast<uint64_t>(y));
    fnv(static_cast<uint64_t>(static_cast<int64_t>(o)));
  }
  table.digest = h;
  return table;
}

uint64_t spec_digest(const EnvironmentSpec& spec) {
  uint64_t h = rng::keyed(0x454E5653ULL, static_cast<uint64_t>(spec.regime));
  h = rng::keyed(h, spec.seed);
  h = rng::keyed(h, static_cast<uint64_t>(spec.period));
  for (int v : spec.f_table) h = rng::keyed(h, rng::signed_to_u64(v));
  uint64_t bits;
  static_assert(sizeof(double) == sizeof(uint64_t));
  std::memcpy(&bits, &spec.c, sizeof bits);
  h = rng::keyed(h, bits);
  std::memcpy(&bits, &spec.beta, sizeof bits);
  h = rng::keyed(h, bits);
  return h;
}

std::string to_hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace hcwalk
