#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hcwalk/errors.hpp"

namespace hcwalk {

enum class Regime { Rademacher, Periodic, Perturbed };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

// Immutable description of the row-orientation environment. Two specs with
// equal fields yield identical orientation functions.
struct EnvironmentSpec {
  Regime regime = Regime::Rademacher;
  uint64_t seed = 0;                 // Rademacher, Perturbed
  int64_t period = 0;                // Q; Periodic, Perturbed
  std::vector<int> f_table;          // Q entries in {-1,+1}, zero sum
  double c = 0.0;                    // Perturbed
  double beta = 1.0;                 // Perturbed

  static EnvironmentSpec rademacher(uint64_t seed);
  static EnvironmentSpec periodic(int64_t q, std::vector<int> f);
  static EnvironmentSpec perturbed(int64_t q, std::vector<int> f, double c,
                                   double beta, uint64_t seed);
};

// Throws Error{InvalidPeriod, NonZeroSum, InvalidParam} on violation.
void validate(const EnvironmentSpec& spec);

// min(1, c/|y|^beta) for y != 0, min(1, c) at y = 0.
double perturbation_probability(double c, double beta, int64_t y);

// Pure function of (spec, y); +1 right-directed row, -1 left-directed.
int orientation(const EnvironmentSpec& spec, int64_t y);

struct MaterializedEnvironment {
  int64_t y_min = 0;
  int64_t y_max = 0;
  std::vector<int> orientations;  // index y - y_min
  uint64_t digest = 0;            // stable FNV-1a over (y, orientation) pairs

  int at(int64_t y) const { return orientations[static_cast<size_t>(y - y_min)]; }
};

MaterializedEnvironment materialize(const EnvironmentSpec& spec, int64_t y_min,
                                    int64_t y_max);

// Digest of the spec itself (regime, parameters), for provenance lines.
uint64_t spec_digest(const EnvironmentSpec& spec);

std::string to_hex(uint64_t v);

}  // namespace hcwalk
