#pragma once

#include <cstdint>
#include <vector>

#include "hcwalk/environment.hpp"
#include "hcwalk/skeleton.hpp"

namespace hcwalk::lattice {

struct Vertex {
  int64_t x = 0;
  int64_t y = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Every vertex keeps exactly one vertical edge: up if x+y is odd, down if
// x+y is even.
Vertex vertical_neighbor(const Vertex& v);

struct OutEdges {
  Vertex horizontal;  // (x + orientation(y), y)
  Vertex vertical;
};

OutEdges out_edges(const Vertex& v, const EnvironmentSpec& spec);

struct WalkTrace {
  Vertex start{0, 0};
  int64_t n_steps = 0;
  int64_t n_returns = 0;
  int64_t first_return = -1;  // step index of first return to start, -1 if none
  int64_t n_vertical = 0;

  // Detailed records, kept while n_vertical <= record_limit.
  bool detailed = true;
  std::vector<int64_t> returns_to_origin;      // step indices l with M_l = start
  std::vector<int64_t> vertical_step_times;    // T_1 < T_2 < ...
  std::vector<int64_t> run_lengths;            // horizontal run before each vertical step
  std::vector<skeleton::SkeletonState> skeleton_path;  // (Y_k, nu_k) at T_k, k >= 1
  std::vector<int64_t> embedded_values;        // X_k = abscissa at T_k, k >= 1
};

inline constexpr int64_t kDefaultRecordLimit = int64_t{1} << 22;

WalkTrace simulate_walk(const EnvironmentSpec& spec, int64_t n_steps,
                        uint64_t walk_seed,
                        int64_t record_limit = kDefaultRecordLimit);

// Coupling identity: replaying the trace's horizontal runs through the
// environment must reproduce the recorded embedded values, the recorded
// skeleton levels must follow Y_k = Y_{k-1} + nu_k, and the directions must
// obey the run-parity law (even run reverses, odd run repeats).
bool decompose_check(const WalkTrace& trace, const EnvironmentSpec& spec);

}  // namespace hcwalk::lattice
