#include "hcwalk/lattice_walk.hpp"

namespace hcwalk::lattice {

Vertex vertical_neighbor(const Vertex& v) {
  const bool odd = ((v.x + v.y) & 1) != 0;
  return Vertex{v.x, odd ? v.y + 1 : v.y - 1};
}

OutEdges out_edges(const Vertex& v, const EnvironmentSpec& spec) {
  return OutEdges{Vertex{v.x + orientation(spec, v.y), v.y},
                  vertical_neighbor(v)};
}

WalkTrace simulate_walk(const EnvironmentSpec& spec, int64_t n_steps,
                        uint64_t walk_seed, int64_t record_limit) {
  validate(spec);
  WalkTrace trace;
  trace.n_steps = n_steps;
  rng::Stream stream(walk_seed);
  Vertex pos = trace.start;
  int64_t run = 0;  // horizontal steps since the last vertical step
  for (int64_t l = 1; l <= n_steps; ++l) {
    if (stream.next_coin()) {
      pos.x += orientation(spec, pos.y);
      ++run;
    } else {
      pos = vertical_neighbor(pos);
      ++trace.n_vertical;
      if (trace.detailed) {
        trace.vertical_step_times.push_back(l);
        trace.run_lengths.push_back(run);
        const int nu = trace.skeleton_path.empty()
                           ? (pos.y > trace.start.y ? +1 : -1)
                           : (pos.y > trace.skeleton_path.back().y ? +1 : -1);
        trace.skeleton_path.push_back({pos.y, nu});
        trace.embedded_values.push_back(pos.x);
        if (trace.n_vertical > record_limit) {
          trace.detailed = false;
          trace.vertical_step_times.clear();
          trace.run_lengths.clear();
          trace.skeleton_path.clear();
          trace.embedded_values.clear();
        }
      }
      run = 0;
    }
    if (pos == trace.start) {
      ++trace.n_returns;
      if (trace.first_return < 0) trace.first_return = l;
      if (trace.detailed) trace.returns_to_origin.push_back(l);
    }
  }
  return trace;
}

bool decompose_check(const WalkTrace& trace, const EnvironmentSpec& spec) {
  if (!trace.detailed) return false;
  const size_t n = trace.skeleton_path.size();
  if (trace.vertical_step_times.size() != n || trace.run_lengths.size() != n ||
      trace.embedded_values.size() != n)
    return false;
  int64_t x = trace.start.x, y = trace.start.y;
  int nu = +1;  // notional arrival at the start via an up-step
  int64_t t = 0;
  for (size_t k = 0; k < n; ++k) {
    const int64_t run = trace.run_lengths[k];
    x += run * orientation(spec, y);
    // parity law forced by the edge-removal rule
    const int nu_next = (run % 2 == 0) ? -nu : nu;
    y += nu_next;
    nu = nu_next;
    t += run + 1;
    if (trace.vertical_step_times[k] != t) return false;
    if (trace.vertical_step_times[k] < static_cast<int64_t>(k) + 1) return false;
    if (trace.skeleton_path[k].y != y || trace.skeleton_path[k].nu != nu)
      return false;
    if (trace.embedded_values[k] != x) return false;
  }
  return true;
}

}  // namespace hcwalk::lattice
