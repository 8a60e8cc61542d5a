#include "pingff/lattice.hpp"

namespace pingff::lattice {

EdgeSet enumerate_edges(const BoxSpec& box) {
  EdgeSet edges;
  const SiteIndex count = box.site_count();
  for (SiteIndex idx = 0; idx < count; ++idx) {
    auto x = box.coords(idx);
    for (int axis = 0; axis < box.d; ++axis) {
      for (int dir : {-1, +1}) {
        auto y = x;
        y[axis] += dir;
        if (box.contains(y)) {
          // count each interior pair once
          if (dir == +1) edges.interior.emplace_back(idx, box.index(y));
        } else {
          edges.boundary.emplace_back(idx, y);
        }
      }
    }
  }
  return edges;
}

std::vector<SiteIndex> inner_boundary(const BoxSpec& box) {
  std::vector<SiteIndex> sites;
  const SiteIndex count = box.site_count();
  for (SiteIndex idx = 0; idx < count; ++idx) {
    if (box.dist_to_boundary(idx) == 1) sites.push_back(idx);
  }
  return sites;
}

Environment sample_environment(const BoxSpec& box, double b, double h,
                               std::uint64_t seed) {
  Environment env;
  env.box = box;
  env.b = b;
  env.h = h;
  env.seed = seed;
  const SiteIndex count = box.site_count();
  env.signs.resize(count);
  const std::uint64_t key = CounterRng::mix64(seed);
  for (SiteIndex x = 0; x < count; ++x) {
    env.signs[x] = (CounterRng::at(key, static_cast<std::uint64_t>(x)) & 1u)
                       ? std::int8_t{+1}
                       : std::int8_t{-1};
  }
  return env;
}

Environment homogeneous_environment(const BoxSpec& box, double strength) {
  Environment env;
  env.box = box;
  env.b = 0.0;
  env.h = strength;
  env.seed = 0;
  env.signs.assign(box.site_count(), std::int8_t{+1});
  return env;
}

}  // namespace pingff::lattice
