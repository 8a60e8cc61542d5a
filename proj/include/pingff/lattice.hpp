#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pingff/rng.hpp"

namespace pingff::lattice {

using SiteIndex = std::int64_t;

// Finite box {0,...,n-1}^d. Sites are indexed row-major: the last
// coordinate varies fastest. This order is fixed so CSV output and RNG
// streams are identical across platforms.
struct BoxSpec {
  int d = 2;
  int n = 1;

  BoxSpec() = default;
  BoxSpec(int d_, int n_) : d(d_), n(n_) {
    if (d < 2) throw std::invalid_argument("BoxSpec: d must be >= 2");
    if (n < 0) throw std::invalid_argument("BoxSpec: n must be >= 0");
  }

  SiteIndex site_count() const {
    SiteIndex c = 1;
    for (int i = 0; i < d; ++i) c *= n;
    return c;
  }

  std::vector<int> coords(SiteIndex idx) const {
    std::vector<int> x(d);
    for (int i = d - 1; i >= 0; --i) {
      x[i] = static_cast<int>(idx % n);
      idx /= n;
    }
    return x;
  }

  SiteIndex index(const std::vector<int>& x) const {
    SiteIndex idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * n + x[i];
    return idx;
  }

  bool contains(const std::vector<int>& x) const {
    for (int i = 0; i < d; ++i)
      if (x[i] < 0 || x[i] >= n) return false;
    return true;
  }

  // l-infinity-free graph distance to the complement, in steps
  int dist_to_boundary(SiteIndex idx) const {
    auto x = coords(idx);
    int dist = n;  // upper bound
    for (int i = 0; i < d; ++i) {
      dist = std::min(dist, std::min(x[i] + 1, n - x[i]));
    }
    return dist;
  }
};

// All unordered nearest-neighbor pairs {x,y} with {x,y} ∩ Λ_n ≠ ∅,
// split into interior pairs and pairs crossing into the complement.
struct EdgeSet {
  std::vector<std::pair<SiteIndex, SiteIndex>> interior;
  // boundary edge: (interior site, coordinates of the outer endpoint)
  std::vector<std::pair<SiteIndex, std::vector<int>>> boundary;

  std::size_t total() const { return interior.size() + boundary.size(); }
};

EdgeSet enumerate_edges(const BoxSpec& box);

// interior sites with at least one neighbor outside Λ_n
std::vector<SiteIndex> inner_boundary(const BoxSpec& box);

// i.i.d. ±1 signs with site potential v_x = b e_x + h
struct Environment {
  BoxSpec box;
  double b = 0.0;
  double h = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::int8_t> signs;  // ±1

  double potential(SiteIndex x) const { return b * signs[x] + h; }
  std::vector<double> potentials() const {
    std::vector<double> v(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) v[i] = b * signs[i] + h;
    return v;
  }
};

// Signs come from one counter-based draw per site keyed by (seed, site),
// so regeneration is bit-identical and order-independent.
Environment sample_environment(const BoxSpec& box, double b, double h,
                               std::uint64_t seed);

// homogeneous environment with v_x ≡ strength (annealed model)
Environment homogeneous_environment(const BoxSpec& box, double strength);

}  // namespace pingff::lattice
