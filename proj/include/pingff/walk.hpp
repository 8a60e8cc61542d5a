#pragma once

#include <optional>
#include <vector>

#include "pingff/lattice.hpp"

namespace pingff::walk {

using lattice::BoxSpec;
using lattice::SiteIndex;

// Per-step survival probability matching the field's precision operator:
// Q = (1/ρ)(I - ρ A/(2d)) with ρ = 1/(1+2m²), so the killed-walk Green
// function reproduces Q⁻¹ entry by entry. A killing rate of the form
// m²/(1+m²) belongs to a different mass normalization; the matrix
// identity is what the code treats as ground truth.
inline double survival_from_mass(double m) { return 1.0 / (1.0 + 2.0 * m * m); }

struct WalkKernel {
  int d = 2;
  double survival = 1.0;          // ρ ∈ (0,1]
  std::optional<BoxSpec> box;     // absorbing exit when set
};

// exact P₀(X_steps = 0) for the d-dimensional simple random walk
double return_probability(int d, long long steps);

// return_probability(2, 2ℓ)·πℓ; tends to 1 as ℓ→∞
double stirling_check(long long ell);

// Killed, exit-restricted Green function ρ·Σ_ℓ ρ^ℓ P_x(X_ℓ=y, τ>ℓ);
// the leading ρ makes it equal to (Q⁻¹)_{xy} of the massive field.
double green_restricted(const WalkKernel& kernel, SiteIndex x, SiteIndex y);

// full row G(x,·) from one dynamic-programming sweep
std::vector<double> green_row(const WalkKernel& kernel, SiteIndex x);

// g_d(0) = Σ_ℓ P₀(X_ℓ=0), d ≥ 3, absolute accuracy 1e-6
double green_infinite(int d);

struct MassiveVariance {
  double variance = 0.0;     // killed Green value at the box center
  double bound_ratio = 0.0;  // variance / |log m|
};

// d=2 center-site variance of the massive field and its ratio to |log m|
MassiveVariance massive_variance_bound(double m, int n);

// |Λ_n|⁻¹ log(Z⁰⁰_{Λ_n} / Z⁰⁰_{Λ_n,m}) for d=2, evaluated through the
// walk representation:
//   ½ log(1+2m²) + (2N)⁻¹ Σ_x Σ_ℓ (2ℓ)⁻¹ (1-ρ^{2ℓ}) P_x(X_{2ℓ}=x, τ>2ℓ).
double ratio_Z_series(double m, int n);

// One DP step bookkeeping, exposed so tests can assert conservation:
// in-box mass + exited mass + killed mass stays 1.
struct WalkDP {
  WalkDP(const WalkKernel& kernel, SiteIndex source);

  void step();

  const std::vector<double>& in_box() const { return mass_; }
  double in_box_total() const;
  double exited = 0.0;
  double killed = 0.0;
  long long steps_taken = 0;

 private:
  BoxSpec box_;
  int d_;
  double survival_;
  std::vector<double> mass_;
  std::vector<double> scratch_;
};

}  // namespace pingff::walk
