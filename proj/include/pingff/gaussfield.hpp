#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>
#include <stdexcept>

#include "pingff/lattice.hpp"
#include "pingff/rng.hpp"

namespace pingff::gauss {

using lattice::BoxSpec;
using lattice::SiteIndex;

using SpMat = Eigen::SparseMatrix<double>;
using Solver = Eigen::SimplicialLLT<SpMat>;

// one interface realization φ over Λ_n
using FieldConfig = Eigen::VectorXd;

// Gaussian law exp(-½ φᵀQφ + rᵀφ - c) with
//   Q_xx = 1 + 2m²,  Q_xy = -1/(2d) for interior neighbors x~y.
// The boundary value bc and the mass-term center enter only through the
// linear term r and the constant c; boundary sites are never unknowns.
struct GaussianModel {
  BoxSpec box;
  double m = 0.0;
  double bc = 0.0;      // constant boundary value ζ
  double center = 0.0;  // mass-term center

  SpMat precision;
  Eigen::VectorXd linear;
  double quad_const = 0.0;
  Eigen::VectorXd mean;

  std::shared_ptr<const Solver> factor;  // cached; read-only after build
};

GaussianModel build_model(const BoxSpec& box, double m, double bc,
                          double center);

struct GaussianSummary {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;   // diagonal of Q⁻¹
  double log_partition = 0.0; // relative to the massless zero-bc model
};

GaussianSummary marginal_summary(const GaussianModel& model);

// exact sample from the model's law via the sparse Cholesky factor
FieldConfig sample_exact(const GaussianModel& model, CounterRng& rng);

// log Z(model) - log Z(massless, bc=0, center=0) on the same box
double log_partition(const GaussianModel& model);

// P(φ + s ∈ [-a,a]) for φ ~ N(mean, variance)
double window_probability(double mean, double variance, double a, double s);

struct OverlapSlope {
  double c1 = 0.0;    // certified slope
  double s_max = 0.0; // validity range (0, s_max]
};

// Certified C₁ with P(φ∈[-a,a]) - P(φ+s∈[-a,a]) ≥ C₁·s on (0, s_max],
// for φ ~ N(a, variance). Equals the density gap pdf(0)-pdf(-2a) of the
// centered variable as s→0, reduced by minimization over finite s.
OverlapSlope overlap_derivative(double variance, double a,
                                double s_max = 0.0);

}  // namespace pingff::gauss
