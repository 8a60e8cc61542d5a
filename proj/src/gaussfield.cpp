#include "pingff/gaussfield.hpp"

#include <cmath>
#include <vector>

#include "pingff/normal.hpp"

namespace pingff::gauss {

GaussianModel build_model(const BoxSpec& box, double m, double bc,
                          double center) {
  if (m < 0.0) throw std::invalid_argument("build_model: m must be >= 0");

  GaussianModel model;
  model.box = box;
  model.m = m;
  model.bc = bc;
  model.center = center;

  const SiteIndex count = box.site_count();
  const double coupling = 1.0 / (2.0 * box.d);
  const double diag = 1.0 + 2.0 * m * m;

  auto edges = lattice::enumerate_edges(box);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(count + 2 * edges.interior.size());
  for (SiteIndex x = 0; x < count; ++x) triplets.emplace_back(x, x, diag);
  for (const auto& [x, y] : edges.interior) {
    triplets.emplace_back(x, y, -coupling);
    triplets.emplace_back(y, x, -coupling);
  }
  model.precision.resize(count, count);
  model.precision.setFromTriplets(triplets.begin(), triplets.end());

  model.linear = Eigen::VectorXd::Constant(count, 2.0 * m * m * center);
  for (const auto& [x, outer] : edges.boundary) model.linear[x] += coupling * bc;

  // constants from the fixed boundary values and the mass center,
  // H = ½φᵀQφ - rᵀφ + c
  model.quad_const = 0.5 * coupling * bc * bc *
                         static_cast<double>(edges.boundary.size()) +
                     m * m * center * center * static_cast<double>(count);

  auto solver = std::make_shared<Solver>();
  solver->compute(model.precision);
  if (solver->info() != Eigen::Success)
    throw std::runtime_error("build_model: Cholesky factorization failed");
  model.factor = solver;
  model.mean = solver->solve(model.linear);
  return model;
}

// PQPᵀ = LLᵀ, so ½ log det Q = Σ log L_ii
static double half_logdet(const GaussianModel& model) {
  SpMat L = model.factor->matrixL();
  double s = 0.0;
  for (int k = 0; k < L.outerSize(); ++k) s += std::log(L.coeff(k, k));
  return s;
}

GaussianSummary marginal_summary(const GaussianModel& model) {
  GaussianSummary out;
  out.mean = model.mean;
  const SiteIndex count = model.box.site_count();
  out.variance.resize(count);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(count);
  for (SiteIndex x = 0; x < count; ++x) {
    e[x] = 1.0;
    Eigen::VectorXd col = model.factor->solve(e);
    out.variance[x] = col[x];
    e[x] = 0.0;
  }
  out.log_partition = log_partition(model);
  return out;
}

double log_partition(const GaussianModel& model) {
  const double ld_model = half_logdet(model);
  double ld_ref;
  if (model.m == 0.0 && model.bc == 0.0 && model.center == 0.0) {
    ld_ref = ld_model;
  } else {
    GaussianModel ref = build_model(model.box, 0.0, 0.0, 0.0);
    ld_ref = half_logdet(ref);
  }
  const double quad = 0.5 * model.linear.dot(model.mean);
  return -(ld_model - ld_ref) + quad - model.quad_const;
}

FieldConfig sample_exact(const GaussianModel& model, CounterRng& rng) {
  const SiteIndex count = model.box.site_count();
  Eigen::VectorXd z(count);
  for (SiteIndex x = 0; x < count; ++x)
    z[x] = normal_quantile(rng.next_uniform());
  // PQPᵀ = LLᵀ  ⇒  φ = mean + Pᵀ L⁻ᵀ z has covariance Q⁻¹
  Eigen::VectorXd w = model.factor->matrixU().solve(z);
  return model.mean + model.factor->permutationPinv() * w;
}

double window_probability(double mean, double variance, double a, double s) {
  if (variance <= 0.0)
    throw std::invalid_argument("window_probability: variance must be > 0");
  if (a <= 0.0) throw std::invalid_argument("window_probability: a must be > 0");
  const double sd = std::sqrt(variance);
  return normal_interval((-a - s - mean) / sd, (a - s - mean) / sd);
}

OverlapSlope overlap_derivative(double variance, double a, double s_max) {
  if (variance <= 0.0)
    throw std::invalid_argument("overlap_derivative: variance must be > 0");
  if (s_max <= 0.0) s_max = 0.25 * a;

  const double sd = std::sqrt(variance);
  // centered variable ψ = φ - a: D(s) = P(ψ∈[-s,0]) - P(ψ∈[-2a-s,-2a])
  auto slope = [&](double s) {
    const double d =
        normal_interval(-s / sd, 0.0) - normal_interval((-2 * a - s) / sd, -2 * a / sd);
    return d / s;
  };

  // minimum over (0, s_max]: start from the s→0 limit, then scan a grid
  double best = normal_pdf(0.0, 0.0, variance) - normal_pdf(2 * a, 0.0, variance);
  const int grid = 512;
  for (int i = 1; i <= grid; ++i) {
    best = std::min(best, slope(s_max * i / grid));
  }
  return {best, s_max};
}

}  // namespace pingff::gauss
