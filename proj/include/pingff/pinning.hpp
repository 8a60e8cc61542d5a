#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pingff/gaussfield.hpp"
#include "pingff/lattice.hpp"

namespace pingff::pinning {

using gauss::FieldConfig;
using gauss::GaussianModel;
using lattice::BoxSpec;
using lattice::Environment;
using lattice::SiteIndex;

struct PinningModel {
  Environment env;
  double a = 1.0;  // half-width of the square well
  GaussianModel base;
};

PinningModel make_model(Environment env, double a, GaussianModel base);

struct FreeEnergyEstimate {
  double value = 0.0;   // per-site log partition ratio
  double stderr_ = 0.0;
  long long n_samples = 0;
  std::string estimator;  // IS | TI | ORACLE
  std::uint64_t seed = 0;
  std::vector<std::string> flags;
};

// Σ_x v_x 1{φ_x ∈ [-a,a]}; the window is closed on both ends
double potential_energy(const PinningModel& model, const FieldConfig& phi);

// Z-ratio as E_GFF[exp(U)] over N exact field samples; per-site log with
// delta-method standard error
FreeEnergyEstimate estimate_quenched_is(const PinningModel& model,
                                        long long n_samples, CounterRng rng);

struct TiOptions {
  int lambda_nodes = 8;  // Gauss-Legendre nodes on [0,1]
  int sweeps = 2000;     // measurement sweeps per node
  int burn_in = 200;
};

// thermodynamic integration: ∫₀¹ E_λ[U] dλ with exact heat-bath
// conditionals (three-piece truncated-Gaussian mixture per site)
FreeEnergyEstimate estimate_quenched_ti(const PinningModel& model,
                                        const TiOptions& opts, CounterRng rng);

// inclusion-exclusion ground truth for |Λ| ≤ 12:
//   Z^e/Z^0 = Σ_{S⊆Λ} Π_{x∈S}(e^{v_x}-1) · P(φ_x∈[-a,a] ∀x∈S)
double oracle_Z_ratio(const PinningModel& model);

enum class Estimator { Auto, IS, TI };

// quenched estimate with the configured or auto-selected estimator
FreeEnergyEstimate estimate_quenched(const PinningModel& model,
                                     Estimator choice, long long n_samples,
                                     const TiOptions& opts, CounterRng rng);

// annealed model: homogeneous pinning at strength ℓ(b,h) = h + log cosh b
FreeEnergyEstimate estimate_annealed(const BoxSpec& box, double b, double h,
                                     double a, long long n_samples,
                                     CounterRng rng,
                                     Estimator choice = Estimator::Auto,
                                     const TiOptions& opts = {});

struct DisorderAverage {
  double mean = 0.0;
  double spread_stderr = 0.0;   // between-environment spread of the mean
  double within_stderr = 0.0;   // pooled estimator error
  std::vector<FreeEnergyEstimate> per_env;
  std::vector<std::string> flags;
};

DisorderAverage disorder_average(const BoxSpec& box, double b, double h,
                                 double a, int n_envs, long long n_samples,
                                 std::uint64_t seed,
                                 Estimator choice = Estimator::Auto,
                                 const TiOptions& opts = {});

// Single-site heat-bath chain of the interacting measure with potential
// λ·v; used by TI nodes and by the field sampler.
class HeatBathChain {
 public:
  HeatBathChain(const PinningModel& model, double lambda, CounterRng rng);

  void sweep();
  const FieldConfig& state() const { return phi_; }
  double potential() const;

 private:
  const PinningModel& model_;
  double lambda_;
  CounterRng rng_;
  FieldConfig phi_;
  std::vector<std::vector<SiteIndex>> neighbors_;
  std::vector<SiteIndex> order_;  // fixed permutation drawn from the seed
  double local_precision_;
};

// multivariate normal rectangle probability P(lo ≤ X ≤ hi), X ~ N(0, cov),
// by sequential conditioning over a deterministic quasi-Monte Carlo rule
double mvn_rectangle(const Eigen::MatrixXd& cov, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi);

}  // namespace pingff::pinning
