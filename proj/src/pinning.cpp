#include "pingff/pinning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pingff/normal.hpp"

namespace pingff::pinning {

namespace {

double log_cosh(double b) {
  const double ab = std::fabs(b);
  return ab + std::log1p(std::exp(-2.0 * ab)) - std::log(2.0);
}

// Gauss-Legendre nodes/weights on [0,1] by Newton iteration
void gauss_legendre_01(int n, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x);  // reversed order is irrelevant
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
};

// batch means to absorb autocorrelation
MeanStderr batched_stats(const std::vector<double>& xs, int n_batches = 20) {
  MeanStderr out;
  const std::size_t n = xs.size();
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  n_batches = std::min<int>(n_batches, static_cast<int>(n));
  const std::size_t bs = n / n_batches;
  double var = 0.0;
  for (int b = 0; b < n_batches; ++b) {
    double m = 0.0;
    for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) m += xs[i];
    m /= bs;
    var += (m - out.mean) * (m - out.mean);
  }
  var /= (n_batches - 1.0);
  out.se = std::sqrt(var / n_batches);
  return out;
}

}  // namespace

PinningModel make_model(Environment env, double a, GaussianModel base) {
  if (a <= 0.0) throw std::invalid_argument("make_model: a must be > 0");
  if (env.box.d != base.box.d || env.box.n != base.box.n)
    throw std::invalid_argument("make_model: environment box mismatch");
  return PinningModel{std::move(env), a, std::move(base)};
}

double potential_energy(const PinningModel& model, const FieldConfig& phi) {
  double u = 0.0;
  const SiteIndex count = model.env.box.site_count();
  for (SiteIndex x = 0; x < count; ++x) {
    if (std::fabs(phi[x]) <= model.a) u += model.env.potential(x);
  }
  return u;
}

FreeEnergyEstimate estimate_quenched_is(const PinningModel& model,
                                        long long n_samples, CounterRng rng) {
  if (n_samples < 100)
    throw std::invalid_argument("estimate_quenched_is: need N >= 100");
  const double n_sites = static_cast<double>(model.env.box.site_count());

  std::vector<double> us(n_samples);
  double umax = -std::numeric_limits<double>::infinity();
  for (long long i = 0; i < n_samples; ++i) {
    CounterRng stream = rng.stream(static_cast<std::uint64_t>(i));
    FieldConfig phi = gauss::sample_exact(model.base, stream);
    us[i] = potential_energy(model, phi);
    umax = std::max(umax, us[i]);
  }

  // ratio = e^{umax} · mean(e^{U-umax}), stable for large potentials
  double sum = 0.0, sumsq = 0.0;
  for (double u : us) {
    const double w = std::exp(u - umax);
    sum += w;
    sumsq += w * w;
  }
  const double mean_w = sum / n_samples;
  if (!(mean_w > 0.0))
    throw std::runtime_error("estimate_quenched_is: non-positive weight mean");
  const double var_w =
      std::max(0.0, sumsq / n_samples - mean_w * mean_w) * n_samples /
      std::max<double>(1.0, n_samples - 1.0);
  const double rel_se = std::sqrt(var_w / n_samples) / mean_w;

  FreeEnergyEstimate est;
  est.value = (umax + std::log(mean_w)) / n_sites;
  est.stderr_ = rel_se / n_sites;
  est.n_samples = n_samples;
  est.estimator = "IS";
  est.seed = rng.key;
  if (rel_se > 0.5) est.flags.push_back("unreliable");
  return est;
}

HeatBathChain::HeatBathChain(const PinningModel& model, double lambda,
                             CounterRng rng)
    : model_(model), lambda_(lambda), rng_(rng) {
  const BoxSpec& box = model.env.box;
  const SiteIndex count = box.site_count();
  phi_ = model.base.mean;
  local_precision_ = 1.0 + 2.0 * model.base.m * model.base.m;

  neighbors_.resize(count);
  auto edges = lattice::enumerate_edges(box);
  for (const auto& [x, y] : edges.interior) {
    neighbors_[x].push_back(y);
    neighbors_[y].push_back(x);
  }

  // fixed sweep permutation per seed, reproducible across runs
  order_.resize(count);
  std::iota(order_.begin(), order_.end(), SiteIndex{0});
  CounterRng perm = rng_.stream(0xfeed);
  for (SiteIndex i = count - 1; i > 0; --i) {
    const SiteIndex j =
        static_cast<SiteIndex>(perm.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(order_[i], order_[j]);
  }
}

void HeatBathChain::sweep() {
  const double coupling = 1.0 / (2.0 * model_.env.box.d);
  const double q = local_precision_;
  const double sd = 1.0 / std::sqrt(q);
  const double a = model_.a;

  for (SiteIndex x : order_) {
    double c = model_.base.linear[x];
    for (SiteIndex y : neighbors_[x]) c += coupling * phi_[y];
    const double mu = c / q;

    const double zlo = (-a - mu) / sd;
    const double zhi = (a - mu) / sd;
    const double p_left = normal_cdf(zlo);
    const double p_right = normal_cdf(-zhi);
    const double p_mid = normal_interval(zlo, zhi);
    const double w_mid = p_mid * std::exp(lambda_ * model_.env.potential(x));
    const double total = p_left + w_mid + p_right;
    if (!std::isfinite(total) || total <= 0.0)
      throw std::runtime_error("HeatBathChain: non-finite conditional weights");

    const double u = rng_.next_uniform() * total;
    const double u2 = rng_.next_uniform();
    double z;
    if (u < p_left) {
      z = normal_quantile(u2 * p_left);
    } else if (u < p_left + w_mid) {
      // work in the nearer tail so the inverse CDF stays accurate
      if (zlo >= 0.0)
        z = -normal_quantile(normal_cdf(-zhi) + u2 * p_mid);
      else
        z = normal_quantile(normal_cdf(zlo) + u2 * p_mid);
      z = std::clamp(z, zlo, zhi);
    } else {
      z = -normal_quantile(u2 * p_right);
    }
    phi_[x] = mu + sd * z;
  }
}

double HeatBathChain::potential() const {
  return potential_energy(model_, phi_);
}

FreeEnergyEstimate estimate_quenched_ti(const PinningModel& model,
                                        const TiOptions& opts, CounterRng rng) {
  if (opts.lambda_nodes < 4)
    throw std::invalid_argument("estimate_quenched_ti: need >= 4 nodes");
  if (opts.sweeps < 100)
    throw std::invalid_argument("estimate_quenched_ti: need >= 100 sweeps");
  const double n_sites = static_cast<double>(model.env.box.site_count());

  std::vector<double> nodes, weights;
  gauss_legendre_01(opts.lambda_nodes, nodes, weights);

  double value = 0.0, var = 0.0;
  bool nonstationary = false;
  for (int i = 0; i < opts.lambda_nodes; ++i) {
    HeatBathChain chain(model, nodes[i], rng.stream(static_cast<std::uint64_t>(i) + 1));
    for (int s = 0; s < opts.burn_in; ++s) chain.sweep();
    std::vector<double> us(opts.sweeps);
    for (int s = 0; s < opts.sweeps; ++s) {
      chain.sweep();
      us[s] = chain.potential();
    }
    const auto stats = batched_stats(us);
    value += weights[i] * stats.mean;
    var += weights[i] * weights[i] * stats.se * stats.se;

    // first/second half disagreement flags a chain that has not settled
    std::vector<double> h1(us.begin(), us.begin() + opts.sweeps / 2);
    std::vector<double> h2(us.begin() + opts.sweeps / 2, us.end());
    const auto s1 = batched_stats(h1, 10);
    const auto s2 = batched_stats(h2, 10);
    const double gap_se = std::sqrt(s1.se * s1.se + s2.se * s2.se);
    if (gap_se > 0.0 && std::fabs(s1.mean - s2.mean) > 5.0 * gap_se)
      nonstationary = true;
  }

  FreeEnergyEstimate est;
  est.value = value / n_sites;
  est.stderr_ = std::sqrt(var) / n_sites;
  est.n_samples = static_cast<long long>(opts.lambda_nodes) * opts.sweeps;
  est.estimator = "TI";
  est.seed = rng.key;
  if (nonstationary) est.flags.push_back("nonstationary");
  return est;
}

double mvn_rectangle(const Eigen::MatrixXd& cov, const Eigen::VectorXd& lo,
                     const Eigen::VectorXd& hi) {
  const int k = static_cast<int>(cov.rows());
  if (k == 0) return 1.0;
  if (k == 1) {
    const double sd = std::sqrt(cov(0, 0));
    return normal_interval(lo[0] / sd, hi[0] / sd);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("mvn_rectangle: covariance not SPD");
  Eigen::MatrixXd L = llt.matrixL();

  // Genz separation-of-variables over a Richtmyer QMC rule
  static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const long long n_points = (k <= 4) ? 8192 : 16384;
  std::vector<double> alpha(k - 1);
  for (int i = 0; i < k - 1; ++i) alpha[i] = std::sqrt(primes[i]);

  auto clamp01 = [](double p) { return std::clamp(p, 1e-16, 1.0 - 1e-16); };

  double acc = 0.0;
  std::vector<double> y(k);
  for (long long j = 1; j <= n_points; ++j) {
    double prod;
    {
      const double d0 = normal_cdf(lo[0] / L(0, 0));
      const double e0 = normal_cdf(hi[0] / L(0, 0));
      prod = e0 - d0;
      double w = (k > 1) ? std::fmod(j * alpha[0], 1.0) : 0.5;
      y[0] = normal_quantile(clamp01(d0 + w * (e0 - d0)));
    }
    for (int i = 1; i < k; ++i) {
      double shift = 0.0;
      for (int t = 0; t < i; ++t) shift += L(i, t) * y[t];
      const double di = normal_cdf((lo[i] - shift) / L(i, i));
      const double ei = normal_cdf((hi[i] - shift) / L(i, i));
      prod *= (ei - di);
      if (prod == 0.0) break;
      if (i < k - 1) {
        const double w = std::fmod(j * alpha[i], 1.0);
        y[i] = normal_quantile(clamp01(di + w * (ei - di)));
      }
    }
    acc += prod;
  }
  return acc / n_points;
}

namespace detail {

std::vector<double> oracle_rectangle_table(const GaussianModel& base, double a) {
  const SiteIndex count = base.box.site_count();
  if (count > 12)
    throw std::invalid_argument("oracle: box too large (|Λ| <= 12)");
  const int nbits = static_cast<int>(count);

  Eigen::MatrixXd cov(count, count);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(count, count);
  for (SiteIndex c = 0; c < count; ++c)
    cov.col(c) = base.factor->solve(id.col(c));

  std::vector<double> table(1u << nbits, 1.0);
  for (std::uint32_t mask = 1; mask < table.size(); ++mask) {
    std::vector<int> sites;
    for (int b = 0; b < nbits; ++b)
      if (mask & (1u << b)) sites.push_back(b);
    const int k = static_cast<int>(sites.size());
    Eigen::MatrixXd sub(k, k);
    Eigen::VectorXd lo(k), hi(k);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) sub(i, j) = cov(sites[i], sites[j]);
      lo[i] = -a - base.mean[sites[i]];
      hi[i] = a - base.mean[sites[i]];
    }
    table[mask] = mvn_rectangle(sub, lo, hi);
  }
  return table;
}

double oracle_from_table(const std::vector<double>& table,
                         const std::vector<double>& v) {
  double z = 0.0;
  for (std::uint32_t mask = 0; mask < table.size(); ++mask) {
    double w = 1.0;
    for (std::size_t b = 0; b < v.size(); ++b)
      if (mask & (1u << b)) w *= std::expm1(v[b]);
    z += w * table[mask];
  }
  return z;
}

}  // namespace detail

double oracle_Z_ratio(const PinningModel& model) {
  auto table = detail::oracle_rectangle_table(model.base, model.a);
  return detail::oracle_from_table(table, model.env.potentials());
}

FreeEnergyEstimate estimate_quenched(const PinningModel& model,
                                     Estimator choice, long long n_samples,
                                     const TiOptions& opts, CounterRng rng) {
  if (choice == Estimator::Auto) {
    // predicted IS blow-up: exponential moments of the positive potential
    double positive_mass = 0.0;
    for (double v : model.env.potentials()) positive_mass += std::max(v, 0.0);
    choice = (positive_mass <= 3.0) ? Estimator::IS : Estimator::TI;
  }
  return (choice == Estimator::IS)
             ? estimate_quenched_is(model, n_samples, rng)
             : estimate_quenched_ti(model, opts, rng);
}

FreeEnergyEstimate estimate_annealed(const BoxSpec& box, double b, double h,
                                     double a, long long n_samples,
                                     CounterRng rng, Estimator choice,
                                     const TiOptions& opts) {
  const double strength = h + log_cosh(b);
  auto env = lattice::homogeneous_environment(box, strength);
  auto base = gauss::build_model(box, 0.0, 0.0, 0.0);
  auto model = make_model(std::move(env), a, std::move(base));
  auto est = estimate_quenched(model, choice, n_samples, opts, rng);
  est.estimator += "-annealed";
  return est;
}

DisorderAverage disorder_average(const BoxSpec& box, double b, double h,
                                 double a, int n_envs, long long n_samples,
                                 std::uint64_t seed, Estimator choice,
                                 const TiOptions& opts) {
  if (n_envs < 2)
    throw std::invalid_argument("disorder_average: need >= 2 environments");
  DisorderAverage out;
  auto base = gauss::build_model(box, 0.0, 0.0, 0.0);
  CounterRng master(seed);

  for (int k = 0; k < n_envs; ++k) {
    const std::uint64_t env_seed =
        CounterRng::at(CounterRng::mix64(seed), static_cast<std::uint64_t>(k));
    auto env = lattice::sample_environment(box, b, h, env_seed);
    auto model = make_model(std::move(env), a, base);
    auto est = estimate_quenched(model, choice, n_samples, opts,
                                 master.stream(static_cast<std::uint64_t>(k)));
    for (const auto& f : est.flags) out.flags.push_back(f);
    out.per_env.push_back(std::move(est));
  }

  double sum = 0.0, within = 0.0;
  for (const auto& e : out.per_env) {
    sum += e.value;
    within += e.stderr_ * e.stderr_;
  }
  out.mean = sum / n_envs;
  out.within_stderr = std::sqrt(within) / n_envs;
  double spread = 0.0;
  for (const auto& e : out.per_env)
    spread += (e.value - out.mean) * (e.value - out.mean);
  out.spread_stderr = std::sqrt(spread / (n_envs - 1.0) / n_envs);
  return out;
}

}  // namespace pingff::pinning
