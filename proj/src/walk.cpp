#include "pingff/walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace pingff::walk {

namespace {

double log_factorial(long long k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// one-dimensional return probability P(X_{2ℓ}=0) = C(2ℓ,ℓ) 2^{-2ℓ}
double return_probability_1d(long long ell) {
  if (ell == 0) return 1.0;
  const double l2 = std::log(2.0);
  return std::exp(log_factorial(2 * ell) - 2.0 * log_factorial(ell) -
                  2.0 * ell * l2);
}

// Σ over k₁+...+k_d = ℓ of Π 1/(kᵢ!)², in log domain relative to the
// balanced composition (the largest term)
double multinomial_return(int d, long long ell) {
  std::vector<double> lf(2 * ell + 1);
  for (long long k = 0; k <= 2 * ell; ++k) lf[k] = log_factorial(k);

  const double base = lf[2 * ell] - 2.0 * ell * std::log(2.0 * d);
  double shift = base;
  for (int i = 0; i < d; ++i) {
    const long long k = ell / d + (i < ell % d ? 1 : 0);
    shift -= 2.0 * lf[k];
  }

  double sum = 0.0;
  std::vector<long long> ks(d, 0);
  // recursive enumeration of compositions
  auto rec = [&](auto&& self, int axis, long long remaining, double acc) -> void {
    if (axis == d - 1) {
      sum += std::exp(base + acc - 2.0 * lf[remaining] - shift);
      return;
    }
    for (long long k = 0; k <= remaining; ++k)
      self(self, axis + 1, remaining - k, acc - 2.0 * lf[k]);
  };
  rec(rec, 0, ell, 0.0);
  return std::exp(shift) * sum;
}

}  // namespace

double return_probability(int d, long long steps) {
  if (d < 2) throw std::invalid_argument("return_probability: d must be >= 2");
  if (steps < 0 || steps % 2 != 0)
    throw std::invalid_argument("return_probability: steps must be even, >= 0");
  if (steps == 0) return 1.0;
  const long long ell = steps / 2;
  if (d == 2) {
    // rotated-axes product form
    const double q = return_probability_1d(ell);
    return q * q;
  }
  return multinomial_return(d, ell);
}

double stirling_check(long long ell) {
  if (ell < 1) throw std::invalid_argument("stirling_check: ell must be >= 1");
  const double q = return_probability_1d(ell);
  return q * q * M_PI * static_cast<double>(ell);
}

WalkDP::WalkDP(const WalkKernel& kernel, SiteIndex source) {
  if (!kernel.box) throw std::invalid_argument("WalkDP: box required");
  box_ = *kernel.box;
  d_ = box_.d;
  survival_ = kernel.survival;
  if (survival_ <= 0.0 || survival_ > 1.0)
    throw std::invalid_argument("WalkDP: survival must be in (0,1]");
  mass_.assign(box_.site_count(), 0.0);
  scratch_.assign(box_.site_count(), 0.0);
  mass_[source] = 1.0;
}

double WalkDP::in_box_total() const {
  double s = 0.0;
  for (double v : mass_) s += v;
  return s;
}

void WalkDP::step() {
  const double hop = survival_ / (2.0 * d_);
  std::fill(scratch_.begin(), scratch_.end(), 0.0);
  double exited_now = 0.0;
  double alive = 0.0;
  const SiteIndex count = box_.site_count();
  const int n = box_.n;
  for (SiteIndex x = 0; x < count; ++x) {
    const double mx = mass_[x];
    if (mx == 0.0) continue;
    alive += mx;
    SiteIndex stride = 1;
    for (int axis = d_ - 1; axis >= 0; --axis) {
      const int c = static_cast<int>((x / stride) % n);
      if (c + 1 < n) scratch_[x + stride] += mx * hop; else exited_now += mx * hop;
      if (c - 1 >= 0) scratch_[x - stride] += mx * hop; else exited_now += mx * hop;
      stride *= n;
    }
  }
  killed += (1.0 - survival_) * alive;
  exited += exited_now;
  mass_.swap(scratch_);
  ++steps_taken;
}

std::vector<double> green_row(const WalkKernel& kernel, SiteIndex x) {
  if (!kernel.box) {
    if (kernel.d == 2 && kernel.survival == 1.0)
      throw std::domain_error("green_row: infinite Green function (d=2, no killing, no box)");
    throw std::invalid_argument("green_row: box required");
  }
  WalkDP dp(kernel, x);
  const SiteIndex count = kernel.box->site_count();
  std::vector<double> green(count, 0.0);
  const double rho = kernel.survival;

  double total = dp.in_box_total();
  double prev_total = total;
  while (true) {
    for (SiteIndex y = 0; y < count; ++y) green[y] += rho * dp.in_box()[y];
    dp.step();
    prev_total = total;
    total = dp.in_box_total();
    if (total <= 0.0) break;
    // geometric tail bound with the current decay ratio
    const double ratio = std::min(total / prev_total, 1.0 - 1e-12);
    if (total / (1.0 - ratio) < 1e-15) {
      // flush the remaining mass through a few more exact steps
      for (int extra = 0; extra < 32 && dp.in_box_total() > 0.0; ++extra) {
        for (SiteIndex y = 0; y < count; ++y) green[y] += rho * dp.in_box()[y];
        dp.step();
      }
      break;
    }
    if (dp.steps_taken > 100'000'000)
      throw std::runtime_error("green_row: series failed to converge");
  }
  return green;
}

double green_restricted(const WalkKernel& kernel, SiteIndex x, SiteIndex y) {
  return green_row(kernel, x)[y];
}

namespace {

// Σ_{ℓ>L} ℓ^{-s} by Euler–Maclaurin
double zeta_tail(double s, double L) {
  return std::pow(L, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(L, -s) +
         s * std::pow(L, -s - 1.0) / 12.0 -
         s * (s + 1.0) * (s + 2.0) * std::pow(L, -s - 3.0) / 720.0;
}

}  // namespace

double green_infinite(int d) {
  if (d == 2) throw std::domain_error("green_infinite: divergent for d=2");
  if (d < 3) throw std::invalid_argument("green_infinite: d must be >= 3");

  const long long ell0 = (d == 3) ? 400 : (d == 4 ? 160 : 80);
  std::vector<double> terms(ell0 + 1, 0.0);
  double sum = 1.0;  // ℓ = 0
  for (long long ell = 1; ell <= ell0; ++ell) {
    terms[ell] = return_probability(d, 2 * ell);
    sum += terms[ell];
  }

  // tail: P(X_{2ℓ}=0) = ℓ^{-d/2} (A + B/ℓ + C/ℓ²) + O(ℓ^{-d/2-3}),
  // A from the local CLT, B and C fitted on the last exact terms
  const double s = 0.5 * d;
  const double A = 2.0 * std::pow(d / (4.0 * M_PI), s);
  double m11 = 0, m12 = 0, m22 = 0, v1 = 0, v2 = 0;
  const long long fit_lo = ell0 - 99;
  for (long long ell = fit_lo; ell <= ell0; ++ell) {
    const double x1 = 1.0 / ell, x2 = x1 * x1;
    const double y = terms[ell] * std::pow(static_cast<double>(ell), s) - A;
    m11 += x1 * x1; m12 += x1 * x2; m22 += x2 * x2;
    v1 += x1 * y;   v2 += x2 * y;
  }
  const double det = m11 * m22 - m12 * m12;
  const double B = (v1 * m22 - v2 * m12) / det;
  const double C = (v2 * m11 - v1 * m12) / det;

  const double L = static_cast<double>(ell0);
  sum += A * zeta_tail(s, L) + B * zeta_tail(s + 1.0, L) + C * zeta_tail(s + 2.0, L);
  return sum;
}

MassiveVariance massive_variance_bound(double m, int n) {
  if (!(m > 0.0 && m < 0.5))
    throw std::invalid_argument("massive_variance_bound: m must be in (0, 0.5)");
  if (n < 4) throw std::invalid_argument("massive_variance_bound: n must be >= 4");
  BoxSpec box(2, n);
  WalkKernel kernel{2, survival_from_mass(m), box};
  const SiteIndex center = box.index({n / 2, n / 2});
  MassiveVariance out;
  out.variance = green_restricted(kernel, center, center);
  out.bound_ratio = out.variance / std::fabs(std::log(m));
  return out;
}

namespace {

// diagonal DP orbits under the symmetry group of the square box
std::map<std::vector<int>, std::pair<SiteIndex, long long>> diagonal_orbits(
    const BoxSpec& box) {
  std::map<std::vector<int>, std::pair<SiteIndex, long long>> orbits;
  const SiteIndex count = box.site_count();
  for (SiteIndex x = 0; x < count; ++x) {
    auto c = box.coords(x);
    for (auto& ci : c) ci = std::min(ci, box.n - 1 - ci);
    std::sort(c.begin(), c.end());
    auto [it, inserted] = orbits.try_emplace(c, x, 0);
    ++it->second.second;
  }
  return orbits;
}

}  // namespace

double ratio_Z_series(double m, int n) {
  if (!(m > 0.0 && m < 0.5))
    throw std::invalid_argument("ratio_Z_series: m must be in (0, 0.5)");
  BoxSpec box(2, n);
  const double rho = survival_from_mass(m);
  const double N = static_cast<double>(box.site_count());

  double series = 0.0;
  for (const auto& [canon, rep] : diagonal_orbits(box)) {
    const auto [source, multiplicity] = rep;
    WalkKernel pure{2, 1.0, box};  // restricted walk, killing in the weights
    WalkDP dp(pure, source);
    double contrib = 0.0;
    double rho_pow = 1.0;  // ρ^{2ℓ}
    while (true) {
      dp.step();
      dp.step();
      rho_pow *= rho * rho;
      const long long two_ell = dp.steps_taken;
      const double p_return = dp.in_box()[source];
      contrib += (1.0 - rho_pow) * p_return / static_cast<double>(two_ell);
      const double total = dp.in_box_total();
      if (total / static_cast<double>(two_ell) < 1e-13) break;
    }
    series += contrib * static_cast<double>(multiplicity);
  }
  return 0.5 * std::log(1.0 + 2.0 * m * m) + series / (2.0 * N);
}

}  // namespace pingff::walk
