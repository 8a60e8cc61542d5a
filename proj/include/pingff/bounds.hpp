#pragma once

#include <optional>
#include <string>

namespace pingff::bounds {

// Constants entering the quenched lower bounds. Always computed, never
// defaulted; provenance records how each value was obtained.
struct BoundConstants {
  double c1 = 0.0;        // overlap slope
  double c2 = 0.0;        // window mass lower bound (d >= 3)
  double c1_tilde = 0.0;  // d=2 window-mass constant
  double c_prime = 0.0;   // d=2 mass-cost constant
  double epsilon = 0.5;   // smallness range for -b+h
  std::string provenance;

  // quadratic coefficient of the optimized d>=3 bound, h > -K(-b+h)²
  double k_coefficient() const { return c1 * c1 / c2; }
};

// ℓ(b,h) = h + log cosh b for Bernoulli_{1/2}(-1,+1) signs
double annealed_strength(double b, double h);

// annealed critical line h_c^a(b) = -log cosh b
double annealed_critical_h(double b);

// h·C₂ - (s·C₁/2)(-b+h) - s²/16  (requires -b+h < 0 < b+h)
double lower_bound_d3(double b, double h, double s, const BoundConstants& c);

// maximizer s* = -4·C₁·(-b+h) of the bound above
double optimal_shift_d3(double b, double h, const BoundConstants& c);

struct RegionResult {
  bool covered = false;   // inputs inside the bound's validity range
  bool positive = false;
  double margin = 0.0;    // optimized bound value
  double witness_s = 0.0;
  double witness_m = 0.0; // d=2 only
  std::string note;
};

RegionResult region_positive_d3(double b, double h, const BoundConstants& c);

struct CriticalCurve {
  std::optional<double> bisection_root;  // boundary of h > -K(-b+h)²
  // quadratic-formula root b - 1/(2K) + sqrt(1/K^2 - 8b/K)/2, reported
  // alongside for comparison
  std::optional<double> closed_form_root;
};

CriticalCurve critical_curve_d3(double b, const BoundConstants& c);

// h·C̃₁/|log m| - s·C₁(-b+h)/(2|log m|) - s²m²/2 - s²/16 - C′m²|log m|
double lower_bound_d2(double b, double h, double s, double m,
                      const BoundConstants& c);

struct ShiftMassChoice {
  bool in_regime = false;
  double s = 0.0;
  double m = 0.0;
};

// s = -C₁(-b+h)/((m²+1/4)|log m|) with m² = -k/(log k)³, k = -h·C̃₁/C′
ShiftMassChoice vache_parameters(double b, double h, const BoundConstants& c);

RegionResult region_positive_d2(double b, double h, const BoundConstants& c);

// Compute all constants from the walk/gaussfield machinery.
// d >= 3: variance g_d(0); d = 2: massive variance at the given m.
BoundConstants estimate_constants(int d, double a,
                                  std::optional<double> m = std::nullopt,
                                  double epsilon = 0.5);

}  // namespace pingff::bounds
