#pragma once

#include <functional>
#include <vector>

namespace rggcrit::numerics {

/// log of the Poisson probability mass P(X = k) for X ~ Po(mean).
/// mean = 0 gives 0 for k = 0 and -inf otherwise.
double log_poisson_pmf(int k, double mean);

/// Poisson pmf evaluated through log_poisson_pmf.
double poisson_pmf(int k, double mean);

/// log(k!) via lgamma; safe far beyond 170.
double log_factorial(int k);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (G7/K15) on [a, b]. Stops once the error estimate
/// is below rel_tol times the L1 norm of f, or the depth limit is reached.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-10, unsigned max_depth = 15);

/// ∫_a^b f for integrands that decay roughly like e^{-rate (t - a)}: the
/// substitution u = (1 - e^{-rate (t-a)}) / (1 - e^{-rate (b-a)}) flattens
/// the peak before the adaptive rule runs. rate <= 0 integrates as is.
QuadratureResult integrate_exponential(const std::function<double(double)>& f, double a, double b,
                                       double rate, double rel_tol = 1e-10);

/// Fixed 30-point Gauss-Legendre rule on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

/// Nodes and weights of an n-point Gauss-Legendre rule on [0, 1], nodes
/// ascending. n in {8, 12, 16, 20, 30}.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre_rule(unsigned n);

}  // namespace rggcrit::numerics
