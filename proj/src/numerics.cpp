#include "rggcrit/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <algorithm>
#include <limits>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rggcrit::numerics {

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

double log_poisson_pmf(int k, double mean) {
  if (mean <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  return k * std::log(mean) - mean - log_factorial(k);
}

double poisson_pmf(int k, double mean) { return std::exp(log_poisson_pmf(k, mean)); }

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, unsigned max_depth) {
  QuadratureResult out;
  if (a == b) return out;
  double err = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth,
                                                                             rel_tol, &err);
  out.error = err;
  return out;
}

QuadratureResult integrate_exponential(const std::function<double(double)>& f, double a, double b,
                                       double rate, double rel_tol) {
  const double span = b - a;
  if (!(span > 0.0)) return {};
  if (!(rate * span > 1e-3)) return integrate(f, a, b, rel_tol);
  const double mass = -std::expm1(-rate * span);
  auto g = [&](double u) {
    const double s = -std::log1p(-u * mass) / rate;
    return f(a + std::min(s, span)) * mass / rate * std::exp(rate * s);
  };
  return integrate(g, 0.0, 1.0, rel_tol);
}

namespace {

/// Boost stores the non-negative half of each symmetric rule on [-1, 1].
template <unsigned N>
QuadratureRule unit_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto x = G::abscissa();
  const auto w = G::weights();
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    pts.emplace_back(0.5 * (1.0 + x[i]), 0.5 * w[i]);
    if (x[i] != 0.0) pts.emplace_back(0.5 * (1.0 - x[i]), 0.5 * w[i]);
  }
  std::sort(pts.begin(), pts.end());
  QuadratureRule rule;
  for (const auto& [node, weight] : pts) {
    rule.nodes.push_back(node);
    rule.weights.push_back(weight);
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre_rule(unsigned n) {
  static const QuadratureRule r8 = unit_rule<8>(), r12 = unit_rule<12>(), r16 = unit_rule<16>(),
                              r20 = unit_rule<20>(), r30 = unit_rule<30>();
  switch (n) {
    case 8: return r8;
    case 12: return r12;
    case 16: return r16;
    case 20: return r20;
    case 30: return r30;
    default: throw std::invalid_argument("gauss_legendre_rule: unsupported order");
  }
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss<double, 30>::integrate(f, a, b);
}

}  // namespace rggcrit::numerics
