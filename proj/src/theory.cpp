#include "rggcrit/theory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "rggcrit/errors.hpp"
#include "rggcrit/numerics.hpp"

namespace rggcrit::theory {

namespace {

using geometry::ball_volume;
using geometry::unit_ball_volume;

constexpr double kPi = std::numbers::pi;

double numerator(int d, int k, double n, double xi) {
  return std::log(n) + loglog_coefficient(d, k) * std::log(std::log(n)) + xi;
}

/// Running sums for one Monte Carlo estimate.
struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  [[nodiscard]] PsiPart estimate(double count, double scale) const {
    const double mean = sum / count;
    const double var = count > 1 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1)) : 0.0;
    return {scale * mean, scale * std::sqrt(var / count)};
  }
};

PsiPart add_parts(PsiPart a, PsiPart b) {
  return {a.value + b.value, std::hypot(a.std_error, b.std_error)};
}

/// Elementary symmetric polynomials e_0..e_d of q.
std::vector<double> elementary_symmetric(const std::vector<double>& q) {
  std::vector<double> e(q.size() + 1, 0.0);
  e[0] = 1.0;
  for (double v : q)
    for (std::size_t j = q.size(); j >= 1; --j) e[j] += e[j - 1] * v;
  return e;
}

struct LayerCuts {
  double w;     // omega2 width
  double half;  // r/2
};

LayerCuts layer_cuts(double r, double layer_constant) {
  if (!(layer_constant > 0.0)) throw DomainError("layer constant must be positive");
  return {std::min(layer_constant * r * r, 0.5 * r), 0.5 * r};
}

/// 0: omega2, 1: omega11, 2: omega12 for a point at distance dist < r.
int layer_class(double dist, const LayerCuts& cuts) {
  return dist <= cuts.w ? 0 : dist <= cuts.half ? 1 : 2;
}

/// t(u) on [0, r) with density proportional to e^{-rate t}; plain uniform
/// when rate r is negligible. jacobian(t) = dt/du.
class ExpMap {
 public:
  ExpMap(double rate, double r) : rate_(rate), r_(r), tilted_(rate * r > 1e-3) {
    mass_ = tilted_ ? -std::expm1(-rate * r) : 1.0;
  }
  [[nodiscard]] double t(double u) const {
    if (!tilted_) return u * r_;
    return std::min(-std::log1p(-u * mass_) / rate_, std::nextafter(r_, 0.0));
  }
  [[nodiscard]] double u(double t) const {
    return tilted_ ? -std::expm1(-rate_ * t) / mass_ : t / r_;
  }
  [[nodiscard]] double jacobian(double t) const {
    return tilted_ ? mass_ / rate_ * std::exp(rate_ * t) : r_;
  }

 private:
  double rate_, r_, mass_ = 1.0;
  bool tilted_;
};

constexpr int kMaxTensorFaces = 3;

unsigned coarser_order(unsigned order) {
  switch (order) {
    case 30: return 20;
    case 20: return 16;
    case 16: return 12;
    default: return 8;
  }
}

struct TensorZone {
  std::array<double, 3> sums{};  // per omega class, integral over [0, r)^m
  std::uint64_t evaluations = 0;
};

TensorZone tensor_zone(int d, int k, double n, double r, int m, const ExpMap& map,
                       const LayerCuts& cuts, unsigned order) {
  const auto& rule = numerics::gauss_legendre_rule(order);
  struct Node {
    double t, w;
    int cls;
  };
  // One axis: panels [0, w], [w, r/2], [r/2, r) in the mapped coordinate.
  std::vector<Node> axis;
  const double edges_u[4] = {0.0, map.u(cuts.w), map.u(cuts.half), 1.0};
  for (int p = 0; p < 3; ++p) {
    const double lo = edges_u[p], hi = edges_u[p + 1];
    if (!(hi > lo)) continue;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = map.t(lo + (hi - lo) * rule.nodes[i]);
      axis.push_back({t, (hi - lo) * rule.weights[i] * map.jacobian(t), p});
    }
  }
  TensorZone out;
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  std::vector<geometry::AxisInterval> slabs(idx.size());
  for (;;) {
    double w = 1.0;
    int cls = 2;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const Node& node = axis[idx[a]];
      w *= node.w;
      cls = std::min(cls, node.cls);
      slabs[a] = {node.t, std::numeric_limits<double>::infinity()};
    }
    out.sums[static_cast<std::size_t>(cls)] +=
        w * numerics::poisson_pmf(k, n * geometry::ball_box_volume(d, r, slabs));
    ++out.evaluations;
    std::size_t a = 0;
    while (a < idx.size() && ++idx[a] == axis.size()) idx[a++] = 0;
    if (a == idx.size()) break;
  }
  return out;
}

PsiIntegral integrate_ball(const TheoryParams& p, double r, const PsiOptions& options) {
  const int d = p.d;
  const int k = p.k;
  const double n = p.n;
  const double R = p.region.ball_radius();
  const LayerCuts cuts = layer_cuts(r, options.layer_constant);
  const double shell = d * unit_ball_volume(d);

  PsiIntegral out;
  const double inner = std::max(0.0, R - r);
  out.interior = n * ball_volume(d, inner) * numerics::poisson_pmf(k, n * ball_volume(d, r));

  // Integrate over the depth below the sphere, delta = R - |x|.
  auto depth_integrand = [&](double delta) {
    const double s = R - delta;
    const double v = geometry::ball_ball_volume(d, r, R, s);
    return n * shell * std::pow(s, d - 1) * numerics::poisson_pmf(k, n * v);
  };
  const double top = std::min(r, R);
  const double rate = n * unit_ball_volume(d - 1) * std::pow(r, d - 1);
  auto piece = [&](double a, double b) {
    a = std::min(a, top);
    b = std::min(b, top);
    return b > a ? numerics::integrate_exponential(depth_integrand, a, b, rate, 1e-10).value : 0.0;
  };
  const double p2 = piece(0.0, cuts.w);
  const double p11 = piece(cuts.w, cuts.half);
  const double p12 = piece(cuts.half, r);
  out.faces = p2 + p11 + p12;
  out.parts.omega0 = {out.interior, 0.0};
  out.parts.omega2 = {p2, 0.0};
  out.parts.omega11 = {p11, 0.0};
  out.parts.omega12 = {p12, 0.0};

  auto half_space = [&](double t) {
    return numerics::poisson_pmf(k, n * geometry::segment_volume(d, r, t));
  };
  out.half_space_layer =
      p.region.surface_area() * n *
      numerics::integrate_exponential(half_space, 0.0, 0.5 * r, rate, 1e-10).value;
  out.value = out.interior + out.faces;
  return out;
}

PsiIntegral integrate_box_zones(const TheoryParams& p, double r, const PsiOptions& options,
                                Rng& rng) {
  const int d = p.d;
  const int k = p.k;
  const double n = p.n;
  const auto sides = p.region.sides();
  const LayerCuts cuts = layer_cuts(r, options.layer_constant);

  std::vector<double> q(sides.begin(), sides.end());
  for (double& v : q) v -= 2.0 * r;
  const auto e = elementary_symmetric(q);
  // Zone with m faces within r: total measure of the remaining coordinates,
  // summed over axis subsets and face choices.
  auto zone_weight = [&](int m) { return std::ldexp(e[static_cast<std::size_t>(d - m)], m); };

  PsiIntegral out;
  out.interior = n * e[static_cast<std::size_t>(d)] * numerics::poisson_pmf(k, n * ball_volume(d, r));
  out.parts.omega0 = {out.interior, 0.0};

  // n a(r, t) grows like n V_{d-1}(r) t off the face.
  const double face_rate = n * unit_ball_volume(d - 1) * std::pow(r, d - 1);
  auto face_integrand = [&](double t) {
    return numerics::poisson_pmf(k, n * geometry::segment_volume(d, r, t));
  };
  auto face_piece = [&](double a, double b) {
    return b > a ? numerics::integrate_exponential(face_integrand, a, b, face_rate, 1e-11).value : 0.0;
  };
  const double f2 = face_piece(0.0, cuts.w);
  const double f11 = face_piece(cuts.w, cuts.half);
  const double f12 = face_piece(cuts.half, r);
  const double w1 = n * zone_weight(1);
  out.faces = w1 * (f2 + f11 + f12);
  out.half_space_layer = p.region.surface_area() * n * (f2 + f11);
  out.parts.omega2 = {w1 * f2, 0.0};
  out.parts.omega11 = {w1 * f11, 0.0};
  out.parts.omega12 = {w1 * f12, 0.0};

  // Zones touching m >= 2 faces. ψ there depends on the m face distances
  // only. Each distance is mapped through the truncated exponential whose rate
  // matches how fast the ball volume grows with it, which flattens the
  // boundary peak of ψ.
  const double section = unit_ball_volume(d - 1) * std::pow(r, d - 1);
  PsiPart edges{0.0, 0.0};
  for (int m = 2; m <= d; ++m) {
    const double weight = n * zone_weight(m);
    if (weight <= 0.0) continue;
    const double rate = n * section / std::ldexp(1.0, m - 1);
    const ExpMap map(rate, r);
    std::array<PsiPart, 3> zone{};
    if (m <= kMaxTensorFaces) {
      // Tensor Gauss-Legendre on panels split at the layer cuts, so each cell
      // has a definite omega class (that of its smallest distance). The error
      // is the gap to a coarser rule.
      const auto fine = tensor_zone(d, k, n, r, m, map, cuts, options.quadrature_order);
      const auto coarse = tensor_zone(d, k, n, r, m, map, cuts, coarser_order(options.quadrature_order));
      for (int c = 0; c < 3; ++c)
        zone[c] = {weight * fine.sums[c], weight * std::abs(fine.sums[c] - coarse.sums[c])};
      out.samples += fine.evaluations + coarse.evaluations;
    } else {
      const std::uint64_t samples = std::max<std::uint64_t>(
          4096, options.budget >> (2 * static_cast<unsigned>(m - 2)));
      Accumulator part[3];
      std::vector<geometry::AxisInterval> slabs(static_cast<std::size_t>(m));
      for (std::uint64_t s = 0; s < samples; ++s) {
        double w = 1.0;
        double dist = r;
        for (auto& slab : slabs) {
          const double u = rng.uniform();
          const double t = map.t(u);
          w *= map.jacobian(t);
          slab = {t, std::numeric_limits<double>::infinity()};
          dist = std::min(dist, t);
        }
        const double x = w * numerics::poisson_pmf(k, n * geometry::ball_box_volume(d, r, slabs));
        const int cls = layer_class(dist, cuts);
        for (int c = 0; c < 3; ++c) part[c].add(c == cls ? x : 0.0);
      }
      for (int c = 0; c < 3; ++c) zone[c] = part[c].estimate(static_cast<double>(samples), weight);
      out.samples += samples;
    }
    edges = add_parts(edges, add_parts(zone[0], add_parts(zone[1], zone[2])));
    out.parts.omega2 = add_parts(out.parts.omega2, zone[0]);
    out.parts.omega11 = add_parts(out.parts.omega11, zone[1]);
    out.parts.omega12 = add_parts(out.parts.omega12, zone[2]);
  }
  out.edges = edges.value;
  out.edges_std_error = edges.std_error;
  out.value = out.interior + out.faces + out.edges;
  out.std_error = edges.std_error;
  return out;
}

/// Plain Monte Carlo over the whole box; used when r is too large for the
/// zone decomposition (some axis has both faces within r).
PsiIntegral integrate_box_plain(const TheoryParams& p, double r, const PsiOptions& options,
                                Rng& rng) {
  const int d = p.d;
  const auto sides = p.region.sides();
  const LayerCuts cuts = layer_cuts(r, options.layer_constant);
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<geometry::AxisInterval> slabs(x.size());
  Accumulator all;
  Accumulator part[4];
  const std::uint64_t samples = std::max<std::uint64_t>(options.budget, 2);
  for (std::uint64_t s = 0; s < samples; ++s) {
    geometry::sample_uniform(p.region, rng, x);
    for (std::size_t i = 0; i < x.size(); ++i) slabs[i] = {x[i], sides[i] - x[i]};
    const double v = geometry::ball_box_volume(d, r, slabs);
    const double val = numerics::poisson_pmf(p.k, p.n * v);
    all.add(val);
    const double dist = p.region.distance_to_boundary(x);
    const int cls = dist >= r ? 0 : dist <= cuts.w ? 1 : dist <= cuts.half ? 2 : 3;
    for (int c = 0; c < 4; ++c) part[c].add(c == cls ? val : 0.0);
  }
  const double count = static_cast<double>(samples);
  PsiIntegral out;
  const PsiPart total = all.estimate(count, p.n);
  out.value = total.value;
  out.std_error = total.std_error;
  out.edges = total.value;
  out.edges_std_error = total.std_error;
  out.parts.omega0 = part[0].estimate(count, p.n);
  out.parts.omega2 = part[1].estimate(count, p.n);
  out.parts.omega11 = part[2].estimate(count, p.n);
  out.parts.omega12 = part[3].estimate(count, p.n);
  auto half_space = [&](double t) {
    return numerics::poisson_pmf(p.k, p.n * geometry::segment_volume(d, r, t));
  };
  out.half_space_layer =
      p.region.surface_area() * p.n *
      numerics::integrate_exponential(half_space, 0.0, 0.5 * r,
                                      p.n * unit_ball_volume(d - 1) * std::pow(r, d - 1), 1e-10)
          .value;
  out.samples = samples;
  return out;
}

}  // namespace

void TheoryParams::validate() const {
  if (d < 2) throw DomainError("dimension d must be >= 2");
  if (k < 0) throw DomainError("k must be >= 0");
  if (!(n >= 3.0) || !std::isfinite(n)) throw DomainError("n must be >= 3");
  if (!std::isfinite(c)) throw DomainError("c must be finite");
  if (region.dimension() != d) throw DomainError("region dimension does not match d");
}

double loglog_coefficient(int d, int k) {
  if (d < 2) throw DomainError("loglog_coefficient: d must be >= 2");
  return static_cast<double>(d * k - d + 1) / (d - 1);
}

double density_constant(int d) {
  if (d < 2) throw DomainError("density_constant: d must be >= 2");
  return d / (2.0 * (d - 1)) * unit_ball_volume(d);
}

double exponent_constant(int d) {
  if (d < 2) throw DomainError("exponent_constant: d must be >= 2");
  return (d - 1.0) / d;
}

double boundary_log_constant(int d, int k, double area) {
  if (d < 2) throw DomainError("boundary_log_constant: d must be >= 2");
  if (k < 0) throw DomainError("boundary_log_constant: k must be >= 0");
  if (!(area > 0.0)) throw DomainError("boundary_log_constant: area must be positive");
  const double B = exponent_constant(d);
  return std::log(area) + k * std::log(B) + B * std::log(density_constant(d)) -
         std::log(unit_ball_volume(d - 1)) - numerics::log_factorial(k);
}

double solve_xi(int d, int k, double c, double area) {
  if (d == 2) throw DomainError("solve_xi: d = 2 uses solve_xi_2d");
  if (d < 2) throw DomainError("solve_xi: d must be >= 3");
  return (c + boundary_log_constant(d, k, area)) / exponent_constant(d);
}

double xi_equation_lhs(int d, int k, double xi, double area) {
  const double B = exponent_constant(d);
  return area * std::pow(B, k) * std::pow(density_constant(d), B) /
         (std::exp(B * xi) * unit_ball_volume(d - 1) * std::exp(numerics::log_factorial(k)));
}

std::optional<double> solve_xi_2d(int k, double c, double perimeter) {
  if (k < 0) throw DomainError("solve_xi_2d: k must be >= 0");
  if (!(perimeter > 0.0)) throw DomainError("solve_xi_2d: perimeter must be positive");
  if (k == 0) return std::nullopt;
  const double sp = std::sqrt(kPi);
  if (k == 1) {
    const double root = std::sqrt(std::exp(-c) + kPi * perimeter * perimeter / 64.0);
    return -2.0 * std::log(root - perimeter * sp / 8.0);
  }
  return 2.0 * (std::log(perimeter * sp) - (k + 1) * std::log(2.0) - numerics::log_factorial(k)) +
         2.0 * c;
}

double min_admissible_n(int d, int k, double xi) {
  auto g = [&](double log_n) { return log_n + loglog_coefficient(d, k) * std::log(log_n) + xi; };
  double lo = std::log(3.0);
  if (g(lo) > 0.0) return 3.0;
  double hi = 2.0 * lo;
  while (g(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 700.0) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  return std::exp(hi);
}

double radius_from_xi(int d, int k, double n, double xi) {
  if (!(n >= 3.0)) throw DomainError("n must be >= 3");
  const double num = numerator(d, k, n, xi);
  if (!(num > 0.0)) {
    const double min_n = min_admissible_n(d, k, xi);
    std::ostringstream msg;
    msg.precision(6);
    msg << "n = " << n << " is below the asymptotic regime (log n + C_k log log n + xi = " << num
        << " <= 0); need n > " << min_n;
    throw RegimeError(msg.str(), min_n);
  }
  return std::pow(num / (density_constant(d) * n), 1.0 / d);
}

DerivedConstants critical_radius(const TheoryParams& params) {
  params.validate();
  const int d = params.d;
  DerivedConstants out;
  out.C_k = loglog_coefficient(d, params.k);
  out.c_d = density_constant(d);
  out.B = exponent_constant(d);
  const double area = params.region.surface_area();
  if (d == 2) {
    const auto xi = solve_xi_2d(params.k, params.c, area);
    if (!xi) {
      out.direct_radius = true;
      const double num = std::log(params.n) + params.c;
      if (!(num > 0.0)) {
        const double min_n = std::max(3.0, std::exp(-params.c));
        std::ostringstream msg;
        msg << "n = " << params.n << " is below the asymptotic regime (log n + c <= 0); need n > "
            << min_n;
        throw RegimeError(msg.str(), min_n);
      }
      out.xi = params.c;
      out.r_n = std::sqrt(num / (kPi * params.n));
      return out;
    }
    out.xi = *xi;
  } else {
    out.xi = solve_xi(d, params.k, params.c, area);
  }
  out.r_n = radius_from_xi(d, params.k, params.n, out.xi);
  return out;
}

double gumbel_cdf(double c) { return std::exp(-std::exp(-c)); }

double gumbel_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("gumbel_quantile: p must lie in (0, 1)");
  return -std::log(-std::log(p));
}

double psi(const TheoryParams& params, double r, const geometry::VolumeEstimate& volume) {
  const double full = ball_volume(params.d, r);
  if (!(volume.value >= 0.0) || volume.value > full * (1.0 + 1e-9))
    throw DomainError("psi: volume must lie in [0, V_d(r)]");
  return numerics::poisson_pmf(params.k, params.n * volume.value);
}

double lemma1_lhs(int d, int k, double n, double xi) {
  const double r = radius_from_xi(d, k, n, xi);
  auto f = [&](double t) { return numerics::poisson_pmf(k, n * geometry::segment_volume(d, r, t)); };
  const double rate = n * unit_ball_volume(d - 1) * std::pow(r, d - 1);
  return n * numerics::integrate_exponential(f, 0.0, 0.5 * r, rate, 1e-11).value;
}

double lemma1_rhs(int d, int k, double xi) {
  if (d < 2) throw DomainError("lemma1_rhs: d must be >= 2");
  if (k < 0) throw DomainError("lemma1_rhs: k must be >= 0");
  const double B = exponent_constant(d);
  return std::exp(k * std::log(B) + B * std::log(density_constant(d)) - B * xi -
                  std::log(unit_ball_volume(d - 1)) - numerics::log_factorial(k));
}

PsiPart PsiDecomposition::total() const {
  return add_parts(add_parts(omega0, omega2), add_parts(omega11, omega12));
}

PsiIntegral integrate_psi(const TheoryParams& params, double r, const PsiOptions& options,
                          Rng& rng) {
  params.validate();
  if (!(r > 0.0)) throw DomainError("integrate_psi: radius must be positive");
  if (params.region.kind() == geometry::RegionKind::Ball) return integrate_ball(params, r, options);
  const auto sides = params.region.sides();
  const double smallest = *std::min_element(sides.begin(), sides.end());
  if (2.0 * r < smallest) return integrate_box_zones(params, r, options, rng);
  return integrate_box_plain(params, r, options, rng);
}

PsiDecomposition decompose_psi_integral(const TheoryParams& params, double r,
                                        const PsiOptions& options, Rng& rng) {
  return integrate_psi(params, r, options, rng).parts;
}

}  // namespace rggcrit::theory
