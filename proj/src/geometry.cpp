#include "rggcrit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "rggcrit/errors.hpp"
#include "rggcrit/numerics.hpp"

namespace rggcrit::geometry {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dimension(int d, int min_d, const char* what) {
  if (d < min_d)
    throw DomainError(std::string(what) + ": dimension must be >= " + std::to_string(min_d));
}

/// Fraction of the unit d-ball with x_1 <= u, u in [-1, 1]. Closed forms for
/// d <= 3, incomplete beta above.
double segment_fraction(int d, double u) {
  u = std::clamp(u, -1.0, 1.0);
  switch (d) {
    case 1:
      return 0.5 * (1.0 + u);
    case 2:
      return 1.0 - (std::acos(u) - u * std::sqrt(std::max(0.0, 1.0 - u * u))) / kPi;
    case 3:
      return 0.25 * (2.0 + 3.0 * u - u * u * u);
    default: {
      const double a = 0.5 * (d + 1);
      const double x = 0.5 * (1.0 + u);
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      return boost::math::ibeta(a, a, x);
    }
  }
}

/// vol{z in B(0, rho) ⊂ R^dim : -below <= z_1 <= above}.
double slab_cut(int dim, double rho, const AxisInterval& s) {
  const double hi = std::min(s.above, rho);
  const double lo = std::min(s.below, rho);
  if (hi + lo <= 0.0) return 0.0;
  const double frac = segment_fraction(dim, hi / rho) - segment_fraction(dim, -lo / rho);
  return std::max(0.0, frac) * ball_volume(dim, rho);
}

bool binds(const AxisInterval& s, double rho) { return s.below < rho || s.above < rho; }

double slice_volume(int dim, double rho, std::span<const AxisInterval> slabs) {
  if (rho <= 0.0) return 0.0;
  // Drop slabs that do not reach the ball; they cannot bind on any slice either.
  AxisInterval active[16];
  std::size_t m = 0;
  for (const auto& s : slabs) {
    if (s.above <= -rho || s.below <= -rho || s.above + s.below <= 0.0) return 0.0;
    if (binds(s, rho)) active[m++] = s;
  }
  if (m == 0) return ball_volume(dim, rho);
  if (m == 1) return slab_cut(dim, rho, active[0]);

  // Slice along the first active axis: z = rho sin(theta), slice radius rho cos(theta).
  const AxisInterval first = active[0];
  const std::span<const AxisInterval> rest(active + 1, m - 1);
  const double theta_lo = std::asin(-std::min(first.below, rho) / rho);
  const double theta_hi = std::asin(std::min(first.above, rho) / rho);
  if (theta_hi <= theta_lo) return 0.0;

  std::vector<double> breaks{theta_lo, theta_hi};
  for (const auto& s : rest) {
    for (double v : {s.below, s.above}) {
      if (v > 0.0 && v < rho) {
        const double k = std::acos(v / rho);
        for (double b : {-k, k})
          if (b > theta_lo && b < theta_hi) breaks.push_back(b);
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());

  auto integrand = [&](double theta) {
    const double c = std::cos(theta);
    return slice_volume(dim - 1, rho * c, rest) * rho * c;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] > breaks[i])
      total += boost::math::quadrature::gauss<double, 30>::integrate(integrand, breaks[i],
                                                                      breaks[i + 1]);
  }
  return total;
}

void require_point(const Region& region, std::span<const double> x) {
  if (static_cast<int>(x.size()) != region.dimension())
    throw DomainError("point dimension does not match region");
  if (!region.contains(x)) throw DomainError("point lies outside the region");
}

/// Slabs describing a cube/box around x, one per axis.
std::vector<AxisInterval> box_slabs(const Region& region, std::span<const double> x) {
  std::vector<AxisInterval> slabs(x.size());
  const auto sides = region.sides();
  for (std::size_t i = 0; i < x.size(); ++i) slabs[i] = {x[i], sides[i] - x[i]};
  return slabs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Region

Region Region::cube(int d) {
  require_dimension(d, 2, "Region::cube");
  return Region(RegionKind::Cube, d, std::vector<double>(static_cast<std::size_t>(d), 1.0), 0.0);
}

Region Region::ball(int d) {
  require_dimension(d, 2, "Region::ball");
  const double R = std::pow(1.0 / unit_ball_volume(d), 1.0 / d);
  return Region(RegionKind::Ball, d, {}, R);
}

Region Region::box(std::vector<double> sides) {
  const int d = static_cast<int>(sides.size());
  require_dimension(d, 2, "Region::box");
  double log_volume = 0.0;
  for (double s : sides) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("Region::box: sides must be positive");
    log_volume += std::log(s);
  }
  if (std::abs(log_volume) > 1e-9) throw DomainError("Region::box: side lengths must multiply to 1");
  return Region(RegionKind::Box, d, std::move(sides), 0.0);
}

double Region::surface_area() const {
  if (kind_ == RegionKind::Ball) return dim_ * unit_ball_volume(dim_) * std::pow(radius_, dim_ - 1);
  // Each axis contributes two faces of area volume / side.
  double area = 0.0;
  for (double s : sides_) area += 2.0 / s;
  return area;
}

double Region::diameter() const {
  if (kind_ == RegionKind::Ball) return 2.0 * radius_;
  double sq = 0.0;
  for (double s : sides_) sq += s * s;
  return std::sqrt(sq);
}

bool Region::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  if (kind_ == RegionKind::Ball) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    return sq <= radius_ * radius_;
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < 0.0 || x[i] > sides_[i]) return false;
  return true;
}

double Region::distance_to_boundary(std::span<const double> x) const {
  if (kind_ == RegionKind::Ball) {
    double sq = 0.0;
    for (double v : x) sq += v * v;
    return std::max(0.0, radius_ - std::sqrt(sq));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) best = std::min({best, x[i], sides_[i] - x[i]});
  return std::max(0.0, best);
}

std::vector<double> Region::lower() const {
  return std::vector<double>(static_cast<std::size_t>(dim_),
                             kind_ == RegionKind::Ball ? -radius_ : 0.0);
}

std::vector<double> Region::upper() const {
  if (kind_ == RegionKind::Ball) return std::vector<double>(static_cast<std::size_t>(dim_), radius_);
  return sides_;
}

std::string_view Region::kind_name() const noexcept {
  switch (kind_) {
    case RegionKind::Cube:
      return "cube";
    case RegionKind::Ball:
      return "ball";
    case RegionKind::Box:
      return "box";
  }
  return "cube";
}

void to_json(nlohmann::json& j, const Region& region) {
  j = nlohmann::json{{"kind", region.kind_name()}, {"d", region.dimension()}};
  if (region.kind() == RegionKind::Box)
    j["sides"] = std::vector<double>(region.sides().begin(), region.sides().end());
}

Region region_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cube") return Region::cube(j.at("d").get<int>());
  if (kind == "ball") return Region::ball(j.at("d").get<int>());
  if (kind == "box") {
    auto sides = j.at("sides").get<std::vector<double>>();
    if (j.contains("d") && j.at("d").get<int>() != static_cast<int>(sides.size()))
      throw DomainError("region: \"d\" does not match the number of sides");
    return Region::box(std::move(sides));
  }
  throw DomainError("region: unknown kind \"" + kind + "\"");
}

std::string_view method_name(VolumeMethod method) noexcept {
  switch (method) {
    case VolumeMethod::Exact:
      return "exact";
    case VolumeMethod::Quadrature:
      return "quadrature";
    case VolumeMethod::MonteCarlo:
      return "monte-carlo";
  }
  return "exact";
}

// ---------------------------------------------------------------------------
// Volumes

double unit_ball_volume(int d) {
  require_dimension(d, 1, "unit_ball_volume");
  return std::exp(0.5 * d * std::log(kPi) - std::lgamma(0.5 * d + 1.0));
}

double ball_volume(int d, double r) {
  require_dimension(d, 1, "ball_volume");
  if (!(r >= 0.0)) throw DomainError("ball_volume: radius must be non-negative");
  if (r == 0.0) return 0.0;
  return unit_ball_volume(d) * std::pow(r, d);
}

double segment_volume(int d, double r, double t) {
  require_dimension(d, 2, "segment_volume");
  if (!(r > 0.0)) throw DomainError("segment_volume: radius must be positive");
  if (!(std::abs(t) <= r)) throw DomainError("segment_volume: |t| must not exceed r");
  const double a = 0.5 * (d + 1);
  const double x = 0.5 * (1.0 + t / r);
  double frac;
  if (x <= 0.0)
    frac = 0.0;
  else if (x >= 1.0)
    frac = 1.0;
  else if (x <= 0.5)
    frac = boost::math::ibeta(a, a, x);
  else
    frac = 1.0 - boost::math::ibeta(a, a, 1.0 - x);
  return ball_volume(d, r) * frac;
}

double lens_volume(int d, double r, double L) {
  if (!(r > 0.0)) throw DomainError("lens_volume: radius must be positive");
  if (!(L >= 0.0)) throw DomainError("lens_volume: distance must be non-negative");
  if (L >= 2.0 * r) return 0.0;
  return 2.0 * (ball_volume(d, r) - segment_volume(d, r, 0.5 * L));
}

double shadow_volume_exact(int d, double r, double L) {
  require_dimension(d, 2, "shadow_volume_exact");
  if (!(r > 0.0)) throw DomainError("shadow_volume_exact: radius must be positive");
  if (!(L >= 0.0 && L < r)) throw DomainError("shadow_volume_exact: requires 0 <= L < r");
  if (L == 0.0) return 0.0;
  const double m = 0.5 * (d - 1);
  const double section = unit_ball_volume(d - 1);
  // (r^2 - t^2)^m - (r^2 - (L - t)^2)^m without cancellation: the two bases
  // differ by L (L - 2t).
  auto f = [&](double t) {
    const double lower = r * r - (L - t) * (L - t);
    const double gap = L * (L - 2.0 * t);
    return section * std::pow(lower, m) * std::expm1(m * std::log1p(gap / lower));
  };
  return numerics::integrate(f, 0.0, 0.5 * L, 1e-13).value;
}

double shadow_lower_bound(int d, double L) {
  require_dimension(d, 2, "shadow_lower_bound");
  if (!(L >= 0.0)) throw DomainError("shadow_lower_bound: L must be non-negative");
  return (d - 1) * std::pow(kPi, 0.5 * (d - 1)) * std::pow(L, d) /
         (16.0 * std::tgamma(0.5 * (d + 1)));
}

double ball_box_volume(int d, double r, std::span<const AxisInterval> slabs) {
  require_dimension(d, 1, "ball_box_volume");
  if (static_cast<int>(slabs.size()) > d)
    throw DomainError("ball_box_volume: more slabs than dimensions");
  if (slabs.size() > 16) throw DomainError("ball_box_volume: at most 16 slabs");
  if (!(r >= 0.0)) throw DomainError("ball_box_volume: radius must be non-negative");
  return slice_volume(d, r, slabs);
}

double ball_ball_volume(int d, double r, double R, double s) {
  if (!(r >= 0.0 && R >= 0.0 && s >= 0.0)) throw DomainError("ball_ball_volume: negative input");
  if (s + r <= R) return ball_volume(d, r);
  if (s + R <= r) return ball_volume(d, R);
  if (s >= r + R) return 0.0;
  // Radical hyperplane at distance h from the origin along x: beyond it the
  // R-ball binds, before it the r-ball does.
  const double h = (s * s + R * R - r * r) / (2.0 * s);
  const double big = ball_volume(d, R) - segment_volume(d, R, std::clamp(h, -R, R));
  const double small = segment_volume(d, r, std::clamp(h - s, -r, r));
  return big + small;
}

// ---------------------------------------------------------------------------
// Sampling

void sample_in_ball(std::span<const double> center, double r, Rng& rng, std::span<double> out) {
  const std::size_t d = center.size();
  double sq = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    out[i] = rng.normal();
    sq += out[i] * out[i];
  }
  const double radius = r * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
  const double scale = sq > 0.0 ? radius / std::sqrt(sq) : 0.0;
  for (std::size_t i = 0; i < d; ++i) out[i] = center[i] + scale * out[i];
}

namespace {

/// `box` * hits / samples with its binomial standard error.
VolumeEstimate binomial_estimate(double box, std::uint64_t hits, std::uint64_t samples) {
  const double m = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / m;
  return {box * p, box * std::sqrt(p * (1.0 - p) / m), VolumeMethod::MonteCarlo};
}

void require_samples(std::uint64_t samples, const char* what) {
  if (samples < 2) throw DomainError(std::string(what) + ": need at least 2 samples");
}

}  // namespace

VolumeEstimate segment_volume_mc(int d, double r, double t, std::uint64_t samples, Rng& rng) {
  require_dimension(d, 1, "segment_volume_mc");
  require_samples(samples, "segment_volume_mc");
  if (!(r > 0.0)) throw DomainError("segment_volume_mc: radius must be positive");
  const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
  std::vector<double> z(origin.size());
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    sample_in_ball(origin, r, rng, z);
    hits += z[0] <= t ? 1 : 0;
  }
  return binomial_estimate(ball_volume(d, r), hits, samples);
}

VolumeEstimate lens_volume_mc(int d, double r, double L, std::uint64_t samples, Rng& rng) {
  require_dimension(d, 1, "lens_volume_mc");
  require_samples(samples, "lens_volume_mc");
  if (!(r > 0.0) || !(L >= 0.0)) throw DomainError("lens_volume_mc: need r > 0, L >= 0");
  const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
  std::vector<double> z(origin.size());
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    sample_in_ball(origin, r, rng, z);
    double sq = (z[0] - L) * (z[0] - L);
    for (std::size_t i = 1; i < z.size(); ++i) sq += z[i] * z[i];
    hits += sq <= r * r ? 1 : 0;
  }
  return binomial_estimate(ball_volume(d, r), hits, samples);
}

VolumeEstimate shadow_volume_mc(int d, double r, double L, std::uint64_t samples, Rng& rng) {
  require_dimension(d, 2, "shadow_volume_mc");
  require_samples(samples, "shadow_volume_mc");
  if (!(r > 0.0) || !(L >= 0.0 && L < r)) throw DomainError("shadow_volume_mc: need 0 <= L < r");
  const std::vector<double> origin(static_cast<std::size_t>(d - 1), 0.0);
  std::vector<double> z(origin.size());
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double t = 0.5 * L * rng.uniform();
    sample_in_ball(origin, r, rng, z);
    double perp = 0.0;
    for (const double v : z) perp += v * v;
    hits += (t * t + perp <= r * r && (L - t) * (L - t) + perp > r * r) ? 1 : 0;
  }
  return binomial_estimate(0.5 * L * ball_volume(d - 1, r), hits, samples);
}

void sample_uniform(const Region& region, Rng& rng, std::span<double> out) {
  if (region.kind() == RegionKind::Ball) {
    const std::vector<double> origin(static_cast<std::size_t>(region.dimension()), 0.0);
    sample_in_ball(origin, region.ball_radius(), rng, out);
    return;
  }
  const auto sides = region.sides();
  for (std::size_t i = 0; i < sides.size(); ++i) out[i] = sides[i] * rng.uniform();
}

Point sample_uniform(const Region& region, Rng& rng) {
  Point p(static_cast<std::size_t>(region.dimension()));
  sample_uniform(region, rng, p);
  return p;
}

double surface_area(const Region& region) { return region.surface_area(); }

double distance_to_boundary(const Region& region, std::span<const double> x) {
  require_point(region, x);
  return region.distance_to_boundary(x);
}

// ---------------------------------------------------------------------------
// Ball ∩ region

VolumeEstimate ball_region_volume_mc(const Region& region, std::span<const double> x, double r,
                                     std::uint64_t budget, Rng& rng) {
  require_point(region, x);
  if (!(r > 0.0)) throw DomainError("ball_region_volume: radius must be positive");
  if (budget < 2) throw DomainError("ball_region_volume: budget must be >= 2");
  const std::size_t d = x.size();
  const double full = ball_volume(static_cast<int>(d), r);

  // Axes whose faces the ball crosses; reflections across them preserve the
  // uniform distribution on B(x, r).
  std::vector<std::size_t> crossed;
  if (region.kind() != RegionKind::Ball) {
    const auto sides = region.sides();
    for (std::size_t i = 0; i < d; ++i)
      if (x[i] < r || sides[i] - x[i] < r) crossed.push_back(i);
  }
  const std::size_t orbit = std::size_t{1} << crossed.size();

  std::vector<double> z(d), y(d);
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t s = 0; s < budget; ++s) {
    sample_in_ball(x, r, rng, z);
    std::size_t inside = 0;
    for (std::size_t mask = 0; mask < orbit; ++mask) {
      y = z;
      for (std::size_t b = 0; b < crossed.size(); ++b)
        if (mask & (std::size_t{1} << b)) y[crossed[b]] = 2.0 * x[crossed[b]] - z[crossed[b]];
      if (region.contains(y)) ++inside;
    }
    const double frac = static_cast<double>(inside) / static_cast<double>(orbit);
    sum += frac;
    sum_sq += frac * frac;
  }
  const double n = static_cast<double>(budget);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {full * mean, full * std::sqrt(var / n), VolumeMethod::MonteCarlo};
}

VolumeEstimate ball_region_volume(const Region& region, std::span<const double> x, double r,
                                  std::uint64_t budget, Rng& rng) {
  require_point(region, x);
  if (!(r > 0.0)) throw DomainError("ball_region_volume: radius must be positive");
  const int d = region.dimension();
  if (region.distance_to_boundary(x) >= r) return {ball_volume(d, r), 0.0, VolumeMethod::Exact};
  if (region.kind() != RegionKind::Ball) {
    const auto slabs = box_slabs(region, x);
    int crossed = 0;
    double t = 0.0;
    for (const auto& s : slabs) {
      const int faces = (s.below < r) + (s.above < r);
      crossed += faces;
      if (faces == 1) t = std::min(s.below, s.above);
    }
    if (crossed == 1) return {segment_volume(d, r, t), 0.0, VolumeMethod::Exact};
  }
  return ball_region_volume_mc(region, x, r, budget, rng);
}

// ---------------------------------------------------------------------------
// Boundary volume-fraction diagnostic

AssumptionOneReport assumption_one_diagnostic(const Region& region, double r,
                                              std::uint64_t probes, std::uint64_t budget,
                                              Rng& rng) {
  if (!(r > 0.0)) throw DomainError("assumption_one_diagnostic: radius must be positive");
  const int d = region.dimension();
  const double full = ball_volume(d, r);
  AssumptionOneReport report;
  report.lower_bound = std::ldexp(1.0, -d);

  auto probe = [&](const std::vector<double>& x) {
    const VolumeEstimate v = ball_region_volume(region, x, r, budget, rng);
    const double ratio = v.value / full;
    if (report.probes == 0 || ratio < report.min_ratio) {
      report.min_ratio = ratio;
      report.worst_point = x;
    }
    ++report.probes;
  };

  std::vector<double> x(static_cast<std::size_t>(d));
  if (region.kind() == RegionKind::Ball) {
    const double R = region.ball_radius();
    for (std::uint64_t p = 0; p < probes; ++p) {
      // Random direction, depth uniform in [0, r) below the sphere.
      std::vector<double> origin(x.size(), 0.0);
      sample_in_ball(origin, 1.0, rng, x);
      double norm = 0.0;
      for (double v : x) norm += v * v;
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      const double radial = std::max(0.0, R - r * rng.uniform());
      for (double& v : x) v *= radial / norm;
      probe(x);
    }
    return report;
  }

  const auto sides = region.sides();
  const std::uint64_t corners = std::uint64_t{1} << d;
  std::uint64_t done = 0;
  for (std::uint64_t c = 0; c < corners && done < probes; ++c, ++done) {
    for (int i = 0; i < d; ++i) x[i] = (c >> i) & 1 ? sides[i] : 0.0;
    probe(x);
  }
  for (; done < probes; ++done) {
    // A random nonempty set of axes pinned within r of one of their faces.
    sample_uniform(region, rng, x);
    std::uint64_t mask = 0;
    while (mask == 0) mask = rng.below(corners);
    for (int i = 0; i < d; ++i) {
      if (!(mask >> i & 1)) continue;
      const double depth = std::min(r * rng.uniform(), sides[i]);
      x[i] = rng.uniform() < 0.5 ? depth : sides[i] - depth;
    }
    probe(x);
  }
  return report;
}

}  // namespace rggcrit::geometry
