#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rggcrit/random.hpp"

namespace rggcrit::geometry {

using Point = std::vector<double>;

enum class RegionKind { Cube, Ball, Box };

/// A unit-volume domain in R^d.
///
/// Cube and box occupy [0, s_1] x ... x [0, s_d] (s_i = 1 for the cube); the
/// ball is centred at the origin with the radius that gives unit volume.
class Region {
 public:
  static Region cube(int d);
  static Region ball(int d);
  /// Box with the given side lengths; their product must be 1 (to 1e-9).
  static Region box(std::vector<double> sides);

  [[nodiscard]] RegionKind kind() const noexcept { return kind_; }
  [[nodiscard]] int dimension() const noexcept { return dim_; }
  /// Side lengths (cube and box only).
  [[nodiscard]] std::span<const double> sides() const noexcept { return sides_; }
  /// Radius of the unit-volume ball (ball only).
  [[nodiscard]] double ball_radius() const noexcept { return radius_; }

  [[nodiscard]] double volume() const noexcept { return 1.0; }
  [[nodiscard]] double surface_area() const;
  [[nodiscard]] double diameter() const;
  [[nodiscard]] bool contains(std::span<const double> x) const;
  /// Euclidean distance from an interior point to the boundary.
  [[nodiscard]] double distance_to_boundary(std::span<const double> x) const;

  /// Axis-aligned bounding box, lower and upper corner.
  [[nodiscard]] std::vector<double> lower() const;
  [[nodiscard]] std::vector<double> upper() const;

  [[nodiscard]] std::string_view kind_name() const noexcept;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  Region(RegionKind kind, int dim, std::vector<double> sides, double radius)
      : kind_(kind), dim_(dim), sides_(std::move(sides)), radius_(radius) {}

  RegionKind kind_;
  int dim_;
  std::vector<double> sides_;
  double radius_;
};

/// {"kind":"cube"|"ball"|"box","d":3,"sides":[...]}
void to_json(nlohmann::json& j, const Region& region);
Region region_from_json(const nlohmann::json& j);

enum class VolumeMethod { Exact, Quadrature, MonteCarlo };

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  VolumeMethod method = VolumeMethod::Exact;
};

std::string_view method_name(VolumeMethod method) noexcept;

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// pi^{d/2} r^d / Gamma(d/2 + 1).
double ball_volume(int d, double r);

/// Volume of {x : |x| <= r, x_1 <= t}, the part of a radius-r ball on one
/// side of a hyperplane at signed distance t from its centre, t in [-r, r].
/// Computed from the regularised incomplete beta function
/// I_{(1+t/r)/2}((d+1)/2, (d+1)/2).
double segment_volume(int d, double r, double t);

/// vol(B(x, r) ∩ B(y, r)) with |x - y| = L.
double lens_volume(int d, double r, double L);

/// Volume of the half ball of B(x, r) facing y, minus B(y, r), |x - y| = L < r,
/// by quadrature over the slab 0 <= t <= L/2.
double shadow_volume_exact(int d, double r, double L);

/// Leading term (d-1) pi^{(d-1)/2} L^d / (16 Gamma((d+1)/2)).
double shadow_lower_bound(int d, double L);

/// Distances from a ball centre to the two faces of an axis-aligned slab.
/// The slab along that axis is [-below, above] relative to the centre.
struct AxisInterval {
  double below;
  double above;
};

/// vol(B(0, r) ∩ slab_1 ∩ ... ∩ slab_m) in R^d, each slab acting on its own
/// coordinate axis (m <= d). Nested slicing along the constrained axes with
/// piecewise Gauss-Legendre rules split where a constraint starts to bind;
/// exact (closed form) when at most one slab cuts the ball.
double ball_box_volume(int d, double r, std::span<const AxisInterval> slabs);

/// vol(B(x, r) ∩ B(0, R)) in R^d with |x| = s.
double ball_ball_volume(int d, double r, double R, double s);

/// vol(B(x, r) ∩ region). Exact when the ball is interior or crosses exactly
/// one flat face; Monte Carlo with `budget` samples otherwise. For cube and
/// box the samples are averaged over reflections across every crossed face.
VolumeEstimate ball_region_volume(const Region& region, std::span<const double> x, double r,
                                  std::uint64_t budget, Rng& rng);

/// Always the Monte Carlo estimator of ball_region_volume.
VolumeEstimate ball_region_volume_mc(const Region& region, std::span<const double> x, double r,
                                     std::uint64_t budget, Rng& rng);

/// Uniform point in the region.
Point sample_uniform(const Region& region, Rng& rng);
void sample_uniform(const Region& region, Rng& rng, std::span<double> out);

/// Uniform point in B(center, r).
void sample_in_ball(std::span<const double> center, double r, Rng& rng, std::span<double> out);

/// Monte Carlo counterparts of segment_volume, lens_volume and
/// shadow_volume_exact (value and binomial standard error). The segment and
/// lens sample B(0, r); the shadow samples the slab 0 <= x_1 <= L/2 of the
/// cylinder over B^{d-1}(r), which contains it.
VolumeEstimate segment_volume_mc(int d, double r, double t, std::uint64_t samples, Rng& rng);
VolumeEstimate lens_volume_mc(int d, double r, double L, std::uint64_t samples, Rng& rng);
VolumeEstimate shadow_volume_mc(int d, double r, double L, std::uint64_t samples, Rng& rng);

double surface_area(const Region& region);
double distance_to_boundary(const Region& region, std::span<const double> x);

struct AssumptionOneReport {
  double min_ratio = 1.0;        ///< min over probes of vol(B(x,r) ∩ Ω) / V_d(r)
  double lower_bound = 0.0;      ///< 2^{-d}
  std::vector<double> worst_point;
  std::uint64_t probes = 0;
};

/// Probes boundary-adjacent points (including every cube/box corner) and
/// reports the smallest volume fraction of B(x, r) inside the region.
AssumptionOneReport assumption_one_diagnostic(const Region& region, double r,
                                              std::uint64_t probes, std::uint64_t budget,
                                              Rng& rng);

}  // namespace rggcrit::geometry
