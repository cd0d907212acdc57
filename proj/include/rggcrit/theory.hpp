#pragma once

#include <cstdint>
#include <optional>

#include "rggcrit/geometry.hpp"
#include "rggcrit/random.hpp"

namespace rggcrit::theory {

/// Inputs of the critical-radius formulas. n is continuous (n >= 3) so that
/// quadrature studies can use fine grids; c may be any real.
struct TheoryParams {
  int d = 3;
  int k = 0;
  double c = 0.0;
  double n = 1000.0;
  geometry::Region region = geometry::Region::cube(3);

  /// Throws DomainError on d < 2, k < 0, n < 3, or region dimension != d.
  void validate() const;
};

struct DerivedConstants {
  double C_k = 0.0;  ///< (dk - d + 1)/(d - 1), the log log n coefficient
  double c_d = 0.0;  ///< d/(2(d-1)) V_d(1)
  double B = 0.0;    ///< (d-1)/d
  double xi = 0.0;
  double r_n = 0.0;
  /// d = 2, k = 0: r_n = sqrt((log n + c)/(pi n)) and xi is not used.
  bool direct_radius = false;
};

double loglog_coefficient(int d, int k);  // C_k
double density_constant(int d);           // c_d
double exponent_constant(int d);          // B

/// log( area ((d-1)/d)^k c_d^{(d-1)/d} / (V_{d-1}(1) k!) ), the constant
/// the ξ-equation subtracts after taking logs.
double boundary_log_constant(int d, int k, double area);

/// Closed-form root of
///   area ((d-1)/d)^k c_d^{(d-1)/d} / (e^{(d-1)ξ/d} V_{d-1}(1) k!) = e^{-c}
/// for d >= 3.
double solve_xi(int d, int k, double c, double area);

/// Left-hand side of the ξ-equation above (for back substitution).
double xi_equation_lhs(int d, int k, double xi, double area);

/// Planar ξ. k = 1 and k > 1 use their separate closed forms; k = 0 yields
/// nullopt, meaning the radius r_n = sqrt((log n + c)/(pi n)) is used directly.
std::optional<double> solve_xi_2d(int k, double c, double perimeter);

/// r_n from (d, k, n, ξ): ((log n + C_k log log n + ξ)/(c_d n))^{1/d}.
/// Throws RegimeError when the numerator is not positive.
double radius_from_xi(int d, int k, double n, double xi);

/// All derived constants at the given parameters; d = 2 routes to the planar
/// formulas.
DerivedConstants critical_radius(const TheoryParams& params);

/// Smallest n >= 3 at which the numerator log n + C_k log log n + ξ is positive.
double min_admissible_n(int d, int k, double xi);

double gumbel_cdf(double c);
double gumbel_quantile(double p);

/// (n v)^k e^{-n v} / k! with v = volume.value, evaluated in log space.
/// Requires 0 <= v <= V_d(r) (with a 1e-9 relative allowance).
double psi(const TheoryParams& params, double r, const geometry::VolumeEstimate& volume);

/// n ∫_0^{r/2} pmf(k; n a(r, t)) dt at r = radius_from_xi(d, k, n, ξ).
double lemma1_lhs(int d, int k, double n, double xi);

/// ((d-1)/d)^k c_d^{(d-1)/d} / (e^{(d-1)ξ/d} V_{d-1}(1) k!).
double lemma1_rhs(int d, int k, double xi);

/// The four parts of n ∫_Ω ψ split by distance to the boundary, with the
/// distance standing in for the segment coordinate t(x):
///   omega0  : dist >= r
///   omega2  : dist <= layer r^2
///   omega11 : layer r^2 < dist <= r/2
///   omega12 : r/2 < dist < r
struct PsiPart {
  double value = 0.0;
  double std_error = 0.0;
};

struct PsiDecomposition {
  PsiPart omega0, omega2, omega11, omega12;
  [[nodiscard]] PsiPart total() const;
};

struct PsiIntegral {
  double value = 0.0;
  double std_error = 0.0;
  double interior = 0.0;           ///< points at distance >= r (exact)
  double faces = 0.0;              ///< single-face layer, 1-D quadrature
  double edges = 0.0;              ///< two or more faces within r
  double edges_std_error = 0.0;    ///< MC standard error or quadrature error estimate
  /// Area(∂Ω) n ∫_0^{r/2} pmf(k; n a(r,t)) dt, half-space model.
  double half_space_layer = 0.0;
  PsiDecomposition parts;
  std::uint64_t samples = 0;  ///< integrand evaluations in the multi-face zones
};

struct PsiOptions {
  std::uint64_t budget = 1'000'000;  ///< Monte Carlo samples (plain fallback, zones with > 3 faces)
  unsigned quadrature_order = 12;    ///< Gauss-Legendre points per panel, zones with 2-3 faces
  double layer_constant = 1.0;       ///< width of omega2 in units of r^2
};

/// n ∫_Ω ψ^k_{n,r}(x) dx.
///
/// Cube and box (r < smallest side / 2): the region splits into zones by the
/// set of faces within r of x. The interior zone is exact, single-face zones
/// reduce to a 1-D quadrature in the distance to the face. Zones near two or
/// three faces use a tensor Gauss-Legendre rule over the face distances
/// (std_error then holds the gap to a coarser rule); zones near more faces use
/// importance-sampled Monte Carlo. Inner ball volumes come from ball_box_volume.
/// Ball: ψ depends only on |x|, so a radial quadrature with exact two-ball
/// intersections is used and the standard error is zero.
PsiIntegral integrate_psi(const TheoryParams& params, double r, const PsiOptions& options,
                          Rng& rng);

/// The four omega-parts of integrate_psi.
PsiDecomposition decompose_psi_integral(const TheoryParams& params, double r,
                                        const PsiOptions& options, Rng& rng);

}  // namespace rggcrit::theory
