#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "rggcrit/connectivity.hpp"
#include "rggcrit/theory.hpp"

namespace rggcrit::experiments {

using theory::TheoryParams;

/// One simulated point set. c_delta / c_kappa are the radii mapped to the
/// c-scale by radius_to_c.
struct TrialResult {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  double rho_delta = 0.0;  ///< min_degree_radius(cloud, k + 1)
  double rho_kappa = 0.0;  ///< connectivity_radius(cloud, k + 1)
  double c_delta = 0.0;
  double c_kappa = 0.0;
  bool equal = false;
  /// Vertices of degree exactly k in G(cloud, r_n(params.c)); -1 when r_n is
  /// undefined at this n.
  std::int64_t degree_count = -1;
  /// min degree >= k+1 at rho_delta and < k+1 at the next smaller pair distance.
  bool min_degree_verified = false;

  friend bool operator==(const TrialResult&, const TrialResult&) = default;
};

struct EmpiricalCdf {
  std::vector<double> c_grid;
  std::vector<double> prob_delta;  ///< fraction of trials with c_delta <= c
  std::vector<double> prob_kappa;
  std::uint64_t trials = 0;
  double equal_fraction = 0.0;
  /// Mean over the trials whose formula radius is defined (counted below).
  double mean_degree_count = 0.0;
  std::uint64_t degree_count_trials = 0;

  friend bool operator==(const EmpiricalCdf&, const EmpiricalCdf&) = default;
};

struct BatchResult {
  TheoryParams params;
  std::uint64_t master_seed = 0;
  std::vector<TrialResult> trials;  ///< in index order
  EmpiricalCdf cdf;
};

enum class RadiusKind { Delta, Kappa };

/// c such that r_n(c) = rho for the parameters' (d, k, n, region):
/// ξ̂ = c_d n rho^d - log n - C_k log log n, then the ξ(c) map inverted
/// (the planar branches are inverted separately; d = 2, k = 0 gives
/// c = pi n rho^2 - log n). Strictly increasing in rho.
double radius_to_c(const TheoryParams& params, double rho);

/// 41 points, uniform on [-2, 6].
std::vector<double> default_c_grid();

/// Trial `index` under `master_seed`; only d, k, n, c and region are read from
/// params. Throws DegenerateInstance unless n >= k + 2.
TrialResult run_trial(const TheoryParams& params, std::uint64_t index, std::uint64_t master_seed,
                      connectivity::Strategy strategy = connectivity::Strategy::Auto);

/// M trials on `threads` workers (0 = hardware concurrency). Results are
/// merged by trial index, so output does not depend on the schedule.
BatchResult run_batch(const TheoryParams& params, std::uint64_t M, std::uint64_t master_seed,
                      const std::vector<double>& c_grid, unsigned threads = 0);

EmpiricalCdf empirical_cdf(const std::vector<TrialResult>& trials, const std::vector<double>& c_grid);

/// max over the c-grid of |empirical - exp(-e^{-c})|.
double ks_distance(const EmpiricalCdf& cdf, RadiusKind kind);

struct PalmResult {
  double mean_count = 0.0;  ///< mean degree_count(G(cloud, r), k) over M trials
  double count_std_error = 0.0;
  double psi_integral = 0.0;  ///< n ∫ ψ from integrate_psi
  double psi_std_error = 0.0;
  std::uint64_t trials = 0;

  /// |mean - psi| / sqrt(se_mean^2 + se_psi^2); 0 when both errors vanish
  /// and the sides agree exactly.
  [[nodiscard]] double z_score() const;
};

PalmResult palm_check(const TheoryParams& params, double r, std::uint64_t M,
                      std::uint64_t master_seed, const theory::PsiOptions& options = {},
                      unsigned threads = 0);

/// Runs f(i) for i in [0, count) on `threads` workers; the first exception is
/// rethrown after all workers stop.
void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& f);

unsigned resolve_threads(unsigned threads);

/// index,seed,rho_delta,rho_kappa,c_delta,c_kappa,equal
void write_trials_csv(std::ostream& os, const std::vector<TrialResult>& trials);

/// c,empirical_delta,empirical_kappa,gumbel_target
void write_summary_csv(std::ostream& os, const EmpiricalCdf& cdf);

/// Parameters, KS distances, equality fraction, mean degree count and the CDF.
nlohmann::json summary_json(const BatchResult& batch);

nlohmann::json to_json(const TrialResult& trial);

}  // namespace rggcrit::experiments
