#include "rggcrit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <locale>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "rggcrit/errors.hpp"
#include "rggcrit/geometry.hpp"
#include "rggcrit/numerics.hpp"
#include "rggcrit/random.hpp"
#include "rggcrit/rgg.hpp"

namespace rggcrit::experiments {

namespace {

std::size_t point_count(const TheoryParams& params) {
  if (!(params.n >= 1.0) || params.n != std::floor(params.n))
    throw DomainError("simulation needs an integral n >= 1");
  return static_cast<std::size_t>(params.n);
}

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// Seed for the ψ-integral Monte Carlo of a Palm check, disjoint from the
/// per-trial index stream in practice.
constexpr std::uint64_t kPsiStream = 0xFFFF'FFFF'FFFF'FFFFULL;

}  // namespace

double radius_to_c(const TheoryParams& params, double rho) {
  const int d = params.d, k = params.k;
  const double n = params.n;
  if (d < 2 || k < 0) throw DomainError("radius_to_c: need d >= 2, k >= 0");
  if (!(n > 1.0)) throw DomainError("radius_to_c: need n > 1");
  if (!(rho > 0.0)) throw DomainError("radius_to_c: rho must be positive");
  const double log_n = std::log(n);
  const double area = params.region.surface_area();
  const double scaled = theory::density_constant(d) * n * std::pow(rho, d);
  if (d == 2 && k == 0) return scaled - log_n;
  const double xi = scaled - log_n - theory::loglog_coefficient(d, k) * std::log(log_n);
  if (d > 2) return theory::exponent_constant(d) * xi - theory::boundary_log_constant(d, k, area);
  const double sp = std::sqrt(std::numbers::pi);
  if (k == 1) {
    // e^{-c} = e^{-ξ} + (l sqrt(pi)/4) e^{-ξ/2}
    return -log_sum_exp(-xi, std::log(area * sp / 4.0) - 0.5 * xi);
  }
  return 0.5 * xi - (std::log(area * sp) - (k + 1) * std::log(2.0) - numerics::log_factorial(k));
}

std::vector<double> default_c_grid() {
  std::vector<double> grid(41);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = -2.0 + 0.2 * static_cast<double>(i);
  return grid;
}

TrialResult run_trial(const TheoryParams& params, std::uint64_t index, std::uint64_t master_seed,
                      connectivity::Strategy strategy) {
  const std::size_t n = point_count(params);
  if (params.k < 0) throw DomainError("run_trial: k must be >= 0");
  if (n < static_cast<std::size_t>(params.k) + 2)
    throw DegenerateInstance("run_trial: need n >= k + 2");
  if (params.region.dimension() != params.d)
    throw DomainError("run_trial: region dimension differs from d");
  const auto K = static_cast<std::size_t>(params.k) + 1;

  TrialResult out;
  out.index = index;
  out.seed = derive_seed(master_seed, index);
  const auto cloud = rgg::generate(params.region, n, out.seed);
  out.rho_delta = rgg::min_degree_radius(cloud, K);
  out.rho_kappa = connectivity::connectivity_radius(cloud, static_cast<int>(K), strategy);
  out.equal = out.rho_delta == out.rho_kappa;
  out.c_delta = radius_to_c(params, out.rho_delta);
  out.c_kappa = radius_to_c(params, out.rho_kappa);

  const double prev = rgg::previous_pair_distance(cloud, out.rho_delta);
  const bool holds = rgg::build_graph(cloud, out.rho_delta).graph.min_degree() >= K;
  const bool fails_before = prev <= 0.0 || rgg::build_graph(cloud, prev).graph.min_degree() < K;
  out.min_degree_verified = holds && fails_before;

  try {
    const double r = theory::critical_radius(params).r_n;
    out.degree_count = static_cast<std::int64_t>(
        rgg::degree_count(rgg::build_graph(cloud, r).graph, static_cast<std::size_t>(params.k)));
  } catch (const std::domain_error&) {
    out.degree_count = -1;
  }
  return out;
}

unsigned resolve_threads(unsigned threads) {
  if (threads > 0) return threads;
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(std::uint64_t)>& f) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        if (stop.load()) return;
        const std::uint64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          f(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          stop = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

EmpiricalCdf empirical_cdf(const std::vector<TrialResult>& trials, const std::vector<double>& c_grid) {
  if (!std::is_sorted(c_grid.begin(), c_grid.end()))
    throw DomainError("empirical_cdf: c-grid must be ascending");
  EmpiricalCdf cdf;
  cdf.c_grid = c_grid;
  cdf.trials = trials.size();
  std::vector<double> cd, ck;
  std::uint64_t equal = 0, counted = 0;
  double degree_sum = 0.0;
  for (const auto& t : trials) {
    cd.push_back(t.c_delta);
    ck.push_back(t.c_kappa);
    equal += t.equal ? 1 : 0;
    if (t.degree_count >= 0) {
      ++counted;
      degree_sum += static_cast<double>(t.degree_count);
    }
  }
  std::sort(cd.begin(), cd.end());
  std::sort(ck.begin(), ck.end());
  const double m = static_cast<double>(trials.size());
  for (const double c : c_grid) {
    const auto below = [&](const std::vector<double>& v) {
      return m > 0 ? static_cast<double>(std::upper_bound(v.begin(), v.end(), c) - v.begin()) / m : 0.0;
    };
    cdf.prob_delta.push_back(below(cd));
    cdf.prob_kappa.push_back(below(ck));
  }
  cdf.equal_fraction = m > 0 ? static_cast<double>(equal) / m : 0.0;
  cdf.degree_count_trials = counted;
  cdf.mean_degree_count = counted > 0 ? degree_sum / static_cast<double>(counted) : 0.0;
  return cdf;
}

BatchResult run_batch(const TheoryParams& params, std::uint64_t M, std::uint64_t master_seed,
                      const std::vector<double>& c_grid, unsigned threads) {
  if (M < 1) throw DomainError("run_batch: need M >= 1");
  BatchResult out;
  out.params = params;
  out.master_seed = master_seed;
  out.trials.resize(M);
  parallel_for(M, threads, [&](std::uint64_t i) { out.trials[i] = run_trial(params, i, master_seed); });
  out.cdf = empirical_cdf(out.trials, c_grid);
  return out;
}

double ks_distance(const EmpiricalCdf& cdf, RadiusKind kind) {
  const auto& p = kind == RadiusKind::Delta ? cdf.prob_delta : cdf.prob_kappa;
  double worst = 0.0;
  for (std::size_t i = 0; i < cdf.c_grid.size(); ++i)
    worst = std::max(worst, std::abs(p[i] - theory::gumbel_cdf(cdf.c_grid[i])));
  return worst;
}

double PalmResult::z_score() const {
  const double diff = std::abs(mean_count - psi_integral);
  const double se = std::hypot(count_std_error, psi_std_error);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

PalmResult palm_check(const TheoryParams& params, double r, std::uint64_t M,
                      std::uint64_t master_seed, const theory::PsiOptions& options,
                      unsigned threads) {
  params.validate();
  if (M < 1) throw DomainError("palm_check: need M >= 1");
  if (!(r > 0.0)) throw DomainError("palm_check: radius must be positive");
  const std::size_t n = point_count(params);
  std::vector<double> counts(M);
  parallel_for(M, threads, [&](std::uint64_t i) {
    const auto cloud = rgg::generate(params.region, n, derive_seed(master_seed, i));
    counts[i] = static_cast<double>(
        rgg::degree_count(rgg::build_graph(cloud, r).graph, static_cast<std::size_t>(params.k)));
  });
  PalmResult out;
  out.trials = M;
  double sum = 0.0;
  for (const double c : counts) sum += c;
  out.mean_count = sum / static_cast<double>(M);
  if (M > 1) {
    double ss = 0.0;
    for (const double c : counts) ss += (c - out.mean_count) * (c - out.mean_count);
    out.count_std_error = std::sqrt(ss / static_cast<double>(M - 1) / static_cast<double>(M));
  }
  Rng rng(derive_seed(master_seed, kPsiStream));
  const auto integral = theory::integrate_psi(params, r, options, rng);
  out.psi_integral = integral.value;
  out.psi_std_error = integral.std_error;
  return out;
}

void write_trials_csv(std::ostream& os, const std::vector<TrialResult>& trials) {
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << "index,seed,rho_delta,rho_kappa,c_delta,c_kappa,equal\n";
  for (const auto& t : trials)
    os << t.index << ',' << t.seed << ',' << t.rho_delta << ',' << t.rho_kappa << ',' << t.c_delta
       << ',' << t.c_kappa << ',' << (t.equal ? 1 : 0) << '\n';
}

void write_summary_csv(std::ostream& os, const EmpiricalCdf& cdf) {
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << "c,empirical_delta,empirical_kappa,gumbel_target\n";
  for (std::size_t i = 0; i < cdf.c_grid.size(); ++i)
    os << cdf.c_grid[i] << ',' << cdf.prob_delta[i] << ',' << cdf.prob_kappa[i] << ','
       << theory::gumbel_cdf(cdf.c_grid[i]) << '\n';
}

nlohmann::json to_json(const TrialResult& t) {
  return {{"index", t.index},         {"seed", t.seed},
          {"rho_delta", t.rho_delta}, {"rho_kappa", t.rho_kappa},
          {"c_delta", t.c_delta},     {"c_kappa", t.c_kappa},
          {"equal", t.equal},         {"degree_count", t.degree_count},
          {"min_degree_verified", t.min_degree_verified}};
}

nlohmann::json summary_json(const BatchResult& batch) {
  const auto& cdf = batch.cdf;
  bool verified = true;
  for (const auto& t : batch.trials) verified = verified && t.min_degree_verified;
  nlohmann::json region;
  geometry::to_json(region, batch.params.region);
  nlohmann::json j = {
      {"d", batch.params.d},
      {"k", batch.params.k},
      {"n", batch.params.n},
      {"c0", batch.params.c},
      {"region", region},
      {"master_seed", batch.master_seed},
      {"trials", cdf.trials},
      {"ks_delta", ks_distance(cdf, RadiusKind::Delta)},
      {"ks_kappa", ks_distance(cdf, RadiusKind::Kappa)},
      {"equal_fraction", cdf.equal_fraction},
      {"mean_degree_count", cdf.mean_degree_count},
      {"degree_count_trials", cdf.degree_count_trials},
      {"min_degree_verified", verified},
      {"c_grid", cdf.c_grid},
      {"empirical_delta", cdf.prob_delta},
      {"empirical_kappa", cdf.prob_kappa},
  };
  return j;
}

}  // namespace rggcrit::experiments
