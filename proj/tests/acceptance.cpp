// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rggcrit/connectivity.hpp"
#include "rggcrit/experiments.hpp"
#include "rggcrit/geometry.hpp"
#include "rggcrit/rgg.hpp"
#include "rggcrit/theory.hpp"

using namespace rggcrit;
using geometry::Region;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

int failures = 0;

void criterion(const char* id, const char* title, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0) v.require(secs <= budget_s, "runtime " + fmt(secs, 3) + " s <= " + fmt(budget_s) + " s");
  if (!v.pass) ++failures;
  std::printf("[%s] %s %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", id, title, secs, v.detail.str().c_str());
  std::fflush(stdout);
}

theory::TheoryParams cube_params(int d, int k, double c, double n) { return {d, k, c, n, Region::cube(d)}; }

// Batches shared by criteria 4(c), 5 and 6.
struct Batches {
  std::vector<experiments::BatchResult> large;  // n = 2000, k = 0, 1, 2
  std::vector<experiments::BatchResult> small;  // n = 200
};

Batches& batches() {
  static Batches b = [] {
    Batches out;
    for (int k = 0; k <= 2; ++k) {
      out.large.push_back(experiments::run_batch(cube_params(3, k, 0.0, 2000), 500, 20240601, experiments::default_c_grid()));
      out.small.push_back(experiments::run_batch(cube_params(3, k, 0.0, 200), 500, 20240601, experiments::default_c_grid()));
    }
    return out;
  }();
  return b;
}

}  // namespace

int main() {
  criterion("C1", "formula identities", 1.0, [](Verdict& v) {
    double worst = 0.0;
    for (int d = 3; d <= 6; ++d)
      for (int k = 0; k <= 4; ++k)
        for (double c : {-1.0, 0.0, 1.0, 2.0})
          for (double area : {6.0, 4.836}) {
            const double xi = theory::solve_xi(d, k, c, area);
            worst = std::max(worst, std::abs(theory::xi_equation_lhs(d, k, xi, area) / std::exp(-c) - 1.0));
          }
    v.require(worst <= 1e-12, "max back-substitution residual " + fmt(worst) + " <= 1e-12");
    double worst3 = 0.0;
    for (int k = 0; k <= 4; ++k)
      for (double c : {-1.0, 0.0, 1.0, 2.0})
        for (double area : {6.0, 4.836}) {
          const double xi = theory::solve_xi(3, k, c, area);
          const double lhs = area * std::pow(2.0 / 3.0, k) * std::pow(std::numbers::pi, -1.0 / 3.0) *
                             std::exp(-2.0 * xi / 3.0) / std::tgamma(k + 1.0);
          worst3 = std::max(worst3, std::abs(lhs / std::exp(-c) - 1.0));
        }
    v.require(worst3 <= 1e-12, "d=3 hand equation residual " + fmt(worst3) + " <= 1e-12");
  });

  criterion("C2", "boundary-layer integral convergence", 10.0, [](Verdict& v) {
    for (int d = 3; d <= 5; ++d)
      for (int k = 0; k <= 2; ++k) {
        const double rhs = theory::lemma1_rhs(d, k, 0.0);
        std::vector<double> dev;
        double last = 0.0;
        for (double n : {1e4, 1e6, 1e8, 1e10}) {
          last = theory::lemma1_lhs(d, k, n, 0.0) / rhs;
          dev.push_back(std::abs(last - 1.0));
        }
        bool decreasing = true;
        for (std::size_t i = 1; i < dev.size(); ++i) decreasing = decreasing && dev[i] < dev[i - 1];
        const std::string tag = "d=" + std::to_string(d) + ",k=" + std::to_string(k);
        v.require(last >= 0.85 && last <= 1.15, tag + " ratio@1e10=" + fmt(last) + " in [0.85,1.15]");
        v.require(decreasing, tag + " |ratio-1| decreasing");
      }
  });

  criterion("C3", "psi-integral limit and boundary-layer dominance", 120.0, [](Verdict& v) {
    const theory::PsiOptions options{1'000'000, 12, 1.0};
    const double target = std::exp(-1.0);
    for (int k = 0; k <= 1; ++k) {
      Rng rng(derive_seed(17, static_cast<std::uint64_t>(k)));
      auto at = [&](double n) {
        const auto p = cube_params(3, k, 1.0, n);
        return theory::integrate_psi(p, theory::critical_radius(p).r_n, options, rng);
      };
      const auto small = at(1e4), large = at(1e8);
      const double e4 = std::abs(small.value - target), e8 = std::abs(large.value - target);
      const std::string tag = "k=" + std::to_string(k);
      v.require(e8 < e4, tag + " |I-e^-1| " + fmt(e8) + " @1e8 < " + fmt(e4) + " @1e4");
      const auto mid = at(1e6);
      const double share = mid.parts.omega11.value / mid.value;
      v.require(share >= 0.8, tag + " boundary-layer share @1e6 = " + fmt(share) + " >= 0.8");
    }
  });

  {
    // Simulation batches shared by criteria 4(c), 5 and 6, timed on their own.
    const auto t0 = std::chrono::steady_clock::now();
    (void)batches();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[INFO] batches d=3 cube n in {200, 2000}, k in {0,1,2}, M=500: %.1f s on %u thread(s)\n", secs,
                experiments::resolve_threads(0));
    std::fflush(stdout);
  }

  criterion("C4", "exact oracles", 120.0, [](Verdict& v) {
    std::mt19937_64 gen(4);
    int mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
      const int n = 2 + static_cast<int>(gen() % 11);
      const auto a = oracle::random_graph(n, 0.2 + 0.7 * (gen() % 1000) / 1000.0, gen);
      std::vector<std::pair<rgg::Vertex, rgg::Vertex>> e;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (a[i][j]) e.emplace_back(i, j);
      if (connectivity::vertex_connectivity(rgg::Graph(n, e)).kappa != oracle::connectivity(a)) ++mismatches;
    }
    v.require(mismatches == 0, "(a) vertex connectivity mismatches " + std::to_string(mismatches) + "/1000");

    mismatches = 0;
    for (int t = 0; t < 200; ++t) {
      const int d = 2 + t % 2;
      const std::size_t n = 10 + gen() % 51;
      const int K = 1 + t % 3;
      const auto cloud = rgg::generate(Region::cube(d), n, gen());
      if (connectivity::connectivity_radius(cloud, K) != oracle::linear_scan_radius(cloud.coords(), d, K)) ++mismatches;
    }
    v.require(mismatches == 0, "(b) connectivity radius mismatches " + std::to_string(mismatches) + "/200");

    std::size_t trials = 0, unverified = 0;
    for (const auto* group : {&batches().large, &batches().small})
      for (const auto& b : *group)
        for (const auto& tr : b.trials) {
          ++trials;
          if (!tr.min_degree_verified) ++unverified;
        }
    v.require(unverified == 0, "(c) min-degree re-verification failures " + std::to_string(unverified) + "/" +
                                   std::to_string(trials));

    mismatches = 0;
    for (int t = 0; t < 100; ++t) {
      const Region reg = t % 3 == 0 ? Region::cube(3) : t % 3 == 1 ? Region::ball(3) : Region::cube(2);
      const auto cloud = rgg::generate(reg, 50 + gen() % 400, gen());
      const double r = 0.03 + 0.3 * (gen() % 1000) / 1000.0;
      auto got = rgg::build_graph(cloud, r).graph.edges();
      std::sort(got.begin(), got.end());
      const auto want = oracle::brute_edges(cloud.coords(), reg.dimension(), r);
      if (got.size() != want.size() || !std::equal(got.begin(), got.end(), want.begin())) ++mismatches;
    }
    v.require(mismatches == 0, "(d) grid adjacency mismatches " + std::to_string(mismatches) + "/100");
  });

  criterion("C5", "Gumbel fit d=3 k=0 n=2000 M=500", 0.0, [](Verdict& v) {
    const auto& cdf = batches().large[0].cdf;
    const double kk = experiments::ks_distance(cdf, experiments::RadiusKind::Kappa);
    const double kd = experiments::ks_distance(cdf, experiments::RadiusKind::Delta);
    v.require(kk <= 0.15, "KS(kappa) " + fmt(kk) + " <= 0.15");
    v.require(kd <= 0.15, "KS(delta) " + fmt(kd) + " <= 0.15");
  });

  criterion("C6", "min-degree/connectivity equality", 0.0, [](Verdict& v) {
    for (int k = 0; k <= 2; ++k) {
      const double big = batches().large[k].cdf.equal_fraction, small = batches().small[k].cdf.equal_fraction;
      const std::string tag = "k=" + std::to_string(k);
      v.require(big >= 0.9, tag + " fraction@2000 " + fmt(big) + " >= 0.9");
      v.require(big >= small, tag + " fraction@2000 >= fraction@200 (" + fmt(small) + ")");
    }
  });

  criterion("C7", "Palm identity d=3 n=1e4 M=200", 300.0, [](Verdict& v) {
    for (int k = 0; k <= 1; ++k) {
      const auto p = cube_params(3, k, 1.0, 1e4);
      const double r = theory::critical_radius(p).r_n;
      const auto res = experiments::palm_check(p, r, 200, 777 + static_cast<std::uint64_t>(k));
      const double z = res.z_score();
      v.require(z <= 3.0, "k=" + std::to_string(k) + " mean " + fmt(res.mean_count) + "±" + fmt(res.count_std_error, 2) +
                              " vs " + fmt(res.psi_integral) + "±" + fmt(res.psi_std_error, 2) + ", z=" + fmt(z, 3) +
                              " <= 3");
    }
  });

  criterion("C8", "geometry oracles", 120.0, [](Verdict& v) {
    Rng rng(8);
    const std::uint64_t m = 10'000'000;
    double worst = 0.0;
    std::string where;
    for (int d = 3; d <= 5; ++d) {
      auto check = [&](const char* what, const geometry::VolumeEstimate& e, double exact) {
        const double z = std::abs(e.value - exact) / e.std_error;
        if (z > worst) {
          worst = z;
          where = std::string(what) + " d=" + std::to_string(d);
        }
      };
      check("segment", geometry::segment_volume_mc(d, 1.0, 0.3, m, rng), geometry::segment_volume(d, 1.0, 0.3));
      check("lens", geometry::lens_volume_mc(d, 1.0, 0.7, m, rng), geometry::lens_volume(d, 1.0, 0.7));
      check("shadow", geometry::shadow_volume_mc(d, 1.0, 0.5, m, rng), geometry::shadow_volume_exact(d, 1.0, 0.5));
    }
    v.require(worst <= 3.0, "max |exact-MC|/sigma " + fmt(worst, 3) + " (" + where + ") <= 3");
    double ratio = 1e300;
    for (int d = 3; d <= 5; ++d)
      for (double L : {0.01, 0.05, 0.1})
        ratio = std::min(ratio, geometry::shadow_volume_exact(d, 1.0, L) / geometry::shadow_lower_bound(d, L));
    v.require(ratio >= 0.9, "min shadow/bound " + fmt(ratio) + " >= 0.9");
  });

  std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
