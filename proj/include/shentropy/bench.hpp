#pragma once

// Timing harness for basis_matrix: direct vs recursive strategies, with
// separate L-scaling (per-point cost) and N-scaling measurements.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "basis.hpp"
#include "grid.hpp"

namespace shent {

struct BenchConfig {
  int speed_n_theta = 91;  // 91 x 91 = 8281 points
  int speed_n_phi = 91;
  int speed_band_limit = 32;
  std::vector<int> fit_band_limits{8, 16, 32, 64};
  int fit_n_theta = 16;  // 256 points for the L sweep
  int fit_n_phi = 16;
  int n_scaling_band_limit = 16;
  int n_scaling_n_theta = 45;  // 45 x 45 and 45 x 90
  int repeats = 3;
  unsigned workers = 1;
};

struct BenchSample {
  std::string experiment;  // speed | l-scaling | n-scaling
  BasisStrategy strategy = BasisStrategy::Recursive;
  int band_limit = 0;
  std::size_t points = 0;
  double seconds = 0.0;
  double per_point_seconds = 0.0;
  std::uint64_t flops = 0;
};

struct BenchReport {
  std::vector<BenchSample> samples;
  double speedup = 0.0;  // direct / recursive at the speed configuration
  double exponent_recursive = 0.0;
  double exponent_direct = 0.0;
  double flop_exponent_recursive = 0.0;
  double flop_exponent_direct = 0.0;
  double n_ratio_recursive = 0.0;  // time(2N) / time(N)
  double n_ratio_direct = 0.0;
  double total_seconds = 0.0;
};

// Least-squares slope of log(y) against log(x).
inline double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline BenchSample time_basis(const std::string& experiment, int band_limit, const SphereGrid& grid,
                              BasisStrategy strategy, int repeats, unsigned workers) {
  BenchSample s;
  s.experiment = experiment;
  s.strategy = strategy;
  s.band_limit = band_limit;
  s.points = grid.node_count();
  s.seconds = INFINITY;
  BasisMatrixOptions opt;
  opt.workers = workers;
  for (int r = 0; r < std::max(1, repeats); ++r) {
    OpCounter counter;
    const auto t0 = std::chrono::steady_clock::now();
    const auto M = basis_matrix(band_limit, grid, strategy, opt, &counter);
    const auto t1 = std::chrono::steady_clock::now();
    // keep the result observable
    if (M.data.empty()) return s;
    s.seconds = std::min(s.seconds, std::chrono::duration<double>(t1 - t0).count());
    s.flops = counter.flops;
  }
  s.per_point_seconds = s.seconds / static_cast<double>(s.points);
  return s;
}

inline BenchReport run_bench(const BenchConfig& cfg = {}) {
  BenchReport rep;
  const auto t_start = std::chrono::steady_clock::now();

  const auto speed_grid = equiangular_grid(cfg.speed_n_theta, cfg.speed_n_phi);
  const auto rec = time_basis("speed", cfg.speed_band_limit, speed_grid, BasisStrategy::Recursive, cfg.repeats, cfg.workers);
  const auto dir = time_basis("speed", cfg.speed_band_limit, speed_grid, BasisStrategy::Direct, 1, cfg.workers);
  rep.samples.push_back(rec);
  rep.samples.push_back(dir);
  rep.speedup = dir.seconds / rec.seconds;

  const auto fit_grid = equiangular_grid(cfg.fit_n_theta, cfg.fit_n_phi);
  for (auto strategy : {BasisStrategy::Recursive, BasisStrategy::Direct}) {
    std::vector<double> Ls, costs, flops;
    for (int L : cfg.fit_band_limits) {
      const auto s = time_basis("l-scaling", L, fit_grid, strategy, cfg.repeats, cfg.workers);
      rep.samples.push_back(s);
      Ls.push_back(L);
      costs.push_back(s.per_point_seconds);
      flops.push_back(static_cast<double>(s.flops));
    }
    const double slope = fit_loglog_slope(Ls, costs);
    const double flop_slope = fit_loglog_slope(Ls, flops);
    if (strategy == BasisStrategy::Recursive) {
      rep.exponent_recursive = slope;
      rep.flop_exponent_recursive = flop_slope;
    } else {
      rep.exponent_direct = slope;
      rep.flop_exponent_direct = flop_slope;
    }
  }

  const auto g1 = equiangular_grid(cfg.n_scaling_n_theta, cfg.n_scaling_n_theta);
  const auto g2 = equiangular_grid(cfg.n_scaling_n_theta, 2 * cfg.n_scaling_n_theta);
  for (auto strategy : {BasisStrategy::Recursive, BasisStrategy::Direct}) {
    const auto a = time_basis("n-scaling", cfg.n_scaling_band_limit, g1, strategy, cfg.repeats, cfg.workers);
    const auto b = time_basis("n-scaling", cfg.n_scaling_band_limit, g2, strategy, cfg.repeats, cfg.workers);
    rep.samples.push_back(a);
    rep.samples.push_back(b);
    (strategy == BasisStrategy::Recursive ? rep.n_ratio_recursive : rep.n_ratio_direct) = b.seconds / a.seconds;
  }

  rep.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

}  // namespace shent
