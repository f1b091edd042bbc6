// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "shentropy/basis.hpp"
#include "shentropy/bench.hpp"
#include "shentropy/entropy.hpp"
#include "shentropy/grid.hpp"
#include "shentropy/shapes.hpp"
#include "shentropy/transform.hpp"

using namespace shent;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Max |<Y_a, Y_b> - delta_ab| over the full basis, by quadrature.
double gram_error(const BasisMatrix& Y, const SphereGrid& grid) {
  double worst = 0.0;
  std::vector<Complex> acc(Y.cols);
  for (std::size_t a = 0; a < Y.cols; ++a) {
    std::fill(acc.begin(), acc.end(), Complex{});
    for (std::size_t n = 0; n < Y.rows; ++n) {
      const Complex* row = Y.row(n);
      const Complex wa = grid.weight(n) * std::conj(row[a]);
      for (std::size_t b = a; b < Y.cols; ++b) acc[b] += wa * row[b];
    }
    for (std::size_t b = a; b < Y.cols; ++b) worst = std::max(worst, std::abs(acc[b] - (a == b ? 1.0 : 0.0)));
  }
  return worst;
}

Outcome orthonormality() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = gauss_grid(16);
  const double rec = gram_error(basis_matrix(16, grid, BasisStrategy::Recursive), grid);
  const double dir = gram_error(basis_matrix(16, grid, BasisStrategy::Direct), grid);
  const double t = seconds_since(t0);
  return {rec < 1e-8 && dir < 1e-8 && t < 60.0,
          fmt("max |<Y,Y'> - delta| = %.2e (recursive), %.2e (direct) on %zu nodes, %.1f s", rec, dir,
              grid.node_count(), t)};
}

Outcome recursive_matches_direct() {
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double theta = std::acos(portable_symmetric_uniform(rng));
    const double phi = std::numbers::pi * (portable_symmetric_uniform(rng) + 1.0);
    const SphericalPoint p(theta, phi);
    const auto rec = sh_recursive_ladder(30, p);
    for (int l = 0; l <= 30; ++l)
      for (int m = -l; m <= l; ++m) worst = std::max(worst, std::abs(rec(l, m) - sh_direct(l, m, p)));
  }
  return {worst < 1e-9, fmt("max |Y_rec - Y_direct| = %.2e over 200 points, L = 30", worst)};
}

Outcome round_trip() {
  const auto pyr = random_real_pyramid(8, 8, 7);
  const auto grid = gauss_grid(8);
  const auto field = synthesize(pyr, grid, 8);
  const auto back = analyze(field, 8);
  double diff = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < pyr.coeffs().size(); ++k) {
    diff += std::norm(back.coeffs()[k] - pyr.coeffs()[k]);
    norm += std::norm(pyr.coeffs()[k]);
  }
  const double rel = std::sqrt(diff / norm);
  const double f2 = std::pow(field_norm(field), 2);
  const double parseval = std::abs(f2 - norm) / norm;
  return {rel < 1e-10 && parseval < 1e-8,
          fmt("coefficient relative error %.2e, Parseval relative gap %.2e", rel, parseval)};
}

Outcome table_arithmetic() {
  const bool counts = lm_count(4) == 25 && lm_count(7) == 64 && lm_count(17) == 324;
  const auto n51 = equiangular_grid(51, 51).node_count();
  const auto n61 = equiangular_grid(61, 61).node_count();
  const auto n91 = equiangular_grid(91, 91).node_count();
  const bool nodes = n51 == 2601 && n61 == 3721 && n91 == 8281;
  return {counts && nodes, fmt("(J+1)^2 = %zu, %zu, %zu; nodes = %zu, %zu, %zu", lm_count(4), lm_count(7),
                               lm_count(17), n51, n61, n91)};
}

CoefficientPyramid levels_pyramid(int L, const std::vector<std::pair<int, double>>& level_amplitudes) {
  CoefficientPyramid pyr(L, 1);
  for (auto [l, a] : level_amplitudes) pyr(l, 0) = a;
  return pyr;
}

Outcome entropy_properties() {
  bool ok = true;
  double single = 0.0;
  const auto one = levels_pyramid(6, {{3, 2.5}});
  for (int J = 3; J <= 6; ++J) single = std::max(single, std::abs(she(one, J)));
  ok = ok && single == 0.0;

  // equal energies at two levels (|S|^2 = 1 each)
  const auto two = levels_pyramid(6, {{1, 1.0}, {4, -1.0}});
  const double two_err = std::abs(she(two, 6) - std::log(2.0));
  ok = ok && two_err < 1e-12;

  double bound_excess = -INFINITY, scale_err = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto pyr = random_real_pyramid(12, static_cast<int>(seed % 12) + 1, seed);
    const auto curve = she_curve(pyr);
    for (int J = 0; J <= 12; ++J) {
      if (curve.degenerate[static_cast<std::size_t>(J)]) continue;
      bound_excess = std::max(bound_excess, curve.values[static_cast<std::size_t>(J)] - std::log(J + 1.0));
      for (double c : {1e-3, 3.7, 1e5})
        scale_err = std::max(scale_err, std::abs(she(pyr.scaled(c), J) - she(pyr, J)));
    }
  }
  ok = ok && bound_excess <= 0.0 && scale_err < 1e-12;
  return {ok, fmt("single level %.1e, |two-level - log 2| = %.1e, max SHE(J) - log(J+1) = %.2e, "
                  "scale drift %.1e",
                  single, two_err, bound_excess, scale_err)};
}

Outcome order_selection() {
  int hits = 0;
  std::string misses;
  for (int i = 0; i < 50; ++i) {
    const int top = 3 + i % 18;
    ShapeSpec spec;
    spec.kind = ShapeKind::RandomBandlimited;
    spec.max_degree = top;
    spec.seed = 1000 + static_cast<std::uint64_t>(i);
    spec.grid = GridSpec::gauss(top + 4);
    const auto field = generate(spec);
    const auto rep = select_order(analyze(field, top + 4));
    if (rep.selected_order == top)
      ++hits;
    else
      misses += fmt(" L*=%d->%d", top, rep.selected_order);
  }

  std::string flow;
  bool flow_ok = true;
  for (auto [first, expected] : {std::pair{2, 4}, std::pair{5, 7}, std::pair{15, 17}}) {
    ShapeSpec spec;
    spec.kind = ShapeKind::RadialHarmonicBump;
    spec.amplitudes = {{first, 1, 0.2}};
    spec.grid = GridSpec::gauss(first + 4);
    SelectionOptions sel;
    sel.criterion = SelectionCriterion::Flowchart;
    const int got = select_order(analyze(generate(spec), first + 4), sel).selected_order;
    flow_ok = flow_ok && got == expected;
    flow += fmt(" %d->%d", first, got);
  }
  return {hits == 50 && flow_ok,
          fmt("stabilization %d/50 exact%s; flowchart first-nonzero->order%s", hits, misses.c_str(), flow.c_str())};
}

Outcome performance() {
  const auto rep = run_bench();
  const bool ok = rep.speedup >= 2.0 && rep.exponent_recursive <= 2.3 && rep.exponent_direct >= 2.8 &&
                  rep.total_seconds < 300.0;
  return {ok, fmt("speedup %.1fx at L=32 N=8281; L-exponent recursive %.2f, direct %.2f; "
                  "doubled-N time ratio %.2f / %.2f; %.0f s",
                  rep.speedup, rep.exponent_recursive, rep.exponent_direct, rep.n_ratio_recursive,
                  rep.n_ratio_direct, rep.total_seconds)};
}

Outcome truncation_monotonicity() {
  std::vector<ShapeSpec> shapes;
  for (int channels : {1, 3}) {
    ShapeSpec sphere;
    sphere.channels = channels;
    shapes.push_back(sphere);
    ShapeSpec bump;
    bump.kind = ShapeKind::RadialHarmonicBump;
    bump.amplitudes = {{2, 1, 0.2}, {3, -2, 0.1}, {5, 0, 0.05}};
    bump.channels = channels;
    shapes.push_back(bump);
    ShapeSpec random;
    random.kind = ShapeKind::RandomBandlimited;
    random.max_degree = 6;
    random.channels = channels;
    shapes.push_back(random);
  }
  bool ok = true;
  std::string detail;
  for (auto& spec : shapes) {
    const int degree = construction_degree(spec);
    spec.grid = GridSpec::gauss(degree + 3);
    const auto field = generate(spec);
    double previous = INFINITY, at_degree = NAN;
    bool monotone = true;
    for (int J = 0; J <= degree + 3; ++J) {
      const double r = residual_norm(field, reconstruct(field, J));
      // rounding-level jitter once the residual has reached machine precision
      if (r > previous && r - previous > 1e-13) monotone = false;
      previous = r;
      if (J == degree) at_degree = r;
    }
    const bool good = monotone && at_degree < 1e-9;
    ok = ok && good;
    detail += fmt(" %s/%dch(deg %d): %.1e%s;", to_string(spec.kind).c_str(), spec.channels, degree, at_degree,
                  monotone ? "" : " NOT monotone");
  }
  detail.pop_back();
  return {ok, "residual at construction degree:" + detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"orthonormality", orthonormality},
      {"recursive-equals-direct", recursive_matches_direct},
      {"round-trip", round_trip},
      {"coefficient-and-grid-counts", table_arithmetic},
      {"entropy-properties", entropy_properties},
      {"order-selection", order_selection},
      {"performance", performance},
      {"truncation-monotonicity", truncation_monotonicity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
