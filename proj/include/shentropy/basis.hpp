#pragma once

// Complex spherical harmonics
//
//   Y_{l,m}(theta, phi) = K_{l,m} P_{l,m}(cos theta) e^{i m phi},
//   K_{l,m} = (-1)^m sqrt((2l+1)(l-|m|)! / (4 pi (l+|m|)!)),
//
// for m >= 0; negative orders follow Y_{l,-m} = (-1)^m conj(Y_{l,m}).
// The (-1)^m of K and the one inside P_{l,m} cancel, so for m >= 0 the
// harmonics carry no net Condon-Shortley sign.
//
// Recursive route (m >= 0, l >= 2):
//
//   Y_{l,m} = a_{l-1} alpha_{l,m} cos(theta) Y_{l-1,m}
//           + e^{i phi} m a_{l-1} beta_{l,m} sin(theta) Y_{l-1,m-1}
//           - b_{l-1} gamma_{l,m} Y_{l-2,m}
//
// with alpha, beta, gamma from recurrence_coefficients(). This is the
// Legendre ladder multiplied through by K ratios; the middle term keeps its
// plus sign because K_{l,m}/K_{l-1,m-1} = -beta_{l,m} absorbs the minus of the
// Legendre ladder. gamma carries (l-m)(l-m-1), not (l-1)(l-m-1).

#include <algorithm>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "counters.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "legendre.hpp"

namespace shent {

using Complex = std::complex<double>;

enum class BasisStrategy { Direct, Recursive };

inline std::string to_string(BasisStrategy s) { return s == BasisStrategy::Direct ? "direct" : "recursive"; }

inline BasisStrategy basis_strategy_from_string(const std::string& s) {
  if (s == "direct") return BasisStrategy::Direct;
  if (s == "recursive") return BasisStrategy::Recursive;
  throw DomainError("unknown basis strategy '" + s + "' (expected direct|recursive)");
}

struct SphericalPoint {
  double theta = 0.0;
  double phi = 0.0;

  SphericalPoint() = default;
  SphericalPoint(double colatitude, double longitude) : theta(colatitude), phi(longitude) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
      throw DomainError("SphericalPoint: colatitude outside [0, pi]");
    if (!std::isfinite(phi)) throw DomainError("SphericalPoint: longitude not finite");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
  }
};

inline double normalization_constant(int l, int m, OpCounter* counter = nullptr) {
  const int am = m < 0 ? -m : m;
  if (l < 0 || am > l)
    throw DomainError("normalization_constant: need |m| <= l, got (" + std::to_string(l) + ", " +
                      std::to_string(m) + ")");
  // (l-|m|)! / (l+|m|)! as a running product
  double ratio = 1.0;
  for (int k = l - am + 1; k <= l + am; ++k) ratio /= static_cast<double>(k);
  const double k_abs = std::sqrt(static_cast<double>(2 * l + 1) * ratio / (4.0 * std::numbers::pi));
  if (counter) counter->add(static_cast<std::uint64_t>(2 * am + 4));
  return (am & 1) ? -k_abs : k_abs;
}

inline Complex sh_direct(int l, int m, const SphericalPoint& point, OpCounter* counter = nullptr) {
  const int am = m < 0 ? -m : m;
  if (l < 0 || am > l)
    throw DomainError("sh_direct: need |m| <= l, got (" + std::to_string(l) + ", " + std::to_string(m) + ")");
  const double k = normalization_constant(l, am, counter);
  const double p = assoc_legendre_direct(l, am, std::cos(point.theta), counter);
  const Complex y = k * p * std::polar(1.0, am * point.phi);
  if (counter) {
    counter->add(8);
    ++counter->entries;
  }
  if (m >= 0) return y;
  return (am & 1) ? -std::conj(y) : std::conj(y);
}

// Per-(l, m >= 0) multipliers of the degree ladder, precomputed once per band
// limit: c_prev = a_{l-1} alpha, c_diag = m a_{l-1} beta, c_prev2 = b_{l-1} gamma.
class LadderTable {
 public:
  explicit LadderTable(int band_limit) : band_limit_(band_limit) {
    if (band_limit < 0) throw DomainError("LadderTable: negative band limit");
    const std::size_t n = tri(band_limit + 1);
    c_prev_.assign(n, 0.0);
    c_diag_.assign(n, 0.0);
    c_prev2_.assign(n, 0.0);
    const BiFilter f(std::max(band_limit, 1));
    for (int l = 2; l <= band_limit; ++l) {
      for (int m = 0; m <= l; ++m) {
        const auto rc = recurrence_coefficients(l, m);
        const std::size_t i = tri(l) + static_cast<std::size_t>(m);
        c_prev_[i] = f.a(l - 1) * rc.alpha;
        c_diag_[i] = m * f.a(l - 1) * rc.beta;
        c_prev2_[i] = f.b(l - 1) * rc.gamma;
      }
    }
  }

  int band_limit() const noexcept { return band_limit_; }

  // Fills out[lm_index(l, m)] for all |m| <= l <= band_limit at one point.
  void evaluate(const SphericalPoint& point, Complex* out, OpCounter* counter = nullptr) const {
    const double ct = std::cos(point.theta);
    const double st = std::sin(point.theta);
    const Complex eip = std::polar(1.0, point.phi);

    out[lm_index(0, 0)] = sh_direct(0, 0, point);
    if (band_limit_ >= 1) {
      out[lm_index(1, 0)] = sh_direct(1, 0, point);
      out[lm_index(1, 1)] = sh_direct(1, 1, point);
    }
    for (int l = 2; l <= band_limit_; ++l) {
      const std::size_t base = tri(l);
      for (int m = 0; m <= l; ++m) {
        const std::size_t i = base + static_cast<std::size_t>(m);
        Complex v = (m >= 1) ? (c_diag_[i] * st) * (eip * out[lm_index(l - 1, m - 1)]) : Complex{};
        if (m <= l - 1) v += (c_prev_[i] * ct) * out[lm_index(l - 1, m)];
        if (m <= l - 2) v -= c_prev2_[i] * out[lm_index(l - 2, m)];
        out[lm_index(l, m)] = v;
      }
    }
    for (int l = 1; l <= band_limit_; ++l)
      for (int m = 1; m <= l; ++m) {
        const Complex c = std::conj(out[lm_index(l, m)]);
        out[lm_index(l, -m)] = (m & 1) ? -c : c;
      }
    if (counter) {
      const auto n = lm_count(band_limit_);
      counter->add(16 * n + 40);
      counter->entries += n;
    }
  }

 private:
  static constexpr std::size_t tri(int l) noexcept { return static_cast<std::size_t>(l * (l + 1) / 2); }

  int band_limit_;
  std::vector<double> c_prev_;
  std::vector<double> c_diag_;
  std::vector<double> c_prev2_;
};

struct BasisEvaluation {
  int band_limit = 0;
  BasisStrategy strategy = BasisStrategy::Recursive;
  std::vector<Complex> values;  // canonical l-major order

  Complex operator()(int l, int m) const { return values.at(lm_index(l, m)); }
};

inline BasisEvaluation sh_recursive_ladder(int band_limit, const SphericalPoint& point, OpCounter* counter = nullptr) {
  const LadderTable table(band_limit);
  BasisEvaluation ev{band_limit, BasisStrategy::Recursive, std::vector<Complex>(lm_count(band_limit))};
  table.evaluate(point, ev.values.data(), counter);
  return ev;
}

inline BasisEvaluation sh_direct_all(int band_limit, const SphericalPoint& point, OpCounter* counter = nullptr) {
  if (band_limit < 0) throw DomainError("sh_direct_all: negative band limit");
  BasisEvaluation ev{band_limit, BasisStrategy::Direct, std::vector<Complex>(lm_count(band_limit))};
  for (int l = 0; l <= band_limit; ++l)
    for (int m = -l; m <= l; ++m) ev.values[lm_index(l, m)] = sh_direct(l, m, point, counter);
  return ev;
}

// Rows = grid nodes, columns = (l, m) in canonical order.
struct BasisMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> data;

  Complex operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const Complex* row(std::size_t r) const { return data.data() + r * cols; }
};

struct BasisMatrixOptions {
  unsigned workers = 1;
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
};

inline BasisMatrix basis_matrix(int band_limit, const SphereGrid& grid, BasisStrategy strategy,
                                const BasisMatrixOptions& options = {}, OpCounter* counter = nullptr) {
  if (band_limit < 0) throw DomainError("basis_matrix: negative band limit");
  if (grid.node_count() == 0) throw DomainError("basis_matrix: empty grid");
  BasisMatrix M;
  M.rows = grid.node_count();
  M.cols = lm_count(band_limit);
  const double bytes = static_cast<double>(M.rows) * static_cast<double>(M.cols) * sizeof(Complex);
  if (bytes > static_cast<double>(options.memory_budget_bytes))
    throw ResourceError("basis_matrix: " + std::to_string(M.rows) + " x " + std::to_string(M.cols) +
                        " exceeds memory budget");
  M.data.resize(M.rows * M.cols);

  const LadderTable table(strategy == BasisStrategy::Recursive ? band_limit : 0);
  auto fill_rows = [&](std::size_t begin, std::size_t end, OpCounter* ctr) {
    for (std::size_t r = begin; r < end; ++r) {
      const SphericalPoint pt(grid.theta(r), grid.phi(r));
      Complex* out = M.data.data() + r * M.cols;
      if (strategy == BasisStrategy::Recursive) {
        table.evaluate(pt, out, ctr);
      } else {
        // every entry from the closed formula, independently
        for (int l = 0; l <= band_limit; ++l)
          for (int m = -l; m <= l; ++m) out[lm_index(l, m)] = sh_direct(l, m, pt, ctr);
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(M.rows)));
  if (workers == 1) {
    fill_rows(0, M.rows, counter);
  } else {
    std::vector<OpCounter> counters(workers);
    {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (M.rows + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk, e = std::min(M.rows, b + chunk);
        if (b >= e) break;
        pool.emplace_back(fill_rows, b, e, counter ? &counters[w] : nullptr);
      }
    }
    if (counter)
      for (const auto& c : counters) {
        counter->flops += c.flops;
        counter->entries += c.entries;
      }
  }
  return M;
}

}  // namespace shent
