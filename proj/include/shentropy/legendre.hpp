#pragma once

// Legendre polynomials P_n and associated Legendre functions P_{l,m}.
//
// Convention: P_{l,m}(x) = (-1)^m (1 - x^2)^{m/2} d^m P_l / dx^m, i.e. the
// Condon-Shortley phase lives inside P_{l,m}. Only m >= 0 is accepted here;
// negative orders are resolved by the spherical-harmonic layer.
//
// Two evaluation routes are provided:
//   * direct: explicit coefficients of P_l, differentiated symbolically and
//     evaluated in extended precision. O(l m) per value; used as the
//     reference oracle (trusted for l <= 30).
//   * recursive: the degree ladder obtained by differentiating the
//     three-term recurrence m times (Leibniz rule) and re-weighting:
//
//       P_{l,m} = a_{l-1} x P_{l-1,m} - m a_{l-1} sqrt(1-x^2) P_{l-1,m-1}
//                 - b_{l-1} P_{l-2,m}
//
//     The sqrt(1-x^2) factor and the minus sign on the middle term come
//     from w_m / w_{m-1} and (-1)^m / (-1)^{m-1}. At m = l the first and
//     last terms vanish and the ladder reduces to the diagonal rule
//     P_{l,l} = -(2l-1) sqrt(1-x^2) P_{l-1,l-1}.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "counters.hpp"
#include "errors.hpp"

namespace shent {

#if defined(__SIZEOF_FLOAT128__) && !defined(SHENT_NO_FLOAT128)
using ExtendedReal = __float128;
#else
using ExtendedReal = long double;
#endif

// Largest degree accepted by the direct route (coefficient buffer size and
// double range of the unnormalized P_{l,m}).
inline constexpr int kMaxDirectDegree = 120;

struct DegreeOrder {
  int l = 0;
  int m = 0;

  constexpr bool valid() const noexcept { return l >= 0 && (m < 0 ? -m : m) <= l; }
};

// Canonical l-major index, m ascending from -l to l.
constexpr std::size_t lm_index(int l, int m) noexcept {
  return static_cast<std::size_t>(l * l + l + m);
}

constexpr std::size_t lm_count(int band_limit) noexcept {
  return static_cast<std::size_t>((band_limit + 1) * (band_limit + 1));
}

constexpr DegreeOrder lm_from_index(std::size_t idx) noexcept {
  int l = 0;
  while (static_cast<std::size_t>((l + 1) * (l + 1)) <= idx) ++l;
  return {l, static_cast<int>(idx) - l * l - l};
}

namespace detail {

inline void check_x(double x) {
  if (!(std::abs(x) <= 1.0)) throw DomainError("legendre: |x| must be <= 1, got " + std::to_string(x));
}

inline void check_lm(int l, int m) {
  if (l < 0 || m < 0 || m > l)
    throw DomainError("legendre: need 0 <= m <= l, got (" + std::to_string(l) + ", " + std::to_string(m) + ")");
}

}  // namespace detail

// P_n(x) by the ascending three-term recurrence
// P_{n+1} = a_n x P_n - b_n P_{n-1}, P_0 = 1, P_1 = x.
inline double legendre(int n, double x) {
  if (n < 0) throw DomainError("legendre: negative degree");
  detail::check_x(x);
  if (n == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int k = 1; k < n; ++k) {
    const double next = (static_cast<double>(2 * k + 1) * x * cur - static_cast<double>(k) * prev) /
                        static_cast<double>(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

// The pair sequence (a_l, b_l) = ((2l+1)/(l+1), l/(l+1)) driving both the
// Legendre and the spherical-harmonic degree recurrences.
class BiFilter {
 public:
  explicit BiFilter(int l_max) {
    if (l_max < 0) throw DomainError("bi_filter: negative l_max");
    a_.resize(static_cast<std::size_t>(l_max) + 1);
    b_.resize(a_.size());
    for (int l = 0; l <= l_max; ++l) {
      a_[l] = static_cast<double>(2 * l + 1) / static_cast<double>(l + 1);
      b_[l] = static_cast<double>(l) / static_cast<double>(l + 1);
    }
  }

  int l_max() const noexcept { return static_cast<int>(a_.size()) - 1; }
  double a(int l) const { return a_.at(static_cast<std::size_t>(l)); }
  double b(int l) const { return b_.at(static_cast<std::size_t>(l)); }

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

inline BiFilter bi_filter(int l_max) { return BiFilter(l_max); }

// Scalars of the normalized recurrence, derived as ratios of normalization
// constants:
//   alpha = K_{l,m} / K_{l-1,m}   = sqrt((2l+1)(l-m) / ((2l-1)(l+m)))
//   beta  = -K_{l,m} / K_{l-1,m-1} = sqrt((2l+1) / ((2l-1)(l+m)(l+m-1)))
//   gamma = K_{l,m} / K_{l-2,m}   = sqrt((2l+1)(l-m)(l-m-1) / ((2l-3)(l+m)(l+m-1)))
// Terms whose source harmonic does not exist are reported as 0.
struct RecurrenceCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

inline RecurrenceCoefficients recurrence_coefficients(int l, int m) {
  if (l < 1) throw DomainError("recurrence_coefficients: need l >= 1");
  if (m < 0 || m > l)
    throw DomainError("recurrence_coefficients: negative radicand for (" + std::to_string(l) + ", " +
                      std::to_string(m) + ")");
  const double L = l, M = m;
  RecurrenceCoefficients rc;
  rc.alpha = std::sqrt((2 * L + 1) * (L - M) / ((2 * L - 1) * (L + M)));
  if (m >= 1) rc.beta = std::sqrt((2 * L + 1) / ((2 * L - 1) * (L + M) * (L + M - 1)));
  if (l >= 2 && m <= l - 2)
    rc.gamma = std::sqrt((2 * L + 1) * (L - M) * (L - M - 1) / ((2 * L - 3) * (L + M) * (L + M - 1)));
  return rc;
}

// Direct evaluation of P_{l,m}(x). The polynomial 2^l P_l has integer
// coefficients (-1)^k C(l,k) C(2l-2k,l) on x^{l-2k}, built as exact-ratio
// running products; it is then differentiated symbolically m times and
// evaluated by Horner in x^2. Everything before the final weight runs in
// ExtendedReal so that the alternating-sign cancellation stays far below
// double resolution.
inline double assoc_legendre_direct(int l, int m, double x, OpCounter* counter = nullptr) {
  detail::check_lm(l, m);
  detail::check_x(x);
  if (l > kMaxDirectDegree) throw DomainError("assoc_legendre_direct: degree above supported range");
  if (std::abs(x) == 1.0) {
    if (m > 0) return 0.0;
    return (x < 0 && (l & 1)) ? -1.0 : 1.0;
  }

  using R = ExtendedReal;
  // coeff[p] multiplies x^p; only powers with the parity of the current degree are live
  std::array<R, kMaxDirectDegree + 1> coeff;
  R c = 1;
  for (int j = 1; j <= l; ++j) c = c * R(l + j) / R(j);  // C(2l, l)
  coeff[static_cast<std::size_t>(l)] = c;
  for (int k = 0; 2 * (k + 1) <= l; ++k) {
    const int p = l - 2 * k;
    // C(l,k+1)/C(l,k) * C(2l-2k-2,l)/C(2l-2k,l)
    c = c * R(-(l - k)) / R(k + 1);
    c = c * R(p) * R(p - 1) / (R(2 * l - 2 * k) * R(2 * l - 2 * k - 1));
    coeff[static_cast<std::size_t>(p - 2)] = c;
  }
  std::uint64_t ops = static_cast<std::uint64_t>(2 * l + 3 * (l / 2));

  int degree = l;
  for (int pass = 0; pass < m; ++pass, --degree) {
    for (int p = degree; p >= 1; p -= 2) coeff[static_cast<std::size_t>(p - 1)] = R(p) * coeff[static_cast<std::size_t>(p)];
    ops += static_cast<std::uint64_t>((degree + 1) / 2);
  }

  const R xr = x;
  const R y = xr * xr;
  R acc = coeff[static_cast<std::size_t>(degree)];
  for (int p = degree - 2; p >= 0; p -= 2) acc = acc * y + coeff[static_cast<std::size_t>(p)];
  if (degree & 1) acc *= xr;
  ops += static_cast<std::uint64_t>(degree + 2);

  double value = std::ldexp(static_cast<double>(acc), -l);
  if (m > 0) {
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    value *= std::pow(s, m);
    if (m & 1) value = -value;
  }
  if (counter) counter->add(ops + 8);
  return value;
}

// All P_{l',m'} for l' <= l, m' <= m_max, by the degree ladder. Row-major
// triangle: out[l'*(m_max+1) + m']. Seeds P_{0,0}, P_{1,0}, P_{1,1} come from
// the direct route.
inline std::vector<double> assoc_legendre_ladder(int l, int m_max, double x) {
  detail::check_lm(l, m_max);
  detail::check_x(x);
  const int stride = m_max + 1;
  std::vector<double> P(static_cast<std::size_t>((l + 1) * stride), 0.0);
  auto at = [&](int ll, int mm) -> double& { return P[static_cast<std::size_t>(ll * stride + mm)]; };
  at(0, 0) = assoc_legendre_direct(0, 0, x);
  if (l == 0) return P;
  at(1, 0) = assoc_legendre_direct(1, 0, x);
  if (m_max >= 1) at(1, 1) = assoc_legendre_direct(1, 1, x);
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  for (int ll = 2; ll <= l; ++ll) {
    const double a = static_cast<double>(2 * ll - 1) / static_cast<double>(ll);
    const double b = static_cast<double>(ll - 1) / static_cast<double>(ll);
    const int top = ll < m_max ? ll : m_max;
    for (int mm = 0; mm <= top; ++mm) {
      double v = 0.0;
      if (mm <= ll - 1) v += a * x * at(ll - 1, mm);
      if (mm >= 1) v -= static_cast<double>(mm) * a * s * at(ll - 1, mm - 1);
      if (mm <= ll - 2) v -= b * at(ll - 2, mm);
      at(ll, mm) = v;
    }
  }
  return P;
}

inline double assoc_legendre_recursive(int l, int m, double x) {
  detail::check_lm(l, m);
  detail::check_x(x);
  const auto P = assoc_legendre_ladder(l, m, x);
  return P[static_cast<std::size_t>(l * (m + 1) + m)];
}

}  // namespace shent
