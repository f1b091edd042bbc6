#pragma once

// Forward analysis (quadrature projection onto Y_{l,m}) and truncated
// synthesis for 1- or 3-channel fields sampled on a SphereGrid.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "basis.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace shent {

// Values are node-major: values[node * channels + channel].
struct SampledSphericalField {
  SphereGrid grid;
  int channels = 1;
  std::vector<double> values;

  SampledSphericalField() = default;
  SampledSphericalField(SphereGrid g, int n_channels, std::vector<double> v)
      : grid(std::move(g)), channels(n_channels), values(std::move(v)) {
    validate();
  }
  SampledSphericalField(SphereGrid g, int n_channels)
      : grid(std::move(g)), channels(n_channels), values(grid.node_count() * static_cast<std::size_t>(n_channels)) {
    validate();
  }

  std::size_t node_count() const noexcept { return grid.node_count(); }
  double& at(std::size_t node, int channel) { return values[node * static_cast<std::size_t>(channels) + channel]; }
  double at(std::size_t node, int channel) const { return values[node * static_cast<std::size_t>(channels) + channel]; }

  void validate() const {
    if (channels != 1 && channels != 3) throw ShapeMismatchError("field: channels must be 1 or 3");
    if (values.size() != grid.node_count() * static_cast<std::size_t>(channels))
      throw ShapeMismatchError("field: value count does not match nodes x channels");
    for (double v : values)
      if (!std::isfinite(v)) throw DomainError("field: non-finite sample");
  }
};

// Coefficients S_{l,m} per channel, channel-major then canonical l-major.
class CoefficientPyramid {
 public:
  CoefficientPyramid() = default;
  CoefficientPyramid(int band_limit, int channels)
      : band_limit_(band_limit), channels_(channels), coeffs_(lm_count(band_limit) * static_cast<std::size_t>(channels)) {
    if (band_limit < 0) throw DomainError("pyramid: negative band limit");
    if (channels < 1) throw ShapeMismatchError("pyramid: need at least one channel");
  }
  CoefficientPyramid(int band_limit, int channels, std::vector<Complex> coeffs)
      : band_limit_(band_limit), channels_(channels), coeffs_(std::move(coeffs)) {
    if (band_limit < 0) throw DomainError("pyramid: negative band limit");
    if (channels < 1) throw ShapeMismatchError("pyramid: need at least one channel");
    if (coeffs_.size() != lm_count(band_limit) * static_cast<std::size_t>(channels))
      throw ShapeMismatchError("pyramid: expected channels x (L+1)^2 coefficients");
  }

  int band_limit() const noexcept { return band_limit_; }
  int channels() const noexcept { return channels_; }
  std::size_t per_channel() const noexcept { return lm_count(band_limit_); }
  const std::vector<Complex>& coeffs() const noexcept { return coeffs_; }
  std::vector<Complex>& coeffs() noexcept { return coeffs_; }

  Complex& operator()(int l, int m, int channel = 0) { return coeffs_.at(offset(l, m, channel)); }
  Complex operator()(int l, int m, int channel = 0) const { return coeffs_.at(offset(l, m, channel)); }

  // max |S_{l,-m} - (-1)^m conj(S_{l,m})|; zero for pyramids of real fields.
  double real_symmetry_error() const {
    double worst = 0.0;
    for (int c = 0; c < channels_; ++c)
      for (int l = 0; l <= band_limit_; ++l)
        for (int m = 0; m <= l; ++m) {
          const Complex s = (*this)(l, m, c);
          const Complex expected = ((m & 1) ? -1.0 : 1.0) * std::conj(s);
          worst = std::max(worst, std::abs((*this)(l, -m, c) - expected));
        }
    return worst;
  }

  CoefficientPyramid scaled(double factor) const {
    CoefficientPyramid out = *this;
    for (auto& s : out.coeffs_) s *= factor;
    return out;
  }

 private:
  std::size_t offset(int l, int m, int channel) const {
    if (l < 0 || l > band_limit_ || std::abs(m) > l || channel < 0 || channel >= channels_)
      throw DomainError("pyramid: index (" + std::to_string(l) + ", " + std::to_string(m) + ", " +
                        std::to_string(channel) + ") out of range");
    return static_cast<std::size_t>(channel) * per_channel() + lm_index(l, m);
  }

  int band_limit_ = 0;
  int channels_ = 1;
  std::vector<Complex> coeffs_;
};

// True when analysis at `band_limit` on this grid can alias.
inline bool aliasing_risk(const SphereGrid& grid, int band_limit) noexcept {
  return band_limit > grid.max_safe_degree();
}

namespace detail {

class BasisRows {
 public:
  BasisRows(int band_limit, BasisStrategy strategy)
      : band_limit_(band_limit), strategy_(strategy), table_(strategy == BasisStrategy::Recursive ? band_limit : 0),
        row_(lm_count(band_limit)) {}

  const std::vector<Complex>& at(const SphericalPoint& p) {
    if (strategy_ == BasisStrategy::Recursive)
      table_.evaluate(p, row_.data());
    else
      row_ = sh_direct_all(band_limit_, p).values;
    return row_;
  }

 private:
  int band_limit_;
  BasisStrategy strategy_;
  LadderTable table_;
  std::vector<Complex> row_;
};

}  // namespace detail

// S_{l,m} = sum_nodes w f conj(Y_{l,m}), per channel, for l <= band_limit.
inline CoefficientPyramid analyze(const SampledSphericalField& field, int band_limit,
                                  BasisStrategy strategy = BasisStrategy::Recursive) {
  if (band_limit < 0) throw DomainError("analyze: negative band limit");
  field.validate();
  if (field.grid.kind() == GridKind::GaussLegendre && field.grid.band_limit() < band_limit)
    throw BandLimitError("analyze: gauss grid resolves degree " + std::to_string(field.grid.band_limit()) +
                         " but L = " + std::to_string(band_limit) + " was requested");
  CoefficientPyramid pyr(band_limit, field.channels);
  const std::size_t n = pyr.per_channel();
  detail::BasisRows rows(band_limit, strategy);
  auto& out = pyr.coeffs();
  for (std::size_t node = 0; node < field.node_count(); ++node) {
    const auto& y = rows.at(SphericalPoint(field.grid.theta(node), field.grid.phi(node)));
    const double w = field.grid.weight(node);
    for (int c = 0; c < field.channels; ++c) {
      const double wf = w * field.at(node, c);
      if (wf == 0.0) continue;
      Complex* dst = out.data() + static_cast<std::size_t>(c) * n;
      for (std::size_t k = 0; k < n; ++k) dst[k] += wf * std::conj(y[k]);
    }
  }
  return pyr;
}

// f = sum_{l <= order} sum_{|m| <= l} S_{l,m} Y_{l,m}; the real part is kept.
// `max_imag_residue`, when given, receives the largest discarded imaginary part.
inline SampledSphericalField synthesize(const CoefficientPyramid& pyr, const SphereGrid& grid, int order,
                                        double* max_imag_residue = nullptr,
                                        BasisStrategy strategy = BasisStrategy::Recursive) {
  if (order < 0 || order > pyr.band_limit())
    throw OrderError("synthesize: order " + std::to_string(order) + " outside [0, " +
                     std::to_string(pyr.band_limit()) + "]");
  if (pyr.channels() != 1 && pyr.channels() != 3) throw ShapeMismatchError("synthesize: channels must be 1 or 3");
  SampledSphericalField field(grid, pyr.channels());
  const std::size_t n = lm_count(order);
  detail::BasisRows rows(order, strategy);
  double worst_imag = 0.0;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    const auto& y = rows.at(SphericalPoint(grid.theta(node), grid.phi(node)));
    for (int c = 0; c < pyr.channels(); ++c) {
      const Complex* s = pyr.coeffs().data() + static_cast<std::size_t>(c) * pyr.per_channel();
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k) acc += s[k] * y[k];
      field.at(node, c) = acc.real();
      worst_imag = std::max(worst_imag, std::abs(acc.imag()));
    }
  }
  if (max_imag_residue) *max_imag_residue = worst_imag;
  return field;
}

// Quadrature L2 norm, summed over channels.
inline double field_norm(const SampledSphericalField& f) {
  double s = 0.0;
  for (std::size_t node = 0; node < f.node_count(); ++node)
    for (int c = 0; c < f.channels; ++c) s += f.grid.weight(node) * f.at(node, c) * f.at(node, c);
  return std::sqrt(s);
}

inline double residual_norm(const SampledSphericalField& original, const SampledSphericalField& reconstructed) {
  if (original.channels != reconstructed.channels || !original.grid.same_nodes(reconstructed.grid))
    throw ShapeMismatchError("residual_norm: fields live on different grids or channel counts");
  double s = 0.0;
  for (std::size_t node = 0; node < original.node_count(); ++node)
    for (int c = 0; c < original.channels; ++c) {
      const double d = original.at(node, c) - reconstructed.at(node, c);
      s += original.grid.weight(node) * d * d;
    }
  return std::sqrt(s);
}

// Per-channel truncated analysis + synthesis at `order` on the field's own grid.
inline SampledSphericalField reconstruct(const SampledSphericalField& field, int order,
                                         BasisStrategy strategy = BasisStrategy::Recursive) {
  const auto pyr = analyze(field, order, strategy);
  return synthesize(pyr, field.grid, order, nullptr, strategy);
}

// (X, Y, Z) surface variant of reconstruct().
inline SampledSphericalField reconstruct_surface(const SampledSphericalField& surface, int order,
                                                 BasisStrategy strategy = BasisStrategy::Recursive) {
  if (surface.channels != 3) throw ShapeMismatchError("reconstruct_surface: need a 3-channel (X, Y, Z) field");
  return reconstruct(surface, order, strategy);
}

// Real cosine/sine form of a real-field pyramid:
//   f = sum_n sum_{m=0..n} (a_n^m cos(m phi) + b_n^m sin(m phi)) P_{n,m}(cos theta)
// with P_{n,m} from legendre-core. Index with lm_index(n, m) restricted to m >= 0
// via real_index(n, m) = n(n+1)/2 + m.
struct RealCoefficients {
  int band_limit = 0;
  std::vector<double> a;
  std::vector<double> b;

  static constexpr std::size_t real_index(int n, int m) noexcept { return static_cast<std::size_t>(n * (n + 1) / 2 + m); }
};

inline RealCoefficients to_real_coefficients(const CoefficientPyramid& pyr, int channel = 0) {
  RealCoefficients rc;
  rc.band_limit = pyr.band_limit();
  const std::size_t n = static_cast<std::size_t>((pyr.band_limit() + 1) * (pyr.band_limit() + 2) / 2);
  rc.a.assign(n, 0.0);
  rc.b.assign(n, 0.0);
  for (int l = 0; l <= pyr.band_limit(); ++l)
    for (int m = 0; m <= l; ++m) {
      const Complex s = pyr(l, m, channel);
      const double scale = (m == 0 ? 1.0 : 2.0) * normalization_constant(l, m);
      rc.a[RealCoefficients::real_index(l, m)] = scale * s.real();
      rc.b[RealCoefficients::real_index(l, m)] = m == 0 ? 0.0 : -scale * s.imag();
    }
  return rc;
}

}  // namespace shent
