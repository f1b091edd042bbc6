#pragma once

// Synthetic star-shaped test surfaces, r(theta, phi) = 1 + sum amp * R_{l,m},
// where R_{l,m} = Re Y_{l,m} for m >= 0 and Im Y_{l,|m|} for m < 0.
// Three-channel output embeds the radial field as (r sin t cos p, r sin t sin p, r cos t).

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "basis.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "transform.hpp"

namespace shent {

enum class ShapeKind { UnitSphere, RadialHarmonicBump, RandomBandlimited };

inline std::string to_string(ShapeKind k) {
  switch (k) {
    case ShapeKind::UnitSphere: return "unit-sphere";
    case ShapeKind::RadialHarmonicBump: return "radial-harmonic-bump";
    case ShapeKind::RandomBandlimited: return "random-bandlimited";
  }
  return "unknown";
}

inline ShapeKind shape_kind_from_string(const std::string& s) {
  if (s == "unit-sphere" || s == "sphere") return ShapeKind::UnitSphere;
  if (s == "radial-harmonic-bump" || s == "bump") return ShapeKind::RadialHarmonicBump;
  if (s == "random-bandlimited" || s == "random") return ShapeKind::RandomBandlimited;
  throw DomainError("unknown shape kind '" + s + "' (expected unit-sphere|radial-harmonic-bump|random-bandlimited)");
}

struct HarmonicAmplitude {
  int l = 0;
  int m = 0;
  double amplitude = 0.0;
};

struct GridSpec {
  GridKind kind = GridKind::GaussLegendre;
  int band_limit = 8;  // gauss
  int n_theta = 0;     // equiangular
  int n_phi = 0;

  static GridSpec gauss(int band_limit) { return {GridKind::GaussLegendre, band_limit, 0, 0}; }
  static GridSpec equiangular(int n_theta, int n_phi) { return {GridKind::Equiangular, -1, n_theta, n_phi}; }

  SphereGrid build() const {
    switch (kind) {
      case GridKind::GaussLegendre: return gauss_grid(band_limit);
      case GridKind::Equiangular: return equiangular_grid(n_theta, n_phi);
      default: throw DomainError("GridSpec: only gauss-legendre and equiangular grids can be generated");
    }
  }
};

struct ShapeSpec {
  ShapeKind kind = ShapeKind::UnitSphere;
  int max_degree = 0;                        // random-bandlimited
  std::vector<HarmonicAmplitude> amplitudes;  // radial-harmonic-bump
  std::uint64_t seed = 42;
  double amplitude_scale = 0.3;
  int channels = 1;
  GridSpec grid;

  void validate() const {
    if (channels != 1 && channels != 3) throw DomainError("shape: channels must be 1 or 3");
    if (max_degree < 0) throw DomainError("shape: max degree must be >= 0");
    if (!std::isfinite(amplitude_scale)) throw DomainError("shape: amplitude scale must be finite");
    for (const auto& a : amplitudes) {
      if (a.l < 0 || std::abs(a.m) > a.l)
        throw DomainError("shape: invalid harmonic (" + std::to_string(a.l) + ", " + std::to_string(a.m) + ")");
      if (!std::isfinite(a.amplitude)) throw DomainError("shape: amplitudes must be finite");
    }
    if (kind == ShapeKind::RadialHarmonicBump && amplitudes.empty())
      throw DomainError("shape: radial-harmonic-bump needs at least one (l, m, amplitude)");
  }
};

// Uniform double in [-1, 1) from the raw 64-bit engine output; avoids the
// implementation-defined std::uniform_real_distribution so that seeds
// reproduce across standard libraries.
inline double portable_symmetric_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

// Amplitudes for every (l, m) with 1 <= l <= max_degree, decaying as 1/(l+1).
inline std::vector<HarmonicAmplitude> random_amplitudes(int max_degree, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::vector<HarmonicAmplitude> out;
  for (int l = 1; l <= max_degree; ++l)
    for (int m = -l; m <= l; ++m) {
      double u = portable_symmetric_uniform(rng);
      if (u == 0.0) u = 0.5;
      out.push_back({l, m, scale * u / (l + 1)});
    }
  return out;
}

inline std::vector<HarmonicAmplitude> resolved_amplitudes(const ShapeSpec& spec) {
  switch (spec.kind) {
    case ShapeKind::UnitSphere: return {};
    case ShapeKind::RadialHarmonicBump: return spec.amplitudes;
    case ShapeKind::RandomBandlimited: return random_amplitudes(spec.max_degree, spec.seed, spec.amplitude_scale);
  }
  return {};
}

// Highest degree present in the generated channels (the embedding adds one).
inline int construction_degree(const ShapeSpec& spec) {
  int radial = 0;
  for (const auto& a : resolved_amplitudes(spec))
    if (a.amplitude != 0.0) radial = std::max(radial, a.l);
  return spec.channels == 3 ? radial + 1 : radial;
}

inline double real_harmonic(int l, int m, const SphericalPoint& p) {
  if (m >= 0) return sh_direct(l, m, p).real();
  return sh_direct(l, -m, p).imag();
}

inline SampledSphericalField generate(const ShapeSpec& spec) {
  spec.validate();
  SphereGrid grid = spec.grid.build();
  const auto amps = resolved_amplitudes(spec);
  int top = 0;
  for (const auto& a : amps) top = std::max(top, a.l);
  const LadderTable table(top);
  std::vector<Complex> y(lm_count(top));

  SampledSphericalField field(grid, spec.channels);
  for (std::size_t node = 0; node < field.node_count(); ++node) {
    const SphericalPoint p(field.grid.theta(node), field.grid.phi(node));
    table.evaluate(p, y.data());
    double r = 1.0;
    for (const auto& a : amps) {
      const Complex v = y[lm_index(a.l, std::abs(a.m))];
      r += a.amplitude * (a.m >= 0 ? v.real() : v.imag());
    }
    if (spec.channels == 1) {
      field.at(node, 0) = r;
    } else {
      field.at(node, 0) = r * std::sin(p.theta) * std::cos(p.phi);
      field.at(node, 1) = r * std::sin(p.theta) * std::sin(p.phi);
      field.at(node, 2) = r * std::cos(p.theta);
    }
  }
  return field;
}

// Random pyramid of a real field: S_{l,-m} = (-1)^m conj(S_{l,m}), S_{l,0} real.
// Levels above `top_degree` stay zero.
inline CoefficientPyramid random_real_pyramid(int band_limit, int top_degree, std::uint64_t seed, int channels = 1) {
  if (top_degree > band_limit) throw DomainError("random_real_pyramid: top degree above band limit");
  std::mt19937_64 rng(seed);
  CoefficientPyramid pyr(band_limit, channels);
  for (int c = 0; c < channels; ++c)
    for (int l = 0; l <= top_degree; ++l) {
      pyr(l, 0, c) = portable_symmetric_uniform(rng);
      for (int m = 1; m <= l; ++m) {
        const Complex s(portable_symmetric_uniform(rng), portable_symmetric_uniform(rng));
        pyr(l, m, c) = s;
        pyr(l, -m, c) = ((m & 1) ? -1.0 : 1.0) * std::conj(s);
      }
    }
  return pyr;
}

}  // namespace shent
