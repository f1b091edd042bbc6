#pragma once

// Structured product grids on the sphere with quadrature weights, so that
// integrals with measure sin(theta) dtheta dphi become weighted sums.
// Nodes are stored theta-major: node index = i_theta * n_phi + i_phi.

#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace shent {

enum class GridKind { GaussLegendre, Equiangular, External };

inline std::string to_string(GridKind kind) {
  switch (kind) {
    case GridKind::GaussLegendre: return "gauss-legendre";
    case GridKind::Equiangular: return "equiangular";
    case GridKind::External: return "external";
  }
  return "unknown";
}

inline GridKind grid_kind_from_string(const std::string& s) {
  if (s == "gauss-legendre" || s == "gauss") return GridKind::GaussLegendre;
  if (s == "equiangular") return GridKind::Equiangular;
  if (s == "external") return GridKind::External;
  throw ParseError("unknown grid kind '" + s + "'");
}

class SphereGrid {
 public:
  SphereGrid() = default;
  SphereGrid(GridKind kind, int band_limit, std::vector<double> thetas, std::vector<double> phis,
             std::vector<double> weights)
      : kind_(kind),
        band_limit_(band_limit),
        thetas_(std::move(thetas)),
        phis_(std::move(phis)),
        weights_(std::move(weights)) {
    if (thetas_.empty() || phis_.empty()) throw DomainError("SphereGrid: empty axis");
    if (weights_.size() != thetas_.size() * phis_.size())
      throw ShapeMismatchError("SphereGrid: weight count does not match n_theta * n_phi");
    for (double w : weights_)
      if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("SphereGrid: weights must be positive and finite");
  }

  GridKind kind() const noexcept { return kind_; }
  // Gauss grids: the degree L they integrate exactly. Others: -1.
  int band_limit() const noexcept { return band_limit_; }

  std::size_t n_theta() const noexcept { return thetas_.size(); }
  std::size_t n_phi() const noexcept { return phis_.size(); }
  std::size_t node_count() const noexcept { return weights_.size(); }

  const std::vector<double>& thetas() const noexcept { return thetas_; }
  const std::vector<double>& phis() const noexcept { return phis_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double theta(std::size_t node) const { return thetas_[node / phis_.size()]; }
  double phi(std::size_t node) const { return phis_[node % phis_.size()]; }
  double weight(std::size_t node) const { return weights_[node]; }

  double weight_sum() const noexcept {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  // Highest degree that can be analyzed without aliasing.
  int max_safe_degree() const noexcept {
    if (kind_ == GridKind::GaussLegendre) return band_limit_;
    const auto n = std::min(thetas_.size(), phis_.size());
    return (static_cast<int>(n) - 1) / 2;
  }

  bool same_nodes(const SphereGrid& other) const noexcept {
    return thetas_ == other.thetas_ && phis_ == other.phis_ && weights_ == other.weights_;
  }

 private:
  GridKind kind_ = GridKind::External;
  int band_limit_ = -1;
  std::vector<double> thetas_;
  std::vector<double> phis_;
  std::vector<double> weights_;
};

// n-point Gauss-Legendre rule on [-1, 1], nodes descending (so that
// theta = acos(x) ascends). Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_rule(int n) {
  if (n < 1) throw DomainError("gauss_legendre_rule: need n >= 1");
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * z * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(z), p0 = P_{n-1}(z)
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
  return {std::move(x), std::move(w)};
}

// L+1 Gauss-Legendre nodes in cos(theta), 2L+2 uniform longitudes. Exact for
// every product Y_{l,m} conj(Y_{l',m'}) with l, l' <= L.
inline SphereGrid gauss_grid(int band_limit) {
  if (band_limit < 0) throw DomainError("gauss_grid: negative band limit");
  auto [x, wx] = gauss_legendre_rule(band_limit + 1);
  const int n_phi = 2 * band_limit + 2;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  std::vector<double> thetas(x.size()), phis(static_cast<std::size_t>(n_phi));
  std::vector<double> weights;
  weights.reserve(x.size() * phis.size());
  for (std::size_t i = 0; i < x.size(); ++i) thetas[i] = std::acos(x[i]);
  for (int j = 0; j < n_phi; ++j) phis[static_cast<std::size_t>(j)] = j * dphi;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int j = 0; j < n_phi; ++j) weights.push_back(wx[i] * dphi);
  return SphereGrid(GridKind::GaussLegendre, band_limit, std::move(thetas), std::move(phis), std::move(weights));
}

// Cell-midpoint colatitudes, uniform longitudes starting at 0,
// weight = sin(theta_i) dtheta dphi.
inline SphereGrid equiangular_grid(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2) throw DomainError("equiangular_grid: need n_theta >= 2 and n_phi >= 2");
  const double dtheta = std::numbers::pi / n_theta;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  std::vector<double> thetas(static_cast<std::size_t>(n_theta)), phis(static_cast<std::size_t>(n_phi));
  for (int i = 0; i < n_theta; ++i) thetas[static_cast<std::size_t>(i)] = (i + 0.5) * dtheta;
  for (int j = 0; j < n_phi; ++j) phis[static_cast<std::size_t>(j)] = j * dphi;
  std::vector<double> weights;
  weights.reserve(thetas.size() * phis.size());
  for (double t : thetas)
    for (int j = 0; j < n_phi; ++j) weights.push_back(std::sin(t) * dtheta * dphi);
  return SphereGrid(GridKind::Equiangular, -1, std::move(thetas), std::move(phis), std::move(weights));
}

}  // namespace shent
