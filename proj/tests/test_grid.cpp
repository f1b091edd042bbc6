#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "shentropy/basis.hpp"
#include "shentropy/grid.hpp"

using namespace shent;

constexpr double kFourPi = 4.0 * std::numbers::pi;

TEST(GaussGrid, SmallCases) {
  const auto g0 = gauss_grid(0);
  EXPECT_EQ(g0.n_theta(), 1u);
  EXPECT_EQ(g0.n_phi(), 2u);
  EXPECT_NEAR(g0.weight_sum(), kFourPi, 1e-12 * kFourPi);

  const auto g1 = gauss_grid(1);
  ASSERT_EQ(g1.n_theta(), 2u);
  EXPECT_NEAR(std::cos(g1.thetas()[0]), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(std::cos(g1.thetas()[1]), -1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(g1.kind(), GridKind::GaussLegendre);
  EXPECT_EQ(g1.band_limit(), 1);
}

TEST(GaussGrid, WeightsPositiveAndSumTo4Pi) {
  for (int L = 0; L <= 64; ++L) {
    const auto g = gauss_grid(L);
    EXPECT_EQ(g.node_count(), static_cast<std::size_t>((L + 1) * (2 * L + 2)));
    EXPECT_NEAR(g.weight_sum(), kFourPi, 1e-12 * kFourPi);
    for (double w : g.weights()) EXPECT_GT(w, 0.0);
    for (std::size_t i = 1; i < g.n_theta(); ++i) EXPECT_GT(g.thetas()[i], g.thetas()[i - 1]);
  }
}

TEST(GaussGrid, RuleIntegratesPolynomialsExactly) {
  // n points integrate x^k exactly for k <= 2n - 1
  for (int n = 1; n <= 20; ++n) {
    const auto [x, w] = gauss_legendre_rule(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], k);
      const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(s, exact, 1e-14) << n << " " << k;
    }
  }
}

TEST(GaussGrid, OrthonormalityY21) {
  const auto g = gauss_grid(2);
  double s = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i)
    s += g.weight(i) * std::norm(sh_direct(2, 1, SphericalPoint(g.theta(i), g.phi(i))));
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(GaussGrid, ExactForAllProductsUpToL) {
  for (int L : {3, 8}) {
    const auto g = gauss_grid(L);
    const auto B = basis_matrix(L, g, BasisStrategy::Direct);
    double worst = 0.0;
    for (std::size_t a = 0; a < B.cols; ++a)
      for (std::size_t b = 0; b < B.cols; ++b) {
        Complex s{};
        for (std::size_t r = 0; r < B.rows; ++r) s += g.weight(r) * B(r, a) * std::conj(B(r, b));
        worst = std::max(worst, std::abs(s - Complex(a == b ? 1.0 : 0.0)));
      }
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(EquiangularGrid, NodeCountsAndWeights) {
  const auto g51 = equiangular_grid(51, 51);
  EXPECT_EQ(g51.node_count(), 2601u);
  EXPECT_NEAR(g51.weight_sum(), kFourPi, 1e-3 * kFourPi);  // relative; midpoint rule is ~1.6e-4 off
  EXPECT_EQ(equiangular_grid(61, 61).node_count(), 3721u);
  const auto g91 = equiangular_grid(91, 91);
  EXPECT_EQ(g91.node_count(), 8281u);
  EXPECT_NEAR(g91.weight_sum(), kFourPi, 1e-3 * kFourPi);
  for (double w : g51.weights()) EXPECT_GT(w, 0.0);
  // midpoints: no pole rows
  EXPECT_GT(g51.thetas().front(), 0.0);
  EXPECT_LT(g51.thetas().back(), std::numbers::pi);
  EXPECT_EQ(g51.phis().front(), 0.0);
  EXPECT_EQ(g51.max_safe_degree(), 25);
}

TEST(EquiangularGrid, RejectsTinyGrids) {
  EXPECT_THROW(equiangular_grid(1, 4), DomainError);
  EXPECT_THROW(equiangular_grid(4, 1), DomainError);
}

TEST(SphereGrid, ValidatesConstruction) {
  EXPECT_THROW(SphereGrid(GridKind::External, -1, {0.5}, {0.0, 1.0}, {1.0}), ShapeMismatchError);
  EXPECT_THROW(SphereGrid(GridKind::External, -1, {0.5}, {0.0}, {-1.0}), DomainError);
  EXPECT_EQ(grid_kind_from_string("gauss-legendre"), GridKind::GaussLegendre);
  EXPECT_THROW(grid_kind_from_string("icosahedral"), ParseError);
}
