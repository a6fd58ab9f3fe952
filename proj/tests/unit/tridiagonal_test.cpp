#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcstat/error.hpp"
#include "qcstat/tridiagonal.hpp"

using namespace qcstat;

TEST(Tridiagonal, MatchesDenseSolverOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + trial * 7;
    auto d = oracle::uniform(rng, n, -3.0, 3.0);
    auto e = oracle::uniform(rng, n - 1, -1.0, 1.0);
    const auto want = oracle::dense_eigenvalues(d, e);
    const auto got = lowest_eigenvalues(SymmetricTridiagonal(d, e), n);
    ASSERT_EQ(got.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], want[i], 1e-12) << i;
  }
}

TEST(Tridiagonal, DegenerateAndZeroCouplings) {
  // Decoupled blocks give exact repeats.
  const std::vector<double> d{2.0, 2.0, 2.0, 1.0};
  const std::vector<double> e{0.0, 0.0, 0.0};
  const auto got = lowest_eigenvalues(SymmetricTridiagonal(d, e), 4);
  EXPECT_DOUBLE_EQ(got[0], 1.0);
  for (int i = 1; i < 4; ++i) EXPECT_DOUBLE_EQ(got[i], 2.0);
}

TEST(Tridiagonal, SecondDifferenceSpectrum) {
  const std::size_t n = 1000;
  const std::vector<double> d(n, 2.0), e(n - 1, -1.0);
  const auto got = lowest_eigenvalues(SymmetricTridiagonal(d, e), 10);
  for (std::size_t k = 1; k <= 10; ++k) {
    const double want = 2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1));
    EXPECT_NEAR(got[k - 1], want, 1e-14);
  }
}

TEST(Tridiagonal, SturmCount) {
  const SymmetricTridiagonal m({1.0, 2.0, 3.0}, {0.0, 0.0});
  EXPECT_EQ(m.count_below(0.5), 0u);
  EXPECT_EQ(m.count_below(2.5), 2u);
  EXPECT_EQ(m.count_below(10.0), 3u);
}

TEST(Tridiagonal, RejectsBadInput) {
  EXPECT_THROW(SymmetricTridiagonal({}, {}), ArgumentError);
  EXPECT_THROW(SymmetricTridiagonal({1.0, 2.0}, {}), ArgumentError);
  EXPECT_THROW(lowest_eigenvalues(SymmetricTridiagonal({1.0}, {}), 2), ArgumentError);
}
