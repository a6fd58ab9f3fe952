#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcstat/error.hpp"
#include "qcstat/spectrum.hpp"

using namespace qcstat;
using std::numbers::pi;

TEST(Spectrum, BoxClosedForm) {
  const double one[] = {1.0};
  const auto s = solve_box(one, 1.0, 1.0, 3);
  EXPECT_NEAR(s[0], pi * pi / 2, 1e-13);
  EXPECT_NEAR(s[1], 2 * pi * pi, 1e-12);
  EXPECT_NEAR(s[2], 4.5 * pi * pi, 1e-12);
  EXPECT_EQ(s.source(), SpectrumSource::AnalyticBox);
  EXPECT_NEAR(solve_box(one, 1.0, 2.0, 1)[0], 4 * pi * pi / 2, 1e-12);
}

TEST(Spectrum, SquareBoxKeepsDegeneracy) {
  const double sides[] = {1.0, 1.0};
  const auto s = solve_box(sides, 1.0, 1.0, 3);
  EXPECT_NEAR(s[0], pi * pi, 1e-12);
  EXPECT_NEAR(s[1], 2.5 * pi * pi, 1e-12);
  EXPECT_NEAR(s[2], 2.5 * pi * pi, 1e-12);
}

TEST(Spectrum, BoxEnumerationMatchesBruteForce) {
  const double sides[] = {1.0, 1.3, 0.7};
  std::vector<double> brute;
  for (int a = 1; a <= 40; ++a)
    for (int b = 1; b <= 40; ++b)
      for (int c = 1; c <= 40; ++c)
        brute.push_back(0.5 * pi * pi *
                        (a * a / 1.0 + b * b / (1.3 * 1.3) + c * c / (0.7 * 0.7)));
  std::sort(brute.begin(), brute.end());
  const auto s = solve_box(sides, 1.0, 1.0, 500);
  for (std::size_t i = 0; i < 500; ++i) EXPECT_NEAR(s[i], brute[i], 1e-9 * brute[i]);
  EXPECT_THROW(solve_box(sides, 1.0, 1.0, 500, 100), ResourceError);
}

TEST(Spectrum, HarmonicAndLinear) {
  const auto osc = solve_harmonic(1, 1.0, 1.0, 4);
  for (std::size_t n = 0; n < 4; ++n) EXPECT_NEAR(osc[n], std::sqrt(2.0) * (n + 0.5), 1e-13);
  // N = 2: levels (n + 1) omega h with multiplicity n + 1.
  const auto osc2 = solve_harmonic(2, 1.0, 1.0, 6);
  EXPECT_NEAR(osc2[0], std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(osc2[2], 2 * std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(osc2[5], 3 * std::sqrt(2.0), 1e-13);
  // -u''/2 + |x| u: E = -a' (1/2)^(1/3) for even, -a for odd states.
  const auto lin = solve_linear(1.0, 1.0, 2);
  EXPECT_NEAR(lin[0], 1.018792971647471 * std::cbrt(0.5), 1e-12);
  EXPECT_NEAR(lin[1], 2.338107410459767 * std::cbrt(0.5), 1e-12);
}

TEST(Spectrum, FiniteDifferenceBox) {
  const auto box = Potential::box({1.0});
  const FdGrid grid{0.0, 1.0, 4000};
  const auto s = solve_fd_1d(box, 1.0, grid, 1);
  EXPECT_NEAR(s[0], pi * pi / 2, 1e-5);
  // Second order: halving the spacing quarters the error.
  const double e1 = std::abs(solve_fd_1d(box, 1.0, {0.0, 1.0, 199}, 1)[0] - pi * pi / 2);
  const double e2 = std::abs(solve_fd_1d(box, 1.0, {0.0, 1.0, 399}, 1)[0] - pi * pi / 2);
  EXPECT_NEAR(e1 / e2, 4.0, 0.5);
}

TEST(Spectrum, FiniteDifferenceOscillator) {
  const auto v = Potential::homogeneous(1, 2.0);
  FdOptions opts;
  opts.extrapolate = true;
  const auto s1 = solve_fd_1d(v, 1.0, FdGrid::symmetric(8.0, 2000), 2, opts);
  EXPECT_NEAR((s1[1] - s1[0]) / std::sqrt(2.0), 1.0, 1e-5);
  const auto s2 = solve_fd_1d(v, 2.0, FdGrid::symmetric(12.0, 2000), 1, opts);
  EXPECT_NEAR(s2[0] / s1[0], 2.0, 1e-4);
  EXPECT_TRUE(s1.has_level_errors());
}

TEST(Spectrum, FiniteDifferenceRejectsBadGrids) {
  const auto box = Potential::box({1.0});
  EXPECT_THROW(solve_fd_1d(box, 1.0, {0.0, 1.0, 10}, 5), ArgumentError);
  EXPECT_THROW(solve_fd_1d(box, 1.0, {-1.0, 1.0, 100}, 1), DomainError);
}

TEST(Spectrum, QuarticSolveAgreesWithRescaling) {
  const auto v = Potential::homogeneous(1, 4.0);
  const auto base = solve(v, 1.0, 20);
  const auto direct = solve(v, 2.0, 20);
  const auto scaled = rescale(base, 2.0, scaling_exponents(4.0).energy);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(direct[i], scaled[i], 1e-6 * direct[i]);
  // -u''/2 + x^4 u is 2^(-2/3) times the standard -u'' + x^4 u, E_1 = 1.0603620905.
  EXPECT_NEAR(base[0], 1.0603620904841829 * std::pow(2.0, -2.0 / 3.0), 1e-6);
}

TEST(Spectrum, Rescale) {
  const auto base = Spectrum::finite({1.0, 2.0, 3.0});
  const auto same = rescale(base, 1.0, 1.0);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(same[i], base[i]);
  EXPECT_NEAR(rescale(Spectrum::finite({pi * pi / 2}), 3.0, 2.0)[0], 4.5 * pi * pi, 1e-12);
  EXPECT_NEAR(rescale(Spectrum::finite({1.0}), 4.0, 2.0 / 3.0)[0], std::pow(4.0, 2.0 / 3.0),
              1e-14);
  EXPECT_THROW(rescale(rescale(base, 2.0, 1.0), 2.0, 1.0), ArgumentError);
}

TEST(Spectrum, LevelsMustBePositiveAndSorted) {
  EXPECT_THROW(Spectrum::finite({}), ArgumentError);
  EXPECT_THROW(Spectrum({2.0, 1.0}, 1.0, SpectrumSource::Explicit), ArgumentError);
  EXPECT_EQ(Spectrum::finite({2.0, 1.0})[0], 1.0);
  EXPECT_THROW(Spectrum::finite({0.0, 1.0}), ArgumentError);
}

TEST(Spectrum, OperatorNormalisation) {
  const double one[] = {1.0};
  const auto s = solve_box(one, 2.0, 0.5, 2);
  const auto lambda = s.operator_eigenvalues(2.0);
  // lambda_n = (m / h^2) E_n = k_n^2 / 2
  EXPECT_NEAR(lambda[0], pi * pi / 2, 1e-12);
}

TEST(Spectrum, TailBounds) {
  const double one[] = {1.0};
  const auto box = solve_box(one, 1.0, 1.0, 50);
  EXPECT_LE(tail_bound(box, 1.0), 1e-100);

  std::vector<double> linear;
  for (int n = 1; n <= 20; ++n) linear.push_back(n);
  const Spectrum lin(linear, 1.0, SpectrumSource::Explicit);
  const double want = std::exp(-21.0) / (1.0 - std::exp(-1.0));
  const double got = tail_bound(lin, 1.0);
  EXPECT_GT(got, want / 3.0);
  EXPECT_LT(got, want * 3.0);
  for (double beta : {0.1, 0.3, 1.0, 2.0}) {
    EXPECT_LE(tail_bound(lin, 2 * beta), tail_bound(lin, beta));
  }
  EXPECT_EQ(tail_bound(Spectrum::finite(linear), 1.0), 0.0);
}

TEST(Spectrum, SizedForBeta) {
  const auto v = Potential::homogeneous(1, 2.0);
  const auto s = solve_for_beta(v, 1.0, 0.05);
  EXPECT_LT(std::exp(log_tail_bound(s, 0.05) - log_partial_sum(s.levels(), 0.05)), 1e-10);
}

TEST(Spectrum, CsvRoundTrip) {
  const double one[] = {1.0};
  const auto s = solve_box(one, 1.0, 0.5, 12);
  std::stringstream io;
  write_spectrum_csv(io, s);
  const auto back = read_spectrum_csv(io);
  ASSERT_EQ(back.count(), s.count());
  for (std::size_t i = 0; i < s.count(); ++i) EXPECT_EQ(back[i], s[i]);
  EXPECT_EQ(back.planck(), 0.5);
  EXPECT_EQ(back.source(), SpectrumSource::AnalyticBox);
  std::istringstream bad("n,E\n1,2\n");
  EXPECT_THROW(read_spectrum_csv(bad), ParseError);
}

TEST(Spectrum, WeylCountForBox) {
  const auto box = Potential::box({1.0});
  // N(E) ~ L sqrt(2 m E) / (pi h)
  EXPECT_NEAR(weyl_count(box, 1.0, 1e4), std::sqrt(2e4) / pi, 1e-9);
}

TEST(Spectrum, UnsupportedModels) {
  EXPECT_THROW(solve(Potential::homogeneous(2, 4.0), 1.0, 5), ArgumentError);
  EXPECT_THROW(solve(Potential::box({1.0}), -1.0, 5), ArgumentError);
}
