#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "qcstat/error.hpp"
#include "qcstat/ensemble.hpp"

using namespace qcstat;
using std::numbers::pi;

TEST(Ensemble, QuantumSumDirect) {
  const auto two = Spectrum::finite({1.0, 2.0});
  EXPECT_NEAR(z_quantum(two, 1.0).value(), std::exp(-1.0) + std::exp(-2.0), 1e-15);

  const double one[] = {1.0};
  const auto box = solve_box(one, 1.0, 1.0, 50);
  const auto want = oracle::direct_z(oracle::box_levels(1.0, 1.0, 1.0, 200), 1.0);
  EXPECT_NEAR(z_quantum(box, 1.0).value(), want, 1e-15 * want);
  EXPECT_NEAR(z_quantum(box, 1.0).value(), 7.192e-3, 1e-6);
}

TEST(Ensemble, GroundStateDominates) {
  const auto s = Spectrum::finite({1.0, 1.0, 3.0, 4.0});
  for (double beta : {10.0, 20.0, 40.0}) {
    const double ratio = std::exp(z_quantum(s, beta).log_value + beta * 1.0);
    EXPECT_NEAR(ratio, 2.0, 2.0 * std::exp(-2.0 * beta) + 1e-14);
  }
}

TEST(Ensemble, ShortSpectrumIsRejected) {
  const double one[] = {1.0};
  const auto box = solve_box(one, 1.0, 1.0, 10);
  EXPECT_THROW(z_quantum(box, 0.001), TruncationError);
}

TEST(Ensemble, ClassicalSums) {
  EXPECT_NEAR(z_classical(Potential::box({1.0}), 1.0).value, std::sqrt(2 * pi), 1e-14);
  EXPECT_NEAR(z_classical(Potential::box({1.0, 2.0, 1.0}), 2.0).value,
              std::pow(pi, 1.5) * 2.0, 1e-12);
  const auto osc = z_classical(Potential::homogeneous(1, 2.0), 1.0);
  EXPECT_NEAR(osc.value, std::sqrt(2 * pi) * std::sqrt(pi), 1e-10);
  EXPECT_LT(osc.relative_error(), 1e-9);
  // Radial quadrature in three dimensions against the Gamma closed form.
  const double beta = 0.7, nu = 3.0;
  const double radial = std::tgamma(3.0 / nu) / (nu * std::pow(beta, 3.0 / nu));
  const double want = std::pow(2 * pi / beta, 1.5) * 4 * pi * radial;
  EXPECT_NEAR(z_classical(Potential::homogeneous(3, nu), beta).value, want, 1e-9 * want);
}

TEST(Ensemble, TabulatedClassicalSum) {
  std::vector<double> x, v;
  for (int i = -4000; i <= 4000; ++i) {
    x.push_back(i * 2e-3);
    v.push_back(x.back() * x.back());
  }
  const auto tab = Potential::tabulated(x, v);
  // Linear interpolation overestimates x^2 by up to dx^2 / 4.
  EXPECT_NEAR(z_classical(tab, 1.0).value, std::sqrt(2 * pi) * std::sqrt(pi), 1e-5);
}

TEST(Ensemble, MeanEnergies) {
  EXPECT_DOUBLE_EQ(mean_energy_quantum(Spectrum::finite({1.0, 1.0}), 3.0), 1.0);
  EXPECT_NEAR(mean_energy_quantum(Spectrum::finite({1.0, 2.0}), 1e-8), 1.5, 1e-7);
  EXPECT_NEAR(mean_energy_classical(Potential::box({1.0, 1.0, 1.0}), 2.0), 0.75, 1e-15);
  EXPECT_NEAR(mean_energy_classical(Potential::homogeneous(1, 2.0), 1.0), 1.0, 1e-10);
  EXPECT_NEAR(mean_energy_classical(Potential::homogeneous(2, 1e6), 1.0), 1.0, 1e-4);
}

TEST(Ensemble, MeanEnergyIsLogDerivative) {
  const auto box = Potential::box({1.0});
  const double beta = 0.01, step = 1e-5;
  const auto s = solve_for_beta(box, 1.0, beta * 0.5);
  const auto logz = [&](double b) { return z_quantum(s, b).log_value; };
  const double fd = -oracle::derivative(logz, beta, step);
  EXPECT_NEAR(mean_energy_quantum(s, beta) / fd, 1.0, 1e-6);
}

TEST(Ensemble, QuantumEntropy) {
  EXPECT_EQ(entropy_quantum(Spectrum::finite({1.0}), 5.0).value, 0.0);
  EXPECT_NEAR(entropy_quantum(Spectrum::finite({1.0, 2.0}), 1e-8).value, std::log(2.0), 1e-8);
  const std::vector<double> three{1.0, 2.0, 3.0};
  const auto s = entropy_quantum(Spectrum::finite(three), 1.0);
  EXPECT_NEAR(s.value, oracle::direct_entropy(three, 1.0), 1e-15);
  EXPECT_NEAR(s.value, 0.8324, 1e-4);
  double total = 0.0;
  for (double p : s.probabilities) {
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 1.0);
    total += p;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Ensemble, EntropyStaysFiniteDeepInTheQuantumRegime) {
  // exp(-beta (E_2 - E_1)) underflows; log S does not. With x = beta gap,
  // S = x e^-x / (1 + e^-x) + log(1 + e^-x) -> (x + 1) e^-x.
  const auto s = entropy_quantum(Spectrum::finite({1.0, 2.0}), 2000.0);
  EXPECT_EQ(s.value, 0.0);
  EXPECT_NEAR(s.log_value, std::log(2001.0) - 2000.0, 1e-9);
}

TEST(Ensemble, ClassicalEntropy) {
  const auto box = Potential::box({1.0});
  EXPECT_NEAR(entropy_classical(box, 1.0, 1.0), 0.5 + std::log(std::sqrt(2 * pi)) - std::log(2 * pi),
              1e-14);
  EXPECT_NEAR(entropy_classical(box, 1.0, 2.0) - entropy_classical(box, 1.0, 0.5),
              -std::log(4.0), 1e-14);
  EXPECT_NEAR(entropy_classical(Potential::homogeneous(1, 2.0), 1.0, 1.0),
              1.0 + std::log(std::sqrt(2 * pi) * std::sqrt(pi)) - std::log(2 * pi), 1e-9);
}

TEST(Ensemble, Psi) {
  const double five[] = {5.0};
  const auto single = psi(five, 2.0);
  EXPECT_NEAR(single.value, 0.0, 1e-15);
  EXPECT_EQ(single.derivative, 0.0);

  const double two[] = {1.0, 2.0};
  const double phi = std::exp(-1.0) + std::exp(-2.0);
  EXPECT_NEAR(psi(two, 1.0).derivative, -std::exp(-3.0) / (phi * phi), 1e-15);

  const double three[] = {1.0, 2.0, 3.0};
  const auto f = [&](double l) { return psi(three, l).value; };
  EXPECT_NEAR(psi(three, 0.7).derivative / oracle::derivative(f, 0.7, 1e-3), 1.0, 1e-7);
  EXPECT_THROW(psi(three, 0.0), ArgumentError);
}

TEST(Ensemble, ThermoPointIdentities) {
  for (const auto& pot : {Potential::box({1.0}), Potential::homogeneous(1, 2.0)}) {
    ThermoModel model(pot);
    const double betas[] = {0.05, 1.0, 8.0};
    const double hs[] = {0.3, 1.0, 3.0};
    model.prepare(betas, hs);
    for (double b : betas) {
      for (double h : hs) {
        const auto p = model.point(b, h, true);
        EXPECT_NEAR(p.s_quantum, b * p.e_quantum + p.z_quantum.log_value, 1e-10);
        EXPECT_NEAR(p.s_classical,
                    b * p.e_classical + std::log(p.z_classical.value) - std::log(2 * pi * h),
                    1e-10);
        double total = 0.0;
        for (double q : p.probabilities) total += q;
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
    EXPECT_THROW(model.point(1e-4, 1.0), ContractError);
  }
}

TEST(Ensemble, QuarticModelUsesOneBaseSpectrum) {
  ThermoModel model(Potential::homogeneous(1, 4.0));
  const double betas[] = {0.5, 2.0};
  const double hs[] = {0.5, 2.0};
  model.prepare(betas, hs);
  const double a = scaling_exponents(4.0).energy;
  const auto s1 = model.spectrum(0.5);
  const auto s2 = model.spectrum(2.0);
  EXPECT_NEAR(s2[0] / s1[0], std::pow(4.0, a), 1e-12);
}

TEST(Ensemble, TableJsonMirrorsCsv) {
  ThermoModel model(Potential::box({1.0}));
  const double betas[] = {1.0};
  const double hs[] = {1.0, 2.0};
  model.prepare(betas, hs);
  std::vector<TableRow> rows;
  for (double h : hs) rows.push_back({1.0, h, model.point(1.0, h), "ok"});
  std::ostringstream csv, json;
  write_table_csv(csv, rows);
  write_table_json(json, rows);
  const auto parsed = nlohmann::json::parse(json.str());
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "beta,h,Zq_scaled,Zc,Eq,Ec,Sq,Sc");
  std::size_t i = 0;
  const char* keys[] = {"beta", "h", "Zq_scaled", "Zc", "Eq", "Ec", "Sq", "Sc"};
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    for (const char* key : keys) {
      std::getline(cells, cell, ',');
      EXPECT_EQ(std::stod(cell), parsed[i][key].get<double>()) << key;
    }
    ++i;
  }
  EXPECT_EQ(i, 2u);
  EXPECT_NEAR(parsed[0]["Zc"].get<double>(), 2.50663, 1e-5);
}
