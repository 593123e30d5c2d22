#include <cmath>

#include <gtest/gtest.h>

#include "deprep/repeater.hpp"

namespace {

using namespace deprep;

PairEnsemble pure_ensemble(DepState s) {
  std::array<double, kBasisCount> w{};
  w[static_cast<int>(s)] = 1.0;
  return PairEnsemble(w, 0.0);
}

TEST(SwapLinks, PureLabelsComposeByXor) {
  PairEnsemble out = swap_links(pure_ensemble(DepState::PhiMinus), pure_ensemble(DepState::PsiPlus));
  EXPECT_DOUBLE_EQ(out.weight(DepState::PsiMinus), 1.0);
  EXPECT_DOUBLE_EQ(out.junk(), 0.0);
}

TEST(SwapLinks, WernerFidelityLaw) {
  for (double f : {0.3, 0.7, 0.95}) {
    for (double g : {0.5, 0.9}) {
      PairEnsemble out = swap_links(make_werner(f), make_werner(g));
      EXPECT_NEAR(fidelity(out), f * g + (1.0 - f) * (1.0 - g) / 7.0, 1e-15);
    }
  }
}

TEST(SwapLinks, JunkComposes) {
  std::array<double, kBasisCount> w1{};
  std::array<double, kBasisCount> w2{};
  w1.fill(0.9 / 8.0);
  w2.fill(0.8 / 8.0);
  PairEnsemble out = swap_links(PairEnsemble(w1, 0.1), PairEnsemble(w2, 0.2));
  EXPECT_NEAR(out.junk(), 1.0 - 0.9 * 0.8, 1e-15);
}

TEST(Chain, SingleSegmentIsPassThrough) {
  ChainReport r = run_repeater(ChainConfig{1, 0.9, 0, NoiseParams{}, ChainMode::Analytic});
  EXPECT_EQ(r.levels, 0);
  EXPECT_EQ(r.final_fidelity, 0.9);
  EXPECT_EQ(r.expected_cost, 1.0);
  EXPECT_TRUE(r.per_level_fidelity.empty());
}

TEST(Chain, TwoSegmentsWithoutPurification) {
  ChainReport r = run_repeater(ChainConfig{2, 0.95, 0, NoiseParams{}, ChainMode::Analytic});
  EXPECT_EQ(r.levels, 1);
  EXPECT_NEAR(r.final_fidelity, 0.95 * 0.95 + 0.05 * 0.05 / 7.0, 1e-15);
  EXPECT_EQ(r.expected_cost, 2.0);
  ASSERT_EQ(r.per_level_fidelity.size(), 1u);
  EXPECT_EQ(r.per_level_fidelity[0], r.final_fidelity);
}

TEST(Chain, FoldMatchesReferenceRecursion) {
  NoiseParams noise{0.99, 1.0};
  ChainReport r = run_repeater(ChainConfig{8, 0.96, 1, noise, ChainMode::Analytic});
  double f = 0.96;
  double cost = 1.0;
  for (int level = 0; level < 3; ++level) {
    f = f * f + (1.0 - f) * (1.0 - f) / 7.0;
    cost *= 2.0;
    RoundResult rr = noisy_round(f, noise);
    f = rr.f_out;
    cost *= 2.0 / rr.p_succ;
  }
  EXPECT_EQ(r.levels, 3);
  EXPECT_NEAR(r.final_fidelity, f, 1e-12);
  EXPECT_NEAR(r.expected_cost, cost, 1e-9 * cost);
  EXPECT_NEAR(r.final_fidelity, 0.9955361726127898, 1e-12);
  EXPECT_NEAR(r.expected_cost, 71.259, 1e-3);
}

TEST(Chain, OracleModeStaysCloseToAnalyticFold) {
  NoiseParams noise{0.99, 1.0};
  ChainReport analytic = run_repeater(ChainConfig{8, 0.96, 1, noise, ChainMode::Analytic});
  ChainReport oracle = run_repeater(ChainConfig{8, 0.96, 1, noise, ChainMode::Oracle});
  EXPECT_NEAR(oracle.final_fidelity, 0.9887339302378171, 1e-8);
  EXPECT_LT(std::abs(analytic.final_fidelity - oracle.final_fidelity), 0.05);
}

TEST(Chain, ModesAgreeAtIdealNoise) {
  for (int segments : {2, 4}) {
    for (int rounds : {0, 1}) {
      ChainConfig base{segments, 0.9, rounds, NoiseParams{1.0, 1.0}, ChainMode::Analytic};
      ChainConfig orc = base;
      orc.mode = ChainMode::Oracle;
      ChainReport a = run_repeater(base);
      ChainReport b = run_repeater(orc);
      EXPECT_LT(std::abs(a.final_fidelity - b.final_fidelity), 1e-9)
          << "segments=" << segments << " rounds=" << rounds;
    }
  }
}

TEST(Chain, PurificationRecoversWhatSwappingLoses) {
  ChainReport bare = run_repeater(ChainConfig{16, 0.96, 0, NoiseParams{0.99, 1.0}, ChainMode::Analytic});
  ChainReport repaired =
      run_repeater(ChainConfig{16, 0.96, 1, NoiseParams{0.99, 1.0}, ChainMode::Analytic});
  EXPECT_NEAR(bare.final_fidelity, 0.5388689187235536, 1e-12);
  EXPECT_GT(repaired.final_fidelity - bare.final_fidelity, 0.45);
  EXPECT_GT(repaired.expected_cost, bare.expected_cost);
}

TEST(Chain, TwoRoundsKeepFidelityAboveSeed) {
  ChainReport r = run_repeater(ChainConfig{16, 0.96, 2, NoiseParams{0.99, 1.0}, ChainMode::Analytic});
  EXPECT_GE(r.final_fidelity, 0.96);
  EXPECT_LE(r.final_fidelity, 1.0);
  for (double level_f : r.per_level_fidelity) EXPECT_GE(level_f, 0.96);
}

TEST(Chain, CollapseRaisesStructuredError) {
  // p1 = 1, eta = 0.6 has purification threshold exactly 0.09; the misread
  // joint measurement drags two 0.3 links well below that.
  ChainConfig cfg{2, 0.3, 1, NoiseParams{1.0, 0.6}, ChainMode::Oracle};
  try {
    run_repeater(cfg);
    FAIL() << "expected ChainCollapseError";
  } catch (const ChainCollapseError& e) {
    EXPECT_EQ(e.level(), 1);
    EXPECT_NEAR(e.fidelity(), 0.065664, 1e-4);
    EXPECT_LT(e.fidelity(), 0.09 - 0.02);
    EXPECT_NE(std::string(e.what()).find("at or below the purification threshold"),
              std::string::npos);
  }
}

TEST(Chain, UnpurifiableNoisePropagates) {
  ChainConfig cfg{2, 0.95, 1, NoiseParams{0.5, 0.5}, ChainMode::Analytic};
  EXPECT_THROW(run_repeater(cfg), NoImprovingRegionError);
}

TEST(Chain, RejectsInvalidConfigurations) {
  EXPECT_THROW(run_repeater(ChainConfig{0, 0.9, 0, NoiseParams{}, ChainMode::Analytic}),
               std::invalid_argument);
  EXPECT_THROW(run_repeater(ChainConfig{3, 0.9, 0, NoiseParams{}, ChainMode::Analytic}),
               std::invalid_argument);
  EXPECT_THROW(run_repeater(ChainConfig{16, 0.9, 0, NoiseParams{}, ChainMode::Oracle}),
               std::invalid_argument);
  EXPECT_THROW(run_repeater(ChainConfig{2, 0.9, -1, NoiseParams{}, ChainMode::Analytic}),
               std::invalid_argument);
  EXPECT_THROW(run_repeater(ChainConfig{2, 1.5, 0, NoiseParams{}, ChainMode::Analytic}),
               std::domain_error);
}

TEST(Chain, CostCountsElementaryPairs) {
  ChainReport plain = run_repeater(ChainConfig{4, 0.9, 0, NoiseParams{}, ChainMode::Analytic});
  EXPECT_EQ(plain.expected_cost, 4.0);
  EXPECT_EQ(plain.levels, 2);
  ASSERT_EQ(plain.per_level_fidelity.size(), 2u);
  ChainReport purified =
      run_repeater(ChainConfig{4, 0.9, 1, NoiseParams{0.99, 1.0}, ChainMode::Analytic});
  EXPECT_GT(purified.expected_cost, 4.0);
}

TEST(DecayScan, MatchesAffineClosedForm) {
  auto points = decay_scan(16, 0.95);
  ASSERT_EQ(points.size(), 16u);
  EXPECT_EQ(points.front().first, 1);
  EXPECT_EQ(points.front().second, 0.95);
  double k = (8.0 * 0.95 - 1.0) / 7.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    EXPECT_EQ(points[i].first, static_cast<int>(i) + 1);
    double closed = 0.125 + (0.95 - 0.125) * std::pow(k, static_cast<double>(i));
    EXPECT_NEAR(points[i].second, closed, 1e-12);
    if (i > 0) EXPECT_LT(points[i].second, points[i - 1].second);
  }
  double slope = std::log(points[15].second - 0.125) - std::log(points[0].second - 0.125);
  EXPECT_NEAR(slope, 15.0 * std::log(k), 1e-6);
}

TEST(DecayScan, FixedPointsAreExact) {
  for (auto& [n, f] : decay_scan(16, 1.0)) EXPECT_EQ(f, 1.0) << n;
  for (auto& [n, f] : decay_scan(16, 0.125)) EXPECT_EQ(f, 0.125) << n;
  EXPECT_THROW(decay_scan(1, 0.95), std::invalid_argument);
}

}  // namespace
