#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "deprep/noise.hpp"

namespace {

using namespace deprep;

Mat random_pair_density(std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a(kPairDim, kPairDim);
  for (int i = 0; i < kPairDim; ++i)
    for (int j = 0; j < kPairDim; ++j) a(i, j) = cplx(gauss(rng), gauss(rng));
  Mat rho = a * a.adjoint();
  return rho / rho.trace().real();
}

TEST(NoiseParams, ValidationAndIdealness) {
  EXPECT_NO_THROW(validate(NoiseParams{0.5, 0.5}));
  EXPECT_THROW(validate(NoiseParams{1.5, 1.0}), std::domain_error);
  EXPECT_THROW(validate(NoiseParams{0.9, -0.1}), std::domain_error);
  EXPECT_TRUE(is_ideal(NoiseParams{1.0, 1.0}));
  EXPECT_FALSE(is_ideal(NoiseParams{0.99, 1.0}));
  EXPECT_FALSE(is_ideal(NoiseParams{1.0, 0.9}));
  NoiseParams defaults;
  EXPECT_DOUBLE_EQ(defaults.p1, 0.99);
  EXPECT_DOUBLE_EQ(defaults.eta, 1.0);
}

TEST(Povm, ElementsAreCompleteAndDiagonal) {
  for (double eta : {0.0, 0.3, 0.5, 0.8, 1.0}) {
    auto [p0, p1] = povm_elements(eta);
    EXPECT_NEAR((p0 + p1 - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(p0(0, 0).real(), eta);
    EXPECT_DOUBLE_EQ(p0(1, 1).real(), 1.0 - eta);
    EXPECT_DOUBLE_EQ(p1(0, 0).real(), 1.0 - eta);
    EXPECT_DOUBLE_EQ(p1(1, 1).real(), eta);
  }
  auto [h0, h1] = povm_elements(0.5);
  EXPECT_NEAR((h0 - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  EXPECT_NEAR((h1 - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
  EXPECT_THROW(povm_elements(1.2), std::domain_error);
}

TEST(Measurement, BalancedStateSplitsEvenly) {
  FullPairState s = embed(make_werner(0.8));
  auto [m0, m1] = noisy_measure(s, Dof::PolA, 1.0);
  EXPECT_NEAR(m0.probability, 0.5, 1e-12);
  EXPECT_NEAR(m1.probability, 0.5, 1e-12);
  EXPECT_EQ(m0.bit, 0);
  EXPECT_EQ(m1.bit, 1);
  ASSERT_TRUE(m0.post_state.has_value());
  EXPECT_NEAR(m0.post_state->matrix().trace().real(), 1.0, 1e-12);
}

TEST(Measurement, ProbabilitiesSumToOne) {
  std::mt19937 rng(4242);
  for (double eta : {0.0, 0.4, 0.9, 1.0}) {
    for (int trial = 0; trial < 5; ++trial) {
      FullPairState s{random_pair_density(rng)};
      for (Dof d : {Dof::PolA, Dof::BandA, Dof::PolB, Dof::BandB}) {
        auto [m0, m1] = noisy_measure(s, d, eta);
        EXPECT_NEAR(m0.probability + m1.probability, 1.0, 1e-12);
      }
    }
  }
}

TEST(Measurement, DefiniteStateReadsPerfectlyAtFullEfficiency) {
  Mat rho = Mat::Zero(kPairDim, kPairDim);
  rho(0, 0) = 1.0;  // photon a is H, so its polarization reads 0
  FullPairState s(rho);
  auto [m0, m1] = noisy_measure(s, Dof::PolA, 1.0);
  EXPECT_NEAR(m0.probability, 1.0, 1e-15);
  EXPECT_NEAR(m1.probability, 0.0, 1e-15);
  EXPECT_TRUE(m0.post_state.has_value());
  EXPECT_FALSE(m1.post_state.has_value());  // zero-mass branch carries no state
  auto [d0, d1] = noisy_measure(s, Dof::PolA, 0.9);
  EXPECT_NEAR(d0.probability, 0.9, 1e-15);
  EXPECT_NEAR(d1.probability, 0.1, 1e-15);
}

TEST(OneQubitOp, IdealReliabilityIsExactConjugation) {
  std::mt19937 rng(77);
  FullPairState s{random_pair_density(rng)};
  for (Dof d : {Dof::PolA, Dof::BandB}) {
    FullPairState out = noisy_one_qubit_op(s, pauli_x(), d, 1.0);
    Mat expected = conjugate_qubit(s.matrix(), pauli_x(), static_cast<int>(d));
    EXPECT_NEAR((out.matrix() - expected).cwiseAbs().maxCoeff(), 0.0, 1e-12);
  }
}

TEST(OneQubitOp, PartialReliabilityMixesInDepolarization) {
  Mat rho = Mat::Zero(kPairDim, kPairDim);
  rho(0, 0) = 1.0;
  FullPairState s(rho);
  FullPairState out = noisy_one_qubit_op(s, Eigen::Matrix2cd::Identity(), Dof::PolA, 0.99);
  // The identity plate leaves the diagonal except for the depolarized share:
  // 0.99 + 0.01/2 on the original index, 0.01/2 on the flipped one.
  EXPECT_NEAR(out.matrix()(0, 0).real(), 0.995, 1e-15);
  EXPECT_NEAR(out.matrix()(8, 8).real(), 0.005, 1e-15);
}

TEST(OneQubitOp, TracePreservingAndPositive) {
  std::mt19937 rng(78);
  for (double p1 : {0.0, 0.37, 0.8, 1.0}) {
    FullPairState s{random_pair_density(rng)};
    FullPairState out = noisy_one_qubit_op(s, pauli_y(), Dof::PolB, p1);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat> es(out.matrix(), Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(OneQubitOp, ZeroReliabilityFullyMixesTarget) {
  Mat rho = Mat::Zero(kPairDim, kPairDim);
  rho(0, 0) = 1.0;
  FullPairState out = noisy_one_qubit_op(FullPairState(rho), pauli_x(), Dof::PolA, 0.0);
  EXPECT_NEAR(out.matrix()(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(out.matrix()(8, 8).real(), 0.5, 1e-15);
}

TEST(Transmission, ChannelProducesUniformErrorMixture) {
  PairEnsemble e = transmit(0.93);
  PairEnsemble w = make_werner(0.93);
  for (DepState s : kAllDepStates) EXPECT_DOUBLE_EQ(e.weight(s), w.weight(s));
}

TEST(Transmission, AttenuationFidelityLimits) {
  EXPECT_DOUBLE_EQ(attenuation_fidelity(0.0, 10.0), 1.0);
  EXPECT_NEAR(attenuation_fidelity(1e6, 10.0), 0.125, 1e-12);
  EXPECT_NEAR(attenuation_fidelity(10.0, 10.0), (1.0 + 7.0 / std::exp(1.0)) / 8.0, 1e-15);
  EXPECT_GT(attenuation_fidelity(5.0, 10.0), attenuation_fidelity(6.0, 10.0));
  EXPECT_THROW(attenuation_fidelity(-1.0, 10.0), std::domain_error);
  EXPECT_THROW(attenuation_fidelity(1.0, 0.0), std::domain_error);
}

}  // namespace
