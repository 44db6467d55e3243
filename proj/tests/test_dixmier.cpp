// Dixmier averages, counting functions and the min-max inequalities.

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "regtrace/dixmier.hpp"

using namespace regtrace;
constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286061;

TEST(Dixmier, HarmonicPartialSums) {
  // H_N = log N + gamma + 1/(2N) - 1/(12 N^2) + 1/(120 N^4)
  const std::size_t N = std::size_t{1} << 14;
  const auto d = alpha_sums(EigenSequence::harmonic(), N);
  const double n = static_cast<double>(N);
  const double H = std::log(n) + euler_gamma + 0.5 / n - 1.0 / (12 * n * n) + 1.0 / (120 * n * n * n * n);
  EXPECT_NEAR(d.partial_sum.back(), H, 1e-13);
  EXPECT_NEAR(d.alpha.back(), H / std::log(n + 1.0), 1e-14);
  EXPECT_EQ(d.n.front(), 1024u);
  EXPECT_EQ(d.n.back(), N);
}

TEST(Dixmier, HarmonicLimitIsOne) {
  const auto e = dixmier_estimate(alpha_sums(EigenSequence::harmonic(), std::size_t{1} << 20));
  EXPECT_NEAR(e.value, 1.0, 1e-3);
  EXPECT_TRUE(e.converged);
  // raw: (log N + gamma)/log(N+1) is about 4% high at N = 2^20
  EXPECT_GT(e.raw, 1.03);
}

TEST(Dixmier, TraceClassSequenceHasZeroTrace) {
  const auto e = dixmier_estimate(alpha_sums(EigenSequence::power(2.0), std::size_t{1} << 18));
  // sum j^{-2} = pi^2/6, so alpha_N -> 0 like 1/log N
  EXPECT_NEAR(alpha_sums(EigenSequence::power(2.0), 1 << 18).partial_sum.back(), pi * pi / 6.0, 1e-5);
  EXPECT_NEAR(e.value, 0.0, 1e-2);
}

TEST(Dixmier, PlateauSequenceDoesNotConverge) {
  const auto e = dixmier_estimate(alpha_sums(EigenSequence::plateau(), std::size_t{1} << 22));
  EXPECT_FALSE(e.converged);
  EXPECT_GT(e.dispersion, 1e-3);
}

TEST(Dixmier, Validation) {
  EXPECT_THROW(alpha_sums(EigenSequence::harmonic(), 100), ValidationError);
  std::vector<double> up(2048);
  for (std::size_t i = 0; i < up.size(); ++i) up[i] = 1.0 + static_cast<double>(i);
  EXPECT_THROW(alpha_sums(EigenSequence::explicit_sequence(up), 2048), ValidationError);
  EXPECT_THROW(EigenSequence::harmonic().first(kMaxSequenceLength + 1), ValidationError);
}

TEST(Counting, ClosedForms) {
  EXPECT_EQ(counting_function(EigenSequence::harmonic(), 10.5), 10);
  EXPECT_EQ(counting_function(EigenSequence::power(2.0), 100.0), 10);
  // circle of radius 1, mu = 1/|k|: |k| <= 3 gives 6 nonzero modes
  EXPECT_EQ(counting_function(EigenSequence::of_model(SpectralModel::circle(1.0)), 3.0), 6);
  std::vector<double> v = {1.0, 0.5, 0.5, 0.25};
  EXPECT_EQ(counting_function(EigenSequence::explicit_sequence(v), 2.0), 3);
}

TEST(Ikehara, CircleLimit) {
  const auto r = ikehara_check(EigenSequence::of_model(SpectralModel::circle(1.0)), 1e6);
  EXPECT_NEAR(r.L_from_counting, 2.0, 0.02);
  EXPECT_NEAR(r.L_from_zeta, 2.0, 0.02);
  EXPECT_NEAR(zeta_of_counting(EigenSequence::of_model(SpectralModel::circle(1.0)), 2.0), pi * pi / 3.0, 1e-9);
}

TEST(Hersch, RandomPositivePairs) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    Eigen::MatrixXd X(n, n), Y(n, n);
    for (int i = 0; i < n * n; ++i) X.data()[i] = g(rng), Y.data()[i] = g(rng);
    const auto r = hersch_check(X * X.transpose(), Y * Y.transpose());
    EXPECT_TRUE(r.holds) << r.worst_violation;
  }
  // commuting diagonal pair with aligned eigenvectors: left inequality is an equality
  Eigen::MatrixXd A = Eigen::Vector3d(3, 2, 1).asDiagonal(), B = Eigen::Vector3d(1, 0.5, 0.2).asDiagonal();
  EXPECT_TRUE(hersch_check(A, B).left_equality);
  EXPECT_THROW(hersch_check(A, Eigen::MatrixXd::Identity(2, 2)), ValidationError);
}
