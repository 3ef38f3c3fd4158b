#include "grassfq/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace grassfq;

namespace {

QRational Q(long n, long d = 1) { return QRational(n, d); }
const FieldSpec F2 = FieldSpec::make(2);

}  // namespace

TEST(Hahn, OperatorEdges) {
  for (long n = 1; n <= 5; ++n) {
    const TridiagonalOperator op = hahn_operator(n, 2);
    EXPECT_EQ(op.up(n), 0);
    EXPECT_EQ(op.down(0), 0);
    const std::vector<QRational> one(static_cast<std::size_t>(n) + 1, QRational(1));
    for (long k = 0; k <= n; ++k) EXPECT_EQ(op.apply(one, k), 0);
  }
}

TEST(Hahn, IdentityHoldsExactly) {
  for (std::int64_t q : {2, 3})
    for (long n = 1; n <= 6; ++n)
      for (long j = 0; j <= n; ++j) EXPECT_TRUE(all_zero(hahn_eigencheck(j, n, q))) << "q=" << q << " n=" << n << " j=" << j;
  EXPECT_EQ(hahn_eigenvalue(0, 3, 2), 0);
}

TEST(Hahn, AltIdentityFailsForPositiveJ) {
  // Birth-death generators have nonpositive spectrum, so the positive
  // eigenvalue cannot occur for j >= 1.
  for (std::int64_t q : {2, 3})
    for (long n = 1; n <= 4; ++n) {
      EXPECT_TRUE(all_zero(hahn_eigencheck_alt(0, n, q)));
      for (long j = 1; j <= n; ++j) EXPECT_FALSE(all_zero(hahn_eigencheck_alt(j, n, q)));
    }
}

TEST(Delta, Coefficients) {
  const TridiagonalOperator d = delta_operator(2);
  EXPECT_EQ(d.down(0), 0);
  EXPECT_EQ(d.stay(0), Q(1, 2));
  EXPECT_EQ(d.up(0), Q(1, 2));
  EXPECT_EQ(d.down(1), Q(1, 4));
  EXPECT_EQ(d.stay(1), Q(5, 8));
  EXPECT_EQ(d.up(1), Q(1, 8));
  for (std::int64_t q : {2, 3, 4, 5})
    for (long k = 0; k < 30; ++k) {
      const TridiagonalOperator dq = delta_operator(q);
      EXPECT_EQ(dq.down(k) + dq.stay(k) + dq.up(k), 1);
    }
}

TEST(Delta, AlSalamCarlitzEigenfunctions) {
  for (std::int64_t q : {2, 3, 4})
    for (long j = 0; j <= 8; ++j) EXPECT_TRUE(all_zero(asc_eigencheck(j, q, 30))) << "q=" << q << " j=" << j;
  // j = 1, q = 2, k = 0: stay(0)·(-1) + up(0)·0 = -1/2 = q^{-1} V_1(0).
  EXPECT_EQ(asc_eigencheck(1, 2, 1).at(0), 0);
}

TEST(Delta, DetailedBalance) {
  for (std::int64_t q : {2, 3, 4}) EXPECT_TRUE(detailed_balance_check(q, 30));
  EXPECT_EQ(orbit_weight(0, 2) * delta_operator(2).up(0), Q(1, 2));
  // An up-coefficient q^{-2k+1} would break detailed balance already at k = 0.
  EXPECT_NE(orbit_weight(0, 2) * qpow(2, 1), orbit_weight(1, 2) * delta_operator(2).down(1));
}

TEST(Delta, ApproximateOrthogonality) {
  const std::int64_t q = 2;
  std::vector<std::vector<double>> v(7);
  std::vector<double> w;
  for (long k = 0; k <= 60; ++k) w.push_back(to_double(orbit_weight(k, q)));
  for (long j = 0; j <= 6; ++j)
    for (long k = 0; k <= 60; ++k) v[j].push_back(to_double(alsalam_carlitz2(j, k, q)));
  auto dot = [&](std::size_t a, std::size_t b) {
    double s = 0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * v[a][k] * v[b][k];
    return s;
  };
  for (std::size_t i = 0; i <= 6; ++i)
    for (std::size_t j = i + 1; j <= 6; ++j)
      EXPECT_LE(std::abs(dot(i, j)), 1e-8 * std::sqrt(dot(i, i) * dot(j, j))) << i << "," << j;
}

TEST(Jumps, MatchesEnumerationOracle) {
  // Values from an independent enumeration over all (K, M) pairs.
  const JumpProbabilities a = jump_probabilities_bruteforce(3, 0, F2);
  EXPECT_EQ(a.down, 0);
  EXPECT_EQ(a.stay, Q(8, 15));
  EXPECT_EQ(a.up, Q(7, 15));
  const JumpProbabilities b = jump_probabilities_bruteforce(3, 1, F2);
  EXPECT_EQ(b.down, Q(32, 105));
  EXPECT_EQ(b.stay, Q(64, 105));
  EXPECT_EQ(b.up, Q(3, 35));
  const JumpProbabilities c = jump_probabilities_bruteforce(4, 2, F2);
  EXPECT_EQ(c.down, Q(96, 155));
  EXPECT_EQ(c.stay, Q(56, 155));
  EXPECT_EQ(c.up, Q(3, 155));
}

TEST(Jumps, StochasticAndConvergent) {
  for (std::size_t k = 0; k <= 2; ++k) {
    double prev = 1e9;
    for (std::size_t n = 3; n <= 5; ++n) {
      const JumpProbabilities jp = jump_probabilities_bruteforce(n, k, F2);
      EXPECT_EQ(jp.down + jp.stay + jp.up, 1);
      const JumpProbabilities lim = jump_limits(static_cast<long>(k), 2);
      const double dev = std::max({std::abs(to_double(jp.down - lim.down)), std::abs(to_double(jp.stay - lim.stay)),
                                   std::abs(to_double(jp.up - lim.up))});
      EXPECT_LT(dev, prev);
      prev = dev;
    }
    EXPECT_LT(prev, 0.1);
  }
  const JumpProbabilities k1 = jump_probabilities_bruteforce(4, 1, F2);
  EXPECT_LT(std::abs(to_double(k1.down) - 0.25), 0.1);
  EXPECT_THROW(jump_probabilities_bruteforce(2, 3, F2), error);
}

TEST(Walk, DeterministicAndStationary) {
  Rng a(7), b(7);
  EXPECT_EQ(markov_walk(2, 0, 1000, a), markov_walk(2, 0, 1000, b));
  Rng rng(3);
  const auto path = markov_walk(2, 0, 200000, rng);
  std::vector<double> freq(8, 0);
  for (auto k : path)
    if (k < 8) freq[k] += 1.0 / static_cast<double>(path.size());
  const double total = total_mass_float(2);
  for (long k = 0; k <= 3; ++k) EXPECT_NEAR(freq[static_cast<std::size_t>(k)], to_double(orbit_weight(k, 2)) / total, 0.02);
}

TEST(MonteCarlo, SmallCase) {
  Rng rng(1);
  const auto bins = mc_orbit_distribution(1, F2, 30000, rng);
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins[0].exact, Q(2, 3));
  EXPECT_EQ(bins[1].exact, Q(1, 3));
  for (const auto& b : bins) EXPECT_LE(std::abs(b.freq - to_double(b.exact)), 3 * b.se);
}

TEST(Averaging, StochasticTridiagonal) {
  const AveragingReport r = finite_averaging_matrix(3, F2);
  for (const auto& row : r.matrix) {
    QRational s = 0;
    for (const auto& x : row) s += x;
    EXPECT_EQ(s, 1);
  }
  EXPECT_EQ(evaluate(r.charpoly, QRational(1)), 0);
  ASSERT_EQ(r.eigenvalues.size(), 4u);
  EXPECT_NEAR(r.eigenvalues[0], 1.0, 1e-12);
  for (double ev : r.eigenvalues) EXPECT_LT(std::abs(to_double(evaluate(r.charpoly, QRational(ev)))), 1e-9);
  EXPECT_THROW(finite_averaging_matrix(7, F2), error);
  EXPECT_THROW(finite_averaging_matrix(5, FieldSpec::make(3)), error);
  EXPECT_NO_THROW(finite_averaging_matrix(4, FieldSpec::make(3)));
}
