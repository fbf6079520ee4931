#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "uavroute/config.hpp"
#include "uavroute/dirichlet.hpp"
#include "uavroute/simplex.hpp"

namespace {

using namespace uavroute;
using V = std::vector<double>;

void expect_vec_near(const V& a, const V& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "index " << i;
}

TEST(Sparsemax, HandCases) {
  expect_vec_near(sparsemax(V{0.5, 0.5}), V{0.5, 0.5}, 1e-15);
  expect_vec_near(sparsemax(V{2.0, 0.0}), V{1.0, 0.0}, 1e-15);
  expect_vec_near(sparsemax(V{0.3, 0.2, 0.1}), V{0.4333333333333333, 0.3333333333333333,
                                                  0.2333333333333333},
                  1e-12);
  EXPECT_THROW(sparsemax(V{}), std::invalid_argument);
  EXPECT_THROW(sparsemax(V{1.0, std::nan("")}), std::invalid_argument);
}

TEST(Sparsemax, MatchesBruteForceProjection) {
  RandomStream rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(2, 9));
    V z(k);
    for (auto& x : z) x = rng.uniform(-3.0, 3.0);
    expect_vec_near(sparsemax(z), oracle::simplex_projection(z), 1e-9);
  }
}

TEST(Sparsemax, BackwardMatchesFiniteDifferences) {
  RandomStream rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    V z(6), w(6);
    for (auto& x : z) x = rng.uniform(-1.0, 1.0);
    for (auto& x : w) x = rng.uniform(-1.0, 1.0);
    const V p = sparsemax(z);
    const V g = sparsemax_backward(p, w);
    for (std::size_t i = 0; i < z.size(); ++i) {
      V zp = z, zm = z;
      zp[i] += 1e-6;
      zm[i] -= 1e-6;
      const V pp = sparsemax(zp), pm = sparsemax(zm);
      double fd = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) fd += w[j] * (pp[j] - pm[j]) / 2e-6;
      EXPECT_NEAR(g[i], fd, 1e-6);
    }
  }
}

TEST(ForwardingCount, Boundaries) {
  EXPECT_EQ(forwarding_count(300, 300, 8, 8), 1);
  EXPECT_EQ(forwarding_count(301, 300, 8, 8), 2);
  EXPECT_EQ(forwarding_count(5000, 300, 8, 8), 8);
  EXPECT_EQ(forwarding_count(5000, 300, 8, 3), 3);
  EXPECT_EQ(forwarding_count(0, 300, 8, 3), 0);
}

TEST(Resample, HandCases) {
  const auto r = resample(V{0.1, 0.5, 0.3, 0.1}, 1, 4);
  expect_vec_near(r.executed, V{0.1 / 0.6, 0.5 / 0.6, 0.0, 0.0}, 1e-12);
  EXPECT_EQ(r.selected, std::vector<int>{1});
  const V a{0.2, 0.5, 0.3, 0.0};
  expect_vec_near(resample(a, 3, 4).executed, a, 1e-15);
  expect_vec_near(resample(V{1.0, 0.0, 0.0}, 2, 3).executed, V{1.0, 0.0, 0.0}, 0.0);
  // Entries beyond the valid dimensions never survive.
  expect_vec_near(resample(V{0.2, 0.3, 0.5}, 2, 2).executed, V{0.4, 0.6, 0.0}, 1e-12);
}

TEST(Concentration, HandCases) {
  const SimplexParams p;
  expect_vec_near(build_concentration(V{1.0, 0.0, 0.0}, 3, p).alpha, V{30.5, 0.5, 0.5}, 1e-12);
  expect_vec_near(build_concentration(V{0.0, 0.0, 0.0}, 3, p).alpha, V{10.5, 10.5, 10.5}, 1e-12);
  const auto masked = build_concentration(V{0.3, 0.1, 0.9, 0.2, 0.4}, 2, p);
  for (int n = 2; n < 5; ++n) EXPECT_EQ(masked.alpha[n], 1e-8);
  EXPECT_THROW(build_concentration(V{0.0, 0.0}, 3, p), std::invalid_argument);
}

TEST(Concentration, BackwardMatchesFiniteDifferences) {
  const SimplexParams p;
  RandomStream rng(3);
  V beta(5), w(5);
  for (auto& x : beta) x = rng.uniform(-0.5, 0.5);
  for (auto& x : w) x = rng.uniform(-1.0, 1.0);
  const auto c = build_concentration(beta, 4, p);
  const V g = concentration_backward(c, w, p);
  for (std::size_t i = 0; i < beta.size(); ++i) {
    V bp = beta, bm = beta;
    bp[i] += 1e-6;
    bm[i] -= 1e-6;
    const auto ap = build_concentration(bp, 4, p).alpha, am = build_concentration(bm, 4, p).alpha;
    double fd = 0.0;
    for (std::size_t j = 0; j < 5; ++j) fd += w[j] * (ap[j] - am[j]) / 2e-6;
    EXPECT_NEAR(g[i], fd, 1e-5);
  }
}

TEST(Dirichlet, LogProbHandCases) {
  EXPECT_NEAR(dirichlet_log_prob(V{0.3, 0.7}, V{1.0, 1.0}), 0.0, 1e-15);
  EXPECT_NEAR(dirichlet_log_prob(V{0.5, 0.5}, V{2.0, 2.0}), std::log(6.0) + 2.0 * std::log(0.5),
              1e-12);
  EXPECT_NEAR(dirichlet_log_prob(V{0.5, 0.5}, V{2.0, 2.0}), 0.4055, 1e-4);
  EXPECT_THROW(dirichlet_log_prob(V{1.0, 0.0}, V{2.0, 2.0}), std::domain_error);
  RandomStream rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    V alpha(4), a(4);
    for (auto& x : alpha) x = rng.uniform(0.3, 20.0);
    a = sample_dirichlet(alpha, rng);
    EXPECT_NEAR(dirichlet_log_prob(a, alpha), oracle::dirichlet_log_density(a, alpha),
                1e-9 * (1.0 + std::abs(oracle::dirichlet_log_density(a, alpha))));
  }
}

TEST(Dirichlet, EntropyHandCases) {
  EXPECT_NEAR(dirichlet_entropy(V{1.0, 1.0}), 0.0, 1e-15);
  const SimplexParams base;
  const V beta{0.6, 0.3, 0.1};
  double previous = std::numeric_limits<double>::infinity();
  for (double rho : {1.0, 10.0, 30.0, 100.0}) {
    SimplexParams p = base;
    p.rho = rho;
    const double h = dirichlet_entropy(build_concentration(beta, 3, p).alpha);
    EXPECT_LT(h, previous);
    previous = h;
  }
}

TEST(Dirichlet, EntropyMatchesMonteCarlo) {
  const V alpha{2.0, 2.0};
  RandomStream rng(5);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lp = oracle::dirichlet_log_density(sample_dirichlet(alpha, rng), alpha);
    sum += -lp;
    sum_sq += lp * lp;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  EXPECT_NEAR(dirichlet_entropy(alpha), mean, 3.0 * se);
}

TEST(Dirichlet, SampleMoments) {
  RandomStream rng(6);
  const int n = 100000;
  for (const V& alpha : {V{1.0, 1.0, 1.0}, V{2.0, 1.0, 1.0}}) {
    V sum(3, 0.0), sum_sq(3, 0.0);
    for (int i = 0; i < n; ++i) {
      const V a = sample_dirichlet(alpha, rng);
      EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 1.0, 1e-12);
      for (int k = 0; k < 3; ++k) {
        sum[k] += a[k];
        sum_sq[k] += a[k] * a[k];
      }
    }
    const V mean = dirichlet_mean(alpha), var = dirichlet_variance(alpha);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(sum[k] / n, mean[k], 3.0 * std::sqrt(var[k] / n));
    }
  }
  EXPECT_NEAR(dirichlet_variance(V{2.0, 1.0, 1.0})[0], 0.05, 1e-15);
  expect_vec_near(dirichlet_mean(V{2.0, 1.0, 1.0}), V{0.5, 0.25, 0.25}, 1e-15);
}

TEST(Dirichlet, TinyConcentrationsStayInterior) {
  RandomStream rng(7);
  const V alpha{0.5, 1e-8, 1e-8, 0.5};
  for (int i = 0; i < 1000; ++i) {
    const V a = sample_dirichlet(alpha, rng);
    for (double x : a) EXPECT_GT(x, 0.0);
    EXPECT_TRUE(std::isfinite(dirichlet_log_prob(a, alpha)));
  }
}

TEST(Dirichlet, GradientsMatchFiniteDifferences) {
  const V a{0.5, 0.5};
  const V alpha{2.0, 2.0};
  const V g = dirichlet_log_prob_grad(a, alpha);
  for (std::size_t i = 0; i < 2; ++i) {
    V up = alpha, dn = alpha;
    up[i] += 1e-5;
    dn[i] -= 1e-5;
    const double fd = (dirichlet_log_prob(a, up) - dirichlet_log_prob(a, dn)) / 2e-5;
    EXPECT_NEAR(g[i], fd, 1e-6);
  }
  RandomStream rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    V al(5);
    for (auto& x : al) x = rng.uniform(0.3, 30.0);
    const V gh = dirichlet_entropy_grad(al);
    for (std::size_t i = 0; i < al.size(); ++i) {
      V up = al, dn = al;
      up[i] += 1e-5;
      dn[i] -= 1e-5;
      const double fd = (dirichlet_entropy(up) - dirichlet_entropy(dn)) / 2e-5;
      EXPECT_NEAR(gh[i], fd, 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST(Dirichlet, DensityIntegratesToOne) {
  RandomStream rng(9);
  for (int dims : {2, 3}) {
    V alpha(static_cast<std::size_t>(dims));
    for (auto& x : alpha) x = rng.uniform(1.0, 6.0);
    const double total = oracle::simplex_integral(dims, dims == 2 ? 20000 : 400, [&](const V& a) {
      return std::exp(dirichlet_log_prob(a, alpha));
    });
    EXPECT_NEAR(total, 1.0, 1e-3);
  }
}

TEST(Special, DigammaTrigamma) {
  EXPECT_NEAR(digamma(1.0), -0.5772156649015329, 1e-14);
  EXPECT_NEAR(trigamma(1.0), 1.6449340668482264, 1e-13);
  for (double x : {0.3, 1.7, 12.0}) {
    EXPECT_NEAR(digamma(x + 1.0) - digamma(x), 1.0 / x, 1e-12);
    EXPECT_NEAR((std::lgamma(x + 1e-5) - std::lgamma(x - 1e-5)) / 2e-5, digamma(x), 1e-7);
  }
}

}  // namespace
