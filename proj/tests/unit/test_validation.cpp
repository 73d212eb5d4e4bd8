#include <cmath>

#include <gtest/gtest.h>

#include "covertnet/channel.hpp"
#include "covertnet/validation.hpp"
#include "oracles.hpp"

using namespace covertnet;

TEST(TvQuadrature, AgreesWithIndependentOracleAndClosedForm) {
  for (double x : {0.0, 1e-6, 1e-3, 0.01, 0.3, 1.0, 4.0, 10.0}) {
    const double q = tv_gaussian_quadrature(x, 1.0);
    EXPECT_NEAR(q, oracle::tv_integral(x, 1.0), 1e-8 * (x + 1e-6)) << x;
    EXPECT_NEAR(q, tv_gaussian(x, 1.0), 1e-9 * (x + 1e-6)) << x;
  }
  EXPECT_NEAR(tv_gaussian_quadrature(2.0, 2.0), tv_gaussian_quadrature(1.0, 1.0), 1e-12);
}

TEST(Checks, CovertnessMathSuites) {
  EXPECT_TRUE(check_log_sandwich(10000).passed);
  EXPECT_TRUE(check_pinsker(50).passed);
  EXPECT_TRUE(check_window_chain(1000, 3).passed);
  EXPECT_TRUE(check_theory_oracles().passed);
}

TEST(Checks, DistanceLawsReportEveryN) {
  const CheckResult r = check_distance_laws(NetworkConfig{}, {500, 1000}, 20, 0.05, 1);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_NE(r.detail.find("n=500"), std::string::npos);
  EXPECT_NE(r.detail.find("n=1000"), std::string::npos);
  EXPECT_FALSE(check_distance_laws(NetworkConfig{}, {100}, 5, 1e-6, 1).passed);
}

TEST(RingRatios, OrderedAndStable) {
  const auto ratios = ring_ratios(NetworkConfig{}, {256, 512, 1024, 2048}, 20, 2);
  ASSERT_EQ(ratios.size(), 4u);
  for (const RingRatio& k : ratios) {
    EXPECT_GT(k.k_lo, 0.0);
    EXPECT_LE(k.k_lo, k.k_hi);
  }
  EXPECT_TRUE(check_ring_sandwich(NetworkConfig{}, {256, 512, 1024, 2048}, 20, 1).passed);
}

TEST(RingRatios, DenseWardensNotApplicable) {
  NetworkConfig c;
  c.s = 1.5;
  const CheckResult r = check_ring_sandwich(c, {256, 512, 1024, 2048}, 5, 1);
  EXPECT_TRUE(r.passed);
  EXPECT_NE(r.detail.find("not applicable"), std::string::npos);
}

TEST(RunValidation, QuickSuitePassesOnDefaults) {
  ValidationOptions opt;
  opt.quick = true;
  for (const CheckResult& r : run_validation(NetworkConfig{}, opt)) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
}
