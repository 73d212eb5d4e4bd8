#include <cmath>

#include <gtest/gtest.h>

#include "covertnet/config.hpp"
#include "covertnet/errors.hpp"

using namespace covertnet;

TEST(NetworkConfig, DefaultsAreValid) { EXPECT_NO_THROW(NetworkConfig{}.validate()); }

TEST(NetworkConfig, RejectsInvariantViolations) {
  auto bad = [](auto mutate) {
    NetworkConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](NetworkConfig& c) { c.n = 1; }).validate(), ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) { c.theta = 0.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) { c.theta = 1.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) { c.delta = 0.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) { c.l = 0.5; }).validate(), ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) { c.alpha = 2.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) { c.s = 0.0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) { c.lambda = -0.1; }).validate(), ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) {
                 c.n = 10;
                 c.theta = 0.01;
               }).validate(),
               ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) {
                 c.power_rule = PowerRule::kSparseFormula;
                 c.s = 1.0;
               }).validate(),
               ConfigError);
  EXPECT_THROW(bad([](NetworkConfig& c) {
                 c.power_rule = PowerRule::kDenseFormula;
                 c.s = 0.5;
               }).validate(),
               ConfigError);
}

TEST(NetworkConfig, DerivedQuantities) {
  NetworkConfig c;
  c.n = 10000;
  c.s = 0.5;
  c.c_w = 1.0;
  EXPECT_EQ(c.warden_count(), 100);
  c.s = 0.01;
  c.c_w = 0.1;
  EXPECT_EQ(c.warden_count(), 1);  // floor of one warden
  c.s = 0.5;
  c.c_p = 0.2;
  c.eps_p = 0.02;
  EXPECT_NEAR(c.preservation_radius(), 0.2 * std::pow(1e4, -0.27), 1e-15);
  EXPECT_DOUBLE_EQ(c.window_length(), 1.0);
  c.lambda = 1.0;
  EXPECT_NEAR(c.window_length(), 1e4, 1e-9);
  c.theta = 0.25;
  EXPECT_EQ(c.sender_count(), 2500);
}

TEST(NetworkConfig, EnumRoundTrip) {
  for (Centric c : {Centric::kSender, Centric::kReceiver}) EXPECT_EQ(parse_centric(to_string(c)), c);
  for (PowerRule r : {PowerRule::kSparseFormula, PowerRule::kDenseFormula, PowerRule::kCalibrated,
                      PowerRule::kConstant}) {
    EXPECT_EQ(parse_power_rule(to_string(r)), r);
  }
  for (LedgerMode m : {LedgerMode::kFluid, LedgerMode::kPacketBuffer}) EXPECT_EQ(parse_ledger_mode(to_string(m)), m);
  EXPECT_THROW(parse_centric("both"), ConfigError);
  EXPECT_THROW(parse_power_rule("max"), ConfigError);
  EXPECT_THROW(parse_ledger_mode("queue"), ConfigError);
}
