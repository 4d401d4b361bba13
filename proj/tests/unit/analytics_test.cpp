#include <cmath>

#include <gtest/gtest.h>

#include "qnet/qnet.hpp"

using namespace qnet;

TEST(SingleExchange, Fidelity) {
  EXPECT_DOUBLE_EQ(st_fidelity_2(1.0).value, 1.0);
  EXPECT_DOUBLE_EQ(st_fidelity_2(0.0).value, 0.25);
  EXPECT_NEAR(st_fidelity_2(0.81).value, 0.25 * 1.9 * 1.9, 1e-12);
  EXPECT_NEAR(st_fidelity_2(0.81).value, 0.9025, 1e-12);
  EXPECT_FALSE(st_fidelity_2(0.5).is_proportional);
  EXPECT_THROW(st_fidelity_2(1.5), RangeError);
}

TEST(SingleExchange, FidelityMonotoneInEta) {
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double f = st_fidelity_2(i / 100.0).value;
    EXPECT_GT(f, prev);
    prev = f;
  }
}

TEST(SingleExchange, Rate) {
  SchemeParams p;
  EXPECT_DOUBLE_EQ(st_rate_2(p).value, 1.0);
  EXPECT_TRUE(st_rate_2(p).is_proportional);
  p.eta_ent = 0.0;
  EXPECT_DOUBLE_EQ(st_rate_2(p).value, 0.0);
  p.eta_p = 0.5;
  p.eta_out = 0.9;
  p.eta_net = 0.8;
  p.eta_ent = 0.02;
  p.eta_det = 0.5;
  EXPECT_NEAR(st_rate_2(p).value, 0.5 * 0.9 * 0.8 * 0.02 * 0.5, 1e-15);
  EXPECT_NEAR(st_rate_2(p).value, 0.0036, 1e-12);
}

TEST(SingleExchange, NNode) {
  SchemeParams p;
  const auto r = st_n_node(p, 3);
  EXPECT_NEAR(fidelity(r.state, dicke_state(1, 3)), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.fidelity.value, 1.0);
  p.eta_a0an = 0.5;
  EXPECT_DOUBLE_EQ(st_n_node(p, 7).fidelity.value, 0.5);
  EXPECT_TRUE(st_n_node(p, 7).fidelity.is_proportional);
}

TEST(ParamValidation, NamesTheField) {
  SchemeParams p;
  p.eta_c = -0.1;
  try {
    p.validate();
    FAIL();
  } catch (const RangeError& e) {
    EXPECT_NE(std::string(e.what()).find("eta_c"), std::string::npos);
  }
}

TEST(Itinerant, ClosedForm) {
  EXPECT_DOUBLE_EQ(itinerant_fidelity_2(1.0), 1.0);
  EXPECT_NEAR(itinerant_fidelity_2(0.75), 0.5, 1e-15);
  EXPECT_NEAR(itinerant_fidelity_2(5.0 / 6.0), 2.0 / 3.0, 1e-12);
  EXPECT_THROW(itinerant_fidelity_2(0.4), RangeError);
}

TEST(Itinerant, Success) {
  EXPECT_DOUBLE_EQ(itinerant_success(3, 1, 1, 1).value, 1.0);
  EXPECT_DOUBLE_EQ(itinerant_success(2, 0.5, 1, 1).value, 0.5);
  EXPECT_NEAR(itinerant_success(4, 0.9, 0.95, 0.5).value, std::pow(0.9, 3) * std::pow(0.95, 4) * 0.5, 1e-15);
  EXPECT_NEAR(itinerant_success(4, 0.9, 0.95, 0.5).value, 0.2969, 5e-5);
}

TEST(Itinerant, SimulationAnchorAndTrend) {
  for (int N = 2; N <= 6; ++N) EXPECT_NEAR(itinerant_ghz_fidelity_sim(N, 1.0), 1.0, 1e-12);
  EXPECT_NEAR(itinerant_ghz_fidelity_sim(2, 0.9), 0.8, 1e-9);
  for (double f : {0.7, 0.8, 0.95, 0.99}) EXPECT_NEAR(itinerant_ghz_fidelity_sim(2, f), 2 * f - 1, 1e-9);

  const double f5 = itinerant_ghz_fidelity_sim(5, 0.99);
  EXPECT_GT(f5, 0.9);
  EXPECT_LT(f5, 0.96);
  // Regression constant for the calibrated depolarising channel.
  EXPECT_NEAR(f5, 0.950774804858, 1e-9);

  double prev = 2.0;
  for (int N = 2; N <= 8; ++N) {
    const double f = itinerant_ghz_fidelity_sim(N, 0.95);
    EXPECT_LT(f, prev) << "N=" << N;
    prev = f;
  }
}

TEST(Itinerant, NoiseBelowReachableDomain) {
  EXPECT_THROW(itinerant_ghz_fidelity_sim(3, 0.6), RangeError);
  EXPECT_THROW(itinerant_ghz_fidelity_sim(1, 0.9), RangeError);
}

TEST(PhotonMapping, Success) {
  SchemeParams p;
  p.eta_abs = 1e-4;
  p.eta_det = 0.05;
  p.p_epr = 2.5e-3;
  EXPECT_NEAR(em_success(2, p).value, 2.5e-3 * std::pow(2.5e-6, 2), 1e-25);
  EXPECT_NEAR(std::log10(em_success(2, p).value), -13.8, 0.1);
  SchemeParams unit;
  EXPECT_DOUBLE_EQ(em_success(2, unit).value, 0.25);
  EXPECT_DOUBLE_EQ(em_success(4, unit).value, 1.0 / 16.0);
}

TEST(PhotonMapping, FalseHerald) {
  EXPECT_DOUBLE_EQ(em_false_herald(3, 0.2, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(em_false_herald(1, 0.3, 0.01), 0.01);
  EXPECT_NEAR(em_false_herald(2, 0.1, 0.01), 0.0001 + 2 * 0.1 * 0.01, 1e-15);
  EXPECT_NEAR(em_false_herald(2, 0.1, 0.01), 0.0021, 1e-12);
}

TEST(PhotonMapping, Fidelity) {
  EXPECT_DOUBLE_EQ(em_fidelity(3, 0.9, 1e-3, 0.0), 0.9);
  EXPECT_DOUBLE_EQ(em_fidelity(3, 0.9, 0.0, 1e-3), 0.125);
  EXPECT_NEAR(em_fidelity(2, 0.95, 1e-13, 1e-13), 0.6, 1e-12);
  EXPECT_THROW(em_fidelity(2, 0.9, 0.0, 0.0), RangeError);
}

TEST(WhichPath, PublishedFidelities) {
  EXPECT_NEAR(wpe_fidelity(1, 2, 0.06), 0.969, 5e-4);
  EXPECT_NEAR(wpe_fidelity(1, 3, 0.06), 0.9388, 5e-4);
  EXPECT_NEAR(wpe_fidelity(2, 3, 0.06), 0.9791, 5e-4);
}

TEST(WhichPath, StrictlyDecreasingInP) {
  for (int N = 2; N <= 6; ++N)
    for (int m = 1; m < N; ++m) {
      double prev = 1.0 + 1e-12;
      for (int i = 1; i < 100; ++i) {
        const double f = wpe_fidelity(m, N, i / 100.0);
        EXPECT_LT(f, prev) << m << "," << N;
        prev = f;
      }
      EXPECT_NEAR(wpe_fidelity(m, N, 1e-9), 1.0, 1e-6);
    }
}

TEST(WhichPath, Rate) {
  const double p = 0.06, eta = 0.3;
  EXPECT_NEAR(wpe_rate(1, 2, p, eta).value, eta * (2 * p * (1 - p) + p * p), 1e-15);
  EXPECT_NEAR(wpe_rate(3, 3, p, eta).value, std::pow(eta * p, 3), 1e-15);
  EXPECT_LT(wpe_rate(1, 4, 1e-9, 1.0).value, 1e-8);
  EXPECT_TRUE(wpe_rate(1, 2, p, eta).is_proportional);
}

TEST(WhichPath, Sweep) {
  const auto rows = wpe_fidelity_sweep(4, {1, 3}, {1e-9, 0.06, 0.5}, 0.05);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_NEAR(rows[0].fidelity, 1.0, 1e-6);
  EXPECT_NEAR(rows[1].rate, 0.05 * (1 - std::pow(0.94, 4)), 1e-12);
  EXPECT_NEAR(rows[1].rate, 0.01096, 5e-6);
  EXPECT_NEAR(rows[5].fidelity, 0.8, 1e-12);
  EXPECT_THROW(wpe_fidelity_sweep(4, {}, {0.1}, 0.05), RangeError);
}

TEST(FourNode, Crossover) {
  const auto c = compare_4node(1.0, 1.0);
  EXPECT_NEAR(c.r_quad, 7.0 / 32.0, 1e-15);
  EXPECT_NEAR(c.r_bell_chain, 0.125, 1e-15);
  EXPECT_NEAR(c.crossover_eta, 0.75593, 1e-4);
  const auto at = compare_4node(c.crossover_eta, 1.0);
  EXPECT_NEAR(at.r_bell_chain, at.r_quad, 1e-12);
  const auto zero = compare_4node(0.0, 3.0);
  EXPECT_EQ(zero.r_bell, 0.0);
  EXPECT_EQ(zero.r_quad, 0.0);
  EXPECT_THROW(compare_4node(1.2, 1.0), RangeError);
}

TEST(SwapRate, Examples) {
  EXPECT_DOUBLE_EQ(swap_rate(2, 0.5, 1.0).value, 0.5);
  EXPECT_DOUBLE_EQ(swap_rate(4, 7.0 / 32.0, 1.0).value, 7.0 / 32.0);
  EXPECT_DOUBLE_EQ(swap_rate(3, 0.25, 0.0).value, 0.0);
}

TEST(Invariants, OutputsInUnitInterval) {
  for (double x = 0.0; x <= 1.0; x += 0.05) {
    EXPECT_GE(st_fidelity_2(x).value, 0.0);
    EXPECT_LE(st_fidelity_2(x).value, 1.0);
    EXPECT_LE(itinerant_success(5, x, x, x).value, 1.0);
  }
}
