#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "gridbarrier/dynamics.hpp"
#include "oracles.hpp"

using namespace gridbarrier;

namespace {

constexpr double kPi = std::numbers::pi;

DecoupledNode two_bus_gen() { return decouple(fixtures::two_bus(), "G1"); }
DecoupledNode two_bus_load() { return decouple(fixtures::two_bus(), "L2"); }
DecoupledNode six_bus_load() { return decouple(fixtures::six_bus(), "L5"); }

}  // namespace

TEST(GeneratorRhs, TwoBusExamples) {
  const DecoupledNode n = two_bus_gen();
  const std::vector<double> d{0.0};
  GenDerivative f = generator_rhs(n, {0.0, 0.0}, d);
  EXPECT_EQ(f.delta_dot, 0.0);
  EXPECT_DOUBLE_EQ(f.omega_dot, 0.4);

  f = generator_rhs(n, {kPi / 6, 0.0}, d);  // sin(delta*) = p_m / a
  EXPECT_EQ(f.delta_dot, 0.0);
  EXPECT_NEAR(f.omega_dot, 0.0, 1e-15);

  f = generator_rhs(n, {0.0, 1.0}, d);
  EXPECT_EQ(f.delta_dot, 1.0);
  EXPECT_DOUBLE_EQ(f.omega_dot, -0.6);
}

TEST(GeneratorRhs, DimensionMismatch) {
  const DecoupledNode n = two_bus_gen();
  EXPECT_THROW(generator_rhs(n, {0, 0}, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(generator_rhs(n, {0, 0}, std::vector<double>{0, 0}), std::invalid_argument);
  EXPECT_THROW(generator_rhs(two_bus_load(), {0, 0}, std::vector<double>{0}), std::invalid_argument);
}

TEST(LoadRhs, Examples) {
  EXPECT_DOUBLE_EQ(load_rhs(two_bus_load(), 0.0, std::vector<double>{0.0}), -0.7);
  EXPECT_NEAR(load_rhs(two_bus_load(), 0.0, std::vector<double>{kPi / 2}), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(load_rhs(six_bus_load(), 0.0, std::vector<double>{0, 0, 0, 0}), -0.1);
  EXPECT_THROW(load_rhs(six_bus_load(), 0.0, std::vector<double>{0}), std::invalid_argument);
  EXPECT_THROW(load_rhs(two_bus_gen(), 0.0, std::vector<double>{0}), std::invalid_argument);
}

TEST(AdjointRhs, Examples) {
  const DecoupledNode n = two_bus_gen();
  const std::vector<double> d{0.0};
  Adjoint a = adjoint_rhs(n, {0, 0}, d, {1, 0});
  EXPECT_EQ(a.l1, 0.0);
  EXPECT_EQ(a.l2, -1.0);
  a = adjoint_rhs(n, {0, 0}, d, {0, 1});
  EXPECT_DOUBLE_EQ(a.l1, 0.8);
  EXPECT_DOUBLE_EQ(a.l2, 1.0);
  a = adjoint_rhs(n, {0, 0}, d, {0, 0});
  EXPECT_EQ(a.l1, 0.0);
  EXPECT_EQ(a.l2, 0.0);
  EXPECT_THROW(adjoint_rhs(two_bus_load(), {0, 0}, d, {1, 0}), std::invalid_argument);
}

TEST(AdjointRhs, IncludesFixedNeighbours) {
  const DecoupledNode n = decouple(fixtures::six_bus(), "G2");
  const std::vector<double> d(4, 0.3);
  const Adjoint a = adjoint_rhs(n, {0.3, 0.0}, d, {0, 1});
  // cos(0) for the four variable neighbours, cos(0.3) for the reference.
  EXPECT_NEAR(a.l1, 4 * 0.2 + 2.0 * std::cos(0.3), 1e-15);
  EXPECT_DOUBLE_EQ(a.l2, 1.0);
}

TEST(ExtremalDisturbance, Examples) {
  const std::vector<AngleBounds> wide{{-kPi / 2, kPi / 2}};
  EXPECT_DOUBLE_EQ(extremal_disturbance(SetKind::Mrpi, 0.0, 0.5, wide)[0], kPi / 2);
  EXPECT_DOUBLE_EQ(extremal_disturbance(SetKind::Mrpi, 0.0, -0.5, wide)[0], -kPi / 2);
  const std::vector<AngleBounds> narrow{{-kPi / 3.7, kPi / 3.7}};
  EXPECT_EQ(extremal_disturbance(SetKind::Admissible, kPi / 2, 1.0, narrow)[0], 0.0);
}

TEST(ExtremalDisturbance, TieTakesNonnegativeBranch) {
  const std::vector<AngleBounds> wide{{-kPi / 2, kPi / 2}};
  EXPECT_EQ(extremal_disturbance(SetKind::Mrpi, 0.0, 0.0, wide), extremal_disturbance(SetKind::Mrpi, 0.0, 1.0, wide));
  EXPECT_EQ(extremal_disturbance(SetKind::Admissible, 0.0, 0.0, wide),
            extremal_disturbance(SetKind::Admissible, 0.0, 1.0, wide));
  EXPECT_EQ(extremal_disturbance(SetKind::Mrpi, 0.0, -0.0, wide)[0], kPi / 2);
}

TEST(Hamiltonian, Examples) {
  EXPECT_EQ(hamiltonian({1, 0}, {0, -0.6}), 0.0);
  EXPECT_EQ(hamiltonian({0, 1}, {1, 0}), 0.0);
  EXPECT_EQ(hamiltonian({1, 1}, {1, -1}), 0.0);
  EXPECT_EQ(hamiltonian({2, 3}, {5, 7}), 31.0);
}

TEST(DynamicsProperty, RhsMatchesOracle) {
  const DecoupledNode n = decouple(fixtures::six_bus(), "G3");
  oracle::Uniform u(1);
  for (int i = 0; i < 500; ++i) {
    const double delta = u.next(-4, 4), omega = u.next(-5, 5);
    std::vector<double> d(4);
    std::vector<std::pair<double, double>> nb;
    for (double& x : d) {
      x = u.next(-kPi / 2, kPi / 2);
      nb.push_back({0.2, x});
    }
    nb.push_back({2.0, 0.0});
    const GenDerivative f = generator_rhs(n, {delta, omega}, d);
    EXPECT_EQ(f.delta_dot, omega);
    EXPECT_NEAR(f.omega_dot, oracle::accel(1.0, 2.0, 0.1, delta, omega, nb), 1e-13);
  }
}

TEST(DynamicsProperty, JointShiftBy2PiIsInvariant) {
  oracle::Uniform u(2);
  // Reference angles shift with everything else, so use a grid without one.
  const DecoupledNode gen = two_bus_gen();
  const DecoupledNode load = two_bus_load();
  for (int i = 0; i < 500; ++i) {
    const double delta = u.next(-3, 3), omega = u.next(-3, 3), d = u.next(-3, 3);
    const std::vector<double> d0{d}, d1{d + 2 * kPi};
    const GenDerivative f0 = generator_rhs(gen, {delta, omega}, d0);
    const GenDerivative f1 = generator_rhs(gen, {delta + 2 * kPi, omega}, d1);
    EXPECT_NEAR(f0.omega_dot, f1.omega_dot, 1e-13);
    EXPECT_NEAR(load_rhs(load, delta, d0), load_rhs(load, delta + 2 * kPi, d1), 1e-13);
  }
}

TEST(DynamicsProperty, ExtremalDisturbanceStaysInInterval) {
  oracle::Uniform u(3);
  for (int i = 0; i < 2000; ++i) {
    std::vector<AngleBounds> iv;
    for (int j = 0; j < 3; ++j) {
      const double lo = u.next(-3, 3);
      iv.push_back({lo, lo + u.next(0, 2)});
    }
    const SetKind kind = i % 2 ? SetKind::Mrpi : SetKind::Admissible;
    const auto d = extremal_disturbance(kind, u.next(-6, 6), u.next(-1, 1), iv);
    for (std::size_t j = 0; j < iv.size(); ++j) EXPECT_TRUE(iv[j].contains(d[j]));
  }
}

TEST(DynamicsProperty, SingletonIntervalsCollapseBranches) {
  oracle::Uniform u(4);
  for (int i = 0; i < 500; ++i) {
    const double p = u.next(-2, 2);
    const std::vector<AngleBounds> iv{{p, p}, {-p, -p}};
    const double delta = u.next(-4, 4), l2 = u.next(-1, 1);
    EXPECT_EQ(extremal_disturbance(SetKind::Mrpi, delta, l2, iv),
              extremal_disturbance(SetKind::Admissible, delta, l2, iv));
  }
}

// MRPI maximizes the Hamiltonian over d, the admissible barrier minimizes it;
// compare with a brute-force search of each interval. Intervals are
// symmetric and |delta| <= pi/2, where the saturated form is exact.
TEST(DynamicsProperty, ExtremalDisturbanceOptimizesHamiltonian) {
  oracle::Uniform u(5);
  for (int i = 0; i < 300; ++i) {
    const double hi = u.next(0, kPi / 2), lo = -hi;
    const std::vector<AngleBounds> iv{{lo, hi}};
    const double delta = u.next(-kPi / 2, kPi / 2), l2 = u.next(-1, 1);
    for (SetKind kind : {SetKind::Mrpi, SetKind::Admissible}) {
      const double d = extremal_disturbance(kind, delta, l2, iv)[0];
      // The d-dependent part of l2 * omega_dot is l2 * (-a sin(delta - d)) / m.
      const double sign = (kind == SetKind::Mrpi ? 1.0 : -1.0) * (l2 >= 0 ? 1.0 : -1.0);
      const double best = oracle::extreme_push(0.8, delta, lo, hi, sign).second;
      EXPECT_NEAR(sign * -0.8 * std::sin(delta - d), best, 1e-9) << delta << " " << l2;
    }
  }
}
