#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "fracmaps/parallel.hpp"
#include "fracmaps/quadrature.hpp"

namespace fq = fracmaps::quad;

TEST(Quadrature, Gk15IsExactForPolynomials) {
  const auto est = fq::gk15([](double x) { return 3.0 * x * x - x + 2.0; }, -1.0, 2.0);
  EXPECT_NEAR(est.value, 13.5, 1e-13);
}

TEST(Quadrature, AdaptiveHandlesEndpointSingularity) {
  const auto res = fq::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.value, 2.0, 1e-10);
}

TEST(Quadrature, AdaptiveOscillatory) {
  const auto res = fq::integrate([](double x) { return std::sin(20.0 * x); }, 0.0, std::numbers::pi,
                                 1e-13, 1e-13);
  EXPECT_NEAR(res.value, 0.0, 1e-12);
}

TEST(Parallel, ResultsIndependentOfThreadCount) {
  std::vector<double> one(1000), many(1000);
  fracmaps::set_max_threads(1);
  fracmaps::parallel_for(one.size(), [&](std::size_t i) { one[i] = std::sin(double(i)); });
  fracmaps::set_max_threads(8);
  fracmaps::parallel_for(many.size(), [&](std::size_t i) { many[i] = std::sin(double(i)); });
  fracmaps::set_max_threads(0);
  EXPECT_EQ(one, many);
}

TEST(Parallel, PropagatesExceptions) {
  fracmaps::set_max_threads(4);
  EXPECT_THROW(fracmaps::parallel_for(100, [](std::size_t i) {
                 if (i == 57) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  fracmaps::set_max_threads(0);
}
