#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "brute.hpp"
#include "tlx/stats.hpp"

using namespace tlx;

TEST_CASE("pearson examples") {
  // 12 / sqrt(10 * 21.2) from the centred sums
  CHECK(pearson({1, 2, 3, 4, 5}, {2, 1, 4, 3, 7}) == doctest::Approx(12 / std::sqrt(212.0)).epsilon(1e-12));
  CHECK(pearson({1, 3, 2, 7}, {1, 3, 2, 7}) == doctest::Approx(1.0));
  CHECK(pearson({1, 3, 2, 7}, {-1, -3, -2, -7}) == doctest::Approx(-1.0));
}

TEST_CASE("pearson input errors") {
  CHECK_THROWS_AS(pearson({1, 2}, {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(pearson({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), std::domain_error);
  CHECK_THROWS_AS(pearson({1, 2, 3}, {4, 4, 4}), std::domain_error);
}

TEST_CASE("p-value examples") {
  CHECK(std::abs(p_value(0.444, 20) - 0.0498) <= 5e-4);
  CHECK(p_value(0, 3) == 1.0);
  CHECK(p_value(0, 40) == 1.0);
  CHECK(p_value(1, 10) == 0.0);
  CHECK(p_value(-0.999999, 10) < 1e-10);
  CHECK_THROWS_WITH_AS(p_value(0.5, 2), "insufficient samples", std::invalid_argument);
}

TEST_CASE("pearson and p-value agree with the oracles on random vectors") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z;
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 3 + rng() % 48;
    double slope = z(rng);
    std::vector<double> x(n), y(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = z(rng);
      y[k] = slope * x[k] + z(rng);
    }
    double r = pearson(x, y);
    INFO("vector " << i << " n " << n);
    CHECK(std::abs(r - oracle::pairwise_pearson(x, y)) <= 1e-6);
    CHECK(std::abs(p_value(r, n) - oracle::integrated_p_value(r, n)) <= 5e-4);
  }
}

TEST_CASE("pearson is invariant under positive affine maps") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x(12), y(12), xa(12), ya(12);
    double a = 0.1 + std::abs(u(rng)), b = u(rng), c = 0.1 + std::abs(u(rng)), d = u(rng);
    for (int k = 0; k < 12; ++k) {
      x[k] = u(rng);
      y[k] = x[k] + u(rng);
      xa[k] = a * x[k] + b;
      ya[k] = c * y[k] + d;
    }
    CHECK(std::abs(pearson(xa, ya) - pearson(x, y)) <= 1e-12);
  }
}

TEST_CASE("p-value decreases in |r| and in n") {
  for (std::size_t n : {3, 5, 10, 30, 100}) {
    double prev = 2;
    for (int i = 0; i <= 20; ++i) {
      double r = i / 20.0 * 0.99;
      double p = p_value(r, n);
      CHECK(p < prev);
      CHECK(p_value(-r, n) == p);
      prev = p;
    }
  }
  for (double r : {0.05, 0.3, 0.7, 0.95}) {
    double prev = 2;
    for (std::size_t n = 3; n <= 60; ++n) {
      double p = p_value(r, n);
      CHECK(p < prev);
      prev = p;
    }
  }
}
