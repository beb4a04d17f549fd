#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace swarmcert;
using Catch::Matchers::WithinAbs;

TEST_CASE("phi evaluation across the families") {
  const auto c2 = InteractionKernel::constant(2.0);
  CHECK(phi_eval(c2, 7.0) == 2.0);
  CHECK(phi_eval(c2, 0.0) == 2.0);

  const auto pl = InteractionKernel::power_law(1.0, 1.0);
  CHECK(phi_eval(pl, 0.0) == 1.0);
  CHECK(phi_eval(pl, 3.0) == 0.25);

  const auto tab = InteractionKernel::tabulated({0.0, 1.0, 2.0}, {2.0, 1.0, 0.5});
  CHECK_THAT(phi_eval(tab, 0.5), WithinAbs(1.5, 1e-15));
  CHECK_THAT(phi_eval(tab, 1.5), WithinAbs(0.75, 1e-15));
  CHECK(phi_eval(tab, 2.0) == 0.5);
  CHECK(phi_eval(tab, 50.0) == 0.5);  // clamp beyond the table

  CHECK_THROWS_AS(phi_eval(pl, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(phi_eval(pl, std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
}

TEST_CASE("kernel construction enforces positivity and ordering") {
  CHECK_THROWS_AS(InteractionKernel::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(InteractionKernel::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(InteractionKernel::power_law(1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(InteractionKernel::power_law(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(InteractionKernel::tabulated({0.0, 1.0}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(InteractionKernel::tabulated({0.0, 1.0}, {1.0, -2.0}), std::invalid_argument);
  CHECK_THROWS_AS(InteractionKernel::tabulated({0.0, 1.0, 1.0}, {1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(InteractionKernel::tabulated({0.0, 1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("kernel monotonicity flag") {
  CHECK(InteractionKernel::constant(2.0).non_increasing());
  CHECK(InteractionKernel::power_law(1.0, 0.0).non_increasing());
  CHECK(InteractionKernel::power_law(1.0, 2.0).non_increasing());
  CHECK(InteractionKernel::tabulated({0.0, 1.0}, {2.0, 1.0}).non_increasing());
  CHECK_FALSE(InteractionKernel::tabulated({0.0, 1.0}, {1.0, 2.0}).non_increasing());
}

TEST_CASE("kernel bounds on the worked examples") {
  const auto c = kernel_bounds(InteractionKernel::constant(2.0), ScalingMode::fixed, 5.0);
  CHECK(c.phi_min == 2.0);
  CHECK(c.phi_max == 2.0);
  CHECK(c.k_min == 2.0);
  CHECK(c.k_max == 2.0);

  const auto pl = InteractionKernel::power_law(1.0, 1.0);
  const auto fixed = kernel_bounds(pl, ScalingMode::fixed, 3.0);
  CHECK(fixed.phi_min == 0.25);
  CHECK(fixed.phi_max == 1.0);
  CHECK(fixed.k_min == 0.25);
  CHECK(fixed.k_max == 1.0);

  const auto norm = kernel_bounds(pl, ScalingMode::normalized, 3.0);
  CHECK(norm.phi_min == 0.25);
  CHECK(norm.phi_max == 1.0);
  CHECK(norm.k_min == 0.25);
  CHECK(norm.k_max == 4.0);

  CHECK_THROWS_AS(kernel_bounds(pl, ScalingMode::fixed, -1.0), std::invalid_argument);
}

TEST_CASE("kernel bounds agree with a dense-grid extremum search") {
  Rng rng(20240901);
  for (int trial = 0; trial < 60; ++trial) {
    const auto kernel = testutil::random_kernel(rng);
    const double d0 = rng.uniform(0.0, 8.0);
    const auto bounds = kernel_bounds(kernel, ScalingMode::fixed, d0);

    double lo = phi_eval(kernel, 0.0);
    double hi = lo;
    const int grid = 2000;
    for (int g = 0; g <= grid; ++g) {
      const double r = d0 * static_cast<double>(g) / grid;
      const double v = phi_eval(kernel, r);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    // piecewise-linear tables attain extrema at breakpoints
    for (double b : kernel.breakpoints())
      if (b < d0) {
        const double v = phi_eval(kernel, b);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    CHECK_THAT(bounds.phi_min, WithinAbs(lo, 1e-12));
    CHECK_THAT(bounds.phi_max, WithinAbs(hi, 1e-12));
  }
}

TEST_CASE("kernel bounds are monotone in the initial diameter") {
  Rng rng(5150);
  for (int trial = 0; trial < 60; ++trial) {
    const auto kernel = testutil::random_kernel(rng);
    const double a = rng.uniform(0.0, 5.0);
    const double b = a + rng.uniform(0.0, 5.0);
    const auto small = kernel_bounds(kernel, ScalingMode::fixed, a);
    const auto large = kernel_bounds(kernel, ScalingMode::fixed, b);
    CHECK(large.phi_min <= small.phi_min);
    CHECK(large.phi_max >= small.phi_max);
  }
}

TEST_CASE("lambda weights") {
  const auto positions = StateMatrix::from_rows({{0.0}, {1.0}, {2.0}, {3.0}});
  const auto ones = lambda_weights(InteractionKernel::power_law(1.0, 1.0), ScalingMode::fixed,
                                   positions);
  REQUIRE(ones.size() == 4);
  for (double l : ones) CHECK(l == 1.0);

  // constant kernel: every denominator is N * c
  const auto tri = StateMatrix::from_rows({{0.0}, {0.5}, {2.0}});
  const auto lam = lambda_weights(InteractionKernel::constant(2.0), ScalingMode::normalized, tri);
  REQUIRE(lam.size() == 3);
  for (double l : lam) CHECK_THAT(l, WithinAbs(0.5, 1e-15));
}

TEST_CASE("normalized lambda inverts the kernel row sums") {
  Rng rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform_int(2, 7);
    const int d = rng.uniform_int(1, 3);
    const auto kernel = testutil::random_kernel(rng);
    const auto x = testutil::random_positions(rng, n, d, -3.0, 3.0);
    const auto lam = lambda_weights(kernel, ScalingMode::normalized, x);
    for (int i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j < n; ++j) row_sum += phi_eval(kernel, row_gap_norm(x, i, j));
      CHECK_THAT(lam[i] * row_sum / n, WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("weighted interaction sums respect the scaling bounds") {
  Rng rng(99123);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = rng.uniform_int(2, 7);
    const int d = rng.uniform_int(1, 3);
    const auto kernel = testutil::random_kernel(rng);
    const auto scaling = rng.coin() ? ScalingMode::fixed : ScalingMode::normalized;
    const auto x = testutil::random_positions(rng, n, d, -4.0, 4.0);
    const auto w = testutil::random_weight_matrix(rng, n);

    const auto bounds = kernel_bounds(kernel, scaling, diameter(x));
    const auto lam = lambda_weights(kernel, scaling, x);
    for (int i = 0; i < n; ++i) {
      double weight_sum = 0.0;
      double interaction = 0.0;
      for (int j = 0; j < n; ++j) {
        weight_sum += w(i, j);
        interaction += w(i, j) * phi_eval(kernel, row_gap_norm(x, i, j));
      }
      const double middle = lam[i] * interaction / n;
      CHECK(middle >= bounds.k_min * weight_sum / n - 1e-12 * (1.0 + middle));
      CHECK(middle <= bounds.k_max + 1e-12 * (1.0 + bounds.k_max));
    }
  }
}

TEST_CASE("system config invariants") {
  SystemConfig good;
  good.n_agents = 3;
  good.dim = 2;
  good.window = 1.5;
  good.service = 0.5;
  CHECK_NOTHROW(good.validate());

  SystemConfig bad = good;
  bad.n_agents = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.dim = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.service = 2.0;  // exceeds the window
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.window = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = good;
  bad.service = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("state matrix basics") {
  CHECK_THROWS_AS(StateMatrix::from_rows({}), std::invalid_argument);
  CHECK_THROWS_AS(StateMatrix::from_rows({{1.0}, {1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(StateMatrix::from_rows({{std::numeric_limits<double>::infinity()}}),
                  std::invalid_argument);

  auto m = StateMatrix::from_rows({{0.0, 0.0}, {3.0, 4.0}});
  CHECK(row_gap_norm(m, 0, 1) == 5.0);
  CHECK(row_norm(m, 1) == 5.0);
  m.add_scaled(2.0, m);
  CHECK(m(1, 0) == 9.0);
}
