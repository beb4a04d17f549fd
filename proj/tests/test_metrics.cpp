#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace swarmcert;
using Catch::Matchers::WithinAbs;

TEST_CASE("diameter") {
  CHECK(diameter(StateMatrix::from_rows({{0.0}, {1.0}})) == 1.0);
  CHECK(diameter(StateMatrix::from_rows({{2.0}, {2.0}, {2.0}})) == 0.0);
  CHECK(diameter(StateMatrix::from_rows({{0.0, 0.0}, {3.0, 4.0}})) == 5.0);
}

TEST_CASE("gamma extrema") {
  const auto line = gamma_extrema(StateMatrix::from_rows({{-2.0}, {3.0}}));
  CHECK(line.gamma_max == 3.0);
  REQUIRE(line.gamma_min.has_value());
  CHECK(*line.gamma_min == -2.0);

  const auto plane = gamma_extrema(StateMatrix::from_rows({{3.0, 4.0}, {0.0, 0.0}}));
  CHECK(plane.gamma_max == 5.0);
  CHECK_FALSE(plane.gamma_min.has_value());

  const auto sym = gamma_extrema(StateMatrix::from_rows({{-1.5}, {1.5}}));
  CHECK(sym.gamma_max == 1.5);
}

TEST_CASE("projections") {
  const auto x = StateMatrix::from_rows({{1.0, 2.0}, {-3.0, 0.5}});
  const std::vector<double> origin{0.0, 0.0};
  const std::vector<double> e1{1.0, 0.0};
  const auto first = projected_positions(x, origin, e1);
  CHECK(first[0] == 1.0);
  CHECK(first[1] == -3.0);

  // projecting along the gap of the extremal pair recovers the diameter
  const double gap = row_gap_norm(x, 0, 1);
  std::vector<double> dir{(x(0, 0) - x(1, 0)) / gap, (x(0, 1) - x(1, 1)) / gap};
  const auto along = projected_positions(x, origin, dir);
  CHECK_THAT(std::abs(along[0] - along[1]), WithinAbs(diameter(x), 1e-12));

  const std::vector<double> not_unit{1.0, 1.0};
  CHECK_THROWS_AS(projected_positions(x, origin, not_unit), std::invalid_argument);
  const std::vector<double> short_base{0.0};
  CHECK_THROWS_AS(projected_positions(x, short_base, e1), std::invalid_argument);
}

TEST_CASE("projecting an embedded line recovers it") {
  Rng rng(2718);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(2, 6);
    // random unit direction in R^3
    std::vector<double> u{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    double norm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    if (norm < 1e-3) continue;
    for (auto& c : u) c /= norm;
    norm = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    for (auto& c : u) c /= norm;  // renormalize to push |u| within 1e-12 of 1

    std::vector<double> base{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                             rng.uniform(-2.0, 2.0)};
    std::vector<double> line(static_cast<std::size_t>(n));
    StateMatrix embedded(static_cast<std::size_t>(n), 3);
    for (int i = 0; i < n; ++i) {
      line[static_cast<std::size_t>(i)] = rng.uniform(-4.0, 4.0);
      for (int k = 0; k < 3; ++k)
        embedded(i, k) = base[static_cast<std::size_t>(k)] +
                         line[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(k)];
    }
    const auto recovered = projected_positions(embedded, base, u);
    for (int i = 0; i < n; ++i)
      CHECK_THAT(recovered[static_cast<std::size_t>(i)],
                 WithinAbs(line[static_cast<std::size_t>(i)], 1e-12));
  }
}

TEST_CASE("projected diameters never exceed the full diameter") {
  Rng rng(46692);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = rng.uniform_int(2, 7);
    const int d = rng.uniform_int(2, 3);
    const auto x = testutil::random_positions(rng, n, d, -3.0, 3.0);
    std::vector<double> dir(static_cast<std::size_t>(d));
    double norm = 0.0;
    for (auto& c : dir) {
      c = rng.uniform(-1.0, 1.0);
      norm += c * c;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-3) continue;
    for (auto& c : dir) c /= norm;
    double renorm = 0.0;
    for (double c : dir) renorm += c * c;
    renorm = std::sqrt(renorm);
    for (auto& c : dir) c /= renorm;

    const std::vector<double> base(static_cast<std::size_t>(d), 0.0);
    const auto y = projected_positions(x, base, dir);
    double projected = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      for (std::size_t j = i + 1; j < y.size(); ++j)
        projected = std::max(projected, std::abs(y[i] - y[j]));
    CHECK(projected <= diameter(x) + 1e-12);
  }
}

TEST_CASE("diameter invariances") {
  Rng rng(1123);
  const auto x = testutil::random_positions(rng, 5, 2, -2.0, 2.0);
  const double d0 = diameter(x);

  auto shifted = x;
  for (std::size_t i = 0; i < shifted.rows(); ++i) {
    shifted(i, 0) += 0.5;
    shifted(i, 1) -= 0.25;
  }
  CHECK(diameter(shifted) == d0);  // dyadic shift keeps gaps bit-exact

  const double angle = 0.7;
  StateMatrix rotated(5, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    rotated(i, 0) = std::cos(angle) * x(i, 0) - std::sin(angle) * x(i, 1);
    rotated(i, 1) = std::sin(angle) * x(i, 0) + std::cos(angle) * x(i, 1);
  }
  CHECK_THAT(diameter(rotated), WithinAbs(d0, 1e-12));

  StateMatrix permuted(5, 2);
  const int perm[5] = {4, 2, 0, 1, 3};
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 2; ++k)
      permuted(i, k) = x(static_cast<std::size_t>(perm[i]), k);
  CHECK(diameter(permuted) == d0);
}

TEST_CASE("position and velocity diameters along a run") {
  SystemConfig cfg;
  cfg.n_agents = 2;
  cfg.dim = 1;
  const SecondOrderState s0{StateMatrix::from_rows({{0.0}, {1.0}}),
                            StateMatrix::from_rows({{0.0}, {1.0}})};
  const auto traj = simulate(cfg, InteractionKernel::constant(1.0), ScheduleMatrix(2), s0, 1.0,
                             1e-3);
  const auto at0 = dx_dv(traj, 0.0);
  CHECK(at0.dx == 1.0);
  CHECK(at0.dv == 1.0);
  const auto at1 = dx_dv(traj, 1.0);
  CHECK_THAT(at1.dv, WithinAbs(std::exp(-1.0), 1e-9));

  const SecondOrderState aligned{StateMatrix::from_rows({{0.0}, {1.0}}),
                                 StateMatrix::from_rows({{0.3}, {0.3}})};
  const auto rigid = simulate(cfg, InteractionKernel::constant(1.0), ScheduleMatrix(2), aligned,
                              1.0, 1e-2);
  CHECK(dx_dv(rigid, 0.5).dv == 0.0);
}

TEST_CASE("consensus detection") {
  SystemConfig cfg;
  cfg.n_agents = 2;
  cfg.dim = 1;
  const auto kernel = InteractionKernel::constant(1.0);

  const FirstOrderState consensus{StateMatrix::from_rows({{0.4}, {0.4}})};
  const auto still = simulate(cfg, kernel, ScheduleMatrix(2), consensus, 1.0, 1e-2);
  const auto when = detect_consensus(still, 1e-9);
  REQUIRE(when.has_value());
  CHECK(*when == 0.0);

  ScheduleMatrix dead(2);
  dead.set(0, 1, PiecewiseConstantSignal::constant(0.0));
  dead.set(1, 0, PiecewiseConstantSignal::constant(0.0));
  const FirstOrderState spread{StateMatrix::from_rows({{0.0}, {1.0}})};
  CHECK_FALSE(detect_consensus(simulate(cfg, kernel, dead, spread, 1.0, 1e-2), 0.5).has_value());

  const auto oracle = simulate(cfg, kernel, ScheduleMatrix(2), spread, 3.0, 1e-3);
  const auto hit = detect_consensus(oracle, std::exp(-2.0));
  REQUIRE(hit.has_value());
  CHECK_THAT(*hit, WithinAbs(2.0, 2e-3));
}
