#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "levyspec/error.hpp"
#include "levyspec/grid.hpp"

using namespace levyspec;

namespace {
ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::config;
}
}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("point counts") {
    CHECK(make_grid(50.0, 0.001).size() == 100001);
    CHECK(make_grid(20.0, 0.001).size() == 40001);
    const Grid g = make_grid(1.0, 0.5);
    REQUIRE(g.size() == 5);
    const std::vector<double> expect{-1.0, -0.5, 0.0, 0.5, 1.0};
    CHECK(g.points() == expect);
    CHECK_FALSE(g.adjusted());
  }

  TEST_CASE("non-integer a/dx adjusts the spacing and keeps endpoints exact") {
    const Grid g = make_grid(1.0, 0.3);
    CHECK(g.adjusted());
    CHECK(g.size() == 7);
    CHECK(g.requested_dx() == 0.3);
    CHECK(g.x(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(g.x(g.size() - 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.x(g.center()) == 0.0);
  }

  TEST_CASE("invalid grids") {
    CHECK(kind_of([] { make_grid(0.0, 0.1); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([] { make_grid(1.0, -0.1); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([] { make_grid(1.0, std::nan("")); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([] { make_grid(1e300, 1e-300); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([] { make_grid(1.0, 5.0); }) == ErrorKind::invalid_argument);
  }

  TEST_CASE("inner product") {
    const Grid g = make_grid(1.0, 0.5);
    const auto one = GridFunction::sample(g, [](double) { return 1.0; });
    CHECK(inner_product(one, one) == 2.5);  // rectangle rule counts both endpoints fully
    const Grid fine = make_grid(3.0, 0.001);
    const auto odd = GridFunction::sample(fine, [](double x) { return x * std::exp(-x * x); });
    const auto even = GridFunction::sample(fine, [](double x) { return std::cos(x); });
    CHECK(std::abs(inner_product(odd, even)) < 1e-14);
    const auto c = GridFunction::sample(fine, [](double x) {
      return std::abs(x) < 1.0 ? std::cos(std::numbers::pi * x / 2.0) : 0.0;
    });
    CHECK(inner_product(c, c) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(kind_of([&] { inner_product(one, c); }) == ErrorKind::incompatible_grids);
  }

  TEST_CASE("inner product is symmetric and bilinear") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Grid g = make_grid(2.0, 0.01);
    for (int trial = 0; trial < 20; ++trial) {
      auto f = GridFunction::sample(g, [&](double) { return u(rng); });
      auto h = GridFunction::sample(g, [&](double) { return u(rng); });
      auto k = GridFunction::sample(g, [&](double) { return u(rng); });
      const double alpha = u(rng), beta = u(rng);
      GridFunction mix(g);
      for (std::size_t j = 0; j < g.size(); ++j) mix[j] = alpha * f[j] + beta * h[j];
      CHECK(inner_product(f, h) == inner_product(h, f));
      CHECK(inner_product(mix, k) ==
            doctest::Approx(alpha * inner_product(f, k) + beta * inner_product(h, k)).epsilon(1e-12));
      CHECK(inner_product(f, f) > 0.0);
    }
  }

  TEST_CASE("normalize") {
    const Grid g = make_grid(2.0, 0.01);
    const auto f = GridFunction::sample(g, [](double x) { return std::exp(-x * x) * (1.0 + x); });
    const auto n1 = normalize(f);
    CHECK(norm(n1) == doctest::Approx(1.0).epsilon(1e-12));
    GridFunction twice(g);
    for (std::size_t j = 0; j < g.size(); ++j) twice[j] = 2.0 * n1[j];
    const auto back = normalize(twice);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(back[j] == doctest::Approx(n1[j]).epsilon(1e-14));
    const auto n2 = normalize(n1);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(n2[j] - n1[j]) <= 1e-12);
    CHECK(kind_of([&] { normalize(GridFunction(g)); }) == ErrorKind::degenerate_vector);
  }

  TEST_CASE("trial basis") {
    const Grid g = make_grid(2.0, 0.001);
    const auto basis = trial_basis(6, g);
    REQUIRE(basis.size() == 6);
    const std::size_t c = g.center();
    // Normalized cos(pi x / 2) has unit amplitude on [-1, 1].
    CHECK(basis[0][c] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(basis[1][c] == 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(norm(basis[i]) == doctest::Approx(1.0).epsilon(1e-12));
      const double parity = i % 2 == 0 ? 1.0 : -1.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(basis[i][g.size() - 1 - j] == doctest::Approx(parity * basis[i][j]).epsilon(1e-13));
        if (std::abs(g.x(j)) > 1.0) CHECK(basis[i][j] == 0.0);
      }
      for (std::size_t k = 0; k < i; ++k) CHECK(std::abs(inner_product(basis[i], basis[k])) <= 1e-6);
    }
    CHECK(kind_of([] { trial_basis(2, make_grid(0.5, 0.01)); }) == ErrorKind::domain_too_small);
  }
}
