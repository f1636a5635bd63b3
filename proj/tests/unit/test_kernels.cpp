#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "checks.hpp"
#include "levyspec/error.hpp"
#include "levyspec/kernels.hpp"

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

TEST_SUITE("kernels") {
  TEST_CASE("K1 reference values") {
    CHECK(1e-6 * bessel_k1(1e-6) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(bessel_k1(1.0) == doctest::Approx(0.6019072302).epsilon(1e-9));
    const double asym = std::sqrt(std::numbers::pi / 20.0) * std::exp(-10.0) * (1.0 + 3.0 / 80.0 - 15.0 / 12800.0);
    CHECK(bessel_k1(10.0) == doctest::Approx(asym).epsilon(1e-4));
    CHECK(bessel_k1(800.0) >= 0.0);
    CHECK(kind_of([] { bessel_k1(0.0); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([] { bessel_k1(-1.0); }) == ErrorKind::invalid_argument);
  }

  TEST_CASE("K1 against the integral representation") {
    for (double x : {1e-8, 1e-3, 0.5, 1.0, 1.9, 2.1, 5.0, 30.0, 200.0, 700.0}) {
      INFO("x = " << x);
      CHECK(bessel_k1(x) == doctest::Approx(checks::bessel_k1_quadrature(x)).epsilon(1e-9));
    }
    CHECK(bessel_k0(1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-10));
  }

  TEST_CASE("levy density") {
    CHECK(levy_density(KernelSpec::cauchy(), 1.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(levy_density(KernelSpec::quasirelativistic(1e-6), 1.0) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-5));
    // K1(z) ~ sqrt(pi / 2z) e^{-z}: the m=1 density drops below 1e-21 only past |z| ~ 41.4
    const KernelSpec one = KernelSpec::quasirelativistic(1.0);
    CHECK(levy_density(one, 20.0) == doctest::Approx(bessel_k1(20.0) / (20.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(levy_density(one, 20.0) > 1e-12);
    CHECK(levy_density(one, 41.0) > 1e-21);
    for (double z : {42.0, 50.0, 80.0}) CHECK(levy_density(one, z) < 1e-21);
    CHECK(levy_density(KernelSpec::quasirelativistic(2.0), -0.7) ==
          levy_density(KernelSpec::quasirelativistic(2.0), 0.7));
    CHECK(kind_of([] { levy_density(KernelSpec::cauchy(), 0.0); }) == ErrorKind::singular_point);
    CHECK(kind_of([] { KernelSpec::quasirelativistic(0.0).validate(); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([] { levy_density(KernelSpec::quasirelativistic(-1.0), 1.0); }) == ErrorKind::invalid_argument);
  }

  TEST_CASE("family names") {
    CHECK(to_string(KernelFamily::cauchy) == "cauchy");
    CHECK(kernel_family_from_string("quasirelativistic") == KernelFamily::quasirelativistic);
    CHECK(kind_of([] { kernel_family_from_string("bogus"); }) == ErrorKind::invalid_argument);
  }

  TEST_CASE("Cauchy table on the paper-resolution grid") {
    const Grid g = make_grid(50.0, 0.001);
    const KernelTable t = tabulate_kernel(KernelSpec::cauchy(), g);
    CHECK(t.truncation_radius == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(t.tail_mass == doctest::Approx(1.0 / (100.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(t.singular_coeff == doctest::Approx(0.001 / (2.0 * std::numbers::pi)).epsilon(1e-12));
    CHECK(t.weight(1) == doctest::Approx(1.0 / (std::numbers::pi * 0.001)).epsilon(1e-12));
    for (std::size_t j = 1; j < t.offsets(); ++j) REQUIRE(t.weight(j + 1) <= t.weight(j));
  }

  TEST_CASE("quasirelativistic table truncates where the density is negligible") {
    const Grid g = make_grid(50.0, 0.001);
    const KernelTable t = tabulate_kernel(KernelSpec::quasirelativistic(1.0), g);
    CHECK(t.truncation_radius < 50.0);
    const double first = levy_density(t.spec, g.dx());
    CHECK(t.weights.back() / g.dx() >= 1e-16 * first);
    CHECK(levy_density(t.spec, t.truncation_radius + g.dx()) < 1e-16 * first);
    CHECK(t.tail_mass < 1e-10);
    CHECK(t.weights.back() > 0.0);
    // c0 tends to the Cauchy value as m dx -> 0.
    CHECK(t.singular_coeff == doctest::Approx(0.001 / (2.0 * std::numbers::pi)).epsilon(1e-6));
    for (std::size_t j = 1; j < t.offsets(); ++j) REQUIRE(t.weight(j + 1) <= t.weight(j));
  }

  TEST_CASE("tail mass matches direct quadrature") {
    const Grid g = make_grid(2.0, 0.01);
    const KernelTable t = tabulate_kernel(KernelSpec::quasirelativistic(0.5), g);
    // trapezoid of nu on [z_max, z_max + 200] with a fine step
    double s = 0.0;
    const double step = 1e-3;
    for (int k = 0; k <= 200000; ++k) {
      const double z = t.truncation_radius + step * k;
      s += (k == 0 || k == 200000 ? 0.5 : 1.0) * levy_density(t.spec, z);
    }
    CHECK(t.tail_mass == doctest::Approx(s * step).epsilon(1e-6));
  }

  TEST_CASE("kernel CSV round trip") {
    const Grid g = make_grid(1.0, 0.05);
    const KernelTable t = tabulate_kernel(KernelSpec::quasirelativistic(3.0), g);
    std::stringstream ss;
    write_kernel_csv(t, ss);
    const std::string text = ss.str();
    CHECK(text.find("z,weight\n") != std::string::npos);
    const KernelTable back = read_kernel_csv(ss);
    CHECK(back.grid == t.grid);
    CHECK(back.spec.family == t.spec.family);
    CHECK(back.spec.mass == t.spec.mass);
    CHECK(back.weights == t.weights);
    CHECK(back.singular_coeff == t.singular_coeff);
    CHECK(back.tail_mass == t.tail_mass);
    CHECK(back.truncation_radius == t.truncation_radius);
  }
}
