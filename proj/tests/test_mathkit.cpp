#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "levyatm/mathkit.hpp"

using namespace levyatm;

TEST_CASE("gamma_real matches reference values") {
  CHECK(gamma_real(0.5) == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(gamma_real(5.0) == Catch::Approx(24.0).epsilon(1e-14));
  CHECK(gamma_real(1.0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_real(-1.5) == Catch::Approx(2.3632718012073547).epsilon(1e-13));
  CHECK(gamma_real(-0.5) == Catch::Approx(-3.5449077018110321).epsilon(1e-13));
  CHECK(gamma_real(0.25) == Catch::Approx(3.6256099082219083).epsilon(1e-13));
}

TEST_CASE("gamma_real rejects poles") {
  CHECK_THROWS_AS(gamma_real(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_real(-2.0), std::domain_error);
}

TEST_CASE("gamma_real recurrence holds off the poles") {
  for (double x : {-1.7, -0.3, 0.4, 1.9, 3.3}) {
    CHECK(gamma_real(x + 1.0) == Catch::Approx(x * gamma_real(x)).epsilon(1e-12));
  }
}

TEST_CASE("complex_pow basic identities") {
  const std::complex<double> z(1.0, 1.0);
  const auto sq = complex_pow(z, 2.0);
  CHECK(sq.real() == Catch::Approx(0.0).margin(1e-14));
  CHECK(sq.imag() == Catch::Approx(2.0).epsilon(1e-14));
  const auto r = complex_pow({4.0, 0.0}, 0.5);
  CHECK(r.real() == Catch::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(complex_pow({0.0, 0.0}, 1.5), std::domain_error);
}

TEST_CASE("QuadratureGrid validation") {
  CHECK_THROWS_AS(QuadratureGrid::make(0.0, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(QuadratureGrid::make(0.0, 1.0, 7), std::invalid_argument);
  CHECK_THROWS_AS(QuadratureGrid::make(1.0, 0.0, 8), std::invalid_argument);
  const auto g = QuadratureGrid::make(0.0, 1.0, 6);
  CHECK(g.step() == Catch::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("simpson_integrate is exact for constants and accurate for smooth decay") {
  const auto g1 = QuadratureGrid::make(0.0, 1.0, 64);
  const double one = simpson_integrate([](double) { return 1.0; }, g1).real();
  CHECK(one == Catch::Approx(1.0).epsilon(1e-14));

  // gaussian vanishing at the grid ends: near machine accuracy
  const auto g2 = QuadratureGrid::make(-20.0, 20.0, 1 << 12);
  const double gauss =
      simpson_integrate([](double x) { return std::exp(-0.5 * x * x); }, g2).real();
  CHECK(gauss == Catch::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("simpson_integrate endpoint weighting is first order on non-vanishing integrands") {
  // The 1/2,4/3,2/3,...,1/2 weight pattern is only first-order accurate when
  // the integrand does not vanish at the ends; pin the actual defect and its
  // O(delta) decay so regressions in the weight table are caught.
  const double e64 = simpson_integrate([](double x) { return x * x; },
                                       QuadratureGrid::make(0.0, 1.0, 64))
                         .real() -
                     1.0 / 3.0;
  const double e128 = simpson_integrate([](double x) { return x * x; },
                                        QuadratureGrid::make(0.0, 1.0, 128))
                          .real() -
                      1.0 / 3.0;
  CHECK(std::abs(e64) < 3e-3);
  CHECK(std::abs(e64) > 1e-4);
  CHECK(e64 / e128 == Catch::Approx(2.0).margin(0.15));
}

TEST_CASE("simpson_integrate flags non-finite nodes") {
  const auto g = QuadratureGrid::make(0.0, 1.0, 8);
  CHECK_THROWS_AS(simpson_integrate([](double x) { return 1.0 / x; }, g), numeric_error);
}

TEST_CASE("adaptive_quad on finite, infinite, and singular integrands") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(adaptive_quad([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        Catch::Approx(2.0).epsilon(1e-10));
  CHECK(adaptive_quad([](double x) { return std::exp(-x); }, 0.0, inf) ==
        Catch::Approx(1.0).epsilon(1e-9));
  CHECK(adaptive_quad([](double x) { return std::exp(-x * x); }, 0.0, inf) ==
        Catch::Approx(0.5 * std::sqrt(M_PI)).epsilon(1e-9));
  CHECK(adaptive_quad([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10,
                      /*singular_endpoints=*/true) == Catch::Approx(2.0).epsilon(1e-8));
  // x^{-0.6}, the hardest exponent class used by the drift integrals
  CHECK(adaptive_quad([](double x) { return std::pow(x, -0.6); }, 0.0, 1.0, 1e-10,
                      /*singular_endpoints=*/true) == Catch::Approx(2.5).epsilon(1e-8));
}

TEST_CASE("adaptive_quad singular integrand over an infinite range") {
  const double inf = std::numeric_limits<double>::infinity();
  // int_0^inf x^{-1/2} e^{-x} dx = Gamma(1/2)
  const double v = adaptive_quad([](double x) { return std::exp(-x) / std::sqrt(x); }, 0.0, inf,
                                 1e-10, /*singular_endpoints=*/true);
  CHECK(v == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-8));
}
