#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hankel/errors.hpp"
#include "hankel/function_model.hpp"

using namespace hankel;

TEST_CASE("evaluate: worked examples") {
  const auto phi = GaussHermiteFunction::gaussian(0.0, 0.5);
  CHECK(phi(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(phi(1e-300) == doctest::Approx(0.0));
  CHECK(phi(0.0) == 0.0);

  const SampledFunction s({1.0, 2.0}, {3.0, 5.0}, Interpolation::linear);
  CHECK(s(1.5) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(s(2.5) == 0.0);
}

TEST_CASE("construction rejects invalid data") {
  CHECK_THROWS_AS(GaussHermiteFunction(0.0, 0.0, {1.0}), DomainError);
  CHECK_THROWS_AS(GaussHermiteFunction(0.0, 0.5, {std::nan("")}), DomainError);
  CHECK_THROWS_AS(SampledFunction({1.0, 1.0}, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(SampledFunction({1.0, 2.0}, {0.0}), DomainError);
  CHECK_THROWS_AS(SampledFunction({-1.0, 2.0}, {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(GaussPoly(0.5, {1.0}) + GaussPoly(1.0, {1.0}), DomainError);
}

TEST_CASE("bessel_derivative: worked examples") {
  const auto g = bessel_derivative(GaussHermiteFunction::gaussian(1.5, 0.5), 1);
  CHECK(g.rate() == 0.5);
  CHECK(g.coeffs() == std::vector<double>{-1.0});

  const GaussHermiteFunction f(0.0, 1.0, {0.0, 1.0});
  CHECK(bessel_derivative(f, 0).coeffs() == f.core().coeffs());
  CHECK(bessel_derivative(f, 1).coeffs() == std::vector<double>{2.0, -2.0});
  CHECK_THROWS_AS(bessel_derivative(f, 65), DomainError);
}

TEST_CASE("canonical Gaussian derivatives alternate in sign exactly") {
  const auto phi = GaussHermiteFunction::gaussian(0.0, 0.5);
  for (int q = 0; q <= 20; ++q) {
    const auto g = bessel_derivative(phi, q);
    CHECK(g.rate() == 0.5);
    CHECK(g.coeffs() == std::vector<double>{q % 2 == 0 ? 1.0 : -1.0});
  }
}

TEST_CASE("repeated single derivatives equal one call with q") {
  const GaussHermiteFunction f(0.5, 0.75, {1.0, -2.0, 0.5, 0.25});
  GaussPoly step = f.core();
  for (int q = 1; q <= 12; ++q) {
    step = step.xinv_derivative(1);
    CHECK(step == bessel_derivative(f, q));
  }
}

TEST_CASE("bessel_derivative matches a finite difference of the core") {
  const GaussHermiteFunction f(1.0, 0.3, {0.5, 1.0, -0.2});
  const auto g = bessel_derivative(f, 1);
  for (double x : {0.3, 1.0, 2.2}) {
    const double h = 1e-5;
    const double fd = (f.core()(x + h) - f.core()(x - h)) / (2 * h) / x;
    CHECK(g(x) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("leibniz_residual: worked examples") {
  const auto phi = GaussHermiteFunction::gaussian(0.0, 0.5);
  CHECK(leibniz_residual(GaussPoly::constant(1.0), GaussHermiteFunction(0.7, 0.4, {1.0, 3.0}), 3, 2.0) <= 1e-12);
  CHECK(leibniz_residual(GaussPoly(1.0, {1.0}), phi, 1, 1.0) <= 1e-12);
  CHECK(leibniz_residual(GaussPoly(0.0, {0.0, 1.0}), phi, 2, 0.5) <= 1e-12);
  CHECK_THROWS_AS(leibniz_residual(GaussPoly(-1.0, {1.0}), phi, 1, 1.0), DomainError);
  CHECK_THROWS_AS(leibniz_residual(GaussPoly(1.0, {1.0}), phi, 9, 1.0), DomainError);
}

TEST_CASE("leibniz rule holds across a parameter sweep") {
  const std::vector<GaussPoly> psis = {GaussPoly(0.0, {1.0, 0.0, 2.0}), GaussPoly(0.25, {-1.0, 0.5}),
                                       GaussPoly(1.0, {0.0, 0.0, 0.0, 1.0})};
  const std::vector<GaussHermiteFunction> phis = {GaussHermiteFunction::gaussian(-0.5, 0.5),
                                                  GaussHermiteFunction(2.0, 0.8, {1.0, -1.0, 0.3})};
  for (const auto& psi : psis)
    for (const auto& phi : phis)
      for (int k = 0; k <= 8; ++k)
        for (double x : {0.1, 0.5, 1.0, 2.0}) {
          const double scale = 1.0 + std::abs((psi * phi.core()).xinv_derivative(k)(x));
          CHECK(leibniz_residual(psi, phi, k, x) <= 1e-12 * scale * std::pow(4.0, k));
        }
}

TEST_CASE("sampling round trip on a 512-point grid") {
  for (double mu : {-0.5, 0.0, 1.5}) {
    const GaussHermiteFunction f(mu, 0.5, {1.0, 0.3});
    const auto grid = log_grid(1e-2, 6.0, 512);
    const auto s = SampledFunction::sample([&](double x) { return f(x); }, grid, Interpolation::cubic_local,
                                           mu + 0.5);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double x = 0.5 * (grid[i] + grid[i + 1]);
      worst = std::max(worst, std::abs(s(x) - f(x)) / std::abs(f(x)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("sampled function extrapolation") {
  const SampledFunction s({1.0, 2.0, 3.0, 4.0}, {1.0, 4.0, 9.0, 16.0}, Interpolation::cubic_local, 2.0);
  CHECK(s(2.5) == doctest::Approx(6.25));
  CHECK(s(0.5) == doctest::Approx(0.25));
  CHECK(s(4.0) == doctest::Approx(16.0));
  CHECK(s(4.5) == 0.0);
}
