#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "hankel/errors.hpp"
#include "hankel/translation.hpp"

using namespace hankel;

namespace {

// first positive zero of J_mu by bracketing and bisection
double first_zero(BesselOrder mu) {
  double a = 0.5, b = 0.5;
  while (bessel_j(mu, b) > 0) b += 0.25;
  a = b - 0.25;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (bessel_j(mu, m) > 0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

KernelTableSpec light_table() {
  KernelTableSpec t;
  t.extent = 6.5;
  t.z_extent = 9.0;
  return t;
}

}  // namespace

TEST_CASE("kernel: worked examples") {
  const BesselOrder one(1.0);
  const auto outside = kernel_D(one, 1.0, 3.0, 1.0);
  CHECK(outside.converged);
  CHECK(std::abs(outside.value) <= 1e-5);

  const auto a = kernel_D(one, 1.0, 1.5, 1.0);
  const auto b = kernel_D(one, 1.5, 1.0, 1.0);
  CHECK(std::abs(a.value - b.value) <= 2 * std::max(a.error_estimate, b.error_estimate) + 1e-15);

  auto oracle_spec = kernel_quadrature_defaults();
  oracle_spec.abs_tol = 1e-7;
  oracle_spec.truncation = 800.0;
  const auto d = kernel_D(one, 1.0, 1.0, 1.0);
  const auto o = kernel_D(one, 1.0, 1.0, 1.0, oracle_spec);
  CHECK(d.value > 0);
  CHECK(std::abs(d.value - o.value) <= 1e-6);
}

TEST_CASE("kernel at mu = 1/2 matches its closed form") {
  // j_{1/2}(x) = sqrt(2/pi) sin x, so D = (2/pi)^{3/2} pi/4 inside the triangle and 0 outside
  const double inside = std::pow(2.0 / std::numbers::pi, 1.5) * std::numbers::pi / 4.0;
  const BesselOrder half(0.5);
  for (auto [y, w, z] : std::vector<std::array<double, 3>>{{1.0, 1.2, 0.7}, {2.0, 2.5, 1.5}, {0.8, 0.9, 0.6}}) {
    const auto r = kernel_D(half, y, w, z);
    CHECK(r.converged);
    CHECK(std::abs(r.value - inside) <= 1e-6);
  }
  for (auto [y, w, z] : std::vector<std::array<double, 3>>{{1.0, 3.0, 1.0}, {3.0, 0.5, 1.0}}) {
    const auto r = kernel_D(half, y, w, z);
    CHECK(std::abs(r.value) <= 1e-6);
  }
}

TEST_CASE("kernel: permutation symmetry and triangle support") {
  for (double mu : {0.5, 1.0, 2.5}) {
    const BesselOrder m(mu);
    const std::array<double, 3> t{0.9, 1.6, 1.1};
    const auto base = kernel_D(m, t[0], t[1], t[2]);
    for (auto [i, j, k] : std::vector<std::array<int, 3>>{{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}) {
      const auto p = kernel_D(m, t[i], t[j], t[k]);
      CHECK(std::abs(p.value - base.value) <= 2 * std::max(p.error_estimate, base.error_estimate) + 1e-14);
    }
    CHECK(std::abs(kernel_D(m, 0.5, 3.0, 1.2).value) <= 1e-4);
    CHECK(std::abs(kernel_D(m, 3.5, 0.4, 1.0).value) <= 1e-4);
  }
}

TEST_CASE("kernel requires acceleration for mu <= 1/2") {
  QuadratureSpec plain = kernel_quadrature_defaults();
  plain.acceleration = Acceleration::none;
  CHECK_THROWS_AS(kernel_D(BesselOrder(0.0), 1.0, 1.0, 1.0, plain), UsageError);
  CHECK_NOTHROW(kernel_D(BesselOrder(2.5), 1.0, 1.0, 1.0, plain));
  CHECK_THROWS_AS(kernel_D(BesselOrder(1.0), 0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("translate: spectral route worked example") {
  const auto phi = GaussHermiteFunction::gaussian(0.0, 0.5);
  const BesselOrder mu(0.0);
  const auto tau = translate(phi, 1.0, mu, {1.0});
  // h_0 of u^{-1/2} j_0(u) u^{1/2} e^{-u^2/2} = J_0(u) u^{1/2} e^{-u^2/2}, at w = 1
  const auto ref = hankel_transform_at(
      [](double u) { return bessel_j(BesselOrder(0.0), u) * std::sqrt(u) * std::exp(-u * u / 2); }, mu, 1.0,
      QuadratureSpec::defaults());
  CHECK(tau(1.0) == doctest::Approx(ref.value).epsilon(1e-9));

  const auto zero = translate(GaussHermiteFunction(0.0, 0.5, {0.0}), 0.7, mu, {0.5, 1.0, 2.0});
  for (double v : zero.values()) CHECK(v == 0.0);
  CHECK_THROWS_AS(translate(phi, 5.0, mu, {1.0}), DomainError);
  CHECK_THROWS_AS(translate(phi, 1.0, BesselOrder(1.0), {1.0}), DomainError);
}

TEST_CASE("translate: direct and spectral routes agree") {
  const auto phi = GaussHermiteFunction::gaussian(0.0, 0.5);
  TranslationOptions opt;
  opt.table = light_table();
  opt.cross_check = true;
  const std::vector<double> grid{0.25, 0.5, 1.0, 1.5, 2.5};
  const auto r = translate(phi, 0.5, BesselOrder(0.0), grid, opt);
  opt.cross_check = false;
  opt.route = Route::direct;
  const auto d = translate(phi, 0.5, BesselOrder(0.0), grid, opt);
  opt.route = Route::spectral;
  const auto s = translate(phi, 0.5, BesselOrder(0.0), grid, opt);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(d.values()[i] - s.values()[i]) <= 1e-4);
    CHECK(r.values()[i] == s.values()[i]);
  }
}

TEST_CASE("translate: pointwise input on the spectral route") {
  const auto phi = GaussHermiteFunction(1.0, 0.5, {1.0, 0.2});
  const std::vector<double> grid{0.5, 1.0, 2.0};
  TranslationOptions opt;
  opt.spectral_grid = uniform_grid(0.02, 12.0, 300);
  const auto exact = translate(phi, 0.8, phi.order(), grid, opt);
  const auto sampled = translate(InputFunction(RealFunction([&](double x) { return phi(x); })), 0.8, phi.order(), grid, opt);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(exact.values()[i] - sampled.values()[i]) <= 1e-5);
}

TEST_CASE("convolve: worked examples") {
  const auto phi = GaussHermiteFunction::gaussian(0.0, 0.5);
  const std::vector<double> grid = log_grid(0.05, 8.0, 40);
  const auto c = convolve(phi, phi, BesselOrder(0.0), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = grid[i];
    CHECK(std::abs(c.values()[i] - 0.5 * std::sqrt(z) * std::exp(-z * z / 4)) <= 1e-5);
  }
  const auto zero = convolve(GaussHermiteFunction(0.0, 0.5, {0.0}), phi, BesselOrder(0.0), grid);
  for (double v : zero.values()) CHECK(v == 0.0);

  const GaussHermiteFunction psi(0.0, 0.8, {1.0, -0.3});
  const auto ab = convolve(phi, psi, BesselOrder(0.0), grid);
  const auto ba = convolve(psi, phi, BesselOrder(0.0), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(ab.values()[i] - ba.values()[i]) <= 2e-5);
}

TEST_CASE("convolve: direct route agrees with the closed form") {
  const auto phi = GaussHermiteFunction::gaussian(1.0, 0.5);
  TranslationOptions opt;
  opt.table = light_table();
  opt.route = Route::direct;
  const std::vector<double> grid{0.5, 1.0, 2.0, 3.0};
  const auto d = convolve(phi, phi, phi.order(), grid, opt);
  const auto exact = convolve_exact(phi, phi);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(d.values()[i] - exact(grid[i])) <= 1e-4);
}

TEST_CASE("translation identity through explicit kernel values") {
  const auto phi = GaussHermiteFunction::gaussian(1.0, 0.5);
  for (const auto& c : translation_identity(phi, 1.0, {0.5, 1.0, 2.0}, light_table()))
    CHECK(c.residual <= 5e-4 * (1.0 + std::abs(c.rhs)));

  // at a zero of j_mu(uz) the right side vanishes, and so must the left
  const double u0 = first_zero(phi.order());
  const auto at_zero = translation_identity(phi, 1.0, {u0}, light_table());
  CHECK(std::abs(at_zero[0].rhs) <= 1e-12);
  CHECK(std::abs(at_zero[0].lhs) <= 5e-4);
}

TEST_CASE("convolution identity through explicit kernel values") {
  auto table = light_table();
  table.nodes = 12;
  const auto phi = GaussHermiteFunction::gaussian(0.5, 0.5);
  for (const auto& c : convolution_identity(phi, phi, {2.0}, table))
    CHECK(c.residual <= 5e-4 * (1.0 + std::abs(c.rhs)));
}
