#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hankel/errors.hpp"
#include "hankel/hankel_transform.hpp"

using namespace hankel;

namespace {

double laguerre(int n, double alpha, double x) {
  if (n == 0) return 1.0;
  double l0 = 1.0, l1 = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double l2 = ((2.0 * k + 1.0 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

// Independent oracle: integral x^{mu+2j+1} e^{-px^2} J_mu(xy) dx
//   = j! y^mu / (2^{mu+1} p^{mu+j+1}) e^{-y^2/(4p)} L_j^{mu}(y^2/(4p)),
// summed over the polynomial coefficients.
double laguerre_oracle(const GaussHermiteFunction& f, double y) {
  const double p = f.rate(), mu = f.mu();
  const double s = y * y / (4 * p);
  double acc = 0.0;
  double fact = 1.0;
  const auto& c = f.core().coeffs();
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    acc += c[j] * fact / std::pow(p, static_cast<double>(j)) * laguerre(static_cast<int>(j), mu, s);
  }
  return acc * std::pow(y, mu + 0.5) * std::exp(-s) / std::pow(2.0, mu + 1.0) / std::pow(p, mu + 1.0);
}

const std::vector<double> kOrders = {-0.5, 0.0, 0.5, 1.0, 2.5};

}  // namespace

TEST_CASE("quadrature transform: worked examples") {
  const auto phi = GaussHermiteFunction::gaussian(0.0, 0.5);
  const auto r = hankel_transform([&](double x) { return phi(x); }, TransformPlan::defaults(BesselOrder(0.0)));
  CHECK(r.failures == 0);
  for (double y : r.values.grid()) {
    CHECK(std::abs(hankel_transform_at([&](double x) { return phi(x); }, BesselOrder(0.0), y,
                                       QuadratureSpec::defaults())
                       .value -
                   std::sqrt(y) * std::exp(-y * y / 2)) <= 1e-7);
  }
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const double y = r.values.grid()[i];
    CHECK(std::abs(r.values.values()[i] - std::sqrt(y) * std::exp(-y * y / 2)) <= 1e-7);
  }

  const auto zero = hankel_transform([](double) { return 0.0; }, TransformPlan::defaults(BesselOrder(0.0)));
  for (double v : zero.values.values()) CHECK(v == 0.0);

  const auto g = GaussHermiteFunction::gaussian(1.0, 1.0);
  const auto at1 = hankel_transform_at([&](double x) { return g(x); }, BesselOrder(1.0), 1.0, QuadratureSpec::defaults());
  CHECK(at1.converged);
  CHECK(at1.value == doctest::Approx(0.25 * std::exp(-0.25)).epsilon(1e-9));
  CHECK(at1.value == doctest::Approx(0.194700).epsilon(1e-5));
}

TEST_CASE("exact transform: worked examples") {
  const auto self = hankel_transform_exact(GaussHermiteFunction::gaussian(0.0, 0.5));
  CHECK(self.rate() == 0.5);
  REQUIRE(self.core().coeffs().size() == 1);
  CHECK(self.core().coeffs()[0] == doctest::Approx(1.0).epsilon(1e-15));

  const auto h = hankel_transform_exact(GaussHermiteFunction::gaussian(0.0, 1.0));
  CHECK(h.rate() == 0.25);
  CHECK(h.core().coeffs()[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("exact transform is an involution on the family") {
  for (double mu : kOrders) {
    const GaussHermiteFunction f(mu, 0.7, {1.0, -0.5, 0.25, 0.125});
    const auto back = hankel_transform_exact(hankel_transform_exact(f));
    CHECK(back.rate() == doctest::Approx(f.rate()).epsilon(1e-15));
    REQUIRE(back.core().coeffs().size() == f.core().coeffs().size());
    for (std::size_t j = 0; j < f.core().coeffs().size(); ++j)
      CHECK(back.core().coeffs()[j] == doctest::Approx(f.core().coeffs()[j]).epsilon(1e-12));
  }
}

TEST_CASE("exact transform agrees with the Laguerre closed form") {
  for (double mu : kOrders) {
    const GaussHermiteFunction f(mu, 0.4, {0.5, 1.0, -0.3, 0.05});
    const auto hat = hankel_transform_exact(f);
    for (double y : {0.05, 0.3, 1.0, 2.5, 5.0, 9.0})
      CHECK(hat(y) == doctest::Approx(laguerre_oracle(f, y)).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("exact and quadrature paths agree to 1e-8") {
  const auto spec = QuadratureSpec::defaults();
  for (double mu : kOrders) {
    const GaussHermiteFunction f(mu, 0.5, {1.0, 0.5, -0.25});
    const auto hat = hankel_transform_exact(f);
    for (double y : {0.05, 0.5, 1.0, 3.0, 7.0, 12.0}) {
      const auto r = hankel_transform_at([&](double x) { return f(x); }, f.order(), y, spec);
      CHECK(r.converged);
      CHECK(std::abs(r.value - hat(y)) <= 1e-8);
    }
  }
}

TEST_CASE("the p = 1/2 Gaussian is fixed by the transform") {
  for (double mu : kOrders) {
    const auto phi = GaussHermiteFunction::gaussian(mu, 0.5);
    const auto r = hankel_transform([&](double x) { return phi(x); }, TransformPlan::defaults(phi.order()));
    for (std::size_t i = 0; i < r.values.size(); ++i)
      CHECK(std::abs(r.values.values()[i] - phi(r.values.grid()[i])) <= 1e-7);
  }
}

TEST_CASE("two quadrature transforms return the original values") {
  for (double mu : {0.0, 1.5}) {
    const GaussHermiteFunction f(mu, 0.5, {1.0, -0.5, 0.1});
    TransformPlan dense{f.order(), uniform_grid(0.02, 16.0, 800), QuadratureSpec::defaults()};
    const auto hat = hankel_transform([&](double x) { return f(x); }, dense);
    REQUIRE(hat.failures == 0);
    const auto back = hankel_transform([&](double y) { return hat.values(y); }, TransformPlan::defaults(f.order()));
    double worst = 0.0;
    for (std::size_t i = 0; i < back.values.size(); ++i)
      worst = std::max(worst, std::abs(back.values.values()[i] - f(back.values.grid()[i])));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("transform relations: worked examples") {
  const auto phi = GaussHermiteFunction::gaussian(0.0, 0.5);
  CHECK(transform_relation_rhs(phi, TransformRelation::s_operator, 1.0) ==
        doctest::Approx(-std::exp(-0.5)).epsilon(1e-14));
  CHECK(transform_relation_residual(phi, TransformRelation::s_operator, 1.0) <= 1e-6);
  CHECK(transform_relation_residual(phi, TransformRelation::shift_up, 2.0) <= 1e-6);
  const GaussHermiteFunction zero(0.0, 0.5, {0.0});
  for (auto rel : {TransformRelation::shift_down, TransformRelation::shift_up, TransformRelation::s_operator})
    CHECK(transform_relation_residual(zero, rel, 1.7) == 0.0);
  CHECK_THROWS_AS(transform_relation_residual(phi, TransformRelation::s_operator, 25.0), DomainError);
}

TEST_CASE("transform relations hold across the family") {
  for (double mu : {-0.5, 0.0, 1.0, 2.5})
    for (int degree = 0; degree <= 3; ++degree) {
      std::vector<double> c(degree + 1);
      for (int j = 0; j <= degree; ++j) c[j] = (j % 2 == 0 ? 1.0 : -0.5) / (j + 1);
      const GaussHermiteFunction f(mu, 0.6, c);
      for (auto rel : {TransformRelation::shift_down, TransformRelation::shift_up, TransformRelation::s_operator})
        for (double y : {0.1, 1.0, 2.5, 6.0}) {
          const double rhs = transform_relation_rhs(f, rel, y);
          CHECK(transform_relation_residual(f, rel, y) <= 1e-6 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("plan validation") {
  auto plan = TransformPlan::defaults(BesselOrder(0.0));
  plan.output_grid = {1.0, 90.0};
  CHECK_THROWS_AS(plan.validate(), UsageError);
  plan.output_grid = {};
  CHECK_THROWS_AS(plan.validate(), UsageError);
  plan.output_grid = {2.0, 1.0};
  CHECK_THROWS_AS(plan.validate(), UsageError);
}
