#include "hankel/hankel_transform.hpp"

#include <cmath>
#include <string>

#include "hankel/diffops.hpp"
#include "hankel/errors.hpp"

namespace hankel {

namespace {

constexpr double kGridCeiling = 80.0;

}  // namespace

TransformPlan TransformPlan::defaults(BesselOrder mu) {
  return TransformPlan{mu, log_grid(0.05, 12.0, 64), QuadratureSpec::defaults()};
}

void TransformPlan::validate() const {
  if (output_grid.empty()) throw UsageError("transform grid is empty");
  for (std::size_t i = 0; i < output_grid.size(); ++i) {
    if (!(output_grid[i] > 0) || output_grid[i] > kGridCeiling)
      throw UsageError("transform grid points must lie in (0, 80]");
    if (i > 0 && !(output_grid[i] > output_grid[i - 1])) throw UsageError("transform grid must be increasing");
  }
  spec.validate();
}

IntegralResult hankel_transform_at(const RealFunction& f, BesselOrder mu, double y, const QuadratureSpec& spec) {
  if (!(y > 0)) throw DomainError("transform point must be > 0");
  const RealFunction envelope = [&f, y](double x) {
    const double v = f(x);
    return v == 0.0 ? 0.0 : std::sqrt(x * y) * v;
  };
  return integrate_bessel_oscillatory(envelope, {y}, {mu}, spec);
}

TransformResult hankel_transform(const RealFunction& f, const TransformPlan& plan) {
  plan.validate();
  const auto& grid = plan.output_grid;
  std::vector<double> values(grid.size()), errors(grid.size());
  std::vector<bool> ok(grid.size());
  int failures = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto r = hankel_transform_at(f, plan.mu, grid[i], plan.spec);
    values[i] = std::isfinite(r.value) ? r.value : 0.0;
    errors[i] = r.error_estimate;
    ok[i] = r.converged && std::isfinite(r.value);
    if (!ok[i]) ++failures;
  }
  if (10 * failures > static_cast<int>(grid.size()))
    throw NumericalError("Hankel transform failed to converge at " + std::to_string(failures) + " of " +
                         std::to_string(grid.size()) + " points");
  // a one-point grid cannot form a SampledFunction; repeat the point just beyond it
  std::vector<double> g = grid;
  if (g.size() == 1) {
    g.push_back(g[0] * (1.0 + 1e-12));
    values.push_back(values[0]);
  }
  return TransformResult{SampledFunction(std::move(g), std::move(values), Interpolation::cubic_local,
                                         plan.mu.value() + 0.5),
                         std::move(errors), std::move(ok), failures};
}

GaussHermiteFunction hankel_transform_exact(const GaussHermiteFunction& f) {
  const double p = f.rate();
  const double mu = f.mu();
  const double amp = std::exp(-(mu + 1.0) * std::log(2.0 * p));
  // transform of x^{mu+1/2} u^j e^{-pu} is (-S_mu)^j of the base transform
  GaussHermiteFunction term(f.order(), GaussPoly(1.0 / (4.0 * p), {amp}));
  const auto& c = f.core().coeffs();
  GaussPoly acc = GaussPoly::zero(term.rate());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j > 0) term = apply_S(term).scaled(-1.0);
    acc = acc + term.core().scaled(c[j]);
  }
  return {f.order(), acc};
}

double transform_relation_rhs(const GaussHermiteFunction& f, TransformRelation relation, double y) {
  const auto hat = hankel_transform_exact(f);
  switch (relation) {
    case TransformRelation::shift_down:
      return apply_N(hat)(y);
    case TransformRelation::shift_up:
      return -y * hat(y);
    case TransformRelation::s_operator:
      return -y * y * hat(y);
  }
  throw DomainError("relation must be 14, 15 or 16");
}

double transform_relation_residual(const GaussHermiteFunction& f, TransformRelation relation, double y,
                                   const QuadratureSpec& spec) {
  if (!(y > 0) || y > 20.0) throw DomainError("relation residual requires y in (0, 20]");
  const double rhs = transform_relation_rhs(f, relation, y);
  IntegralResult lhs;
  switch (relation) {
    case TransformRelation::shift_down: {
      // -x phi carries order mu + 1 with the same core
      const GaussHermiteFunction g(f.order().shifted(1.0), f.core().scaled(-1.0));
      lhs = hankel_transform_at([&g](double x) { return g(x); }, g.order(), y, spec);
      break;
    }
    case TransformRelation::shift_up: {
      const auto g = apply_N(f);
      lhs = hankel_transform_at([&g](double x) { return g(x); }, g.order(), y, spec);
      break;
    }
    case TransformRelation::s_operator: {
      const auto g = apply_S(f);
      lhs = hankel_transform_at([&g](double x) { return g(x); }, g.order(), y, spec);
      break;
    }
  }
  if (!lhs.converged)
    throw NumericalError("relation left side did not converge at y = " + std::to_string(y) +
                         " (error estimate " + std::to_string(lhs.error_estimate) + ")");
  return std::abs(lhs.value - rhs);
}

}  // namespace hankel
