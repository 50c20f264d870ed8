#pragma once

#include <vector>

#include "hankel/function_model.hpp"
#include "hankel/quadrature.hpp"

namespace hankel {

struct TransformPlan {
  BesselOrder mu{0.0};
  std::vector<double> output_grid;
  QuadratureSpec spec;

  /// 64 log-spaced points on [0.05, 12] with the default quadrature spec.
  static TransformPlan defaults(BesselOrder mu);
  /// Throws UsageError on an empty, unsorted or out-of-range grid (must lie in (0, 80]).
  void validate() const;
};

struct TransformResult {
  SampledFunction values;  // origin exponent mu + 1/2
  std::vector<double> error_estimates;
  std::vector<bool> converged;
  int failures = 0;
};

/// (h_mu phi)(y) = integral_0^inf (xy)^{1/2} J_mu(xy) phi(x) dx at one point.
IntegralResult hankel_transform_at(const RealFunction& f, BesselOrder mu, double y, const QuadratureSpec& spec);

/// h_mu phi on the plan grid. Per-point non-convergence is recorded; throws
/// NumericalError only when more than 10% of the points fail.
TransformResult hankel_transform(const RealFunction& f, const TransformPlan& plan);

/// Exact transform on the closed family. The rate p becomes 1/(4p) and the degree is kept.
/// Built from h_mu(x^{mu+1/2} e^{-px^2}) = (2p)^{-(mu+1)} y^{mu+1/2} e^{-y^2/(4p)} and
/// h_mu(x^2 phi) = -S_mu h_mu phi.
GaussHermiteFunction hankel_transform_exact(const GaussHermiteFunction& f);

enum class TransformRelation { shift_down, shift_up, s_operator };

/// |LHS(y) - RHS(y)| for
///   shift_down: h_{mu+1}(-x phi) = N_mu h_mu phi
///   shift_up:   h_{mu+1}(N_mu phi) = -y h_mu phi
///   s_operator: h_mu(S_mu phi) = -y^2 h_mu phi
/// LHS by quadrature, RHS by exact family operations. y in (0, 20].
double transform_relation_residual(const GaussHermiteFunction& f, TransformRelation relation, double y,
                                   const QuadratureSpec& spec = QuadratureSpec::defaults());

/// Right-hand side of the relation at y, exact.
double transform_relation_rhs(const GaussHermiteFunction& f, TransformRelation relation, double y);

}  // namespace hankel
