#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hankel/function_model.hpp"

namespace hankel {

enum class Acceleration { none, alternating_series };

struct QuadratureSpec {
  int nodes = 16;  // Gauss-Legendre nodes per panel
  double truncation = 60.0;
  bool zero_splitting = true;
  Acceleration acceleration = Acceleration::none;
  double abs_tol = 1e-9;
  int max_panels = 8192;

  /// Throws UsageError when a field is out of range.
  void validate() const;
  /// Sets one field from its config-file spelling, e.g. ("abs_tol", "1e-8").
  void set(const std::string& key, const std::string& value);
  /// Defaults, with abs_tol taken from HANKEL_DEFAULT_TOL when that is set.
  static QuadratureSpec defaults();
};

std::string to_string(Acceleration a);

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels_used = 0;
  bool converged = false;
};

/// Gauss-Legendre nodes and weights on [-1, 1], n in [4, 64]. Computed once per n.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// integral of f over [a, b] with one n-node Gauss-Legendre panel.
double gl_panel(const RealFunction& f, double a, double b, int n);

/// integral_0^{X_max} f by uniform composite Gauss-Legendre, doubling the panel
/// count from 8 until successive estimates agree to abs_tol. The first panel is
/// mapped by x = t^2, so x^{-1/2} behaviour at the origin is integrated smoothly.
IntegralResult integrate(const RealFunction& f, const QuadratureSpec& spec);

/// integral_0^inf envelope(t) prod_i J_{orders[i]}(frequencies[i] t) dt.
///
/// Panels have width at most pi / sum(frequencies), the half period of the
/// fastest component of the product, and are halved until each panel agrees
/// with its two-half refinement. With alternating-series acceleration the
/// panel partial sums over the last 4/5 of [0, X_max] are averaged under a
/// smooth compact bump; the error estimate is the change when the window is
/// shortened to the last half. converged is false when the tail panel
/// contributions do not change sign.
IntegralResult integrate_bessel_oscillatory(const RealFunction& envelope, const std::vector<double>& frequencies,
                                            const std::vector<BesselOrder>& orders, const QuadratureSpec& spec);

/// The integral of |f|^p x^{mu+1/2} over (0, inf), without a p-th root.
IntegralResult lp_mu_norm(const RealFunction& f, double p, BesselOrder mu, const QuadratureSpec& spec);

/// Pairwise sum in index order; deterministic.
double pairwise_sum(const std::vector<double>& v, std::size_t begin, std::size_t end);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v, 0, v.size()); }

}  // namespace hankel
