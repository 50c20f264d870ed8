#pragma once

#include <cmath>

#include "hankel/errors.hpp"

namespace hankel {

/// Order of a Bessel function of the first kind. Always finite and >= -1/2.
class BesselOrder {
 public:
  explicit BesselOrder(double nu);

  double value() const noexcept { return nu_; }
  BesselOrder shifted(double delta) const { return BesselOrder(nu_ + delta); }

  friend bool operator==(const BesselOrder&, const BesselOrder&) = default;

 private:
  double nu_;
};

/// log Gamma(x) for x > 0 (Lanczos, g = 7, nine terms).
double log_gamma(double x);
/// Gamma(x) for x > 0.
double gamma_fn(double x);

/// J_nu(x) for x >= 0.
///
/// Ascending series (evaluated in extended precision) for x <= 20 or x <= nu;
/// otherwise Hankel's large-argument expansion for the fractional base order
/// followed by upward recurrence, which is stable while the order stays below x.
double bessel_j(BesselOrder order, double x);

/// Extended-precision kernel behind bessel_j. Used by finite-difference
/// checks that need headroom beyond double rounding.
long double bessel_j_extended(long double nu, long double x);

/// x^{-nu} J_nu(x) written as a function of s = x^2:
///   sum_k (-s/4)^k / (k! Gamma(k + nu + 1)) / 2^nu.
/// Entire in s, so negative s (the modified-Bessel continuation) is accepted.
double bessel_j_scaled_sq(double nu, double s);

/// j_mu(x) = x^{1/2} J_mu(x); the limit sqrt(2/pi) is returned at x = 0 for mu = -1/2.
double j_mu(BesselOrder order, double x);

/// Classical bound sup_x |x^{-nu} J_nu(x)| <= 2^{-nu} / Gamma(nu + 1), nu >= -1/2.
double scaled_bessel_bound(double nu);

enum class DerivativeVariant { lowering, raising };

/// |LHS - RHS| for
///   lowering: (x^{-1}d/dx)^k (x^{-mu} J_mu(x)) = (-1)^k x^{-(mu+k)} J_{mu+k}(x)
///   raising:  (x^{-1}d/dx)^k (x^{mu}  J_mu(x)) = x^{mu-k} J_{mu-k}(x)
/// The left side is differentiated numerically (nested central differences,
/// Richardson-extrapolated); the right side is evaluated directly.
/// Requires k <= 6, x > 0; raising requires mu - k >= -1/2.
double derivative_identity_residual(BesselOrder order, int k, double x,
                                    DerivativeVariant variant);

/// Right-hand side of the identity checked by derivative_identity_residual.
double derivative_identity_rhs(BesselOrder order, int k, double x,
                               DerivativeVariant variant);

}  // namespace hankel
