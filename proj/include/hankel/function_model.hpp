#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hankel/special_functions.hpp"

namespace hankel {

using RealFunction = std::function<double(double)>;

/// P(u) e^{-rate u} with u = x^2, P stored by ascending coefficients.
///
/// This is the even smooth factor left over once the x^{mu+1/2} prefactor of a
/// family member is divided out. (x^{-1} d/dx) acts on it as 2 d/du, so every
/// operator in the library reduces to exact coefficient arithmetic here.
/// Rates may be zero (polynomials) or negative (growing symbols such as e^{y^2}).
class GaussPoly {
 public:
  GaussPoly(double rate, std::vector<double> coeffs);

  static GaussPoly constant(double c) { return GaussPoly(0.0, {c}); }
  static GaussPoly zero(double rate = 0.0) { return GaussPoly(rate, {0.0}); }

  double rate() const noexcept { return rate_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept;

  double at_u(double u) const;
  double operator()(double x) const { return at_u(x * x); }

  /// (x^{-1} d/dx)^q applied q times: P -> 2P' - 2 rate P per application.
  GaussPoly xinv_derivative(int q = 1) const;
  /// Multiplication by u = x^2.
  GaussPoly times_u() const;
  GaussPoly scaled(double s) const;

  friend GaussPoly operator*(const GaussPoly& a, const GaussPoly& b);
  /// Requires equal rates.
  friend GaussPoly operator+(const GaussPoly& a, const GaussPoly& b);
  friend GaussPoly operator-(const GaussPoly& a, const GaussPoly& b);
  friend bool operator==(const GaussPoly&, const GaussPoly&) = default;

 private:
  double rate_;
  std::vector<double> coeffs_;
};

/// phi(x) = x^{mu+1/2} P(x^2) e^{-p x^2}, p > 0.
///
/// The order index mu is carried explicitly so ladder chains (N_{mu+1} N_mu ...)
/// can check that each rung sees the order it expects.
class GaussHermiteFunction {
 public:
  GaussHermiteFunction(BesselOrder order, GaussPoly core);
  GaussHermiteFunction(double mu, double p, std::vector<double> coeffs)
      : GaussHermiteFunction(BesselOrder(mu), GaussPoly(p, std::move(coeffs))) {}

  static GaussHermiteFunction gaussian(double mu, double p, double amplitude = 1.0) {
    return GaussHermiteFunction(mu, p, {amplitude});
  }

  BesselOrder order() const noexcept { return order_; }
  double mu() const noexcept { return order_.value(); }
  double rate() const noexcept { return core_.rate(); }
  const GaussPoly& core() const noexcept { return core_; }
  bool is_zero() const noexcept { return core_.is_zero(); }

  /// Exact value; x >= 0 (the x -> 0+ limit is returned at 0).
  double operator()(double x) const;

  GaussHermiteFunction scaled(double s) const { return {order_, core_.scaled(s)}; }
  friend GaussHermiteFunction operator+(const GaussHermiteFunction& a, const GaussHermiteFunction& b);
  friend bool operator==(const GaussHermiteFunction&, const GaussHermiteFunction&) = default;

 private:
  BesselOrder order_;
  GaussPoly core_;
};

/// g_q(x) = (x^{-1} d/dx)^q (x^{-mu-1/2} phi(x)), exact. q <= 64.
GaussPoly bessel_derivative(const GaussHermiteFunction& f, int q);

/// |LHS - RHS| of the Leibniz rule
///   (x^{-1}d/dx)^k (x^{-mu-1/2} psi phi) = sum_v C(k,v) (x^{-1}d/dx)^v psi (x^{-1}d/dx)^{k-v}(x^{-mu-1/2} phi)
/// with both sides built by exact coefficient arithmetic. psi = Q(x^2) e^{-r x^2}, r >= 0; k <= 8.
double leibniz_residual(const GaussPoly& psi, const GaussHermiteFunction& phi, int k, double x);

enum class Interpolation { cubic_local, linear };

/// Grid samples of a real function on (0, inf).
///
/// Interpolation acts on values / x^{origin_exponent}, so a function that
/// behaves like x^{mu+1/2} near the origin is interpolated through its smooth
/// even part. Beyond the last grid point the function is zero; below the first
/// grid point the normalized value is held constant.
class SampledFunction {
 public:
  SampledFunction(std::vector<double> grid, std::vector<double> values,
                  Interpolation interp = Interpolation::cubic_local, double origin_exponent = 0.0);

  static SampledFunction sample(const RealFunction& f, std::vector<double> grid,
                                Interpolation interp = Interpolation::cubic_local,
                                double origin_exponent = 0.0);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  Interpolation interpolation() const noexcept { return interp_; }
  double origin_exponent() const noexcept { return origin_exponent_; }
  std::size_t size() const noexcept { return grid_.size(); }

  double operator()(double x) const;

 private:
  double normalized(std::size_t i) const { return normalized_[i]; }

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> normalized_;
  Interpolation interp_;
  double origin_exponent_;
};

/// n log-spaced points on [a, b].
std::vector<double> log_grid(double a, double b, std::size_t n);
/// n equally spaced points on [a, b].
std::vector<double> uniform_grid(double a, double b, std::size_t n);

}  // namespace hankel
