#include "hankel/special_functions.hpp"

#include <quadmath.h>

#include <array>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace hankel {

namespace {

using ld = long double;

constexpr ld kPiL = 3.141592653589793238462643383279502884L;
constexpr double kSeriesLimit = 20.0;

// Lanczos approximation, g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

ld series_j(ld nu, ld x) {
  const ld half = x / 2;
  ld term = std::exp(nu * std::log(half) - static_cast<ld>(log_gamma(static_cast<double>(nu) + 1.0)));
  const ld q = half * half;
  ld sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= -q / (static_cast<ld>(k) * (static_cast<ld>(k) + nu));
    sum += term;
    if (static_cast<ld>(k) > half && std::abs(term) <= 1e-22L * std::abs(sum)) break;
  }
  return sum;
}

// Hankel's expansion; valid for large x and modest order.
ld asymptotic_j(ld nu, ld x) {
  const ld mu = 4 * nu * nu;
  ld p = 1, q = 0;
  ld term = 1;
  ld last = std::numeric_limits<ld>::max();
  for (int k = 1; k < 60; ++k) {
    const ld odd = 2 * k - 1;
    term *= (mu - odd * odd) / (static_cast<ld>(k) * 8 * x);
    const ld mag = std::abs(term);
    if (mag > last) break;
    last = mag;
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (mag < 1e-22L) break;
  }
  // chi = x - (nu/2 + 1/4) pi, reduced before taking cos/sin
  const ld phase = std::fmod((nu / 2 + 0.25L) * kPiL, 2 * kPiL);
  const ld chi = x - phase;
  return std::sqrt(2 / (kPiL * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!std::isfinite(nu) || nu < -0.5)
    throw DomainError("Bessel order must be finite and >= -1/2, got " + std::to_string(nu));
}

double log_gamma(double x) {
  if (!(x > 0)) throw DomainError("log_gamma requires x > 0");
  if (x < 0.5) {
    // reflection keeps the Lanczos sum in its accurate range
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - log_gamma(1.0 - x);
  }
  const double z = x - 1.0;
  double a = kLanczos[0];
  const double t = z + kLanczosG + 0.5;
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  return 0.5 * std::log(2 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

long double bessel_j_extended(long double nu, long double x) {
  if (!(x >= 0) || !std::isfinite(static_cast<double>(x)))
    throw DomainError("bessel_j requires finite x >= 0");
  if (!(nu >= -0.5L)) throw DomainError("bessel_j requires order >= -1/2");
  if (x == 0) {
    if (nu == 0) return 1;
    if (nu > 0) return 0;
    return std::numeric_limits<ld>::infinity();
  }
  if (x <= kSeriesLimit || x <= nu) return series_j(nu, x);
  if (nu < 1) return asymptotic_j(nu, x);

  const ld base = nu - std::floor(nu);
  const int steps = static_cast<int>(std::floor(nu));
  ld prev = asymptotic_j(base, x);
  ld cur = asymptotic_j(base + 1, x);
  for (int n = 1; n < steps; ++n) {
    const ld order = base + n;
    const ld next = 2 * order / x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double bessel_j(BesselOrder order, double x) {
  return static_cast<double>(bessel_j_extended(order.value(), x));
}

double bessel_j_scaled_sq(double nu, double s) {
  if (!(nu >= -0.5)) throw DomainError("order must be >= -1/2");
  if (s > kSeriesLimit * kSeriesLimit) {
    const double x = std::sqrt(s);
    return static_cast<double>(bessel_j_extended(nu, x) / std::pow(static_cast<ld>(x), static_cast<ld>(nu)));
  }
  ld term = std::exp(-static_cast<ld>(log_gamma(nu + 1.0)) - static_cast<ld>(nu) * std::log(2.0L));
  ld sum = term;
  const ld q = static_cast<ld>(s) / 4;
  for (int k = 1; k < 1000; ++k) {
    term *= -q / (static_cast<ld>(k) * (static_cast<ld>(k) + nu));
    sum += term;
    if (static_cast<ld>(k) * k > std::abs(q) && std::abs(term) <= 1e-21L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

double j_mu(BesselOrder order, double x) {
  if (!(x >= 0)) throw DomainError("j_mu requires x >= 0");
  if (x == 0) {
    return order.value() == -0.5 ? std::sqrt(2.0 / std::numbers::pi) : 0.0;
  }
  return static_cast<double>(std::sqrt(static_cast<ld>(x)) * bessel_j_extended(order.value(), x));
}

double scaled_bessel_bound(double nu) {
  if (!(nu >= -0.5)) throw DomainError("order must be >= -1/2");
  return std::exp(-nu * std::numbers::ln2 - log_gamma(nu + 1.0));
}

namespace {

using quad = __float128;
using Fn = std::function<quad(quad)>;

// The finite-difference left side is evaluated with the ascending series in
// quad precision: nested stencils amplify rounding by ~1e3 per level near x = 0.1.
constexpr double kQuadSeriesReach = 30.0;

quad quad_series_j(double nu, quad x) {
  const quad half = x / 2;
  quad term = expq(static_cast<quad>(nu) * logq(half) - static_cast<quad>(log_gamma(nu + 1.0)));
  const quad q = half * half;
  quad sum = term;
  for (int k = 1; k < 800; ++k) {
    term *= -q / (static_cast<quad>(k) * (static_cast<quad>(k) + static_cast<quad>(nu)));
    sum += term;
    if (static_cast<quad>(k) > half && fabsq(term) <= static_cast<quad>(1e-32) * fabsq(sum)) break;
  }
  return sum;
}

quad central(const Fn& f, quad x, quad h) { return (f(x + h) - f(x - h)) / (2 * h); }

// Central difference at h, h/2, h/4 with two Richardson eliminations (O(h^6)).
quad richardson_derivative(const Fn& f, quad x, quad h) {
  const quad d0 = central(f, x, h);
  const quad d1 = central(f, x, h / 2);
  const quad d2 = central(f, x, h / 4);
  const quad e0 = (4 * d1 - d0) / 3;
  const quad e1 = (4 * d2 - d1) / 3;
  return (16 * e1 - e0) / 15;
}

quad nested_xinv_derivative(const Fn& f, int k, quad x, quad h) {
  if (k == 0) return f(x);
  Fn inner = [&](quad t) { return nested_xinv_derivative(f, k - 1, t, h); };
  return richardson_derivative(inner, x, h) / x;
}

}  // namespace

double derivative_identity_rhs(BesselOrder order, int k, double x, DerivativeVariant variant) {
  const ld mu = order.value();
  const ld xl = x;
  if (variant == DerivativeVariant::lowering) {
    const ld sign = (k % 2 == 0) ? 1 : -1;
    return static_cast<double>(sign * std::pow(xl, -(mu + k)) * bessel_j_extended(mu + k, xl));
  }
  if (mu - k < -0.5L)
    throw DomainError("raising identity drops the order below -1/2 (mu - k = " +
                      std::to_string(static_cast<double>(mu - k)) + ")");
  return static_cast<double>(std::pow(xl, mu - k) * bessel_j_extended(mu - k, xl));
}

double derivative_identity_residual(BesselOrder order, int k, double x, DerivativeVariant variant) {
  if (k < 0 || k > 6) throw DomainError("derivative_identity_residual supports 0 <= k <= 6");
  if (!(x > 0)) throw DomainError("derivative_identity_residual requires x > 0");
  const double rhs = derivative_identity_rhs(order, k, x, variant);
  if (k == 0) return 0.0;  // both sides are the same expression
  const double mu = order.value();
  const double h = (k == 0) ? 0.0 : std::min(0.25, 0.8 * x / k);
  const bool quad_path = x + k * h <= kQuadSeriesReach;
  double lhs;
  if (quad_path) {
    const int sign = (variant == DerivativeVariant::lowering) ? -1 : 1;
    // x^{-mu} J_mu and x^{mu} J_mu share the series; only the prefactor power differs
    Fn base = [mu, sign](quad t) { return expq(sign * static_cast<quad>(mu) * logq(t)) * quad_series_j(mu, t); };
    lhs = static_cast<double>(nested_xinv_derivative(base, k, x, h));
  } else {
    // beyond the series reach: long double evaluation, noise is small at large x
    const ld mul = mu;
    const int sign = (variant == DerivativeVariant::lowering) ? -1 : 1;
    Fn base = [mul, sign](quad t) {
      const ld tl = static_cast<ld>(t);
      return static_cast<quad>(std::pow(tl, sign * mul) * bessel_j_extended(mul, tl));
    };
    lhs = static_cast<double>(nested_xinv_derivative(base, k, x, h));
  }
  return std::abs(lhs - rhs);
}

}  // namespace hankel
