#include "hankel/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hankel/errors.hpp"

namespace hankel {

namespace {

std::vector<double> trim(std::vector<double> c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
  return c;
}

std::vector<double> poly_add(const std::vector<double>& a, const std::vector<double>& b, double sb) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += sb * b[i];
  return trim(std::move(out));
}

void require_same_rate(const GaussPoly& a, const GaussPoly& b) {
  if (a.rate() != b.rate())
    throw DomainError("Gaussian rates differ: " + std::to_string(a.rate()) + " vs " + std::to_string(b.rate()));
}

}  // namespace

GaussPoly::GaussPoly(double rate, std::vector<double> coeffs) : rate_(rate), coeffs_(trim(std::move(coeffs))) {
  if (!std::isfinite(rate)) throw DomainError("Gaussian rate must be finite");
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw DomainError("polynomial coefficients must be finite");
}

bool GaussPoly::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double GaussPoly::at_u(double u) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
  return rate_ == 0.0 ? acc : acc * std::exp(-rate_ * u);
}

GaussPoly GaussPoly::xinv_derivative(int q) const {
  if (q < 0) throw DomainError("derivative count must be >= 0");
  std::vector<double> c = coeffs_;
  for (int step = 0; step < q; ++step) {
    std::vector<double> next(c.size(), 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) next[i - 1] += 2.0 * static_cast<double>(i) * c[i];
    for (std::size_t i = 0; i < c.size(); ++i) next[i] -= 2.0 * rate_ * c[i];
    c = trim(std::move(next));
  }
  return GaussPoly(rate_, std::move(c));
}

GaussPoly GaussPoly::times_u() const {
  std::vector<double> c(coeffs_.size() + 1, 0.0);
  std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + 1);
  return GaussPoly(rate_, std::move(c));
}

GaussPoly GaussPoly::scaled(double s) const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v *= s;
  return GaussPoly(rate_, std::move(c));
}

GaussPoly operator*(const GaussPoly& a, const GaussPoly& b) {
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return GaussPoly(a.rate_ + b.rate_, std::move(c));
}

GaussPoly operator+(const GaussPoly& a, const GaussPoly& b) {
  require_same_rate(a, b);
  return GaussPoly(a.rate_, poly_add(a.coeffs_, b.coeffs_, 1.0));
}

GaussPoly operator-(const GaussPoly& a, const GaussPoly& b) {
  require_same_rate(a, b);
  return GaussPoly(a.rate_, poly_add(a.coeffs_, b.coeffs_, -1.0));
}

GaussHermiteFunction::GaussHermiteFunction(BesselOrder order, GaussPoly core)
    : order_(order), core_(std::move(core)) {
  if (!(core_.rate() > 0)) throw DomainError("Gaussian-Hermite rate must be > 0");
}

double GaussHermiteFunction::operator()(double x) const {
  if (!(x >= 0)) throw DomainError("evaluation requires x >= 0");
  const double e = mu() + 0.5;
  if (x == 0) return e == 0.0 ? core_.at_u(0.0) : 0.0;
  return std::pow(x, e) * core_(x);
}

GaussHermiteFunction operator+(const GaussHermiteFunction& a, const GaussHermiteFunction& b) {
  if (!(a.order_ == b.order_)) throw DomainError("cannot add functions of different order");
  return {a.order_, a.core_ + b.core_};
}

GaussPoly bessel_derivative(const GaussHermiteFunction& f, int q) {
  if (q < 0 || q > 64) throw DomainError("bessel_derivative supports 0 <= q <= 64");
  return f.core().xinv_derivative(q);
}

double leibniz_residual(const GaussPoly& psi, const GaussHermiteFunction& phi, int k, double x) {
  if (k < 0 || k > 8) throw DomainError("leibniz_residual supports 0 <= k <= 8");
  if (!(psi.rate() >= 0)) throw DomainError("leibniz_residual requires psi rate >= 0");
  if (!(x > 0)) throw DomainError("leibniz_residual requires x > 0");
  const double lhs = (psi * phi.core()).xinv_derivative(k)(x);
  double rhs = 0.0;
  double binom = 1.0;
  for (int v = 0; v <= k; ++v) {
    rhs += binom * psi.xinv_derivative(v)(x) * phi.core().xinv_derivative(k - v)(x);
    binom = binom * (k - v) / (v + 1);
  }
  return std::abs(lhs - rhs);
}

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<double> values, Interpolation interp,
                                 double origin_exponent)
    : grid_(std::move(grid)), values_(std::move(values)), interp_(interp), origin_exponent_(origin_exponent) {
  if (grid_.size() != values_.size()) throw DomainError("grid and values differ in length");
  if (grid_.size() < 2) throw DomainError("a sampled function needs at least 2 points");
  if (!std::isfinite(origin_exponent_)) throw DomainError("origin exponent must be finite");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!(grid_[i] > 0) || !std::isfinite(grid_[i])) throw DomainError("grid points must be finite and > 0");
    if (i > 0 && !(grid_[i] > grid_[i - 1])) throw DomainError("grid must be strictly increasing");
    if (!std::isfinite(values_[i])) throw DomainError("sampled values must be finite");
  }
  normalized_.resize(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i)
    normalized_[i] = origin_exponent_ == 0.0 ? values_[i] : values_[i] / std::pow(grid_[i], origin_exponent_);
}

SampledFunction SampledFunction::sample(const RealFunction& f, std::vector<double> grid, Interpolation interp,
                                        double origin_exponent) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
  return SampledFunction(std::move(grid), std::move(v), interp, origin_exponent);
}

double SampledFunction::operator()(double x) const {
  if (!(x >= 0)) throw DomainError("evaluation requires x >= 0");
  if (x > grid_.back()) return 0.0;
  const auto scale = [&](double g) {
    if (origin_exponent_ == 0.0) return g;
    if (x == 0) return origin_exponent_ > 0 ? 0.0 : g;
    return g * std::pow(x, origin_exponent_);
  };
  if (x <= grid_.front()) return scale(normalized_.front());

  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - grid_.begin()), grid_.size() - 1);
  const std::size_t lo = hi - 1;
  if (interp_ == Interpolation::linear || grid_.size() < 4) {
    const double t = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
    return scale(normalized_[lo] + t * (normalized_[hi] - normalized_[lo]));
  }
  // 4-point Lagrange stencil centred on the bracketing interval, applied to
  // the values and, when the stencil has one strict sign, to log|values|.
  // Each candidate is scored by how well it predicts the grid neighbours just
  // outside the stencil; the lower score wins. Gaussian tails pick the log
  // form, stencils near a sign change or an extremum pick the plain form.
  std::size_t first = lo >= 1 ? lo - 1 : 0;
  first = std::min(first, grid_.size() - 4);
  const auto lagrange = [&](double at, auto&& value) {
    double acc = 0.0;
    for (std::size_t i = first; i < first + 4; ++i) {
      double w = 1.0;
      for (std::size_t j = first; j < first + 4; ++j)
        if (j != i) w *= (at - grid_[j]) / (grid_[i] - grid_[j]);
      acc += w * value(i);
    }
    return acc;
  };
  const auto plain = [&](std::size_t i) { return normalized_[i]; };
  const double cubic = lagrange(x, plain);
  bool same_sign = true;
  for (std::size_t i = first; i < first + 4; ++i)
    same_sign = same_sign && normalized_[i] != 0.0 && std::signbit(normalized_[i]) == std::signbit(normalized_[first]);
  std::vector<std::size_t> outer;
  if (first > 0) outer.push_back(first - 1);
  if (first + 4 < grid_.size()) outer.push_back(first + 4);
  if (!same_sign || outer.empty()) return scale(cubic);

  const double sign = std::copysign(1.0, normalized_[first]);
  const auto logged = [&](std::size_t i) { return std::log(std::abs(normalized_[i])); };
  double plain_score = 0.0, log_score = 0.0;
  for (std::size_t o : outer) {
    plain_score += std::abs(lagrange(grid_[o], plain) - normalized_[o]);
    log_score += std::abs(sign * std::exp(lagrange(grid_[o], logged)) - normalized_[o]);
  }
  const double best = log_score < plain_score ? sign * std::exp(lagrange(x, logged)) : cubic;
  return scale(best);
}

std::vector<double> log_grid(double a, double b, std::size_t n) {
  if (!(a > 0) || !(b > a) || n < 2) throw DomainError("log_grid requires 0 < a < b and n >= 2");
  std::vector<double> g(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
  if (!(b > a) || n < 2) throw DomainError("uniform_grid requires a < b and n >= 2");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = b;
  return g;
}

}  // namespace hankel
