#include "hankel/diffops.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "hankel/errors.hpp"

namespace hankel {

namespace {

std::vector<double> derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = static_cast<double>(i) * c[i];
  return d;
}

// a * A + b * B + c * u * C, padded to a common length
std::vector<double> combine(double a, const std::vector<double>& A, double b, const std::vector<double>& B,
                            double c, const std::vector<double>& C) {
  std::vector<double> out(std::max({A.size(), B.size(), C.size() + 1}), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i) out[i] += a * A[i];
  for (std::size_t i = 0; i < B.size(); ++i) out[i] += b * B[i];
  for (std::size_t i = 0; i < C.size(); ++i) out[i + 1] += c * C[i];
  return out;
}

void require_order(const GaussHermiteFunction& f, double expected, const char* op) {
  if (f.mu() != expected)
    throw DomainError(std::string(op) + " expects input order " + std::to_string(expected) + ", got " +
                      std::to_string(f.mu()));
}

std::mutex cache_mutex;
std::map<std::pair<double, int>, std::vector<double>> cache;

}  // namespace

GaussHermiteFunction apply_N(const GaussHermiteFunction& f) {
  return {f.order().shifted(1.0), f.core().xinv_derivative(1)};
}

GaussHermiteFunction apply_M(BesselOrder mu, const GaussHermiteFunction& f) {
  require_order(f, mu.value() + 1.0, "M_mu");
  // x^{-mu-1/2} d/dx x^{mu+1/2} [x^{mu+3/2} Q e^{-pu}] = x^{mu+1/2} 2[(mu+1)Q + uQ' - puQ] e^{-pu}
  const auto& q = f.core().coeffs();
  const double p = f.rate();
  auto c = combine(2.0 * (mu.value() + 1.0), q, 0.0, {}, 2.0, combine(1.0, derivative(q), -p, q, 0.0, {}));
  return {mu, GaussPoly(p, std::move(c))};
}

GaussHermiteFunction apply_S(const GaussHermiteFunction& f) {
  // S phi = x^{mu+1/2} [(4mu+4) F_u + 4u F_uu] with F = P e^{-pu}
  const auto& P = f.core().coeffs();
  const double p = f.rate();
  const double mu = f.mu();
  const auto P1 = derivative(P);
  const auto P2 = derivative(P1);
  const auto Fu = combine(1.0, P1, -p, P, 0.0, {});
  auto Fuu = combine(1.0, P2, -2.0 * p, P1, 0.0, {});
  Fuu = combine(1.0, Fuu, p * p, P, 0.0, {});
  auto c = combine(4.0 * mu + 4.0, Fu, 0.0, {}, 4.0, Fuu);
  return {f.order(), GaussPoly(p, std::move(c))};
}

GaussHermiteFunction apply(const OperatorTag& op, const GaussHermiteFunction& f) {
  switch (op.kind) {
    case OpKind::N:
      require_order(f, op.mu.value(), "N_mu");
      return apply_N(f);
    case OpKind::M:
      return apply_M(op.mu, f);
    case OpKind::S:
      require_order(f, op.mu.value(), "S_mu");
      return apply_S(f);
  }
  throw DomainError("unknown operator");
}

std::vector<double> s_power_coefficients(BesselOrder mu, int r) {
  if (r < 0 || r > 16) throw DomainError("s_power_coefficients supports 0 <= r <= 16");
  const std::lock_guard lock(cache_mutex);
  const auto key = std::make_pair(mu.value(), r);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  // Applying S to x^{mu+1/2} x^{2j} D^{n} F (D = x^{-1}d/dx) gives
  //   x^{mu+1/2} [ (4(mu+1)j + 4j(j-1)) x^{2j-2} D^{n} + (2(mu+1) + 4j) x^{2j} D^{n+1} + x^{2j+2} D^{n+2} ] F
  const double m1 = mu.value() + 1.0;
  std::vector<double> b{1.0};
  for (int step = 0; step < r; ++step) {
    std::vector<double> next(b.size() + 1, 0.0);
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double jd = static_cast<double>(j);
      if (j > 0) next[j - 1] += (4.0 * m1 * jd + 4.0 * jd * (jd - 1.0)) * b[j];
      next[j] += (2.0 * m1 + 4.0 * jd) * b[j];
      next[j + 1] += b[j];
    }
    b = std::move(next);
  }
  cache.emplace(key, b);
  return b;
}

double s_power_residual(const GaussHermiteFunction& f, int r, double x) {
  if (r < 0 || r > 4) throw DomainError("s_power_residual supports 0 <= r <= 4");
  if (!(x > 0)) throw DomainError("s_power_residual requires x > 0");
  GaussHermiteFunction lhs = f;
  for (int i = 0; i < r; ++i) lhs = apply_S(lhs);
  const auto b = s_power_coefficients(f.order(), r);
  double sum = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j)
    sum += b[j] * std::pow(x, 2.0 * static_cast<double>(j)) * f.core().xinv_derivative(r + static_cast<int>(j))(x);
  return std::abs(lhs(x) - std::pow(x, f.mu() + 0.5) * sum);
}

double ladder_residual(const GaussHermiteFunction& f, int q, double x) {
  if (q < 0 || q > 8) throw DomainError("ladder_residual supports 0 <= q <= 8");
  if (!(x > 0)) throw DomainError("ladder_residual requires x > 0");
  GaussHermiteFunction rung = f;
  for (int i = 0; i < q; ++i) rung = apply(OperatorTag{OpKind::N, rung.order()}, rung);
  const double rhs = std::pow(x, f.mu() + q + 0.5) * bessel_derivative(f, q)(x);
  return std::abs(rung(x) - rhs);
}

}  // namespace hankel
