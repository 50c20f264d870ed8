#include "hankel/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

#include "hankel/errors.hpp"

namespace hankel {

namespace {

constexpr int kMinNodes = 4;
constexpr int kMaxNodes = 64;
constexpr int kInitialPanels = 8;

std::pair<std::vector<double>, std::vector<double>> build_gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

// integral_0^h f(x) dx = integral_0^{sqrt h} 2t f(t^2) dt
double origin_panel(const RealFunction& f, double h, int n) {
  const RealFunction g = [&f](double t) { return t == 0.0 ? 0.0 : 2.0 * t * f(t * t); };
  return gl_panel(g, 0.0, std::sqrt(h), n);
}

double composite(const RealFunction& f, double xmax, int panels, int n) {
  const double h = xmax / panels;
  std::vector<double> parts(panels);
  parts[0] = origin_panel(f, h, n);
  for (int i = 1; i < panels; ++i) parts[i] = gl_panel(f, i * h, (i + 1) * h, n);
  return pairwise_sum(parts);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw UsageError("quadrature setting " + key + ": not a number: " + value);
  }
  if (pos != value.size()) throw UsageError("quadrature setting " + key + ": not a number: " + value);
  return v;
}

// Weighted mean of partial[from..to] under the bump exp(-1/(s(1-s))), s in (0, 1).
// Averaging partial sums this way integrates the tail against a smooth cutoff,
// so every oscillating component is suppressed faster than any power of
// (frequency x window length).
double window_average(const std::vector<double>& partial, std::size_t from, std::size_t to) {
  const double len = static_cast<double>(to - from);
  std::vector<double> terms;
  double total = 0.0;
  for (std::size_t n = from + 1; n < to; ++n) {
    const double s = static_cast<double>(n - from) / len;
    const double w = std::exp(-1.0 / (s * (1.0 - s)));
    total += w;
    terms.push_back(w * partial[n]);
  }
  return pairwise_sum(terms) / total;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (nodes < kMinNodes || nodes > kMaxNodes) throw UsageError("nodes must be in [4, 64]");
  if (!(truncation > 0) || !std::isfinite(truncation)) throw UsageError("truncation must be finite and > 0");
  if (!(abs_tol > 0) || !std::isfinite(abs_tol)) throw UsageError("abs_tol must be finite and > 0");
  if (max_panels < kInitialPanels) throw UsageError("max_panels must be >= 8");
}

void QuadratureSpec::set(const std::string& key, const std::string& value) {
  if (key == "nodes") {
    nodes = static_cast<int>(parse_double(key, value));
  } else if (key == "truncation" || key == "x_max") {
    truncation = parse_double(key, value);
  } else if (key == "zero_splitting") {
    if (value != "true" && value != "false") throw UsageError("zero_splitting must be true or false");
    zero_splitting = value == "true";
  } else if (key == "acceleration") {
    if (value == "none") acceleration = Acceleration::none;
    else if (value == "alternating-series") acceleration = Acceleration::alternating_series;
    else throw UsageError("acceleration must be none or alternating-series");
  } else if (key == "abs_tol") {
    abs_tol = parse_double(key, value);
  } else if (key == "max_panels") {
    max_panels = static_cast<int>(parse_double(key, value));
  } else {
    throw UsageError("unknown quadrature setting: " + key);
  }
}

QuadratureSpec QuadratureSpec::defaults() {
  QuadratureSpec s;
  if (const char* env = std::getenv("HANKEL_DEFAULT_TOL"); env != nullptr && *env != '\0')
    s.abs_tol = parse_double("HANKEL_DEFAULT_TOL", env);
  s.validate();
  return s;
}

std::string to_string(Acceleration a) { return a == Acceleration::none ? "none" : "alternating-series"; }

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  if (n < kMinNodes || n > kMaxNodes) throw DomainError("Gauss-Legendre rule needs 4 <= n <= 64");
  static const auto table = [] {
    std::array<std::pair<std::vector<double>, std::vector<double>>, kMaxNodes + 1> t;
    for (int k = kMinNodes; k <= kMaxNodes; ++k) t[k] = build_gauss_legendre(k);
    return t;
  }();
  return table[n];
}

double gl_panel(const RealFunction& f, double a, double b, int n) {
  const auto& [x, w] = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += w[i] * f(mid + half * x[i]);
  return acc * half;
}

double pairwise_sum(const std::vector<double>& v, std::size_t begin, std::size_t end) {
  const std::size_t n = end - begin;
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = begin + n / 2;
  return pairwise_sum(v, begin, mid) + pairwise_sum(v, mid, end);
}

IntegralResult integrate(const RealFunction& f, const QuadratureSpec& spec) {
  spec.validate();
  int panels = kInitialPanels;
  double prev = composite(f, spec.truncation, panels, spec.nodes);
  IntegralResult r;
  while (true) {
    const int next = panels * 2;
    if (next > spec.max_panels) {
      r.value = prev;
      r.panels_used = panels;
      r.converged = false;
      return r;
    }
    const double cur = composite(f, spec.truncation, next, spec.nodes);
    r.value = cur;
    r.error_estimate = std::abs(cur - prev);
    r.panels_used = next;
    if (!std::isfinite(cur)) {
      r.converged = false;
      return r;
    }
    if (r.error_estimate <= spec.abs_tol) {
      r.converged = true;
      return r;
    }
    prev = cur;
    panels = next;
  }
}

IntegralResult integrate_bessel_oscillatory(const RealFunction& envelope, const std::vector<double>& frequencies,
                                            const std::vector<BesselOrder>& orders, const QuadratureSpec& spec) {
  spec.validate();
  if (frequencies.empty() || frequencies.size() != orders.size())
    throw DomainError("frequencies and orders must be nonempty and of equal length");
  double total_frequency = 0.0;
  for (double w : frequencies) {
    if (!(w > 0) || !std::isfinite(w)) throw DomainError("frequencies must be finite and > 0");
    total_frequency += w;
  }
  const RealFunction integrand = [&](double t) {
    double v = envelope(t);
    if (v == 0.0) return 0.0;
    for (std::size_t i = 0; i < orders.size(); ++i) v *= bessel_j(orders[i], frequencies[i] * t);
    return v;
  };

  double width = spec.truncation / kInitialPanels;
  if (spec.zero_splitting) width = std::min(width, std::numbers::pi / total_frequency);

  // each panel integrated twice (n nodes, then split in halves) for a local
  // error figure; the width is halved until that figure meets the tolerance
  std::vector<double> parts;
  double refinement_error = 0.0;
  int panels = 0;
  while (true) {
    panels = std::max(4, static_cast<int>(std::ceil(spec.truncation / width - 1e-9)));
    if (panels > spec.max_panels) {
      IntegralResult r;
      r.converged = false;
      r.panels_used = 0;
      return r;
    }
    parts.assign(panels, 0.0);
    refinement_error = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double a = i * width, b = (i + 1) * width, m = 0.5 * (a + b);
      double coarse, fine;
      if (i == 0) {
        coarse = origin_panel(integrand, b, spec.nodes);
        fine = origin_panel(integrand, m, spec.nodes) + gl_panel(integrand, m, b, spec.nodes);
      } else {
        coarse = gl_panel(integrand, a, b, spec.nodes);
        fine = gl_panel(integrand, a, m, spec.nodes) + gl_panel(integrand, m, b, spec.nodes);
      }
      parts[i] = fine;
      refinement_error += std::abs(fine - coarse);
    }
    if (refinement_error <= 0.5 * spec.abs_tol || 2 * panels > spec.max_panels) break;
    width /= 2;
  }

  IntegralResult r;
  r.panels_used = panels;
  if (std::all_of(parts.begin(), parts.end(), [](double v) { return v == 0.0; })) {
    r.value = 0.0;
    r.converged = true;
    return r;
  }

  std::vector<double> partial(panels);
  double running = 0.0;
  for (int i = 0; i < panels; ++i) partial[i] = running += parts[i];

  const int tail = panels / 2;
  if (spec.acceleration == Acceleration::none) {
    r.value = partial.back();
    // the change over the last quarter of the range bounds what truncation leaves behind
    r.error_estimate = refinement_error + std::abs(partial.back() - partial[panels - 1 - panels / 4]);
    r.converged = std::isfinite(r.value) && r.error_estimate <= spec.abs_tol;
    return r;
  }

  int sign_changes = 0;
  for (int i = panels - tail + 1; i < panels; ++i)
    if ((parts[i] > 0) != (parts[i - 1] > 0) && parts[i] != 0.0) ++sign_changes;
  const bool alternating = sign_changes >= std::max(2, tail / 8);

  const std::size_t last = partial.size() - 1;
  const double wide = window_average(partial, last / 5, last);
  const double narrow = window_average(partial, last / 2, last);
  r.value = wide;
  r.error_estimate = refinement_error + std::abs(wide - narrow);
  r.converged = alternating && std::isfinite(r.value) && r.error_estimate <= spec.abs_tol;
  return r;
}

IntegralResult lp_mu_norm(const RealFunction& f, double p, BesselOrder mu, const QuadratureSpec& spec) {
  if (!(p >= 1) || !std::isfinite(p)) throw DomainError("L^p norm requires finite p >= 1");
  const double e = mu.value() + 0.5;
  return integrate([&](double x) { return std::pow(std::abs(f(x)), p) * std::pow(x, e); }, spec);
}

}  // namespace hankel
