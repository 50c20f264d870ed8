#include "hankel/translation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "hankel/errors.hpp"

namespace hankel {

namespace {

struct Nodes {
  std::vector<double> x, w;
};

// composite Gauss-Legendre on [0, b] with panels of about the given width
Nodes composite_nodes(double b, double panel, int n) {
  const int panels = std::max(1, static_cast<int>(std::ceil(b / panel - 1e-9)));
  const double h = b / panels;
  const auto& [gx, gw] = gauss_legendre(n);
  Nodes out;
  out.x.reserve(panels * n);
  out.w.reserve(panels * n);
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int i = 0; i < n; ++i) {
      out.x.push_back(mid + 0.5 * h * gx[i]);
      out.w.push_back(0.5 * h * gw[i]);
    }
  }
  return out;
}

// C-infinity step: 1 below a, 0 above b
double taper(double t, double a, double b) {
  if (t <= a) return 1.0;
  if (t >= b) return 0.0;
  const double s = (t - a) / (b - a);
  const double f0 = std::exp(-1.0 / (1.0 - s));
  const double f1 = std::exp(-1.0 / s);
  return f0 / (f0 + f1);
}

double small_j(BesselOrder mu, double x) { return j_mu(mu, x); }

// rows: points, columns: t nodes; entry j_mu(x_i t_k)
std::vector<double> j_table(BesselOrder mu, const std::vector<double>& xs, const std::vector<double>& ts) {
  std::vector<double> out(xs.size() * ts.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < ts.size(); ++k) out[i * ts.size() + k] = small_j(mu, xs[i] * ts[k]);
  return out;
}

// transpose of j_table: rows t nodes, columns points
std::vector<double> j_table_t(BesselOrder mu, const std::vector<double>& xs, const std::vector<double>& ts) {
  std::vector<double> out(xs.size() * ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k)
    for (std::size_t j = 0; j < xs.size(); ++j) out[k * xs.size() + j] = small_j(mu, xs[j] * ts[k]);
  return out;
}

// The kernel on one t discretisation: weights w_k taper(t_k) t_k^{-mu-1/2}.
struct KernelGrid {
  BesselOrder mu;
  std::vector<double> t;
  std::vector<double> weight;

  KernelGrid(BesselOrder order, const KernelTableSpec& s) : mu(order) {
    const auto n = composite_nodes(s.taper_end, s.t_panel, s.nodes);
    t = n.x;
    weight.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k)
      weight[k] = n.w[k] * taper(t[k], s.taper_start, s.taper_end) * std::pow(t[k], -mu.value() - 0.5);
  }

  // D(y_i, w_j, z) for all i, j, written row-major into d (ys x ws).
  // jy: j_table over ys; jw_t: j_table_t over ws.
  void fill(double z, const std::vector<double>& jy, std::size_t ny, const std::vector<double>& jw_t, std::size_t nw,
            std::vector<double>& d) const {
    const std::size_t nt = t.size();
    std::vector<double> m(nt);
    for (std::size_t k = 0; k < nt; ++k) m[k] = weight[k] * small_j(mu, z * t[k]);
    d.assign(ny * nw, 0.0);
    for (std::size_t i = 0; i < ny; ++i) {
      double* row = d.data() + i * nw;
      const double* yrow = jy.data() + i * nt;
      for (std::size_t k = 0; k < nt; ++k) {
        const double a = yrow[k] * m[k];
        const double* wrow = jw_t.data() + k * nw;
        for (std::size_t j = 0; j < nw; ++j) row[j] += a * wrow[j];
      }
    }
  }
};

// (tau_z phi)(w_j) = sum_i Wy_i phi(y_i) D(y_i, w_j, z)
std::vector<double> direct_translate(const RealFunction& f, double z, BesselOrder mu, const std::vector<double>& ws,
                                     const KernelTableSpec& s) {
  const KernelGrid kg(mu, s);
  const auto yn = composite_nodes(s.extent, s.panel, s.nodes);
  const auto jy = j_table(mu, yn.x, kg.t);
  const auto jw = j_table_t(mu, ws, kg.t);
  std::vector<double> d;
  kg.fill(z, jy, yn.x.size(), jw, ws.size(), d);
  std::vector<double> out(ws.size(), 0.0);
  for (std::size_t i = 0; i < yn.x.size(); ++i) {
    const double a = yn.w[i] * f(yn.x[i]);
    if (a == 0.0) continue;
    for (std::size_t j = 0; j < ws.size(); ++j) out[j] += a * d[i * ws.size() + j];
  }
  return out;
}

// (phi # psi)(z_k) = sum_j Ww_j phi(w_j) sum_i Wy_i psi(y_i) D(y_i, w_j, z_k)
std::vector<double> direct_convolve(const RealFunction& f, const RealFunction& g, BesselOrder mu,
                                    const std::vector<double>& zs, const KernelTableSpec& s) {
  const KernelGrid kg(mu, s);
  const auto yn = composite_nodes(s.extent, s.panel, s.nodes);
  const auto jy = j_table(mu, yn.x, kg.t);
  const auto jw = j_table_t(mu, yn.x, kg.t);
  const std::size_t n = yn.x.size();
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = yn.w[i] * f(yn.x[i]);
    b[i] = yn.w[i] * g(yn.x[i]);
  }
  std::vector<double> out(zs.size()), d;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    kg.fill(zs[k], jy, n, jw, n, d);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (b[i] == 0.0) continue;
      double inner = 0.0;
      for (std::size_t j = 0; j < n; ++j) inner += a[j] * d[i * n + j];
      acc += b[i] * inner;
    }
    out[k] = acc;
  }
  return out;
}

// transform values on exactly the requested points
std::vector<double> transform_values(const RealFunction& g, BesselOrder mu, const std::vector<double>& ws,
                                     const QuadratureSpec& spec) {
  auto v = hankel_transform(g, TransformPlan{mu, ws, spec}).values.values();
  v.resize(ws.size());
  return v;
}

// Transform of sampled or family input, for the spectral route.
RealFunction spectrum(const InputFunction& f, BesselOrder mu, const TranslationOptions& o) {
  if (f.is_family()) {
    if (f.family().mu() != mu.value()) throw DomainError("input order differs from the requested order");
    const auto hat = hankel_transform_exact(f.family());
    return [hat](double u) { return hat(u); };
  }
  TransformPlan plan{mu, o.spectral_grid.empty() ? uniform_grid(0.02, 16.0, 800) : o.spectral_grid, o.spec};
  const auto r = hankel_transform(f.fn(), plan);
  return [s = r.values](double u) { return s(u); };
}

std::vector<double> spectral_translate(const InputFunction& f, double z, BesselOrder mu,
                                       const std::vector<double>& ws, const TranslationOptions& o) {
  const auto hat = spectrum(f, mu, o);
  const double m = mu.value();
  // u^{-mu-1/2} j_mu(uz) = z^{mu+1/2} (uz)^{-mu} J_mu(uz)
  const RealFunction g = [&](double u) {
    const double v = hat(u);
    return v == 0.0 ? 0.0 : std::pow(z, m + 0.5) * bessel_j_scaled_sq(m, u * u * z * z) * v;
  };
  return transform_values(g, mu, ws, o.spec);
}

void check_routes(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol)
      throw NumericalError("spectral and direct routes differ by " + std::to_string(std::abs(a[i] - b[i])) +
                           " at grid index " + std::to_string(i));
}

SampledFunction sampled(const std::vector<double>& grid, std::vector<double> values, BesselOrder mu) {
  std::vector<double> g = grid;
  if (g.size() == 1) {
    g.push_back(g[0] * (1.0 + 1e-12));
    values.push_back(values[0]);
  }
  return SampledFunction(std::move(g), std::move(values), Interpolation::cubic_local, mu.value() + 0.5);
}

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw UsageError("output grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0) || !std::isfinite(grid[i])) throw UsageError("output grid points must be finite and > 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw UsageError("output grid must be increasing");
  }
}

using MemoKey = std::tuple<double, long long, long long, long long, double, double, int, int>;
std::mutex memo_mutex;
std::map<MemoKey, KernelEvaluation> memo;

long long rounded(double v) { return std::llround(v * 1e10); }

}  // namespace

QuadratureSpec kernel_quadrature_defaults() {
  QuadratureSpec s;
  s.acceleration = Acceleration::alternating_series;
  s.truncation = 400.0;
  s.abs_tol = 1e-6;
  s.max_panels = 1 << 16;
  return s;
}

KernelEvaluation kernel_D(BesselOrder mu, double y, double w, double z, const QuadratureSpec& spec) {
  for (double v : {y, w, z})
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("kernel arguments must be finite and > 0");
  if (spec.acceleration == Acceleration::none && mu.value() <= 0.5)
    throw UsageError("D_mu is only conditionally convergent for mu <= 1/2; enable alternating-series acceleration");
  spec.validate();
  // the slowest difference frequency needs enough periods inside the summation window
  const double slow = std::min({std::abs(y + w - z), std::abs(y - w + z), std::abs(w + z - y)});
  QuadratureSpec run = spec;
  if (slow > 0) run.truncation = std::clamp(120.0 * std::numbers::pi / slow, spec.truncation, 8.0 * spec.truncation);
  const MemoKey key{mu.value(), rounded(y), rounded(w), rounded(z), spec.truncation, spec.abs_tol, spec.nodes,
                    static_cast<int>(spec.acceleration)};
  {
    const std::lock_guard lock(memo_mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  // t^{-mu-1/2} j(yt) j(wt) j(zt) = (ywz)^{1/2} t^{1-mu} J(yt) J(wt) J(zt)
  const double pre = std::sqrt(y * w * z);
  const double e = 1.0 - mu.value();
  const auto r = integrate_bessel_oscillatory([pre, e](double t) { return pre * std::pow(t, e); }, {y, w, z},
                                              {mu, mu, mu}, run);
  const KernelEvaluation out{mu, y, w, z, r.value, r.error_estimate, r.converged};
  const std::lock_guard lock(memo_mutex);
  memo.emplace(key, out);
  return out;
}

void KernelTableSpec::validate() const {
  if (!(taper_start > 0) || !(taper_end > taper_start)) throw UsageError("kernel taper needs 0 < start < end");
  if (!(t_panel > 0) || !(panel > 0) || !(extent > 0) || !(z_extent > 0))
    throw UsageError("kernel table widths and extents must be > 0");
  if (nodes < 4 || nodes > 64) throw UsageError("kernel table nodes must be in [4, 64]");
}

SampledFunction translate(const InputFunction& f, double z, BesselOrder mu, const std::vector<double>& output_grid,
                          const TranslationOptions& options) {
  if (!(z > 0) || z > options.z0)
    throw DomainError("translation requires 0 < z <= z0 = " + std::to_string(options.z0));
  validate_grid(output_grid);
  options.table.validate();
  if (f.is_family() && f.family().mu() != mu.value())
    throw DomainError("input order differs from the requested order");
  std::vector<double> values;
  if (options.route == Route::spectral || options.cross_check)
    values = spectral_translate(f, z, mu, output_grid, options);
  if (options.route == Route::direct || options.cross_check) {
    auto direct = direct_translate(f.fn(), z, mu, output_grid, options.table);
    if (options.cross_check) check_routes(values, direct, options.cross_tol);
    if (options.route == Route::direct) values = std::move(direct);
  }
  return sampled(output_grid, std::move(values), mu);
}

GaussHermiteFunction convolve_exact(const GaussHermiteFunction& f, const GaussHermiteFunction& g) {
  if (!(f.order() == g.order())) throw DomainError("convolution operands must share the order");
  const auto fh = hankel_transform_exact(f);
  const auto gh = hankel_transform_exact(g);
  // u^{-mu-1/2} (u^{mu+1/2} P e^{-au^2}) (u^{mu+1/2} Q e^{-bu^2}) = u^{mu+1/2} PQ e^{-(a+b)u^2}
  return hankel_transform_exact(GaussHermiteFunction(f.order(), fh.core() * gh.core()));
}

SampledFunction convolve(const InputFunction& f, const InputFunction& g, BesselOrder mu,
                         const std::vector<double>& output_grid, const TranslationOptions& options) {
  validate_grid(output_grid);
  options.table.validate();
  for (const auto* in : {&f, &g})
    if (in->is_family() && in->family().mu() != mu.value())
      throw DomainError("input order differs from the requested order");
  std::vector<double> values;
  if (options.route == Route::spectral || options.cross_check) {
    values.resize(output_grid.size());
    if (f.is_family() && g.is_family()) {
      const auto c = convolve_exact(f.family(), g.family());
      for (std::size_t i = 0; i < output_grid.size(); ++i) values[i] = c(output_grid[i]);
    } else {
      const auto fh = spectrum(f, mu, options);
      const auto gh = spectrum(g, mu, options);
      const double e = -mu.value() - 0.5;
      const RealFunction prod = [&](double u) {
        const double a = fh(u);
        return a == 0.0 ? 0.0 : std::pow(u, e) * a * gh(u);
      };
      values = transform_values(prod, mu, output_grid, options.spec);
    }
  }
  if (options.route == Route::direct || options.cross_check) {
    auto direct = direct_convolve(f.fn(), g.fn(), mu, output_grid, options.table);
    if (options.cross_check) check_routes(values, direct, options.cross_tol);
    if (options.route == Route::direct) values = std::move(direct);
  }
  return sampled(output_grid, std::move(values), mu);
}

std::vector<IdentityCheck> translation_identity(const GaussHermiteFunction& f, double z, const std::vector<double>& u,
                                                const KernelTableSpec& table) {
  table.validate();
  if (!(z > 0)) throw DomainError("translation requires z > 0");
  const BesselOrder mu = f.order();
  // tau_z phi is supported, up to Gaussian tails, on w <= extent + z
  const auto wn = composite_nodes(table.extent + z, table.panel, table.nodes);
  const auto tau = direct_translate([&f](double x) { return f(x); }, z, mu, wn.x, table);
  const auto hat = hankel_transform_exact(f);
  std::vector<IdentityCheck> out;
  for (double uu : u) {
    if (!(uu > 0)) throw DomainError("identity points must be > 0");
    std::vector<double> terms(wn.x.size());
    for (std::size_t j = 0; j < wn.x.size(); ++j) terms[j] = wn.w[j] * small_j(mu, uu * wn.x[j]) * tau[j];
    IdentityCheck c;
    c.u = uu;
    c.lhs = pairwise_sum(terms);
    c.rhs = std::pow(uu, -mu.value() - 0.5) * small_j(mu, uu * z) * hat(uu);
    c.residual = std::abs(c.lhs - c.rhs);
    out.push_back(c);
  }
  return out;
}

std::vector<IdentityCheck> convolution_identity(const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                                                const std::vector<double>& u, const KernelTableSpec& table) {
  table.validate();
  if (!(f.order() == g.order())) throw DomainError("convolution operands must share the order");
  const BesselOrder mu = f.order();
  const auto zn = composite_nodes(table.z_extent, table.panel, table.nodes);
  const auto conv = direct_convolve([&f](double x) { return f(x); }, [&g](double x) { return g(x); }, mu, zn.x, table);
  const auto fh = hankel_transform_exact(f);
  const auto gh = hankel_transform_exact(g);
  std::vector<IdentityCheck> out;
  for (double uu : u) {
    if (!(uu > 0)) throw DomainError("identity points must be > 0");
    std::vector<double> terms(zn.x.size());
    for (std::size_t k = 0; k < zn.x.size(); ++k) terms[k] = zn.w[k] * small_j(mu, uu * zn.x[k]) * conv[k];
    IdentityCheck c;
    c.u = uu;
    c.lhs = pairwise_sum(terms);
    c.rhs = std::pow(uu, -mu.value() - 0.5) * fh(uu) * gh(uu);
    c.residual = std::abs(c.lhs - c.rhs);
    out.push_back(c);
  }
  return out;
}

}  // namespace hankel
