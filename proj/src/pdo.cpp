#include "hankel/pdo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hankel/errors.hpp"
#include "hankel/special_functions.hpp"

namespace hankel {

namespace {

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

// key=value pairs after the colon of a catalog spec
std::map<std::string, double> spec_params(const std::string& spec, const std::string& rest) {
  std::map<std::string, double> out;
  std::stringstream ss(rest);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected key=value in symbol spec '" + spec + "'");
    try {
      std::size_t used = 0;
      const std::string v = item.substr(eq + 1);
      out[item.substr(0, eq)] = std::stod(v, &used);
      if (used != v.size()) throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("bad number in symbol spec '" + spec + "'");
    }
  }
  return out;
}

// x^{-nu} J_nu(x) at x = w
double scaled_j(double nu, double w) { return bessel_j_scaled_sq(nu, w * w); }

}  // namespace

SymbolFunction SymbolFunction::constant(double c) {
  SymbolFunction s;
  s.kind_ = SymbolKind::constant;
  s.name_ = "constant";
  s.x_part_ = GaussPoly::constant(1.0);
  s.y_part_ = GaussPoly::constant(c);
  return s;
}

SymbolFunction SymbolFunction::neg_y_squared() {
  SymbolFunction s;
  s.kind_ = SymbolKind::neg_y_squared;
  s.name_ = "neg-y2";
  s.y_part_ = GaussPoly(0.0, {0.0, -1.0});
  s.order = 2.0;
  return s;
}

SymbolFunction SymbolFunction::japanese(double m) {
  if (!std::isfinite(m)) throw DomainError("symbol order must be finite");
  SymbolFunction s;
  s.kind_ = SymbolKind::japanese;
  s.name_ = "japanese";
  s.power_ = m;
  s.order = m;
  return s;
}

SymbolFunction SymbolFunction::separable(GaussPoly x_part, GaussPoly y_part, double order) {
  SymbolFunction s;
  s.kind_ = SymbolKind::separable;
  s.name_ = "separable";
  s.x_part_ = std::move(x_part);
  s.y_part_ = std::move(y_part);
  s.order = order;
  return s;
}

SymbolFunction SymbolFunction::translation_multiplier(BesselOrder mu, double z) {
  if (!(z > 0) || !std::isfinite(z)) throw DomainError("translation symbol needs z > 0");
  SymbolFunction s;
  s.kind_ = SymbolKind::translation_multiplier;
  s.name_ = "translation";
  s.mu_ = mu;
  s.z_ = z;
  return s;
}

SymbolFunction SymbolFunction::parse(const std::string& spec, BesselOrder mu) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const auto p = spec_params(spec, colon == std::string::npos ? "" : spec.substr(colon + 1));
  const auto get = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto it = p.find(key);
    if (it != p.end()) return it->second;
    if (fallback) return *fallback;
    throw UsageError("symbol spec '" + spec + "' needs " + key + "=<value>");
  };
  if (name == "constant") return constant(get("c", 1.0));
  if (name == "neg-y2") return neg_y_squared();
  if (name == "japanese") return japanese(get("m"));
  if (name == "exp-y2") {
    auto s = separable(GaussPoly::constant(1.0), GaussPoly(-get("q", 1.0), {1.0}), 0.0);
    s.name_ = "exp-y2";
    return s;
  }
  if (name == "gauss-y") {
    auto s = separable(GaussPoly::constant(1.0), GaussPoly(get("q", 1.0), {1.0}), 0.0);
    s.name_ = "gauss-y";
    return s;
  }
  if (name == "translation") return translation_multiplier(mu, get("z"));
  throw UsageError("unknown symbol '" + name + "' (constant, neg-y2, japanese, exp-y2, gauss-y, translation)");
}

bool SymbolFunction::depends_on_x() const noexcept {
  return kind_ == SymbolKind::separable && !(x_part_.rate() == 0.0 && x_part_.degree() == 0);
}

double SymbolFunction::y_gauss_rate() const noexcept {
  return kind_ == SymbolKind::separable || kind_ == SymbolKind::constant ? y_part_.rate() : 0.0;
}

double SymbolFunction::derivative(int alpha, int nu, double x, double y) const {
  if (alpha < 0 || nu < 0 || alpha > 16 || nu > 16) throw DomainError("symbol derivative orders must be in [0, 16]");
  switch (kind_) {
    case SymbolKind::constant:
    case SymbolKind::neg_y_squared:
    case SymbolKind::separable:
      return x_part_.xinv_derivative(alpha)(x) * y_part_.xinv_derivative(nu)(y);
    case SymbolKind::japanese: {
      if (alpha > 0) return 0.0;
      // (y^{-1}d/dy) = 2 d/du on functions of u = y^2
      double ff = 1.0;
      for (int i = 0; i < nu; ++i) ff *= 2.0 * (power_ / 2.0 - i);
      return ff == 0.0 ? 0.0 : ff * std::pow(1.0 + y * y, power_ / 2.0 - nu);
    }
    case SymbolKind::translation_multiplier: {
      if (alpha > 0) return 0.0;
      const double mu = mu_.value();
      const double sign = nu % 2 ? -1.0 : 1.0;
      return sign * std::pow(z_, 2.0 * nu + mu + 0.5) * scaled_j(mu + nu, y * z_);
    }
  }
  return 0.0;
}

SymbolValidation validate_symbol(const SymbolFunction& a, int alpha_max, int nu_max, const std::vector<double>& xs,
                                 const std::vector<double>& ys) {
  if (alpha_max < 0 || nu_max < 0 || alpha_max > 5 || nu_max > 5)
    throw DomainError("validate_symbol requires 0 <= alpha_max, nu_max <= 5");
  if (xs.empty() || ys.empty()) throw DomainError("validate_symbol needs a non-empty grid");
  for (double v : xs)
    if (!(v > 0)) throw DomainError("grid points must be > 0");
  for (double v : ys)
    if (!(v > 0)) throw DomainError("grid points must be > 0");
  if (!(a.C + a.delta > 0) || !(a.D + a.eta > 0)) throw DomainError("symbol constants must be positive");
  SymbolValidation out;
  out.ratio.assign(alpha_max + 1, std::vector<double>(nu_max + 1, 0.0));
  double best = -1.0;
  for (int al = 0; al <= alpha_max; ++al)
    for (int nu = 0; nu <= nu_max; ++nu) {
      const double base = al * std::log(a.C + a.delta) + a.seq_c.log_value(al) + nu * std::log(a.D + a.eta) +
                          a.seq_d.log_value(nu);
      for (double x : xs)
        for (double y : ys) {
          const double d = std::abs(a.derivative(al, nu, x, y));
          if (d == 0.0) continue;
          const double r = std::exp(std::log(d) - base - (a.order - nu) * std::log1p(y));
          if (r > out.ratio[al][nu]) out.ratio[al][nu] = r;
          if (r > best) {
            best = r;
            out.witness_alpha = al;
            out.witness_nu = nu;
            out.witness_x = x;
            out.witness_y = y;
          }
        }
    }
  out.L_m = std::max(best, 0.0);
  const auto rising = [](double r0, double r1, double r2) { return r0 > 0 && r1 > r0 && r2 > r1; };
  std::ostringstream trend;
  if (nu_max >= 2)
    for (int al = 0; al <= alpha_max; ++al)
      if (rising(out.ratio[al][nu_max - 2], out.ratio[al][nu_max - 1], out.ratio[al][nu_max])) {
        out.blow_up = true;
        trend << "ratio rises with nu at alpha=" << al << "; ";
      }
  if (alpha_max >= 2)
    for (int nu = 0; nu <= nu_max; ++nu)
      if (rising(out.ratio[alpha_max - 2][nu], out.ratio[alpha_max - 1][nu], out.ratio[alpha_max][nu])) {
        out.blow_up = true;
        trend << "ratio rises with alpha at nu=" << nu << "; ";
      }
  out.trend = out.blow_up ? trend.str() : "no growth in alpha or nu";
  return out;
}

TransformResult pdo_from_transform(const SymbolFunction& a, const RealFunction& transform, BesselOrder mu,
                                   const TransformPlan& plan) {
  plan.validate();
  if (!(plan.mu == mu)) throw DomainError("plan order differs from the operator order");
  const auto& grid = plan.output_grid;
  std::vector<double> vals(grid.size()), errs(grid.size());
  std::vector<bool> conv(grid.size());
  int failures = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const auto r = hankel_transform_at([&](double y) { return y == 0.0 ? 0.0 : a(x, y) * transform(y); }, mu, x, plan.spec);
    vals[i] = r.value;
    errs[i] = r.error_estimate;
    conv[i] = r.converged;
    if (!r.converged) ++failures;
  }
  if (failures * 10 > static_cast<int>(grid.size()))
    throw NumericalError("p.d.o. quadrature failed at " + std::to_string(failures) + " of " +
                         std::to_string(grid.size()) + " points");
  std::vector<double> g = grid;
  if (g.size() == 1) {
    g.push_back(g[0] * 2);
    vals.push_back(0.0);
    errs.push_back(0.0);
    conv.push_back(true);
  }
  return {SampledFunction(std::move(g), std::move(vals), Interpolation::cubic_local, mu.value() + 0.5), std::move(errs),
          std::move(conv), failures};
}

namespace {

// h_mu f as a callable: exact on the family, sampled otherwise
RealFunction transform_of(const InputFunction& f, BesselOrder mu, const PdoOptions& options, const QuadratureSpec& spec) {
  if (f.is_family()) {
    if (!(f.family().order() == mu)) throw DomainError("function order differs from the operator order");
    const auto hat = hankel_transform_exact(f.family());
    return [hat](double y) { return hat(y); };
  }
  const std::vector<double> grid = options.spectral_grid.empty() ? uniform_grid(0.02, 16.0, 800) : options.spectral_grid;
  auto hat = hankel_transform(f.fn(), TransformPlan{mu, grid, spec}).values;
  return [hat = std::move(hat)](double y) { return hat(y); };
}

}  // namespace

TransformResult pdo_apply(const SymbolFunction& a, const InputFunction& f, BesselOrder mu, const TransformPlan& plan,
                          const PdoOptions& options) {
  return pdo_from_transform(a, transform_of(f, mu, options, plan.spec), mu, plan);
}

TransformResult pdo_translate(const SymbolFunction& a, const InputFunction& f, double z, BesselOrder mu,
                              const TransformPlan& plan, const PdoOptions& options) {
  if (!(z > 0) || !(z < options.z0)) throw DomainError("translation requires 0 < z < z0");
  const auto hat = transform_of(f, mu, options, plan.spec);
  const auto mult = SymbolFunction::translation_multiplier(mu, z);
  return pdo_from_transform(a, [&](double y) { return mult(0.0, y) * hat(y); }, mu, plan);
}

TransformResult pdo_convolve(const SymbolFunction& a, const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                             const TransformPlan& plan) {
  if (!(f.order() == g.order())) throw DomainError("convolution needs equal orders");
  const auto hat = hankel_transform_exact(convolve_exact(f, g));
  return pdo_from_transform(a, [&](double y) { return hat(y); }, f.order(), plan);
}

TheoremConstants theorem_constants(const TheoremInputs& in) {
  if (!in.fitted) throw UsageError("theorem_constants needs fitted sequence constants (run check_conditions first)");
  for (double v : {in.A, in.B, in.C, in.D, in.z0})
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("A, B, C, D and z0 must be finite and > 0");
  const auto& f = *in.fitted;
  TheoremConstants t;
  t.A = in.A;
  t.B = in.B;
  t.C = in.C;
  t.D = in.D;
  t.z0 = in.z0;
  t.R1 = f.Rs1;
  t.R2 = f.Rs2;
  t.H1 = f.H1;
  t.H2 = f.H2;
  t.R_star = std::max(1.0, t.R1);
  t.R_otimes = std::max(1.0, t.R1 * t.R2);
  t.H = t.H1 * t.H2;
  t.a_ratio = in.a.value(0) / in.a.value(1);
  const auto as = WeightSequence::elementwise_max(in.a, in.d);
  const auto bs = WeightSequence::elementwise_max(in.b, in.c);
  t.a_star_ratio = as.value(0) / as.value(1);
  t.b_star_ratio = bs.value(0) / bs.value(1);

  t.A1 = in.A * in.B * t.R_star * t.R_star;
  t.A1_H = in.A * in.B * t.H1 * t.H1;
  t.B1 = in.A * in.A * std::pow(t.R_star, 6);
  t.B2 = in.B * in.B * std::pow(t.R_star, 6);
  const double zr = in.z0 * t.a_ratio;
  t.B3 = t.R1 * t.R1 * (t.B1 + zr * zr);
  t.A2 = t.B3;
  t.A3 = t.A1 * t.B3 * t.R_otimes * t.R_otimes;
  t.B4 = t.A1 * t.A1 * std::pow(t.R_otimes, 6);
  t.A4 = t.R_otimes * t.R_otimes * t.A1 * t.B1;
  t.B5 = std::pow(t.R_otimes, 6) * t.A1 * t.A1;
  t.A6 = (t.a_star_ratio * in.D + t.B3) * t.A1;
  t.B6 = t.b_star_ratio * t.a_star_ratio * t.a_star_ratio * in.C + std::pow(t.H, 6) * t.A1 * t.A1;
  t.A7 = (t.a_star_ratio * in.D + t.B1) * t.A1;
  t.A6p = t.a_star_ratio * in.D + t.B3;
  t.A7p = t.a_star_ratio * in.D + t.B1;
  t.B6p = t.b_star_ratio * in.C + std::pow(t.H2, 6) * in.B * in.B;
  t.B6p_no_C = t.b_star_ratio + std::pow(t.H2, 6) * in.B * in.B;
  return t;
}

TheoremInputs with_fitted_constants(TheoremInputs in, int K) {
  in.fitted = check_conditions(in.a, in.b, K).constants;
  return in;
}

std::string to_string(EvidenceMode m) { return m == EvidenceMode::translate ? "translate" : "convolve"; }

namespace {

// Fornberg's weights for the q-th derivative at x0 from the given nodes.
std::vector<double> fd_weights(const std::vector<double>& nodes, double x0, int q) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(q + 1, 0.0));
  double c1 = 1.0, c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, q);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][q];
  return w;
}

struct Derivative {
  double value = 0.0;
  double error = 0.0;
};

// q-th derivative at node i of samples on u_j = j s, from stencils of q + 4 nodes at
// strides 1 and 2, Richardson-combined for fourth-order truncation error.
Derivative sampled_derivative(const std::vector<double>& F, double s, std::size_t i, int q) {
  const int n = q + 4;
  const auto at_stride = [&](int stride) {
    const long last = static_cast<long>(F.size()) - 1;
    long start = static_cast<long>(i) - stride * (n / 2);
    start = std::max(start, 0L);
    start = std::min(start, last - stride * (n - 1));
    std::vector<double> nodes(n);
    for (int j = 0; j < n; ++j) nodes[j] = static_cast<double>(start + stride * j) * s;
    const auto w = fd_weights(nodes, static_cast<double>(i) * s, q);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += w[j] * F[start + stride * j];
    return acc;
  };
  const double fine = at_stride(1), coarse = at_stride(2);
  const double corr = (fine - coarse) / 15.0;
  return {fine + corr, std::abs(corr)};
}

struct Spectral {
  // g = y^{-mu-1/2} G with G = h_mu(tau_z phi) or h_mu(phi # psi); gd(j, y) = (y^{-1}d/dy)^j g
  std::function<double(int, double)> gd;
  double rate = 0.0;  // Gaussian rate of g
  bool zero = false;
};

Spectral spectral_of(const GaussHermiteFunction& f, const std::optional<GaussHermiteFunction>& g, const EvidenceOptions& o) {
  Spectral sp;
  const double mu = f.mu();
  if (o.mode == EvidenceMode::translate) {
    const auto hat = hankel_transform_exact(f);
    sp.rate = hat.rate();
    sp.zero = hat.is_zero();
    const double z = o.z;
    std::vector<GaussPoly> cores{hat.core()};
    for (int j = 1; j <= 24; ++j) cores.push_back(cores.back().xinv_derivative(1));
    sp.gd = [=](int q, double y) {
      double acc = 0.0;
      for (int j = 0; j <= q; ++j) {
        const double bj = (j % 2 ? -1.0 : 1.0) * std::pow(z, 2.0 * j + mu + 0.5) * scaled_j(mu + j, y * z);
        acc += binomial(q, j) * bj * cores[q - j](y);
      }
      return acc;
    };
  } else {
    if (!g) throw UsageError("convolution evidence needs a second function");
    const auto hat = hankel_transform_exact(convolve_exact(f, *g));
    sp.rate = hat.rate();
    sp.zero = hat.is_zero();
    std::vector<GaussPoly> cores{hat.core()};
    for (int j = 1; j <= 24; ++j) cores.push_back(cores.back().xinv_derivative(1));
    sp.gd = [=](int q, double y) { return cores.at(q)(y); };
  }
  return sp;
}

WeightSequence explicit_from_logs(int n, const std::function<double(int)>& log_value) {
  std::vector<double> v(n + 1);
  for (int k = 0; k <= n; ++k) v[k] = std::exp(log_value(k));
  return WeightSequence::explicit_values(std::move(v));
}

}  // namespace

EvidenceReport continuity_evidence(const SymbolFunction& a, const GaussHermiteFunction& f,
                                   const std::optional<GaussHermiteFunction>& g, const TheoremInputs& inputs,
                                   const EvidenceOptions& options) {
  const auto& tr = options.truncation;
  if (tr.K_max < 1 || tr.Q_max < 1 || tr.K_max > 8 || tr.Q_max > 8)
    throw DomainError("evidence truncation requires 1 <= K_max, Q_max <= 8");
  if (!(options.u_step > 0) || !(options.u_max > 4 * options.u_step)) throw DomainError("bad evidence grid");
  if (options.mode == EvidenceMode::translate && !(options.z > 0 && options.z < inputs.z0))
    throw DomainError("translation requires 0 < z < z0");
  if (g && !(g->order() == f.order())) throw DomainError("convolution needs equal orders");

  EvidenceReport rep;
  rep.options = options;
  rep.inputs = inputs.fitted ? inputs : with_fitted_constants(inputs);
  rep.constants = theorem_constants(rep.inputs);
  const auto& tc = rep.constants;
  const double mu = f.mu();
  rep.p_exponent = static_cast<int>(std::ceil(a.order));
  rep.s_exponent = static_cast<int>(std::ceil(2 * mu + 2));
  const int K = tr.K_max, Q = tr.Q_max;

  const auto& in = rep.inputs;
  const auto as = WeightSequence::elementwise_max(in.a, in.d);
  const auto bs = WeightSequence::elementwise_max(in.b, in.c);
  const auto target_k = explicit_from_logs(K, [&](int k) { return 3 * as.log_value(k) + bs.log_value(k); });
  const auto target_q = explicit_from_logs(Q, [&](int q) { return 2 * as.log_value(q) + 2 * bs.log_value(q); });
  const auto ref_k = explicit_from_logs(K, [&](int k) { return in.a.log_value(k) + in.b.log_value(k); });
  const auto ref_q = explicit_from_logs(Q, [&](int q) { return 2 * in.a.log_value(q); });
  const bool translate = options.mode == EvidenceMode::translate;
  const GevreyParams target_p{translate ? tc.A6 : tc.A7, options.sigma1, tc.B6, options.rho1};
  const GevreyParams ref_p{tc.A1, options.sigma, translate ? tc.B3 : tc.B1, options.rho};

  const Spectral sp = spectral_of(f, g, options);
  const double sym_rate = a.y_gauss_rate();
  if (!(sp.zero || sp.rate + std::min(sym_rate, 0.0) > 0))
    throw DomainError("symbol grows faster than the transform decays");

  // reference table: exact derivatives of g
  std::vector<std::vector<double>> ref_gamma(K + 1, std::vector<double>(Q + 1, 0.0));
  if (!sp.zero)
    for (int q = 0; q <= Q; ++q) {
      const auto sups = weighted_sups([&](double y) { return sp.gd(q, y); }, K);
      for (int k = 0; k <= K; ++k) ref_gamma[k][q] = sups[k];
    }
  rep.reference_table = weigh_table(ref_gamma, f.order(), NormMode::def3, ref_p, ref_k, ref_q);
  rep.reference_norm = rep.reference_table.value;

  // output samples F(u) = x^{-mu-1/2} Phi(x), x = sqrt(u)
  const double s = options.u_step / 2;
  const std::size_t top = static_cast<std::size_t>(std::ceil(options.u_max / s));
  const std::size_t N = top + 2 * static_cast<std::size_t>(Q + 4);
  std::vector<double> F(N + 1, 0.0);
  QuadratureSpec spec = QuadratureSpec::defaults();
  spec.abs_tol = options.abs_tol;
  const double eff_rate = sp.rate + std::min(sym_rate, 0.0);
  spec.truncation = sp.zero ? 1.0 : std::sqrt(60.0 / eff_rate) + 2.0;
  int unconverged = 0;
  const auto integrand_at = [&](double x) {
    return [&, x](double y) {
      if (y == 0.0) return 0.0;
      return std::pow(y, 2 * mu + 1) * bessel_j_scaled_sq(mu, x * x * y * y) * a(x, y) * sp.gd(0, y);
    };
  };
  if (!sp.zero)
    for (std::size_t i = 0; i <= N; ++i) {
      const auto r = integrate(integrand_at(std::sqrt(static_cast<double>(i) * s)), spec);
      F[i] = r.value;
      if (!r.converged) ++unconverged;
    }
  if (unconverged) rep.diagnostics.push_back(std::to_string(unconverged) + " output samples did not converge");

  std::vector<std::vector<double>> out_gamma(K + 1, std::vector<double>(Q + 1, 0.0));
  std::vector<std::vector<double>> out_err(K + 1, std::vector<double>(Q + 1, 0.0));
  std::vector<std::vector<Derivative>> deriv(Q + 1, std::vector<Derivative>(top + 1));
  for (int q = 0; q <= Q; ++q)
    for (std::size_t i = 0; i <= top; ++i) {
      deriv[q][i] = q == 0 ? Derivative{F[i], 0.0} : sampled_derivative(F, s, i, q);
      const double scale = std::pow(2.0, q);
      const double x = std::sqrt(static_cast<double>(i) * s);
      for (int k = 0; k <= K; ++k) {
        const double w = k == 0 ? scale : std::pow(x, k) * scale;
        out_gamma[k][q] = std::max(out_gamma[k][q], w * std::abs(deriv[q][i].value));
        out_err[k][q] = std::max(out_err[k][q], w * deriv[q][i].error);
      }
    }
  rep.output_table = weigh_table(out_gamma, f.order(), NormMode::def3, target_p, target_k, target_q);

  rep.derivative_error.assign(K + 1, std::vector<double>(Q + 1, 0.0));
  for (int k = 0; k <= K; ++k)
    for (int q = 0; q <= Q; ++q) {
      const double rel = out_gamma[k][q] > 0 ? out_err[k][q] / out_gamma[k][q] : 0.0;
      rep.derivative_error[k][q] = rel;
      if (rel > 0.1) rep.flagged.emplace_back(k, q);
    }
  rep.flagged_fraction = static_cast<double>(rep.flagged.size()) / ((K + 1) * (Q + 1));
  const auto is_flagged = [&](int k, int q) {
    return std::find(rep.flagged.begin(), rep.flagged.end(), std::pair{k, q}) != rep.flagged.end();
  };
  double sup = 0.0;
  for (int k = 0; k <= K; ++k)
    for (int q = 0; q <= Q; ++q)
      if (!is_flagged(k, q)) sup = std::max(sup, rep.output_table.at(k, q));
  rep.output_norm = sup;

  if (rep.output_norm == 0.0 && rep.reference_norm == 0.0) {
    rep.empirical_R = 0.0;
  } else if (rep.reference_norm == 0.0) {
    rep.empirical_R = std::numeric_limits<double>::infinity();
    rep.diagnostics.push_back("reference norm vanishes while the output does not");
  } else {
    rep.empirical_R = rep.output_norm / rep.reference_norm;
  }

  const double anchor = rep.output_table.at(0, 0);
  bool bounded = !is_flagged(0, 0);
  if (!bounded) rep.diagnostics.push_back("entry (0, 0) is flagged; boundary comparison has no anchor");
  for (int k = 0; k <= K; ++k)
    for (int q = 0; q <= Q; ++q)
      if ((k == K || q == Q) && !is_flagged(k, q) && rep.output_table.at(k, q) > anchor) bounded = false;
  rep.bounded = bounded && std::isfinite(rep.empirical_R);
  rep.verdict = rep.bounded ? "bounded at truncation" : "growth at truncation boundary";
  if (!rep.flagged.empty())
    rep.diagnostics.push_back(std::to_string(rep.flagged.size()) + " entries flagged for differentiation noise");

  if (options.checkpoints && !sp.zero) {
    for (double u0 : {0.8, 2.4}) {
      const std::size_t i = static_cast<std::size_t>(std::lround(u0 / s));
      const double x = std::sqrt(static_cast<double>(i) * s);
      for (int q = 0; q <= std::min(2, Q); ++q) {
        const double lhs = std::pow(x, mu + q + 0.5) * std::pow(2.0, q) * deriv[q][i].value;
        double rhs = 0.0;
        for (int r = 0; r <= q; ++r) {
          const double nu = mu + q - r;
          const auto term = integrate(
              [&](double y) {
                if (y == 0.0) return 0.0;
                const double w = x * y;
                const double jw = std::pow(w, nu + 0.5) * bessel_j_scaled_sq(nu, w * w);
                return jw * a.derivative(r, 0, x, y) * std::pow(-y, q - r) * std::pow(y, mu + 0.5) * sp.gd(0, y);
              },
              spec);
          rhs += binomial(q, r) * std::pow(x, r) * term.value;
        }
        rep.checkpoints.push_back({"order_sum", q, 0, x, lhs, rhs, std::abs(lhs - rhs) / (1 + std::abs(rhs))});
        for (int k = 1; k <= std::min(2, K); ++k) {
          const double lk = std::pow(-x, k) * lhs;
          double rk = 0.0;
          for (int r = 0; r <= q; ++r) {
            const double nu = mu + q - r + k;
            const auto term = integrate(
                [&](double y) {
                  if (y == 0.0) return 0.0;
                  const double w = x * y;
                  double inner = 0.0;
                  for (int v = 0; v <= k; ++v) inner += binomial(k, v) * a.derivative(r, v, x, y) * sp.gd(k - v, y);
                  return std::pow(y, mu + q - r + k + 1) * std::pow(w, nu) * bessel_j_scaled_sq(nu, w * w) * inner;
                },
                spec);
            rk += binomial(q, r) * ((q - r) % 2 ? -1.0 : 1.0) * std::pow(x, r + 0.5) * term.value;
          }
          rep.checkpoints.push_back({"y_ladder", q, k, x, lk, rk, std::abs(lk - rk) / (1 + std::abs(rk))});
        }
      }
    }
  }
  return rep;
}

}  // namespace hankel
