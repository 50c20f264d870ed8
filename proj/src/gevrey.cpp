#include "hankel/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <tuple>

#include "hankel/errors.hpp"

namespace hankel {

namespace {

constexpr int kCached = 64;

bool log_le(double lhs, double rhs) {
  return lhs <= rhs + 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// closed rules claim log-convexity; hold them to it on the cached range
void require_log_convex(const std::vector<double>& L, const char* rule) {
  for (std::size_t k = 1; k + 1 < L.size(); ++k)
    if (!log_le(2 * L[k], L[k - 1] + L[k + 1]))
      throw NumericalError(std::string(rule) + " failed log-convexity at index " + std::to_string(k));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

WeightSequence WeightSequence::factorial_power(double s) {
  if (!(s >= 0) || !std::isfinite(s)) throw DomainError("factorial-power exponent must be finite and >= 0");
  WeightSequence w;
  w.rule_ = SequenceRule::factorial_power;
  w.s_ = s;
  for (int k = 0; k < kCached; ++k) w.logs_.push_back(s * std::lgamma(k + 1.0));
  require_log_convex(w.logs_, "factorial-power");
  return w;
}

WeightSequence WeightSequence::power_power(double s) {
  if (!(s >= 0) || !std::isfinite(s)) throw DomainError("power-power exponent must be finite and >= 0");
  WeightSequence w;
  w.rule_ = SequenceRule::power_power;
  w.s_ = s;
  for (int k = 0; k < kCached; ++k) w.logs_.push_back(k == 0 ? 0.0 : s * k * std::log(static_cast<double>(k)));
  require_log_convex(w.logs_, "power-power");
  return w;
}

WeightSequence WeightSequence::explicit_values(std::vector<double> values) {
  if (values.empty()) throw DomainError("explicit sequence is empty");
  WeightSequence w;
  w.rule_ = SequenceRule::explicit_list;
  for (double v : values) {
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("sequence values must be finite and > 0");
    w.logs_.push_back(std::log(v));
  }
  return w;
}

WeightSequence WeightSequence::elementwise_max(const WeightSequence& a, const WeightSequence& b) {
  WeightSequence w;
  w.rule_ = SequenceRule::elementwise_max;
  w.parts_ = {a, b};
  return w;
}

WeightSequence WeightSequence::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto number = [&](const std::string& text) {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw UsageError("");
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad number '" + text + "' in sequence spec '" + spec + "'");
    }
  };
  if (name == "factorial-power" || name == "power-power") {
    std::string s = rest;
    if (s.rfind("s=", 0) == 0) s = s.substr(2);
    if (s.empty()) throw UsageError("sequence spec '" + spec + "' needs s=<value>");
    const double v = number(s);
    return name == "factorial-power" ? factorial_power(v) : power_power(v);
  }
  if (name == "explicit") {
    std::vector<double> vals;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(number(item));
    return explicit_values(std::move(vals));
  }
  throw UsageError("unknown sequence rule '" + name + "' (factorial-power, power-power, explicit)");
}

int WeightSequence::last_index() const {
  switch (rule_) {
    case SequenceRule::explicit_list: return static_cast<int>(logs_.size()) - 1;
    case SequenceRule::elementwise_max: return std::min(parts_[0].last_index(), parts_[1].last_index());
    default: return std::numeric_limits<int>::max();
  }
}

double WeightSequence::log_value(int k) const {
  if (k < 0 || k > last_index()) throw DomainError("sequence index " + std::to_string(k) + " out of range");
  if (rule_ == SequenceRule::elementwise_max) return std::max(parts_[0].log_value(k), parts_[1].log_value(k));
  if (k < static_cast<int>(logs_.size())) return logs_[k];
  if (rule_ == SequenceRule::factorial_power) return s_ * std::lgamma(k + 1.0);
  return s_ * k * std::log(static_cast<double>(k));
}

double WeightSequence::value(int k) const { return std::exp(log_value(k)); }

std::string WeightSequence::describe() const {
  switch (rule_) {
    case SequenceRule::factorial_power: return "factorial-power:s=" + fmt(s_);
    case SequenceRule::power_power: return "power-power:s=" + fmt(s_);
    case SequenceRule::elementwise_max: return "max(" + parts_[0].describe() + "," + parts_[1].describe() + ")";
    case SequenceRule::explicit_list: break;
  }
  std::string out = "explicit:";
  for (std::size_t i = 0; i < logs_.size(); ++i) out += (i ? "," : "") + fmt(std::exp(logs_[i]));
  return out;
}

bool ConditionReport::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const ConditionVerdict& v) { return v.holds; });
}

namespace {

// Slope of y_p in p, extrapolated to p -> inf from step-2 differences at three
// indices of the parity of the last one, assuming g(p) = e + a/p + b/p^2.
double extrapolated_slope(const std::vector<double>& y) {
  const int P = static_cast<int>(y.size()) - 1;
  if (P < 2) return P == 1 ? y[1] - y[0] : 0.0;
  const auto g = [&](int p) { return (y[p] - y[p - 2]) / 2.0; };
  std::vector<int> ps{P};
  for (int p = P / 2; ps.size() < 3 && p >= 2; p /= 2) {
    const int q = p % 2 == P % 2 ? p : p + 1;
    if (q >= 2 && q < ps.back()) ps.push_back(q);
  }
  if (ps.size() == 1) return g(P);
  double e = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (j != i) w *= (0.0 - 1.0 / ps[j]) / (1.0 / ps[i] - 1.0 / ps[j]);
    e += w * g(ps[i]);
  }
  return e;
}

std::pair<double, double> fit_upper(const std::vector<double>& y) {
  const double H = std::max(2.0, std::exp(extrapolated_slope(y)));
  double lr = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < y.size(); ++p) lr = std::max(lr, y[p] - static_cast<double>(p) * std::log(H));
  return {std::exp(lr), H};
}

std::pair<double, double> fit_lower(const std::vector<double>& y) {
  const double h = std::min(1.0, std::exp(extrapolated_slope(y)));
  double lc = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < y.size(); ++p) lc = std::min(lc, y[p] - static_cast<double>(p) * std::log(h));
  return {std::exp(lc), h};
}

std::vector<double> logs_of(const WeightSequence& s, int K, const char* label) {
  if (s.last_index() < K)
    throw DomainError(std::string("sequence ") + label + " defines only " + std::to_string(s.last_index() + 1) +
                      " values, need " + std::to_string(K + 1));
  std::vector<double> L(K + 1);
  for (int k = 0; k <= K; ++k) {
    L[k] = s.log_value(k);
    if (!std::isfinite(L[k]))
      throw NumericalError(std::string("log of sequence ") + label + " at index " + std::to_string(k) + " is not finite");
  }
  return L;
}

// log of a_p / min_q a_q a_{p-q}
std::vector<double> split_ratio(const std::vector<double>& L) {
  std::vector<double> y(L.size());
  for (std::size_t p = 0; p < L.size(); ++p) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q <= p; ++q) m = std::min(m, L[q] + L[p - q]);
    y[p] = L[p] - m;
  }
  return y;
}

void exact_checks(const std::vector<double>& L, const std::string& label, std::vector<ConditionVerdict>& out) {
  const int K = static_cast<int>(L.size()) - 1;
  ConditionVerdict convex{"log_convex", label, true, -1, -1, "a_k^2 <= a_{k-1} a_{k+1}"};
  for (int k = 1; k < K && convex.holds; ++k)
    if (!log_le(2 * L[k], L[k - 1] + L[k + 1])) {
      convex.holds = false;
      convex.witness = k;
    }
  out.push_back(convex);

  ConditionVerdict product{"product_bound", label, true, -1, -1, "a_p a_k <= a_0 a_{p+k}"};
  for (int p = 0; p <= K && product.holds; ++p)
    for (int k = 0; p + k <= K; ++k)
      if (!log_le(L[p] + L[k], L[0] + L[p + k])) {
        product.holds = false;
        product.witness = p;
        product.witness2 = k;
        break;
      }
  out.push_back(product);

  ConditionVerdict ratio{"ratio_monotone", label, true, -1, -1, "a_k/a_{k+1} <= a_{k-1}/a_k"};
  for (int k = 1; k < K && ratio.holds; ++k)
    if (!log_le(L[k] - L[k + 1], L[k - 1] - L[k])) {
      ratio.holds = false;
      ratio.witness = k;
    }
  out.push_back(ratio);

  ConditionVerdict shift{"shift_bound", label, true, -1, -1, "a_{k-r} <= (a_0/a_1)^r a_k"};
  for (int k = 0; k <= K && shift.holds; ++k)
    for (int r = 0; r <= k; ++r)
      if (!log_le(L[k - r], r * (L[0] - L[1]) + L[k])) {
        shift.holds = false;
        shift.witness = k;
        shift.witness2 = r;
        break;
      }
  out.push_back(shift);
}

}  // namespace

ConditionReport check_conditions(const WeightSequence& a, const WeightSequence& b, int K) {
  if (K < 4 || K > 40) throw DomainError("check_conditions requires 4 <= K <= 40");
  const auto La = logs_of(a, K, "a");
  const auto Lb = logs_of(b, K, "b");
  ConditionReport rep;
  exact_checks(La, "a", rep.verdicts);
  exact_checks(Lb, "b", rep.verdicts);

  auto& c = rep.constants;
  c.K = K;
  std::tie(c.R1, c.H1) = fit_upper(split_ratio(La));
  std::tie(c.R2, c.H2) = fit_upper(split_ratio(Lb));
  c.L1 = c.R1;
  c.Rs1 = c.H1;
  c.L2 = c.R2;
  c.Rs2 = c.H2;
  const auto step = [](const std::vector<double>& L) {
    std::vector<double> t(L.size() - 1);
    for (std::size_t k = 0; k + 1 < L.size(); ++k) t[k] = L[k + 1] - L[k];
    return t;
  };
  std::tie(c.c1, c.h1) = fit_upper(step(La));
  std::tie(c.c2, c.h2) = fit_upper(step(Lb));
  std::tie(c.c, c.h) = fit_lower(step(Lb));

  rep.verdicts.push_back({"split_bound", "a", true, -1, -1, "fitted R1=" + fmt(c.R1) + " H1=" + fmt(c.H1)});
  rep.verdicts.push_back({"split_bound", "b", true, -1, -1, "fitted R2=" + fmt(c.R2) + " H2=" + fmt(c.H2)});
  rep.verdicts.push_back({"step_upper", "a", true, -1, -1, "fitted c1=" + fmt(c.c1) + " h1=" + fmt(c.h1)});
  rep.verdicts.push_back({"step_upper", "b", true, -1, -1, "fitted c2=" + fmt(c.c2) + " h2=" + fmt(c.h2)});
  rep.verdicts.push_back({"step_lower", "b", true, -1, -1, "fitted c=" + fmt(c.c) + " h=" + fmt(c.h)});
  rep.verdicts.push_back({"strong_split", "a", true, -1, -1, "fitted L1=" + fmt(c.L1) + " R1=" + fmt(c.Rs1)});
  rep.verdicts.push_back({"strong_split", "b", true, -1, -1, "fitted L2=" + fmt(c.L2) + " R2=" + fmt(c.Rs2)});
  return rep;
}

namespace {

double golden_max(const RealFunction& g, double lo, double hi) {
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    if (gc > gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - invphi * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + invphi * (hi - lo);
      gd = g(d);
    }
  }
  return std::max(gc, gd);
}

double sup_weighted(const GaussPoly& core, int m) {
  if (core.is_zero()) return 0.0;
  return weighted_sups([&](double x) { return core(x); }, m).back();
}

}  // namespace

std::vector<double> weighted_sups(const RealFunction& core, int M) {
  if (M < 0) throw DomainError("weighted_sups requires M >= 0");
  double right = 30.0;
  std::vector<double> xs, vals;
  std::vector<std::size_t> best(M + 1);
  for (;;) {
    xs = log_grid(1e-3, right, 2048);
    vals.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) vals[i] = std::abs(core(xs[i]));
    bool at_edge = false;
    for (int m = 0; m <= M; ++m) {
      double bv = -1.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = std::pow(xs[i], m) * vals[i];
        if (v > bv) {
          bv = v;
          best[m] = i;
        }
      }
      at_edge = at_edge || (best[m] + 1 == xs.size() && bv > 0);
    }
    if (!at_edge || right >= 1e4) break;
    right *= 2;
  }
  std::vector<double> out(M + 1);
  for (int m = 0; m <= M; ++m) {
    const std::size_t b = best[m];
    const auto g = [&](double x) { return std::abs(std::pow(x, m) * core(x)); };
    double v = std::pow(xs[b], m) * vals[b];
    if (v > 0) v = std::max(v, golden_max(g, xs[b > 0 ? b - 1 : 0], xs[std::min(b + 1, xs.size() - 1)]));
    if (m == 0) v = std::max(v, std::abs(core(0.0)));
    out[m] = v;
  }
  return out;
}

namespace {
}  // namespace

double gamma_seminorm(const GaussHermiteFunction& f, int m, int k) {
  if (m < 0 || k < 0 || m > 30 || k > 30) throw DomainError("gamma_seminorm requires 0 <= m, k <= 30");
  return sup_weighted(f.core().xinv_derivative(k), m);
}

std::string to_string(NormMode m) {
  switch (m) {
    case NormMode::def1: return "def1";
    case NormMode::def2: return "def2";
    case NormMode::def3: return "def3";
  }
  return "?";
}

NormMode parse_norm_mode(const std::string& s) {
  if (s == "def1") return NormMode::def1;
  if (s == "def2") return NormMode::def2;
  if (s == "def3") return NormMode::def3;
  throw UsageError("unknown norm mode '" + s + "' (def1, def2, def3)");
}

void GevreyParams::validate() const {
  for (double v : {A, sigma, B, rho})
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("A, sigma, B and rho must be finite and > 0");
}

void Truncation::validate() const {
  if (K_max < 4 || Q_max < 4 || K_max > 20 || Q_max > 20) throw DomainError("truncation requires 4 <= K_max, Q_max <= 20");
}

std::vector<std::vector<double>> gamma_table(const GaussHermiteFunction& f, const Truncation& t) {
  std::vector<std::vector<double>> g(t.K_max + 1, std::vector<double>(t.Q_max + 1, 0.0));
  GaussPoly core = f.core();
  for (int q = 0; q <= t.Q_max; ++q) {
    if (q > 0) core = core.xinv_derivative(1);
    if (core.is_zero()) continue;
    const auto sups = weighted_sups([&](double x) { return core(x); }, t.K_max);
    for (int k = 0; k <= t.K_max; ++k) g[k][q] = sups[k];
  }
  return g;
}

SeminormTable weigh_table(const std::vector<std::vector<double>>& gammas, BesselOrder mu, NormMode mode,
                          const GevreyParams& params, const WeightSequence& a, const WeightSequence& b) {
  params.validate();
  SeminormTable t;
  t.mu = mu;
  t.mode = mode;
  t.params = params;
  t.truncation = {static_cast<int>(gammas.size()) - 1, static_cast<int>(gammas.at(0).size()) - 1};
  const bool use_a = mode != NormMode::def2, use_b = mode != NormMode::def1;
  t.entries = gammas;
  double best = -1.0;
  for (int k = 0; k <= t.truncation.K_max; ++k)
    for (int q = 0; q <= t.truncation.Q_max; ++q) {
      double& e = t.entries[k][q];
      if (e != 0.0) {
        double ld = 0.0;
        if (use_a) ld += k * std::log(params.A + params.sigma) + a.log_value(k);
        if (use_b) ld += q * std::log(params.B + params.rho) + b.log_value(q);
        e = std::exp(std::log(e) - ld);
      }
      if (e > best) {
        best = e;
        t.value = e;
        t.witness_k = k;
        t.witness_q = q;
      }
    }
  return t;
}

SeminormTable gevrey_norm(const GaussHermiteFunction& f, NormMode mode, const GevreyParams& params,
                          const WeightSequence& a, const WeightSequence& b, const Truncation& t) {
  t.validate();
  params.validate();
  return weigh_table(gamma_table(f, t), f.order(), mode, params, a, b);
}

namespace {

bool within_bounds(const SeminormTable& t, NormMode mode, double factor) {
  const int K = t.truncation.K_max, Q = t.truncation.Q_max;
  const auto& e = t.entries;
  if (mode == NormMode::def1) {
    for (int q = 0; q <= Q; ++q) {
      if (e[K][q] > e[0][q]) return false;
      for (int k = 0; k <= K; ++k)
        if (e[k][q] > factor * e[0][q]) return false;
    }
    return true;
  }
  if (mode == NormMode::def2) {
    for (int k = 0; k <= K; ++k) {
      if (e[k][Q] > e[k][0]) return false;
      for (int q = 0; q <= Q; ++q)
        if (e[k][q] > factor * e[k][0]) return false;
    }
    return true;
  }
  double first_k = 0, last_k = 0, first_q = 0, last_q = 0;
  for (int q = 0; q <= Q; ++q) {
    first_k = std::max(first_k, e[0][q]);
    last_k = std::max(last_k, e[K][q]);
  }
  for (int k = 0; k <= K; ++k) {
    first_q = std::max(first_q, e[k][0]);
    last_q = std::max(last_q, e[k][Q]);
  }
  return last_k <= first_k && last_q <= first_q && t.value <= factor * e[0][0];
}

// Smallest value on the log grid over [1e-3, 1e3] passing ok, refined by bisection in
// log between the last failing and first passing grid points. ok is assumed monotone.
std::optional<double> smallest_passing(const std::function<bool(double)>& ok) {
  const auto grid = log_grid(1e-3, 1e3, 121);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!ok(grid[i])) continue;
    if (i == 0) return grid[0];
    double lo = std::log(grid[i - 1]), hi = std::log(grid[i]);
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ok(std::exp(mid)) ? hi : lo) = mid;
    }
    return std::exp(hi);
  }
  return std::nullopt;
}

}  // namespace

MembershipEstimate estimate_membership(const GaussHermiteFunction& f, NormMode mode, const GevreyParams& params,
                                       const WeightSequence& a, const WeightSequence& b, const Truncation& t,
                                       double bound_factor) {
  t.validate();
  params.validate();
  if (!(bound_factor >= 1)) throw DomainError("bound factor must be >= 1");
  const auto gammas = gamma_table(f, t);
  const auto passes = [&](double A, double B) {
    GevreyParams p = params;
    p.A = A;
    p.B = B;
    return within_bounds(weigh_table(gammas, f.order(), mode, p, a, b), mode, bound_factor);
  };
  MembershipEstimate est;
  est.mode = mode;
  constexpr double grid_max = 1e3;
  switch (mode) {
    case NormMode::def1: est.A_min = smallest_passing([&](double A) { return passes(A, params.B); }); break;
    case NormMode::def2: est.B_min = smallest_passing([&](double B) { return passes(params.A, B); }); break;
    case NormMode::def3:
      est.A_min = smallest_passing([&](double A) { return passes(A, grid_max); });
      if (est.A_min) est.B_min = smallest_passing([&](double B) { return passes(*est.A_min, B); });
      break;
  }
  est.found = mode == NormMode::def1 ? est.A_min.has_value()
              : mode == NormMode::def2 ? est.B_min.has_value()
                                       : (est.A_min.has_value() && est.B_min.has_value());
  if (!est.found) {
    est.message = "not in space at truncation";
    return est;
  }
  GevreyParams p = params;
  if (est.A_min) p.A = *est.A_min;
  if (est.B_min) p.B = *est.B_min;
  const auto table = weigh_table(gammas, f.order(), mode, p, a, b);
  est.value = table.value;
  est.witness_k = table.witness_k;
  est.witness_q = table.witness_q;
  est.message = "bounded at truncation";
  return est;
}

TildeReport tilde_condition_report(const GaussHermiteFunction& f, const WeightSequence& b, const GevreyParams& params,
                                   const Truncation& t) {
  params.validate();
  if (t.K_max < 0 || t.Q_max < 0 || t.K_max + 2 * t.Q_max > 30)
    throw DomainError("tilde_condition_report requires K_max + 2 Q_max <= 30");
  TildeReport r;
  r.B = params.B;
  r.rho = params.rho;
  r.truncation = t;
  const int top = t.K_max + 2 * t.Q_max;
  r.Q.assign(top + 1, 0.0);
  GaussPoly core = f.core();
  for (int q = 0; q <= t.Q_max; ++q) {
    if (q > 0) core = core.xinv_derivative(1);
    const double ld = q * std::log(params.B + params.rho) + b.log_value(q);
    if (core.is_zero()) continue;
    const auto sups = weighted_sups([&](double x) { return core(x); }, top);
    for (int k = 0; k <= top; ++k)
      if (sups[k] != 0.0) r.Q[k] = std::max(r.Q[k], std::exp(std::log(sups[k]) - ld));
  }
  for (int q = 0; q <= t.Q_max; ++q) {
    double best = 0.0;
    int arg = 0;
    for (int k = 0; k <= t.K_max; ++k)
      if (r.Q[k + 2 * q] > best) {
        best = r.Q[k + 2 * q];
        arg = k;
      }
    r.Q_star.push_back(best);
    r.witness.push_back(arg);
  }
  for (int q = 0; q < t.Q_max; ++q)
    r.ratio.push_back(r.Q_star[q] == 0.0 ? std::numeric_limits<double>::quiet_NaN() : r.Q_star[q + 1] / r.Q_star[q]);
  return r;
}

}  // namespace hankel
