#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hankel/diffops.hpp"
#include "hankel/errors.hpp"
#include "hankel/gevrey.hpp"
#include "hankel/hankel_transform.hpp"
#include "hankel/io.hpp"
#include "hankel/pdo.hpp"
#include "hankel/translation.hpp"

using namespace hankel;

namespace {

constexpr int kOk = 0, kUsage = 1, kFailed = 2;

struct Settings {
  double mu = 0.0;
  std::string function = "gauss:p=0.5";
  std::string function2;
  std::string grid = "0.1:10:100";
  std::string out;     // CSV grid
  std::string report;  // JSON report; stdout when empty
  double z = 1.0;
  double z0 = 4.0;
  std::string route = "spectral";
  std::string symbol = "constant";
  std::string pdo_mode = "apply";
  std::string norm = "def3";
  double A = 1.0, B = 1.0, sigma = 0.1, rho = 0.1;
  double C = 1.0, D = 1.0, sigma1 = 0.1, rho1 = 0.1;
  std::string a_seq = "factorial-power:s=1", b_seq = "factorial-power:s=1";
  std::string c_seq = "factorial-power:s=1", d_seq = "factorial-power:s=1";
  int K = 6, Q = 6;
  int seq_K = 20;
  int m = -1, k = -1;
  bool membership = false;
  bool tilde = false;
  std::string rule = "factorial-power:s=1";
  std::string rule_b;
  std::string suite = "all";
  std::optional<double> only_mu;
  double tol_scale = 1.0;
  std::string evidence_mode = "translate";
  bool checkpoints = false;
  // quadrature overrides
  std::optional<double> abs_tol, truncation;
  std::optional<int> nodes, max_panels;
};

std::vector<double> parse_grid(const std::string& g) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : g) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) throw UsageError("grid must be a:b:n");
  try {
    const double a = std::stod(parts[0]), b = std::stod(parts[1]);
    const int n = std::stoi(parts[2]);
    if (!(a > 0) || !(b > a) || n < 2) throw UsageError("grid needs 0 < a < b and n >= 2");
    return uniform_grid(a, b, static_cast<std::size_t>(n));
  } catch (const std::logic_error&) {
    throw UsageError("grid must be a:b:n");
  }
}

QuadratureSpec quadrature(const Settings& s) {
  auto q = QuadratureSpec::defaults();
  if (s.abs_tol) q.abs_tol = *s.abs_tol;
  if (s.truncation) q.truncation = *s.truncation;
  if (s.nodes) q.nodes = *s.nodes;
  if (s.max_panels) q.max_panels = *s.max_panels;
  q.validate();
  return q;
}

GaussHermiteFunction load_function(const std::string& spec, double mu) {
  if (!spec.empty() && spec[0] == '@') {
    std::ifstream in(spec.substr(1));
    if (!in) throw UsageError("cannot read " + spec.substr(1));
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw UsageError(std::string("bad JSON in ") + spec.substr(1) + ": " + e.what());
    }
    auto f = family_from_json(j);
    if (f.mu() != mu) throw UsageError("function file has mu = " + std::to_string(f.mu()) + ", --mu is " + std::to_string(mu));
    return f;
  }
  return parse_function_spec(spec, mu);
}

std::string csv_path(const Settings& s) { return s.out; }

Json transform_result_json(const TransformResult& r) {
  Json pts = Json::array();
  const auto& g = r.values.grid();
  for (std::size_t i = 0; i < g.size(); ++i)
    pts.push_back({{"x", g[i]}, {"value", measured(r.values.values()[i], r.error_estimates[i])}, {"converged", bool(r.converged[i])}});
  return {{"points", pts}, {"failures", r.failures}};
}

struct Outcome {
  Json result;
  int code = kOk;
};

Outcome run_transform(const Settings& s) {
  const auto f = load_function(s.function, s.mu);
  const auto grid = parse_grid(s.grid);
  const auto r = hankel_transform([&](double x) { return f(x); }, TransformPlan{BesselOrder(s.mu), grid, quadrature(s)});
  const auto hat = hankel_transform_exact(f);
  double worst = 0.0;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = r.values.values()[i];
    worst = std::max(worst, std::abs(v - hat(grid[i])));
    rows.push_back({grid[i], v, r.error_estimates[i], hat(grid[i])});
  }
  if (!s.out.empty()) write_csv(csv_path(s), {"y", "transform", "error_estimate", "exact"}, rows);
  Json res{{"function", to_json(f)},
           {"exact_transform", to_json(hat)},
           {"quadrature", to_json(quadrature(s))},
           {"samples", transform_result_json(r)},
           {"max_deviation_from_exact", worst}};
  return {res, r.failures ? kFailed : kOk};
}

TranslationOptions translation_options(const Settings& s) {
  TranslationOptions o;
  if (s.route == "spectral") o.route = Route::spectral;
  else if (s.route == "direct") o.route = Route::direct;
  else throw UsageError("route must be spectral or direct");
  o.spec = quadrature(s);
  o.z0 = s.z0;
  return o;
}

Outcome grid_output(const Settings& s, const SampledFunction& v, const std::vector<double>& errors, Json extra) {
  std::vector<std::vector<double>> rows;
  Json pts = Json::array();
  for (std::size_t i = 0; i < v.grid().size(); ++i) {
    rows.push_back({v.grid()[i], v.values()[i], errors[i]});
    pts.push_back({{"x", v.grid()[i]}, {"value", measured(v.values()[i], errors[i])}});
  }
  if (!s.out.empty()) write_csv(csv_path(s), {"x", "value", "error_estimate"}, rows);
  extra["points"] = pts;
  return {extra, kOk};
}

Outcome run_translate(const Settings& s) {
  const auto f = load_function(s.function, s.mu);
  const auto grid = parse_grid(s.grid);
  const auto opts = translation_options(s);
  const auto v = translate(f, s.z, BesselOrder(s.mu), grid, opts);
  // the quadrature tolerance is the per-point error control on this route
  std::vector<double> err(grid.size(), opts.spec.abs_tol);
  return grid_output(s, v, err,
                     {{"function", to_json(f)}, {"z", s.z}, {"route", s.route}, {"quadrature", to_json(opts.spec)}});
}

Outcome run_convolve(const Settings& s) {
  const auto f = load_function(s.function, s.mu);
  const auto g = load_function(s.function2.empty() ? s.function : s.function2, s.mu);
  const auto grid = parse_grid(s.grid);
  const auto opts = translation_options(s);
  const auto v = convolve(f, g, BesselOrder(s.mu), grid, opts);
  const auto ex = convolve_exact(f, g);
  std::vector<double> err(grid.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    err[i] = std::abs(v.values()[i] - ex(grid[i]));
    worst = std::max(worst, err[i]);
  }
  auto out = grid_output(s, v, err,
                         {{"function", to_json(f)},
                          {"function2", to_json(g)},
                          {"route", s.route},
                          {"closed_form", to_json(ex)},
                          {"quadrature", to_json(opts.spec)}});
  out.result["max_deviation_from_closed_form"] = worst;
  return out;
}

Outcome run_pdo(const Settings& s) {
  const auto a = SymbolFunction::parse(s.symbol, BesselOrder(s.mu));
  const auto f = load_function(s.function, s.mu);
  const auto grid = parse_grid(s.grid);
  const TransformPlan plan{BesselOrder(s.mu), grid, quadrature(s)};
  PdoOptions po;
  po.z0 = s.z0;
  std::optional<TransformResult> r;
  Json extra{{"symbol", s.symbol}, {"mode", s.pdo_mode}, {"function", to_json(f)}, {"quadrature", to_json(plan.spec)}};
  if (s.pdo_mode == "apply") {
    r = pdo_apply(a, f, BesselOrder(s.mu), plan, po);
  } else if (s.pdo_mode == "translate") {
    r = pdo_translate(a, f, s.z, BesselOrder(s.mu), plan, po);
    extra["z"] = s.z;
  } else if (s.pdo_mode == "convolve") {
    const auto g = load_function(s.function2.empty() ? s.function : s.function2, s.mu);
    r = pdo_convolve(a, f, g, plan);
    extra["function2"] = to_json(g);
  } else {
    throw UsageError("pdo mode must be apply, translate or convolve");
  }
  auto out = grid_output(s, r->values, r->error_estimates, extra);
  out.result["failures"] = r->failures;
  out.code = r->failures ? kFailed : kOk;
  return out;
}

Outcome run_seminorm(const Settings& s) {
  const auto f = load_function(s.function, s.mu);
  Json res{{"function", to_json(f)}};
  if (s.m >= 0 || s.k >= 0) {
    if (s.m < 0 || s.k < 0) throw UsageError("--m and --k go together");
    res["gamma"] = {{"m", s.m}, {"k", s.k}, {"value", exact(gamma_seminorm(f, s.m, s.k))}};
    return {res, kOk};
  }
  const auto a = WeightSequence::parse(s.a_seq), b = WeightSequence::parse(s.b_seq);
  const GevreyParams p{s.A, s.sigma, s.B, s.rho};
  const Truncation t{s.K, s.Q};
  const auto mode = parse_norm_mode(s.norm);
  res["sequences"] = {{"a", a.describe()}, {"b", b.describe()}};
  res["table"] = to_json(gevrey_norm(f, mode, p, a, b, t));
  int code = kOk;
  if (s.membership) {
    const auto m = estimate_membership(f, mode, p, a, b, t);
    res["membership"] = to_json(m);
    if (!m.found) code = kFailed;
  }
  if (s.tilde) {
    const auto tr = tilde_condition_report(f, b, p, t);
    Json ratio = Json::array();
    for (double v : tr.ratio) ratio.push_back(std::isfinite(v) ? Json(v) : Json("nan"));
    res["tilde"] = {{"Q", tr.Q}, {"Q_star", tr.Q_star}, {"witness", tr.witness}, {"ratio", ratio}};
  }
  return {res, code};
}

Outcome run_sequence_check(const Settings& s) {
  const auto a = WeightSequence::parse(s.rule);
  const auto b = WeightSequence::parse(s.rule_b.empty() ? s.rule : s.rule_b);
  const auto rep = check_conditions(a, b, s.seq_K);
  Json res{{"a", a.describe()}, {"b", b.describe()}, {"K", s.seq_K}, {"report", to_json(rep)}};
  return {res, rep.all_hold() ? kOk : kFailed};
}

struct Residual {
  Json entry;
  bool pass;
};

Outcome run_verify(const Settings& s) {
  const std::vector<double> all_mu{-0.5, 0.0, 0.5, 1.0, 2.5};
  std::vector<double> mus = s.only_mu ? std::vector<double>{*s.only_mu} : all_mu;
  const bool all = s.suite == "all";
  if (!all && s.suite != "bessel" && s.suite != "operators" && s.suite != "spectral")
    throw UsageError("suite must be bessel, operators, spectral or all");
  Json res{{"suite", s.suite}, {"mu", mus}};
  Json checks = Json::array();
  int failures = 0;
  const auto record = [&](Json e, double residual, double bound) {
    const bool pass = residual <= bound * s.tol_scale;
    e["residual"] = residual;
    e["bound"] = bound * s.tol_scale;
    e["pass"] = pass;
    if (!pass) ++failures;
    checks.push_back(std::move(e));
  };

  if (all || s.suite == "bessel") {
    for (double mu : mus)
      for (int k = 0; k <= 4; ++k)
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
          for (auto var : {DerivativeVariant::lowering, DerivativeVariant::raising}) {
            if (var == DerivativeVariant::raising && mu - k < -0.5) continue;
            const BesselOrder o(mu);
            const double rhs = derivative_identity_rhs(o, k, x, var);
            record({{"identity", var == DerivativeVariant::lowering ? "bessel_lowering" : "bessel_raising"},
                    {"mu", mu},
                    {"k", k},
                    {"x", x}},
                   derivative_identity_residual(o, k, x, var), 1e-6 * (1 + std::abs(rhs)));
          }
  }
  if (all || s.suite == "operators") {
    const auto q = quadrature(s);
    for (double mu : mus) {
      const std::vector<GaussHermiteFunction> fs{GaussHermiteFunction::gaussian(mu, 0.5),
                                                 GaussHermiteFunction(mu, 1.0, {1.0, -0.5, 0.25})};
      for (std::size_t fi = 0; fi < fs.size(); ++fi) {
        const auto& f = fs[fi];
        for (auto [rel, name] : {std::pair{TransformRelation::shift_down, "transform_shift_down"},
                                 std::pair{TransformRelation::shift_up, "transform_shift_up"},
                                 std::pair{TransformRelation::s_operator, "transform_s_operator"}})
          for (double y : {0.5, 1.0, 2.0, 4.0})
            record({{"identity", name}, {"mu", mu}, {"function", fi}, {"y", y}},
                   transform_relation_residual(f, rel, y, q), 1e-6);
        for (double x : {0.5, 1.0, 2.0}) {
          for (int n = 1; n <= 4; ++n)
            record({{"identity", "ladder"}, {"mu", mu}, {"function", fi}, {"q", n}, {"x", x}},
                   ladder_residual(f, n, x), 1e-10);
          for (int k = 0; k <= 4; ++k)
            record({{"identity", "leibniz"}, {"mu", mu}, {"function", fi}, {"k", k}, {"x", x}},
                   leibniz_residual(GaussPoly(0.3, {1.0, 0.5}), f, k, x), 1e-10);
          for (int r = 0; r <= 2; ++r)
            record({{"identity", "s_power"}, {"mu", mu}, {"function", fi}, {"r", r}, {"x", x}},
                   s_power_residual(f, r, x), 1e-9);
        }
      }
    }
  }
  if (s.suite == "spectral") {
    std::vector<double> smu = s.only_mu ? mus : std::vector<double>{0.5, 1.0};
    const std::vector<double> us{0.5, 1.0, 2.0};
    for (double mu : smu) {
      const auto f = GaussHermiteFunction::gaussian(mu, 0.5);
      for (double z : {0.5, 1.0})
        for (const auto& c : translation_identity(f, z, us))
          record({{"identity", "spectral_translation"}, {"mu", mu}, {"z", z}, {"u", c.u}, {"lhs", c.lhs}, {"rhs", c.rhs}},
                 c.residual, 5e-4 * (1 + std::abs(c.rhs)));
      for (const auto& c : convolution_identity(f, f, us))
        record({{"identity", "spectral_convolution"}, {"mu", mu}, {"u", c.u}, {"lhs", c.lhs}, {"rhs", c.rhs}},
               c.residual, 5e-4 * (1 + std::abs(c.rhs)));
    }
  }
  res["checks"] = checks;
  res["failures"] = failures;
  return {res, failures ? kFailed : kOk};
}

Outcome run_evidence(const Settings& s) {
  const auto a = SymbolFunction::parse(s.symbol, BesselOrder(s.mu));
  const auto f = load_function(s.function, s.mu);
  std::optional<GaussHermiteFunction> g;
  EvidenceOptions o;
  if (s.evidence_mode == "translate") o.mode = EvidenceMode::translate;
  else if (s.evidence_mode == "convolve") o.mode = EvidenceMode::convolve;
  else throw UsageError("evidence mode must be translate or convolve");
  if (o.mode == EvidenceMode::convolve) g = load_function(s.function2.empty() ? s.function : s.function2, s.mu);
  o.z = s.z;
  o.sigma = s.sigma;
  o.rho = s.rho;
  o.sigma1 = s.sigma1;
  o.rho1 = s.rho1;
  o.truncation = Truncation{s.K, s.Q};
  o.checkpoints = s.checkpoints;
  if (s.abs_tol) o.abs_tol = *s.abs_tol;
  TheoremInputs in;
  in.A = s.A;
  in.B = s.B;
  in.C = s.C;
  in.D = s.D;
  in.z0 = s.z0;
  in.a = WeightSequence::parse(s.a_seq);
  in.b = WeightSequence::parse(s.b_seq);
  in.c = WeightSequence::parse(s.c_seq);
  in.d = WeightSequence::parse(s.d_seq);
  const auto rep = continuity_evidence(a, f, g, in, o);
  Json res = to_json(rep);
  res["symbol"] = s.symbol;
  res["function"] = to_json(f);
  if (g) res["function2"] = to_json(*g);
  const bool ok = rep.bounded && std::isfinite(rep.empirical_R) && rep.flagged_fraction < 0.2;
  return {res, ok ? kOk : kFailed};
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// key=value lines become --key=value flags placed before the command line ones
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty() || rest.empty()) return rest;
  std::vector<std::string> out{rest[0]};
  for (const auto& [k, v] : read_config(path)) {
    std::string key = k;
    for (char& c : key)
      if (c == '_') c = '-';
    out.push_back("--" + key + "=" + v);
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hankel transforms, translations, convolutions, p.d.o.s and Gevrey seminorms"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "Help for every subcommand");
  Settings s;
  double only_mu = 0.0;

  const auto common = [&](CLI::App* c) {
    c->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    c->add_option("--mu", s.mu, "Bessel order")->capture_default_str();
    c->add_option("--report", s.report, "JSON report path (stdout when omitted)");
    c->add_option("--abs-tol", s.abs_tol, "Quadrature absolute tolerance");
    c->add_option("--truncation", s.truncation, "Quadrature upper limit");
    c->add_option("--nodes", s.nodes, "Gauss-Legendre nodes per panel");
    c->add_option("--max-panels", s.max_panels, "Panel budget");
  };
  const auto with_function = [&](CLI::App* c) {
    c->add_option("--function", s.function, "gauss:p=..[,a=..] | hermite:p=..,c=c0;c1;.. | zero | @file.json")
        ->capture_default_str();
  };
  const auto with_grid = [&](CLI::App* c) {
    c->add_option("--grid", s.grid, "Output grid a:b:n")->capture_default_str();
    c->add_option("--out", s.out, "CSV grid output path");
  };
  const auto with_space = [&](CLI::App* c) {
    c->add_option("--A", s.A)->capture_default_str();
    c->add_option("--B", s.B)->capture_default_str();
    c->add_option("--sigma", s.sigma)->capture_default_str();
    c->add_option("--rho", s.rho)->capture_default_str();
    c->add_option("--a-seq", s.a_seq, "Weight sequence a_k")->capture_default_str();
    c->add_option("--b-seq", s.b_seq, "Weight sequence b_q")->capture_default_str();
    c->add_option("--K", s.K, "k truncation")->capture_default_str();
    c->add_option("--Q", s.Q, "q truncation")->capture_default_str();
  };

  auto* transform = app.add_subcommand("transform", "h_mu on a grid, with the exact transform alongside");
  common(transform);
  with_function(transform);
  with_grid(transform);

  auto* translate_cmd = app.add_subcommand("translate", "Hankel translation tau_z");
  common(translate_cmd);
  with_function(translate_cmd);
  with_grid(translate_cmd);
  translate_cmd->add_option("--z", s.z)->capture_default_str();
  translate_cmd->add_option("--z0", s.z0)->capture_default_str();
  translate_cmd->add_option("--route", s.route, "spectral | direct")->capture_default_str();

  auto* convolve_cmd = app.add_subcommand("convolve", "Hankel convolution");
  common(convolve_cmd);
  with_function(convolve_cmd);
  with_grid(convolve_cmd);
  convolve_cmd->add_option("--function2", s.function2, "Second function (defaults to --function)");
  convolve_cmd->add_option("--route", s.route, "spectral | direct")->capture_default_str();

  auto* pdo = app.add_subcommand("pdo", "Pseudo-differential operator h_{mu,a}");
  common(pdo);
  with_function(pdo);
  with_grid(pdo);
  pdo->add_option("--symbol", s.symbol, "constant:c=.. | neg-y2 | japanese:m=.. | exp-y2:q=.. | gauss-y:q=.. | translation:z=..")
      ->capture_default_str();
  pdo->add_option("--mode", s.pdo_mode, "apply | translate | convolve")->capture_default_str();
  pdo->add_option("--function2", s.function2);
  pdo->add_option("--z", s.z)->capture_default_str();
  pdo->add_option("--z0", s.z0)->capture_default_str();

  auto* seminorm = app.add_subcommand("seminorm", "gamma seminorms, Gevrey tables and membership");
  common(seminorm);
  with_function(seminorm);
  with_space(seminorm);
  seminorm->add_option("--m", s.m, "Single gamma_{m,k}: weight power");
  seminorm->add_option("--k", s.k, "Single gamma_{m,k}: derivative order");
  seminorm->add_option("--norm", s.norm, "def1 | def2 | def3")->capture_default_str();
  seminorm->add_flag("--membership", s.membership, "Estimate the smallest admissible constants");
  seminorm->add_flag("--tilde", s.tilde, "Report the fixed-k sups Q_k and Q*_q");

  auto* seq = app.add_subcommand("sequence-check", "Weight sequence conditions and fitted constants");
  common(seq);
  seq->add_option("--rule", s.rule, "Sequence a (factorial-power:s=.. | power-power:s=.. | explicit:..)")
      ->capture_default_str();
  seq->add_option("--rule-b", s.rule_b, "Sequence b (defaults to --rule)");
  seq->add_option("--K", s.seq_K, "Index range 0..K")->capture_default_str();

  auto* verify = app.add_subcommand("verify-identities", "Identity residual suites");
  common(verify);
  auto* mu_opt = verify->get_option("--mu");
  verify->remove_option(mu_opt);
  auto* only = verify->add_option("--mu", only_mu, "Restrict to one order");
  verify->add_option("--suite", s.suite, "bessel | operators | spectral | all")->capture_default_str();
  verify->add_option("--tol-scale", s.tol_scale, "Multiplies every residual bound")->capture_default_str();

  auto* evidence = app.add_subcommand("evidence", "Numerical continuity evidence for h_{mu,a} tau_z and h_{mu,a}(. # .)");
  common(evidence);
  with_function(evidence);
  with_space(evidence);
  evidence->add_option("--symbol", s.symbol)->capture_default_str();
  evidence->add_option("--mode", s.evidence_mode, "translate | convolve")->capture_default_str();
  evidence->add_option("--function2", s.function2);
  evidence->add_option("--z", s.z)->capture_default_str();
  evidence->add_option("--z0", s.z0)->capture_default_str();
  evidence->add_option("--C", s.C)->capture_default_str();
  evidence->add_option("--D", s.D)->capture_default_str();
  evidence->add_option("--sigma1", s.sigma1)->capture_default_str();
  evidence->add_option("--rho1", s.rho1)->capture_default_str();
  evidence->add_option("--c-seq", s.c_seq)->capture_default_str();
  evidence->add_option("--d-seq", s.d_seq)->capture_default_str();
  evidence->add_flag("--checkpoints", s.checkpoints, "Per-term residuals of the proof chain at q, k <= 2");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }
  if (only->count()) s.only_mu = only_mu;

  auto* cmd = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  Json report{{"schema", kSchema}, {"command", cmd->get_name()}};
  Json config;
  for (const auto* opt : cmd->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "--report" || opt->get_name() == "--out") continue;
    if (opt->count()) config[opt->get_lnames().front()] = opt->as<std::string>();
  }
  report["config"] = config;
  Outcome outcome;
  try {
    if (cmd == transform) outcome = run_transform(s);
    else if (cmd == translate_cmd) outcome = run_translate(s);
    else if (cmd == convolve_cmd) outcome = run_convolve(s);
    else if (cmd == pdo) outcome = run_pdo(s);
    else if (cmd == seminorm) outcome = run_seminorm(s);
    else if (cmd == seq) outcome = run_sequence_check(s);
    else if (cmd == verify) outcome = run_verify(s);
    else outcome = run_evidence(s);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << cmd->help();
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << cmd->help();
    return kUsage;
  } catch (const NumericalError& e) {
    outcome.result = Json::object();
    outcome.result["diagnostics"] = Json::array({e.what()});
    outcome.code = kFailed;
  }
  report["result"] = outcome.result;
  report["status"] = outcome.code == kOk ? "ok" : "failed";
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["metadata"] = {{"generated_at", timestamp()}, {"elapsed_seconds", elapsed}};
  try {
    if (s.report.empty()) std::cout << report.dump(2) << '\n';
    else write_json(s.report, report);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return outcome.code;
}
