// Acceptance criteria 1-10. Prints PASS/FAIL per criterion; exit status 1 if any fails.
// Usage: acceptance_suite --cli <path to hankel_cli> [--only N]...

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hankel/diffops.hpp"
#include "hankel/gevrey.hpp"
#include "hankel/hankel_transform.hpp"
#include "hankel/io.hpp"
#include "hankel/pdo.hpp"
#include "hankel/special_functions.hpp"
#include "hankel/translation.hpp"

using namespace hankel;

namespace {

const std::vector<double> kOrders = {-0.5, 0.0, 0.5, 1.0, 2.5};

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Tracker {
  bool pass = true;
  double worst = 0.0;  // worst residual / bound ratio seen
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
  void bound(double residual, double limit, const std::string& what) {
    const double r = limit > 0 ? residual / limit : (residual > 0 ? INFINITY : 0.0);
    worst = std::max(worst, std::isnan(r) ? INFINITY : r);
    std::ostringstream s;
    s << what << ": residual " << residual << " > " << limit;
    check(residual <= limit, s.str());
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << "; worst residual/bound " << worst;
    if (!pass) s << "; first failure: " << first_failure;
    return {pass, s.str()};
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<GaussHermiteFunction> degree_two_family(double mu) {
  return {GaussHermiteFunction::gaussian(mu, 0.5), GaussHermiteFunction(mu, 0.8, {1.0, -0.5}),
          GaussHermiteFunction(mu, 1.0, {0.3, 0.2, -0.4})};
}

// 1. derivative identities of x^{-mu}J_mu and x^{mu}J_mu
Outcome bessel_suite() {
  Tracker t;
  int n = 0;
  for (double mu : kOrders)
    for (int k = 0; k <= 4; ++k)
      for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
        for (auto var : {DerivativeVariant::lowering, DerivativeVariant::raising}) {
          if (var == DerivativeVariant::raising && mu - k < -0.5) continue;
          const BesselOrder o(mu);
          const double rhs = derivative_identity_rhs(o, k, x, var);
          t.bound(derivative_identity_residual(o, k, x, var), 1e-6 * (1 + std::abs(rhs)),
                  "mu=" + std::to_string(mu) + " k=" + std::to_string(k) + " x=" + std::to_string(x));
          ++n;
        }
  return t.outcome(std::to_string(n) + " residuals");
}

// 2. inversion through two quadrature transforms, and the p = 1/2 eigenfunction
Outcome inversion_suite() {
  Tracker t;
  for (double mu : kOrders) {
    const GaussHermiteFunction f(mu, 0.5, {1.0, -0.5, 0.1});
    // intermediate samples: geometric toward the origin, where values below the grid are held
    std::vector<double> grid;
    for (int i = 0; i < 30; ++i) grid.push_back(1e-3 * std::pow(100.0, i / 30.0));
    for (double y : uniform_grid(0.1, 16.0, 600)) grid.push_back(y);
    TransformPlan dense{f.order(), grid, QuadratureSpec::defaults()};
    const auto hat = hankel_transform([&](double x) { return f(x); }, dense);
    t.check(hat.failures == 0, "forward transform failures at mu=" + std::to_string(mu));
    const auto back = hankel_transform([&](double y) { return hat.values(y); }, TransformPlan::defaults(f.order()));
    for (std::size_t i = 0; i < back.values.size(); ++i)
      t.bound(std::abs(back.values.values()[i] - f(back.values.grid()[i])), 1e-6,
              "inversion mu=" + std::to_string(mu));

    const auto g = GaussHermiteFunction::gaussian(mu, 0.5);
    const auto r = hankel_transform([&](double x) { return g(x); }, TransformPlan::defaults(g.order()));
    for (std::size_t i = 0; i < r.values.size(); ++i)
      t.bound(std::abs(r.values.values()[i] - g(r.values.grid()[i])), 1e-7, "eigenfunction mu=" + std::to_string(mu));
  }
  return t.outcome("5 orders, default grid");
}

// 3. spectral identities with the left side through explicit kernel values
Outcome spectral_suite() {
  Tracker t;
  int n = 0;
  const std::vector<double> us{0.5, 1.0, 2.0};
  for (double mu : {0.5, 1.0}) {
    const auto phi = GaussHermiteFunction::gaussian(mu, 0.5);
    for (double z : {0.5, 1.0})
      for (const auto& c : translation_identity(phi, z, us)) {
        t.bound(c.residual, 5e-4 * (1 + std::abs(c.rhs)),
                "translation mu=" + std::to_string(mu) + " z=" + std::to_string(z) + " u=" + std::to_string(c.u));
        ++n;
      }
    for (const auto& c : convolution_identity(phi, phi, us)) {
      t.bound(c.residual, 5e-4 * (1 + std::abs(c.rhs)), "convolution mu=" + std::to_string(mu) + " u=" + std::to_string(c.u));
      ++n;
    }
  }
  return t.outcome(std::to_string(n) + " residuals");
}

// 4. kernel symmetry and support, 20 sampled triples
Outcome kernel_suite() {
  Tracker t;
  std::mt19937 rng(20260415);
  std::uniform_real_distribution<double> side(0.5, 2.5), unit(0.0, 1.0);
  const std::array<double, 4> orders{0.0, 0.5, 1.0, 2.5};
  const double margin = 0.5;
  for (int i = 0; i < 20; ++i) {
    const BesselOrder mu(orders[i % 4]);
    const double y = side(rng), w = side(rng);
    if (i < 10) {
      const double lo = std::abs(y - w) + 0.1, hi = y + w - 0.1;
      const double z = lo + (hi - lo) * unit(rng);
      const std::array<double, 3> v{y, w, z};
      const auto base = kernel_D(mu, y, w, z);
      t.check(base.converged, "kernel did not converge");
      for (auto [a, b, c] : std::vector<std::array<int, 3>>{{0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}) {
        const auto p = kernel_D(mu, v[a], v[b], v[c]);
        t.bound(std::abs(p.value - base.value), 2 * std::max(p.error_estimate, base.error_estimate) + 1e-14,
                "symmetry at (" + std::to_string(y) + ", " + std::to_string(w) + ", " + std::to_string(z) + ")");
      }
    } else {
      // alternate between beyond the sum and below the difference of the other two sides
      double z = y + w + margin + unit(rng);
      if (i % 2 && std::abs(y - w) > margin + 0.05) z = (std::abs(y - w) - margin) * unit(rng) + 0.02;
      else if (i % 2) z = y + w + margin + 2 * unit(rng);
      const auto d = kernel_D(mu, y, w, z);
      t.bound(std::abs(d.value), 1e-4, "support at (" + std::to_string(y) + ", " + std::to_string(w) + ", " + std::to_string(z) + ")");
    }
  }
  return t.outcome("10 symmetric + 10 outside triples, margin 0.5");
}

// 5. operator relations
Outcome operator_suite() {
  Tracker t;
  for (double mu : kOrders)
    for (const auto& f : degree_two_family(mu)) {
      for (auto rel : {TransformRelation::shift_down, TransformRelation::shift_up, TransformRelation::s_operator})
        for (double y : {0.5, 1.0, 2.0, 4.0})
          t.bound(transform_relation_residual(f, rel, y), 1e-6, "transform relation mu=" + std::to_string(mu));
      for (double x : {0.3, 1.0, 2.5}) {
        for (int q = 1; q <= 6; ++q) t.bound(ladder_residual(f, q, x), 1e-10, "ladder q=" + std::to_string(q));
        for (int k = 0; k <= 6; ++k)
          t.bound(leibniz_residual(GaussPoly(0.3, {1.0, 0.5, -0.2}), f, k, x), 1e-10, "leibniz k=" + std::to_string(k));
        for (int r = 0; r <= 2; ++r) t.bound(s_power_residual(f, r, x), 1e-9, "s power r=" + std::to_string(r));
      }
    }
  return t.outcome("5 orders x 3 functions");
}

// 6. factorial-power sequences
Outcome sequence_suite() {
  Tracker t;
  for (double s : {0.5, 1.0, 2.0}) {
    const auto a = WeightSequence::factorial_power(s);
    const auto r40 = check_conditions(a, a, 40);
    for (const auto& v : r40.verdicts) t.check(v.holds, "s=" + fmt("%g", s) + " " + v.name + " fails at " + std::to_string(v.witness));
    const auto r20 = check_conditions(a, a, 20);
    const auto& c20 = r20.constants;
    const auto& c40 = r40.constants;
    const std::array<std::pair<double, double>, 14> pairs{{{c20.R1, c40.R1},
                                                           {c20.H1, c40.H1},
                                                           {c20.R2, c40.R2},
                                                           {c20.H2, c40.H2},
                                                           {c20.c1, c40.c1},
                                                           {c20.h1, c40.h1},
                                                           {c20.c2, c40.c2},
                                                           {c20.h2, c40.h2},
                                                           {c20.c, c40.c},
                                                           {c20.h, c40.h},
                                                           {c20.L1, c40.L1},
                                                           {c20.Rs1, c40.Rs1},
                                                           {c20.L2, c40.L2},
                                                           {c20.Rs2, c40.Rs2}}};
    for (const auto& [u, v] : pairs) t.bound(std::abs(u - v), 0.01 * std::abs(v), "constant drift s=" + fmt("%g", s));
  }
  return t.outcome("s in {1/2, 1, 2}, K = 40, drift K = 20 -> 40");
}

// 7. gamma seminorm oracle and membership
Outcome seminorm_suite() {
  Tracker t;
  const auto g = GaussHermiteFunction::gaussian(0.0, 0.5);
  for (int m = 0; m <= 30; ++m) {
    const double oracle = m == 0 ? 1.0 : std::pow(m / std::numbers::e, m / 2.0);
    t.bound(std::abs(gamma_seminorm(g, m, 0) - oracle), 1e-8 * oracle, "gamma m=" + std::to_string(m));
  }
  // the estimate locates A + sigma, so sigma is taken small
  GevreyParams p;
  p.sigma = 0.01;
  const auto est = estimate_membership(g, NormMode::def1, p, WeightSequence::power_power(0.5),
                                       WeightSequence::factorial_power(0.0), {20, 6});
  t.check(est.found, "membership not found");
  const double a = est.A_min.value_or(NAN);
  t.bound(std::abs(a - std::exp(-0.5)), 0.05, "A_min");
  return t.outcome("m <= 30; A_min = " + fmt("%.4f", a) + " (sigma = 0.01)");
}

double grid_error(const TransformResult& r, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (double x : r.values.grid()) e = std::max(e, std::abs(r.values(x) - exact(x)));
  return e;
}

// 8. p.d.o. endpoints
Outcome pdo_suite() {
  Tracker t;
  const auto one = SymbolFunction::constant(1.0);
  const auto neg = SymbolFunction::neg_y_squared();
  for (double mu : kOrders) {
    const TransformPlan plan{BesselOrder(mu), uniform_grid(0.1, 6.0, 40), QuadratureSpec::defaults()};
    for (const auto& f : degree_two_family(mu)) {
      t.bound(grid_error(pdo_apply(one, f, BesselOrder(mu), plan), [&](double x) { return f(x); }), 1e-5,
              "identity mu=" + std::to_string(mu));
      const auto s = apply_S(f);
      t.bound(grid_error(pdo_apply(neg, f, BesselOrder(mu), plan), [&](double x) { return s(x); }), 1e-5,
              "S route mu=" + std::to_string(mu));
    }
  }
  return t.outcome("5 orders x 3 functions, a in {1, -y^2}");
}

// 9. continuity evidence
Outcome evidence_suite() {
  Tracker t;
  std::ostringstream s;
  const auto f = GaussHermiteFunction::gaussian(0.0, 0.5);
  for (auto mode : {EvidenceMode::translate, EvidenceMode::convolve})
    for (const char* sym : {"constant", "neg-y2"}) {
      EvidenceOptions o;
      o.mode = mode;
      o.truncation = {6, 6};
      const auto rep = continuity_evidence(SymbolFunction::parse(sym, BesselOrder(0.0)), f, f, TheoremInputs{}, o);
      const std::string tag = to_string(mode) + "/" + sym;
      t.check(rep.bounded, tag + ": growth at the truncation boundary");
      t.check(std::isfinite(rep.empirical_R), tag + ": empirical R not finite");
      t.check(rep.flagged_fraction < 0.2, tag + ": flagged fraction " + fmt("%.3f", rep.flagged_fraction));
      s << tag << " R=" << fmt("%.4g", rep.empirical_R) << " flagged=" << fmt("%.2f", rep.flagged_fraction) << "; ";
    }
  return t.outcome(s.str() + "K = Q = 6");
}

// 10. CLI determinism
Outcome determinism_suite(const std::string& cli) {
  Tracker t;
  if (cli.empty()) return {false, "no --cli path given"};
  const auto dir = std::filesystem::temp_directory_path() / "hankel_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> commands{
      "transform --mu 0 --function gauss:p=0.5 --grid 0.1:8:40",
      "translate --mu 0.5 --function gauss:p=0.5 --z 1 --grid 0.2:5:20",
      "convolve --mu 0 --function gauss:p=0.5 --grid 0.2:5:20",
      "pdo --mu 0 --symbol neg-y2 --function 'hermite:p=0.5,c=1;0.5' --grid 0.2:5:20",
      "seminorm --mu 0 --function gauss:p=0.5 --K 6 --Q 6 --membership",
      "sequence-check --rule factorial-power:s=1 --K 20",
      "verify-identities --mu 0 --suite bessel",
      "evidence --mu 0 --symbol neg-y2 --z 0.5",
  };
  int i = 0;
  for (const auto& c : commands) {
    std::string payload[2];
    for (int run = 0; run < 2; ++run) {
      const auto path = dir / ("run" + std::to_string(i) + "_" + std::to_string(run) + ".json");
      const std::string cmd = "'" + cli + "' " + c + " --report '" + path.string() + "' > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      t.check(rc == 0, "'" + c + "' exited with " + std::to_string(rc));
      std::ifstream in(path);
      if (!in) {
        t.check(false, "no report from '" + c + "'");
        continue;
      }
      auto j = Json::parse(in);
      j.erase("metadata");
      payload[run] = j.dump();
    }
    t.check(!payload[0].empty() && payload[0] == payload[1], "payloads differ for '" + c + "'");
    ++i;
  }
  return t.outcome(std::to_string(commands.size()) + " commands run twice");
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) cli = argv[++i];
    else if (a == "--only" && i + 1 < argc) only.insert(std::atoi(argv[++i]));
    else {
      std::cerr << "usage: acceptance_suite --cli <hankel_cli> [--only N]...\n";
      return 2;
    }
  }

  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Bessel identity suite", 5, bessel_suite},
      {2, "Hankel inversion and eigenfunction", 30, inversion_suite},
      {3, "Spectral identities via the kernel route", 600, spectral_suite},
      {4, "Kernel symmetry and support", 300, kernel_suite},
      {5, "Operator relations", 10, operator_suite},
      {6, "Sequence suite", 1, sequence_suite},
      {7, "Seminorm oracle and membership", 5, seminorm_suite},
      {8, "p.d.o. endpoints", 60, pdo_suite},
      {9, "Continuity evidence", 600, evidence_suite},
      {10, "CLI determinism", 600, [&] { return determinism_suite(cli); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("Criterion %2d %-42s %s  [%.2f s / limit %.0f s%s]\n    %s\n", c.id, c.name, pass ? "PASS" : "FAIL",
                secs, c.limit_seconds, in_time ? "" : ", over time", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", failed ? "SOME CRITERIA FAILED" : "ALL CRITERIA PASSED");
  return failed ? 1 : 0;
}
