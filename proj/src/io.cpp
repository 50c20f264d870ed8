#include "hankel/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hankel/errors.hpp"

namespace hankel {

namespace {

double to_number(const std::string& what, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("bad number for " + what + ": '" + text + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// NaN and infinities have no JSON number form
Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json matrix(const std::vector<std::vector<double>>& m) {
  Json out = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (double v : row) r.push_back(number(v));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

GaussHermiteFunction parse_function_spec(const std::string& spec, double mu) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("expected key=value in function spec '" + spec + "'");
      kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  const auto p_it = kv.find("p");
  const double p = p_it == kv.end() ? 0.5 : to_number("p", p_it->second);
  if (name == "gauss") {
    const auto a_it = kv.find("a");
    return GaussHermiteFunction::gaussian(mu, p, a_it == kv.end() ? 1.0 : to_number("a", a_it->second));
  }
  if (name == "hermite") {
    const auto c_it = kv.find("c");
    if (c_it == kv.end()) throw UsageError("hermite function spec needs c=<c0;c1;...>");
    std::vector<double> coeffs;
    std::stringstream ss(c_it->second);
    std::string item;
    while (std::getline(ss, item, ';')) coeffs.push_back(to_number("c", item));
    if (coeffs.empty()) throw UsageError("hermite function spec needs at least one coefficient");
    return GaussHermiteFunction(mu, p, coeffs);
  }
  if (name == "zero") return GaussHermiteFunction(mu, p, {0.0});
  throw UsageError("unknown function '" + name + "' (gauss, hermite, zero)");
}

Json to_json(const GaussHermiteFunction& f) {
  return {{"family", "gauss-hermite"}, {"mu", f.mu()}, {"p", f.rate()}, {"coeffs", f.core().coeffs()}};
}

Json to_json(const SampledFunction& f) {
  Json values = Json::array();
  for (double v : f.values()) values.push_back(number(v));
  return {{"family", "sampled"},
          {"grid", f.grid()},
          {"values", values},
          {"interp", f.interpolation() == Interpolation::cubic_local ? "cubic-local" : "linear"},
          {"origin_exponent", f.origin_exponent()}};
}

GaussHermiteFunction family_from_json(const Json& j) {
  try {
    if (j.at("family") != "gauss-hermite") throw UsageError("expected a gauss-hermite function");
    return GaussHermiteFunction(j.at("mu").get<double>(), j.at("p").get<double>(),
                                j.at("coeffs").get<std::vector<double>>());
  } catch (const Json::exception& e) {
    throw UsageError(std::string("bad function JSON: ") + e.what());
  }
}

SampledFunction sampled_from_json(const Json& j) {
  try {
    if (j.at("family") != "sampled") throw UsageError("expected a sampled function");
    const std::string interp = j.value("interp", "cubic-local");
    if (interp != "cubic-local" && interp != "linear") throw UsageError("interp must be cubic-local or linear");
    return SampledFunction(j.at("grid").get<std::vector<double>>(), j.at("values").get<std::vector<double>>(),
                           interp == "linear" ? Interpolation::linear : Interpolation::cubic_local,
                           j.value("origin_exponent", 0.0));
  } catch (const Json::exception& e) {
    throw UsageError(std::string("bad function JSON: ") + e.what());
  }
}

Json measured(double value, double error) { return {{"value", number(value)}, {"error", number(error)}}; }
Json exact(double value) { return {{"value", number(value)}, {"error", "exact"}}; }

Json to_json(const QuadratureSpec& s) {
  return {{"nodes", s.nodes},
          {"truncation", s.truncation},
          {"zero_splitting", s.zero_splitting},
          {"acceleration", to_string(s.acceleration)},
          {"abs_tol", s.abs_tol},
          {"max_panels", s.max_panels}};
}

Json to_json(const SequenceConstants& c) {
  // fitted on 0..K: exact in the sense that each bound holds with equality somewhere on the range
  return {{"K", c.K},       {"R1", exact(c.R1)},   {"H1", exact(c.H1)},   {"R2", exact(c.R2)},
          {"H2", exact(c.H2)}, {"c1", exact(c.c1)},   {"h1", exact(c.h1)},   {"c2", exact(c.c2)},
          {"h2", exact(c.h2)}, {"c", exact(c.c)},     {"h", exact(c.h)},     {"L1", exact(c.L1)},
          {"Rs1", exact(c.Rs1)}, {"L2", exact(c.L2)}, {"Rs2", exact(c.Rs2)}};
}

Json to_json(const ConditionReport& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"name", v.name},
                        {"sequence", v.sequence},
                        {"holds", v.holds},
                        {"witness", v.witness},
                        {"witness2", v.witness2},
                        {"detail", v.detail}});
  return {{"all_hold", r.all_hold()}, {"constants", to_json(r.constants)}, {"verdicts", verdicts}};
}

Json to_json(const SeminormTable& t) {
  return {{"mu", t.mu.value()},
          {"mode", to_string(t.mode)},
          {"A", t.params.A},
          {"sigma", t.params.sigma},
          {"B", t.params.B},
          {"rho", t.params.rho},
          {"K_max", static_cast<int>(t.entries.size()) - 1},
          {"Q_max", t.entries.empty() ? -1 : static_cast<int>(t.entries[0].size()) - 1},
          {"entries", matrix(t.entries)},
          {"value", number(t.value)},
          {"witness", {t.witness_k, t.witness_q}}};
}

Json to_json(const MembershipEstimate& m) {
  Json j{{"mode", to_string(m.mode)}, {"found", m.found}};
  j["A_min"] = m.A_min ? number(*m.A_min) : Json(nullptr);
  j["B_min"] = m.B_min ? number(*m.B_min) : Json(nullptr);
  j["witness"] = {m.witness_k, m.witness_q};
  j["value"] = number(m.value);
  j["message"] = m.message;
  return j;
}

Json to_json(const TheoremConstants& t) {
  Json j;
  const std::pair<const char*, double> fields[] = {
      {"A", t.A},         {"B", t.B},           {"C", t.C},           {"D", t.D},         {"z0", t.z0},
      {"R1", t.R1},       {"R2", t.R2},         {"H1", t.H1},         {"H2", t.H2},       {"R_star", t.R_star},
      {"R_otimes", t.R_otimes}, {"H", t.H},     {"a_ratio", t.a_ratio}, {"a_star_ratio", t.a_star_ratio},
      {"b_star_ratio", t.b_star_ratio}, {"A1", t.A1}, {"A1_H", t.A1_H}, {"B1", t.B1},   {"B2", t.B2},
      {"B3", t.B3},       {"A2", t.A2},         {"A3", t.A3},         {"A4", t.A4},       {"B4", t.B4},
      {"B5", t.B5},       {"A6", t.A6},         {"B6", t.B6},         {"A7", t.A7},       {"A6p", t.A6p},
      {"A7p", t.A7p},     {"B6p", t.B6p},       {"B6p_no_C", t.B6p_no_C}};
  for (const auto& [k, v] : fields) j[k] = exact(v);
  return j;
}

Json to_json(const SymbolValidation& v) {
  return {{"L_m", exact(v.L_m)},
          {"ratio", matrix(v.ratio)},
          {"witness", {{"alpha", v.witness_alpha}, {"nu", v.witness_nu}, {"x", v.witness_x}, {"y", v.witness_y}}},
          {"blow_up", v.blow_up},
          {"trend", v.trend}};
}

Json to_json(const EvidenceReport& r) {
  const auto& o = r.options;
  const auto& in = r.inputs;
  Json inputs{{"mode", to_string(o.mode)},
              {"z", o.z},
              {"sigma1", o.sigma1},
              {"rho1", o.rho1},
              {"sigma", o.sigma},
              {"rho", o.rho},
              {"K_max", o.truncation.K_max},
              {"Q_max", o.truncation.Q_max},
              {"u_max", o.u_max},
              {"u_step", o.u_step},
              {"abs_tol", o.abs_tol},
              {"a", in.a.describe()},
              {"b", in.b.describe()},
              {"c", in.c.describe()},
              {"d", in.d.describe()}};
  if (in.fitted) inputs["fitted"] = to_json(*in.fitted);
  Json flagged = Json::array();
  for (const auto& [k, q] : r.flagged) flagged.push_back({k, q});
  Json checkpoints = Json::array();
  for (const auto& c : r.checkpoints)
    checkpoints.push_back({{"name", c.name},
                           {"q", c.q},
                           {"k", c.k},
                           {"x", c.x},
                           {"lhs", number(c.lhs)},
                           {"rhs", number(c.rhs)},
                           {"residual", number(c.residual)}});
  // the output norm carries the largest relative derivative error among unflagged entries
  double worst = 0.0;
  for (std::size_t k = 0; k < r.derivative_error.size(); ++k)
    for (std::size_t q = 0; q < r.derivative_error[k].size(); ++q) {
      bool f = false;
      for (const auto& [fk, fq] : r.flagged) f = f || (fk == static_cast<int>(k) && fq == static_cast<int>(q));
      if (!f) worst = std::max(worst, r.derivative_error[k][q]);
    }
  return {{"inputs", inputs},
          {"constants", to_json(r.constants)},
          {"table", to_json(r.output_table)},
          {"reference_table", to_json(r.reference_table)},
          {"derivative_error", matrix(r.derivative_error)},
          {"flagged", flagged},
          {"flagged_fraction", r.flagged_fraction},
          {"output_norm", measured(r.output_norm, worst * r.output_norm)},
          {"reference_norm", exact(r.reference_norm)},
          {"empiricalR", measured(r.empirical_R, worst * r.empirical_R)},
          {"bounded", r.bounded},
          {"verdict", r.verdict},
          {"p", r.p_exponent},
          {"s", r.s_exponent},
          {"checkpoints", checkpoints},
          {"diagnostics", r.diagnostics}};
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace hankel
