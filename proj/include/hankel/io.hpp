#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hankel/function_model.hpp"
#include "hankel/gevrey.hpp"
#include "hankel/pdo.hpp"
#include "hankel/quadrature.hpp"

namespace hankel {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "hankel-calculus/1";

/// "gauss:p=0.5[,a=1]" or "hermite:p=1,c=1;-0.5;0.2" (core coefficients in x^2).
GaussHermiteFunction parse_function_spec(const std::string& spec, double mu);

/// {"family":"gauss-hermite","mu":..,"p":..,"coeffs":[..]}
Json to_json(const GaussHermiteFunction& f);
/// {"family":"sampled","grid":[..],"values":[..],"interp":"cubic-local"}
Json to_json(const SampledFunction& f);
GaussHermiteFunction family_from_json(const Json& j);
SampledFunction sampled_from_json(const Json& j);

/// {"value": v, "error": e}
Json measured(double value, double error);
/// {"value": v, "error": "exact"}
Json exact(double value);

Json to_json(const QuadratureSpec& s);
Json to_json(const SequenceConstants& c);
Json to_json(const ConditionReport& r);
Json to_json(const SeminormTable& t);
Json to_json(const MembershipEstimate& m);
Json to_json(const TheoremConstants& t);
Json to_json(const SymbolValidation& v);
Json to_json(const EvidenceReport& r);

/// Rows of doubles under a header line, printed with 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Plain-text key=value lines; '#' starts a comment, blank lines are skipped.
/// Throws UsageError on a malformed line or an unreadable file.
std::map<std::string, std::string> read_config(const std::string& path);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::string& path, const Json& j);

}  // namespace hankel
