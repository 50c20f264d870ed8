#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hankel/function_model.hpp"

namespace hankel {

enum class SequenceRule { factorial_power, power_power, explicit_list, elementwise_max };

/// A positive weight sequence k -> a_k, handled through log a_k.
///
/// factorial-power: a_k = (k!)^s.  power-power: a_k = k^{sk}, a_0 = 1.
/// explicit: a finite list. elementwise-max: max(a_k, b_k) of two sequences.
class WeightSequence {
 public:
  static WeightSequence factorial_power(double s);
  static WeightSequence power_power(double s);
  static WeightSequence explicit_values(std::vector<double> values);
  static WeightSequence elementwise_max(const WeightSequence& a, const WeightSequence& b);
  /// "factorial-power:s=1", "power-power:s=0.5", "explicit:1,3,2".
  static WeightSequence parse(const std::string& spec);

  SequenceRule rule() const noexcept { return rule_; }
  double parameter() const noexcept { return s_; }
  /// Largest index the sequence defines.
  int last_index() const;
  double log_value(int k) const;
  double value(int k) const;
  /// True for the closed rules, whose log-convexity is checked at construction.
  bool claims_log_convex() const noexcept { return rule_ == SequenceRule::factorial_power || rule_ == SequenceRule::power_power; }
  std::string describe() const;

 private:
  WeightSequence() = default;
  SequenceRule rule_ = SequenceRule::explicit_list;
  double s_ = 0.0;
  std::vector<double> logs_;  // explicit values, or the first cached entries of a closed rule
  std::vector<WeightSequence> parts_;
};

struct SequenceConstants {
  int K = 0;
  double R1 = 0, H1 = 0, R2 = 0, H2 = 0;  // split bounds, a and b
  double c1 = 0, h1 = 0, c2 = 0, h2 = 0;  // one-step upper bounds, a and b
  double c = 0, h = 0;                    // one-step lower bound, b
  double L1 = 0, Rs1 = 0, L2 = 0, Rs2 = 0;  // strong split bounds, a and b
};

struct ConditionVerdict {
  std::string name;      // e.g. "log_convex"
  std::string sequence;  // "a" or "b"
  bool holds = true;
  int witness = -1;      // first failing index (or p for two-index conditions)
  int witness2 = -1;     // second index where the condition has two
  std::string detail;
};

struct ConditionReport {
  SequenceConstants constants;
  std::vector<ConditionVerdict> verdicts;
  bool all_hold() const;
};

/// Verifies log-convexity, a_p a_k <= a_0 a_{p+k}, monotone ratios a_k/a_{k+1} and
/// a_{k-r} <= (a_0/a_1)^r a_k on 0..K in log space, for both sequences, and fits the
/// constants of the split and one-step bounds.
///
/// Each growth base H is exp of the Richardson-extrapolated (1/p, 1/p^2) slope of the
/// log ratio, raised to at least 2 for upper bounds and capped at 1 for the lower
/// bound; the prefactor is then the least value making the bound hold on 0..K. The
/// strong split bound has the same ratio as the split bound, so L = R and Rs = H.
/// Requires 4 <= K <= 40. Throws NumericalError when a log value is not finite.
ConditionReport check_conditions(const WeightSequence& a, const WeightSequence& b, int K);

/// gamma_{m,k}(f) = sup_x |x^m (x^{-1}d/dx)^k x^{-mu-1/2} f(x)|; m, k <= 30.
/// The derivative is exact; the sup is taken on a 2048-point log grid over
/// [1e-3, 30] (extended while the maximum sits at the right end), together with
/// x = 0 when m = 0, then refined by golden section around the best grid point.
double gamma_seminorm(const GaussHermiteFunction& f, int m, int k);

/// sup_x |x^m core(x)| for m = 0..M, on the grid and refinement described above.
std::vector<double> weighted_sups(const RealFunction& core, int M);

enum class NormMode { def1, def2, def3 };
std::string to_string(NormMode m);
NormMode parse_norm_mode(const std::string& s);

struct GevreyParams {
  double A = 1.0, sigma = 0.1;
  double B = 1.0, rho = 0.1;
  void validate() const;
};

struct Truncation {
  int K_max = 12;
  int Q_max = 12;
  void validate() const;  // 4 <= K_max, Q_max <= 20
};

struct SeminormTable {
  BesselOrder mu{0.0};
  NormMode mode = NormMode::def3;
  GevreyParams params;
  Truncation truncation;
  /// entries[k][q]
  std::vector<std::vector<double>> entries;
  double value = 0.0;
  int witness_k = 0, witness_q = 0;

  double at(int k, int q) const { return entries.at(k).at(q); }
};

/// gamma_{k,q}(f) for k <= K_max, q <= Q_max, indexed [k][q].
std::vector<std::vector<double>> gamma_table(const GaussHermiteFunction& f, const Truncation& t);

/// Weighted table and its truncated sup. def1 divides by (A+sigma)^k a_k, def2 by
/// (B+rho)^q b_q, def3 by both.
SeminormTable gevrey_norm(const GaussHermiteFunction& f, NormMode mode, const GevreyParams& params,
                          const WeightSequence& a, const WeightSequence& b, const Truncation& t);
SeminormTable weigh_table(const std::vector<std::vector<double>>& gammas, BesselOrder mu, NormMode mode,
                          const GevreyParams& params, const WeightSequence& a, const WeightSequence& b);

struct MembershipEstimate {
  NormMode mode = NormMode::def3;
  bool found = false;
  std::optional<double> A_min, B_min;
  int witness_k = 0, witness_q = 0;
  double value = 0.0;
  std::string message;
};

/// Smallest A (def1), B (def2) or (A, B) (def3) on a log grid over [1e-3, 1e3], refined
/// by bisection in log A, for which the weighted table stays within bound_factor times
/// its anchor entry and does not grow at the truncation boundary. Anchors are the
/// k = 0 entry of each q row (def1), the q = 0 entry of each k column (def2), or
/// entry (0, 0) (def3). sigma and rho are taken from params.
MembershipEstimate estimate_membership(const GaussHermiteFunction& f, NormMode mode, const GevreyParams& params,
                                       const WeightSequence& a, const WeightSequence& b, const Truncation& t,
                                       double bound_factor = 10.0);

struct TildeReport {
  double B = 0.0, rho = 0.0;
  Truncation truncation;
  std::vector<double> Q;       // Q_k for k <= K_max + 2 Q_max
  std::vector<double> Q_star;  // Q*_q for q <= Q_max
  std::vector<int> witness;    // k attaining Q*_q
  std::vector<double> ratio;   // Q*_{q+1} / Q*_q (NaN when Q*_q = 0)
};

/// Q_k is the fixed-k sup over q <= Q_max of gamma_{k,q} / ((B+rho)^q b_q) and
/// Q*_q = sup_{k <= K_max} Q_{k+2q}. Requires K_max + 2 Q_max <= 30.
TildeReport tilde_condition_report(const GaussHermiteFunction& f, const WeightSequence& b, const GevreyParams& params,
                                   const Truncation& t);

}  // namespace hankel
