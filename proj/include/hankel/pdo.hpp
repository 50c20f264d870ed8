#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hankel/gevrey.hpp"
#include "hankel/hankel_transform.hpp"
#include "hankel/translation.hpp"

namespace hankel {

enum class SymbolKind { constant, neg_y_squared, japanese, separable, translation_multiplier };

/// A catalogued symbol a(x, y) with exact mixed derivatives, plus the data of its
/// growth condition
///   |(x^{-1}d/dx)^alpha (y^{-1}d/dy)^nu a| <= L_m (C+delta)^alpha c_alpha (D+eta)^nu d_nu (1+y)^{m-nu}.
class SymbolFunction {
 public:
  static SymbolFunction constant(double c);
  /// a = -y^2, order 2.
  static SymbolFunction neg_y_squared();
  /// a = (1 + y^2)^{m/2}, order m.
  static SymbolFunction japanese(double m);
  /// a = X(x) Y(y) with X, Y given as cores in x^2 and y^2.
  static SymbolFunction separable(GaussPoly x_part, GaussPoly y_part, double order);
  /// a = y^{-mu-1/2} j_mu(yz), the spectral multiplier of tau_z; independent of x.
  static SymbolFunction translation_multiplier(BesselOrder mu, double z);
  /// "constant:c=1", "neg-y2", "japanese:m=2", "exp-y2:q=1" (e^{q y^2}),
  /// "gauss-y:q=0.5" (e^{-q y^2}), "translation:z=1".
  static SymbolFunction parse(const std::string& spec, BesselOrder mu);

  SymbolKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double operator()(double x, double y) const { return derivative(0, 0, x, y); }
  /// (x^{-1}d/dx)^alpha (y^{-1}d/dy)^nu a(x, y), exact; alpha, nu <= 16.
  double derivative(int alpha, int nu, double x, double y) const;
  bool depends_on_x() const noexcept;
  /// Gaussian rate of the y factor (negative when the symbol grows like e^{q y^2}); 0 otherwise.
  double y_gauss_rate() const noexcept;

  double order = 0.0;
  WeightSequence seq_c = WeightSequence::factorial_power(1.0);
  WeightSequence seq_d = WeightSequence::factorial_power(1.0);
  double C = 1.0, delta = 0.1, D = 1.0, eta = 0.1;
  std::optional<double> L_m;

 private:
  SymbolFunction() = default;
  SymbolKind kind_ = SymbolKind::constant;
  std::string name_;
  GaussPoly x_part_ = GaussPoly::constant(1.0);
  GaussPoly y_part_ = GaussPoly::constant(1.0);
  double power_ = 0.0;  // japanese exponent m
  BesselOrder mu_{0.0};
  double z_ = 0.0;
};

struct SymbolValidation {
  double L_m = 0.0;
  /// ratio[alpha][nu]: max over the grid of |derivative| / (growth bound without L_m)
  std::vector<std::vector<double>> ratio;
  int witness_alpha = 0, witness_nu = 0;
  double witness_x = 0.0, witness_y = 0.0;
  bool blow_up = false;
  std::string trend;
};

/// Fits L_m over the (x, y) grid and (alpha, nu) <= (alpha_max, nu_max) <= 5. blow_up is
/// set when the fitted ratio rises strictly over the last three alpha or nu indices,
/// the sign of a symbol outside the class.
SymbolValidation validate_symbol(const SymbolFunction& a, int alpha_max, int nu_max, const std::vector<double>& xs,
                                 const std::vector<double>& ys);

struct PdoOptions {
  double z0 = 4.0;
  /// Grid for sampled transforms of pointwise inputs; empty selects 800 uniform points on [0.02, 16].
  std::vector<double> spectral_grid;
};

/// (h_{mu,a} phi)(x) = integral_0^inf (xy)^{1/2} J_mu(xy) a(x,y) phi_hat(y) dy on the plan grid.
/// phi_hat is exact for family inputs and sampled otherwise.
TransformResult pdo_apply(const SymbolFunction& a, const InputFunction& f, BesselOrder mu, const TransformPlan& plan,
                          const PdoOptions& options = {});

/// h_{mu,a}(tau_z phi): the spectral multiplier y^{-mu-1/2} j_mu(yz) is placed inside the
/// integral. Throws DomainError unless 0 < z < z0.
TransformResult pdo_translate(const SymbolFunction& a, const InputFunction& f, double z, BesselOrder mu,
                              const TransformPlan& plan, const PdoOptions& options = {});

/// h_{mu,a}(phi # psi) with h_mu(phi # psi) = y^{-mu-1/2} phi_hat psi_hat, exact for family inputs.
TransformResult pdo_convolve(const SymbolFunction& a, const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                             const TransformPlan& plan);

/// h_{mu,a} applied to a known transform G = h_mu(phi).
TransformResult pdo_from_transform(const SymbolFunction& a, const RealFunction& transform, BesselOrder mu,
                                   const TransformPlan& plan);

struct TheoremInputs {
  double A = 1.0, B = 1.0;  // input space constants
  double C = 1.0, D = 1.0;  // symbol constants
  double z0 = 4.0;
  WeightSequence a = WeightSequence::factorial_power(1.0);
  WeightSequence b = WeightSequence::factorial_power(1.0);
  WeightSequence c = WeightSequence::factorial_power(1.0);
  WeightSequence d = WeightSequence::factorial_power(1.0);
  /// Fitted constants of a and b; theorem_constants throws UsageError when absent.
  std::optional<SequenceConstants> fitted;
};

struct TheoremConstants {
  double A = 0, B = 0, C = 0, D = 0, z0 = 0;
  double R1 = 0, R2 = 0, H1 = 0, H2 = 0;  // R1, R2 from the strong split bounds
  double R_star = 0, R_otimes = 0, H = 0;
  double a_ratio = 0, a_star_ratio = 0, b_star_ratio = 0;  // a_0/a_1, a*_0/a*_1, b*_0/b*_1
  double A1 = 0;    // A B (R*)^2
  double A1_H = 0;  // A B H1^2
  double B1 = 0, B2 = 0, B3 = 0;
  double A2 = 0, A3 = 0, A4 = 0, B4 = 0, B5 = 0;
  double A6 = 0, B6 = 0, A7 = 0;
  double A6p = 0, A7p = 0;
  double B6p = 0;         // (b*_0/b*_1) C + H2^6 B^2
  double B6p_no_C = 0;    // (b*_0/b*_1) + H2^6 B^2, the form stated for translation
};

/// Pure arithmetic on the fitted sequence constants; equal inputs give bitwise-equal output.
TheoremConstants theorem_constants(const TheoremInputs& in);
/// Fits a and b over 0..K with check_conditions and stores the result in in.fitted.
TheoremInputs with_fitted_constants(TheoremInputs in, int K = 20);

enum class EvidenceMode { translate, convolve };
std::string to_string(EvidenceMode m);

struct EvidenceOptions {
  EvidenceMode mode = EvidenceMode::translate;
  double z = 1.0;
  double sigma1 = 0.1, rho1 = 0.1;  // target norm
  double sigma = 0.1, rho = 0.1;    // reference norm
  Truncation truncation{6, 6};      // K_max, Q_max <= 8 here
  double u_max = 64.0;              // x^2 range of the output sup
  double u_step = 0.2;              // coarse difference step in x^2
  double abs_tol = 1e-13;
  bool checkpoints = false;
};

struct CheckpointResidual {
  std::string name;  // "order_sum" or "y_ladder"
  int q = 0, k = 0;
  double x = 0, lhs = 0, rhs = 0, residual = 0;
};

struct EvidenceReport {
  EvidenceOptions options;
  TheoremInputs inputs;
  TheoremConstants constants;
  SeminormTable output_table;     // Phi with the target sequences
  SeminormTable reference_table;  // h_mu tau_z phi (or h_mu(phi # psi)) with its own sequences
  std::vector<std::vector<double>> derivative_error;  // relative, per (k, q) of the output table
  std::vector<std::pair<int, int>> flagged;
  double flagged_fraction = 0.0;
  double output_norm = 0.0, reference_norm = 0.0;
  double empirical_R = 0.0;
  bool bounded = false;
  std::string verdict;
  int p_exponent = 0, s_exponent = 0;  // p >= m and s > 2 mu + 1, reported only
  std::vector<CheckpointResidual> checkpoints;
  std::vector<std::string> diagnostics;
};

/// Numerical continuity evidence for phi -> h_{mu,a} tau_z phi (translate) or
/// (phi, psi) -> h_{mu,a}(phi # psi) (convolve; g required).
///
/// The output Phi is sampled on a uniform grid in u = x^2, and its (x^{-1}d/dx)^q =
/// 2^q d^q/du^q derivatives are taken by finite differences at steps u_step and
/// u_step/2, Richardson-combined. Entries whose derivative error exceeds 10% are
/// flagged and left out of the sup. The reference norm uses exact derivatives.
EvidenceReport continuity_evidence(const SymbolFunction& a, const GaussHermiteFunction& f,
                                   const std::optional<GaussHermiteFunction>& g, const TheoremInputs& inputs,
                                   const EvidenceOptions& options);

}  // namespace hankel
