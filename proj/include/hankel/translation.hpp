#pragma once

#include <optional>
#include <vector>

#include "hankel/function_model.hpp"
#include "hankel/hankel_transform.hpp"
#include "hankel/quadrature.hpp"

namespace hankel {

struct KernelEvaluation {
  BesselOrder mu{0.0};
  double y = 0.0, w = 0.0, z = 0.0;
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

/// Spec used by kernel_D when none is given: Euler-accelerated, X_max = 400, abs_tol = 1e-6.
QuadratureSpec kernel_quadrature_defaults();

/// D_mu(y, w, z) = integral_0^inf t^{-mu-1/2} j_mu(yt) j_mu(wt) j_mu(zt) dt, one point.
/// Throws UsageError when acceleration is off and mu <= 1/2 (conditionally convergent).
/// Results are memoised on (mu, y, w, z) rounded to 1e-10 together with the spec.
KernelEvaluation kernel_D(BesselOrder mu, double y, double w, double z,
                          const QuadratureSpec& spec = kernel_quadrature_defaults());

/// Discretisation for the direct (kernel) route. D is built as a Gauss-Legendre sum over
/// t in [0, taper_end] whose weights carry a smooth cutoff falling from 1 at taper_start
/// to 0 at taper_end; y, w and z integrals are composite Gauss-Legendre over [0, extent].
struct KernelTableSpec {
  double taper_start = 16.0;
  double taper_end = 32.0;
  double t_panel = 0.5;
  double extent = 7.0;       // y and w range
  double z_extent = 10.0;    // z range for convolution transforms
  double panel = 0.5;        // y, w, z panel width
  int nodes = 16;

  void validate() const;
};

enum class Route { spectral, direct };

struct TranslationOptions {
  Route route = Route::spectral;
  QuadratureSpec spec = QuadratureSpec::defaults();
  KernelTableSpec table;
  double z0 = 4.0;
  /// When set, both routes are computed and NumericalError is raised if they differ by more than cross_tol.
  bool cross_check = false;
  double cross_tol = 1e-4;
  /// Grid for sampled transforms of pointwise inputs on the spectral route; empty selects
  /// 800 uniform points on [0.02, 16].
  std::vector<double> spectral_grid;
};

/// A test function either from the closed family or given pointwise.
class InputFunction {
 public:
  InputFunction(GaussHermiteFunction f) : family_(std::move(f)), fn_([g = *family_](double x) { return g(x); }) {}
  InputFunction(RealFunction f) : fn_(std::move(f)) {}

  bool is_family() const noexcept { return family_.has_value(); }
  const GaussHermiteFunction& family() const { return family_.value(); }
  double operator()(double x) const { return fn_(x); }
  const RealFunction& fn() const noexcept { return fn_; }

 private:
  std::optional<GaussHermiteFunction> family_;
  RealFunction fn_;
};

/// (tau_z phi)(w) on output_grid. Throws DomainError unless 0 < z <= z0.
SampledFunction translate(const InputFunction& f, double z, BesselOrder mu, const std::vector<double>& output_grid,
                          const TranslationOptions& options = {});

/// (phi # psi)(z) on output_grid.
SampledFunction convolve(const InputFunction& f, const InputFunction& g, BesselOrder mu,
                         const std::vector<double>& output_grid, const TranslationOptions& options = {});

/// phi # psi in closed form: h_mu of u^{-mu-1/2} phi_hat psi_hat, which stays in the family.
GaussHermiteFunction convolve_exact(const GaussHermiteFunction& f, const GaussHermiteFunction& g);

struct IdentityCheck {
  double u = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// h_mu(tau_z phi)(u) = u^{-mu-1/2} j_mu(uz) (h_mu phi)(u), one check per u. The left side
/// goes through explicit kernel values D(y_i, w_j, z); the right side is exact.
std::vector<IdentityCheck> translation_identity(const GaussHermiteFunction& f, double z, const std::vector<double>& u,
                                                const KernelTableSpec& table = {});

/// h_mu(phi # psi)(u) = u^{-mu-1/2} (h_mu phi)(u) (h_mu psi)(u), one check per u. The left
/// side goes through explicit kernel values D(y_i, w_j, z_k); the right side is exact.
std::vector<IdentityCheck> convolution_identity(const GaussHermiteFunction& f, const GaussHermiteFunction& g,
                                                const std::vector<double>& u, const KernelTableSpec& table = {});

}  // namespace hankel
