#pragma once

#include <vector>

#include "hankel/function_model.hpp"

namespace hankel {

enum class OpKind { N, M, S };

/// N_mu, M_mu or S_mu. For M the input carries order mu + 1 and the output order mu.
struct OperatorTag {
  OpKind kind;
  BesselOrder mu;
};

/// Exact application on the closed family. Throws DomainError on an order mismatch:
/// N_mu and S_mu expect input order mu, M_mu expects mu + 1.
GaussHermiteFunction apply(const OperatorTag& op, const GaussHermiteFunction& f);

GaussHermiteFunction apply_N(const GaussHermiteFunction& f);
GaussHermiteFunction apply_M(BesselOrder mu, const GaussHermiteFunction& f);
/// S_mu computed from d^2/dx^2 + (1 - 4 mu^2)/(4x^2) directly, not as M N.
GaussHermiteFunction apply_S(const GaussHermiteFunction& f);

/// Constants b_0..b_r with
///   S_mu^r phi = x^{mu+1/2} sum_j b_j x^{2j} (x^{-1}d/dx)^{r+j} x^{-mu-1/2} phi.
/// Built by a recurrence in r, cached per (mu, r). r <= 16.
std::vector<double> s_power_coefficients(BesselOrder mu, int r);

/// |S_mu^r phi(x) - expansion(x)|, both sides exact-coefficient evaluations. r <= 4.
double s_power_residual(const GaussHermiteFunction& f, int r, double x);

/// |N_{mu+q-1} ... N_mu phi(x) - x^{mu+q+1/2} (x^{-1}d/dx)^q x^{-mu-1/2} phi(x)|. q <= 8.
double ladder_residual(const GaussHermiteFunction& f, int q, double x);

}  // namespace hankel
