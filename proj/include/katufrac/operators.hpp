#ifndef KATUFRAC_OPERATORS_HPP
#define KATUFRAC_OPERATORS_HPP

#include "katufrac/grid.hpp"
#include "katufrac/quadrature.hpp"

namespace katufrac {

// Gamma function for strictly positive arguments.
// Relative error is a few ulp (well under the 1e-13 contract).
double gamma_fn(double x);

// Katugampola fractional integral I_{a+}^{alpha;rho} h (t), evaluated by
// product integration on a grid over [a, t].
double katu_integral(const RealFunction& h, const OperatorParams& p, const Interval& iv,
                     double t, const GridResolution& res, Warnings* warnings = nullptr);

// gamma-derivative h_rho^(1)(t) = t^(1-rho) h'(t).
// At t = 0: rho = 1 falls back to h'(0); rho > 1 returns 0 when h'(0) is
// finite; rho < 1 is rejected.
double gamma_derivative(const RealFunction& h, double rho, double t,
                        Warnings* warnings = nullptr);

// Caputo-Katugampola derivative, computed through the absolutely
// continuous form I^(1-alpha;rho)[h_rho^(1)](t). The gamma-derivative is
// symbolic for expression inputs and a second-order finite difference on
// the grid for discrete inputs.
double ck_derivative(const RealFunction& h, const OperatorParams& p, const Interval& iv,
                     double t, const GridResolution& res, Warnings* warnings = nullptr);

// Katugampola derivative for 0 < alpha < 1, via
//   D^(alpha;rho) h = ckD^(alpha;rho) h + h(a) ((t^rho-a^rho)/rho)^(-alpha) / Gamma(1-alpha).
// Singular at t = a unless h(a) = 0; t = a is rejected.
double katu_derivative(const RealFunction& h, const OperatorParams& p, const Interval& iv,
                       double t, const GridResolution& res, Warnings* warnings = nullptr);

// Closed-form value of I^(alpha;rho) applied to ((s^rho-a^rho)/rho)^(delta-1):
//   Gamma(delta)/Gamma(delta+alpha) * ((t^rho-a^rho)/rho)^(alpha+delta-1).
double power_integral_oracle(double delta, const OperatorParams& p, double a, double t);

// Closed-form value of ckD^(alpha;rho) applied to the same power function:
//   Gamma(delta)/Gamma(delta-alpha) * ((t^rho-a^rho)/rho)^(delta-alpha-1).
// delta = 1 (a constant) is special-cased to exactly 0; delta <= alpha is
// rejected (the formula leaves the exponent regime undefined).
double power_ck_oracle(double delta, const OperatorParams& p, double a, double t);

// gamma-derivative of a sampled function on its own grid, as
// rho * d(hhat)/du with nonuniform second-order differences in u
// (one-sided at the endpoints).
DiscreteFunction fd_gamma_derivative(const DiscreteFunction& h);

// CK derivative of a sampled function at every node of its grid, reusing
// one weight table of order 1-alpha. Node 0 is 0 by convention.
DiscreteFunction ck_derivative_on_grid(const DiscreteFunction& h, double alpha);

}  // namespace katufrac

#endif
