#ifndef KATUFRAC_QUADRATURE_HPP
#define KATUFRAC_QUADRATURE_HPP

#include <vector>

#include "katufrac/grid.hpp"

namespace katufrac {

// Product integration of the weakly singular kernel in the transformed
// variable u = s^rho. The fractional integral at node j becomes
//
//   rho^(-alpha)/Gamma(alpha) * Int_{u_0}^{u_j} (u_j - u)^(alpha-1) hhat(u) du,
//
// with hhat(u) = h(u^(1/rho)). The weights integrate the kernel exactly
// against the piecewise-linear interpolant of hhat, so the rule is exact
// (to round-off) whenever hhat is affine in u.

// Weights w_0..w_j for target node j; empty when j = 0.
std::vector<double> singular_weights(const Grid& grid, std::size_t target_index,
                                     double alpha);

// Sum_{i<=j} w_i * h(t_i) with flagged-NaN propagation from h.
double integrate_singular(const RealFunction& h, const Grid& grid,
                          std::size_t target_index, double alpha,
                          Warnings* warnings = nullptr);

// Fixed right-endpoint integral over the whole grid; identical to
// integrate_singular at j = n.
double integrate_full_kernel_b(const RealFunction& h, const Grid& grid, double alpha,
                               Warnings* warnings = nullptr);

// All rows j = 0..n at once, for solvers that evaluate every target node.
// Rows are independent and computed in parallel (capped by the
// KATUFRAC_THREADS environment variable).
class WeightTable {
public:
    WeightTable(const Grid& grid, double alpha);

    const std::vector<double>& row(std::size_t j) const { return rows_[j]; }
    std::size_t n() const { return rows_.size() - 1; }
    double alpha() const { return alpha_; }

    // Sum_i row(j)[i] * values[i]
    double apply(std::size_t j, const std::vector<double>& values) const;

private:
    std::vector<std::vector<double>> rows_;
    double alpha_;
};

// Thread cap used for parallel loops: min(hardware, KATUFRAC_THREADS).
unsigned effective_thread_count();

}  // namespace katufrac

#endif
