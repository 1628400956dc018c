#ifndef KATUFRAC_BVP_HPP
#define KATUFRAC_BVP_HPP

#include <memory>
#include <string>
#include <vector>

#include "katufrac/problem.hpp"
#include "katufrac/quadrature.hpp"

namespace katufrac {

// Raised when f produces a flagged NaN during operator application; the
// message names the offending node (and iteration, for the Picard loop).
struct SolveAbort : std::runtime_error {
    std::size_t node;
    int iteration;  // -1 outside the Picard loop
    SolveAbort(std::size_t node_, int iteration_, const std::string& msg)
        : std::runtime_error(msg), node(node_), iteration(iteration_) {}
};

struct SolveConfig {
    GridResolution resolution;
    double tol = 1e-10;
    std::size_t max_iter = 200;
    double y0_constant = 0.0;  // initial iterate, constant in t

    void validate() const {
        resolution.validate();
        if (!(tol >= 1e-14)) throw ValidationError("tol must be >= 1e-14");
        if (!(max_iter >= 1 && max_iter <= 100000))
            throw ValidationError("max_iter must lie in [1, 1e5]");
    }
};

struct SolveReport {
    std::shared_ptr<DiscreteFunction> solution;
    std::size_t iterations = 0;
    std::vector<double> residual_history;       // ||y_{k+1} - y_k||_inf per step
    std::vector<double> contraction_estimates;  // ratios of successive residuals
    double anti_periodic_residual = 0.0;
    bool converged = false;
    std::vector<std::string> warnings;
};

// c0 of the closed-form linear solve: -(1/2) * full-kernel integral of g.
double c0_coefficient(const RealFunction& g, const OperatorParams& p, const Interval& iv,
                      const GridResolution& res, Warnings* warnings = nullptr);

// Unique solution of  ckD^(alpha;rho) y = g,  y(a)+y(b) = 0:
//   y(t) = c0 + I^(alpha;rho) g (t),
// sampled on the grid; anti-periodic to round-off by construction.
DiscreteFunction solve_linear(const RealFunction& g, const OperatorParams& p,
                              const Interval& iv, const GridResolution& res,
                              Warnings* warnings = nullptr);

// Solution operator T: y -> solve_linear(f(., y(.))) on y's grid.
DiscreteFunction apply_T(const ProblemSpec& spec, const DiscreteFunction& y);

// Picard iteration y_{k+1} = T y_k from a constant initial iterate.
SolveReport picard_solve(const ProblemSpec& spec, const SolveConfig& cfg);

// |y(a) + y(b)|
double anti_periodic_residual(const DiscreteFunction& y);

// Defect max_{j>=1} |ckD y (t_j) - f(t_j, y(t_j))| over the grid nodes,
// with the CK derivative of the sampled y taken by finite differences.
double residual_ck(const ProblemSpec& spec, const DiscreteFunction& y);

// Shared-grid machinery for repeated applications of T (the Picard loop
// computes the weight table once and reuses it every iterate).
class SolutionOperator {
public:
    SolutionOperator(const ProblemSpec& spec, const GridResolution& res);

    // iteration is only used for diagnostics on NaN abort
    DiscreteFunction apply(const DiscreteFunction& y, int iteration = -1) const;
    DiscreteFunction apply_to_forcing(const std::vector<double>& g_values) const;

    const std::shared_ptr<const Grid>& grid() const { return grid_; }

private:
    const ProblemSpec& spec_;
    std::shared_ptr<const Grid> grid_;
    WeightTable table_;
};

}  // namespace katufrac

#endif
