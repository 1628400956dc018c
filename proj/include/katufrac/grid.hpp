#ifndef KATUFRAC_GRID_HPP
#define KATUFRAC_GRID_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "katufrac/expr.hpp"

namespace katufrac {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The pair (alpha, rho) governing every fractional operator. Only the
// 0 < alpha < 1 case is supported; rho is bounded away from the Hadamard
// limit rho -> 0.
struct OperatorParams {
    double alpha;
    double rho;

    OperatorParams(double alpha_, double rho_) : alpha(alpha_), rho(rho_) { validate(); }

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw ValidationError("alpha must lie in (0,1)");
        if (!(rho >= 1e-6))
            throw ValidationError("rho must be >= 1e-6 (Hadamard limit unsupported)");
    }
};

// J = [a,b] with a >= 0: the kernel factor s^(rho-1) and the transform
// u = s^rho require s >= 0.
struct Interval {
    double a;
    double b;

    Interval(double a_, double b_) : a(a_), b(b_) { validate(); }

    void validate() const {
        if (!(a < b)) throw ValidationError("interval requires a < b");
        if (!(a >= 0.0)) throw ValidationError("interval requires a >= 0");
    }

    double width() const { return b - a; }
};

// n subintervals; grading exponent 1 means uniform in u = t^rho.
struct GridResolution {
    std::size_t n = 1024;
    double grading = 1.0;

    GridResolution() = default;
    GridResolution(std::size_t n_, double grading_ = 1.0) : n(n_), grading(grading_) {
        validate();
    }

    void validate() const {
        if (n < 2) throw ValidationError("grid resolution requires n >= 2");
        if (!(grading >= 1.0 && grading <= 5.0))
            throw ValidationError("grid grading must lie in [1,5]");
    }
};

// Nodes in the transformed variable u = t^rho:
//   u_j = a^rho + (b^rho - a^rho) * (j/n)^grading,  t_j = u_j^(1/rho).
// Immutable after construction.
class Grid {
public:
    Grid(const Interval& iv, const OperatorParams& p, const GridResolution& res);

    const std::vector<double>& u_nodes() const { return u_; }
    const std::vector<double>& t_nodes() const { return t_; }
    std::size_t n() const { return u_.size() - 1; }
    const OperatorParams& params() const { return params_; }
    const Interval& interval() const { return interval_; }
    const GridResolution& resolution() const { return res_; }

private:
    std::vector<double> u_;
    std::vector<double> t_;
    OperatorParams params_;
    Interval interval_;
    GridResolution res_;
};

Grid build_grid(const Interval& iv, const OperatorParams& p, const GridResolution& res);

// Sampled values on a grid with piecewise-linear interpolation in u.
class DiscreteFunction {
public:
    DiscreteFunction(std::shared_ptr<const Grid> grid, std::vector<double> values);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value_at_node(std::size_t j) const { return values_[j]; }

    // Linear interpolation in u at t in [a,b].
    double operator()(double t) const;

    double sup_norm() const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> values_;
};

// An evaluable of one real variable on J: an Expr over {t}, a
// DiscreteFunction, or (for library/test use) a plain callable with an
// optional exact derivative.
class RealFunction {
public:
    static RealFunction from_expr(ExprPtr e);
    static RealFunction from_discrete(DiscreteFunction d);
    static RealFunction from_callable(std::function<double(double)> f,
                                      std::function<double(double)> df = nullptr);

    double operator()(double t, Warnings* warnings = nullptr) const;

    // Classical derivative h'(t): symbolic for Expr, supplied or central
    // finite difference for callables. Discrete inputs differentiate on
    // their own grid (see operators.hpp) and must not go through here.
    double derivative(double t, Warnings* warnings = nullptr) const;

    const DiscreteFunction* discrete() const { return discrete_ ? &*discrete_ : nullptr; }
    const ExprPtr& expr() const { return expr_; }

private:
    RealFunction() = default;

    ExprPtr expr_;                  // over {t}
    ExprPtr expr_derivative_;       // lazily built in from_expr
    std::optional<DiscreteFunction> discrete_;
    std::function<double(double)> callable_;
    std::function<double(double)> callable_derivative_;
};

}  // namespace katufrac

#endif
