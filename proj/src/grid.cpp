#include "katufrac/grid.hpp"

#include <algorithm>
#include <cmath>

namespace katufrac {

Grid::Grid(const Interval& iv, const OperatorParams& p, const GridResolution& res)
    : params_(p), interval_(iv), res_(res) {
    iv.validate();
    p.validate();
    res.validate();
    const std::size_t n = res.n;
    const double ua = std::pow(iv.a, p.rho);
    const double ub = std::pow(iv.b, p.rho);
    u_.resize(n + 1);
    t_.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double frac = std::pow(static_cast<double>(j) / static_cast<double>(n),
                                     res.grading);
        u_[j] = ua + (ub - ua) * frac;
        t_[j] = std::pow(u_[j], 1.0 / p.rho);
    }
    // pin the endpoints exactly
    u_[0] = ua;
    u_[n] = ub;
    t_[0] = iv.a;
    t_[n] = iv.b;
}

Grid build_grid(const Interval& iv, const OperatorParams& p, const GridResolution& res) {
    return Grid(iv, p, res);
}

DiscreteFunction::DiscreteFunction(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->n() + 1)
        throw ValidationError("discrete function needs n+1 values");
}

double DiscreteFunction::operator()(double t) const {
    const auto& u = grid_->u_nodes();
    const double rho = grid_->params().rho;
    double ut = std::pow(t, rho);
    if (ut <= u.front()) return values_.front();
    if (ut >= u.back()) return values_.back();
    auto it = std::upper_bound(u.begin(), u.end(), ut);
    std::size_t j = static_cast<std::size_t>(it - u.begin());  // u[j-1] <= ut < u[j]
    double w = (ut - u[j - 1]) / (u[j] - u[j - 1]);
    return values_[j - 1] + w * (values_[j] - values_[j - 1]);
}

double DiscreteFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

RealFunction RealFunction::from_expr(ExprPtr e) {
    RealFunction f;
    f.expr_ = std::move(e);
    try {
        f.expr_derivative_ = differentiate(f.expr_, "t");
    } catch (const DerivativeError&) {
        // gamma in the tree: derivative() will report it if ever requested
        f.expr_derivative_ = nullptr;
    }
    return f;
}

RealFunction RealFunction::from_discrete(DiscreteFunction d) {
    RealFunction f;
    f.discrete_ = std::move(d);
    return f;
}

RealFunction RealFunction::from_callable(std::function<double(double)> fn,
                                         std::function<double(double)> dfn) {
    RealFunction f;
    f.callable_ = std::move(fn);
    f.callable_derivative_ = std::move(dfn);
    return f;
}

double RealFunction::operator()(double t, Warnings* warnings) const {
    if (expr_) return eval(expr_, {{"t", t}}, warnings);
    if (discrete_) return (*discrete_)(t);
    return callable_(t);
}

double RealFunction::derivative(double t, Warnings* warnings) const {
    if (expr_) {
        if (!expr_derivative_)
            throw DerivativeError("expression has no symbolic derivative (contains gamma)");
        return eval(expr_derivative_, {{"t", t}}, warnings);
    }
    if (callable_) {
        if (callable_derivative_) return callable_derivative_(t);
        const double h = 1e-6 * (1.0 + std::fabs(t));
        return (callable_(t + h) - callable_(t - h)) / (2.0 * h);
    }
    throw DerivativeError("discrete functions differentiate on their grid");
}

}  // namespace katufrac
