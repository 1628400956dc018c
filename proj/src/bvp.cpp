#include "katufrac/bvp.hpp"

#include <algorithm>
#include <cmath>

#include "katufrac/conditions.hpp"
#include "katufrac/operators.hpp"

namespace katufrac {

void ProblemSpec::validate() const {
    params.validate();
    interval.validate();
    if (!f) throw ValidationError("problem requires a right-hand side f");
    for (const auto& v : variables(f))
        if (v != "t" && v != "y")
            throw ValidationError("f may only reference t and y, found '" + v + "'");
}

double c0_coefficient(const RealFunction& g, const OperatorParams& p, const Interval& iv,
                      const GridResolution& res, Warnings* warnings) {
    const Grid grid(iv, p, res);
    return -0.5 * integrate_full_kernel_b(g, grid, p.alpha, warnings);
}

namespace {

DiscreteFunction assemble_solution(const std::shared_ptr<const Grid>& grid,
                                   const WeightTable& table,
                                   const std::vector<double>& g_values) {
    const std::size_t n = grid->n();
    const double c0 = -0.5 * table.apply(n, g_values);
    std::vector<double> y(n + 1);
    for (std::size_t j = 0; j <= n; ++j) y[j] = c0 + table.apply(j, g_values);
    return DiscreteFunction(grid, std::move(y));
}

}  // namespace

DiscreteFunction solve_linear(const RealFunction& g, const OperatorParams& p,
                              const Interval& iv, const GridResolution& res,
                              Warnings* warnings) {
    auto grid = std::make_shared<const Grid>(iv, p, res);
    const WeightTable table(*grid, p.alpha);
    const auto& t = grid->t_nodes();
    std::vector<double> gv(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) gv[j] = g(t[j], warnings);
    return assemble_solution(grid, table, gv);
}

SolutionOperator::SolutionOperator(const ProblemSpec& spec, const GridResolution& res)
    : spec_(spec),
      grid_(std::make_shared<const Grid>(spec.interval, spec.params, res)),
      table_(*grid_, spec.params.alpha) {}

DiscreteFunction SolutionOperator::apply(const DiscreteFunction& y, int iteration) const {
    const auto& t = grid_->t_nodes();
    const std::size_t n = grid_->n();
    std::vector<double> g(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        Warnings w;
        g[j] = eval(spec_.f, {{"t", t[j]}, {"y", y.value_at_node(j)}}, &w);
        if (std::isnan(g[j])) {
            std::string msg = "f produced NaN at node " + std::to_string(j) +
                              " (t = " + std::to_string(t[j]) + ")";
            for (const auto& m : w.messages) msg += ": " + m;
            throw SolveAbort(j, iteration, msg);
        }
    }
    return apply_to_forcing(g);
}

DiscreteFunction SolutionOperator::apply_to_forcing(const std::vector<double>& g_values) const {
    return assemble_solution(grid_, table_, g_values);
}

DiscreteFunction apply_T(const ProblemSpec& spec, const DiscreteFunction& y) {
    const SolutionOperator op(spec, y.grid().resolution());
    return op.apply(y);
}

SolveReport picard_solve(const ProblemSpec& spec, const SolveConfig& cfg) {
    spec.validate();
    cfg.validate();

    const SolutionOperator op(spec, cfg.resolution);
    const std::size_t n = op.grid()->n();

    SolveReport report;

    bool contraction_guaranteed = false;
    if (spec.hypotheses.lipschitz_L) {
        const double ln = *spec.hypotheses.lipschitz_L *
                          banach_constant(spec.params, spec.interval);
        if (ln < 1.0)
            contraction_guaranteed = true;
        else
            report.warnings.push_back("no contraction guarantee");
    }

    DiscreteFunction y(op.grid(),
                       std::vector<double>(n + 1, cfg.y0_constant));

    std::size_t increasing_run = 0;
    double prev_residual = -1.0;
    for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
        DiscreteFunction next = op.apply(y, static_cast<int>(k));
        double r = 0.0;
        for (std::size_t j = 0; j <= n; ++j)
            r = std::max(r, std::fabs(next.value_at_node(j) - y.value_at_node(j)));
        report.residual_history.push_back(r);
        if (prev_residual > 0.0)
            report.contraction_estimates.push_back(r / prev_residual);
        y = std::move(next);
        if (r <= cfg.tol) {
            report.converged = true;
            break;
        }
        increasing_run = (prev_residual >= 0.0 && r > prev_residual) ? increasing_run + 1 : 0;
        prev_residual = r;
        if (increasing_run >= 5 && !contraction_guaranteed) {
            report.warnings.push_back("divergence detected: residuals increased for 5 steps");
            break;
        }
    }

    report.iterations = report.residual_history.size();
    report.solution = std::make_shared<DiscreteFunction>(std::move(y));
    report.anti_periodic_residual = anti_periodic_residual(*report.solution);
    return report;
}

double anti_periodic_residual(const DiscreteFunction& y) {
    return std::fabs(y.values().front() + y.values().back());
}

double residual_ck(const ProblemSpec& spec, const DiscreteFunction& y) {
    const DiscreteFunction ck = ck_derivative_on_grid(y, spec.params.alpha);
    const auto& t = y.grid().t_nodes();
    double defect = 0.0;
    for (std::size_t j = 1; j <= y.grid().n(); ++j) {
        const double fj = eval(spec.f, {{"t", t[j]}, {"y", y.value_at_node(j)}});
        defect = std::max(defect, std::fabs(ck.value_at_node(j) - fj));
    }
    return defect;
}

}  // namespace katufrac
