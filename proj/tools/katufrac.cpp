#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "katufrac/bvp.hpp"
#include "katufrac/conditions.hpp"
#include "katufrac/operators.hpp"
#include "katufrac/problem_io.hpp"

namespace fs = std::filesystem;
using namespace katufrac;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNanAbort = 2;
constexpr int kExitVerifyFailed = 3;

struct CliOptions {
    std::string problem_path;
    std::string out_dir = ".";
    std::optional<std::size_t> n_override;
    std::optional<double> tol_override;
};

LoadedProblem load_with_overrides(const CliOptions& opt) {
    LoadedProblem lp = load_problem(opt.problem_path);
    if (opt.n_override) lp.config.resolution.n = *opt.n_override;
    if (opt.tol_override) lp.config.tol = *opt.tol_override;
    lp.config.validate();
    return lp;
}

int run_check(const CliOptions& opt) {
    const LoadedProblem lp = load_with_overrides(opt);
    const ConditionReport report = check_all(lp.spec);
    std::cout << report_json(report).dump(2) << "\n";
    return kExitOk;
}

int run_solve(const CliOptions& opt) {
    const LoadedProblem lp = load_with_overrides(opt);
    const ConditionReport conditions = check_all(lp.spec);
    const SolveReport solve = picard_solve(lp.spec, lp.config);

    fs::create_directories(opt.out_dir);
    const fs::path csv_path = fs::path(opt.out_dir) / "solution.csv";
    const fs::path json_path = fs::path(opt.out_dir) / "report.json";
    write_text_atomic(csv_path, solution_csv(*solve.solution));
    write_text_atomic(json_path,
                      report_json(conditions, &solve, csv_path.string()).dump(2) + "\n");

    std::cout << "converged: " << (solve.converged ? "yes" : "no")
              << ", iterations: " << solve.iterations
              << ", anti-periodic residual: " << solve.anti_periodic_residual << "\n";
    for (const auto& w : solve.warnings) std::cout << "warning: " << w << "\n";
    std::cout << "wrote " << csv_path.string() << " and " << json_path.string() << "\n";
    return kExitOk;
}

struct VerifyRow {
    std::string name;
    double error;
    double tolerance;
    bool pass() const { return error <= tolerance; }
};

std::string power_source(double a, double rho, double exponent) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "((t^%.17g - %.17g)/%.17g)^%.17g", rho,
                  std::pow(a, rho), rho, exponent);
    return buf;
}

// Oracle suite at the problem file's (alpha, rho, [a,b]) and resolution:
// closed-form power identities, the semigroup and inversion laws, and the
// manufactured linear solve.
int run_verify(const CliOptions& opt) {
    const LoadedProblem lp = load_with_overrides(opt);
    const OperatorParams& p = lp.spec.params;
    const Interval& iv = lp.spec.interval;
    const GridResolution res = lp.config.resolution;

    std::vector<VerifyRow> rows;

    // power-law fractional integral against the closed form
    for (double delta : {1.0, 1.5, 2.0, 3.0}) {
        const RealFunction h = RealFunction::from_expr(
            parse(power_source(iv.a, p.rho, delta - 1.0), {"t"}));
        const double got = katu_integral(h, p, iv, iv.b, res);
        const double want = power_integral_oracle(delta, p, iv.a, iv.b);
        rows.push_back({"integral power law delta=" + std::to_string(delta),
                        std::fabs(got - want) / std::fabs(want), 2e-4});
    }

    // power-law CK derivative against the closed form (exact cases)
    for (double delta : {2.0, 3.0}) {
        const RealFunction h = RealFunction::from_expr(
            parse(power_source(iv.a, p.rho, delta - 1.0), {"t"}));
        const double got = ck_derivative(h, p, iv, iv.b, res);
        const double want = power_ck_oracle(delta, p, iv.a, iv.b);
        rows.push_back({"ck power law delta=" + std::to_string(delta),
                        std::fabs(got - want) / std::fabs(want), 1e-6});
    }

    // semigroup law I^a I^b = I^(a+b) for h = sin t
    {
        const double a1 = 0.5 * p.alpha, a2 = 0.3 * p.alpha;
        auto grid = std::make_shared<const Grid>(iv, OperatorParams(a2, p.rho), res);
        const WeightTable inner(*grid, a2);
        const WeightTable outer(*grid, a1);
        const WeightTable direct(*grid, a1 + a2);
        const auto& t = grid->t_nodes();
        std::vector<double> h(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) h[j] = std::sin(t[j]);
        std::vector<double> ih(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) ih[j] = inner.apply(j, h);
        double defect = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j)
            defect = std::max(defect, std::fabs(outer.apply(j, ih) - direct.apply(j, h)));
        rows.push_back({"semigroup law (sin t)", defect, 1e-4});
    }

    // inversion law ckD^alpha I^alpha h = h for h = sin t
    {
        auto grid = std::make_shared<const Grid>(iv, p, res);
        const WeightTable table(*grid, p.alpha);
        const auto& t = grid->t_nodes();
        std::vector<double> h(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) h[j] = std::sin(t[j]) - std::sin(iv.a);
        std::vector<double> ih(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) ih[j] = table.apply(j, h);
        const DiscreteFunction integrated(grid, std::move(ih));
        const DiscreteFunction back = ck_derivative_on_grid(integrated, p.alpha);
        double defect = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j)
            defect = std::max(defect, std::fabs(back.value_at_node(j) - h[j]));
        rows.push_back({"inversion law (sin t)", defect, 5e-3});
    }

    // manufactured linear solve: y = z^2 - z(b)^2/2 with z = (t^rho-a^rho)/rho
    {
        const OperatorParams& pp = p;
        const Interval ivc = iv;
        const RealFunction g = RealFunction::from_callable(
            [pp, ivc](double t) { return power_ck_oracle(3.0, pp, ivc.a, t); });
        const DiscreteFunction y = solve_linear(g, p, iv, res);
        const auto& t = y.grid().t_nodes();
        const double zb = (std::pow(iv.b, p.rho) - std::pow(iv.a, p.rho)) / p.rho;
        double err = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            const double z = (std::pow(t[j], p.rho) - std::pow(iv.a, p.rho)) / p.rho;
            err = std::max(err, std::fabs(y.value_at_node(j) - (z * z - 0.5 * zb * zb)));
        }
        rows.push_back({"linear solve, manufactured quadratic", err, 1e-4});
    }

    bool all_pass = true;
    std::printf("%-42s %12s %10s  %s\n", "check", "error", "tol", "status");
    for (const auto& row : rows) {
        all_pass = all_pass && row.pass();
        std::printf("%-42s %12.3e %10.1e  %s\n", row.name.c_str(), row.error,
                    row.tolerance, row.pass() ? "PASS" : "FAIL");
    }
    return all_pass ? kExitOk : kExitVerifyFailed;
}

int run_order(const CliOptions& opt) {
    const LoadedProblem lp = load_with_overrides(opt);
    if (!lp.y_exact)
        throw ValidationError("order requires [manufactured].y_exact in the problem file");

    const std::size_t n_max = std::max<std::size_t>(lp.config.resolution.n, 128);
    std::printf("%8s %14s %10s\n", "n", "sup-error", "order");
    double prev_err = 0.0;
    bool have_prev = false;
    for (std::size_t n = 64; n <= n_max; n *= 2) {
        SolveConfig cfg = lp.config;
        cfg.resolution.n = n;
        const SolveReport report = picard_solve(lp.spec, cfg);
        const auto& t = report.solution->grid().t_nodes();
        double err = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            const double exact = eval(lp.y_exact, {{"t", t[j]}});
            err = std::max(err, std::fabs(report.solution->value_at_node(j) - exact));
        }
        if (have_prev)
            std::printf("%8zu %14.6e %10.2f\n", n, err, std::log2(prev_err / err));
        else
            std::printf("%8zu %14.6e %10s\n", n, err, "-");
        prev_err = err;
        have_prev = true;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Katugampola fractional operators and the anti-periodic boundary value problem"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("problem", opt.problem_path, "problem file (TOML)")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--n", opt.n_override, "override grid subinterval count");
        sub->add_option("--tol", opt.tol_override, "override solver tolerance");
    };

    CLI::App* check = app.add_subcommand("check", "evaluate the existence/uniqueness criteria");
    CLI::App* solve = app.add_subcommand("solve", "run the Picard solver, write CSV + JSON");
    CLI::App* verify = app.add_subcommand("verify", "run the operator oracle suite");
    CLI::App* order = app.add_subcommand("order", "grid refinement study against y_exact");
    for (CLI::App* sub : {check, solve, verify, order}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return run_check(opt);
        if (solve->parsed()) return run_solve(opt);
        if (verify->parsed()) return run_verify(opt);
        if (order->parsed()) return run_order(opt);
    } catch (const SolveAbort& err) {
        std::cerr << "solver abort: " << err.what() << "\n";
        return kExitNanAbort;
    } catch (const ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const ParseError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
