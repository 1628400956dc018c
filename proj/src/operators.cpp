#include "katufrac/operators.hpp"

#include <cmath>
#include <memory>

namespace katufrac {

double gamma_fn(double x) {
    if (!(x > 0.0)) throw ValidationError("gamma_fn requires a positive argument");
    return std::tgamma(x);
}

double katu_integral(const RealFunction& h, const OperatorParams& p, const Interval& iv,
                     double t, const GridResolution& res, Warnings* warnings) {
    if (t < iv.a) throw ValidationError("katu_integral requires t >= a");
    if (t > iv.b) throw ValidationError("katu_integral requires t <= b");
    if (t == iv.a) return 0.0;
    const Grid grid(Interval(iv.a, t), p, res);
    return integrate_singular(h, grid, grid.n(), p.alpha, warnings);
}

namespace {

// Limit convention shared by gamma_derivative and the CK sampler: at the
// left endpoint t = 0 with rho != 1 the prefactor t^(1-rho) is degenerate;
// the sampled value is 0 when h'(0) is finite.
double gamma_derivative_at_zero(const RealFunction& h, Warnings* warnings) {
    const double hp = h.derivative(0.0, warnings);
    if (!std::isfinite(hp)) {
        if (warnings) warnings->add("gamma-derivative: h'(0) is not finite");
        return std::numeric_limits<double>::quiet_NaN();
    }
    return 0.0;
}

}  // namespace

double gamma_derivative(const RealFunction& h, double rho, double t, Warnings* warnings) {
    if (rho == 1.0) return h.derivative(t, warnings);
    if (t == 0.0) {
        if (rho < 1.0)
            throw ValidationError("gamma_derivative is rejected at t = 0 for rho < 1");
        return gamma_derivative_at_zero(h, warnings);
    }
    if (t < 0.0) throw ValidationError("gamma_derivative requires t >= 0");
    return std::pow(t, 1.0 - rho) * h.derivative(t, warnings);
}

double ck_derivative(const RealFunction& h, const OperatorParams& p, const Interval& iv,
                     double t, const GridResolution& res, Warnings* warnings) {
    if (t < iv.a) throw ValidationError("ck_derivative requires t >= a");
    if (t > iv.b) throw ValidationError("ck_derivative requires t <= b");
    if (t == iv.a) return 0.0;  // integral over an empty range

    const OperatorParams complement(1.0 - p.alpha, p.rho);

    if (const DiscreteFunction* d = h.discrete()) {
        const DiscreteFunction deriv = fd_gamma_derivative(*d);
        return katu_integral(RealFunction::from_discrete(deriv), complement, iv, t, res,
                             warnings);
    }

    const double rho = p.rho;
    auto sampler = RealFunction::from_callable([&h, rho, warnings](double s) {
        if (s == 0.0 && rho != 1.0) return gamma_derivative_at_zero(h, warnings);
        return gamma_derivative(h, rho, s, warnings);
    });
    return katu_integral(sampler, complement, iv, t, res, warnings);
}

double katu_derivative(const RealFunction& h, const OperatorParams& p, const Interval& iv,
                       double t, const GridResolution& res, Warnings* warnings) {
    if (t <= iv.a)
        throw ValidationError("katu_derivative is singular at t = a");
    const double ck = ck_derivative(h, p, iv, t, res, warnings);
    const double ha = h(iv.a, warnings);
    if (ha == 0.0) return ck;
    const double z = (std::pow(t, p.rho) - std::pow(iv.a, p.rho)) / p.rho;
    return ck + ha * std::pow(z, -p.alpha) / std::tgamma(1.0 - p.alpha);
}

double power_integral_oracle(double delta, const OperatorParams& p, double a, double t) {
    if (!(delta > 0.0)) throw ValidationError("power oracle requires delta > 0");
    if (t < a) throw ValidationError("power oracle requires t >= a");
    const double z = (std::pow(t, p.rho) - std::pow(a, p.rho)) / p.rho;
    const double expo = p.alpha + delta - 1.0;
    if (z == 0.0 && expo > 0.0) return 0.0;
    return std::tgamma(delta) / std::tgamma(delta + p.alpha) * std::pow(z, expo);
}

double power_ck_oracle(double delta, const OperatorParams& p, double a, double t) {
    if (!(delta > 0.0)) throw ValidationError("power oracle requires delta > 0");
    if (t < a) throw ValidationError("power oracle requires t >= a");
    if (delta == 1.0) return 0.0;  // CK annihilates constants
    if (delta <= p.alpha)
        throw ValidationError("power_ck_oracle requires delta > alpha");
    const double z = (std::pow(t, p.rho) - std::pow(a, p.rho)) / p.rho;
    const double expo = delta - p.alpha - 1.0;
    if (z == 0.0 && expo > 0.0) return 0.0;
    return std::tgamma(delta) / std::tgamma(delta - p.alpha) * std::pow(z, expo);
}

DiscreteFunction fd_gamma_derivative(const DiscreteFunction& h) {
    const Grid& grid = h.grid();
    const auto& u = grid.u_nodes();
    const auto& f = h.values();
    const double rho = grid.params().rho;
    const std::size_t n = grid.n();
    std::vector<double> d(n + 1);

    auto three_point = [&](std::size_t j0, std::size_t j1, std::size_t j2, double at) {
        const double x0 = u[j0], x1 = u[j1], x2 = u[j2];
        const double c0 = (2.0 * at - x1 - x2) / ((x0 - x1) * (x0 - x2));
        const double c1 = (2.0 * at - x0 - x2) / ((x1 - x0) * (x1 - x2));
        const double c2 = (2.0 * at - x0 - x1) / ((x2 - x0) * (x2 - x1));
        return c0 * f[j0] + c1 * f[j1] + c2 * f[j2];
    };

    d[0] = rho * three_point(0, 1, 2, u[0]);
    for (std::size_t j = 1; j < n; ++j) d[j] = rho * three_point(j - 1, j, j + 1, u[j]);
    d[n] = rho * three_point(n - 2, n - 1, n, u[n]);

    return DiscreteFunction(h.grid_ptr(), std::move(d));
}

DiscreteFunction ck_derivative_on_grid(const DiscreteFunction& h, double alpha) {
    const DiscreteFunction deriv = fd_gamma_derivative(h);
    const WeightTable table(h.grid(), 1.0 - alpha);
    const std::size_t n = h.grid().n();
    std::vector<double> out(n + 1);
    out[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) out[j] = table.apply(j, deriv.values());
    return DiscreteFunction(h.grid_ptr(), std::move(out));
}

}  // namespace katufrac
