#include "katufrac/conditions.hpp"

#include <cmath>
#include <vector>

namespace katufrac {

namespace {

constexpr std::size_t kSamples = 10000;

// Dense uniform sample of |g| over [a,b], endpoints included.
// NaN anywhere is an error: hypothesis functions must be evaluable on J.
double sampled_sup(const ExprPtr& g, const Interval& iv, const char* what) {
    double sup = 0.0;
    for (std::size_t k = 0; k < kSamples; ++k) {
        const double t = iv.a + iv.width() * static_cast<double>(k) /
                                  static_cast<double>(kSamples - 1);
        Warnings w;
        const double v = eval(g, {{"t", t}}, &w);
        if (std::isnan(v))
            throw ValidationError(std::string(what) + " is not evaluable on J (NaN at t = " +
                                  std::to_string(t) + ")");
        sup = std::max(sup, std::fabs(v));
    }
    return sup;
}

void require_nonnegative(const ExprPtr& g, const Interval& iv, const char* what) {
    for (std::size_t k = 0; k < kSamples; ++k) {
        const double t = iv.a + iv.width() * static_cast<double>(k) /
                                  static_cast<double>(kSamples - 1);
        Warnings w;
        const double v = eval(g, {{"t", t}}, &w);
        if (std::isnan(v) || v < 0.0)
            throw ValidationError(std::string(what) +
                                  " must be nonnegative on J (violated at t = " +
                                  std::to_string(t) + ")");
    }
}

std::vector<double> log_m_grid() {
    std::vector<double> grid(1000);
    for (std::size_t k = 0; k < grid.size(); ++k)
        grid[k] = std::pow(10.0, -6.0 + 12.0 * static_cast<double>(k) /
                                      static_cast<double>(grid.size() - 1));
    return grid;
}

double eval_psi(const ExprPtr& psi, double u) {
    Warnings w;
    const double v = eval(psi, {{"u", u}}, &w);
    if (std::isnan(v)) throw ValidationError("psi is not evaluable (NaN at u = " +
                                             std::to_string(u) + ")");
    return v;
}

void require_psi_valid(const ExprPtr& psi) {
    double prev = -std::numeric_limits<double>::infinity();
    for (double u : log_m_grid()) {
        const double v = eval_psi(psi, u);
        if (v < 0.0)
            throw ValidationError("psi must be nonnegative (violated at u = " +
                                  std::to_string(u) + ")");
        if (v < prev * (1.0 - 1e-12))
            throw ValidationError("psi must be nondecreasing (violated at u = " +
                                  std::to_string(u) + ")");
        prev = std::max(prev, v);
    }
}

}  // namespace

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Guaranteed: return "guaranteed";
        case Verdict::NotGuaranteed: return "not-guaranteed";
        case Verdict::Inapplicable: return "inapplicable";
    }
    return "?";
}

double banach_constant(const OperatorParams& p, const Interval& iv) {
    const double width = std::pow(iv.b, p.rho) - std::pow(iv.a, p.rho);
    return 1.5 * std::pow(p.rho, -p.alpha) / std::tgamma(p.alpha + 1.0) *
           std::pow(width, p.alpha);
}

double krasnoselskii_constant(const OperatorParams& p, const Interval& iv,
                              const ExprPtr& delta_fn) {
    const double delta_sup = sampled_sup(delta_fn, iv, "delta");
    const double width = std::pow(iv.b, p.rho) - std::pow(iv.a, p.rho);
    return 0.5 * std::pow(p.rho, -p.alpha) * delta_sup / std::tgamma(p.alpha + 1.0) *
           std::pow(width, p.alpha);
}

std::optional<double> leray_schauder_find_M(const OperatorParams& p, const Interval& iv,
                                            const ExprPtr& eta, const ExprPtr& psi) {
    require_nonnegative(eta, iv, "eta");
    require_psi_valid(psi);
    const double n_const = banach_constant(p, iv);
    const double eta_sup = sampled_sup(eta, iv, "eta");
    for (double m : log_m_grid()) {
        if (n_const * eta_sup * eval_psi(psi, m) / m < 1.0) return m;
    }
    return std::nullopt;
}

double compute_mu(const ExprPtr& f, const Interval& iv) {
    double sup = 0.0;
    for (std::size_t k = 0; k < kSamples; ++k) {
        const double t = iv.a + iv.width() * static_cast<double>(k) /
                                  static_cast<double>(kSamples - 1);
        Warnings w;
        const double v = eval(f, {{"t", t}, {"y", 0.0}}, &w);
        if (std::isnan(v))
            throw ValidationError("f(t,0) is not evaluable on J (NaN at t = " +
                                  std::to_string(t) + ")");
        sup = std::max(sup, std::fabs(v));
    }
    return sup;
}

ConditionReport check_all(const ProblemSpec& spec) {
    spec.validate();
    const auto& hyp = spec.hypotheses;
    ConditionReport report;
    report.banach_n = banach_constant(spec.params, spec.interval);

    // Theorem 1 (Banach): needs L.
    if (hyp.lipschitz_L) {
        if (*hyp.lipschitz_L < 0.0)
            throw ValidationError("lipschitz constant must be nonnegative");
        const double ln = *hyp.lipschitz_L * report.banach_n;
        report.ln_product = ln;
        report.mu = hyp.mu ? *hyp.mu : compute_mu(spec.f, spec.interval);
        if (ln < 1.0) {
            report.th1.verdict = Verdict::Guaranteed;
            report.th1.reason = "L*N = " + std::to_string(ln) +
                                " < 1 (guaranteed modulo sampling)";
            report.r_ball = *report.mu * report.banach_n / (1.0 - ln);
        } else {
            report.th1.verdict = Verdict::NotGuaranteed;
            report.th1.reason = "L*N = " + std::to_string(ln) + " >= 1";
        }
    } else {
        report.th1.reason = "no Lipschitz constant provided";
    }

    // Theorem 2 (Leray-Schauder): needs eta and psi.
    if (hyp.eta && hyp.psi) {
        report.m_found = leray_schauder_find_M(spec.params, spec.interval, hyp.eta, hyp.psi);
        if (report.m_found) {
            report.th2.verdict = Verdict::Guaranteed;
            report.th2.reason = "found M = " + std::to_string(*report.m_found) +
                                " with N*||eta||*psi(M)/M < 1 (guaranteed modulo sampling)";
        } else {
            report.th2.verdict = Verdict::NotGuaranteed;
            report.th2.reason = "no M found in [1e-6, 1e6]";
        }
    } else {
        report.th2.reason = "eta/psi not provided";
    }

    // Theorem 3 (Krasnoselskii): needs q and delta.
    if (hyp.delta_fn) {
        require_nonnegative(hyp.delta_fn, spec.interval, "delta");
        report.lambda = krasnoselskii_constant(spec.params, spec.interval, hyp.delta_fn);
    }
    if (hyp.q && hyp.delta_fn) {
        require_nonnegative(hyp.q, spec.interval, "q");
        report.r0_ball = report.banach_n * sampled_sup(hyp.q, spec.interval, "q") + 1.0;
        if (*report.lambda < 1.0) {
            report.th3.verdict = Verdict::Guaranteed;
            report.th3.reason = "Lambda = " + std::to_string(*report.lambda) +
                                " < 1 with uniform bound q (guaranteed modulo sampling)";
        } else {
            report.th3.verdict = Verdict::NotGuaranteed;
            report.th3.reason = "Lambda = " + std::to_string(*report.lambda) + " >= 1";
        }
    } else {
        report.th3.reason = "q/delta not provided";
    }

    return report;
}

}  // namespace katufrac
