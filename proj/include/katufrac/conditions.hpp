#ifndef KATUFRAC_CONDITIONS_HPP
#define KATUFRAC_CONDITIONS_HPP

#include <optional>
#include <string>

#include "katufrac/problem.hpp"

namespace katufrac {

enum class Verdict { Guaranteed, NotGuaranteed, Inapplicable };

const char* verdict_name(Verdict v);

struct TheoremVerdict {
    Verdict verdict = Verdict::Inapplicable;
    std::string reason;
};

struct ConditionReport {
    double banach_n = 0.0;                 // N
    std::optional<double> lambda;          // Lambda (Krasnoselskii)
    std::optional<double> ln_product;      // L * N
    std::optional<double> m_found;         // smallest grid M satisfying H3
    std::optional<double> mu;              // sup_t |f(t,0)|
    std::optional<double> r_ball;          // r >= mu N / (1 - LN), when LN < 1
    std::optional<double> r0_ball;         // r0 = N ||q|| + 1
    TheoremVerdict th1, th2, th3;
};

// N = (3/2) rho^(-alpha) (b^rho - a^rho)^alpha / Gamma(alpha+1)
double banach_constant(const OperatorParams& p, const Interval& iv);

// Lambda = (1/2) rho^(-alpha) ||delta|| (b^rho - a^rho)^alpha / Gamma(alpha+1),
// with ||delta|| estimated over a dense uniform sample of J.
double krasnoselskii_constant(const OperatorParams& p, const Interval& iv,
                              const ExprPtr& delta_fn);

// Smallest M on a logarithmic grid of 1000 points in [1e-6, 1e6] with
// N ||eta|| psi(M) / M < 1, or absent when the scan finds none.
std::optional<double> leray_schauder_find_M(const OperatorParams& p, const Interval& iv,
                                            const ExprPtr& eta, const ExprPtr& psi);

// mu = max |f(t, 0)| over a dense uniform sample of J.
double compute_mu(const ExprPtr& f, const Interval& iv);

// Fills every derivable field; verdicts are inapplicable when the needed
// hypothesis data is absent. Sup norms come from dense sampling, so a
// "guaranteed" verdict is guaranteed modulo sampling.
ConditionReport check_all(const ProblemSpec& spec);

}  // namespace katufrac

#endif
