#ifndef KATUFRAC_PROBLEM_HPP
#define KATUFRAC_PROBLEM_HPP

#include <optional>
#include <string>

#include "katufrac/grid.hpp"

namespace katufrac {

// Hypothesis data for the existence/uniqueness checks:
//   H1: Lipschitz constant L for f in y
//   H2: |f(t,y)| <= eta(t) * psi(||y||), psi nondecreasing
//   H4: |f(t,y)| <= q(t)
//   H5: |f(t,x)-f(t,y)| <= delta(t) |x-y|
// mu = sup_t |f(t,0)| is auto-computed when absent.
struct HypothesisData {
    std::optional<double> lipschitz_L;
    ExprPtr eta;       // over {t}
    ExprPtr psi;       // over {u}
    ExprPtr q;         // over {t}
    ExprPtr delta_fn;  // over {t}
    std::optional<double> mu;
};

// The anti-periodic problem  ckD^(alpha;rho) y = f(t, y),  y(a)+y(b) = 0.
struct ProblemSpec {
    OperatorParams params;
    Interval interval;
    ExprPtr f;  // over exactly {t, y}
    HypothesisData hypotheses;

    ProblemSpec(OperatorParams p, Interval iv, ExprPtr f_, HypothesisData hyp = {})
        : params(p), interval(iv), f(std::move(f_)), hypotheses(std::move(hyp)) {
        validate();
    }

    void validate() const;
};

}  // namespace katufrac

#endif
