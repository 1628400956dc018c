#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "katufrac/bvp.hpp"
#include "katufrac/conditions.hpp"

using namespace katufrac;

namespace {
const std::set<std::string> kT = {"t"};
const std::set<std::string> kU = {"u"};
const std::set<std::string> kTY = {"t", "y"};
}  // namespace

TEST_CASE("banach_constant closed forms") {
    CHECK(banach_constant(OperatorParams(0.5, 1.0), Interval(0, 1)) ==
          doctest::Approx(1.6925687506432689).epsilon(1e-13));
    CHECK(banach_constant(OperatorParams(0.5, 2.0), Interval(0, 1)) ==
          doctest::Approx(1.1968268412042976).epsilon(1e-13));
    // zero-width limit: monotone decrease to 0 as b -> a
    double prev = banach_constant(OperatorParams(0.5, 1.0), Interval(0.5, 1.5));
    for (double b : {1.0, 0.75, 0.625, 0.5625}) {
        const double n = banach_constant(OperatorParams(0.5, 1.0), Interval(0.5, b));
        CHECK(n < prev);
        prev = n;
    }
    CHECK(prev < 0.5);
}

TEST_CASE("N is monotone in b") {
    double prev = 0.0;
    for (double b : {0.2, 0.5, 1.0, 2.0, 4.0}) {
        const double n = banach_constant(OperatorParams(0.4, 1.3), Interval(0.1, b));
        CHECK(n > prev);
        prev = n;
    }
}

TEST_CASE("krasnoselskii_constant closed forms") {
    const OperatorParams p(0.5, 1.0);
    const Interval iv(0, 1);
    CHECK(krasnoselskii_constant(p, iv, parse("1", kT)) ==
          doctest::Approx(0.5641895835477563).epsilon(1e-12));
    CHECK(krasnoselskii_constant(p, iv, parse("0", kT)) == 0.0);
    CHECK(krasnoselskii_constant(p, iv, parse("3", kT)) ==
          doctest::Approx(1.6925687506432689).epsilon(1e-12));
}

TEST_CASE("Lambda with constant delta is (c/3) N exactly") {
    for (double c : {0.5, 1.0, 2.0}) {
        const OperatorParams p(0.35, 1.6);
        const Interval iv(0.2, 1.4);
        const double lambda =
            krasnoselskii_constant(p, iv, Expr::constant(c));
        const double n = banach_constant(p, iv);
        CHECK(lambda == doctest::Approx(c / 3.0 * n).epsilon(1e-15));
    }
}

TEST_CASE("leray_schauder_find_M examples") {
    const OperatorParams p(0.5, 1.0);
    const Interval iv(0, 1);
    // bounded f: psi == 1 always admits an M
    CHECK(leray_schauder_find_M(p, iv, parse("2", kT), parse("1", kU)).has_value());
    // linear growth with N ~ 1.69 > 1: no M can work
    CHECK(!leray_schauder_find_M(p, iv, parse("1", kT), parse("u", kU)).has_value());
    // linear growth with slope 0.5: N * 0.5 < 1, M exists
    CHECK(leray_schauder_find_M(p, iv, parse("0.5", kT), parse("u", kU)).has_value());
}

TEST_CASE("compute_mu examples") {
    const Interval iv(0, 1);
    CHECK(compute_mu(parse("y", kTY), iv) == 0.0);
    CHECK(compute_mu(parse("2", kTY), iv) == 2.0);
    CHECK(compute_mu(parse("sin(t) + 0.2*y", kTY), iv) ==
          doctest::Approx(std::sin(1.0)).epsilon(1e-6));
}

TEST_CASE("check_all with a Lipschitz constant below the Banach threshold") {
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1),
                     parse("0.25*y + sin(t)", kTY));
    spec.hypotheses.lipschitz_L = 0.25;
    ConditionReport rep = check_all(spec);
    CHECK(rep.banach_n == doctest::Approx(1.6925687506432689).epsilon(1e-13));
    REQUIRE(rep.ln_product.has_value());
    CHECK(*rep.ln_product == doctest::Approx(0.4231421876608172).epsilon(1e-13));
    CHECK(rep.th1.verdict == Verdict::Guaranteed);
    REQUIRE(rep.mu.has_value());
    REQUIRE(rep.r_ball.has_value());
    CHECK(*rep.r_ball ==
          doctest::Approx(*rep.mu * rep.banach_n / (1.0 - *rep.ln_product)).epsilon(1e-12));
}

TEST_CASE("check_all with no hypotheses is fully inapplicable but reports N") {
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1), parse("sin(y) + t", kTY));
    ConditionReport rep = check_all(spec);
    CHECK(rep.banach_n > 0.0);
    CHECK(rep.th1.verdict == Verdict::Inapplicable);
    CHECK(rep.th2.verdict == Verdict::Inapplicable);
    CHECK(rep.th3.verdict == Verdict::Inapplicable);
    CHECK(!rep.th1.reason.empty());
}

TEST_CASE("check_all Krasnoselskii example") {
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1), parse("2*cos(y)", kTY));
    spec.hypotheses.q = parse("2", kT);
    spec.hypotheses.delta_fn = parse("1", kT);
    ConditionReport rep = check_all(spec);
    REQUIRE(rep.lambda.has_value());
    CHECK(*rep.lambda == doctest::Approx(0.5641895835477563).epsilon(1e-12));
    CHECK(rep.th3.verdict == Verdict::Guaranteed);
    REQUIRE(rep.r0_ball.has_value());
    CHECK(*rep.r0_ball == doctest::Approx(2.0 * rep.banach_n + 1.0).epsilon(1e-12));
    CHECK(*rep.r0_ball == doctest::Approx(4.385).epsilon(1e-3));
}

TEST_CASE("check_all flags a contraction failure as not guaranteed") {
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1), parse("sin(y) + t", kTY));
    spec.hypotheses.lipschitz_L = 1.0;
    ConditionReport rep = check_all(spec);
    REQUIRE(rep.ln_product.has_value());
    CHECK(*rep.ln_product == doctest::Approx(1.6925687506432689).epsilon(1e-13));
    CHECK(rep.th1.verdict == Verdict::NotGuaranteed);
    CHECK(!rep.r_ball.has_value());

    spec.hypotheses.delta_fn = parse("3", kT);
    ConditionReport rep2 = check_all(spec);
    CHECK(rep2.th3.verdict != Verdict::Guaranteed);
}

TEST_CASE("decreasing psi is rejected with a named violation") {
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1), parse("sin(y)", kTY));
    spec.hypotheses.eta = parse("1", kT);
    spec.hypotheses.psi = parse("1/(1 + u)", kU);
    CHECK_THROWS_AS(check_all(spec), ValidationError);
}

TEST_CASE("negative eta is rejected") {
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1), parse("sin(y)", kTY));
    spec.hypotheses.eta = parse("0 - 1", kT);
    spec.hypotheses.psi = parse("1", kU);
    CHECK_THROWS_AS(check_all(spec), ValidationError);
}

TEST_CASE("reports are deterministic") {
    ProblemSpec spec(OperatorParams(0.45, 1.2), Interval(0.1, 1.3),
                     parse("0.2*y + exp(0 - t)", kTY));
    spec.hypotheses.lipschitz_L = 0.2;
    spec.hypotheses.eta = parse("1 + t", kT);
    spec.hypotheses.psi = parse("1 + u", kU);
    ConditionReport a = check_all(spec);
    ConditionReport b = check_all(spec);
    CHECK(a.banach_n == b.banach_n);
    CHECK(a.ln_product == b.ln_product);
    CHECK(a.m_found == b.m_found);
    CHECK(a.mu == b.mu);
    CHECK(a.th1.verdict == b.th1.verdict);
    CHECK(a.th2.verdict == b.th2.verdict);
    CHECK(a.th2.reason == b.th2.reason);
}

TEST_CASE("verdict soundness: guaranteed Th1 implies Picard convergence") {
    struct Case {
        const char* f;
        double L;
    };
    const Case corpus[] = {
        {"0.25*y + 2*sqrt(t)/sqrt(pi) - 0.25*(t - 0.5)", 0.25},
        {"0.3*y + cos(t)", 0.3},
        {"0.5*sin(y) + t^2", 0.5},
    };
    for (const auto& c : corpus) {
        ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1), parse(c.f, kTY));
        spec.hypotheses.lipschitz_L = c.L;
        ConditionReport rep = check_all(spec);
        CAPTURE(c.f);
        REQUIRE(rep.th1.verdict == Verdict::Guaranteed);
        SolveConfig cfg;
        cfg.resolution = GridResolution(256, 2.0);
        cfg.max_iter = 500;
        cfg.tol = 1e-10;
        SolveReport solve = picard_solve(spec, cfg);
        CHECK(solve.converged);
    }
}

TEST_CASE("verdict names") {
    CHECK(std::string(verdict_name(Verdict::Guaranteed)) == "guaranteed");
    CHECK(std::string(verdict_name(Verdict::NotGuaranteed)) == "not-guaranteed");
    CHECK(std::string(verdict_name(Verdict::Inapplicable)) == "inapplicable");
}
