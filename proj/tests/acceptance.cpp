// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Run from ctest; requires the CLI binary and the
// fixture corpus (paths injected at compile time).

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "katufrac/bvp.hpp"
#include "katufrac/conditions.hpp"
#include "katufrac/operators.hpp"
#include "katufrac/problem_io.hpp"

namespace fs = std::filesystem;
using namespace katufrac;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path fixture(const std::string& name) {
    return fs::path(KATUFRAC_FIXTURE_DIR) / name;
}

fs::path temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() /
                   ("katufrac_acceptance_" + std::to_string(::getpid()) + "_" + tag);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& stdout_path) {
    const std::string cmd = std::string(KATUFRAC_CLI_PATH) + " " + args + " > " +
                            stdout_path.string() + " 2> " + stdout_path.string() + ".err";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

// Structural validation against the shipped schema: every required key
// present, no extras, types as declared ("number", "integer", "string",
// "boolean", "array", "object", "null" and unions thereof).
bool type_matches(const json& value, const json& type_decl) {
    std::vector<std::string> allowed;
    if (type_decl.is_string()) {
        allowed.push_back(type_decl.get<std::string>());
    } else {
        for (const auto& t : type_decl) allowed.push_back(t.get<std::string>());
    }
    for (const auto& t : allowed) {
        if (t == "number" && value.is_number()) return true;
        if (t == "integer" && value.is_number_integer()) return true;
        if (t == "string" && value.is_string()) return true;
        if (t == "boolean" && value.is_boolean()) return true;
        if (t == "array" && value.is_array()) return true;
        if (t == "object" && value.is_object()) return true;
        if (t == "null" && value.is_null()) return true;
    }
    return false;
}

bool validate_object(const json& value, const json& schema, const json& root,
                     std::string* why);

bool validate_value(const json& value, const json& schema, const json& root,
                    std::string* why) {
    json resolved = schema;
    if (schema.contains("$ref")) {
        // only local refs of the form #/definitions/<name> are used
        const std::string ref = schema["$ref"].get<std::string>();
        const std::string prefix = "#/definitions/";
        if (ref.rfind(prefix, 0) != 0) {
            *why = "unsupported $ref " + ref;
            return false;
        }
        resolved = root["definitions"][ref.substr(prefix.size())];
    }
    if (resolved.contains("type") && !type_matches(value, resolved["type"])) {
        *why = "type mismatch";
        return false;
    }
    if (resolved.contains("enum")) {
        bool ok = false;
        for (const auto& v : resolved["enum"]) ok = ok || (v == value);
        if (!ok) {
            *why = "enum mismatch";
            return false;
        }
    }
    if (value.is_object() && resolved.contains("properties"))
        return validate_object(value, resolved, root, why);
    if (value.is_array() && resolved.contains("items")) {
        for (const auto& item : value)
            if (!validate_value(item, resolved["items"], root, why)) return false;
    }
    return true;
}

bool validate_object(const json& value, const json& schema, const json& root,
                     std::string* why) {
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            if (!value.contains(key.get<std::string>())) {
                *why = "missing required key " + key.get<std::string>();
                return false;
            }
        }
    }
    const json& props = schema["properties"];
    for (auto it = value.begin(); it != value.end(); ++it) {
        if (!props.contains(it.key())) {
            *why = "unexpected key " + it.key();
            return false;
        }
        if (!validate_value(it.value(), props[it.key()], root, why)) {
            *why = it.key() + ": " + *why;
            return false;
        }
    }
    return true;
}

bool schema_valid(const json& value, const json& schema, std::string* why) {
    return validate_value(value, schema, schema, why);
}

// --------------------------------------------------------------------------

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::string worst_case;
    for (double delta : {1.0, 1.5, 3.0}) {
        for (double alpha : {0.3, 0.5, 0.9}) {
            for (double rho : {0.5, 1.0, 2.0}) {
                const OperatorParams p(alpha, rho);
                const double grading = delta < 2.0 ? 4.0 : 2.0;
                const RealFunction h = RealFunction::from_callable([=](double t) {
                    return std::pow(std::pow(t, rho) / rho, delta - 1.0);
                });
                const double got =
                    katu_integral(h, p, Interval(0, 1), 1.0, GridResolution(4096, grading));
                const double want = power_integral_oracle(delta, p, 0.0, 1.0);
                const double rel = std::fabs(got - want) / std::fabs(want);
                if (rel > worst) {
                    worst = rel;
                    char buf[96];
                    std::snprintf(buf, sizeof(buf), "delta=%g alpha=%g rho=%g", delta,
                                  alpha, rho);
                    worst_case = buf;
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "power-law oracle agreement, worst rel err %.2e (%s) at n=4096, %.1f s",
                  worst, worst_case.c_str(), elapsed);
    report(1, worst <= 1e-6 && elapsed < 10.0, buf);
}

void criterion_2() {
    double worst = 0.0;
    const Interval iv(0, 1);
    const std::vector<std::function<double(double)>> hs = {
        [](double t) { return std::sin(t); }, [](double t) { return t * t; }};
    for (const auto& h : hs) {
        for (double alpha : {0.3, 0.5}) {
            for (double beta : {0.2, 0.4}) {
                const GridResolution res(2048, 2.0);
                auto grid = std::make_shared<Grid>(iv, OperatorParams(beta, 1.0), res);
                const WeightTable inner(*grid, beta);
                const WeightTable outer(*grid, alpha);
                const WeightTable direct(*grid, alpha + beta);
                const auto& t = grid->t_nodes();
                std::vector<double> hv(t.size());
                for (std::size_t j = 0; j < t.size(); ++j) hv[j] = h(t[j]);
                std::vector<double> ih(t.size());
                for (std::size_t j = 0; j < t.size(); ++j) ih[j] = inner.apply(j, hv);
                for (std::size_t j = 0; j < t.size(); ++j)
                    worst = std::max(worst,
                                     std::fabs(outer.apply(j, ih) - direct.apply(j, hv)));
            }
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "semigroup identity, worst defect %.2e at n=2048",
                  worst);
    report(2, worst <= 1e-5, buf);
}

void criterion_3() {
    double worst = 0.0;
    const Interval iv(0, 1);
    const std::vector<std::function<double(double)>> hs = {
        [](double t) { return std::sin(t); }, [](double t) { return t * t; }};
    for (const auto& h : hs) {
        for (double alpha : {0.3, 0.5}) {
            const GridResolution res(4096, 3.0);
            auto grid = std::make_shared<Grid>(iv, OperatorParams(alpha, 1.0), res);
            const WeightTable table(*grid, alpha);
            const auto& t = grid->t_nodes();
            std::vector<double> hv(t.size());
            for (std::size_t j = 0; j < t.size(); ++j) hv[j] = h(t[j]);
            std::vector<double> ih(t.size());
            for (std::size_t j = 0; j < t.size(); ++j) ih[j] = table.apply(j, hv);
            const DiscreteFunction integrated(grid, std::move(ih));
            const DiscreteFunction back = ck_derivative_on_grid(integrated, alpha);
            for (std::size_t j = 1; j < t.size(); ++j)
                worst = std::max(worst, std::fabs(back.value_at_node(j) - hv[j]));
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "inversion identity, worst defect %.2e at n=4096",
                  worst);
    report(3, worst <= 1e-4, buf);
}

void criterion_4() {
    const RealFunction g = RealFunction::from_callable(
        [](double t) { return 2.0 * std::sqrt(t) / std::sqrt(M_PI); });
    const DiscreteFunction y = solve_linear(g, OperatorParams(0.5, 1.0), Interval(0, 1),
                                            GridResolution(4096, 4.0));
    double err = 0.0;
    const auto& t = y.grid().t_nodes();
    for (std::size_t j = 0; j < t.size(); ++j)
        err = std::max(err, std::fabs(y.value_at_node(j) - (t[j] - 0.5)));
    const double ap = anti_periodic_residual(y);
    char buf[140];
    std::snprintf(buf, sizeof(buf),
                  "linear BVP manufactured y=t-1/2, sup err %.2e, anti-periodic %.2e",
                  err, ap);
    report(4, err <= 1e-6 && ap <= 1e-12, buf);
}

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1),
                     parse("0.25*y + 2*sqrt(t)/sqrt(pi) - 0.25*(t - 0.5)", {"t", "y"}));
    spec.hypotheses.lipschitz_L = 0.25;
    const ConditionReport cond = check_all(spec);
    SolveConfig cfg;
    cfg.resolution = GridResolution(2048, 4.0);
    const SolveReport solve = picard_solve(spec, cfg);
    const double elapsed = seconds_since(t0);

    bool contraction_ok = solve.converged && !solve.contraction_estimates.empty();
    double worst_estimate = 0.0;
    for (std::size_t k = 3; k < solve.contraction_estimates.size(); ++k)
        worst_estimate = std::max(worst_estimate, solve.contraction_estimates[k]);
    contraction_ok = contraction_ok && worst_estimate <= 0.473;
    const bool ln_ok = cond.ln_product &&
                       std::fabs(*cond.ln_product - 0.4231421876608172) <= 1e-6 &&
                       cond.th1.verdict == Verdict::Guaranteed;
    char buf[180];
    std::snprintf(buf, sizeof(buf),
                  "Banach contraction: LN=%.10f, worst late contraction estimate %.3f, "
                  "%zu iterations, %.1f s",
                  cond.ln_product.value_or(-1.0), worst_estimate, solve.iterations,
                  elapsed);
    report(5, contraction_ok && ln_ok && elapsed < 5.0, buf);
}

void criterion_6() {
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1),
                     parse("y + 2*sqrt(t)/sqrt(pi) - (t - 0.5)", {"t", "y"}));
    spec.hypotheses.lipschitz_L = 1.0;
    const ConditionReport cond = check_all(spec);
    const bool ln_ok = cond.ln_product &&
                       std::fabs(*cond.ln_product - 1.6925687506432689) <= 1e-6;
    const bool verdict_ok = cond.th1.verdict == Verdict::NotGuaranteed;

    SolveConfig cfg;
    cfg.resolution = GridResolution(256, 2.0);
    cfg.max_iter = 50;
    const SolveReport solve = picard_solve(spec, cfg);
    bool warned = false;
    for (const auto& w : solve.warnings)
        warned = warned || w.find("no contraction guarantee") != std::string::npos;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "verdict boundary: LN=%.7f, verdict %s, warning %s",
                  cond.ln_product.value_or(-1.0), verdict_name(cond.th1.verdict),
                  warned ? "present" : "absent");
    report(6, ln_ok && verdict_ok && warned, buf);
}

void criterion_7() {
    // f(t,y) = sin(y) + t is bounded by eta*psi(r) = 2*1 on the r=2 ball
    ProblemSpec spec(OperatorParams(0.5, 1.0), Interval(0, 1),
                     parse("sin(y) + t", {"t", "y"}));
    const GridResolution res(2048, 2.0);
    auto grid = std::make_shared<Grid>(spec.interval, spec.params, res);
    std::vector<double> yv;
    for (double t : grid->t_nodes()) yv.push_back(2.0 * std::sin(3.0 * t));
    const DiscreteFunction y(grid, yv);  // ||y|| = 2, inside the ball
    const DiscreteFunction ty = apply_T(spec, y);

    const double eta_norm = 2.0, psi_r = 1.0;
    const double modulus = 2.0 * eta_norm * psi_r / std::tgamma(1.5);
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<std::size_t> pick(0, grid->t_nodes().size() - 1);
    double worst_excess = -1.0;
    bool ok = true;
    for (int k = 0; k < 100; ++k) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i > j) std::swap(i, j);
        const double t1 = grid->t_nodes()[i], t2 = grid->t_nodes()[j];
        const double gap = std::fabs(ty.value_at_node(j) - ty.value_at_node(i));
        const double bound = modulus * std::pow(t2 - t1, 0.5) + 1e-6;
        ok = ok && gap <= bound;
        worst_excess = std::max(worst_excess, gap - bound);
    }
    char buf[140];
    std::snprintf(buf, sizeof(buf),
                  "equicontinuity modulus over 100 node pairs, worst slack %.2e",
                  -worst_excess);
    report(7, ok, buf);
}

void criterion_8() {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path out = temp_dir("order") / "order.out";
    const int code = run_cli("order " + fixture("order_delta2.toml").string(), out);
    const double elapsed = seconds_since(t0);

    // parse the (n, sup-error, order) table and check every observed order
    std::istringstream in(slurp(out));
    std::string line;
    std::getline(in, line);  // header
    double min_order = 1e9;
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        double n, err;
        std::string order;
        if (!(row >> n >> err >> order)) continue;
        ++rows;
        if (order != "-") min_order = std::min(min_order, std::stod(order));
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "order study n=64..4096: exit %d, %d rows, min observed order %.2f, %.1f s",
                  code, rows, min_order, elapsed);
    report(8, code == 0 && rows == 7 && min_order >= 1.5 && elapsed < 30.0, buf);
}

void criterion_9() {
    const json schema = json::parse(slurp(fs::path(KATUFRAC_SCHEMA_PATH)));
    const fs::path dir = temp_dir("cli");
    bool ok = true;
    std::string detail;

    auto expect = [&](bool cond, const std::string& what) {
        if (!cond && detail.empty()) detail = what;
        ok = ok && cond;
    };

    // check: exit 0 and schema-valid JSON on every valid fixture
    for (const std::string& name : {"minimal.toml", "lambda025.toml", "lambda100.toml",
                                    "order_delta2.toml"}) {
        const fs::path out = dir / (name + ".check");
        expect(run_cli("check " + fixture(name).string(), out) == 0,
               "check exit code on " + name);
        std::string why;
        json j;
        try {
            j = json::parse(slurp(out));
        } catch (...) {
            expect(false, "check JSON parse on " + name);
            continue;
        }
        expect(schema_valid(j, schema, &why), "check schema on " + name + ": " + why);
    }

    // solve: exit 0, CSV interpolant matches the manufactured solution
    {
        const fs::path sdir = dir / "solve025";
        expect(run_cli("solve " + fixture("lambda025.toml").string() + " --out " +
                           sdir.string(),
                       dir / "solve.out") == 0,
               "solve exit code");
        std::string why;
        json j;
        try {
            j = json::parse(slurp(sdir / "report.json"));
        } catch (...) {
            j = nullptr;
        }
        expect(j.is_object() && schema_valid(j, schema, &why), "solve schema: " + why);
        double err = 0.0;
        try {
            for (const auto& [t, y] : read_solution_csv(sdir / "solution.csv"))
                err = std::max(err, std::fabs(y - (t - 0.5)));
        } catch (...) {
            err = 1.0;
        }
        expect(err <= 1e-6, "solve CSV accuracy");
    }

    // error exit codes
    expect(run_cli("check " + fixture("badalpha.toml").string(), dir / "bad.out") == 1,
           "validation exit code");
    expect(run_cli("solve " + fixture("nanabort.toml").string() + " --out " +
                       (dir / "nan").string(),
                   dir / "nan.out") == 2,
           "NaN abort exit code");
    expect(run_cli("order " + fixture("minimal.toml").string(), dir / "noexact.out") == 1,
           "order without y_exact exit code");

    // verify: oracle table passes on the minimal problem
    expect(run_cli("verify " + fixture("minimal.toml").string() + " --n 2048",
                   dir / "verify.out") == 0,
           "verify exit code");

    report(9, ok,
           ok ? "CLI exit codes and schema-valid JSON across the fixture corpus"
              : "CLI contract: first failure at " + detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
