#ifndef KATUFRAC_PROBLEM_IO_HPP
#define KATUFRAC_PROBLEM_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "katufrac/bvp.hpp"
#include "katufrac/conditions.hpp"
#include "katufrac/problem.hpp"

namespace katufrac {

struct LoadedProblem {
    ProblemSpec spec;
    SolveConfig config;
    ExprPtr y_exact;  // from [manufactured], may be null
};

// Reads a problem file: tables [problem] (alpha, rho, a, b, f), optional
// [hypotheses] (lipschitz, eta, psi, q, delta, mu), [solver] (n, grading,
// tol, max_iter) and [manufactured] (y_exact). The accepted syntax is the
// TOML subset of scalar keys documented in the README. Defaults: n = 1024,
// grading = 1, tol = 1e-10, max_iter = 200.
LoadedProblem load_problem(const std::filesystem::path& path);

// JSON report (schema in docs/report.schema.json). Solver fields are null
// when only the condition check ran.
nlohmann::json report_json(const ConditionReport& conditions,
                           const SolveReport* solve = nullptr,
                           const std::string& solution_path = "");

// Atomic file output: write to <path>.tmp, then rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// Solution table "t,y" with 17 significant digits (bit round-trip).
std::string solution_csv(const DiscreteFunction& y);
std::vector<std::pair<double, double>> read_solution_csv(const std::filesystem::path& path);

}  // namespace katufrac

#endif
