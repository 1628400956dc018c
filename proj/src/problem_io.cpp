#include "katufrac/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace katufrac {

namespace {

struct TomlValue {
    enum class Kind { String, Number, Boolean } kind;
    std::string str;
    double number = 0.0;
    bool boolean = false;
    int line = 0;
};

using TomlTable = std::map<std::string, TomlValue>;
using TomlDoc = std::map<std::string, TomlTable>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::filesystem::path& path, int line, const std::string& msg) {
    throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

// Scalar-key TOML subset: [tables], key = "string" | number | bool, # comments.
TomlDoc parse_toml(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open problem file: " + path.string());
    TomlDoc doc;
    std::string table;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        // strip comments outside of strings
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(path, lineno, "malformed table header");
            table = trim(line.substr(1, line.size() - 2));
            if (table.empty()) fail(path, lineno, "empty table name");
            doc[table];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(path, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(path, lineno, "empty key");
        if (value.empty()) fail(path, lineno, "empty value for key '" + key + "'");
        if (table.empty()) fail(path, lineno, "key '" + key + "' outside any table");

        TomlValue tv;
        tv.line = lineno;
        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"')
                fail(path, lineno, "unterminated string for key '" + key + "'");
            tv.kind = TomlValue::Kind::String;
            tv.str = value.substr(1, value.size() - 2);
        } else if (value == "true" || value == "false") {
            tv.kind = TomlValue::Kind::Boolean;
            tv.boolean = (value == "true");
        } else {
            char* end = nullptr;
            tv.number = std::strtod(value.c_str(), &end);
            if (end != value.c_str() + value.size())
                fail(path, lineno, "malformed value for key '" + key + "'");
            tv.kind = TomlValue::Kind::Number;
        }
        doc[table][key] = tv;
    }
    return doc;
}

class ProblemReader {
public:
    ProblemReader(const std::filesystem::path& path, const TomlDoc& doc)
        : path_(path), doc_(doc) {}

    double number(const std::string& table, const std::string& key) const {
        const TomlValue& v = require(table, key);
        if (v.kind != TomlValue::Kind::Number)
            fail(path_, v.line, "key '" + key + "' must be a number");
        return v.number;
    }

    std::optional<double> opt_number(const std::string& table, const std::string& key) const {
        const TomlValue* v = find(table, key);
        if (!v) return std::nullopt;
        if (v->kind != TomlValue::Kind::Number)
            fail(path_, v->line, "key '" + key + "' must be a number");
        return v->number;
    }

    std::string text(const std::string& table, const std::string& key) const {
        const TomlValue& v = require(table, key);
        if (v.kind != TomlValue::Kind::String)
            fail(path_, v.line, "key '" + key + "' must be a string");
        return v.str;
    }

    ExprPtr opt_expr(const std::string& table, const std::string& key,
                     const std::set<std::string>& vars) const {
        const TomlValue* v = find(table, key);
        if (!v) return nullptr;
        if (v->kind != TomlValue::Kind::String)
            fail(path_, v->line, "key '" + key + "' must be a string expression");
        return parse_expr(v->str, vars, key, v->line);
    }

    ExprPtr parse_expr(const std::string& src, const std::set<std::string>& vars,
                       const std::string& key, int line) const {
        try {
            return parse(src, vars);
        } catch (const ParseError& err) {
            fail(path_, line, std::string("in ") + key + ": " + err.what());
        }
    }

    const TomlValue* find(const std::string& table, const std::string& key) const {
        auto t = doc_.find(table);
        if (t == doc_.end()) return nullptr;
        auto k = t->second.find(key);
        if (k == t->second.end()) return nullptr;
        return &k->second;
    }

    const TomlValue& require(const std::string& table, const std::string& key) const {
        const TomlValue* v = find(table, key);
        if (!v)
            throw ValidationError(path_.string() + ": missing required key '" + key +
                                  "' in [" + table + "]");
        return *v;
    }

    const std::filesystem::path& path() const { return path_; }

private:
    const std::filesystem::path& path_;
    const TomlDoc& doc_;
};

}  // namespace

LoadedProblem load_problem(const std::filesystem::path& path) {
    const TomlDoc doc = parse_toml(path);
    const ProblemReader r(path, doc);

    if (!doc.count("problem"))
        throw ValidationError(path.string() + ": missing [problem] table");

    OperatorParams params(r.number("problem", "alpha"), r.number("problem", "rho"));
    Interval interval(r.number("problem", "a"), r.number("problem", "b"));
    const TomlValue& fval = r.require("problem", "f");
    ExprPtr f = r.parse_expr(r.text("problem", "f"), {"t", "y"}, "f", fval.line);

    HypothesisData hyp;
    hyp.lipschitz_L = r.opt_number("hypotheses", "lipschitz");
    hyp.mu = r.opt_number("hypotheses", "mu");
    hyp.eta = r.opt_expr("hypotheses", "eta", {"t"});
    hyp.psi = r.opt_expr("hypotheses", "psi", {"u"});
    hyp.q = r.opt_expr("hypotheses", "q", {"t"});
    hyp.delta_fn = r.opt_expr("hypotheses", "delta", {"t"});
    if (hyp.lipschitz_L && *hyp.lipschitz_L < 0.0)
        throw ValidationError(path.string() + ": lipschitz must be >= 0");

    SolveConfig cfg;
    cfg.resolution.n = static_cast<std::size_t>(r.opt_number("solver", "n").value_or(1024));
    cfg.resolution.grading = r.opt_number("solver", "grading").value_or(1.0);
    cfg.tol = r.opt_number("solver", "tol").value_or(1e-10);
    cfg.max_iter = static_cast<std::size_t>(r.opt_number("solver", "max_iter").value_or(200));
    cfg.validate();

    ExprPtr y_exact = r.opt_expr("manufactured", "y_exact", {"t"});

    return LoadedProblem{ProblemSpec(params, interval, std::move(f), std::move(hyp)),
                         cfg, std::move(y_exact)};
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

nlohmann::json verdict_json(const TheoremVerdict& tv) {
    return {{"verdict", verdict_name(tv.verdict)}, {"reason", tv.reason}};
}

}  // namespace

nlohmann::json report_json(const ConditionReport& conditions, const SolveReport* solve,
                           const std::string& solution_path) {
    nlohmann::json j;
    j["n_constant"] = conditions.banach_n;
    j["lambda_constant"] = opt_json(conditions.lambda);
    j["ln_product"] = opt_json(conditions.ln_product);
    j["mu"] = opt_json(conditions.mu);
    j["m_found"] = opt_json(conditions.m_found);
    j["r_ball"] = opt_json(conditions.r_ball);
    j["r0_ball"] = opt_json(conditions.r0_ball);
    j["verdicts"] = {{"th1", verdict_json(conditions.th1)},
                     {"th2", verdict_json(conditions.th2)},
                     {"th3", verdict_json(conditions.th3)}};
    if (solve) {
        j["iterations"] = solve->iterations;
        j["residual_history"] = solve->residual_history;
        j["contraction_estimates"] = solve->contraction_estimates;
        j["anti_periodic_residual"] = solve->anti_periodic_residual;
        j["converged"] = solve->converged;
        j["warnings"] = solve->warnings;
        j["solution_path"] = solution_path;
    } else {
        j["iterations"] = nullptr;
        j["residual_history"] = nullptr;
        j["contraction_estimates"] = nullptr;
        j["anti_periodic_residual"] = nullptr;
        j["converged"] = nullptr;
        j["warnings"] = nlohmann::json::array();
        j["solution_path"] = nullptr;
    }
    return j;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out << content;
        if (!out) throw ValidationError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string solution_csv(const DiscreteFunction& y) {
    std::string out = "t,y\n";
    const auto& t = y.grid().t_nodes();
    char buf[80];
    for (std::size_t j = 0; j < t.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t[j], y.value_at_node(j));
        out += buf;
    }
    return out;
}

std::vector<std::pair<double, double>> read_solution_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open csv: " + path.string());
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::getline(in, line);  // header
    if (trim(line) != "t,y")
        throw ValidationError("csv header must be 't,y' in " + path.string());
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError("malformed csv row in " + path.string());
        rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return rows;
}

}  // namespace katufrac
