#ifndef KATUFRAC_EXPR_HPP
#define KATUFRAC_EXPR_HPP

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace katufrac {

// Arithmetic mini-language used for problem functions in config files.
// Trees are immutable after construction; eval is a pure function.

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

using Bindings = std::map<std::string, double>;

// Runtime domain violations (ln of non-positive, division by zero, ...)
// produce NaN plus a message here, never a silent NaN.
struct Warnings {
    std::vector<std::string> messages;

    void add(std::string msg) { messages.push_back(std::move(msg)); }
    bool empty() const { return messages.empty(); }
};

struct ParseError : std::runtime_error {
    std::size_t position;  // byte offset into the source
    ParseError(std::size_t pos, const std::string& msg)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
          position(pos) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DerivativeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExprKind { Constant, Variable, Negate, Binary, Call };

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

enum class Func { Sin, Cos, Exp, Ln, Sqrt, Abs, Pow, Gamma, Sign };

class Expr {
public:
    ExprKind kind;
    double value = 0.0;        // Constant
    std::string name;          // Variable
    BinaryOp bin_op = BinaryOp::Add;
    Func func = Func::Sin;
    std::vector<ExprPtr> children;

    static ExprPtr constant(double v);
    static ExprPtr variable(std::string name);
    static ExprPtr negate(ExprPtr child);
    static ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
    static ExprPtr call(Func f, std::vector<ExprPtr> args);
};

// Parses standard infix syntax: ^ (right-assoc) > unary minus > *,/ > +,-,
// parentheses, function calls name(arg,...), named constants pi and e.
// Variables must come from allowed_vars; anything else is a ParseError.
ExprPtr parse(std::string_view source, const std::set<std::string>& allowed_vars);

// IEEE double evaluation. Unbound variables throw EvalError; domain
// violations yield NaN with a message appended to *warnings (when given).
double eval(const ExprPtr& e, const Bindings& b, Warnings* warnings = nullptr);

// Exact symbolic derivative, unsimplified beyond constant folding.
// d/dx abs(f) is left as sign(f)*f'; gamma is not differentiable here.
ExprPtr differentiate(const ExprPtr& e, const std::string& var);

std::string to_string(const ExprPtr& e);

bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

std::set<std::string> variables(const ExprPtr& e);

}  // namespace katufrac

#endif
