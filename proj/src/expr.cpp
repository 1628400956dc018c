#include "katufrac/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace katufrac {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FuncInfo {
    const char* name;
    Func func;
    int arity;
};

const FuncInfo kFuncs[] = {
    {"sin", Func::Sin, 1},   {"cos", Func::Cos, 1},  {"exp", Func::Exp, 1},
    {"ln", Func::Ln, 1},     {"sqrt", Func::Sqrt, 1}, {"abs", Func::Abs, 1},
    {"pow", Func::Pow, 2},   {"gamma", Func::Gamma, 1}, {"sign", Func::Sign, 1},
};

const FuncInfo* lookup_func(const std::string& name) {
    for (const auto& f : kFuncs)
        if (name == f.name) return &f;
    return nullptr;
}

const char* func_name(Func f) {
    for (const auto& fi : kFuncs)
        if (fi.func == f) return fi.name;
    return "?";
}

}  // namespace

ExprPtr Expr::constant(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Constant;
    e->value = v;
    return e;
}

ExprPtr Expr::variable(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Variable;
    e->name = std::move(name);
    return e;
}

ExprPtr Expr::negate(ExprPtr child) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Negate;
    e->children.push_back(std::move(child));
    return e;
}

ExprPtr Expr::binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Binary;
    e->bin_op = op;
    e->children.push_back(std::move(lhs));
    e->children.push_back(std::move(rhs));
    return e;
}

ExprPtr Expr::call(Func f, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Call;
    e->func = f;
    e->children = std::move(args);
    return e;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over a hand-rolled tokenizer.

namespace {

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    TokKind kind;
    double number = 0.0;
    std::string ident;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        Token t;
        t.pos = pos_;
        if (pos_ >= src_.size()) {
            t.kind = TokKind::End;
            return t;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = src_.data() + pos_;
            char* end = nullptr;
            t.number = std::strtod(begin, &end);
            if (end == begin) throw ParseError(pos_, "malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            t.kind = TokKind::Number;
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            t.kind = TokKind::Ident;
            t.ident = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        ++pos_;
        switch (c) {
            case '+': t.kind = TokKind::Plus; return t;
            case '-': t.kind = TokKind::Minus; return t;
            case '*': t.kind = TokKind::Star; return t;
            case '/': t.kind = TokKind::Slash; return t;
            case '^': t.kind = TokKind::Caret; return t;
            case '(': t.kind = TokKind::LParen; return t;
            case ')': t.kind = TokKind::RParen; return t;
            case ',': t.kind = TokKind::Comma; return t;
        }
        throw ParseError(t.pos, std::string("unexpected character '") + c + "'");
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(std::string_view src, const std::set<std::string>& vars)
        : lexer_(src), vars_(vars) {
        advance();
    }

    ExprPtr parse_all() {
        ExprPtr e = parse_sum();
        if (cur_.kind != TokKind::End)
            throw ParseError(cur_.pos, "unexpected trailing input");
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    bool accept(TokKind k) {
        if (cur_.kind == k) {
            advance();
            return true;
        }
        return false;
    }

    void expect(TokKind k, const char* what) {
        if (cur_.kind != k) throw ParseError(cur_.pos, std::string("expected ") + what);
        advance();
    }

    ExprPtr parse_sum() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (accept(TokKind::Plus))
                lhs = Expr::binary(BinaryOp::Add, lhs, parse_term());
            else if (accept(TokKind::Minus))
                lhs = Expr::binary(BinaryOp::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        for (;;) {
            if (accept(TokKind::Star))
                lhs = Expr::binary(BinaryOp::Mul, lhs, parse_unary());
            else if (accept(TokKind::Slash))
                lhs = Expr::binary(BinaryOp::Div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    // Unary minus binds looser than ^, so -t^2 parses as -(t^2).
    // A minus in front of a literal folds into a negative constant so
    // printed trees re-parse to the same structure.
    ExprPtr parse_unary() {
        if (accept(TokKind::Minus)) {
            ExprPtr inner = parse_unary();
            if (inner->kind == ExprKind::Constant) return Expr::constant(-inner->value);
            return Expr::negate(inner);
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (accept(TokKind::Caret)) {
            // right-associative; allow a signed exponent like t^-2
            ExprPtr exponent = parse_unary();
            return Expr::binary(BinaryOp::Pow, base, exponent);
        }
        return base;
    }

    ExprPtr parse_primary() {
        if (cur_.kind == TokKind::Number) {
            double v = cur_.number;
            advance();
            return Expr::constant(v);
        }
        if (cur_.kind == TokKind::LParen) {
            advance();
            ExprPtr e = parse_sum();
            expect(TokKind::RParen, "')'");
            return e;
        }
        if (cur_.kind == TokKind::Ident) {
            std::string name = cur_.ident;
            std::size_t pos = cur_.pos;
            advance();
            if (cur_.kind == TokKind::LParen) {
                advance();
                std::vector<ExprPtr> args;
                if (cur_.kind != TokKind::RParen) {
                    args.push_back(parse_sum());
                    while (accept(TokKind::Comma)) args.push_back(parse_sum());
                }
                expect(TokKind::RParen, "')'");
                const FuncInfo* fi = lookup_func(name);
                if (!fi) throw ParseError(pos, "unknown function '" + name + "'");
                if (static_cast<int>(args.size()) != fi->arity)
                    throw ParseError(pos, "function '" + name + "' expects " +
                                              std::to_string(fi->arity) + " argument(s)");
                return Expr::call(fi->func, std::move(args));
            }
            if (name == "pi") return Expr::constant(M_PI);
            if (name == "e") return Expr::constant(M_E);
            if (!vars_.count(name))
                throw ParseError(pos, "unknown identifier '" + name + "'");
            return Expr::variable(name);
        }
        throw ParseError(cur_.pos, "expected a value");
    }

    Lexer lexer_;
    Token cur_;
    const std::set<std::string>& vars_;
};

}  // namespace

ExprPtr parse(std::string_view source, const std::set<std::string>& allowed_vars) {
    return Parser(source, allowed_vars).parse_all();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double warn_nan(Warnings* w, const std::string& msg) {
    if (w) w->add(msg);
    return kNaN;
}

double eval_pow(double base, double exponent, Warnings* w) {
    if (base == 0.0 && exponent < 0.0)
        return warn_nan(w, "0 raised to a negative power");
    if (base < 0.0 && exponent != std::floor(exponent))
        return warn_nan(w, "negative base with non-integer exponent");
    double r = std::pow(base, exponent);
    if (std::isnan(r)) return warn_nan(w, "pow produced NaN");
    return r;
}

}  // namespace

double eval(const ExprPtr& e, const Bindings& b, Warnings* warnings) {
    switch (e->kind) {
        case ExprKind::Constant:
            return e->value;
        case ExprKind::Variable: {
            auto it = b.find(e->name);
            if (it == b.end()) throw EvalError("unbound variable '" + e->name + "'");
            return it->second;
        }
        case ExprKind::Negate:
            return -eval(e->children[0], b, warnings);
        case ExprKind::Binary: {
            double lhs = eval(e->children[0], b, warnings);
            double rhs = eval(e->children[1], b, warnings);
            switch (e->bin_op) {
                case BinaryOp::Add: return lhs + rhs;
                case BinaryOp::Sub: return lhs - rhs;
                case BinaryOp::Mul: return lhs * rhs;
                case BinaryOp::Div:
                    if (rhs == 0.0) return warn_nan(warnings, "division by zero");
                    return lhs / rhs;
                case BinaryOp::Pow: return eval_pow(lhs, rhs, warnings);
            }
            return kNaN;
        }
        case ExprKind::Call: {
            double x = eval(e->children[0], b, warnings);
            switch (e->func) {
                case Func::Sin: return std::sin(x);
                case Func::Cos: return std::cos(x);
                case Func::Exp: return std::exp(x);
                case Func::Ln:
                    if (x <= 0.0) return warn_nan(warnings, "ln of non-positive argument");
                    return std::log(x);
                case Func::Sqrt:
                    if (x < 0.0) return warn_nan(warnings, "sqrt of negative argument");
                    return std::sqrt(x);
                case Func::Abs: return std::fabs(x);
                case Func::Pow: {
                    double y = eval(e->children[1], b, warnings);
                    return eval_pow(x, y, warnings);
                }
                case Func::Gamma: {
                    if (x <= 0.0 && x == std::floor(x))
                        return warn_nan(warnings, "gamma at a non-positive integer");
                    double r = std::tgamma(x);
                    if (std::isnan(r)) return warn_nan(warnings, "gamma produced NaN");
                    return r;
                }
                case Func::Sign:
                    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
            }
            return kNaN;
        }
    }
    return kNaN;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation with constant folding of literal subtrees.

namespace {

bool is_const(const ExprPtr& e, double v) {
    return e->kind == ExprKind::Constant && e->value == v;
}

bool is_constant(const ExprPtr& e) { return e->kind == ExprKind::Constant; }

ExprPtr mk_add(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (is_constant(a) && is_constant(b)) return Expr::constant(a->value + b->value);
    return Expr::binary(BinaryOp::Add, std::move(a), std::move(b));
}

ExprPtr mk_sub(ExprPtr a, ExprPtr b) {
    if (is_const(b, 0.0)) return a;
    if (is_constant(a) && is_constant(b)) return Expr::constant(a->value - b->value);
    if (is_const(a, 0.0)) return Expr::negate(std::move(b));
    return Expr::binary(BinaryOp::Sub, std::move(a), std::move(b));
}

ExprPtr mk_mul(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (is_constant(a) && is_constant(b)) return Expr::constant(a->value * b->value);
    return Expr::binary(BinaryOp::Mul, std::move(a), std::move(b));
}

ExprPtr mk_div(ExprPtr a, ExprPtr b) {
    if (is_const(a, 0.0)) return Expr::constant(0.0);
    if (is_const(b, 1.0)) return a;
    if (is_constant(a) && is_constant(b) && b->value != 0.0)
        return Expr::constant(a->value / b->value);
    return Expr::binary(BinaryOp::Div, std::move(a), std::move(b));
}

ExprPtr mk_pow(ExprPtr a, ExprPtr b) {
    if (is_const(b, 1.0)) return a;
    if (is_constant(a) && is_constant(b))
        return Expr::constant(std::pow(a->value, b->value));
    return Expr::binary(BinaryOp::Pow, std::move(a), std::move(b));
}

ExprPtr diff(const ExprPtr& e, const std::string& var);

ExprPtr diff_pow(const ExprPtr& base, const ExprPtr& exponent, const std::string& var) {
    ExprPtr db = diff(base, var);
    if (is_constant(exponent)) {
        // d(f^c) = c * f^(c-1) * f'
        double c = exponent->value;
        return mk_mul(mk_mul(Expr::constant(c), mk_pow(base, Expr::constant(c - 1.0))), db);
    }
    // d(f^g) = f^g * (g' ln f + g f'/f)
    ExprPtr dg = diff(exponent, var);
    ExprPtr lnf = Expr::call(Func::Ln, {base});
    ExprPtr term = mk_add(mk_mul(dg, lnf), mk_div(mk_mul(exponent, db), base));
    return mk_mul(mk_pow(base, exponent), term);
}

ExprPtr diff(const ExprPtr& e, const std::string& var) {
    switch (e->kind) {
        case ExprKind::Constant:
            return Expr::constant(0.0);
        case ExprKind::Variable:
            return Expr::constant(e->name == var ? 1.0 : 0.0);
        case ExprKind::Negate: {
            ExprPtr d = diff(e->children[0], var);
            if (is_constant(d)) return Expr::constant(-d->value);
            return Expr::negate(d);
        }
        case ExprKind::Binary: {
            const ExprPtr& a = e->children[0];
            const ExprPtr& b = e->children[1];
            switch (e->bin_op) {
                case BinaryOp::Add: return mk_add(diff(a, var), diff(b, var));
                case BinaryOp::Sub: return mk_sub(diff(a, var), diff(b, var));
                case BinaryOp::Mul: return mk_add(mk_mul(diff(a, var), b), mk_mul(a, diff(b, var)));
                case BinaryOp::Div:
                    // (a'b - ab') / b^2
                    return mk_div(mk_sub(mk_mul(diff(a, var), b), mk_mul(a, diff(b, var))),
                                  mk_pow(b, Expr::constant(2.0)));
                case BinaryOp::Pow: return diff_pow(a, b, var);
            }
            break;
        }
        case ExprKind::Call: {
            const ExprPtr& arg = e->children[0];
            ExprPtr da = diff(arg, var);
            switch (e->func) {
                case Func::Sin: return mk_mul(Expr::call(Func::Cos, {arg}), da);
                case Func::Cos: return mk_mul(Expr::negate(Expr::call(Func::Sin, {arg})), da);
                case Func::Exp: return mk_mul(Expr::call(Func::Exp, {arg}), da);
                case Func::Ln: return mk_div(da, arg);
                case Func::Sqrt:
                    return mk_div(da, mk_mul(Expr::constant(2.0), Expr::call(Func::Sqrt, {arg})));
                case Func::Abs: return mk_mul(Expr::call(Func::Sign, {arg}), da);
                case Func::Pow: return diff_pow(arg, e->children[1], var);
                case Func::Gamma:
                    throw DerivativeError("gamma is not differentiable in this language");
                case Func::Sign: return Expr::constant(0.0);
            }
            break;
        }
    }
    throw DerivativeError("cannot differentiate expression");
}

}  // namespace

ExprPtr differentiate(const ExprPtr& e, const std::string& var) { return diff(e, var); }

// ---------------------------------------------------------------------------
// Pretty printer. Prints with enough parentheses and 17 significant digits
// so the output reparses to a structurally identical tree.

namespace {

int precedence(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Binary:
            switch (e->bin_op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return 1;
                case BinaryOp::Mul:
                case BinaryOp::Div: return 2;
                case BinaryOp::Pow: return 4;
            }
            return 0;
        case ExprKind::Negate: return 3;
        default: return 5;
    }
}

void print(const ExprPtr& e, std::string& out);

void print_child(const ExprPtr& child, int parent_prec, bool needs_paren_on_equal,
                 std::string& out) {
    int p = precedence(child);
    bool paren = p < parent_prec || (p == parent_prec && needs_paren_on_equal);
    if (paren) out += '(';
    print(child, out);
    if (paren) out += ')';
}

void print(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
        case ExprKind::Constant: {
            char buf[40];
            if (e->value < 0) {
                // negative literals re-tokenize as unary minus; parenthesize
                std::snprintf(buf, sizeof(buf), "(%.17g)", e->value);
            } else {
                std::snprintf(buf, sizeof(buf), "%.17g", e->value);
            }
            out += buf;
            return;
        }
        case ExprKind::Variable:
            out += e->name;
            return;
        case ExprKind::Negate:
            out += '-';
            print_child(e->children[0], 3, false, out);
            return;
        case ExprKind::Binary: {
            int prec = precedence(e);
            const char* op = "?";
            bool rhs_paren_on_equal = false;
            // left-assoc operators parenthesize an equal-precedence right
            // child even when commutative, so a*(b*c) keeps its shape
            switch (e->bin_op) {
                case BinaryOp::Add: op = " + "; rhs_paren_on_equal = true; break;
                case BinaryOp::Sub: op = " - "; rhs_paren_on_equal = true; break;
                case BinaryOp::Mul: op = "*"; rhs_paren_on_equal = true; break;
                case BinaryOp::Div: op = "/"; rhs_paren_on_equal = true; break;
                case BinaryOp::Pow: op = "^"; break;
            }
            bool lhs_paren_on_equal = (e->bin_op == BinaryOp::Pow);  // right-assoc
            print_child(e->children[0], prec, lhs_paren_on_equal, out);
            out += op;
            print_child(e->children[1], prec, rhs_paren_on_equal, out);
            return;
        }
        case ExprKind::Call: {
            out += func_name(e->func);
            out += '(';
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                if (i) out += ", ";
                print(e->children[i], out);
            }
            out += ')';
            return;
        }
    }
}

}  // namespace

std::string to_string(const ExprPtr& e) {
    std::string out;
    print(e, out);
    return out;
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Constant:
            return a->value == b->value ||
                   (std::isnan(a->value) && std::isnan(b->value));
        case ExprKind::Variable:
            return a->name == b->name;
        case ExprKind::Negate:
            break;
        case ExprKind::Binary:
            if (a->bin_op != b->bin_op) return false;
            break;
        case ExprKind::Call:
            if (a->func != b->func) return false;
            break;
    }
    if (a->children.size() != b->children.size()) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!structurally_equal(a->children[i], b->children[i])) return false;
    return true;
}

namespace {
void collect_vars(const ExprPtr& e, std::set<std::string>& out) {
    if (e->kind == ExprKind::Variable) out.insert(e->name);
    for (const auto& c : e->children) collect_vars(c, out);
}
}  // namespace

std::set<std::string> variables(const ExprPtr& e) {
    std::set<std::string> out;
    collect_vars(e, out);
    return out;
}

}  // namespace katufrac
