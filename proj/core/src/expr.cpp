#include "gbcv/expr.hpp"

#include "gbcv/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

namespace gbcv {

ParseError::ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
    : InputError(std::move(message)), offset_(offset), expected_(std::move(expected)) {}

namespace {

using Op = Expr::Op;
using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

struct FunctionInfo {
    std::string_view name;
    Op op;
    int arity;
};

constexpr std::array<FunctionInfo, 11> kFunctions{{
    {"sin", Op::Sin, 1},   {"cos", Op::Cos, 1},   {"sinh", Op::Sinh, 1}, {"cosh", Op::Cosh, 1},
    {"exp", Op::Exp, 1},   {"log", Op::Log, 1},   {"sqrt", Op::Sqrt, 1}, {"atan", Op::Atan, 1},
    {"abs", Op::Abs, 1},   {"atan2", Op::Atan2, 2}, {"pow", Op::Pow, 2},
}};

const FunctionInfo* find_function(std::string_view name) {
    for (const auto& f : kFunctions)
        if (f.name == name) return &f;
    return nullptr;
}

std::string_view function_name(Op op) {
    for (const auto& f : kFunctions)
        if (f.op == op) return f.name;
    return "?";
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

// Smart constructors with constant folding and the 0/1 identities. Anything
// beyond that is deliberately left alone.
class ExprBuilder {
public:
    static Expr make(NodePtr root, Expr::VarList vars) { return Expr(std::move(root), std::move(vars)); }

    static NodePtr constant(double v) {
        auto n = std::make_shared<Node>();
        n->op = Op::Const;
        n->value = v;
        return n;
    }
    static NodePtr var(std::size_t i) {
        auto n = std::make_shared<Node>();
        n->op = Op::Var;
        n->var = i;
        return n;
    }
    static NodePtr raw(Op op, NodePtr a, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    static std::optional<double> cval(const NodePtr& n) {
        if (n->op == Op::Const) return n->value;
        return std::nullopt;
    }
    static bool is(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

    static NodePtr fold_or(Op op, NodePtr a, NodePtr b, double folded) {
        if (std::isfinite(folded)) return constant(folded);
        return raw(op, std::move(a), std::move(b));
    }

    static NodePtr neg(NodePtr a) {
        if (auto c = cval(a)) return constant(-*c);
        if (a->op == Op::Neg) return a->a;
        return raw(Op::Neg, std::move(a));
    }
    static NodePtr add(NodePtr a, NodePtr b) {
        auto ca = cval(a), cb = cval(b);
        if (ca && cb) return constant(*ca + *cb);
        if (is(a, 0.0)) return b;
        if (is(b, 0.0)) return a;
        if (b->op == Op::Neg) return sub(std::move(a), b->a);
        return raw(Op::Add, std::move(a), std::move(b));
    }
    static NodePtr sub(NodePtr a, NodePtr b) {
        auto ca = cval(a), cb = cval(b);
        if (ca && cb) return constant(*ca - *cb);
        if (is(b, 0.0)) return a;
        if (is(a, 0.0)) return neg(std::move(b));
        if (b->op == Op::Neg) return add(std::move(a), b->a);
        return raw(Op::Sub, std::move(a), std::move(b));
    }
    static NodePtr mul(NodePtr a, NodePtr b) {
        auto ca = cval(a), cb = cval(b);
        if (ca && cb) return constant(*ca * *cb);
        if (is(a, 0.0) || is(b, 0.0)) return constant(0.0);
        if (is(a, 1.0)) return b;
        if (is(b, 1.0)) return a;
        if (is(a, -1.0)) return neg(std::move(b));
        if (is(b, -1.0)) return neg(std::move(a));
        return raw(Op::Mul, std::move(a), std::move(b));
    }
    static NodePtr div(NodePtr a, NodePtr b) {
        auto ca = cval(a), cb = cval(b);
        if (ca && cb && *cb != 0.0) return fold_or(Op::Div, a, b, *ca / *cb);
        if (is(a, 0.0) && !is(b, 0.0)) return constant(0.0);
        if (is(b, 1.0)) return a;
        return raw(Op::Div, std::move(a), std::move(b));
    }
    static NodePtr pow(NodePtr a, NodePtr b) {
        auto ca = cval(a), cb = cval(b);
        if (ca && cb) return fold_or(Op::Pow, a, b, std::pow(*ca, *cb));
        if (is(b, 0.0)) return constant(1.0);
        if (is(b, 1.0)) return a;
        return raw(Op::Pow, std::move(a), std::move(b));
    }
    static NodePtr unary(Op op, NodePtr a) {
        if (auto c = cval(a)) {
            double v = eval_unary(op, *c);
            if (std::isfinite(v) && domain_ok(op, *c)) return constant(v);
        }
        return raw(op, std::move(a));
    }
    static NodePtr atan2(NodePtr y, NodePtr x) {
        auto cy = cval(y), cx = cval(x);
        if (cy && cx && !(*cy == 0.0 && *cx == 0.0)) return constant(std::atan2(*cy, *cx));
        return raw(Op::Atan2, std::move(y), std::move(x));
    }
    static NodePtr binary(Op op, NodePtr a, NodePtr b) {
        switch (op) {
        case Op::Add: return add(std::move(a), std::move(b));
        case Op::Sub: return sub(std::move(a), std::move(b));
        case Op::Mul: return mul(std::move(a), std::move(b));
        case Op::Div: return div(std::move(a), std::move(b));
        case Op::Pow: return pow(std::move(a), std::move(b));
        case Op::Atan2: return atan2(std::move(a), std::move(b));
        default: return raw(op, std::move(a), std::move(b));
        }
    }

    static bool domain_ok(Op op, double x) {
        switch (op) {
        case Op::Log: return x > 0.0;
        case Op::Sqrt: return x >= 0.0;
        default: return true;
        }
    }

    static double eval_unary(Op op, double x) {
        switch (op) {
        case Op::Neg: return -x;
        case Op::Sin: return std::sin(x);
        case Op::Cos: return std::cos(x);
        case Op::Sinh: return std::sinh(x);
        case Op::Cosh: return std::cosh(x);
        case Op::Exp: return std::exp(x);
        case Op::Log: return std::log(x);
        case Op::Sqrt: return std::sqrt(x);
        case Op::Atan: return std::atan(x);
        case Op::Abs: return std::abs(x);
        default: return std::nan("");
        }
    }

    static NodePtr derive(const NodePtr& n, std::size_t v) {
        switch (n->op) {
        case Op::Const: return constant(0.0);
        case Op::Var: return constant(n->var == v ? 1.0 : 0.0);
        case Op::Neg: return neg(derive(n->a, v));
        case Op::Add: return add(derive(n->a, v), derive(n->b, v));
        case Op::Sub: return sub(derive(n->a, v), derive(n->b, v));
        case Op::Mul:
            return add(mul(derive(n->a, v), n->b), mul(n->a, derive(n->b, v)));
        case Op::Div: {
            auto da = derive(n->a, v);
            auto db = derive(n->b, v);
            if (is(db, 0.0)) return div(da, n->b);
            return sub(div(da, n->b), div(mul(n->a, db), mul(n->b, n->b)));
        }
        case Op::Pow: {
            auto da = derive(n->a, v);
            auto db = derive(n->b, v);
            if (is(db, 0.0)) {
                // d(a^c) = c a^(c-1) a'
                return mul(mul(n->b, pow(n->a, sub(n->b, constant(1.0)))), da);
            }
            auto la = unary(Op::Log, n->a);
            if (is(da, 0.0)) return mul(mul(n, la), db);
            return mul(n, add(mul(db, la), div(mul(n->b, da), n->a)));
        }
        case Op::Atan2: {
            // d atan2(y, x) = (x y' - y x') / (x^2 + y^2)
            auto dy = derive(n->a, v);
            auto dx = derive(n->b, v);
            auto num = sub(mul(n->b, dy), mul(n->a, dx));
            auto den = add(mul(n->b, n->b), mul(n->a, n->a));
            return div(num, den);
        }
        default: break;
        }
        // Unary functions: chain rule.
        auto da = derive(n->a, v);
        if (is(da, 0.0)) return constant(0.0);
        const auto& a = n->a;
        NodePtr outer;
        switch (n->op) {
        case Op::Sin: outer = unary(Op::Cos, a); break;
        case Op::Cos: outer = neg(unary(Op::Sin, a)); break;
        case Op::Sinh: outer = unary(Op::Cosh, a); break;
        case Op::Cosh: outer = unary(Op::Sinh, a); break;
        case Op::Exp: outer = n; break;
        case Op::Log: return div(da, a);
        case Op::Sqrt: return div(da, mul(constant(2.0), n));
        case Op::Atan: return div(da, add(constant(1.0), mul(a, a)));
        case Op::Abs: return mul(da, div(a, n));
        default: outer = constant(0.0); break;
        }
        return mul(outer, da);
    }
};

namespace {

// ---------------------------------------------------------------------------
// Evaluation

struct EvalContext {
    std::span<const double> point;
    const std::vector<std::string>* vars;
};

std::string describe_point(const EvalContext& ctx) {
    std::string out = "(";
    for (std::size_t i = 0; i < ctx.point.size(); ++i) {
        if (i) out += ", ";
        if (ctx.vars && i < ctx.vars->size()) out += (*ctx.vars)[i] + "=";
        out += fmt::format("{:.17g}", ctx.point[i]);
    }
    return out + ")";
}

std::string print_node(const Node& n, const std::vector<std::string>& vars);

[[noreturn]] void domain_fail(const Node& n, const EvalContext& ctx, std::string_view what) {
    throw DomainError(fmt::format("{} in '{}' at {}", what, print_node(n, *ctx.vars), describe_point(ctx)));
}

double eval_node(const Node& n, const EvalContext& ctx) {
    switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return ctx.point[n.var];
    case Op::Add: return eval_node(*n.a, ctx) + eval_node(*n.b, ctx);
    case Op::Sub: return eval_node(*n.a, ctx) - eval_node(*n.b, ctx);
    case Op::Mul: {
        double r = eval_node(*n.a, ctx) * eval_node(*n.b, ctx);
        if (!std::isfinite(r)) domain_fail(n, ctx, "overflow");
        return r;
    }
    case Op::Div: {
        double num = eval_node(*n.a, ctx);
        double den = eval_node(*n.b, ctx);
        if (den == 0.0) domain_fail(n, ctx, "division by zero");
        double r = num / den;
        if (!std::isfinite(r)) domain_fail(n, ctx, "overflow");
        return r;
    }
    case Op::Pow: {
        double base = eval_node(*n.a, ctx);
        double ex = eval_node(*n.b, ctx);
        if (base < 0.0 && ex != std::trunc(ex)) domain_fail(n, ctx, "negative base with non-integer exponent");
        if (base == 0.0 && ex < 0.0) domain_fail(n, ctx, "zero to a negative power");
        double r = std::pow(base, ex);
        if (!std::isfinite(r)) domain_fail(n, ctx, "overflow");
        return r;
    }
    case Op::Atan2: {
        double y = eval_node(*n.a, ctx);
        double x = eval_node(*n.b, ctx);
        return std::atan2(y, x);
    }
    case Op::Log: {
        double a = eval_node(*n.a, ctx);
        if (!(a > 0.0)) domain_fail(n, ctx, "log of non-positive value");
        return std::log(a);
    }
    case Op::Sqrt: {
        double a = eval_node(*n.a, ctx);
        if (a < 0.0) domain_fail(n, ctx, "sqrt of negative value");
        return std::sqrt(a);
    }
    default: {
        double r = ExprBuilder::eval_unary(n.op, eval_node(*n.a, ctx));
        if (!std::isfinite(r)) domain_fail(n, ctx, "overflow");
        return r;
    }
    }
}

// ---------------------------------------------------------------------------
// Printing

int precedence(const Node& n) {
    switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return n.value < 0.0 ? 3 : 5;
    default: return 5;
    }
}

std::string print_node(const Node& n, const std::vector<std::string>& vars) {
    auto wrap = [&](const Node& child, bool parens) {
        auto s = print_node(child, vars);
        return parens ? "(" + s + ")" : s;
    };
    switch (n.op) {
    case Op::Const: return n.value < 0.0 ? "-" + format_number(-n.value) : format_number(n.value);
    case Op::Var: return vars[n.var];
    case Op::Neg: return "-" + wrap(*n.a, precedence(*n.a) < 3);
    case Op::Add: return wrap(*n.a, false) + " + " + wrap(*n.b, precedence(*n.b) <= 1);
    case Op::Sub: return wrap(*n.a, false) + " - " + wrap(*n.b, precedence(*n.b) <= 1);
    case Op::Mul: return wrap(*n.a, precedence(*n.a) < 2) + "*" + wrap(*n.b, precedence(*n.b) <= 2);
    case Op::Div: return wrap(*n.a, precedence(*n.a) < 2) + "/" + wrap(*n.b, precedence(*n.b) <= 2);
    case Op::Pow: return wrap(*n.a, precedence(*n.a) < 4) + "^" + wrap(*n.b, precedence(*n.b) < 5);
    case Op::Atan2: return "atan2(" + print_node(*n.a, vars) + ", " + print_node(*n.b, vars) + ")";
    default: return std::string(function_name(n.op)) + "(" + print_node(*n.a, vars) + ")";
    }
}

// ---------------------------------------------------------------------------
// Parsing

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number{0.0};
};

class Parser {
public:
    Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) { advance(); }

    NodePtr parse_all() {
        auto root = parse_sum();
        if (tok_.kind != Tok::End) {
            fail("unexpected token '" + std::string(tok_.text) + "'", {"+", "-", "*", "/", "^", "end of input"});
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) {
        std::string exp;
        for (std::size_t i = 0; i < expected.size(); ++i) exp += (i ? ", " : "") + expected[i];
        throw ParseError(fmt::format("syntax error at offset {}: {}{}", tok_.offset, what,
                                     exp.empty() ? "" : " (expected one of: " + exp + ")"),
                         tok_.offset, std::move(expected));
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_.offset = pos_;
        if (pos_ >= src_.size()) {
            tok_ = {Tok::End, pos_, "end of input"};
            return;
        }
        char c = src_[pos_];
        auto single = [&](Tok k) {
            tok_ = {k, pos_, src_.substr(pos_, 1)};
            ++pos_;
        };
        switch (c) {
        case '+': return single(Tok::Plus);
        case '-': return single(Tok::Minus);
        case '*': return single(Tok::Star);
        case '/': return single(Tok::Slash);
        case '^': return single(Tok::Caret);
        case '(': return single(Tok::LParen);
        case ')': return single(Tok::RParen);
        case ',': return single(Tok::Comma);
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            auto [end, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
            if (ec != std::errc() || !std::isfinite(v)) {
                tok_ = {Tok::End, pos_, src_.substr(pos_, 1)};
                fail("malformed number", {"number"});
            }
            std::size_t len = static_cast<std::size_t>(end - (src_.data() + pos_));
            tok_ = {Tok::Number, pos_, src_.substr(pos_, len), v};
            pos_ += len;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_ = {Tok::Ident, start, src_.substr(start, pos_ - start)};
            return;
        }
        tok_ = {Tok::End, pos_, src_.substr(pos_, 1)};
        fail(fmt::format("unexpected character '{}'", c), {"number", "identifier", "(", "-"});
    }

    void expect(Tok k, std::string_view spelling) {
        if (tok_.kind != k) {
            fail("unexpected '" + std::string(tok_.text) + "'", {std::string(spelling)});
        }
        advance();
    }

    NodePtr parse_sum() {
        auto lhs = parse_product();
        while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
            Op op = tok_.kind == Tok::Plus ? Op::Add : Op::Sub;
            advance();
            lhs = ExprBuilder::raw(op, lhs, parse_product());
        }
        return lhs;
    }

    NodePtr parse_product() {
        auto lhs = parse_unary();
        while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
            Op op = tok_.kind == Tok::Star ? Op::Mul : Op::Div;
            advance();
            lhs = ExprBuilder::raw(op, lhs, parse_unary());
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (tok_.kind == Tok::Minus) {
            advance();
            return ExprBuilder::raw(Op::Neg, parse_unary());
        }
        if (tok_.kind == Tok::Plus) {
            advance();
            return parse_unary();
        }
        return parse_power();
    }

    NodePtr parse_power() {
        auto lhs = parse_primary();
        while (tok_.kind == Tok::Caret) {
            advance();
            // A signed primary is accepted as exponent so that "2^-1" parses.
            bool negate = false;
            if (tok_.kind == Tok::Minus || tok_.kind == Tok::Plus) {
                negate = tok_.kind == Tok::Minus;
                advance();
            }
            auto rhs = parse_primary();
            if (negate) rhs = ExprBuilder::raw(Op::Neg, rhs);
            lhs = ExprBuilder::raw(Op::Pow, lhs, rhs);
        }
        return lhs;
    }

    NodePtr parse_primary() {
        switch (tok_.kind) {
        case Tok::Number: {
            auto n = ExprBuilder::constant(tok_.number);
            advance();
            return n;
        }
        case Tok::LParen: {
            advance();
            auto inner = parse_sum();
            expect(Tok::RParen, ")");
            return inner;
        }
        case Tok::Ident: return parse_identifier();
        default: fail("unexpected '" + std::string(tok_.text) + "'", {"number", "identifier", "("});
        }
    }

    NodePtr parse_identifier() {
        Token id = tok_;
        advance();
        if (tok_.kind == Tok::LParen) {
            const FunctionInfo* fn = find_function(id.text);
            if (!fn) {
                throw ParseError(fmt::format("unknown function '{}' at offset {}", id.text, id.offset), id.offset,
                                 {"function name"});
            }
            advance();
            std::vector<NodePtr> args;
            if (tok_.kind != Tok::RParen) {
                args.push_back(parse_sum());
                while (tok_.kind == Tok::Comma) {
                    advance();
                    args.push_back(parse_sum());
                }
            }
            expect(Tok::RParen, ")");
            if (static_cast<int>(args.size()) != fn->arity) {
                throw ParseError(fmt::format("function '{}' at offset {} takes {} argument(s), got {}", fn->name,
                                             id.offset, fn->arity, args.size()),
                                 id.offset);
            }
            if (fn->arity == 1) return ExprBuilder::raw(fn->op, args[0]);
            return ExprBuilder::raw(fn->op, args[0], args[1]);
        }
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == id.text) return ExprBuilder::var(i);
        if (id.text == "pi") return ExprBuilder::constant(std::numbers::pi);
        if (id.text == "e") return ExprBuilder::constant(std::numbers::e);
        if (find_function(id.text)) {
            throw ParseError(fmt::format("function '{}' at offset {} requires an argument list", id.text, id.offset),
                             id.offset + id.text.size(), {"("});
        }
        std::vector<std::string> expected(vars_.begin(), vars_.end());
        expected.emplace_back("pi");
        expected.emplace_back("e");
        throw ParseError(fmt::format("unknown identifier '{}' at offset {}", id.text, id.offset), id.offset,
                         std::move(expected));
    }

    std::string_view src_;
    const std::vector<std::string>& vars_;
    std::size_t pos_{0};
    Token tok_{Tok::End, 0, {}};
};

std::size_t count_nodes(const Node& n) {
    std::size_t c = 1;
    if (n.a) c += count_nodes(*n.a);
    if (n.b) c += count_nodes(*n.b);
    return c;
}

bool uses_var(const Node& n, std::size_t v) {
    if (n.op == Op::Var) return n.var == v;
    return (n.a && uses_var(*n.a, v)) || (n.b && uses_var(*n.b, v));
}

Expr::VarList make_vars(std::vector<std::string> v) {
    return std::make_shared<const std::vector<std::string>>(std::move(v));
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr

Expr::Expr() : root_(ExprBuilder::constant(0.0)), vars_(make_vars({"x", "y"})) {}

Expr Expr::constant(double value, std::vector<std::string> variables) {
    if (!std::isfinite(value)) throw InputError("expression constants must be finite");
    return Expr(ExprBuilder::constant(value), make_vars(std::move(variables)));
}

Expr Expr::variable(std::string_view name, std::vector<std::string> variables) {
    auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) throw InputError(fmt::format("'{}' is not a declared variable", name));
    auto idx = static_cast<std::size_t>(it - variables.begin());
    return Expr(ExprBuilder::var(idx), make_vars(std::move(variables)));
}

Expr Expr::lift(double c) const {
    if (!std::isfinite(c)) throw InputError("expression constants must be finite");
    return Expr(ExprBuilder::constant(c), vars_);
}

std::optional<std::size_t> Expr::variable_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars_->size(); ++i)
        if ((*vars_)[i] == name) return i;
    return std::nullopt;
}

double Expr::eval(std::span<const double> point) const {
    if (point.size() < vars_->size()) {
        throw InputError(fmt::format("expression over {} variable(s) evaluated with {} value(s)", vars_->size(),
                                     point.size()));
    }
    EvalContext ctx{point, vars_.get()};
    return eval_node(*root_, ctx);
}

Expr Expr::derivative(std::string_view var) const {
    auto idx = variable_index(var);
    if (!idx) throw InputError(fmt::format("cannot differentiate with respect to undeclared variable '{}'", var));
    return Expr(ExprBuilder::derive(root_, *idx), vars_);
}

std::string Expr::str() const { return print_node(*root_, *vars_); }

std::optional<double> Expr::constant_value() const { return ExprBuilder::cval(root_); }

bool Expr::depends_on(std::string_view var) const {
    auto idx = variable_index(var);
    return idx && uses_var(*root_, *idx);
}

std::size_t Expr::node_count() const { return count_nodes(*root_); }

namespace {
void require_same_vars(const Expr& a, const Expr& b) {
    if (a.variables() != b.variables()) throw InputError("cannot combine expressions over different variable sets");
}
}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
    require_same_vars(a, b);
    return Expr(ExprBuilder::add(a.root_, b.root_), a.vars_);
}
Expr operator-(const Expr& a, const Expr& b) {
    require_same_vars(a, b);
    return Expr(ExprBuilder::sub(a.root_, b.root_), a.vars_);
}
Expr operator*(const Expr& a, const Expr& b) {
    require_same_vars(a, b);
    return Expr(ExprBuilder::mul(a.root_, b.root_), a.vars_);
}
Expr operator/(const Expr& a, const Expr& b) {
    require_same_vars(a, b);
    return Expr(ExprBuilder::div(a.root_, b.root_), a.vars_);
}
Expr operator-(const Expr& a) { return Expr(ExprBuilder::neg(a.root_), a.vars_); }
Expr pow(const Expr& a, const Expr& b) {
    require_same_vars(a, b);
    return Expr(ExprBuilder::pow(a.root_, b.root_), a.vars_);
}

Expr Expr::apply(std::string_view function, const Expr& arg) {
    const FunctionInfo* fn = find_function(function);
    if (!fn || fn->arity != 1) throw InputError(fmt::format("'{}' is not a unary function", function));
    return Expr(ExprBuilder::unary(fn->op, arg.root_), arg.vars_);
}

Expr Expr::atan2(const Expr& y, const Expr& x) {
    require_same_vars(y, x);
    return Expr(ExprBuilder::atan2(y.root_, x.root_), y.vars_);
}

Expr parse(std::string_view source, std::vector<std::string> variables) {
    auto vars = make_vars(std::move(variables));
    bool blank = std::all_of(source.begin(), source.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (blank) throw ParseError("empty expression", 0, {"number", "identifier", "(", "-"});
    Parser p(source, *vars);
    return ExprBuilder::make(p.parse_all(), vars);
}

Expr differentiate(const Expr& e, std::string_view var) { return e.derivative(var); }

}  // namespace gbcv
