#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gbcv {

/// Immutable expression tree over a declared list of variables.
///
/// Grammar (highest precedence first): `^` (pow, left-associative), unary
/// minus, `*` `/`, `+` `-`. Functions: sin cos sinh cosh exp log sqrt atan
/// abs (unary), atan2 pow (binary). Named constants: pi, e.
///
/// Copies share the underlying tree; evaluation is thread-safe.
class Expr {
public:
    enum class Op : std::uint8_t {
        Const, Var, Neg,
        Sin, Cos, Sinh, Cosh, Exp, Log, Sqrt, Atan, Abs,
        Add, Sub, Mul, Div, Pow, Atan2,
    };

    struct Node;
    using NodePtr = std::shared_ptr<const Node>;
    using VarList = std::shared_ptr<const std::vector<std::string>>;

    /// Constant zero over the variables {x, y}.
    Expr();

    static Expr constant(double value, std::vector<std::string> variables = {"x", "y"});
    static Expr variable(std::string_view name, std::vector<std::string> variables = {"x", "y"});

    const std::vector<std::string>& variables() const noexcept { return *vars_; }
    std::optional<std::size_t> variable_index(std::string_view name) const;

    /// Evaluates at `point`, whose i-th entry binds the i-th declared variable.
    /// Throws DomainError on log/sqrt/pow/division domain violations or
    /// any non-finite intermediate.
    double eval(std::span<const double> point) const;
    double eval(std::initializer_list<double> point) const {
        return eval(std::span<const double>(point.begin(), point.size()));
    }

    /// Exact symbolic partial derivative, lightly simplified.
    Expr derivative(std::string_view var) const;

    /// Text that parses back to an equivalent expression.
    std::string str() const;

    std::optional<double> constant_value() const;
    bool depends_on(std::string_view var) const;
    std::size_t node_count() const;

    const Node& root() const noexcept { return *root_; }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& a, const Expr& b);

    friend Expr operator+(const Expr& a, double b) { return a + a.lift(b); }
    friend Expr operator+(double a, const Expr& b) { return b.lift(a) + b; }
    friend Expr operator-(const Expr& a, double b) { return a - a.lift(b); }
    friend Expr operator-(double a, const Expr& b) { return b.lift(a) - b; }
    friend Expr operator*(const Expr& a, double b) { return a * a.lift(b); }
    friend Expr operator*(double a, const Expr& b) { return b.lift(a) * b; }
    friend Expr operator/(const Expr& a, double b) { return a / a.lift(b); }
    friend Expr operator/(double a, const Expr& b) { return b.lift(a) / b; }

    /// Applies a named unary function ("sin", "sqrt", ...).
    static Expr apply(std::string_view function, const Expr& arg);
    static Expr atan2(const Expr& y, const Expr& x);

private:
    Expr(NodePtr root, VarList vars) : root_(std::move(root)), vars_(std::move(vars)) {}
    Expr lift(double c) const;

    NodePtr root_;
    VarList vars_;

    friend class ExprBuilder;
};

struct Expr::Node {
    Op op{Op::Const};
    double value{0.0};
    std::size_t var{0};
    NodePtr a;
    NodePtr b;
};

/// Parses `source` over the given variables. Throws ParseError carrying a
/// byte offset and the set of tokens that would have been accepted.
Expr parse(std::string_view source, std::vector<std::string> variables = {"x", "y"});

Expr differentiate(const Expr& e, std::string_view var);

}  // namespace gbcv
