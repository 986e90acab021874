#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "biset/jet.hpp"

namespace biset {

enum class Variable { X, Xi, Eta };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Exp, Ln, Sin, Cos, Tanh, Sqrt };

/// Node of a parsed metric expression. Nodes are immutable and shared.
struct ExprNode {
    enum class Kind { Number, Var, Neg, Binary, Call };

    Kind kind = Kind::Number;
    double number = 0.0;
    Variable var = Variable::X;
    BinaryOp op = BinaryOp::Add;
    Function func = Function::Exp;
    std::shared_ptr<const ExprNode> lhs;  // operand of Neg/Call, left of Binary
    std::shared_ptr<const ExprNode> rhs;
    std::size_t offset = 0;  // byte offset of the node in the source
};

/// Abstract syntax tree of a metric function f(x, xi, eta).
///
/// Grammar, lowest precedence first:
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?          (right-associative)
///     primary := number | variable | func '(' expr ')' | '(' expr ')'
///
/// Variables are `x`, `xi`, `eta`; `ξ` and `η` are accepted as aliases.
class MetricExpr {
public:
    explicit MetricExpr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

    const ExprNode& root() const { return *root_; }

    double operator()(double x, double xi, double eta) const;
    Jet operator()(const Jet& x, const Jet& xi, const Jet& eta) const;

private:
    std::shared_ptr<const ExprNode> root_;
};

/// Throws ParseError or UnknownIdentifierError.
MetricExpr parse_metric_expr(std::string_view src);

/// Throws DomainError naming the offending sub-expression.
double eval_expr(const MetricExpr& e, double x, double xi, double eta);

/// Fully parenthesized rendering that parses back to the same tree.
std::string to_string(const MetricExpr& e);
std::string to_string(const ExprNode& n);

bool structurally_equal(const ExprNode& a, const ExprNode& b);

}  // namespace biset
