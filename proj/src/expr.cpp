#include "biset/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <type_traits>

#include "biset/error.hpp"

namespace biset {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

struct NamedFunction {
    std::string_view name;
    Function func;
};

constexpr std::array<NamedFunction, 6> kFunctions{{
    {"exp", Function::Exp},
    {"ln", Function::Ln},
    {"sin", Function::Sin},
    {"cos", Function::Cos},
    {"tanh", Function::Tanh},
    {"sqrt", Function::Sqrt},
}};

std::string_view function_name(Function f) {
    for (const auto& nf : kFunctions) {
        if (nf.func == f) return nf.name;
    }
    return "?";
}

std::optional<Variable> variable_from_name(std::string_view name) {
    if (name == "x") return Variable::X;
    if (name == "xi" || name == "\xCE\xBE") return Variable::Xi;    // ξ
    if (name == "eta" || name == "\xCE\xB7") return Variable::Eta;  // η
    return std::nullopt;
}

NodePtr make_number(double v, std::size_t offset) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Number;
    n->number = v;
    n->offset = offset;
    return n;
}

NodePtr make_unary(ExprNode::Kind kind, NodePtr operand, std::size_t offset,
                   Function func = Function::Exp) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->func = func;
    n->lhs = std::move(operand);
    n->offset = offset;
    return n;
}

NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs, std::size_t offset) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Binary;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->offset = offset;
    return n;
}

bool is_ident_start(unsigned char c) {
    return std::isalpha(c) != 0 || c == '_' || c >= 0x80;
}
bool is_ident_char(unsigned char c) { return is_ident_start(c) || std::isdigit(c) != 0; }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        auto root = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("expected operator or end of input");
        return root;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = pos_ < src_.size() ? "'" + std::string(1, src_[pos_]) + "'"
                                               : std::string("end of input");
        throw ParseError(pos_, expected + ", found " + found);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('+')) {
                lhs = make_binary(BinaryOp::Add, lhs, term(), at);
            } else if (accept('-')) {
                lhs = make_binary(BinaryOp::Sub, lhs, term(), at);
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        auto lhs = unary();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('*')) {
                lhs = make_binary(BinaryOp::Mul, lhs, unary(), at);
            } else if (accept('/')) {
                lhs = make_binary(BinaryOp::Div, lhs, unary(), at);
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        skip_ws();
        const std::size_t at = pos_;
        if (accept('-')) return make_unary(ExprNode::Kind::Neg, unary(), at);
        return power();
    }

    NodePtr power() {
        auto base = primary();
        skip_ws();
        const std::size_t at = pos_;
        if (accept('^')) return make_binary(BinaryOp::Pow, base, unary(), at);
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("expected number, variable, function or '('");
        const std::size_t at = pos_;
        const auto c = static_cast<unsigned char>(src_[pos_]);
        if (c == '(') {
            ++pos_;
            auto inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(c) != 0 || c == '.') return number();
        if (is_ident_start(c)) {
            while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
            }
            const auto name = src_.substr(at, pos_ - at);
            if (auto v = variable_from_name(name)) {
                auto n = std::make_shared<ExprNode>();
                n->kind = ExprNode::Kind::Var;
                n->var = *v;
                n->offset = at;
                return n;
            }
            for (const auto& nf : kFunctions) {
                if (nf.name == name) {
                    if (!accept('(')) fail("expected '(' after function '" + std::string(name) + "'");
                    auto arg = expr();
                    if (!accept(')')) fail("expected ')'");
                    return make_unary(ExprNode::Kind::Call, arg, at, nf.func);
                }
            }
            throw UnknownIdentifierError(at, std::string(name));
        }
        fail("expected number, variable, function or '('");
    }

    NodePtr number() {
        const std::size_t at = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) fail("expected digits");
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail("expected exponent digits");
        }
        double v = 0.0;
        const char* first = src_.data() + at;
        const char* last = src_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            pos_ = at;
            fail("expected finite number literal");
        }
        return make_number(v, at);
    }
};

template <class T>
double value_of(const T& v) {
    if constexpr (std::is_same_v<T, Jet>) {
        return v.value;
    } else {
        return v;
    }
}

[[noreturn]] void domain_fail(const ExprNode& n, const std::string& what) {
    throw DomainError(what + " in '" + to_string(n) + "' at offset " + std::to_string(n.offset));
}

template <class T>
T evaluate(const ExprNode& n, const T& x, const T& xi, const T& eta) {
    using std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt, std::tanh;
    switch (n.kind) {
        case ExprNode::Kind::Number:
            return T(n.number);
        case ExprNode::Kind::Var:
            return n.var == Variable::X ? x : n.var == Variable::Xi ? xi : eta;
        case ExprNode::Kind::Neg:
            return -evaluate(*n.lhs, x, xi, eta);
        case ExprNode::Kind::Call: {
            const T a = evaluate(*n.lhs, x, xi, eta);
            const double av = value_of(a);
            switch (n.func) {
                case Function::Exp: return exp(a);
                case Function::Ln:
                    if (!(av > 0.0)) domain_fail(n, "ln of non-positive value");
                    return log(a);
                case Function::Sin: return sin(a);
                case Function::Cos: return cos(a);
                case Function::Tanh: return tanh(a);
                case Function::Sqrt:
                    if (av < 0.0) domain_fail(n, "sqrt of negative value");
                    return sqrt(a);
            }
            break;
        }
        case ExprNode::Kind::Binary: {
            const T a = evaluate(*n.lhs, x, xi, eta);
            const T b = evaluate(*n.rhs, x, xi, eta);
            switch (n.op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (value_of(b) == 0.0) domain_fail(n, "division by zero");
                    return a / b;
                case BinaryOp::Pow: {
                    const double av = value_of(a);
                    const double bv = value_of(b);
                    const bool integral = bv == std::nearbyint(bv);
                    if (av < 0.0 && !integral) {
                        domain_fail(n, "non-integer power of negative base");
                    }
                    if (av == 0.0 && bv < 0.0) domain_fail(n, "negative power of zero");
                    if constexpr (std::is_same_v<T, Jet>) {
                        if (av <= 0.0 && !b.is_constant()) {
                            domain_fail(n, "variable exponent of non-positive base");
                        }
                    }
                    return pow(a, b);
                }
            }
            break;
        }
    }
    domain_fail(n, "malformed node");
}

void render(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case ExprNode::Kind::Number: {
            std::array<char, 32> buf{};
            std::snprintf(buf.data(), buf.size(), "%.17g", n.number);
            out += buf.data();
            return;
        }
        case ExprNode::Kind::Var:
            out += n.var == Variable::X ? "x" : n.var == Variable::Xi ? "xi" : "eta";
            return;
        case ExprNode::Kind::Neg:
            out += "(-";
            render(*n.lhs, out);
            out += ")";
            return;
        case ExprNode::Kind::Call:
            out += function_name(n.func);
            out += "(";
            render(*n.lhs, out);
            out += ")";
            return;
        case ExprNode::Kind::Binary: {
            static constexpr std::array<char, 5> ops{'+', '-', '*', '/', '^'};
            out += "(";
            render(*n.lhs, out);
            out += ' ';
            out += ops[static_cast<std::size_t>(n.op)];
            out += ' ';
            render(*n.rhs, out);
            out += ")";
            return;
        }
    }
}

}  // namespace

MetricExpr parse_metric_expr(std::string_view src) { return MetricExpr(Parser(src).parse()); }

double MetricExpr::operator()(double x, double xi, double eta) const {
    return evaluate<double>(*root_, x, xi, eta);
}

Jet MetricExpr::operator()(const Jet& x, const Jet& xi, const Jet& eta) const {
    return evaluate<Jet>(*root_, x, xi, eta);
}

double eval_expr(const MetricExpr& e, double x, double xi, double eta) { return e(x, xi, eta); }

std::string to_string(const ExprNode& n) {
    std::string out;
    render(n, out);
    return out;
}

std::string to_string(const MetricExpr& e) { return to_string(e.root()); }

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprNode::Kind::Number: return a.number == b.number;
        case ExprNode::Kind::Var: return a.var == b.var;
        case ExprNode::Kind::Neg: return structurally_equal(*a.lhs, *b.lhs);
        case ExprNode::Kind::Call: return a.func == b.func && structurally_equal(*a.lhs, *b.lhs);
        case ExprNode::Kind::Binary:
            return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) &&
                   structurally_equal(*a.rhs, *b.rhs);
    }
    return false;
}

}  // namespace biset
