#include "biset/catalog.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "biset/error.hpp"

namespace biset {

double UnivariateFn::inverse(double y) const {
    if (!inverse_) throw PreconditionError("function '" + name_ + "' has no inverse");
    return inverse_(y);
}

namespace univariate {

namespace {

/// Real root of t³ + t − y = 0 (unique, the cubic is strictly increasing).
double solve_cubic(double y) {
    const double disc = std::sqrt(y * y / 4.0 + 1.0 / 27.0);
    double t = std::cbrt(y / 2.0 + disc) + std::cbrt(y / 2.0 - disc);
    for (int i = 0; i < 3; ++i) {
        const double g = t * t * t + t - y;
        const double dg = 3.0 * t * t + 1.0;
        t -= g / dg;
    }
    return t;
}

double parse_double(std::string_view s, std::string_view whole) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw PreconditionError("bad number '" + std::string(s) + "' in catalog name '" +
                                std::string(whole) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto at = s.find(sep, start);
        parts.push_back(s.substr(start, at == std::string_view::npos ? s.npos : at - start));
        if (at == std::string_view::npos) return parts;
        start = at + 1;
    }
}

}  // namespace

UnivariateFn identity() {
    return {"id", [](const Jet& t) { return t; }, false, [](double y) { return y; }};
}

UnivariateFn cubic() {
    return {"cubic", [](const Jet& t) { return t + t * t * t; }, false, solve_cubic};
}

UnivariateFn exp() {
    return {"exp", [](const Jet& t) { return biset::exp(t); }, false, [](double y) {
                if (!(y > 0.0)) throw DomainError("inverse of exp at non-positive value");
                return std::log(y);
            }};
}

UnivariateFn neg_exp() {
    return {"neg_exp", [](const Jet& t) { return biset::exp(-t); }, false, [](double y) {
                if (!(y > 0.0)) throw DomainError("inverse of neg_exp at non-positive value");
                return -std::log(y);
            }};
}

UnivariateFn ln() {
    return {"ln",
            [](const Jet& t) {
                if (!(t.value > 0.0)) {
                    throw DomainError("ln of non-positive value " + std::to_string(t.value));
                }
                return biset::log(t);
            },
            false, [](double y) { return std::exp(y); }};
}

UnivariateFn affine(double a, double b) {
    UnivariateFn::Inverse inv;
    if (a != 0.0) inv = [a, b](double y) { return (y - b) / a; };
    return {"affine:" + std::to_string(a) + ":" + std::to_string(b),
            [a, b](const Jet& t) { return a * t + b; }, a == 0.0, std::move(inv)};
}

UnivariateFn constant(double c) {
    return {"const:" + std::to_string(c), [c](const Jet&) { return Jet(c); }, true};
}

UnivariateFn from_name(std::string_view name) {
    if (name == "id" || name == "identity") return identity();
    if (name == "cubic") return cubic();
    if (name == "exp") return exp();
    if (name == "neg_exp") return neg_exp();
    if (name == "ln") return ln();
    const auto parts = split(name, ':');
    if (parts.size() == 3 && parts[0] == "affine") {
        return affine(parse_double(parts[1], name), parse_double(parts[2], name));
    }
    if (parts.size() == 2 && parts[0] == "const") return constant(parse_double(parts[1], name));
    throw PreconditionError("unknown one-variable function '" + std::string(name) +
                            "' (expected id, cubic, exp, neg_exp, ln, affine:A:B, const:C)");
}

}  // namespace univariate

namespace bivariate {

BivariateFn xi() {
    return {"xi", [](const Jet& x, const Jet&) { return x; }};
}
BivariateFn eta() {
    return {"eta", [](const Jet&, const Jet& e) { return e; }};
}
BivariateFn exp_sum() {
    return {"exp_sum", [](const Jet& x, const Jet& e) { return biset::exp(x + e); }};
}
BivariateFn xi_sq_plus_eta() {
    return {"xi2_eta", [](const Jet& x, const Jet& e) { return x * x + e; }};
}
BivariateFn xi_eta_plus_one() {
    return {"xieta1", [](const Jet& x, const Jet& e) { return x * e + 1.0; }};
}
BivariateFn xi_plus_eta() {
    return {"xi_plus_eta", [](const Jet& x, const Jet& e) { return x + e; }};
}
BivariateFn two_xi() {
    return {"two_xi", [](const Jet& x, const Jet&) { return 2.0 * x; }};
}
BivariateFn of_eta(const UnivariateFn& g) {
    return {g.name() + "(eta)", [g](const Jet&, const Jet& e) { return g(e); }};
}

BivariateFn from_name(std::string_view name) {
    if (name == "xi") return xi();
    if (name == "eta") return eta();
    if (name == "exp_sum") return exp_sum();
    if (name == "xi2_eta") return xi_sq_plus_eta();
    if (name == "xieta1") return xi_eta_plus_one();
    if (name == "xi_plus_eta") return xi_plus_eta();
    if (name == "two_xi") return two_xi();
    throw PreconditionError("unknown two-variable function '" + std::string(name) +
                            "' (expected xi, eta, exp_sum, xi2_eta, xieta1, xi_plus_eta, two_xi)");
}

}  // namespace bivariate

}  // namespace biset
