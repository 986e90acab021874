#pragma once

#include <array>
#include <cmath>

namespace biset {

/// First-order forward-mode dual number over the three coordinates (x, ξ, η).
///
/// `grad[0..2]` hold ∂/∂x, ∂/∂ξ, ∂/∂η of `value`. Every operation applies the
/// chain rule exactly, so derivatives carry no truncation error. Domain checks
/// (ln of non-positive values etc.) belong to the caller; the raw math here
/// mirrors <cmath> and yields NaN/inf outside the domain.
struct Jet {
    double value = 0.0;
    std::array<double, 3> grad{0.0, 0.0, 0.0};

    constexpr Jet() = default;
    constexpr Jet(double v) : value(v) {}  // NOLINT: implicit lift of constants
    constexpr Jet(double v, double dx, double dxi, double deta)
        : value(v), grad{dx, dxi, deta} {}

    /// Independent variable seeded in slot `slot` (0 = x, 1 = ξ, 2 = η).
    static constexpr Jet variable(double v, int slot) {
        Jet j(v);
        j.grad[static_cast<std::size_t>(slot)] = 1.0;
        return j;
    }

    constexpr double d_x() const { return grad[0]; }
    constexpr double d_xi() const { return grad[1]; }
    constexpr double d_eta() const { return grad[2]; }

    constexpr bool is_constant() const {
        return grad[0] == 0.0 && grad[1] == 0.0 && grad[2] == 0.0;
    }

    constexpr Jet& operator+=(const Jet& o) {
        value += o.value;
        for (std::size_t i = 0; i < 3; ++i) grad[i] += o.grad[i];
        return *this;
    }
    constexpr Jet& operator-=(const Jet& o) {
        value -= o.value;
        for (std::size_t i = 0; i < 3; ++i) grad[i] -= o.grad[i];
        return *this;
    }
    constexpr Jet& operator*=(const Jet& o) {
        for (std::size_t i = 0; i < 3; ++i) grad[i] = grad[i] * o.value + value * o.grad[i];
        value *= o.value;
        return *this;
    }
    constexpr Jet& operator/=(const Jet& o) {
        const double q = value / o.value;
        for (std::size_t i = 0; i < 3; ++i) grad[i] = (grad[i] - q * o.grad[i]) / o.value;
        value = q;
        return *this;
    }
};

constexpr Jet operator-(Jet a) {
    a.value = -a.value;
    for (auto& g : a.grad) g = -g;
    return a;
}
constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }
constexpr Jet operator*(Jet a, const Jet& b) { return a *= b; }
constexpr Jet operator/(Jet a, const Jet& b) { return a /= b; }

namespace detail {
/// Unary chain rule: value f(a), derivative f'(a).
constexpr Jet chain(const Jet& a, double f, double df) {
    return Jet(f, df * a.grad[0], df * a.grad[1], df * a.grad[2]);
}
}  // namespace detail

inline Jet exp(const Jet& a) {
    const double e = std::exp(a.value);
    return detail::chain(a, e, e);
}
inline Jet log(const Jet& a) { return detail::chain(a, std::log(a.value), 1.0 / a.value); }
inline Jet sin(const Jet& a) { return detail::chain(a, std::sin(a.value), std::cos(a.value)); }
inline Jet cos(const Jet& a) { return detail::chain(a, std::cos(a.value), -std::sin(a.value)); }
inline Jet tanh(const Jet& a) {
    const double t = std::tanh(a.value);
    return detail::chain(a, t, 1.0 - t * t);
}
inline Jet sqrt(const Jet& a) {
    const double s = std::sqrt(a.value);
    return detail::chain(a, s, 0.5 / s);
}

/// a^n for integer n; exact at a = 0 for n ≥ 1.
inline Jet pow(const Jet& a, int n) {
    if (n == 0) return Jet(1.0);
    const double lower = std::pow(a.value, n - 1);
    return detail::chain(a, lower * a.value, n * lower);
}

/// a^b for a jet exponent. Integral constant exponents take the integer path so
/// negative bases stay real.
inline Jet pow(const Jet& a, const Jet& b) {
    if (b.is_constant() && b.value == std::nearbyint(b.value) && std::abs(b.value) < 1e9) {
        return pow(a, static_cast<int>(b.value));
    }
    const double p = std::pow(a.value, b.value);
    Jet r(p);
    const double log_a = b.is_constant() ? 0.0 : std::log(a.value);
    const double base_coeff = a.value == 0.0 ? 0.0 : p * b.value / a.value;
    for (std::size_t i = 0; i < 3; ++i) {
        r.grad[i] = base_coeff * a.grad[i] + (b.grad[i] == 0.0 ? 0.0 : p * log_a * b.grad[i]);
    }
    return r;
}

}  // namespace biset
