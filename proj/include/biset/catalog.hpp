#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "biset/jet.hpp"

namespace biset {

/// Scalar function of one variable, evaluated on jets so derivatives come for free.
class UnivariateFn {
public:
    using Eval = std::function<Jet(const Jet&)>;
    using Inverse = std::function<double(double)>;

    UnivariateFn(std::string name, Eval eval, bool constant, Inverse inverse = {})
        : name_(std::move(name)), eval_(std::move(eval)), inverse_(std::move(inverse)),
          constant_(constant) {}

    Jet operator()(const Jet& t) const { return eval_(t); }
    double operator()(double t) const { return eval_(Jet(t)).value; }

    /// Value and first derivative at t.
    Jet derivative_at(double t) const { return eval_(Jet::variable(t, 0)); }

    const std::string& name() const { return name_; }
    bool is_constant() const { return constant_; }
    bool invertible() const { return static_cast<bool>(inverse_); }
    double inverse(double y) const;

private:
    std::string name_;
    Eval eval_;
    Inverse inverse_;
    bool constant_;
};

/// Scalar function of the 𝔑-coordinates (ξ, η).
class BivariateFn {
public:
    using Eval = std::function<Jet(const Jet& xi, const Jet& eta)>;

    BivariateFn(std::string name, Eval eval) : name_(std::move(name)), eval_(std::move(eval)) {}

    Jet operator()(const Jet& xi, const Jet& eta) const { return eval_(xi, eta); }
    double operator()(double xi, double eta) const { return eval_(Jet(xi), Jet(eta)).value; }

    /// Value with ∂/∂ξ in grad[1] and ∂/∂η in grad[2].
    Jet partials_at(double xi, double eta) const {
        return eval_(Jet::variable(xi, 1), Jet::variable(eta, 2));
    }

    const std::string& name() const { return name_; }

private:
    std::string name_;
    Eval eval_;
};

namespace univariate {

UnivariateFn identity();
/// t + t³
UnivariateFn cubic();
UnivariateFn exp();
/// e^{-t}
UnivariateFn neg_exp();
/// Natural log; DomainError for t ≤ 0.
UnivariateFn ln();
/// a·t + b; constant when a == 0.
UnivariateFn affine(double a, double b);
UnivariateFn constant(double c);

/// Catalog lookup: `id`, `cubic`, `exp`, `neg_exp`, `ln`, `affine:A:B`, `const:C`.
/// Throws PreconditionError for unknown names.
UnivariateFn from_name(std::string_view name);

}  // namespace univariate

namespace bivariate {

BivariateFn xi();
BivariateFn eta();
/// e^{ξ+η}
BivariateFn exp_sum();
/// ξ² + η
BivariateFn xi_sq_plus_eta();
/// ξ·η + 1
BivariateFn xi_eta_plus_one();
BivariateFn xi_plus_eta();
/// 2ξ; functionally dependent on `xi()`.
BivariateFn two_xi();
/// g(η) lifted to a function of (ξ, η).
BivariateFn of_eta(const UnivariateFn& g);

/// Catalog lookup: `xi`, `eta`, `exp_sum`, `xi2_eta`, `xieta1`, `xi_plus_eta`, `two_xi`.
BivariateFn from_name(std::string_view name);

}  // namespace bivariate

}  // namespace biset
