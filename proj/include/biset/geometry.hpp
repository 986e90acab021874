#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "biset/catalog.hpp"
#include "biset/expr.hpp"
#include "biset/jet.hpp"

namespace biset {

enum class MetricKind { Canonical, GeneralForm, Expression, Derived };

/// Coordinate representation f(x, ξ, η) of a two-point metric function.
///
/// `unscale` undoes the outer scaling χ of a general-form metric, so that
/// `unscale(f)` is affine in the 𝔐-factor. For every other kind it is the
/// identity.
class MetricFunction {
public:
    using Eval = std::function<Jet(const Jet& x, const Jet& xi, const Jet& eta)>;
    using Unscale = std::function<double(double)>;

    MetricFunction(MetricKind kind, std::string description, Eval eval, Unscale unscale = {})
        : kind_(kind), description_(std::move(description)), eval_(std::move(eval)),
          unscale_(std::move(unscale)) {}

    double operator()(double x, double xi, double eta) const {
        return eval_(Jet(x), Jet(xi), Jet(eta)).value;
    }
    Jet operator()(const Jet& x, const Jet& xi, const Jet& eta) const { return eval_(x, xi, eta); }

    double unscale(double value) const { return unscale_ ? unscale_(value) : value; }

    MetricKind kind() const { return kind_; }
    const std::string& description() const { return description_; }

private:
    MetricKind kind_;
    std::string description_;
    Eval eval_;
    Unscale unscale_;
};

/// f = x·ξ + η
MetricFunction canonical_metric();

/// f = χ(φ(x)·ψ1(ξ,η) + ψ2(ξ,η)).
///
/// Throws PreconditionError when χ or φ is constant, when χ has no inverse,
/// or when the Jacobian of (ψ1, ψ2) vanishes at all 20 seeded probe points.
MetricFunction general_form_metric(const UnivariateFn& chi, const UnivariateFn& phi,
                                   const BivariateFn& psi1, const BivariateFn& psi2);

MetricFunction expression_metric(MetricExpr e);
MetricFunction expression_metric(std::string_view src);

/// The ⟨ijk, αβ⟩ tuple: three 𝔐-coordinates and two 𝔑-points.
struct Cortege32 {
    double x_i = 0, x_j = 0, x_k = 0;
    double xi_a = 0, eta_a = 0;
    double xi_b = 0, eta_b = 0;

    /// Largest absolute coordinate.
    double scale() const;
};

/// Shared "≠ 0" test: |v| > 1e-9·(1 + scale).
inline constexpr double kNonzeroRelTol = 1e-9;
bool is_nonzero(double v, double scale);
/// Scale-free variant: |v| > 1e-9·term_scale, where term_scale is the largest
/// magnitude among the terms v was computed from.
bool is_nonzero_relative(double v, double term_scale);

struct EssentialityProbe {
    double fx_alpha = 0;   // ∂f/∂x at (x_i, ξα, ηα)
    double jac_alpha = 0;  // ∂(f(x_j,·), f(x_k,·))/∂(ξ,η) at α
    double jac_beta = 0;   // same at β
    bool fx_ok = false;
    bool jac_alpha_ok = false;
    bool jac_beta_ok = false;

    bool pass() const { return fx_ok && jac_alpha_ok && jac_beta_ok; }
};

/// Evaluates the essentiality inequalities at each probe. ∂f/∂x is judged
/// against the largest partial of f at (x_i, α); each Jacobian against its two
/// expansion products.
/// Throws PreconditionError on an empty probe list or repeated x within a probe.
std::vector<EssentialityProbe> essentiality_check(const MetricFunction& f,
                                                  std::span<const Cortege32> probes);

/// Probe coordinates are drawn uniformly from [−hi, −lo] ∪ [lo, hi].
struct ProbeRange {
    double lo = 0.1;
    double hi = 2.0;
};

/// Seeded source of probe coordinates and corteges.
class ProbeSampler {
public:
    explicit ProbeSampler(std::uint64_t seed, ProbeRange range = {});

    double coordinate();
    /// Cortege with pairwise distinct x.
    Cortege32 cortege();
    std::vector<Cortege32> corteges(std::size_t n);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    ProbeRange range_;
};

}  // namespace biset
