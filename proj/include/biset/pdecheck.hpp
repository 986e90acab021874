#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biset/catalog.hpp"
#include "biset/geometry.hpp"
#include "biset/motions.hpp"
#include "biset/symmetry.hpp"

namespace biset {

/// Coefficients of λ(x)f_x + σ(ξ,η)f_ξ + τ(ξ,η)f_η = 0.
struct CoefficientTriple {
    UnivariateFn lambda;
    BivariateFn sigma;
    BivariateFn tau;
};

/// λ ≢ 0 and σ² + τ² ≢ 0 over the probe points.
bool is_admissible(const CoefficientTriple& ct, std::span<const Point3> probes);

/// Triple solving the coefficient ODEs with a = 0:
/// λ = b·x + c, σ = b·ξ + b·s(η), τ = b·t(η).
CoefficientTriple affine_family(double b, double c, const UnivariateFn& s, const UnivariateFn& t);

/// Triple solving the coefficient ODEs with a ≠ 0:
/// λ = c·e^{ax} − b/a, σ = c·s(η)·e^{aξ} − b/a, τ = a·c·t(η)·e^{aξ}.
CoefficientTriple exponential_family(double a, double b, double c, const UnivariateFn& s,
                                     const UnivariateFn& t);

/// (f_x + f_ξ, λf_x + σf_ξ + τf_η) with exact partials.
std::array<Residual, 2> linear_system_residual(const MetricFunction& f,
                                               const CoefficientTriple& ct, double x, double xi,
                                               double eta);

/// λ_x − λτ_ξ/τ + (στ_ξ − τσ_ξ)/τ. Throws DomainError where τ = 0.
Residual coefficient_relation_residual(const CoefficientTriple& ct, double x, double xi,
                                       double eta);

/// (λ_x − aλ − b, σ_ξ − aσ − b, τ_ξ − aτ).
std::array<double, 3> coefficient_ode_residual(const CoefficientTriple& ct, double a, double b,
                                               double x, double xi, double eta);

/// f = χ((x − ξ)·e^{−η}). Throws PreconditionError for a constant χ.
MetricFunction case_a0_solution(const UnivariateFn& chi);

/// The reduced system of the a = 0 case: λ = x, σ = ξ, τ = 1.
CoefficientTriple case_a0_system();

/// Characteristic-equation residuals at v:
/// (φ'/φ + σ/τ, ψ'/φ − 1/τ). Throws DomainError where τ = 0 or φ = 0.
std::array<double, 2> characteristic_residuals(const UnivariateFn& phi, const UnivariateFn& psi,
                                               const UnivariateFn& sigma, const UnivariateFn& tau,
                                               double v);

struct AnonzeroCase {
    MetricFunction metric;  // χ(φ(η)·e^{ξ−x} + ψ(η))
    std::vector<std::array<double, 2>> characteristic;  // one pair per probe v
};

/// Builds the a ≠ 0 solution and evaluates its characteristic residuals at
/// `probe_v`. Throws PreconditionError for a constant χ and DomainError where
/// τ or φ vanish at a probe.
AnonzeroCase case_anonzero_solution(const UnivariateFn& chi, const UnivariateFn& phi,
                                    const UnivariateFn& psi, const UnivariateFn& sigma,
                                    const UnivariateFn& tau, std::span<const double> probe_v);

/// (f_x + f_ξ, e^{x−ξ}f_x + σ(η)f_ξ + τ(η)f_η).
std::array<Residual, 2> system15_residual(const MetricFunction& f, const UnivariateFn& sigma,
                                          const UnivariateFn& tau, double x, double xi,
                                          double eta);

/// φ and ψ solving φ'/φ = −σ/τ, ψ'/φ = 1/τ with φ(v0) = phi0, ψ(v0) = psi0.
///
/// The ODEs are integrated with an adaptive Dormand–Prince stepper onto a grid
/// over [v_min, v_max]; φ and ψ are then quintic Hermite interpolants of the
/// grid values and their first two derivatives. Evaluating outside the grid
/// throws DomainError.
struct Characteristics {
    UnivariateFn phi;
    UnivariateFn psi;
};
Characteristics integrate_characteristics(const UnivariateFn& sigma, const UnivariateFn& tau,
                                          double v0, double phi0, double psi0, double v_min,
                                          double v_max);

/// Maps (x, ξ, η) to canonical coordinates plus the scaling s applied to f.
struct CoordinateChange {
    std::string description;
    std::function<double(double x)> x_map;
    std::function<std::pair<double, double>(double xi, double eta)> n_map;
    std::function<double(double f)> scale;
};

CoordinateChange identity_change();
/// x̃ = x, ξ̃ = e^{−η}, η̃ = −ξ·e^{−η}, s = χ⁻¹.
CoordinateChange case_a0_change(const UnivariateFn& chi);
/// x̃ = e^{−x}, ξ̃ = φ(η)·e^{ξ}, η̃ = ψ(η), s = χ⁻¹.
CoordinateChange case_anonzero_change(const UnivariateFn& chi, const UnivariateFn& phi,
                                      const UnivariateFn& psi);

/// max over probes of |s(f(x,ξ,η)) − (x̃·ξ̃ + η̃)|.
double equivalence_to_canonical(const MetricFunction& f, const CoordinateChange& change,
                                std::span<const Point3> probes);

std::vector<Point3> random_points(std::size_t n, std::uint64_t seed, ProbeRange range = {});

}  // namespace biset
