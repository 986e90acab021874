#pragma once

#include <array>

#include <Eigen/Dense>

#include "biset/geometry.hpp"
#include "biset/jet.hpp"
#include "biset/linalg.hpp"

namespace biset {

/// The 7×6 functional matrix of the six values f(iα), f(iβ), f(jα), f(jβ),
/// f(kα), f(kβ) with respect to the seven cortege coordinates.
///
/// Rows: f_x at i, j, k; (f_ξ, f_η) at α; (f_ξ, f_η) at β.
/// Columns: iα, iβ, jα, jβ, kα, kβ.
using FunctionalMatrix = Eigen::Matrix<double, 7, 6>;

/// Jets of f at the six (𝔐, 𝔑) pairs of a cortege.
struct CortegeJets {
    Jet ia, ib, ja, jb, ka, kb;
};

CortegeJets cortege_jets(const MetricFunction& f, const Cortege32& c);

/// (f(iα), f(iβ), f(jα), f(jβ), f(kα), f(kβ)).
std::array<double, 6> cortege_values(const MetricFunction& f, const Cortege32& c);

FunctionalMatrix build_functional_matrix(const MetricFunction& f, const Cortege32& c);
FunctionalMatrix build_functional_matrix(const CortegeJets& j);

/// The functional matrix of the canonical metric in closed form.
FunctionalMatrix canonical_matrix16(const Cortege32& c);

/// True when every structurally-zero entry of `m` is exactly zero.
bool has_functional_zero_pattern(const FunctionalMatrix& m);

/// Determinant of the 6×6 matrix left after deleting `row` (0-based) of `m`.
double jacobian6_deleting_row(const FunctionalMatrix& m, int row);

/// A signed quantity that should vanish, with the largest absolute term of the
/// expansion it came from. `normalized()` is |value| / scale (|value| if scale is 0).
struct Residual {
    double value = 0.0;
    double scale = 0.0;

    double normalized() const;
};

/// det [[f(iα), f(iβ), 1], [f(jα), f(jβ), 1], [f(kα), f(kβ), 1]].
double ps_residual(double fia, double fib, double fja, double fjb, double fka, double fkb);
double ps_residual(const std::array<double, 6>& v);

/// ps_residual with its largest Leibniz product as the scale.
Residual ps_check(const std::array<double, 6>& v);

/// ps_check on the unscaled values of f (χ⁻¹ applied for general-form metrics).
Residual ps_check(const MetricFunction& f, const Cortege32& c);

/// The minors entering the pair of sixth-order relations.
///
/// `A` uses point α only; `A_beta` is the same 2×2 determinant at β.
struct Minors {
    double A = 0, A_beta = 0;
    double B1 = 0, C1 = 0, B2 = 0, C2 = 0;
};

Minors minors(const CortegeJets& j);
Minors minors(const MetricFunction& f, const Cortege32& c);

double minor_A(const MetricFunction& f, const Cortege32& c);
double minor_B1(const MetricFunction& f, const Cortege32& c);
double minor_C1(const MetricFunction& f, const Cortege32& c);
double minor_B2(const MetricFunction& f, const Cortege32& c);
double minor_C2(const MetricFunction& f, const Cortege32& c);

/// The two relations obtained by expanding, along column iα, the functional
/// matrix with row 7 deleted (first) and with row 6 deleted (second).
std::array<Residual, 2> relations6_residual(const CortegeJets& j);
std::array<Residual, 2> relations6_residual(const MetricFunction& f, const Cortege32& c);

/// det[[B1, C1], [B2, C2]] + f_x(jα)f_x(jβ)f_x(kα)f_x(kβ)·A_α·A_β.
///
/// The 2×2 determinant of the minors equals minus the product of the f_x
/// factors and the two (f_ξ, f_η) Jacobians, for every f; this is the residual
/// of that identity.
Residual minor_product_identity_residual(const CortegeJets& j);
Residual minor_product_identity_residual(const MetricFunction& f, const Cortege32& c);

/// Leading 5×5 minor of the canonical functional matrix (last two rows and last
/// column removed).
double minor5_canonical(const Cortege32& c);

/// Default relative tolerance for numeric_rank on functional matrices.
inline constexpr double kRankRelTol = 1e-9;

}  // namespace biset
