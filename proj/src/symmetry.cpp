#include "biset/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "biset/diff.hpp"
#include "biset/error.hpp"

namespace biset {

CortegeJets cortege_jets(const MetricFunction& f, const Cortege32& c) {
    return {
        evaluate_with_partials(f, c.x_i, c.xi_a, c.eta_a),
        evaluate_with_partials(f, c.x_i, c.xi_b, c.eta_b),
        evaluate_with_partials(f, c.x_j, c.xi_a, c.eta_a),
        evaluate_with_partials(f, c.x_j, c.xi_b, c.eta_b),
        evaluate_with_partials(f, c.x_k, c.xi_a, c.eta_a),
        evaluate_with_partials(f, c.x_k, c.xi_b, c.eta_b),
    };
}

std::array<double, 6> cortege_values(const MetricFunction& f, const Cortege32& c) {
    return {
        f(c.x_i, c.xi_a, c.eta_a), f(c.x_i, c.xi_b, c.eta_b),
        f(c.x_j, c.xi_a, c.eta_a), f(c.x_j, c.xi_b, c.eta_b),
        f(c.x_k, c.xi_a, c.eta_a), f(c.x_k, c.xi_b, c.eta_b),
    };
}

FunctionalMatrix build_functional_matrix(const CortegeJets& j) {
    FunctionalMatrix m = FunctionalMatrix::Zero();
    const std::array<const Jet*, 6> cols{&j.ia, &j.ib, &j.ja, &j.jb, &j.ka, &j.kb};
    for (int col = 0; col < 6; ++col) {
        const Jet& p = *cols[static_cast<std::size_t>(col)];
        const bool alpha = col % 2 == 0;
        m(col / 2, col) = p.d_x();
        m(alpha ? 3 : 5, col) = p.d_xi();
        m(alpha ? 4 : 6, col) = p.d_eta();
    }
    return m;
}

FunctionalMatrix build_functional_matrix(const MetricFunction& f, const Cortege32& c) {
    return build_functional_matrix(cortege_jets(f, c));
}

FunctionalMatrix canonical_matrix16(const Cortege32& c) {
    FunctionalMatrix m;
    // clang-format off
    m << c.xi_a, c.xi_b, 0,      0,      0,      0,
         0,      0,      c.xi_a, c.xi_b, 0,      0,
         0,      0,      0,      0,      c.xi_a, c.xi_b,
         c.x_i,  0,      c.x_j,  0,      c.x_k,  0,
         1,      0,      1,      0,      1,      0,
         0,      c.x_i,  0,      c.x_j,  0,      c.x_k,
         0,      1,      0,      1,      0,      1;
    // clang-format on
    return m;
}

bool has_functional_zero_pattern(const FunctionalMatrix& m) {
    for (int row = 0; row < 7; ++row) {
        for (int col = 0; col < 6; ++col) {
            const bool alpha = col % 2 == 0;
            bool allowed = false;
            if (row < 3) allowed = col / 2 == row;
            else if (row < 5) allowed = alpha;
            else allowed = !alpha;
            if (!allowed && m(row, col) != 0.0) return false;
        }
    }
    return true;
}

double jacobian6_deleting_row(const FunctionalMatrix& m, int row) {
    if (row < 0 || row > 6) throw PreconditionError("row index out of range");
    Matrix sub(6, 6);
    for (int r = 0, out = 0; r < 7; ++r) {
        if (r == row) continue;
        sub.row(out++) = m.row(r);
    }
    return determinant(std::move(sub));
}

double Residual::normalized() const {
    return scale > 0.0 ? std::abs(value) / scale : std::abs(value);
}

double ps_residual(double fia, double fib, double fja, double fjb, double fka, double fkb) {
    // Expansion along the ones column. A row swap permutes and negates the
    // three terms; adding them in order of magnitude makes the rounded result
    // depend only on the multiset, so the swap negates it exactly.
    std::array<double, 3> t{fia * fjb - fib * fja, fka * fib - fkb * fia, fja * fkb - fjb * fka};
    std::sort(t.begin(), t.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    // Equal magnitudes are the only ambiguous order; opposite ones cancel exactly.
    if (t[0] == -t[1]) return t[2];
    if (t[1] == -t[2]) return t[0];
    return (t[0] + t[1]) + t[2];
}

double ps_residual(const std::array<double, 6>& v) {
    return ps_residual(v[0], v[1], v[2], v[3], v[4], v[5]);
}

Residual ps_check(const std::array<double, 6>& v) {
    const auto [a, b, c, d, e, g] = v;
    const double scale = std::max({std::abs(a * d), std::abs(b * c), std::abs(a * g),
                                   std::abs(b * e), std::abs(c * g), std::abs(d * e)});
    return {ps_residual(v), scale};
}

Residual ps_check(const MetricFunction& f, const Cortege32& c) {
    auto v = cortege_values(f, c);
    for (auto& x : v) x = f.unscale(x);
    return ps_check(v);
}

namespace {

double det2(double a, double b, double c, double d) { return a * d - b * c; }

/// 4×4 determinant with the fixed top two rows of B/C minors.
double minor4(const CortegeJets& j, double r3a, double r3c, double r4b, double r4d) {
    Matrix m(4, 4);
    // clang-format off
    m << j.ja.d_x(), j.jb.d_x(), 0,          0,
         0,          0,          j.ka.d_x(), j.kb.d_x(),
         r3a,        0,          r3c,        0,
         0,          r4b,        0,          r4d;
    // clang-format on
    return determinant(std::move(m));
}

}  // namespace

Minors minors(const CortegeJets& j) {
    Minors m;
    m.A = det2(j.ja.d_xi(), j.ka.d_xi(), j.ja.d_eta(), j.ka.d_eta());
    m.A_beta = det2(j.jb.d_xi(), j.kb.d_xi(), j.jb.d_eta(), j.kb.d_eta());
    m.B1 = minor4(j, j.ja.d_eta(), j.ka.d_eta(), j.jb.d_xi(), j.kb.d_xi());
    m.C1 = minor4(j, j.ja.d_xi(), j.ka.d_xi(), j.jb.d_xi(), j.kb.d_xi());
    m.B2 = minor4(j, j.ja.d_eta(), j.ka.d_eta(), j.jb.d_eta(), j.kb.d_eta());
    m.C2 = minor4(j, j.ja.d_xi(), j.ka.d_xi(), j.jb.d_eta(), j.kb.d_eta());
    return m;
}

Minors minors(const MetricFunction& f, const Cortege32& c) { return minors(cortege_jets(f, c)); }

double minor_A(const MetricFunction& f, const Cortege32& c) { return minors(f, c).A; }
double minor_B1(const MetricFunction& f, const Cortege32& c) { return minors(f, c).B1; }
double minor_C1(const MetricFunction& f, const Cortege32& c) { return minors(f, c).C1; }
double minor_B2(const MetricFunction& f, const Cortege32& c) { return minors(f, c).B2; }
double minor_C2(const MetricFunction& f, const Cortege32& c) { return minors(f, c).C2; }

std::array<Residual, 2> relations6_residual(const CortegeJets& j) {
    const Minors m = minors(j);
    auto relation = [&](double f_ib, double B, double C) {
        const double t1 = -j.ia.d_x() * f_ib * j.jb.d_x() * j.kb.d_x() * m.A;
        const double t2 = -j.ia.d_xi() * j.ib.d_x() * B;
        const double t3 = j.ia.d_eta() * j.ib.d_x() * C;
        return Residual{t1 + t2 + t3, std::max({std::abs(t1), std::abs(t2), std::abs(t3)})};
    };
    return {relation(j.ib.d_xi(), m.B1, m.C1), relation(j.ib.d_eta(), m.B2, m.C2)};
}

std::array<Residual, 2> relations6_residual(const MetricFunction& f, const Cortege32& c) {
    return relations6_residual(cortege_jets(f, c));
}

Residual minor_product_identity_residual(const CortegeJets& j) {
    const Minors m = minors(j);
    const double lhs1 = m.B1 * m.C2;
    const double lhs2 = m.C1 * m.B2;
    const double product = j.ja.d_x() * j.jb.d_x() * j.ka.d_x() * j.kb.d_x() * m.A * m.A_beta;
    return {(lhs1 - lhs2) + product,
            std::max({std::abs(lhs1), std::abs(lhs2), std::abs(product)})};
}

Residual minor_product_identity_residual(const MetricFunction& f, const Cortege32& c) {
    return minor_product_identity_residual(cortege_jets(f, c));
}

double minor5_canonical(const Cortege32& c) {
    return determinant(canonical_matrix16(c).topLeftCorner<5, 5>());
}

}  // namespace biset
