#include "biset/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "biset/diff.hpp"
#include "biset/error.hpp"

namespace biset {

MetricFunction canonical_metric() {
    return {MetricKind::Canonical, "x*xi + eta",
            [](const Jet& x, const Jet& xi, const Jet& eta) { return x * xi + eta; }};
}

MetricFunction general_form_metric(const UnivariateFn& chi, const UnivariateFn& phi,
                                   const BivariateFn& psi1, const BivariateFn& psi2) {
    if (chi.is_constant()) throw PreconditionError("chi must be non-constant");
    if (phi.is_constant()) throw PreconditionError("phi must be non-constant");
    if (!chi.invertible()) throw PreconditionError("chi must be invertible");

    ProbeSampler sampler(0x5eedULL);
    bool independent = false;
    for (int probe = 0; probe < 20 && !independent; ++probe) {
        const double xi = sampler.coordinate();
        const double eta = sampler.coordinate();
        try {
            const Jet p1 = psi1.partials_at(xi, eta);
            const Jet p2 = psi2.partials_at(xi, eta);
            const double det = p1.d_xi() * p2.d_eta() - p1.d_eta() * p2.d_xi();
            const double scale = std::max(std::abs(xi), std::abs(eta));
            independent = is_nonzero(det, scale);
        } catch (const DomainError&) {
            // outside the domain of ψ at this probe; try the next one
        }
    }
    if (!independent) {
        throw PreconditionError("psi1 = " + psi1.name() + " and psi2 = " + psi2.name() +
                                " are functionally dependent");
    }

    std::string description = "chi=" + chi.name() + ",phi=" + phi.name() +
                              ",psi1=" + psi1.name() + ",psi2=" + psi2.name();
    return {MetricKind::GeneralForm, std::move(description),
            [chi, phi, psi1, psi2](const Jet& x, const Jet& xi, const Jet& eta) {
                return chi(phi(x) * psi1(xi, eta) + psi2(xi, eta));
            },
            [chi](double v) { return chi.inverse(v); }};
}

MetricFunction expression_metric(MetricExpr e) {
    std::string description = to_string(e);
    return {MetricKind::Expression, std::move(description),
            [e = std::move(e)](const Jet& x, const Jet& xi, const Jet& eta) {
                return e(x, xi, eta);
            }};
}

MetricFunction expression_metric(std::string_view src) {
    return expression_metric(parse_metric_expr(src));
}

double Cortege32::scale() const {
    return std::max({std::abs(x_i), std::abs(x_j), std::abs(x_k), std::abs(xi_a),
                     std::abs(eta_a), std::abs(xi_b), std::abs(eta_b)});
}

bool is_nonzero(double v, double scale) { return std::abs(v) > kNonzeroRelTol * (1.0 + scale); }

bool is_nonzero_relative(double v, double term_scale) {
    return std::isfinite(v) && std::abs(v) > kNonzeroRelTol * term_scale && v != 0.0;
}

std::vector<EssentialityProbe> essentiality_check(const MetricFunction& f,
                                                  std::span<const Cortege32> probes) {
    if (probes.empty()) throw PreconditionError("essentiality check needs at least one probe");
    std::vector<EssentialityProbe> out;
    out.reserve(probes.size());
    for (const auto& c : probes) {
        if (c.x_i == c.x_j || c.x_i == c.x_k || c.x_j == c.x_k) {
            throw PreconditionError("probe x-coordinates must be pairwise distinct");
        }
        // Compared against the terms they are built from: χ' is a common factor of
        // every partial and may be far from 1 without the inequality failing.
        auto jacobian = [&](double xi, double eta) {
            const Jet j = evaluate_with_partials(f, c.x_j, xi, eta);
            const Jet k = evaluate_with_partials(f, c.x_k, xi, eta);
            const double lhs = j.d_xi() * k.d_eta();
            const double rhs = j.d_eta() * k.d_xi();
            return std::pair{lhs - rhs, std::max(std::abs(lhs), std::abs(rhs))};
        };
        const Jet at_i = evaluate_with_partials(f, c.x_i, c.xi_a, c.eta_a);
        const auto [jac_a, scale_a] = jacobian(c.xi_a, c.eta_a);
        const auto [jac_b, scale_b] = jacobian(c.xi_b, c.eta_b);
        EssentialityProbe p;
        p.fx_alpha = at_i.d_x();
        p.jac_alpha = jac_a;
        p.jac_beta = jac_b;
        const double grad_scale =
            std::max({std::abs(at_i.d_x()), std::abs(at_i.d_xi()), std::abs(at_i.d_eta())});
        p.fx_ok = is_nonzero_relative(p.fx_alpha, grad_scale);
        p.jac_alpha_ok = is_nonzero_relative(jac_a, scale_a);
        p.jac_beta_ok = is_nonzero_relative(jac_b, scale_b);
        out.push_back(p);
    }
    return out;
}

ProbeSampler::ProbeSampler(std::uint64_t seed, ProbeRange range)
    : engine_(seed), range_(range) {
    if (!(range_.lo >= 0.0 && range_.hi > range_.lo)) {
        throw PreconditionError("probe range must satisfy 0 <= lo < hi");
    }
}

double ProbeSampler::coordinate() {
    std::uniform_real_distribution<double> magnitude(range_.lo, range_.hi);
    const bool negative = (engine_() >> 63) != 0;
    const double m = magnitude(engine_);
    return negative ? -m : m;
}

Cortege32 ProbeSampler::cortege() {
    Cortege32 c;
    c.x_i = coordinate();
    do {
        c.x_j = coordinate();
    } while (c.x_j == c.x_i);
    do {
        c.x_k = coordinate();
    } while (c.x_k == c.x_i || c.x_k == c.x_j);
    c.xi_a = coordinate();
    c.eta_a = coordinate();
    c.xi_b = coordinate();
    c.eta_b = coordinate();
    return c;
}

std::vector<Cortege32> ProbeSampler::corteges(std::size_t n) {
    std::vector<Cortege32> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(cortege());
    return out;
}

}  // namespace biset
