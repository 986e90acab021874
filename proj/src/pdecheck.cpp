#include "biset/pdecheck.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <boost/numeric/odeint.hpp>

#include "biset/diff.hpp"
#include "biset/error.hpp"

namespace biset {

namespace {

double max_abs(std::initializer_list<double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

bool is_admissible(const CoefficientTriple& ct, std::span<const Point3> probes) {
    bool lambda_nonzero = false;
    bool sigma_tau_nonzero = false;
    for (const auto& p : probes) {
        const double scale = max_abs({p.x, p.xi, p.eta});
        if (is_nonzero(ct.lambda(p.x), scale)) lambda_nonzero = true;
        const double s = ct.sigma(p.xi, p.eta);
        const double t = ct.tau(p.xi, p.eta);
        if (is_nonzero(s * s + t * t, scale)) sigma_tau_nonzero = true;
    }
    return lambda_nonzero && sigma_tau_nonzero;
}

CoefficientTriple affine_family(double b, double c, const UnivariateFn& s, const UnivariateFn& t) {
    return {
        univariate::affine(b, c),
        BivariateFn("affine_sigma", [b, s](const Jet& xi, const Jet& eta) { return b * xi + b * s(eta); }),
        BivariateFn("affine_tau", [b, t](const Jet&, const Jet& eta) { return b * t(eta); }),
    };
}

CoefficientTriple exponential_family(double a, double b, double c, const UnivariateFn& s,
                                     const UnivariateFn& t) {
    if (a == 0.0) throw PreconditionError("exponential family needs a != 0");
    return {
        UnivariateFn("exp_lambda",
                     [a, b, c](const Jet& x) { return c * biset::exp(a * x) - b / a; },
                     c == 0.0),
        BivariateFn("exp_sigma",
                    [a, b, c, s](const Jet& xi, const Jet& eta) {
                        return c * s(eta) * biset::exp(a * xi) - b / a;
                    }),
        BivariateFn("exp_tau",
                    [a, c, t](const Jet& xi, const Jet& eta) {
                        return a * c * t(eta) * biset::exp(a * xi);
                    }),
    };
}

std::array<Residual, 2> linear_system_residual(const MetricFunction& f,
                                               const CoefficientTriple& ct, double x, double xi,
                                               double eta) {
    const Jet j = evaluate_with_partials(f, x, xi, eta);
    const double lambda = ct.lambda(x);
    const double sigma = ct.sigma(xi, eta);
    const double tau = ct.tau(xi, eta);
    const double t1 = lambda * j.d_x();
    const double t2 = sigma * j.d_xi();
    const double t3 = tau * j.d_eta();
    return {Residual{j.d_x() + j.d_xi(), max_abs({j.d_x(), j.d_xi()})},
            Residual{t1 + t2 + t3, max_abs({t1, t2, t3})}};
}

Residual coefficient_relation_residual(const CoefficientTriple& ct, double x, double xi,
                                       double eta) {
    const Jet lambda = ct.lambda.derivative_at(x);
    const Jet sigma = ct.sigma.partials_at(xi, eta);
    const Jet tau = ct.tau.partials_at(xi, eta);
    if (tau.value == 0.0) throw DomainError("tau vanishes at the probe point");
    const double t1 = lambda.d_x();
    const double t2 = lambda.value * tau.d_xi() / tau.value;
    const double t3 = sigma.value * tau.d_xi() / tau.value;
    const double t4 = sigma.d_xi();
    return {t1 - t2 + t3 - t4, max_abs({t1, t2, t3, t4})};
}

std::array<double, 3> coefficient_ode_residual(const CoefficientTriple& ct, double a, double b,
                                               double x, double xi, double eta) {
    const Jet lambda = ct.lambda.derivative_at(x);
    const Jet sigma = ct.sigma.partials_at(xi, eta);
    const Jet tau = ct.tau.partials_at(xi, eta);
    return {lambda.d_x() - a * lambda.value - b, sigma.d_xi() - a * sigma.value - b,
            tau.d_xi() - a * tau.value};
}

MetricFunction case_a0_solution(const UnivariateFn& chi) {
    if (chi.is_constant()) throw PreconditionError("chi must be non-constant");
    MetricFunction::Unscale unscale;
    if (chi.invertible()) unscale = [chi](double v) { return chi.inverse(v); };
    return {MetricKind::Derived, chi.name() + "((x - xi)*exp(-eta))",
            [chi](const Jet& x, const Jet& xi, const Jet& eta) {
                return chi((x - xi) * biset::exp(-eta));
            },
            std::move(unscale)};
}

CoefficientTriple case_a0_system() {
    return {univariate::identity(), bivariate::xi(), bivariate::of_eta(univariate::constant(1.0))};
}

std::array<double, 2> characteristic_residuals(const UnivariateFn& phi, const UnivariateFn& psi,
                                               const UnivariateFn& sigma, const UnivariateFn& tau,
                                               double v) {
    const Jet p = phi.derivative_at(v);
    const Jet q = psi.derivative_at(v);
    const double s = sigma(v);
    const double t = tau(v);
    if (t == 0.0) throw DomainError("tau vanishes at v = " + std::to_string(v));
    if (p.value == 0.0) throw DomainError("phi vanishes at v = " + std::to_string(v));
    return {p.d_x() / p.value + s / t, q.d_x() / p.value - 1.0 / t};
}

AnonzeroCase case_anonzero_solution(const UnivariateFn& chi, const UnivariateFn& phi,
                                    const UnivariateFn& psi, const UnivariateFn& sigma,
                                    const UnivariateFn& tau, std::span<const double> probe_v) {
    if (chi.is_constant()) throw PreconditionError("chi must be non-constant");
    MetricFunction::Unscale unscale;
    if (chi.invertible()) unscale = [chi](double v) { return chi.inverse(v); };
    MetricFunction f(MetricKind::Derived,
                     chi.name() + "(" + phi.name() + "(eta)*exp(xi - x) + " + psi.name() + "(eta))",
                     [chi, phi, psi](const Jet& x, const Jet& xi, const Jet& eta) {
                         return chi(phi(eta) * biset::exp(xi - x) + psi(eta));
                     },
                     std::move(unscale));
    AnonzeroCase out{std::move(f), {}};
    out.characteristic.reserve(probe_v.size());
    for (double v : probe_v) out.characteristic.push_back(characteristic_residuals(phi, psi, sigma, tau, v));
    return out;
}

std::array<Residual, 2> system15_residual(const MetricFunction& f, const UnivariateFn& sigma,
                                          const UnivariateFn& tau, double x, double xi,
                                          double eta) {
    const Jet j = evaluate_with_partials(f, x, xi, eta);
    const double t1 = std::exp(x - xi) * j.d_x();
    const double t2 = sigma(eta) * j.d_xi();
    const double t3 = tau(eta) * j.d_eta();
    return {Residual{j.d_x() + j.d_xi(), max_abs({j.d_x(), j.d_xi()})},
            Residual{t1 + t2 + t3, max_abs({t1, t2, t3})}};
}

namespace {

/// Value, first and second derivative of φ and ψ on a uniform grid.
struct HermiteTable {
    double start = 0;
    double step = 0;
    std::vector<std::array<double, 3>> phi;  // (f, f', f'') per node
    std::vector<std::array<double, 3>> psi;

    double end() const { return start + step * static_cast<double>(phi.size() - 1); }
};

/// Quintic Hermite interpolation of one column of the table, on a jet argument.
Jet hermite_eval(const HermiteTable& table, const std::vector<std::array<double, 3>>& nodes,
                 const Jet& t, const char* name) {
    const double tol = 1e-12 * (1.0 + std::abs(table.end()));
    if (t.value < table.start - tol || t.value > table.end() + tol) {
        throw DomainError(std::string(name) + " evaluated outside its integration range at " +
                          std::to_string(t.value));
    }
    const auto cells = static_cast<std::ptrdiff_t>(nodes.size()) - 1;
    auto cell = static_cast<std::ptrdiff_t>(std::floor((t.value - table.start) / table.step));
    cell = std::clamp<std::ptrdiff_t>(cell, 0, cells - 1);
    const double h = table.step;
    const auto& n0 = nodes[static_cast<std::size_t>(cell)];
    const auto& n1 = nodes[static_cast<std::size_t>(cell + 1)];
    const Jet s = (t - (table.start + h * static_cast<double>(cell))) / h;
    const Jet s2 = s * s;
    const Jet s3 = s2 * s;
    const Jet s4 = s3 * s;
    const Jet s5 = s4 * s;
    const Jet h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const Jet h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const Jet h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    const Jet h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const Jet h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const Jet h5 = 0.5 * (s3 - 2.0 * s4 + s5);
    return n0[0] * h0 + (h * n0[1]) * h1 + (h * h * n0[2]) * h2 + n1[0] * h3 +
           (h * n1[1]) * h4 + (h * h * n1[2]) * h5;
}

}  // namespace

Characteristics integrate_characteristics(const UnivariateFn& sigma, const UnivariateFn& tau,
                                          double v0, double phi0, double psi0, double v_min,
                                          double v_max) {
    if (!(v_min <= v0 && v0 <= v_max && v_min < v_max)) {
        throw PreconditionError("integration range must contain the initial point");
    }
    if (phi0 == 0.0) throw PreconditionError("phi(v0) must be non-zero");
    using State = std::array<double, 2>;
    namespace odeint = boost::numeric::odeint;

    // φ' = −σφ/τ, ψ' = φ/τ
    auto rhs = [&](const State& y, State& dy, double v) {
        const double t = tau(v);
        if (t == 0.0) throw DomainError("tau vanishes at v = " + std::to_string(v));
        dy[0] = -sigma(v) * y[0] / t;
        dy[1] = y[0] / t;
    };
    // Derivatives of the right-hand side along the solution, by jets in v.
    auto node = [&](double v, const State& y) {
        State dy{};
        rhs(y, dy, v);
        const Jet vj = Jet::variable(v, 0);
        const Jet phi(y[0], dy[0], 0.0, 0.0);
        const Jet t = tau(vj);
        const Jet dphi = -sigma(vj) * phi / t;
        const Jet dpsi = phi / t;
        return std::pair{std::array<double, 3>{y[0], dy[0], dphi.d_x()},
                         std::array<double, 3>{y[1], dy[1], dpsi.d_x()}};
    };

    constexpr double kStep = 1.0 / 256.0;
    const auto below = static_cast<std::size_t>(std::ceil((v0 - v_min) / kStep));
    const auto above = static_cast<std::size_t>(std::ceil((v_max - v0) / kStep));
    auto table = std::make_shared<HermiteTable>();
    table->start = v0 - kStep * static_cast<double>(below);
    table->step = kStep;
    table->phi.resize(below + above + 1);
    table->psi.resize(below + above + 1);

    auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_dopri5<State>());
    auto sweep = [&](double direction, std::size_t count) {
        State y{phi0, psi0};
        double v = v0;
        for (std::size_t n = 1; n <= count; ++n) {
            const double next = v0 + direction * kStep * static_cast<double>(n);
            odeint::integrate_adaptive(stepper, rhs, y, v, next, direction * kStep / 8.0);
            v = next;
            const std::size_t index = direction > 0 ? below + n : below - n;
            std::tie(table->phi[index], table->psi[index]) = node(v, y);
        }
    };
    std::tie(table->phi[below], table->psi[below]) = node(v0, State{phi0, psi0});
    sweep(1.0, above);
    sweep(-1.0, below);

    return {
        UnivariateFn("integrated_phi",
                     [table](const Jet& t) { return hermite_eval(*table, table->phi, t, "phi"); },
                     false),
        UnivariateFn("integrated_psi",
                     [table](const Jet& t) { return hermite_eval(*table, table->psi, t, "psi"); },
                     false),
    };
}

CoordinateChange identity_change() {
    return {"identity", [](double x) { return x; },
            [](double xi, double eta) { return std::pair{xi, eta}; }, [](double f) { return f; }};
}

CoordinateChange case_a0_change(const UnivariateFn& chi) {
    return {"x'=x, xi'=exp(-eta), eta'=-xi*exp(-eta), f'=chi^-1(f)", [](double x) { return x; },
            [](double xi, double eta) {
                const double e = std::exp(-eta);
                return std::pair{e, -xi * e};
            },
            [chi](double f) { return chi.inverse(f); }};
}

CoordinateChange case_anonzero_change(const UnivariateFn& chi, const UnivariateFn& phi,
                                      const UnivariateFn& psi) {
    return {"x'=exp(-x), xi'=phi(eta)*exp(xi), eta'=psi(eta), f'=chi^-1(f)",
            [](double x) { return std::exp(-x); },
            [phi, psi](double xi, double eta) {
                return std::pair{phi(eta) * std::exp(xi), psi(eta)};
            },
            [chi](double f) { return chi.inverse(f); }};
}

double equivalence_to_canonical(const MetricFunction& f, const CoordinateChange& change,
                                std::span<const Point3> probes) {
    double worst = 0.0;
    for (const auto& p : probes) {
        const double x = change.x_map(p.x);
        const auto [xi, eta] = change.n_map(p.xi, p.eta);
        const double lhs = change.scale(f(p.x, p.xi, p.eta));
        worst = std::max(worst, std::abs(lhs - (x * xi + eta)));
    }
    return worst;
}

std::vector<Point3> random_points(std::size_t n, std::uint64_t seed, ProbeRange range) {
    ProbeSampler sampler(seed, range);
    std::vector<Point3> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point3 p;
        p.x = sampler.coordinate();
        p.xi = sampler.coordinate();
        p.eta = sampler.coordinate();
        out.push_back(p);
    }
    return out;
}

}  // namespace biset
