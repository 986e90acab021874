#include "biset/diff.hpp"

#include "biset/error.hpp"

namespace biset {

Jet evaluate_with_partials(const MetricFunction& f, double x, double xi, double eta) {
    return f(Jet::variable(x, 0), Jet::variable(xi, 1), Jet::variable(eta, 2));
}

std::array<double, 3> finite_difference_partials(const MetricFunction& f, double x, double xi,
                                                 double eta, double h) {
    if (!(h > 0.0)) throw PreconditionError("finite difference step must be positive");
    const double inv = 0.5 / h;
    return {
        (f(x + h, xi, eta) - f(x - h, xi, eta)) * inv,
        (f(x, xi + h, eta) - f(x, xi - h, eta)) * inv,
        (f(x, xi, eta + h) - f(x, xi, eta - h)) * inv,
    };
}

}  // namespace biset
