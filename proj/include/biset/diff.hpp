#pragma once

#include <array>

#include "biset/geometry.hpp"
#include "biset/jet.hpp"

namespace biset {

/// Value and exact first partials of f at (x, ξ, η), one seeded pass.
Jet evaluate_with_partials(const MetricFunction& f, double x, double xi, double eta);

/// Central-difference approximation of (f_x, f_ξ, f_η). Oracle for the jet path.
/// Throws PreconditionError unless h > 0.
std::array<double, 3> finite_difference_partials(const MetricFunction& f, double x, double xi,
                                                 double eta, double h);

}  // namespace biset
