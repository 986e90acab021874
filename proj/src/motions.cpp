#include "biset/motions.hpp"

#include <cmath>

#include "biset/error.hpp"

namespace biset {

Motion::Motion(double a, double b) : a_(a), b_(b) {
    if (!(std::abs(a) > 1e-300)) throw PreconditionError("motion scale a must be non-zero");
}

Point3 motion_apply(const Motion& m, const Point3& p) {
    const double xi = p.xi / m.a();
    return {m.a() * p.x + m.b(), xi, p.eta - m.b() * xi};
}

Motion motion_compose(const Motion& m2, const Motion& m1) {
    return {m2.a() * m1.a(), m2.a() * m1.b() + m2.b()};
}

Motion motion_inverse(const Motion& m) { return {1.0 / m.a(), -m.b() / m.a()}; }

double invariance_residual(const Motion& m, const Point3& p) {
    const Point3 q = motion_apply(m, p);
    return (q.x * q.xi + q.eta) - (p.x * p.xi + p.eta);
}

}  // namespace biset
