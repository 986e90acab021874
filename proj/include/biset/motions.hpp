#pragma once

namespace biset {

/// Coordinates of one 𝔐-point and one 𝔑-point.
struct Point3 {
    double x = 0, xi = 0, eta = 0;
};

/// Element (a, b) of the two-parameter motion group
/// x' = a·x + b,  ξ' = ξ/a,  η' = η − b·ξ/a.
class Motion {
public:
    /// Throws PreconditionError unless |a| > 1e-300.
    Motion(double a, double b);

    static Motion identity() { return {1.0, 0.0}; }

    double a() const { return a_; }
    double b() const { return b_; }

    friend bool operator==(const Motion&, const Motion&) = default;

private:
    double a_;
    double b_;
};

Point3 motion_apply(const Motion& m, const Point3& p);

/// Motion equal to applying m1 first, then m2: (a2·a1, a2·b1 + b2).
Motion motion_compose(const Motion& m2, const Motion& m1);

Motion motion_inverse(const Motion& m);

/// (x'ξ' + η') − (xξ + η) after applying m to p.
double invariance_residual(const Motion& m, const Point3& p);

}  // namespace biset
