#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "biset/catalog.hpp"
#include "biset/error.hpp"
#include "biset/linalg.hpp"
#include "biset/symmetry.hpp"
#include "oracles.hpp"

using namespace biset;

namespace {

// x = (0,1,2), α = (1,0), β = (2,3)
const Cortege32 kPaperCortege{0, 1, 2, 1, 0, 2, 3};

oracle::Grid<double> to_grid(const Matrix& m) {
    oracle::Grid<double> g(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) g[static_cast<std::size_t>(r)].push_back(m(r, c));
    }
    return g;
}

std::vector<MetricFunction> general_forms() {
    using namespace univariate;
    namespace bv = bivariate;
    return {
        general_form_metric(cubic(), exp(), bv::exp_sum(), bv::eta()),
        general_form_metric(identity(), neg_exp(), bv::xi(), bv::eta()),
        general_form_metric(cubic(), identity(), bv::xi_sq_plus_eta(), bv::xi_eta_plus_one()),
        general_form_metric(affine(2, -1), cubic(), bv::xi_eta_plus_one(), bv::eta()),
        general_form_metric(identity(), exp(), bv::eta(), bv::xi_sq_plus_eta()),
        general_form_metric(exp(), identity(), bv::xi(), bv::eta()),
    };
}

double rel_error(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("functional matrix: canonical layout") {
    ProbeSampler sampler(1);
    for (const auto& c : sampler.corteges(200)) {
        const auto m = build_functional_matrix(canonical_metric(), c);
        CHECK(m == canonical_matrix16(c));
    }
    const auto eta = build_functional_matrix(expression_metric("eta"), kPaperCortege);
    CHECK(eta.topRows<3>().isZero(0.0));
}

TEST_CASE("functional matrix: zero pattern holds for every metric") {
    std::vector<MetricFunction> fs = general_forms();
    fs.push_back(canonical_metric());
    fs.push_back(expression_metric("x*xi + x^2*eta"));
    fs.push_back(expression_metric("sin(x + xi) * cos(eta - x)"));
    ProbeSampler sampler(2);
    for (const auto& f : fs) {
        for (const auto& c : sampler.corteges(100)) {
            CHECK(has_functional_zero_pattern(build_functional_matrix(f, c)));
        }
    }
    FunctionalMatrix bad = canonical_matrix16(kPaperCortege);
    bad(3, 1) = 1.0;
    CHECK_FALSE(has_functional_zero_pattern(bad));
}

TEST_CASE("numeric rank: examples") {
    CHECK(numeric_rank(Matrix::Identity(6, 6), 1e-9) == 6);
    CHECK(numeric_rank(Matrix::Zero(7, 6), 1e-9) == 0);
    CHECK(numeric_rank(canonical_matrix16(kPaperCortege), kRankRelTol) == 5);
    CHECK_THROWS_AS(numeric_rank(Matrix::Identity(2, 2), 0.0), PreconditionError);
    CHECK_THROWS_AS(numeric_rank(Matrix::Identity(2, 2), 1.0), PreconditionError);
}

TEST_CASE("numeric rank: non-PS control against an exact rational minor") {
    // f = xξ + x²η at integer coordinates; every entry is an integer, so the
    // rational matrix is the double matrix exactly.
    const Cortege32 c{1, 2, 3, 1, 2, 3, 1};
    const auto m = build_functional_matrix(expression_metric("x*xi + x^2*eta"), c);
    oracle::Grid<oracle::Rational> exact(7);
    const std::array<double, 3> xs{c.x_i, c.x_j, c.x_k};
    const std::array<std::array<double, 2>, 2> pts{{{c.xi_a, c.eta_a}, {c.xi_b, c.eta_b}}};
    for (auto& row : exact) row.assign(6, 0);
    for (int col = 0; col < 6; ++col) {
        const double x = xs[static_cast<std::size_t>(col / 2)];
        const auto& p = pts[static_cast<std::size_t>(col % 2)];
        const int base = col % 2 == 0 ? 3 : 5;
        exact[static_cast<std::size_t>(col / 2)][static_cast<std::size_t>(col)] =
            oracle::Rational(static_cast<long>(p[0] + 2 * x * p[1]));
        exact[static_cast<std::size_t>(base)][static_cast<std::size_t>(col)] = static_cast<long>(x);
        exact[static_cast<std::size_t>(base + 1)][static_cast<std::size_t>(col)] =
            static_cast<long>(x * x);
    }
    for (int r = 0; r < 7; ++r) {
        for (int col = 0; col < 6; ++col) {
            CHECK(oracle::Rational(m(r, col)) ==
                  exact[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
        }
    }
    oracle::Grid<oracle::Rational> top(exact.begin(), exact.begin() + 6);
    CHECK(oracle::cofactor_det(top) != 0);
    CHECK(oracle::exact_rank(exact) == 6);
    CHECK(numeric_rank(m, kRankRelTol) == 6);
}

TEST_CASE("numeric rank: PS metrics stay at rank 5") {
    auto fs = general_forms();
    fs.push_back(canonical_metric());
    ProbeSampler sampler(3);
    const auto cs = sampler.corteges(1000);
    for (const auto& f : fs) {
        int worst = 0;
        for (const auto& c : cs) worst = std::max(worst, numeric_rank(build_functional_matrix(f, c), kRankRelTol));
        INFO(f.description());
        CHECK(worst <= 5);
    }
    for (const auto& c : cs) CHECK(numeric_rank(canonical_matrix16(c), kRankRelTol) == 5);
}

TEST_CASE("ps residual: examples") {
    CHECK(ps_residual(1, 2, 1, 2, 5, 7) == 0.0);
    CHECK(ps_residual(0, 3, 1, 5, 2, 7) == 0.0);
    CHECK(ps_residual(0, 0, 1, 0, 0, 1) == 1.0);
    const auto v = cortege_values(canonical_metric(), kPaperCortege);
    CHECK(v == std::array<double, 6>{0, 3, 1, 5, 2, 7});
}

TEST_CASE("ps residual: matches a cofactor oracle") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int n = 0; n < 500; ++n) {
        std::array<double, 6> v{};
        for (auto& e : v) e = u(rng);
        const oracle::Grid<double> g{{v[0], v[1], 1}, {v[2], v[3], 1}, {v[4], v[5], 1}};
        const auto r = ps_check(v);
        CHECK(std::abs(r.value - oracle::cofactor_det(g)) <= 1e-14 * std::max(1.0, r.scale));
    }
}

TEST_CASE("ps residual: row swaps negate exactly") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int n = 0; n < 2000; ++n) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng), e = u(rng), g = u(rng);
        const double base = ps_residual(a, b, c, d, e, g);
        CHECK(ps_residual(c, d, a, b, e, g) == -base);
        CHECK(ps_residual(a, b, e, g, c, d) == -base);
        CHECK(ps_residual(e, g, c, d, a, b) == -base);
    }
}

TEST_CASE("ps residual: canonical and general-form metrics vanish") {
    ProbeSampler sampler(6);
    const auto cs = sampler.corteges(1000);
    for (const auto& c : cs) CHECK(ps_check(canonical_metric(), c).normalized() <= 1e-9);
    for (const auto& f : general_forms()) {
        double worst = 0;
        for (const auto& c : cs) worst = std::max(worst, ps_check(f, c).normalized());
        INFO(f.description());
        CHECK(worst <= 1e-8);
    }
    double control = 0;
    for (const auto& c : cs) control = std::max(control, ps_check(expression_metric("x*xi + x^2*eta"), c).normalized());
    CHECK(control > 1e-2);
}

TEST_CASE("minors: examples") {
    const Cortege32 c{0.5, 1, 2, 0.7, -0.3, 1.3, 0.9};
    CHECK(minor_A(canonical_metric(), c) == -1.0);

    const oracle::Grid<double> c1{{c.xi_a, c.xi_b, 0, 0},
                                  {0, 0, c.xi_a, c.xi_b},
                                  {c.x_j, 0, c.x_k, 0},
                                  {0, c.x_j, 0, c.x_k}};
    CHECK(minor_C1(canonical_metric(), c) == doctest::Approx(oracle::cofactor_det(c1)).epsilon(1e-14));

    CHECK(minor_A(expression_metric("x*(xi + eta) + (xi + eta)"), c) == 0.0);
}

TEST_CASE("minors: B and C follow the stated substitution") {
    const auto f = expression_metric("exp(x*xi) + x^2*eta^3 + sin(xi*eta)");
    ProbeSampler sampler(7);
    for (const auto& c : sampler.corteges(100)) {
        const auto j = cortege_jets(f, c);
        auto grid4 = [&](double r3a, double r3c, double r4b, double r4d) {
            return oracle::Grid<double>{{j.ja.d_x(), j.jb.d_x(), 0, 0},
                                        {0, 0, j.ka.d_x(), j.kb.d_x()},
                                        {r3a, 0, r3c, 0},
                                        {0, r4b, 0, r4d}};
        };
        const auto m = minors(j);
        const double tol = 1e-12;
        CHECK(rel_error(m.B1, oracle::cofactor_det(grid4(j.ja.d_eta(), j.ka.d_eta(), j.jb.d_xi(), j.kb.d_xi()))) <= tol);
        CHECK(rel_error(m.C1, oracle::cofactor_det(grid4(j.ja.d_xi(), j.ka.d_xi(), j.jb.d_xi(), j.kb.d_xi()))) <= tol);
        CHECK(rel_error(m.B2, oracle::cofactor_det(grid4(j.ja.d_eta(), j.ka.d_eta(), j.jb.d_eta(), j.kb.d_eta()))) <= tol);
        CHECK(rel_error(m.C2, oracle::cofactor_det(grid4(j.ja.d_xi(), j.ka.d_xi(), j.jb.d_eta(), j.kb.d_eta()))) <= tol);
    }
}

TEST_CASE("relations: vanish for PS metrics") {
    auto fs = general_forms();
    fs.push_back(canonical_metric());
    ProbeSampler sampler(8);
    const auto cs = sampler.corteges(1000);
    for (const auto& f : fs) {
        double worst = 0;
        for (const auto& c : cs) {
            for (const auto& r : relations6_residual(f, c)) worst = std::max(worst, r.normalized());
        }
        INFO(f.description());
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("relations: non-PS control violates them") {
    const auto f = expression_metric("x*xi + x^2*eta");
    const Cortege32 c{1, 2, 3, 1, 2, 3, 1};
    const auto r = relations6_residual(f, c);
    CHECK(std::max(r[0].normalized(), r[1].normalized()) > 1e-3);
}

TEST_CASE("relations: equal the 6x6 determinants with row 7 or row 6 deleted") {
    const std::vector<MetricFunction> fs{expression_metric("x*xi + x^2*eta"),
                                         expression_metric("exp(x*xi) + x^2*eta^3"),
                                         canonical_metric()};
    ProbeSampler sampler(9);
    for (const auto& f : fs) {
        for (const auto& c : sampler.corteges(200)) {
            const auto m = build_functional_matrix(f, c);
            const auto r = relations6_residual(f, c);
            oracle::Grid<double> drop7 = to_grid(m), drop6 = to_grid(m);
            drop7.erase(drop7.begin() + 6);
            drop6.erase(drop6.begin() + 5);
            const double d7 = oracle::cofactor_det(drop7);
            const double d6 = oracle::cofactor_det(drop6);
            CHECK(std::abs(r[0].value - d7) <= 1e-9 * std::max(1.0, r[0].scale));
            CHECK(std::abs(r[1].value - d6) <= 1e-9 * std::max(1.0, r[1].scale));
            CHECK(std::abs(jacobian6_deleting_row(m, 6) - d7) <= 1e-9 * std::max(1.0, r[0].scale));
            CHECK(std::abs(jacobian6_deleting_row(m, 5) - d6) <= 1e-9 * std::max(1.0, r[1].scale));
        }
    }
    CHECK_THROWS_AS(jacobian6_deleting_row(FunctionalMatrix::Zero(), 7), PreconditionError);
}

TEST_CASE("product identity: holds for every metric") {
    std::vector<MetricFunction> fs = general_forms();
    fs.push_back(canonical_metric());
    fs.push_back(expression_metric("x*xi + x^2*eta"));
    fs.push_back(expression_metric("exp(x*xi) + x^2*eta^3 + sin(xi*eta)"));
    ProbeSampler sampler(10);
    const auto cs = sampler.corteges(1000);
    for (const auto& f : fs) {
        double worst = 0;
        for (const auto& c : cs) worst = std::max(worst, minor_product_identity_residual(f, c).normalized());
        INFO(f.description());
        CHECK(worst <= 1e-9);
    }
    const Cortege32 degenerate{0.5, 1.25, 1.25, 0.7, -0.3, 1.3, 0.9};
    const auto r = minor_product_identity_residual(expression_metric("x*xi + x^2*eta"), degenerate);
    CHECK(r.value == 0.0);
}

TEST_CASE("minor5: closed form and cofactor oracle") {
    const Cortege32 c{0, 1, 2, 1, 0, 2, 3};
    CHECK(minor5_canonical(c) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(minor5_canonical({0.5, 1, 2, 0.0, 1, 2, 3}) == 0.0);
    CHECK(minor5_canonical({1, 1, 2, 1.5, 1, 2, 3}) == 0.0);

    ProbeSampler sampler(11);
    for (const auto& s : sampler.corteges(1000)) {
        const double expected = -s.xi_a * s.xi_b * s.xi_b * (s.x_i - s.x_j);
        const double got = minor5_canonical(s);
        CHECK(std::abs(got - expected) <= 1e-10 * std::abs(expected));
        const auto g = to_grid(canonical_matrix16(s).topLeftCorner<5, 5>());
        CHECK(std::abs(oracle::cofactor_det(g) - expected) <= 1e-10 * std::abs(expected));
    }
}
