#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "biset/error.hpp"
#include "biset/io.hpp"
#include "biset/motions.hpp"
#include "biset/recovery.hpp"

using namespace biset;

namespace {

Coordinates coords(std::initializer_list<double> x, std::initializer_list<double> xi,
                   std::initializer_list<double> eta) {
    Coordinates c;
    c.x = Eigen::Map<const Vector>(x.begin(), static_cast<Eigen::Index>(x.size()));
    c.xi = Eigen::Map<const Vector>(xi.begin(), static_cast<Eigen::Index>(xi.size()));
    c.eta = Eigen::Map<const Vector>(eta.begin(), static_cast<Eigen::Index>(eta.size()));
    return c;
}

Matrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

Coordinates apply(const Motion& m, const Coordinates& c) {
    Coordinates out = c;
    out.gauge.reset();
    for (Eigen::Index i = 0; i < c.x.size(); ++i) out.x(i) = motion_apply(m, {c.x(i), 0, 0}).x;
    for (Eigen::Index a = 0; a < c.xi.size(); ++a) {
        const auto p = motion_apply(m, {0, c.xi(a), c.eta(a)});
        out.xi(a) = p.xi;
        out.eta(a) = p.eta;
    }
    return out;
}

}  // namespace

TEST_CASE("generate: examples") {
    const auto t1 = generate_table(coords({0, 1}, {1}, {0}), 0.0, 0);
    CHECK(t1.values() == matrix({{0}, {1}}));
    const auto t2 = generate_table(coords({0, 1, 2}, {1, 2}, {0, 3}), 0.0, 0);
    CHECK(t2.values() == matrix({{0, 3}, {1, 5}, {2, 7}}));

    const auto c = coords({0, 1, 2}, {1, 2}, {0, 3});
    const auto n1 = generate_table(c, 0.1, 42);
    const auto n2 = generate_table(c, 0.1, 42);
    const auto n3 = generate_table(c, 0.1, 43);
    CHECK(n1 == n2);
    CHECK_FALSE(n1 == n3);
    CHECK_FALSE(n1 == t2);
    CHECK_THROWS_AS(generate_table(c, -1.0, 0), PreconditionError);
}

TEST_CASE("table: entries must be finite") {
    CHECK_THROWS_AS(MeasurementTable(matrix({{1, NAN}, {2, 3}})), PreconditionError);
    Mask mask = Mask::Constant(2, 2, false);
    mask(0, 1) = true;
    const MeasurementTable t(matrix({{1, NAN}, {2, 3}}), mask);
    CHECK(t.has_missing());
}

TEST_CASE("detect: examples") {
    const auto ok = detect_ps(MeasurementTable(matrix({{0, 3}, {1, 5}, {2, 7}})), 1e-9);
    CHECK(ok.max_residual == 0.0);
    CHECK(ok.verdict);
    CHECK(ok.corteges_checked == 1);

    const auto bad = detect_ps(MeasurementTable(matrix({{0, 0}, {1, 0}, {0, 1}})), 1e-9);
    CHECK(bad.max_residual == 1.0);
    CHECK_FALSE(bad.verdict);

    const auto big = detect_ps(generate_table(random_coordinates(8, 5, 1), 0.0, 0), 1e-6);
    CHECK(big.verdict);
    CHECK(big.max_residual <= 1e-10);
    CHECK(big.corteges_checked == 56 * 10);

    CHECK_THROWS_AS(detect_ps(MeasurementTable(matrix({{0, 3}, {1, 5}})), 1e-9), TableTooSmallError);
    CHECK_THROWS_AS(detect_ps(MeasurementTable(matrix({{0}, {1}, {2}})), 1e-9), TableTooSmallError);
}

TEST_CASE("detect: large tables are sampled deterministically") {
    const auto cs1 = detect_corteges(60, 40, 5);
    const auto cs2 = detect_corteges(60, 40, 5);
    REQUIRE(cs1.size() == kDetectCortegeCap);
    CHECK(std::equal(cs1.begin(), cs1.end(), cs2.begin(), [](const TableCortege& a, const TableCortege& b) {
        return a.i == b.i && a.j == b.j && a.k == b.k && a.a == b.a && a.b == b.b;
    }));
    for (const auto& c : cs1) {
        CHECK((c.i < c.j && c.j < c.k && c.a < c.b));
    }
    const auto r = detect_ps(generate_table(random_coordinates(60, 40, 6), 0.0, 0), 1e-6);
    CHECK(r.sampled);
    CHECK(r.verdict);
}

TEST_CASE("detect: rejects the non-PS control") {
    const auto f = expression_metric("x*xi + x^2*eta");
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> u(-5, 5);
    for (int n = 0; n < 20; ++n) {
        Coordinates c;
        c.x = Vector(6);
        c.xi = Vector(4);
        c.eta = Vector(4);
        for (auto& v : c.x) v = u(rng);
        for (Eigen::Index a = 0; a < 4; ++a) {
            c.xi(a) = u(rng);
            c.eta(a) = u(rng);
        }
        const auto r = detect_ps(generate_metric_table(f, c), 1e-6);
        if (r.max_residual == 0.0) continue;  // degenerate draw, all values collinear
        CHECK(r.max_residual > 1e-2);
        CHECK_FALSE(r.verdict);
    }
}

TEST_CASE("detect: motion acting on the coordinates leaves the table unchanged") {
    // Dyadic coordinates and power-of-two scales keep every operation exact,
    // so the tables must agree bit for bit.
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<int> k(-32, 32);
    std::uniform_int_distribution<int> e(-2, 2);
    auto dyadic = [&] {
        int v = 0;
        while (v == 0) v = k(rng);
        return v / 16.0;
    };
    for (int n = 0; n < 100; ++n) {
        Coordinates c;
        c.x = Vector(5);
        c.xi = Vector(3);
        c.eta = Vector(3);
        for (auto& v : c.x) v = dyadic();
        for (Eigen::Index a = 0; a < 3; ++a) {
            c.xi(a) = dyadic();
            c.eta(a) = dyadic();
        }
        const Motion m(std::ldexp(k(rng) < 0 ? -1.0 : 1.0, e(rng)), k(rng) / 4.0);
        const auto t = generate_table(c, 0.0, 0);
        const auto moved = generate_table(apply(m, c), 0.0, 0);
        CHECK(t == moved);
        CHECK(detect_ps(t, 1e-6).verdict == detect_ps(moved, 1e-6).verdict);
    }
}

TEST_CASE("recover: examples") {
    const MeasurementTable t(matrix({{0, 3}, {1, 5}, {2, 7}}));
    const auto r = recover_coordinates(t);
    CHECK(r.residual <= 1e-12);
    CHECK((reconstruct(r.coords) - t.values()).norm() <= 1e-12 * t.values().norm());
    CHECK(gauge_distance(r.coords, coords({0, 1, 2}, {1, 2}, {0, 3})) <= 1e-12);
    REQUIRE(r.coords.gauge.has_value());
    CHECK(std::abs(r.coords.x.mean()) <= 1e-15);
    CHECK(r.coords.x.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.coords.x(r.coords.gauge->pivot_index) > 0);

    CHECK_THROWS_AS(recover_coordinates(MeasurementTable(matrix({{4, 7}, {4, 7}, {4, 7}}))),
                    DegenerateTableError);
    CHECK_THROWS_AS(recover_coordinates(MeasurementTable(matrix({{4, 7}}))), TableTooSmallError);
    Mask mask = Mask::Constant(3, 2, false);
    mask(1, 1) = true;
    CHECK_THROWS_AS(recover_coordinates(MeasurementTable(matrix({{0, 3}, {1, 0}, {2, 7}}), mask)),
                    MissingEntriesError);
}

TEST_CASE("recover: noiseless round trip") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::size_t> pdist(2, 50), qdist(1, 50);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto truth = random_coordinates(pdist(rng), qdist(rng), seed);
        const auto t = generate_table(truth, 0.0, 0);
        const auto r = recover_coordinates(t);
        CHECK(r.residual <= 1e-10);
        CHECK(gauge_distance(r.coords, truth) <= 1e-8);
        CHECK((reconstruct(r.coords) - t.values()).norm() / t.values().norm() ==
              doctest::Approx(r.residual).epsilon(1e-12));
    }
}

TEST_CASE("recover: noise bound") {
    const double sigma = 1e-3;
    int within = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto t = generate_table(random_coordinates(8, 5, seed), sigma, seed + 1000);
        const auto r = recover_coordinates(t);
        within += r.residual <= 2 * sigma * std::sqrt(40.0) / t.values().norm();
    }
    CHECK(within >= 95);
}

TEST_CASE("recover: bit-reproducible") {
    const auto t = generate_table(random_coordinates(20, 10, 3), 1e-3, 4);
    const auto a = recover_coordinates(t);
    const auto b = recover_coordinates(t);
    CHECK(a.coords.x == b.coords.x);
    CHECK(a.coords.xi == b.coords.xi);
    CHECK(a.coords.eta == b.coords.eta);
    CHECK(a.residual == b.residual);
}

TEST_CASE("gauge distance: examples") {
    const auto c = random_coordinates(7, 4, 13);
    CHECK(gauge_distance(c, c) == 0.0);
    CHECK(gauge_distance(c, apply(Motion(-1.7, 0.4), c)) <= 1e-10);
    CHECK(gauge_distance(c, apply(Motion(0.3, -2.2), c)) <= 1e-10);

    auto p = c;
    const double delta = 0.01;
    p.eta(2) += delta;
    CHECK(gauge_distance(c, p) >= delta / 2);

    CHECK_THROWS_AS(gauge_distance(c, random_coordinates(6, 4, 1)), DimensionError);
    CHECK_THROWS_AS(gauge_distance(c, random_coordinates(7, 3, 1)), DimensionError);
}

TEST_CASE("csv: header detection, missing cells, errors") {
    std::istringstream plain("0,3\n1,5\n2,7\n");
    CHECK(read_table_csv(plain).values() == matrix({{0, 3}, {1, 5}, {2, 7}}));

    std::istringstream header("a,b\n0,3\n1,5\n2,7\n");
    CHECK(read_table_csv(header).values() == matrix({{0, 3}, {1, 5}, {2, 7}}));

    std::istringstream missing("0,3\n1,NA\n2,7\n");
    const auto t = read_table_csv(missing);
    CHECK(t.has_missing());
    CHECK((*t.missing())(1, 1));
    CHECK_THROWS_AS(recover_coordinates(t), MissingEntriesError);

    std::istringstream ragged("0,3\n1\n");
    CHECK_THROWS_AS(read_table_csv(ragged, "ragged.csv"), IoError);
    std::istringstream junk("0,3\n1,abc\n");
    CHECK_THROWS_AS(read_table_csv(junk), IoError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_table_csv(empty), IoError);
}

TEST_CASE("csv: write then read is lossless") {
    const auto t = generate_table(random_coordinates(9, 4, 14), 1e-3, 15);
    std::stringstream s;
    write_table_csv(s, t);
    CHECK(read_table_csv(s) == t);
}

TEST_CASE("json: values, nulls, errors") {
    std::istringstream ok(R"({"values": [[0, 3], [1, 5], [2, 7]]})");
    CHECK(read_table_json(ok).values() == matrix({{0, 3}, {1, 5}, {2, 7}}));
    std::istringstream nulls(R"({"values": [[0, null], [1, 5], [2, 7]]})");
    CHECK(read_table_json(nulls).has_missing());
    std::istringstream bad(R"({"rows": []})");
    CHECK_THROWS_AS(read_table_json(bad), IoError);
    std::istringstream broken("{");
    CHECK_THROWS_AS(read_table_json(broken), IoError);
}

TEST_CASE("files: dispatch on extension and report the path") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = dir / "biset_test_table.csv";
    const auto json = dir / "biset_test_table.json";
    std::ofstream(csv) << "0,3\n1,5\n2,7\n";
    std::ofstream(json) << R"({"values": [[0, 3], [1, 5], [2, 7]]})";
    CHECK(read_table_file(csv.string()) == read_table_file(json.string()));
    std::filesystem::remove(csv);
    std::filesystem::remove(json);
    try {
        read_table_file((dir / "biset_no_such_table.csv").string());
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("biset_no_such_table.csv") != std::string::npos);
    }
}
