#include "biset/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "biset/error.hpp"

namespace biset {

MeasurementTable::MeasurementTable(Matrix values, std::optional<Mask> missing)
    : values_(std::move(values)), missing_(std::move(missing)) {
    if (missing_ && (missing_->rows() != values_.rows() || missing_->cols() != values_.cols())) {
        throw DimensionError("missing-entry mask does not match the table shape");
    }
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        for (Eigen::Index a = 0; a < values_.cols(); ++a) {
            if (missing_ && (*missing_)(i, a)) {
                values_(i, a) = 0.0;
                continue;
            }
            if (!std::isfinite(values_(i, a))) {
                throw PreconditionError("non-finite table entry at row " + std::to_string(i) +
                                        ", column " + std::to_string(a));
            }
        }
    }
}

bool operator==(const MeasurementTable& a, const MeasurementTable& b) {
    if (a.values_.rows() != b.values_.rows() || a.values_.cols() != b.values_.cols()) return false;
    if (a.has_missing() != b.has_missing()) return false;
    if (a.has_missing() && !(*a.missing_ == *b.missing_).all()) return false;
    return (a.values_.array() == b.values_.array()).all();
}

MeasurementTable generate_table(const Coordinates& coords, double noise_sigma, std::uint64_t seed) {
    if (!(noise_sigma >= 0.0)) throw PreconditionError("noise sigma must be non-negative");
    if (coords.xi.size() != coords.eta.size()) {
        throw DimensionError("xi and eta must have the same length");
    }
    Matrix values = coords.x * coords.xi.transpose();
    values.rowwise() += coords.eta.transpose();
    if (noise_sigma > 0.0) {
        std::mt19937_64 engine(seed);
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            for (Eigen::Index a = 0; a < values.cols(); ++a) values(i, a) += noise(engine);
        }
    }
    return MeasurementTable(std::move(values));
}

MeasurementTable generate_metric_table(const MetricFunction& f, const Coordinates& coords) {
    if (coords.xi.size() != coords.eta.size()) {
        throw DimensionError("xi and eta must have the same length");
    }
    Matrix values(coords.x.size(), coords.xi.size());
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index a = 0; a < values.cols(); ++a) {
            values(i, a) = f(coords.x(i), coords.xi(a), coords.eta(a));
        }
    }
    return MeasurementTable(std::move(values));
}

Coordinates random_coordinates(std::size_t p, std::size_t q, std::uint64_t seed, ProbeRange range) {
    ProbeSampler sampler(seed, range);
    Coordinates c;
    c.x.resize(static_cast<Eigen::Index>(p));
    c.xi.resize(static_cast<Eigen::Index>(q));
    c.eta.resize(static_cast<Eigen::Index>(q));
    for (auto& v : c.x) v = sampler.coordinate();
    for (Eigen::Index a = 0; a < c.xi.size(); ++a) {
        c.xi(a) = sampler.coordinate();
        c.eta(a) = sampler.coordinate();
    }
    return c;
}

std::vector<TableCortege> detect_corteges(Eigen::Index p, Eigen::Index q, std::uint64_t seed) {
    const auto pp = static_cast<double>(p);
    const auto qq = static_cast<double>(q);
    const double total = pp * (pp - 1) * (pp - 2) / 6.0 * (qq * (qq - 1) / 2.0);
    std::vector<TableCortege> out;
    if (total <= static_cast<double>(kDetectCortegeCap)) {
        out.reserve(static_cast<std::size_t>(total));
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                for (int k = j + 1; k < p; ++k)
                    for (int a = 0; a < q; ++a)
                        for (int b = a + 1; b < q; ++b) out.push_back({i, j, k, a, b});
        return out;
    }
    std::mt19937_64 engine(seed);
    std::uniform_int_distribution<int> row(0, static_cast<int>(p) - 1);
    std::uniform_int_distribution<int> col(0, static_cast<int>(q) - 1);
    out.reserve(kDetectCortegeCap);
    while (out.size() < kDetectCortegeCap) {
        std::array<int, 3> r{row(engine), row(engine), row(engine)};
        std::array<int, 2> c{col(engine), col(engine)};
        if (r[0] == r[1] || r[0] == r[2] || r[1] == r[2] || c[0] == c[1]) continue;
        std::sort(r.begin(), r.end());
        std::sort(c.begin(), c.end());
        out.push_back({r[0], r[1], r[2], c[0], c[1]});
    }
    return out;
}

namespace {

void require_complete(const MeasurementTable& t) {
    if (t.has_missing()) {
        throw MissingEntriesError(
            "table has missing entries; recovery and detection need a complete table");
    }
}

}  // namespace

DetectReport detect_ps(const MeasurementTable& t, double tol, std::uint64_t seed, Exec exec) {
    if (t.rows() < 3 || t.cols() < 2) {
        throw TableTooSmallError("detection needs at least 3 rows and 2 columns, got " +
                                 std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
    }
    require_complete(t);
    const auto corteges = detect_corteges(t.rows(), t.cols(), seed);
    const auto residuals = detect_residuals(t.values(), corteges, exec);
    const SeriesStats stats = summarize(residuals);
    DetectReport r;
    r.max_residual = stats.max;
    r.median_residual = stats.median;
    r.corteges_checked = stats.count;
    r.sampled = corteges.size() == kDetectCortegeCap &&
                static_cast<double>(t.rows()) * (t.rows() - 1) * (t.rows() - 2) / 6.0 *
                        (static_cast<double>(t.cols()) * (t.cols() - 1) / 2.0) >
                    static_cast<double>(kDetectCortegeCap);
    r.verdict = stats.max <= tol;
    return r;
}

Recovery recover_coordinates(const MeasurementTable& t) {
    if (t.rows() < 2 || t.cols() < 1) {
        throw TableTooSmallError("recovery needs at least 2 rows and 1 column, got " +
                                 std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
    }
    require_complete(t);
    const Matrix& values = t.values();
    const Vector means = values.colwise().mean().transpose();
    Matrix centered = values;
    centered.rowwise() -= means.transpose();

    const double norm = values.norm();
    if (!(centered.norm() > 1e-12 * norm)) {
        throw DegenerateTableError(
            "centered table is numerically zero (all rows identical, every xi = 0); "
            "x is not identifiable");
    }

    Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinU);
    Vector x = svd.matrixU().col(0);
    x.array() -= x.mean();
    x.normalize();

    Gauge gauge;
    x.cwiseAbs().maxCoeff(&gauge.pivot_index);
    if (x(gauge.pivot_index) < 0.0) x = -x;

    Coordinates coords;
    coords.xi = centered.transpose() * x;
    coords.eta = means;
    coords.x = std::move(x);
    coords.gauge = gauge;

    Recovery r;
    r.residual = (values - reconstruct(coords)).norm() / norm;
    r.coords = std::move(coords);
    return r;
}

Matrix reconstruct(const Coordinates& c) {
    Matrix m = c.x * c.xi.transpose();
    m.rowwise() += c.eta.transpose();
    return m;
}

double gauge_distance(const Coordinates& c1, const Coordinates& c2) {
    if (c1.x.size() != c2.x.size() || c1.xi.size() != c2.xi.size() ||
        c1.eta.size() != c2.eta.size() || c1.xi.size() != c1.eta.size()) {
        throw DimensionError("coordinate sets have mismatched dimensions");
    }
    if (c1.x.size() < 2) throw PreconditionError("gauge fit needs at least two x-coordinates");
    const double m1 = c1.x.mean();
    const double m2 = c2.x.mean();
    const Vector d1 = c1.x.array() - m1;
    const double var = d1.squaredNorm();
    if (var == 0.0) throw PreconditionError("x-coordinates of the first set are all equal");
    const double a = d1.dot((c2.x.array() - m2).matrix()) / var;
    const double b = m2 - a * m1;
    if (!(std::abs(a) > 1e-300)) return std::numeric_limits<double>::infinity();

    const Vector x = (a * c1.x.array() + b).matrix();
    const Vector xi = c1.xi / a;
    const Vector eta = c1.eta - b * xi;
    return std::max({(x - c2.x).lpNorm<Eigen::Infinity>(), (xi - c2.xi).lpNorm<Eigen::Infinity>(),
                     (eta - c2.eta).lpNorm<Eigen::Infinity>()});
}

}  // namespace biset
