#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "biset/geometry.hpp"
#include "biset/kernels.hpp"
#include "biset/linalg.hpp"

namespace biset {

using Vector = Eigen::VectorXd;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// p×q table of observed metric values; rows are 𝔐-points, columns 𝔑-points.
class MeasurementTable {
public:
    /// Throws PreconditionError on a non-finite present entry. `missing(i, a)`
    /// marks pairs that were not observed; their values are ignored.
    explicit MeasurementTable(Matrix values, std::optional<Mask> missing = std::nullopt);

    const Matrix& values() const { return values_; }
    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }
    bool has_missing() const { return missing_.has_value() && missing_->any(); }
    const std::optional<Mask>& missing() const { return missing_; }

    friend bool operator==(const MeasurementTable& a, const MeasurementTable& b);

private:
    Matrix values_;
    std::optional<Mask> missing_;
};

struct Gauge {
    std::string convention = "mean(x)=0, |x|=1, largest |x_i| positive";
    Eigen::Index pivot_index = 0;  // entry of x fixed positive
};

/// Hidden coordinates: x_i for rows, (ξ_α, η_α) for columns.
struct Coordinates {
    Vector x;
    Vector xi;
    Vector eta;
    std::optional<Gauge> gauge;  // set when the gauge normalization holds
};

/// values[i][α] = x_i·ξ_α + η_α + ε with ε ~ N(0, σ²), reproducible per seed.
MeasurementTable generate_table(const Coordinates& coords, double noise_sigma, std::uint64_t seed);

/// values[i][α] = f(x_i, ξ_α, η_α), no noise.
MeasurementTable generate_metric_table(const MetricFunction& f, const Coordinates& coords);

/// Seeded random coordinates from the probe range.
Coordinates random_coordinates(std::size_t p, std::size_t q, std::uint64_t seed,
                               ProbeRange range = {});

inline constexpr std::size_t kDetectCortegeCap = 200000;

struct DetectReport {
    double max_residual = 0;
    double median_residual = 0;
    bool verdict = false;
    std::size_t corteges_checked = 0;
    bool sampled = false;
};

/// Normalized 3×3 ps determinant of every cortege (or a seeded sample of
/// kDetectCortegeCap corteges above the cap); verdict is max ≤ tol.
/// Throws TableTooSmallError for p < 3 or q < 2, MissingEntriesError for masked tables.
DetectReport detect_ps(const MeasurementTable& t, double tol, std::uint64_t seed = 0,
                       Exec exec = Exec::Parallel);

/// Corteges used by detect_ps, in evaluation order.
std::vector<TableCortege> detect_corteges(Eigen::Index p, Eigen::Index q, std::uint64_t seed);

struct Recovery {
    Coordinates coords;
    double residual = 0;  // ‖values − reconstruction‖_F / ‖values‖_F
};

/// Fits values ≈ x·ξᵀ + 1·ηᵀ: column centering removes η, the leading singular
/// pair of the centered table gives x and ξ, then the gauge is fixed.
/// Throws TableTooSmallError, MissingEntriesError or DegenerateTableError.
Recovery recover_coordinates(const MeasurementTable& t);

/// x·ξᵀ + 1·ηᵀ
Matrix reconstruct(const Coordinates& c);

/// Max-norm discrepancy between m·c1 and c2 for the motion m fitted to the
/// x-vectors by least squares. Throws DimensionError on size mismatch.
double gauge_distance(const Coordinates& c1, const Coordinates& c2);

}  // namespace biset
