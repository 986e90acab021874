#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "biset/geometry.hpp"
#include "biset/linalg.hpp"

// Data-parallel sweeps. Every kernel has a serial reference and an OpenMP
// version; both write one result per input index and never reduce inside the
// parallel region, so their outputs are bit-identical.

namespace biset {

enum class Exec { Serial, Parallel };

/// Caps OpenMP threads (≤ 0 leaves the runtime default). No-op without OpenMP.
void set_thread_cap(int threads);
/// Reads BISET_THREADS and applies it through set_thread_cap.
void apply_thread_env();
int max_threads();

/// Row triple and column pair of a measurement table.
struct TableCortege {
    int i, j, k;
    int a, b;
};

/// Per-cortege outcome of the metric identity checks. Empty when f is undefined
/// somewhere on the cortege.
struct IdentitySample {
    double ps = 0;          // normalized ps determinant on unscaled values
    double relation1 = 0;   // normalized first sixth-order relation
    double relation2 = 0;
    double product = 0;     // normalized minor product identity
};

struct RankSample {
    int rank = 0;
    std::vector<double> singular_values;
};

namespace serial {
std::vector<std::optional<IdentitySample>> identity_samples(const MetricFunction& f,
                                                            std::span<const Cortege32> cs);
std::vector<std::optional<RankSample>> rank_samples(const MetricFunction& f,
                                                    std::span<const Cortege32> cs, double rel_tol);
std::vector<double> detect_residuals(const Matrix& values, std::span<const TableCortege> cs);
}  // namespace serial

namespace parallel {
std::vector<std::optional<IdentitySample>> identity_samples(const MetricFunction& f,
                                                            std::span<const Cortege32> cs);
std::vector<std::optional<RankSample>> rank_samples(const MetricFunction& f,
                                                    std::span<const Cortege32> cs, double rel_tol);
std::vector<double> detect_residuals(const Matrix& values, std::span<const TableCortege> cs);
}  // namespace parallel

std::vector<std::optional<IdentitySample>> identity_samples(const MetricFunction& f,
                                                            std::span<const Cortege32> cs,
                                                            Exec exec);
std::vector<std::optional<RankSample>> rank_samples(const MetricFunction& f,
                                                    std::span<const Cortege32> cs, double rel_tol,
                                                    Exec exec);
std::vector<double> detect_residuals(const Matrix& values, std::span<const TableCortege> cs,
                                     Exec exec);

/// Normalized ps determinant of one table cortege: det / max |2×2 minor|.
double table_cortege_residual(const Matrix& values, const TableCortege& c);

/// Ordered summary of a residual series.
struct SeriesStats {
    double max = 0;
    double median = 0;
    std::size_t count = 0;
};
SeriesStats summarize(std::span<const double> values);

}  // namespace biset
