#include "biset/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "biset/error.hpp"
#include "biset/symmetry.hpp"

namespace biset {

void set_thread_cap(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

void apply_thread_env() {
    const char* env = std::getenv("BISET_THREADS");
    if (env == nullptr || *env == '\0') return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n <= 0) {
        throw PreconditionError("BISET_THREADS must be a positive integer, got '" +
                                std::string(env) + "'");
    }
    set_thread_cap(static_cast<int>(n));
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

std::optional<IdentitySample> identity_at(const MetricFunction& f, const Cortege32& c) {
    try {
        const CortegeJets jets = cortege_jets(f, c);
        const auto relations = relations6_residual(jets);
        IdentitySample s;
        s.ps = ps_check(f, c).normalized();
        s.relation1 = relations[0].normalized();
        s.relation2 = relations[1].normalized();
        s.product = minor_product_identity_residual(jets).normalized();
        return s;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

std::optional<RankSample> rank_at(const MetricFunction& f, const Cortege32& c, double rel_tol) {
    try {
        const FunctionalMatrix m = build_functional_matrix(f, c);
        RankSample s;
        s.singular_values = singular_values(m);
        s.rank = numeric_rank(m, rel_tol);
        return s;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

/// Runs body(i) for every index; the first exception (lowest index) is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

double table_cortege_residual(const Matrix& v, const TableCortege& c) {
    const double a = v(c.i, c.a), b = v(c.i, c.b);
    const double d = v(c.j, c.a), e = v(c.j, c.b);
    const double g = v(c.k, c.a), h = v(c.k, c.b);
    const double m_ij = a * e - b * d;
    const double m_ik = a * h - b * g;
    const double m_jk = d * h - e * g;
    const double scale = std::max({std::abs(m_ij), std::abs(m_ik), std::abs(m_jk)});
    if (scale == 0.0) return 0.0;
    return std::abs(m_ij - m_ik + m_jk) / scale;
}

namespace serial {

std::vector<std::optional<IdentitySample>> identity_samples(const MetricFunction& f,
                                                            std::span<const Cortege32> cs) {
    std::vector<std::optional<IdentitySample>> out(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) out[i] = identity_at(f, cs[i]);
    return out;
}

std::vector<std::optional<RankSample>> rank_samples(const MetricFunction& f,
                                                    std::span<const Cortege32> cs, double rel_tol) {
    std::vector<std::optional<RankSample>> out(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) out[i] = rank_at(f, cs[i], rel_tol);
    return out;
}

std::vector<double> detect_residuals(const Matrix& values, std::span<const TableCortege> cs) {
    std::vector<double> out(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) out[i] = table_cortege_residual(values, cs[i]);
    return out;
}

}  // namespace serial

namespace parallel {

std::vector<std::optional<IdentitySample>> identity_samples(const MetricFunction& f,
                                                            std::span<const Cortege32> cs) {
    std::vector<std::optional<IdentitySample>> out(cs.size());
    parallel_for(cs.size(), [&](std::size_t i) { out[i] = identity_at(f, cs[i]); });
    return out;
}

std::vector<std::optional<RankSample>> rank_samples(const MetricFunction& f,
                                                    std::span<const Cortege32> cs, double rel_tol) {
    std::vector<std::optional<RankSample>> out(cs.size());
    parallel_for(cs.size(), [&](std::size_t i) { out[i] = rank_at(f, cs[i], rel_tol); });
    return out;
}

std::vector<double> detect_residuals(const Matrix& values, std::span<const TableCortege> cs) {
    std::vector<double> out(cs.size());
    parallel_for(cs.size(), [&](std::size_t i) { out[i] = table_cortege_residual(values, cs[i]); });
    return out;
}

}  // namespace parallel

std::vector<std::optional<IdentitySample>> identity_samples(const MetricFunction& f,
                                                            std::span<const Cortege32> cs,
                                                            Exec exec) {
    return exec == Exec::Serial ? serial::identity_samples(f, cs) : parallel::identity_samples(f, cs);
}

std::vector<std::optional<RankSample>> rank_samples(const MetricFunction& f,
                                                    std::span<const Cortege32> cs, double rel_tol,
                                                    Exec exec) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw PreconditionError("rank tolerance must lie in (0, 1)");
    }
    return exec == Exec::Serial ? serial::rank_samples(f, cs, rel_tol)
                                : parallel::rank_samples(f, cs, rel_tol);
}

std::vector<double> detect_residuals(const Matrix& values, std::span<const TableCortege> cs,
                                     Exec exec) {
    return exec == Exec::Serial ? serial::detect_residuals(values, cs)
                                : parallel::detect_residuals(values, cs);
}

SeriesStats summarize(std::span<const double> values) {
    SeriesStats s;
    s.count = values.size();
    if (values.empty()) return s;
    std::vector<double> sorted(values.begin(), values.end());
    for (auto& v : sorted) {
        if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    }
    std::sort(sorted.begin(), sorted.end());
    s.max = sorted.back();
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return s;
}

}  // namespace biset
