#include "biset/linalg.hpp"

#include <cmath>
#include <utility>

#include "biset/error.hpp"

namespace biset {

double determinant(Matrix m) {
    if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
    const Eigen::Index n = m.rows();
    double det = 1.0;
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        for (Eigen::Index r = col + 1; r < n; ++r) {
            if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
        }
        if (m(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            m.row(pivot).swap(m.row(col));
            det = -det;
        }
        const double p = m(col, col);
        det *= p;
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const double factor = m(r, col) / p;
            if (factor == 0.0) continue;
            m.row(r).tail(n - col - 1) -= factor * m.row(col).tail(n - col - 1);
        }
    }
    return det;
}

std::vector<double> singular_values(const Matrix& m) {
    if (m.size() == 0) return {};
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

int numeric_rank(const Matrix& m, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw PreconditionError("rank tolerance must lie in (0, 1)");
    }
    const auto s = singular_values(m);
    if (s.empty() || s.front() == 0.0) return 0;
    const double cutoff = rel_tol * s.front();
    int rank = 0;
    for (double v : s) {
        if (v > cutoff) ++rank;
    }
    return rank;
}

}  // namespace biset
