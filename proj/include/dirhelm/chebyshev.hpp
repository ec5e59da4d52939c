#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace dirhelm {

/// Chebyshev points of the first kind on [-1, 1], descending: x_j = cos((2j+1) pi / (2m)).
inline std::vector<double> chebyshev_nodes(int m) {
    std::vector<double> x(m);
    for (int j = 0; j < m; ++j) x[j] = std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * m));
    return x;
}

/// The first-kind nodes mapped affinely to [lo, hi].
inline std::vector<double> chebyshev_nodes(int m, double lo, double hi) {
    auto x = chebyshev_nodes(m);
    for (auto& v : x) v = 0.5 * (lo + hi) + 0.5 * (hi - lo) * v;
    return x;
}

/// Barycentric Lagrange interpolation matrix A(i, j) = l_j(points[i]) for first-kind
/// Chebyshev nodes on [lo, hi]. Rows reproduce constants exactly up to roundoff.
inline Eigen::MatrixXd chebyshev_interpolation_matrix(int m, double lo, double hi, std::span<const double> points) {
    const auto nodes = chebyshev_nodes(m, lo, hi);
    std::vector<double> weights(m);
    for (int j = 0; j < m; ++j) {
        weights[j] = ((j % 2) ? -1.0 : 1.0) * std::sin((2.0 * j + 1.0) * std::numbers::pi / (2.0 * m));
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(points.size()), m);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double x = points[i];
        int exact = -1;
        double denom = 0.0;
        for (int j = 0; j < m; ++j) {
            const double d = x - nodes[j];
            if (d == 0.0) {
                exact = j;
                break;
            }
            denom += weights[j] / d;
        }
        const auto row = static_cast<Eigen::Index>(i);
        if (exact >= 0) {
            a.row(row).setZero();
            a(row, exact) = 1.0;
            continue;
        }
        for (int j = 0; j < m; ++j) a(row, j) = weights[j] / (x - nodes[j]) / denom;
    }
    return a;
}

}  // namespace dirhelm
