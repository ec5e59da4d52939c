#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SVD>

#include "dirhelm/errors.hpp"
#include "dirhelm/geometry.hpp"
#include "dirhelm/kernels.hpp"
#include "dirhelm/segment_tree.hpp"

namespace dirhelm {

inline constexpr std::size_t max_rank_points = 512;

/// Numerical eps-rank of [G(x_i, y_j)]: the number of singular values above eps * sigma_max.
template <BoundaryKernel Kernel>
int rank_estimate(std::span<const KernelPoint> targets, std::span<const KernelPoint> sources, const Kernel& kernel,
                  double eps) {
    if (targets.size() > max_rank_points || sources.size() > max_rank_points) {
        throw DimensionError("rank_estimate: at most 512 points per side");
    }
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(targets.size()), static_cast<Eigen::Index>(sources.size()));
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            a(i, j) = kernel(targets[static_cast<std::size_t>(i)], sources[static_cast<std::size_t>(j)]);
        }
    }
    const Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
    int rank = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) rank += sigma[k] > eps * sigma[0] ? 1 : 0;
    return rank;
}

inline std::vector<KernelPoint> kernel_points(const Discretization& disc, const Segment& seg) {
    std::vector<KernelPoint> pts;
    pts.reserve(seg.count);
    for (std::size_t i = seg.first; i < seg.first + seg.count; ++i) pts.push_back({disc[i].position, disc[i].normal});
    return pts;
}

/// eps-rank of the interaction block between two tree segments.
template <BoundaryKernel Kernel>
int rank_estimate(const Discretization& disc, const Segment& target, const Segment& source, const Kernel& kernel,
                  double eps) {
    return rank_estimate(kernel_points(disc, target), kernel_points(disc, source), kernel, eps);
}

}  // namespace dirhelm
