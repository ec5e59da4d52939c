#pragma once

// Direct O(n) per target summation and the relative l2 error metric.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "dirhelm/errors.hpp"
#include "dirhelm/geometry.hpp"
#include "dirhelm/kernels.hpp"
#include "dirhelm/parallel.hpp"

namespace dirhelm {

namespace detail {

/// Neumaier-compensated sum of complex terms, real and imaginary parts separately.
class CompensatedSum {
public:
    void add(Complex v) {
        add_part(sum_re_, comp_re_, v.real());
        add_part(sum_im_, comp_im_, v.imag());
    }
    Complex value() const { return {sum_re_ + comp_re_, sum_im_ + comp_im_}; }

private:
    static void add_part(double& sum, double& comp, double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double sum_re_ = 0.0, comp_re_ = 0.0, sum_im_ = 0.0, comp_im_ = 0.0;
};

}  // namespace detail

/// u_e(x) = sum_{y in P, y != x} G(x, y) f(y) for each requested target index.
template <BoundaryKernel Kernel>
std::vector<Complex> dense_evaluate_at(const Discretization& disc, const Kernel& kernel, std::span<const Complex> f,
                                       std::span<const std::size_t> targets) {
    if (f.size() != disc.size()) throw DimensionError("dense_evaluate_at: density length mismatch");
    std::vector<Complex> u(targets.size());
    parallel_for(targets.size(), [&](std::size_t t) {
        const std::size_t x = targets[t];
        if (x >= disc.size()) throw DimensionError("dense_evaluate_at: target index out of range");
        const KernelPoint xp{disc[x].position, disc[x].normal};
        detail::CompensatedSum sum;
        for (std::size_t y = 0; y < disc.size(); ++y) {
            if (y == x) continue;
            sum.add(Complex(kernel(xp, KernelPoint{disc[y].position, disc[y].normal})) * f[y]);
        }
        u[t] = sum.value();
    });
    return u;
}

/// Full dense evaluation at every point (intended for n up to a few thousand).
template <BoundaryKernel Kernel>
std::vector<Complex> dense_evaluate(const Discretization& disc, const Kernel& kernel, std::span<const Complex> f) {
    std::vector<std::size_t> all(disc.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return dense_evaluate_at(disc, kernel, f, all);
}

/// `count` distinct indices drawn uniformly from [0, n), in draw order.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
    if (count > n) count = n;
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(count);
    return pool;
}

struct ErrorReport {
    double relative_l2 = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> sample_indices;
    std::vector<double> absolute_errors;  ///< |u_e - u_a| at each sample index
};

/// sqrt(sum |u_e - u_a|^2 / sum |u_e|^2) over the sample. Both vectors are indexed
/// by point index.
inline ErrorReport relative_error(std::span<const Complex> exact, std::span<const Complex> approx,
                                  std::span<const std::size_t> sample, std::uint64_t seed = 0) {
    if (exact.size() != approx.size()) throw DimensionError("relative_error: length mismatch");
    ErrorReport report;
    report.seed = seed;
    report.sample_indices.assign(sample.begin(), sample.end());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i : sample) {
        if (i >= exact.size()) throw DimensionError("relative_error: sample index out of range");
        const double e = std::abs(exact[i] - approx[i]);
        report.absolute_errors.push_back(e);
        num += e * e;
        den += std::norm(exact[i]);
    }
    if (!(den > 0.0)) throw DomainError("relative_error: exact values vanish on the sample");
    report.relative_l2 = std::sqrt(num / den);
    return report;
}

/// Same metric when the exact values are only known at the sample (u_exact[k] belongs to sample[k]).
inline ErrorReport relative_error_sampled(std::span<const Complex> exact_at_sample, std::span<const Complex> approx,
                                          std::span<const std::size_t> sample, std::uint64_t seed = 0) {
    if (exact_at_sample.size() != sample.size()) throw DimensionError("relative_error_sampled: length mismatch");
    std::vector<Complex> exact(approx.size());
    for (std::size_t k = 0; k < sample.size(); ++k) {
        if (sample[k] >= approx.size()) throw DimensionError("relative_error_sampled: sample index out of range");
        exact[sample[k]] = exact_at_sample[k];
    }
    return relative_error(exact, approx, sample, seed);
}

}  // namespace dirhelm
