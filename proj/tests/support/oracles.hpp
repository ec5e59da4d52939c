#pragma once

// Reference computations used only by the tests. None of these share code with
// the library routines they check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Core>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "dirhelm/dirhelm.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Mp = boost::multiprecision::cpp_bin_float_50;

/// H^(1)_n(z) from 50-digit Bessel functions.
inline Complex hankel_reference(int order, double z) {
    const Mp x = z;
    const Mp j = boost::math::cyl_bessel_j(order, x);
    const Mp y = boost::math::cyl_neumann(order, x);
    return {static_cast<double>(j), static_cast<double>(y)};
}

/// Perimeter of the ellipse with semi-axes a >= b via the complete elliptic integral of the second kind.
inline double ellipse_perimeter(double a, double b) {
    const double k = std::sqrt(1.0 - (b * b) / (a * a));
    return 4.0 * a * std::comp_ellint_2(k);
}

/// Lagrange basis polynomial l_j(x) for the nodes, by the product formula.
inline double lagrange_basis(const std::vector<double>& nodes, std::size_t j, double x) {
    double v = 1.0;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        if (m != j) v *= (x - nodes[m]) / (nodes[j] - nodes[m]);
    }
    return v;
}

/// sum_{y != x} G(x, y) f(y) with long double accumulation, one target at a time.
template <class Kernel>
Complex naive_sum(const dirhelm::Discretization& disc, const Kernel& kernel, const std::vector<Complex>& f, std::size_t x) {
    long double re = 0.0L;
    long double im = 0.0L;
    const dirhelm::KernelPoint xp{disc[x].position, disc[x].normal};
    for (std::size_t y = 0; y < disc.size(); ++y) {
        if (y == x) continue;
        const Complex v = Complex(kernel(xp, dirhelm::KernelPoint{disc[y].position, disc[y].normal})) * f[y];
        re += v.real();
        im += v.imag();
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

/// Arclength offsets of the points of a segment with `count` points and spacing h, relative to its center.
inline std::vector<long double> segment_offsets(std::size_t count, long double h) {
    std::vector<long double> off(count);
    for (std::size_t i = 0; i < count; ++i) off[i] = (static_cast<long double>(i) + 0.5L) * h - 0.5L * h * count;
    return off;
}

/// The m-th frequency of the grid of a segment of 2^level wavelengths: -omega + m omega / (2^level m_f).
inline long double grid_frequency(long double omega, int level, int m_f, std::size_t m) {
    return -omega + static_cast<long double>(m) * omega / static_cast<long double>((1 << level) * m_f);
}

inline Complex phase(long double angle) { return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))}; }

/// f_hat(j, m) = sum_i exp(i k_m off_i) I(i, j) f(i) by direct summation.
inline Eigen::MatrixXcd forward_direct(const std::vector<Complex>& f, const Eigen::MatrixXd& interp, long double omega, long double h,
                                       int level, int m_f) {
    const std::size_t count = f.size();
    const auto off = segment_offsets(count, h);
    const std::size_t freqs = (std::size_t{2} << level) * static_cast<std::size_t>(m_f) + 1;
    Eigen::MatrixXcd out(interp.cols(), static_cast<Eigen::Index>(freqs));
    for (std::size_t m = 0; m < freqs; ++m) {
        const long double k = grid_frequency(omega, level, m_f, m);
        for (Eigen::Index j = 0; j < interp.cols(); ++j) {
            Complex acc{};
            for (std::size_t i = 0; i < count; ++i) acc += phase(k * off[i]) * interp(static_cast<Eigen::Index>(i), j) * f[i];
            out(j, static_cast<Eigen::Index>(m)) = acc;
        }
    }
    return out;
}

/// u(i) = sum_j I(i, j) sum_m exp(i k_m off_i) u_hat(j, m) by direct summation.
inline Eigen::VectorXcd inverse_direct(const Eigen::MatrixXcd& u_hat, const Eigen::MatrixXd& interp, long double omega, long double h,
                                       int level, int m_f) {
    const auto count = static_cast<std::size_t>(interp.rows());
    const auto off = segment_offsets(count, h);
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(interp.rows());
    for (std::size_t i = 0; i < count; ++i) {
        for (Eigen::Index m = 0; m < u_hat.cols(); ++m) {
            const Complex e = phase(grid_frequency(omega, level, m_f, static_cast<std::size_t>(m)) * off[i]);
            for (Eigen::Index j = 0; j < u_hat.rows(); ++j) u[static_cast<Eigen::Index>(i)] += interp(static_cast<Eigen::Index>(i), j) * e * u_hat(j, m);
        }
    }
    return u;
}

inline double relative_norm(const Eigen::MatrixXcd& approx, const Eigen::MatrixXcd& exact) {
    return (approx - exact).norm() / exact.norm();
}

/// Per-row coverage counts of the plan: cover[y] = number of pairs covering (x, y).
inline std::vector<int> row_coverage(const dirhelm::PairPlan& plan, std::size_t x) {
    std::vector<int> cover(plan.n, 0);
    for (const auto& pr : plan.pairs) {
        const auto& t = plan.tree[pr.target];
        if (!t.contains_point(x)) continue;
        const auto& s = plan.tree[pr.source];
        for (std::size_t y = s.first; y < s.first + s.count; ++y) {
            if (y != x) ++cover[y];
        }
    }
    return cover;
}

/// Two arcs of the unit circle of length 2^-q, centered at angles 0 and `gap`,
/// with 8*2^q points each; normals point outward. At omega = 2 pi 4^q the arcs
/// are parabolically separated for gap = pi/2.
struct ArcPair {
    std::vector<dirhelm::KernelPoint> target, source;
    std::vector<dirhelm::Vec2> target_pos, source_pos;
    double omega = 0.0;
};

inline ArcPair arc_pair(int q, double gap = std::numbers::pi / 2) {
    ArcPair ap;
    ap.omega = 2 * std::numbers::pi * std::ldexp(1.0, 2 * q);
    const int count = 8 << q;
    const double len = std::ldexp(1.0, -q);
    const auto fill = [&](double center, auto& pts, auto& pos) {
        for (int i = 0; i < count; ++i) {
            const double a = center + ((i + 0.5) / count - 0.5) * len;
            const dirhelm::Vec2 x(std::cos(a), std::sin(a));
            pts.push_back({x, x});
            pos.push_back(x);
        }
    };
    fill(0.0, ap.target, ap.target_pos);
    fill(gap, ap.source, ap.source_pos);
    return ap;
}

}  // namespace oracle
