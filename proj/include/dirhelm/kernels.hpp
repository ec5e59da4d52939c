#pragma once

// Layer-potential kernels of the 2D Helmholtz equation.
//
// With r = |x - y|, rh = (x - y) / r, a = rh . n(x), b = rh . n(y):
//   S : (i/4) H0(w r)
//   D : (i w/4) H1(w r) b                                  = dG/dn(y)
//   D': -(i w/4) H1(w r) a                                 = dG/dn(x)
//   N : (i w/4) [ w H0(w r) a b + H1(w r) (n(x).n(y) - 2 a b) / r ]
//                                                          = d^2 G / dn(x) dn(y)

#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "dirhelm/errors.hpp"
#include "dirhelm/special_functions.hpp"

namespace dirhelm {

using Complex = std::complex<double>;

enum class OperatorKind { SingleLayer, DoubleLayer, NormalDerivSingle, NormalDerivDouble };

inline constexpr OperatorKind all_operators[] = {OperatorKind::SingleLayer, OperatorKind::DoubleLayer,
                                                 OperatorKind::NormalDerivSingle, OperatorKind::NormalDerivDouble};

inline std::string_view to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::SingleLayer: return "S";
        case OperatorKind::DoubleLayer: return "D";
        case OperatorKind::NormalDerivSingle: return "Dp";
        case OperatorKind::NormalDerivDouble: return "N";
    }
    return "?";
}

inline OperatorKind parse_operator(std::string_view name) {
    if (name == "S") return OperatorKind::SingleLayer;
    if (name == "D") return OperatorKind::DoubleLayer;
    if (name == "Dp" || name == "D'") return OperatorKind::NormalDerivSingle;
    if (name == "N") return OperatorKind::NormalDerivDouble;
    throw ConfigError("unknown operator '" + std::string(name) + "' (expected S, D, Dp or N)");
}

struct KernelPoint {
    Eigen::Vector2d position;
    Eigen::Vector2d normal;
};

inline Complex kernel_evaluate(OperatorKind kind, const KernelPoint& x, const KernelPoint& y, double omega) {
    const Eigen::Vector2d diff = x.position - y.position;
    const double r = diff.norm();
    if (!(r > 0.0)) throw DomainError("kernel evaluated at coincident points");
    const double z = omega * r;
    const Complex quarter_i(0.0, 0.25);
    switch (kind) {
        case OperatorKind::SingleLayer:
            return quarter_i * hankel1_0(z);
        case OperatorKind::DoubleLayer:
            return quarter_i * omega * hankel1_1(z) * (diff.dot(y.normal) / r);
        case OperatorKind::NormalDerivSingle:
            return -quarter_i * omega * hankel1_1(z) * (diff.dot(x.normal) / r);
        case OperatorKind::NormalDerivDouble: {
            const double a = diff.dot(x.normal) / r;
            const double b = diff.dot(y.normal) / r;
            const double nn = x.normal.dot(y.normal);
            return quarter_i * omega * (omega * hankel1_0(z) * a * b + hankel1_1(z) * (nn - 2.0 * a * b) / r);
        }
    }
    throw std::logic_error("unreachable operator kind");
}

/// Anything the fast algorithm can compress: a callable G(x, y) on boundary points.
template <class K>
concept BoundaryKernel = requires(const K& k, const KernelPoint& x) {
    { k(x, x) } -> std::convertible_to<Complex>;
};

/// One of the four layer-potential kernels at a fixed frequency.
struct LayerKernel {
    OperatorKind kind = OperatorKind::SingleLayer;
    double omega = 1.0;

    Complex operator()(const KernelPoint& x, const KernelPoint& y) const {
        return kernel_evaluate(kind, x, y, omega);
    }
};

}  // namespace dirhelm
