#pragma once

// Closed C^2 boundary curves, their arclength parameterization, and the
// equispaced (staggered) boundary discretization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "dirhelm/errors.hpp"

namespace dirhelm {

using Vec2 = Eigen::Vector2d;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class ShapeKind { Ellipse, Bean };

/// Parametric description of a closed boundary curve t -> gamma(t), t in [0, 2pi).
///
/// Ellipse: gamma(t) = (a cos t, b sin t).
/// Bean:    polar curve r(t) = c0 + c1 cos t + c2 sin 2t, gamma(t) = r(t) (cos t, sin t).
///          The default coefficients give a non-convex curve with perimeter ~4.92.
///
/// Both are traversed counter-clockwise, so the outward normal is the tangent
/// rotated clockwise.
struct BoundaryShape {
    ShapeKind kind = ShapeKind::Ellipse;
    double a = 1.0;
    double b = 0.5;
    std::array<double, 3> polar{0.75, 0.225, 0.1125};

    static BoundaryShape ellipse(double a, double b) {
        BoundaryShape s;
        s.kind = ShapeKind::Ellipse;
        s.a = a;
        s.b = b;
        return s;
    }

    static BoundaryShape circle(double radius) { return ellipse(radius, radius); }

    static BoundaryShape bean(double c0 = 0.75, double c1 = 0.225, double c2 = 0.1125) {
        BoundaryShape s;
        s.kind = ShapeKind::Bean;
        s.polar = {c0, c1, c2};
        return s;
    }

    struct Jet {
        Vec2 value;
        Vec2 d1;
        Vec2 d2;
    };

    /// gamma(t) and its first two derivatives.
    Jet jet(double t) const {
        const double c = std::cos(t);
        const double s = std::sin(t);
        if (kind == ShapeKind::Ellipse) {
            return {Vec2(a * c, b * s), Vec2(-a * s, b * c), Vec2(-a * c, -b * s)};
        }
        const double s2 = std::sin(2.0 * t);
        const double c2 = std::cos(2.0 * t);
        const double r = polar[0] + polar[1] * c + polar[2] * s2;
        const double dr = -polar[1] * s + 2.0 * polar[2] * c2;
        const double ddr = -polar[1] * c - 4.0 * polar[2] * s2;
        const Vec2 e(c, s);
        const Vec2 e_perp(-s, c);
        return {r * e, dr * e + r * e_perp, ddr * e + 2.0 * dr * e_perp - r * e};
    }

    double speed(double t) const { return jet(t).d1.norm(); }

    /// Stable 64-bit fingerprint of the shape, used to tag serialized plans.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](const void* data, std::size_t len) {
            const auto* bytes = static_cast<const unsigned char*>(data);
            for (std::size_t i = 0; i < len; ++i) {
                h ^= bytes[i];
                h *= 1099511628211ull;
            }
        };
        const int k = static_cast<int>(kind);
        mix(&k, sizeof k);
        if (kind == ShapeKind::Ellipse) {
            mix(&a, sizeof a);
            mix(&b, sizeof b);
        } else {
            mix(polar.data(), sizeof(double) * polar.size());
        }
        return h;
    }

    std::string name() const { return kind == ShapeKind::Ellipse ? "ellipse" : "bean"; }
};

/// A point on the boundary with its local frame.
struct CurvePoint {
    double s = 0.0;  ///< arclength
    Vec2 position = Vec2::Zero();
    Vec2 tangent = Vec2::UnitX();
    Vec2 normal = Vec2::UnitY();  ///< outward unit normal
    double curvature = 0.0;       ///< signed, positive where the curve is locally convex
};

/// Boundary curve with an invertible arclength map s(t).
///
/// s(t) is tabulated on a uniform t-grid with a fixed Gauss-Legendre rule per
/// cell; point_at(s) inverts it with a bracketed Newton iteration, so arclength
/// queries are accurate to roundoff regardless of the table size.
class BoundaryGeometry {
public:
    static constexpr int table_cells = 4096;

    BoundaryGeometry(BoundaryShape shape, double tol) : shape_(shape), tol_(tol) {
        validate_shape();
        const auto speed = [this](double t) { return shape_.speed(t); };

        double err = 0.0;
        const double adaptive_length =
            boost::math::quadrature::gauss_kronrod<double, 31>::integrate(speed, 0.0, two_pi, 30, tol, &err);
        if (!(err <= tol * adaptive_length) || !std::isfinite(adaptive_length)) {
            throw ConfigError("arclength integration did not converge for " + shape_.name());
        }

        dt_ = two_pi / table_cells;
        s_table_.resize(table_cells + 1);
        s_table_[0] = 0.0;
        for (int k = 0; k < table_cells; ++k) {
            s_table_[k + 1] = s_table_[k] + cell_integral(k * dt_, (k + 1) * dt_);
        }
        length_ = s_table_.back();
        if (std::abs(length_ - adaptive_length) > std::max(tol, 1e-13) * length_ * 10) {
            throw ConfigError("arclength table disagrees with adaptive quadrature");
        }
        if (length_ < 0.5 || length_ > 10.0) {
            throw ConfigError("boundary perimeter must lie in [0.5, 10]");
        }
    }

    const BoundaryShape& shape() const { return shape_; }
    double length() const { return length_; }
    double tolerance() const { return tol_; }

    /// Arclength of gamma(t), t in [0, 2pi].
    double arclength_at(double t) const {
        t = std::clamp(t, 0.0, two_pi);
        const int k = std::min(static_cast<int>(t / dt_), table_cells - 1);
        return s_table_[k] + cell_integral(k * dt_, t);
    }

    /// Raw parameter t in [0, 2pi) with s(t) = s (s taken modulo L).
    double param_at(double s) const {
        s = wrap(s);
        const auto it = std::upper_bound(s_table_.begin(), s_table_.end(), s);
        const int k = std::clamp(static_cast<int>(it - s_table_.begin()) - 1, 0, table_cells - 1);
        const double lo = k * dt_;
        const double hi = (k + 1) * dt_;
        const double frac = (s - s_table_[k]) / (s_table_[k + 1] - s_table_[k]);
        double t = lo + frac * dt_;
        for (int iter = 0; iter < 50; ++iter) {
            const double residual = s_table_[k] + cell_integral(lo, t) - s;
            const double step = residual / shape_.speed(t);
            t = std::clamp(t - step, lo, hi);
            if (std::abs(residual) <= 1e-15 * length_) break;
        }
        return t;
    }

    CurvePoint point_at(double s) const {
        const double t = param_at(s);
        const auto j = shape_.jet(t);
        const double speed = j.d1.norm();
        CurvePoint p;
        p.s = wrap(s);
        p.position = j.value;
        p.tangent = j.d1 / speed;
        p.normal = Vec2(p.tangent.y(), -p.tangent.x());
        p.curvature = (j.d1.x() * j.d2.y() - j.d1.y() * j.d2.x()) / (speed * speed * speed);
        return p;
    }

    Vec2 position_at(double s) const { return shape_.jet(param_at(s)).value; }
    double curvature_at(double s) const { return point_at(s).curvature; }

    double wrap(double s) const {
        double r = std::fmod(s, length_);
        if (r < 0) r += length_;
        return r;
    }

private:
    double cell_integral(double lo, double hi) const {
        if (hi <= lo) return 0.0;
        return boost::math::quadrature::gauss<double, 20>::integrate(
            [this](double t) { return shape_.speed(t); }, lo, hi);
    }

    void validate_shape() const {
        if (!(tol_ > 0.0 && tol_ < 1e-2)) throw ConfigError("geometry tolerance must lie in (0, 1e-2)");
        if (shape_.kind == ShapeKind::Ellipse) {
            if (!(shape_.a > 0.0 && shape_.b > 0.0)) throw ConfigError("ellipse semi-axes must be positive");
            if (std::max(shape_.a, shape_.b) > 5.0 || 2.0 * std::max(shape_.a, shape_.b) < 0.5) {
                throw ConfigError("ellipse diameter must lie in [0.5, 10]");
            }
            return;
        }
        const auto& c = shape_.polar;
        if (std::abs(c[1]) + std::abs(c[2]) >= c[0]) {
            throw ConfigError("bean polar radius must stay positive: need |c1| + |c2| < c0");
        }
        if (c[0] + std::abs(c[1]) + std::abs(c[2]) > 5.0 || c[0] < 0.25) {
            throw ConfigError("bean diameter must lie in [0.5, 10]");
        }
    }

    BoundaryShape shape_;
    double tol_;
    double length_ = 0.0;
    double dt_ = 0.0;
    std::vector<double> s_table_;
};

inline BoundaryGeometry build_geometry(const BoundaryShape& shape, double tol = 1e-12) {
    return BoundaryGeometry(shape, tol);
}

/// Max |curvature| over [s_lo, s_hi], sampled with spacing at most max_step plus both endpoints.
inline double max_curvature(const BoundaryGeometry& geom, double s_lo, double s_hi, double max_step) {
    if (s_hi < s_lo || s_hi - s_lo > geom.length() * (1 + 1e-12)) {
        throw ConfigError("max_curvature: need 0 <= s_hi - s_lo <= L");
    }
    const double span = s_hi - s_lo;
    const auto samples = static_cast<long>(std::ceil(span / max_step));
    double kappa = std::max(std::abs(geom.curvature_at(s_lo)), std::abs(geom.curvature_at(s_hi)));
    for (long i = 1; i < samples; ++i) {
        kappa = std::max(kappa, std::abs(geom.curvature_at(s_lo + span * static_cast<double>(i) / samples)));
    }
    return kappa;
}

/// The point set P: n = 4^q p points at staggered arclengths (i + 1/2) L / n.
/// The wavelength is defined by L = 4^q lambda, so omega follows from q.
class Discretization {
public:
    Discretization(BoundaryGeometry geometry, int q, int p) : geometry_(std::move(geometry)), q_(q), p_(p) {
        if (q < 1 || q > 12) throw ConfigError("q must lie in [1, 12]");
        if (p < 4) throw ConfigError("p must be at least 4 points per wavelength");
        const std::size_t four_q = std::size_t{1} << (2 * q);
        n_ = four_q * static_cast<std::size_t>(p);
        lambda_ = geometry_.length() / static_cast<double>(four_q);
        omega_ = two_pi / lambda_;
        spacing_ = geometry_.length() / static_cast<double>(n_);
        points_.reserve(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            points_.push_back(geometry_.point_at((static_cast<double>(i) + 0.5) * spacing_));
        }
    }

    const BoundaryGeometry& geometry() const { return geometry_; }
    int q() const { return q_; }
    int p() const { return p_; }
    std::size_t size() const { return n_; }
    double wavelength() const { return lambda_; }
    double omega() const { return omega_; }
    double spacing() const { return spacing_; }
    const std::vector<CurvePoint>& points() const { return points_; }
    const CurvePoint& operator[](std::size_t i) const { return points_[i]; }

private:
    BoundaryGeometry geometry_;
    int q_;
    int p_;
    std::size_t n_ = 0;
    double lambda_ = 0.0;
    double omega_ = 0.0;
    double spacing_ = 0.0;
    std::vector<CurvePoint> points_;
};

inline Discretization discretize(const BoundaryGeometry& geometry, int q, int p) {
    return Discretization(geometry, q, p);
}

}  // namespace dirhelm
