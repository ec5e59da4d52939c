#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "dirhelm/errors.hpp"
#include "dirhelm/geometry.hpp"
#include "dirhelm/segment_tree.hpp"

namespace dirhelm {

/// Projection extents of a segment pair relative to the line through their
/// centers. Lengths are in units of the wavelength.
struct SeparationData {
    Vec2 direction = Vec2::UnitX();  ///< a_TS = (c_T - c_S) / |c_T - c_S|
    double distance = 0.0;           ///< gap d_TS between the two projections on the center line
    double width_target = 0.0;       ///< w_T
    double width_source = 0.0;       ///< w_S
    double height_target = 0.0;      ///< h_T, extent along a_TS^perp
    double height_source = 0.0;      ///< h_S
};

namespace detail {

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double width() const { return hi - lo; }
};

template <class VisitT, class VisitS>
SeparationData separation_from(const Vec2& c_target, const Vec2& c_source, double lambda, VisitT&& visit_target,
                               VisitS&& visit_source) {
    const Vec2 delta = c_target - c_source;
    const double dist = delta.norm();
    if (!(dist > 0.0)) throw DegeneratePairError("separation_data: coincident segment centers");
    const Vec2 a = delta / dist;
    const Vec2 a_perp(-a.y(), a.x());

    Extent t_along, t_across, s_along, s_across;
    visit_target([&](const Vec2& x) {
        t_along.add(a.dot(x - c_source));
        t_across.add(a_perp.dot(x - c_source));
    });
    visit_source([&](const Vec2& y) {
        s_along.add(a.dot(y - c_source));
        s_across.add(a_perp.dot(y - c_source));
    });

    SeparationData sd;
    sd.direction = a;
    const double gap = std::max(t_along.lo - s_along.hi, s_along.lo - t_along.hi);
    sd.distance = std::max(0.0, gap) / lambda;
    sd.width_target = t_along.width() / lambda;
    sd.width_source = s_along.width() / lambda;
    sd.height_target = t_across.width() / lambda;
    sd.height_source = s_across.width() / lambda;
    return sd;
}

}  // namespace detail

/// Separation data for two explicit point sets with given centers.
inline SeparationData separation_data(std::span<const Vec2> target_points, const Vec2& c_target,
                                      std::span<const Vec2> source_points, const Vec2& c_source, double lambda) {
    return detail::separation_from(
        c_target, c_source, lambda,
        [&](auto&& f) {
            for (const auto& x : target_points) f(x);
        },
        [&](auto&& f) {
            for (const auto& y : source_points) f(y);
        });
}

/// Separation data of two tree segments, measured on their discretization points
/// plus the exact interval endpoints.
inline SeparationData separation_data(const Segment& target, const Segment& source, const Discretization& disc) {
    const auto visitor = [&disc](const Segment& seg) {
        return [&disc, &seg](auto&& f) {
            f(seg.start);
            f(seg.end);
            for (std::size_t i = seg.first; i < seg.first + seg.count; ++i) f(disc[i].position);
        };
    };
    return detail::separation_from(target.center, source.center, disc.wavelength(), visitor(target), visitor(source));
}

/// d > 1, d > max(w_T, w_S) and d > 2 max(h_T, h_S)^2, all strict.
inline bool is_parabolically_separated(const SeparationData& sd) {
    const double w = std::max(sd.width_target, sd.width_source);
    const double h = std::max(sd.height_target, sd.height_source);
    return sd.distance > 1.0 && sd.distance > w && sd.distance > 2.0 * h * h;
}

/// Uniform grid of 2^(level+1) m_f + 1 frequencies on [-omega, omega].
struct FrequencyGrid {
    double omega = 1.0;
    int level = 0;
    int m_f = 2;

    int size() const { return (2 << level) * m_f + 1; }
    double step() const { return omega / static_cast<double>((1 << level) * m_f); }
    double value(int index) const { return -omega + index * step(); }
};

/// Index of the grid point nearest to k; exact midpoints round toward +infinity.
inline int round_to_grid(double k, const FrequencyGrid& grid) {
    // a_TS . t is a cosine, so |k| may exceed omega by roundoff only.
    if (!(std::abs(k) <= grid.omega * (1.0 + 1e-12))) {
        throw DomainError("round_to_grid: frequency outside [-omega, omega]");
    }
    const double position = (k + grid.omega) / grid.step();
    const int index = static_cast<int>(std::floor(position + 0.5));
    return std::clamp(index, 0, grid.size() - 1);
}

}  // namespace dirhelm
