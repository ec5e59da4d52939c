#pragma once

// Dyadic arclength segments of the boundary and the cover set of almost-planar
// segments / non-planar leaves.

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "dirhelm/errors.hpp"
#include "dirhelm/geometry.hpp"

namespace dirhelm {

/// Arclength interval of length 2^level * lambda holding 2^level * p points.
struct Segment {
    int id = -1;
    int level = 0;
    int parent = -1;
    std::array<int, 2> children{-1, -1};
    double s_lo = 0.0;
    double s_hi = 0.0;
    std::size_t first = 0;  ///< index of the first point of the segment in P
    std::size_t count = 0;  ///< number of points
    Vec2 start = Vec2::Zero();
    Vec2 end = Vec2::Zero();
    Vec2 center = Vec2::Zero();
    Vec2 tangent = Vec2::UnitX();
    double kappa = 0.0;  ///< max |curvature| over the interval
    bool almost_planar = false;
    bool leaf = false;

    double length() const { return s_hi - s_lo; }
    double s_center() const { return 0.5 * (s_lo + s_hi); }
    bool contains_point(std::size_t i) const { return i >= first && i < first + count; }
};

class SegmentTree;
inline SegmentTree build_tree(const Discretization& disc, int m_leaf);
inline std::vector<int> build_cover_set(SegmentTree& tree);
inline void reclassify(SegmentTree& tree, std::span<const double> kappa);

/// Complete binary tree over [0, L); segments are stored level by level from the
/// root, so ids are a breadth-first numbering.
class SegmentTree {
public:
    int q() const { return q_; }
    int leaf_level() const { return leaf_level_; }
    int root_level() const { return 2 * q_; }
    double wavelength() const { return lambda_; }
    int root() const { return 0; }
    std::size_t size() const { return segments_.size(); }
    const Segment& operator[](int id) const { return segments_[static_cast<std::size_t>(id)]; }
    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<int>& cover() const { return cover_; }

    /// Number of segments at a given level and the id of the first one.
    std::size_t count_at(int level) const { return std::size_t{1} << (root_level() - level); }
    int first_at(int level) const { return static_cast<int>(count_at(level)) - 1; }

private:
    friend SegmentTree build_tree(const Discretization&, int);
    friend std::vector<int> build_cover_set(SegmentTree&);
    friend void reclassify(SegmentTree&, std::span<const double>);

    int q_ = 0;
    int leaf_level_ = 0;
    double lambda_ = 0.0;
    std::vector<Segment> segments_;
    std::vector<int> cover_;
};

/// Almost-planar test: length <= 2^q lambda / sqrt(kappa). Straight pieces are
/// always almost-planar. The relative slack absorbs roundoff in kappa when the
/// bound is met with equality (e.g. a circle of radius 1).
inline bool is_almost_planar(double length, double kappa, int q, double lambda) {
    if (kappa <= 0.0) return true;
    const double bound = std::ldexp(lambda, q) / std::sqrt(kappa);
    return length <= bound * (1.0 + 1e-9);
}

/// Bisects [0, L) down to segments of length m_leaf * lambda and fills in each
/// segment's center frame, curvature bound and almost-planar flag. The root (the
/// whole closed curve) is never marked almost-planar.
inline SegmentTree build_tree(const Discretization& disc, int m_leaf) {
    if (m_leaf < 1 || !std::has_single_bit(static_cast<unsigned>(m_leaf))) {
        throw ConfigError("leaf length m_l must be a power of two");
    }
    const int leaf_level = std::countr_zero(static_cast<unsigned>(m_leaf));
    const int q = disc.q();
    if (leaf_level > 2 * q) throw ConfigError("leaf length m_l exceeds the boundary length 4^q");

    SegmentTree tree;
    tree.q_ = q;
    tree.leaf_level_ = leaf_level;
    tree.lambda_ = disc.wavelength();

    const auto& geom = disc.geometry();
    const auto p = static_cast<std::size_t>(disc.p());
    const int root_level = 2 * q;
    const std::size_t total = 2 * tree.count_at(leaf_level) - 1;
    tree.segments_.resize(total);

    for (int level = root_level; level >= leaf_level; --level) {
        const std::size_t count = tree.count_at(level);
        const int first_id = tree.first_at(level);
        const double len = std::ldexp(disc.wavelength(), level);
        const std::size_t points = (std::size_t{1} << level) * p;
        for (std::size_t j = 0; j < count; ++j) {
            Segment& seg = tree.segments_[first_id + j];
            seg.id = first_id + static_cast<int>(j);
            seg.level = level;
            seg.s_lo = static_cast<double>(j) * len;
            seg.s_hi = static_cast<double>(j + 1) * len;
            seg.first = j * points;
            seg.count = points;
            seg.leaf = level == leaf_level;
            if (level < root_level) seg.parent = (seg.id - 1) / 2;
            if (!seg.leaf) seg.children = {2 * seg.id + 1, 2 * seg.id + 2};
            const CurvePoint mid = geom.point_at(seg.s_center());
            seg.center = mid.position;
            seg.tangent = mid.tangent;
            seg.start = geom.position_at(seg.s_lo);
            seg.end = geom.position_at(seg.s_hi);
        }
    }

    // Curvature bounds: point samples (spacing lambda/p) plus endpoints at the
    // leaves, then maxima up the tree.
    const int leaf_first = tree.first_at(leaf_level);
    for (std::size_t j = 0; j < tree.count_at(leaf_level); ++j) {
        Segment& seg = tree.segments_[leaf_first + j];
        double kappa = std::max(std::abs(geom.curvature_at(seg.s_lo)), std::abs(geom.curvature_at(seg.s_hi)));
        for (std::size_t i = seg.first; i < seg.first + seg.count; ++i) {
            kappa = std::max(kappa, std::abs(disc[i].curvature));
        }
        seg.kappa = kappa;
    }
    for (int id = leaf_first - 1; id >= 0; --id) {
        Segment& seg = tree.segments_[id];
        seg.kappa = std::max(tree.segments_[seg.children[0]].kappa, tree.segments_[seg.children[1]].kappa);
    }
    for (auto& seg : tree.segments_) {
        seg.almost_planar = seg.level < root_level && is_almost_planar(seg.length(), seg.kappa, q, tree.lambda_);
    }

    build_cover_set(tree);
    return tree;
}

/// Breadth-first walk: an almost-planar segment is taken whole (its subtree is
/// skipped); a non-planar leaf is taken individually. The result is a disjoint cover.
inline std::vector<int> build_cover_set(SegmentTree& tree) {
    std::vector<int> cover;
    std::deque<int> queue{tree.root()};
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        const Segment& seg = tree[id];
        if (seg.almost_planar || seg.leaf) {
            cover.push_back(id);
            continue;
        }
        queue.push_back(seg.children[0]);
        queue.push_back(seg.children[1]);
    }
    tree.cover_ = cover;
    return cover;
}

/// Replaces every segment's curvature bound, recomputes the almost-planar flags
/// and rebuilds the cover set. Used for what-if studies of the planarity rule.
inline void reclassify(SegmentTree& tree, std::span<const double> kappa) {
    if (kappa.size() != tree.size()) throw DimensionError("reclassify: one curvature bound per segment required");
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        Segment& seg = tree.segments_[i];
        seg.kappa = kappa[i];
        seg.almost_planar =
            seg.level < tree.root_level() && is_almost_planar(seg.length(), seg.kappa, tree.q_, tree.lambda_);
    }
    build_cover_set(tree);
}

}  // namespace dirhelm
