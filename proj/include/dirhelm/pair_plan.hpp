#pragma once

// Interaction classification and directional low-rank factors.
//
// Every ordered point pair (x, y), x != y, is covered by exactly one entry of
// the plan. A low-rank entry stores only the non-oscillatory part of the kernel
// at Chebyshev nodes of its almost-planar side(s); the oscillation on those
// sides is carried by a modulation exp(i k (s - s_center)) whose frequency k is
// snapped to the segment's frequency grid.

#include <complex>
#include <cstddef>
#include <deque>
#include <vector>

#include <Eigen/Core>

#include "dirhelm/chebyshev.hpp"
#include "dirhelm/errors.hpp"
#include "dirhelm/geometry.hpp"
#include "dirhelm/kernels.hpp"
#include "dirhelm/parallel.hpp"
#include "dirhelm/segment_tree.hpp"
#include "dirhelm/separation.hpp"

namespace dirhelm {

enum class PairKind {
    Dense,          ///< G(T, S) stored explicitly
    LowRankBoth,    ///< both sides modulated: m_c x m_c block G^mm(R_T, R_S)
    LowRankSource,  ///< only S modulated: |T| x m_c block G^.m(T, R_S)
    LowRankTarget,  ///< only T modulated: m_c x |S| block G^m.(R_T, S)
};

inline bool modulates_target(PairKind kind) { return kind == PairKind::LowRankBoth || kind == PairKind::LowRankTarget; }
inline bool modulates_source(PairKind kind) { return kind == PairKind::LowRankBoth || kind == PairKind::LowRankSource; }

struct SegmentPair {
    int target = -1;
    int source = -1;
    PairKind kind = PairKind::Dense;
    int k_target = -1;  ///< index into the target's frequency grid, -1 when T is not modulated
    int k_source = -1;  ///< index into the source's frequency grid, -1 when S is not modulated
    Eigen::MatrixXcd block;
};

struct PlanOptions {
    int m_leaf = 4;  ///< leaf length in wavelengths
    int m_f = 2;     ///< frequency grid refinement
    int m_c = 8;     ///< Chebyshev grid size
};

/// Chebyshev nodes of one segment and their boundary images.
struct ChebyshevGrid {
    std::vector<double> offsets;  ///< node arclength minus the segment's center arclength
    std::vector<KernelPoint> points;
};

class PairPlan {
public:
    PlanOptions options;
    SegmentTree tree;
    std::vector<SegmentPair> pairs;

    std::size_t n = 0;
    int q = 0;
    int p = 0;
    double omega = 0.0;
    double wavelength = 0.0;
    double spacing = 0.0;

    /// Interpolation matrix I (points x m_c) per segment level; empty for unused levels.
    std::vector<Eigen::MatrixXd> interpolation;
    /// Chebyshev grid per segment id; empty unless the segment is a modulated side.
    std::vector<ChebyshevGrid> chebyshev;
    bool factors_ready = false;

    FrequencyGrid grid(int level) const { return {omega, level, options.m_f}; }
    const Segment& segment(int id) const { return tree[id]; }

    std::size_t dense_count() const { return count_kind([](PairKind k) { return k == PairKind::Dense; }); }
    std::size_t low_rank_count() const { return pairs.size() - dense_count(); }
    std::size_t count(PairKind kind) const { return count_kind([kind](PairKind k) { return k == kind; }); }

    /// Ordered point pairs (x, y), x != y, covered by all entries combined.
    std::size_t covered_point_pairs() const {
        std::size_t total = 0;
        for (const auto& pr : pairs) {
            const Segment& t = tree[pr.target];
            const Segment& s = tree[pr.source];
            const std::size_t lo = std::max(t.first, s.first);
            const std::size_t hi = std::min(t.first + t.count, s.first + s.count);
            total += t.count * s.count - (hi > lo ? hi - lo : 0);
        }
        return total;
    }

private:
    template <class Pred>
    std::size_t count_kind(Pred pred) const {
        std::size_t c = 0;
        for (const auto& pr : pairs) c += pred(pr.kind) ? 1 : 0;
        return c;
    }
};

/// Queue-driven classification of all cover-set pairs into dense and low-rank
/// entries. Pairs that are not parabolically separated are refined by bisecting
/// their almost-planar side(s) until separation holds or the leaf level is hit.
inline PairPlan classify_pairs(const SegmentTree& tree, const Discretization& disc, const PlanOptions& options = {}) {
    PairPlan plan;
    plan.options = options;
    plan.tree = tree;
    plan.n = disc.size();
    plan.q = disc.q();
    plan.p = disc.p();
    plan.omega = disc.omega();
    plan.wavelength = disc.wavelength();
    plan.spacing = disc.spacing();

    // FFT bins 0..2^(l+1) m_f must be distinct modulo N = 2^l m_f p.
    if (disc.p() < 3) throw ConfigError("need p >= 3 so every frequency maps to its own FFT bin");

    std::deque<std::pair<int, int>> queue;
    for (int t : tree.cover()) {
        for (int s : tree.cover()) queue.emplace_back(t, s);
    }

    const auto separated = [&](const Segment& t, const Segment& s) {
        return t.id != s.id && is_parabolically_separated(separation_data(t, s, disc));
    };
    const auto emit = [&](int t, int s, PairKind kind) {
        SegmentPair pr;
        pr.target = t;
        pr.source = s;
        pr.kind = kind;
        plan.pairs.push_back(std::move(pr));
    };

    while (!queue.empty()) {
        const auto [t_id, s_id] = queue.front();
        queue.pop_front();
        const Segment& t = tree[t_id];
        const Segment& s = tree[s_id];

        if (!t.almost_planar && !s.almost_planar) {
            emit(t_id, s_id, PairKind::Dense);
        } else if (!t.almost_planar) {
            if (separated(t, s)) {
                emit(t_id, s_id, PairKind::LowRankSource);
            } else if (!s.leaf) {
                queue.emplace_back(t_id, s.children[0]);
                queue.emplace_back(t_id, s.children[1]);
            } else {
                emit(t_id, s_id, PairKind::Dense);
            }
        } else if (!s.almost_planar) {
            if (separated(t, s)) {
                emit(t_id, s_id, PairKind::LowRankTarget);
            } else if (!t.leaf) {
                queue.emplace_back(t.children[0], s_id);
                queue.emplace_back(t.children[1], s_id);
            } else {
                emit(t_id, s_id, PairKind::Dense);
            }
        } else if (separated(t, s)) {
            emit(t_id, s_id, PairKind::LowRankBoth);
        } else if (t.level > s.level) {
            queue.emplace_back(t.children[0], s_id);
            queue.emplace_back(t.children[1], s_id);
        } else if (s.level > t.level) {
            queue.emplace_back(t_id, s.children[0]);
            queue.emplace_back(t_id, s.children[1]);
        } else if (!t.leaf) {
            queue.emplace_back(t.children[0], s.children[0]);
            queue.emplace_back(t.children[1], s.children[0]);
            queue.emplace_back(t.children[0], s.children[1]);
            queue.emplace_back(t.children[1], s.children[1]);
        } else {
            emit(t_id, s_id, PairKind::Dense);
        }
    }
    return plan;
}

/// Modulation F(s, k) = exp(i k (s - s_center)) evaluated from the offset s - s_center.
inline Complex modulation(double k, double offset) {
    const double phase = k * offset;
    return {std::cos(phase), std::sin(phase)};
}

/// Chebyshev grids of every modulated side and the per-level interpolation
/// matrices from the segment's points to those grids.
inline void prepare_grids(PairPlan& plan, const Discretization& disc) {
    if (disc.size() != plan.n || disc.q() != plan.q || disc.p() != plan.p) {
        throw DimensionError("plan was classified for a different discretization");
    }
    const int m_c = plan.options.m_c;
    if (m_c < 1) throw ConfigError("m_c must be positive");
    const SegmentTree& tree = plan.tree;
    const auto& geom = disc.geometry();

    std::vector<bool> modulated(tree.size(), false);
    for (const auto& pr : plan.pairs) {
        if (modulates_target(pr.kind)) modulated[static_cast<std::size_t>(pr.target)] = true;
        if (modulates_source(pr.kind)) modulated[static_cast<std::size_t>(pr.source)] = true;
    }

    plan.chebyshev.assign(tree.size(), {});
    plan.interpolation.assign(static_cast<std::size_t>(tree.root_level() + 1), {});
    for (std::size_t id = 0; id < tree.size(); ++id) {
        if (!modulated[id]) continue;
        const Segment& seg = tree[static_cast<int>(id)];
        auto& grid = plan.chebyshev[id];
        const double half = 0.5 * seg.length();
        for (double s : chebyshev_nodes(m_c, seg.s_lo, seg.s_hi)) {
            const CurvePoint cp = geom.point_at(s);
            grid.offsets.push_back(s - seg.s_center());
            grid.points.push_back({cp.position, cp.normal});
        }
        auto& interp = plan.interpolation[static_cast<std::size_t>(seg.level)];
        if (interp.size() == 0) {
            std::vector<double> offsets(seg.count);
            for (std::size_t i = 0; i < seg.count; ++i) offsets[i] = (static_cast<double>(i) + 0.5) * plan.spacing - half;
            interp = chebyshev_interpolation_matrix(m_c, -half, half, offsets);
        }
    }
}

/// Fills the frequency indices and factor blocks of every entry, plus the
/// per-level interpolation matrices and per-segment Chebyshev grids they use.
template <BoundaryKernel Kernel>
void compute_factors(PairPlan& plan, const Discretization& disc, const Kernel& kernel) {
    prepare_grids(plan, disc);
    const int m_c = plan.options.m_c;
    const SegmentTree& tree = plan.tree;

    const auto point = [&disc](std::size_t i) { return KernelPoint{disc[i].position, disc[i].normal}; };

    parallel_for(plan.pairs.size(), [&](std::size_t index) {
        SegmentPair& pr = plan.pairs[index];
        const Segment& t = tree[pr.target];
        const Segment& s = tree[pr.source];
        const auto t_rows = static_cast<Eigen::Index>(t.count);
        const auto s_cols = static_cast<Eigen::Index>(s.count);

        if (pr.kind == PairKind::Dense) {
            pr.block.resize(t_rows, s_cols);
            for (Eigen::Index j = 0; j < s_cols; ++j) {
                const std::size_t y = s.first + static_cast<std::size_t>(j);
                const KernelPoint yp = point(y);
                for (Eigen::Index i = 0; i < t_rows; ++i) {
                    const std::size_t x = t.first + static_cast<std::size_t>(i);
                    pr.block(i, j) = x == y ? Complex{} : Complex(kernel(point(x), yp));
                }
            }
            return;
        }

        const SeparationData sd = separation_data(t, s, disc);
        double k_t = 0.0;
        double k_s = 0.0;
        if (modulates_target(pr.kind)) {
            const FrequencyGrid g = plan.grid(t.level);
            pr.k_target = round_to_grid(plan.omega * sd.direction.dot(t.tangent), g);
            k_t = g.value(pr.k_target);
        }
        if (modulates_source(pr.kind)) {
            const FrequencyGrid g = plan.grid(s.level);
            pr.k_source = round_to_grid(-plan.omega * sd.direction.dot(s.tangent), g);
            k_s = g.value(pr.k_source);
        }
        const ChebyshevGrid& rt = plan.chebyshev[static_cast<std::size_t>(pr.target)];
        const ChebyshevGrid& rs = plan.chebyshev[static_cast<std::size_t>(pr.source)];

        switch (pr.kind) {
            case PairKind::LowRankBoth:
                pr.block.resize(m_c, m_c);
                for (int l = 0; l < m_c; ++l) {
                    const Complex fs = modulation(k_s, rs.offsets[l]);
                    for (int j = 0; j < m_c; ++j) {
                        pr.block(j, l) = Complex(kernel(rt.points[j], rs.points[l])) / (modulation(k_t, rt.offsets[j]) * fs);
                    }
                }
                break;
            case PairKind::LowRankSource:
                pr.block.resize(t_rows, m_c);
                for (int l = 0; l < m_c; ++l) {
                    const Complex fs = modulation(k_s, rs.offsets[l]);
                    for (Eigen::Index i = 0; i < t_rows; ++i) {
                        pr.block(i, l) = Complex(kernel(point(t.first + static_cast<std::size_t>(i)), rs.points[l])) / fs;
                    }
                }
                break;
            case PairKind::LowRankTarget:
                pr.block.resize(m_c, s_cols);
                for (Eigen::Index i = 0; i < s_cols; ++i) {
                    const KernelPoint yp = point(s.first + static_cast<std::size_t>(i));
                    for (int j = 0; j < m_c; ++j) {
                        pr.block(j, i) = Complex(kernel(rt.points[j], yp)) / modulation(k_t, rt.offsets[j]);
                    }
                }
                break;
            case PairKind::Dense:
                break;
        }
    });
    plan.factors_ready = true;
}

/// Tree, classification and factors in one call.
template <BoundaryKernel Kernel>
PairPlan build_plan(const Discretization& disc, const Kernel& kernel, const PlanOptions& options = {}) {
    if (options.m_f < 1) throw ConfigError("m_f must be positive");
    if (options.m_c < 2) throw ConfigError("m_c must be at least 2");
    PairPlan plan = classify_pairs(build_tree(disc, options.m_leaf), disc, options);
    compute_factors(plan, disc, kernel);
    return plan;
}

}  // namespace dirhelm
