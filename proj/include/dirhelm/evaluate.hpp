#pragma once

// Application of a PairPlan to a density.
//
//   1. f_hat_S(j, k) = sum_{y in S} exp(i k (s_y - s_S)) I_S(y, j) f(y)   for every modulated source S
//   2. per target T: dense / one-sided blocks go straight into u(T); modulated
//      targets accumulate u_hat_T(:, k_T) over all their pairs
//   3. u(T) += sum_j I_T(:, j) .* sum_k exp(i k (s_x - s_T)) u_hat_T(j, k)
//
// Steps 1 and 3 are one FFT of length N = |S| m_f per Chebyshev node: on the
// staggered grid s_y - s_S = (i - c) h with c = (|S| - 1) / 2, and for
// k = -omega + m dk we have dk h = 2 pi / N and omega h = 2 pi / p, so
// exp(i k (i - c) h) = exp(-2 pi i (i - c) / p) exp(2 pi i m i / N) exp(-2 pi i m c / N).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <algorithm>
#include <memory>
#include <string>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <fftw3.h>

#include "dirhelm/errors.hpp"
#include "dirhelm/pair_plan.hpp"
#include "dirhelm/parallel.hpp"

namespace dirhelm {

using DensityVector = std::vector<Complex>;

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

/// exp(-2 pi i num / den) with the integer ratio reduced first.
inline Complex unit_root(std::int64_t num, std::int64_t den) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

/// Local FFT machinery for one segment size: 2^level p points, frequency grid of
/// 2^(level+1) m_f + 1 points, transform length N = 2^level p m_f.
class LocalTransform {
public:
    LocalTransform(int level, int p, int m_f)
        : points_((std::size_t{1} << level) * static_cast<std::size_t>(p)),
          length_(points_ * static_cast<std::size_t>(m_f)),
          frequencies_((std::size_t{2} << level) * static_cast<std::size_t>(m_f) + 1) {
        if (p < 3) throw ConfigError("local FFT needs p >= 3");
        // 2c = |S| - 1 is an integer; all phases are reduced as exact rationals.
        const auto twice_c = static_cast<std::int64_t>(points_) - 1;
        pre_.resize(static_cast<Eigen::Index>(points_));
        for (std::size_t i = 0; i < points_; ++i) {
            // exp(-2 pi i (i - c) / p) = exp(-2 pi i (2i - 2c) / (2p))
            pre_[static_cast<Eigen::Index>(i)] = detail::unit_root(2 * static_cast<std::int64_t>(i) - twice_c, 2 * p);
        }
        post_.resize(static_cast<Eigen::Index>(frequencies_));
        for (std::size_t m = 0; m < frequencies_; ++m) {
            // exp(-2 pi i m c / N) = exp(-2 pi i m (2c) / (2N))
            post_[static_cast<Eigen::Index>(m)] =
                detail::unit_root(static_cast<std::int64_t>(m) * twice_c, 2 * static_cast<std::int64_t>(length_));
        }
        std::vector<Complex> in(length_), out(length_);
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(length_), reinterpret_cast<fftw_complex*>(in.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan_) throw InternalError("FFTW planning failed");
    }

    LocalTransform(const LocalTransform&) = delete;
    LocalTransform& operator=(const LocalTransform&) = delete;
    ~LocalTransform() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }

    std::size_t points() const { return points_; }
    std::size_t length() const { return length_; }
    std::size_t frequencies() const { return frequencies_; }

    /// f_hat(j, m) = sum_i exp(i k_m (s_i - s_center)) interp(i, j) f(i); result is m_c x |K|.
    Eigen::MatrixXcd forward(std::span<const Complex> f, const Eigen::MatrixXd& interp) const {
        check(f.size(), interp);
        const auto m_c = interp.cols();
        Eigen::MatrixXcd out(m_c, static_cast<Eigen::Index>(frequencies_));
        std::vector<Complex> in(length_), spectrum(length_);
        Eigen::VectorXcd modulated(static_cast<Eigen::Index>(points_));
        for (std::size_t i = 0; i < points_; ++i) modulated[static_cast<Eigen::Index>(i)] = pre_[static_cast<Eigen::Index>(i)] * f[i];
        for (Eigen::Index j = 0; j < m_c; ++j) {
            std::fill(in.begin(), in.end(), Complex{});
            for (std::size_t i = 0; i < points_; ++i) {
                in[i] = modulated[static_cast<Eigen::Index>(i)] * interp(static_cast<Eigen::Index>(i), j);
            }
            execute(in, spectrum);
            for (std::size_t m = 0; m < frequencies_; ++m) {
                out(j, static_cast<Eigen::Index>(m)) = post_[static_cast<Eigen::Index>(m)] * spectrum[m % length_];
            }
        }
        return out;
    }

    /// u(i) = sum_j interp(i, j) sum_m exp(i k_m (s_i - s_center)) u_hat(j, m).
    Eigen::VectorXcd inverse(const Eigen::MatrixXcd& u_hat, const Eigen::MatrixXd& interp) const {
        check(points_, interp);
        if (u_hat.rows() != interp.cols() || u_hat.cols() != static_cast<Eigen::Index>(frequencies_)) {
            throw DimensionError("inverse transform: spectral buffer has the wrong shape");
        }
        Eigen::VectorXcd u = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(points_));
        std::vector<Complex> in(length_), values(length_);
        for (Eigen::Index j = 0; j < u_hat.rows(); ++j) {
            std::fill(in.begin(), in.end(), Complex{});
            for (std::size_t m = 0; m < frequencies_; ++m) {
                in[m % length_] += post_[static_cast<Eigen::Index>(m)] * u_hat(j, static_cast<Eigen::Index>(m));
            }
            execute(in, values);
            for (std::size_t i = 0; i < points_; ++i) {
                u[static_cast<Eigen::Index>(i)] += interp(static_cast<Eigen::Index>(i), j) * values[i];
            }
        }
        return u.cwiseProduct(pre_);
    }

private:
    void check(std::size_t count, const Eigen::MatrixXd& interp) const {
        if (count != points_ || interp.rows() != static_cast<Eigen::Index>(points_)) {
            throw DimensionError("local transform: segment size mismatch");
        }
    }

    void execute(std::vector<Complex>& in, std::vector<Complex>& out) const {
        fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    }

    std::size_t points_;
    std::size_t length_;
    std::size_t frequencies_;
    Eigen::VectorXcd pre_;
    Eigen::VectorXcd post_;
    fftw_plan plan_ = nullptr;
};

/// Per-segment spectral matrices (f_hat_S or u_hat_T), indexed by segment id.
struct SpectralBuffers {
    std::vector<Eigen::MatrixXcd> by_segment;

    bool has(int id) const {
        return id >= 0 && static_cast<std::size_t>(id) < by_segment.size() && by_segment[static_cast<std::size_t>(id)].size() > 0;
    }
    const Eigen::MatrixXcd& at(int id) const {
        if (!has(id)) throw InternalError("missing spectral buffer for segment " + std::to_string(id));
        return by_segment[static_cast<std::size_t>(id)];
    }
};

/// Local transforms for every level a plan modulates.
class TransformSet {
public:
    explicit TransformSet(const PairPlan& plan) : by_level_(static_cast<std::size_t>(plan.tree.root_level() + 1)) {
        for (std::size_t level = 0; level < plan.interpolation.size(); ++level) {
            if (plan.interpolation[level].size() > 0) {
                by_level_[level] = std::make_unique<LocalTransform>(static_cast<int>(level), plan.p, plan.options.m_f);
            }
        }
    }
    const LocalTransform& at(int level) const {
        const auto& tf = by_level_.at(static_cast<std::size_t>(level));
        if (!tf) throw InternalError("no local transform for level " + std::to_string(level));
        return *tf;
    }

private:
    std::vector<std::unique_ptr<LocalTransform>> by_level_;
};

namespace detail {

inline void check_plan(const PairPlan& plan, std::size_t density_size) {
    if (!plan.factors_ready) throw InternalError("plan factors have not been computed");
    if (density_size != plan.n) throw DimensionError("density length does not match the plan's point count");
}

inline std::span<const Complex> restrict_to(std::span<const Complex> f, const Segment& seg) {
    return f.subspan(seg.first, seg.count);
}

/// Pair indices grouped by target segment, in plan order.
inline std::vector<std::vector<std::size_t>> pairs_by_target(const PairPlan& plan) {
    std::vector<std::vector<std::size_t>> groups(plan.tree.size());
    for (std::size_t i = 0; i < plan.pairs.size(); ++i) groups[static_cast<std::size_t>(plan.pairs[i].target)].push_back(i);
    return groups;
}

}  // namespace detail

/// Forward transform of one segment's density (step 1 for a single source).
inline Eigen::MatrixXcd forward_transform(const PairPlan& plan, const TransformSet& transforms, int segment,
                                          std::span<const Complex> f) {
    const Segment& seg = plan.segment(segment);
    return transforms.at(seg.level).forward(detail::restrict_to(f, seg), plan.interpolation.at(static_cast<std::size_t>(seg.level)));
}

/// Inverse transform of one target's spectral buffer: its contribution to u(T).
inline Eigen::VectorXcd inverse_transform(const PairPlan& plan, const TransformSet& transforms, int segment,
                                          const Eigen::MatrixXcd& u_hat) {
    const Segment& seg = plan.segment(segment);
    return transforms.at(seg.level).inverse(u_hat, plan.interpolation.at(static_cast<std::size_t>(seg.level)));
}

/// f_hat_S for every source that is modulated by at least one pair.
inline SpectralBuffers forward_transforms(const PairPlan& plan, const TransformSet& transforms, std::span<const Complex> f) {
    detail::check_plan(plan, f.size());
    std::vector<int> sources;
    std::vector<bool> seen(plan.tree.size(), false);
    for (const auto& pr : plan.pairs) {
        if (modulates_source(pr.kind) && !seen[static_cast<std::size_t>(pr.source)]) {
            seen[static_cast<std::size_t>(pr.source)] = true;
            sources.push_back(pr.source);
        }
    }
    SpectralBuffers f_hat;
    f_hat.by_segment.resize(plan.tree.size());
    parallel_for(sources.size(), [&](std::size_t i) {
        f_hat.by_segment[static_cast<std::size_t>(sources[i])] = forward_transform(plan, transforms, sources[i], f);
    });
    return f_hat;
}

struct PairApplication {
    DensityVector u;        ///< direct contributions (dense and one-sided source pairs)
    SpectralBuffers u_hat;  ///< per modulated target
};

/// Applies all pairs of one target segment, in plan order.
inline void apply_target_pairs(const PairPlan& plan, std::span<const std::size_t> pair_indices, std::span<const Complex> f,
                               const SpectralBuffers& f_hat, Eigen::VectorXcd& u_target, Eigen::MatrixXcd& u_hat_target) {
    for (std::size_t index : pair_indices) {
        const SegmentPair& pr = plan.pairs[index];
        const Segment& s = plan.segment(pr.source);
        const Eigen::Map<const Eigen::VectorXcd> f_s(f.data() + s.first, static_cast<Eigen::Index>(s.count));
        switch (pr.kind) {
            case PairKind::Dense:
                u_target.noalias() += pr.block * f_s;
                break;
            case PairKind::LowRankBoth:
                u_hat_target.col(pr.k_target).noalias() += pr.block * f_hat.at(pr.source).col(pr.k_source);
                break;
            case PairKind::LowRankSource:
                u_target.noalias() += pr.block * f_hat.at(pr.source).col(pr.k_source);
                break;
            case PairKind::LowRankTarget:
                u_hat_target.col(pr.k_target).noalias() += pr.block * f_s;
                break;
        }
    }
}

/// Step 2 over all targets. Each target is handled by one worker, so u(T) and
/// u_hat_T have a single writer; partial vectors are summed in target order.
inline PairApplication apply_pairs(const PairPlan& plan, const TransformSet& transforms, std::span<const Complex> f,
                                   const SpectralBuffers& f_hat) {
    detail::check_plan(plan, f.size());
    const auto groups = detail::pairs_by_target(plan);
    std::vector<int> targets;
    for (std::size_t id = 0; id < groups.size(); ++id) {
        if (!groups[id].empty()) targets.push_back(static_cast<int>(id));
    }

    PairApplication result;
    result.u.assign(plan.n, Complex{});
    result.u_hat.by_segment.resize(plan.tree.size());
    std::vector<Eigen::VectorXcd> partial(targets.size());

    parallel_for(targets.size(), [&](std::size_t i) {
        const int id = targets[i];
        const Segment& t = plan.segment(id);
        const auto& group = groups[static_cast<std::size_t>(id)];
        bool modulated = false;
        for (std::size_t index : group) modulated = modulated || modulates_target(plan.pairs[index].kind);
        Eigen::MatrixXcd u_hat;
        if (modulated) {
            u_hat = Eigen::MatrixXcd::Zero(plan.options.m_c, static_cast<Eigen::Index>(transforms.at(t.level).frequencies()));
        }
        partial[i] = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(t.count));
        apply_target_pairs(plan, group, f, f_hat, partial[i], u_hat);
        result.u_hat.by_segment[static_cast<std::size_t>(id)] = std::move(u_hat);
    });

    for (std::size_t i = 0; i < targets.size(); ++i) {
        const Segment& t = plan.segment(targets[i]);
        for (std::size_t k = 0; k < t.count; ++k) result.u[t.first + k] += partial[i][static_cast<Eigen::Index>(k)];
    }
    return result;
}

/// u(x) ~ sum_{y != x} G(x, y) f(y) using the compressed plan.
inline DensityVector evaluate(const PairPlan& plan, std::span<const Complex> f) {
    detail::check_plan(plan, f.size());
    const TransformSet transforms(plan);
    const SpectralBuffers f_hat = forward_transforms(plan, transforms, f);
    PairApplication applied = apply_pairs(plan, transforms, f, f_hat);

    std::vector<int> targets;
    for (std::size_t id = 0; id < plan.tree.size(); ++id) {
        if (applied.u_hat.has(static_cast<int>(id))) targets.push_back(static_cast<int>(id));
    }
    std::vector<Eigen::VectorXcd> contributions(targets.size());
    parallel_for(targets.size(), [&](std::size_t i) {
        contributions[i] = inverse_transform(plan, transforms, targets[i], applied.u_hat.at(targets[i]));
    });

    DensityVector u = std::move(applied.u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const Segment& t = plan.segment(targets[i]);
        for (std::size_t k = 0; k < t.count; ++k) u[t.first + k] += contributions[i][static_cast<Eigen::Index>(k)];
    }
    return u;
}

}  // namespace dirhelm
