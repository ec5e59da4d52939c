// Acceptance run: one [PASS]/[FAIL] line per criterion, details indented below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "dirhelm/dirhelm.hpp"
#include "support/oracles.hpp"

using namespace dirhelm;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int failures = 0;
std::vector<std::string> pending;

template <class... Args>
void detail_line(const char* fmt, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    pending.emplace_back(buf);
}

// Prints the verdict, then the detail lines collected since the last verdict.
void report(bool ok, int id, const std::string& what) {
    std::printf("[%s] %d %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    for (const auto& l : pending) std::printf("    %s\n", l.c_str());
    pending.clear();
    std::fflush(stdout);
    if (!ok) ++failures;
}

double full_relative_error(const std::vector<Complex>& exact, const std::vector<Complex>& approx) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        num += std::norm(exact[i] - approx[i]);
        den += std::norm(exact[i]);
    }
    return std::sqrt(num / den);
}

double sampled_error(const Discretization& disc, const LayerKernel& kernel, const PairPlan& plan, std::uint64_t seed) {
    const auto f = make_density(disc, DensityKind::Random, seed);
    const auto u = evaluate(plan, f);
    const auto sample = sample_indices(disc.size(), default_sample_size, seed);
    return relative_error_sampled(dense_evaluate_at(disc, kernel, f, sample), u, sample, seed).relative_l2;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const std::vector<BoundaryShape> shapes{BoundaryShape::ellipse(1.0, 0.5), BoundaryShape::bean()};

void criterion_dense_regime() {
    const auto t0 = clock_type::now();
    double worst = 0.0;
    for (const auto& shape : shapes) {
        const auto disc = discretize(build_geometry(shape), 2, 8);
        const auto f = make_density(disc, DensityKind::Random, default_seed);
        for (auto op : all_operators) {
            const LayerKernel kernel{op, disc.omega()};
            const auto u = evaluate(build_plan(disc, kernel), f);
            worst = std::max(worst, full_relative_error(dense_evaluate(disc, kernel, f), u));
        }
    }
    const double t = seconds_since(t0);
    detail_line("worst relative error %.2e (tol 1e-12), total time %.3f s (limit 1 s)", worst, t);
    report(worst <= 1e-12 && t < 1.0, 1, "dense regime (q=2) matches the direct sum on all points");
}

void criteria_accuracy_and_trend() {
    const int mcs[] = {6, 8, 10, 12};
    const double tols[] = {5e-3, 5e-4, 5e-5, 5e-6};
    constexpr int seeds = 5;
    bool accurate = true, monotone = true;
    double slowest = 0.0;
    std::vector<std::string> lines;
    std::vector<std::string> trend_lines;
    for (const auto& shape : shapes) {
        const auto disc = discretize(build_geometry(shape), 5, 8);
        for (auto op : all_operators) {
            const LayerKernel kernel{op, disc.omega()};
            std::string row = shape.name() + " " + std::string(to_string(op)) + ":";
            std::string trow = row;
            double prev_median = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 4; ++i) {
                PlanOptions options;
                options.m_c = mcs[i];
                const auto t0 = clock_type::now();
                const auto plan = build_plan(disc, kernel, options);
                const double e = sampled_error(disc, kernel, plan, default_seed);
                slowest = std::max(slowest, seconds_since(t0));
                accurate = accurate && e <= tols[i];
                char buf[64];
                std::snprintf(buf, sizeof buf, " mc=%d %.1e%s", mcs[i], e, e <= tols[i] ? "" : "!");
                row += buf;

                std::vector<double> errs;
                for (int r = 0; r < seeds; ++r) errs.push_back(sampled_error(disc, kernel, plan, default_seed + r));
                std::nth_element(errs.begin(), errs.begin() + seeds / 2, errs.end());
                const double median = errs[seeds / 2];
                monotone = monotone && median < prev_median;
                prev_median = median;
                std::snprintf(buf, sizeof buf, " %.1e", median);
                trow += buf;
            }
            lines.push_back(row);
            trend_lines.push_back(trow);
        }
    }
    for (const auto& l : lines) detail_line("%s", l.c_str());
    detail_line("slowest cell %.2f s (limit 60 s)", slowest);
    report(accurate && slowest < 60.0, 2, "accuracy vs m_c at q=5 (tolerances 5e-3, 5e-4, 5e-5, 5e-6)");
    for (const auto& l : trend_lines) detail_line("%s", l.c_str());
    report(monotone, 3, "median error over 5 seeds strictly decreases in m_c");
}

void criterion_scaling() {
    const auto t0 = clock_type::now();
    std::vector<double> logn, log_ts, log_ta;
    for (int q = 4; q <= 7; ++q) {
        const auto disc = discretize(build_geometry(shapes[0]), q, 8);
        const LayerKernel kernel{OperatorKind::SingleLayer, disc.omega()};
        double ts = std::numeric_limits<double>::infinity();
        PairPlan plan;
        for (int r = 0; r < 2; ++r) {
            const auto s0 = clock_type::now();
            plan = build_plan(disc, kernel);
            ts = std::min(ts, seconds_since(s0));
        }
        const auto f = make_density(disc, DensityKind::Random, default_seed);
        double ta = std::numeric_limits<double>::infinity();
        for (int r = 0; r < 5; ++r) {
            const auto a0 = clock_type::now();
            const auto u = evaluate(plan, f);
            ta = std::min(ta, seconds_since(a0));
        }
        logn.push_back(std::log(static_cast<double>(disc.size())));
        log_ts.push_back(std::log(ts));
        log_ta.push_back(std::log(ta));
        detail_line("q=%d n=%zu Ts=%.3e s Ta=%.3e s", q, disc.size(), ts, ta);
    }
    const double alpha_a = slope(logn, log_ta);
    const double alpha_s = slope(logn, log_ts);
    const double total = seconds_since(t0);
    detail_line("apply exponent %.3f, setup exponent %.3f (limit 1.35), total %.1f s", alpha_a, alpha_s, total);
    report(alpha_a <= 1.35 && alpha_s <= 1.35 && total < 900.0, 4, "scaling exponents over q=4..7 (ellipse, S, m_c=8)");
}

void criterion_rank() {
    std::vector<int> ranks;
    bool separated = true;
    for (int q = 3; q <= 5; ++q) {
        const auto ap = oracle::arc_pair(q);
        const auto sd = separation_data(ap.target_pos, Vec2(1, 0), ap.source_pos, Vec2(0, 1), two_pi / ap.omega);
        separated = separated && is_parabolically_separated(sd);
        ranks.push_back(rank_estimate(ap.target, ap.source, LayerKernel{OperatorKind::SingleLayer, ap.omega}, 1e-6));
    }
    const auto [lo, hi] = std::minmax_element(ranks.begin(), ranks.end());
    detail_line("ranks %d %d %d, parabolically separated: %s", ranks[0], ranks[1], ranks[2], separated ? "yes" : "no");
    report(separated && *hi <= 30 && *hi - *lo <= 5, 5, "1e-6 rank of a separated pair stays bounded at q=3,4,5");
}

void criterion_local_fft() {
    std::mt19937_64 rng(default_seed);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int c = 0; c < 200; ++c) {
        const int level = std::uniform_int_distribution<int>(2, 6)(rng);
        const int p = std::uniform_int_distribution<int>(4, 10)(rng);
        const int m_c = std::uniform_int_distribution<int>(4, 12)(rng);
        const int m_f = std::uniform_int_distribution<int>(1, 3)(rng);
        const LocalTransform tf(level, p, m_f);
        const double half = 0.5 * std::ldexp(1.0, level);
        std::vector<double> off(tf.points());
        for (std::size_t i = 0; i < off.size(); ++i) off[i] = (static_cast<double>(i) + 0.5) / p - half;
        const auto interp = chebyshev_interpolation_matrix(m_c, -half, half, off);
        const long double omega = 2 * std::numbers::pi_v<long double>;
        std::vector<Complex> f(tf.points());
        for (auto& v : f) v = Complex(g(rng), g(rng));
        worst = std::max(worst, oracle::relative_norm(tf.forward(f, interp),
                                                      oracle::forward_direct(f, interp, omega, 1.0L / p, level, m_f)));
        Eigen::MatrixXcd u_hat(m_c, static_cast<Eigen::Index>(tf.frequencies()));
        for (Eigen::Index i = 0; i < u_hat.size(); ++i) u_hat.data()[i] = Complex(g(rng), g(rng));
        worst = std::max(worst, oracle::relative_norm(tf.inverse(u_hat, interp),
                                                      oracle::inverse_direct(u_hat, interp, omega, 1.0L / p, level, m_f)));
    }
    detail_line("worst relative error %.2e (tol 1e-12)", worst);
    report(worst <= 1e-12, 6, "local FFT forward/inverse match direct summation (200 random cases)");
}

void criterion_tiling() {
    bool ok = true;
    for (const auto& shape : shapes) {
        for (int q = 2; q <= 6; ++q) {
            const auto disc = discretize(build_geometry(shape), q, 8);
            const auto plan = classify_pairs(build_tree(disc, 4), disc);
            const std::size_t n = disc.size();
            const bool count_ok = plan.covered_point_pairs() == n * n - n;
            std::vector<std::size_t> rows;
            if (q <= 4) {
                rows.resize(n);
                std::iota(rows.begin(), rows.end(), std::size_t{0});
            } else {
                rows = sample_indices(n, 64, default_seed + static_cast<std::uint64_t>(q));
            }
            std::size_t bad = 0;
            for (std::size_t x : rows) {
                const auto cover = oracle::row_coverage(plan, x);
                for (std::size_t y = 0; y < n; ++y) bad += (cover[y] != (y == x ? 0 : 1)) ? 1 : 0;
            }
            ok = ok && count_ok && bad == 0;
            detail_line("%s q=%d n=%zu pairs=%zu rows checked=%zu bad cells=%zu count %s", shape.name().c_str(), q, n,
                        plan.pairs.size(), rows.size(), bad, count_ok ? "= n^2-n" : "WRONG");
        }
    }
    report(ok, 7, "pair plan tiles all n^2-n ordered point pairs exactly once");
}

void criterion_hankel() {
    double worst = 0.0, worst_w = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double z = std::pow(10.0, -4.0 + 10.0 * i / 499.0);
        const Complex h0 = hankel1_0(z), h1 = hankel1_1(z);
        const Complex r0 = oracle::hankel_reference(0, z), r1 = oracle::hankel_reference(1, z);
        worst = std::max({worst, std::abs(h0 - r0) / std::abs(r0), std::abs(h1 - r1) / std::abs(r1)});
        // J1 Y0 - J0 Y1 = 2 / (pi z)
        const double w = h1.real() * h0.imag() - h0.real() * h1.imag();
        const double expect = 2.0 / (std::numbers::pi * z);
        worst_w = std::max(worst_w, std::abs(w - expect) / expect);
    }
    detail_line("worst relative error %.2e, worst Wronskian defect %.2e (tol 1e-10)", worst, worst_w);
    report(worst <= 1e-10 && worst_w <= 1e-10, 8, "Hankel functions vs 50-digit oracle and Wronskian on [1e-4, 1e6]");
}

void criterion_linearity() {
    const auto disc = discretize(build_geometry(shapes[1]), 4, 8);
    const LayerKernel kernel{OperatorKind::NormalDerivSingle, disc.omega()};
    const auto plan = build_plan(disc, kernel);
    const auto f1 = make_density(disc, DensityKind::Random, default_seed);
    const auto f2 = make_density(disc, DensityKind::Random, default_seed + 1);
    const Complex a(0.7, -0.2), b(-1.5, 2.0);
    std::vector<Complex> mix(disc.size());
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * f1[i] + b * f2[i];
    const auto u1 = evaluate(plan, f1);
    const auto u2 = evaluate(plan, f2);
    std::vector<Complex> expect(disc.size());
    for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = a * u1[i] + b * u2[i];
    const double lin = full_relative_error(expect, evaluate(plan, mix));

    const bool same_plan = evaluate(plan, f1) == u1;
    const bool rebuilt = evaluate(build_plan(disc, kernel), f1) == u1;
    detail_line("linearity defect %.2e (tol 1e-12); repeat identical: %s; rebuilt plan identical: %s", lin,
                same_plan ? "yes" : "no", rebuilt ? "yes" : "no");
    report(lin <= 1e-12 && same_plan && rebuilt, 9, "evaluate is linear and bit-reproducible");
}

}  // namespace

int main() {
    const auto t0 = clock_type::now();
    try {
        criterion_dense_regime();
        criteria_accuracy_and_trend();
        criterion_scaling();
        criterion_rank();
        criterion_local_fft();
        criterion_tiling();
        criterion_hankel();
        criterion_linearity();
    } catch (const std::exception& ex) {
        std::printf("[FAIL] aborted: %s\n", ex.what());
        return 1;
    }
    std::printf("%d criteria failed, %.1f s\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
