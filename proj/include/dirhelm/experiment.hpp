#pragma once

// Benchmark harness: one configuration -> one result row (T_s, T_a, e).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dirhelm/errors.hpp"
#include "dirhelm/evaluate.hpp"
#include "dirhelm/geometry.hpp"
#include "dirhelm/kernels.hpp"
#include "dirhelm/oracle.hpp"
#include "dirhelm/pair_plan.hpp"
#include "dirhelm/plan_io.hpp"

namespace dirhelm {

enum class DensityKind { Random, PlaneWave, Impulse };
enum class VerifyMode { Sample, Full, Off };

inline DensityKind parse_density(const std::string& name) {
    if (name == "random") return DensityKind::Random;
    if (name == "planewave") return DensityKind::PlaneWave;
    if (name == "impulse") return DensityKind::Impulse;
    throw ConfigError("unknown density '" + name + "' (expected random, planewave or impulse)");
}

inline VerifyMode parse_verify(const std::string& name) {
    if (name == "sample") return VerifyMode::Sample;
    if (name == "full") return VerifyMode::Full;
    if (name == "off") return VerifyMode::Off;
    throw ConfigError("unknown verify mode '" + name + "' (expected sample, full or off)");
}

inline constexpr std::uint64_t default_seed = 20240611;
inline constexpr std::size_t default_sample_size = 100;

struct RunConfig {
    BoundaryShape shape = BoundaryShape::ellipse(1.0, 0.5);
    int q = 4;
    int p = 8;
    PlanOptions plan;  // m_leaf 4, m_f 2, m_c 8
    OperatorKind op = OperatorKind::SingleLayer;
    DensityKind density = DensityKind::Random;
    std::uint64_t seed = default_seed;
    VerifyMode verify = VerifyMode::Sample;
    std::size_t sample_size = default_sample_size;
    std::string dump_plan;  ///< write the plan here after setup (empty: no dump)
    std::string load_plan;  ///< read the plan from here instead of running setup
};

struct ResultRow {
    int mc = 0;
    double omega = 0.0;
    std::size_t n = 0;
    double Ts = std::numeric_limits<double>::quiet_NaN();
    double Ta = std::numeric_limits<double>::quiet_NaN();
    double e = std::numeric_limits<double>::quiet_NaN();

    // Not part of the CSV.
    bool ok = false;
    std::string error;
    std::string shape;
    std::string op;
    int q = 0;
    double T_geometry = 0.0;
    std::size_t cover_size = 0;
    std::size_t pair_count = 0;
    std::size_t dense_pairs = 0;
    std::size_t low_rank_pairs = 0;
};

/// The density vector for a run. Random: independent uniform real and imaginary
/// parts in [-1, 1]. Plane wave: exp(i omega d.x) with a seeded direction d.
/// Impulse: 1 at a seeded index.
inline DensityVector make_density(const Discretization& disc, DensityKind kind, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DensityVector f(disc.size());
    switch (kind) {
        case DensityKind::Random: {
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            for (auto& v : f) {
                const double re = u(rng);
                v = Complex(re, u(rng));
            }
            break;
        }
        case DensityKind::PlaneWave: {
            const double angle = std::uniform_real_distribution<double>(0.0, two_pi)(rng);
            const Vec2 d(std::cos(angle), std::sin(angle));
            for (std::size_t i = 0; i < f.size(); ++i) {
                const double phase = disc.omega() * d.dot(disc[i].position);
                f[i] = Complex(std::cos(phase), std::sin(phase));
            }
            break;
        }
        case DensityKind::Impulse:
            f[std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng)] = 1.0;
            break;
    }
    return f;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline void validate(const RunConfig& config) {
    if (config.q < 1 || config.q > 12) throw ConfigError("q must lie in [1, 12]");
    if (config.p < 4) throw ConfigError("p must be at least 4");
    if (config.plan.m_c < 2) throw ConfigError("mc must be at least 2");
    if (config.plan.m_f < 1) throw ConfigError("mf must be positive");
    if (config.plan.m_leaf < 1 || (config.plan.m_leaf & (config.plan.m_leaf - 1)) != 0) {
        throw ConfigError("ml must be a power of two");
    }
    if (config.sample_size == 0) throw ConfigError("sample size must be positive");
}

}  // namespace detail

/// geometry -> discretization -> plan (T_s) -> evaluate (T_a) -> e against the
/// direct sum. Errors propagate; run_sweep turns them into marked rows.
inline ResultRow run_experiment(const RunConfig& config) {
    using clock = std::chrono::steady_clock;
    detail::validate(config);
    ResultRow row;
    row.mc = config.plan.m_c;
    row.q = config.q;
    row.shape = config.shape.name();
    row.op = std::string(to_string(config.op));

    auto start = clock::now();
    const Discretization disc = discretize(build_geometry(config.shape), config.q, config.p);
    row.T_geometry = detail::seconds_since(start);
    row.omega = disc.omega();
    row.n = disc.size();
    const LayerKernel kernel{config.op, disc.omega()};

    start = clock::now();
    const PairPlan plan = config.load_plan.empty() ? build_plan(disc, kernel, config.plan)
                                                   : load_plan(config.load_plan, disc, config.op);
    row.Ts = detail::seconds_since(start);
    if (!config.load_plan.empty()) row.mc = plan.options.m_c;
    if (!config.dump_plan.empty()) save_plan(config.dump_plan, plan, config.shape, config.op);
    row.cover_size = plan.tree.cover().size();
    row.pair_count = plan.pairs.size();
    row.dense_pairs = plan.dense_count();
    row.low_rank_pairs = plan.low_rank_count();

    const DensityVector f = make_density(disc, config.density, config.seed);
    start = clock::now();
    const DensityVector u = evaluate(plan, f);
    row.Ta = detail::seconds_since(start);

    if (config.verify == VerifyMode::Full) {
        const auto exact = dense_evaluate(disc, kernel, f);
        std::vector<std::size_t> all(disc.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        row.e = relative_error(exact, u, all, config.seed).relative_l2;
    } else if (config.verify == VerifyMode::Sample) {
        const auto sample = sample_indices(disc.size(), config.sample_size, config.seed);
        const auto exact = dense_evaluate_at(disc, kernel, f, sample);
        row.e = relative_error_sampled(exact, u, sample, config.seed).relative_l2;
    }
    row.ok = true;
    return row;
}

/// Runs every configuration in order. A failing configuration yields a row with
/// ok = false and the error text; later configurations still run.
inline std::vector<ResultRow> run_sweep(const std::vector<RunConfig>& configs,
                                        const std::function<void(const ResultRow&)>& on_row = {}) {
    std::vector<ResultRow> rows;
    rows.reserve(configs.size());
    for (const auto& config : configs) {
        ResultRow row;
        try {
            row = run_experiment(config);
        } catch (const std::exception& ex) {
            row = ResultRow{};
            row.omega = std::numeric_limits<double>::quiet_NaN();
            row.mc = config.plan.m_c;
            row.q = config.q;
            row.shape = config.shape.name();
            row.op = std::string(to_string(config.op));
            row.error = ex.what();
        }
        if (on_row) on_row(row);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline constexpr const char* csv_header = "mc,omega,n,Ts,Ta,e";

/// One CSV line; failed rows keep the schema with nan in the measured columns.
inline std::string csv_line(const ResultRow& row) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%.6e,%zu,%.6e,%.6e,%.6e", row.mc, row.omega, row.n, row.Ts, row.Ta, row.e);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << csv_header << '\n';
    for (const auto& row : rows) out << csv_line(row) << '\n';
}

/// Human-readable table grouped by (shape, operator, q).
inline void write_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
    std::string group;
    char buf[200];
    for (const auto& row : rows) {
        const std::string g = row.shape + " " + row.op + " q=" + std::to_string(row.q);
        if (g != group) {
            group = g;
            out << "\n" << group << "\n";
            std::snprintf(buf, sizeof buf, "%4s %10s %8s %10s %10s %10s\n", "m_c", "omega", "n", "T_s", "T_a", "e");
            out << buf;
        }
        if (!row.ok) {
            std::snprintf(buf, sizeof buf, "%4d  FAILED: ", row.mc);
            out << buf << row.error << "\n";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%4d %10.1e %8zu %10.2e %10.2e %10.1e\n", row.mc, row.omega, row.n, row.Ts, row.Ta,
                      row.e);
        out << buf;
    }
}

}  // namespace dirhelm
