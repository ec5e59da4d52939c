#pragma once

// Binary dump/load of a PairPlan so setup and application can run in separate
// processes. Only the classification and factor blocks are stored; the tree and
// Chebyshev grids are rebuilt from the discretization on load.
//
// Layout (little-endian host order):
//   header   magic[8] "DIRHPLAN", u32 version, i32 q p m_leaf m_f m_c,
//            u64 shape hash, i32 operator, f64 omega, u64 n, u64 pair count
//   per pair i32 target source kind k_target k_source, i64 rows cols,
//            rows*cols complex<double> column-major

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "dirhelm/errors.hpp"
#include "dirhelm/geometry.hpp"
#include "dirhelm/kernels.hpp"
#include "dirhelm/pair_plan.hpp"

namespace dirhelm {

inline constexpr std::array<char, 8> plan_magic{'D', 'I', 'R', 'H', 'P', 'L', 'A', 'N'};
inline constexpr std::uint32_t plan_format_version = 1;

struct PlanHeader {
    std::uint32_t version = plan_format_version;
    int q = 0;
    int p = 0;
    int m_leaf = 0;
    int m_f = 0;
    int m_c = 0;
    std::uint64_t shape_hash = 0;
    OperatorKind op = OperatorKind::SingleLayer;
    double omega = 0.0;
    std::uint64_t n = 0;
    std::uint64_t pair_count = 0;
};

namespace detail {

template <class T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw InternalError("plan file truncated");
    return v;
}

}  // namespace detail

inline void save_plan(std::ostream& out, const PairPlan& plan, const BoundaryShape& shape, OperatorKind op) {
    if (!plan.factors_ready) throw InternalError("save_plan: factors have not been computed");
    out.write(plan_magic.data(), plan_magic.size());
    detail::write_pod(out, plan_format_version);
    for (int v : {plan.q, plan.p, plan.options.m_leaf, plan.options.m_f, plan.options.m_c}) detail::write_pod(out, v);
    detail::write_pod(out, shape.hash());
    detail::write_pod(out, static_cast<std::int32_t>(op));
    detail::write_pod(out, plan.omega);
    detail::write_pod(out, static_cast<std::uint64_t>(plan.n));
    detail::write_pod(out, static_cast<std::uint64_t>(plan.pairs.size()));
    for (const auto& pr : plan.pairs) {
        for (int v : {pr.target, pr.source, static_cast<int>(pr.kind), pr.k_target, pr.k_source}) detail::write_pod(out, v);
        detail::write_pod(out, static_cast<std::int64_t>(pr.block.rows()));
        detail::write_pod(out, static_cast<std::int64_t>(pr.block.cols()));
        out.write(reinterpret_cast<const char*>(pr.block.data()),
                  static_cast<std::streamsize>(sizeof(Complex) * static_cast<std::size_t>(pr.block.size())));
    }
    if (!out) throw InternalError("save_plan: write failed");
}

inline void save_plan(const std::string& path, const PairPlan& plan, const BoundaryShape& shape, OperatorKind op) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open plan file for writing: " + path);
    save_plan(out, plan, shape, op);
}

inline PlanHeader read_plan_header(std::istream& in) {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != plan_magic) throw InternalError("not a plan file (bad magic)");
    PlanHeader h;
    h.version = detail::read_pod<std::uint32_t>(in);
    if (h.version != plan_format_version) {
        throw InternalError("unsupported plan file version " + std::to_string(h.version));
    }
    h.q = detail::read_pod<std::int32_t>(in);
    h.p = detail::read_pod<std::int32_t>(in);
    h.m_leaf = detail::read_pod<std::int32_t>(in);
    h.m_f = detail::read_pod<std::int32_t>(in);
    h.m_c = detail::read_pod<std::int32_t>(in);
    h.shape_hash = detail::read_pod<std::uint64_t>(in);
    const auto op = detail::read_pod<std::int32_t>(in);
    if (op < 0 || op > 3) throw InternalError("plan file: unknown operator code");
    h.op = static_cast<OperatorKind>(op);
    h.omega = detail::read_pod<double>(in);
    h.n = detail::read_pod<std::uint64_t>(in);
    h.pair_count = detail::read_pod<std::uint64_t>(in);
    return h;
}

/// Loads a plan written by save_plan. The header must agree with the
/// discretization, shape and operator it will be applied with.
inline PairPlan load_plan(std::istream& in, const Discretization& disc, OperatorKind op) {
    const PlanHeader h = read_plan_header(in);
    if (h.shape_hash != disc.geometry().shape().hash()) throw ConfigError("plan file was built for a different shape");
    if (h.q != disc.q() || h.p != disc.p() || h.n != disc.size()) {
        throw ConfigError("plan file was built for a different discretization (q, p or n differ)");
    }
    if (h.op != op) throw ConfigError("plan file was built for operator " + std::string(to_string(h.op)));
    if (h.omega != disc.omega()) throw ConfigError("plan file frequency does not match the discretization");

    PlanOptions options;
    options.m_leaf = h.m_leaf;
    options.m_f = h.m_f;
    options.m_c = h.m_c;
    if (options.m_f < 1 || options.m_c < 2) throw InternalError("plan file: invalid m_f or m_c");
    PairPlan plan;
    plan.options = options;
    plan.tree = build_tree(disc, options.m_leaf);
    plan.n = disc.size();
    plan.q = disc.q();
    plan.p = disc.p();
    plan.omega = disc.omega();
    plan.wavelength = disc.wavelength();
    plan.spacing = disc.spacing();

    const auto ids = static_cast<int>(plan.tree.size());
    plan.pairs.resize(h.pair_count);
    for (auto& pr : plan.pairs) {
        pr.target = detail::read_pod<std::int32_t>(in);
        pr.source = detail::read_pod<std::int32_t>(in);
        const auto kind = detail::read_pod<std::int32_t>(in);
        pr.k_target = detail::read_pod<std::int32_t>(in);
        pr.k_source = detail::read_pod<std::int32_t>(in);
        const auto rows = detail::read_pod<std::int64_t>(in);
        const auto cols = detail::read_pod<std::int64_t>(in);
        if (pr.target < 0 || pr.target >= ids || pr.source < 0 || pr.source >= ids || kind < 0 || kind > 3) {
            throw InternalError("plan file: corrupt pair record");
        }
        pr.kind = static_cast<PairKind>(kind);
        const Segment& t = plan.tree[pr.target];
        const Segment& s = plan.tree[pr.source];
        const auto expect_rows = static_cast<std::int64_t>(modulates_target(pr.kind) ? options.m_c : static_cast<int>(t.count));
        const auto expect_cols = static_cast<std::int64_t>(modulates_source(pr.kind) ? options.m_c : static_cast<int>(s.count));
        if (rows != expect_rows || cols != expect_cols) throw InternalError("plan file: factor block has the wrong shape");
        const auto in_grid = [&](int k, const Segment& seg) {
            return k >= 0 && k < plan.grid(seg.level).size();
        };
        if ((modulates_target(pr.kind) && !in_grid(pr.k_target, t)) || (modulates_source(pr.kind) && !in_grid(pr.k_source, s))) {
            throw InternalError("plan file: frequency index out of range");
        }
        pr.block.resize(rows, cols);
        in.read(reinterpret_cast<char*>(pr.block.data()),
                static_cast<std::streamsize>(sizeof(Complex) * static_cast<std::size_t>(pr.block.size())));
        if (!in) throw InternalError("plan file truncated");
    }
    prepare_grids(plan, disc);
    plan.factors_ready = true;
    return plan;
}

inline PairPlan load_plan(const std::string& path, const Discretization& disc, OperatorKind op) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open plan file: " + path);
    return load_plan(in, disc, op);
}

}  // namespace dirhelm
