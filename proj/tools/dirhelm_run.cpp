// Benchmark driver: builds plans, applies them, and reports T_s, T_a and e as CSV.
//
//   dirhelm_run --shape ellipse --q 4,5 --mc 6,8,10,12 --op S,D --out results.csv
//   dirhelm_run --config run.ini --verbose

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dirhelm/dirhelm.hpp"

namespace {

struct Options {
    std::vector<std::string> shapes{"ellipse"};
    double a = 1.0;
    double b = 0.5;
    double c0 = 0.75;
    double c1 = 0.225;
    double c2 = 0.1125;
    std::vector<int> q{4};
    int p = 8;
    int ml = 4;
    int mf = 2;
    std::vector<int> mc{8};
    std::vector<std::string> ops{"S"};
    std::string density = "random";
    std::uint64_t seed = dirhelm::default_seed;
    int reps = 1;
    std::string out;
    std::string verify = "sample";
    std::size_t sample = dirhelm::default_sample_size;
    std::string dump_plan;
    std::string load_plan;
    bool verbose = false;
};

dirhelm::BoundaryShape make_shape(const std::string& name, const Options& o) {
    if (name == "ellipse") return dirhelm::BoundaryShape::ellipse(o.a, o.b);
    if (name == "bean") return dirhelm::BoundaryShape::bean(o.c0, o.c1, o.c2);
    throw dirhelm::ConfigError("unknown shape '" + name + "' (expected ellipse or bean)");
}

std::vector<dirhelm::RunConfig> expand(const Options& o) {
    const std::size_t cells = o.shapes.size() * o.ops.size() * o.q.size() * o.mc.size();
    if ((!o.dump_plan.empty() || !o.load_plan.empty()) && cells * static_cast<std::size_t>(o.reps) > 1) {
        throw dirhelm::ConfigError("--dump-plan/--load-plan need a single configuration");
    }
    if (o.reps < 0) throw dirhelm::ConfigError("reps must be non-negative");
    std::vector<dirhelm::RunConfig> configs;
    for (const auto& shape : o.shapes) {
        for (const auto& op : o.ops) {
            for (int q : o.q) {
                for (int mc : o.mc) {
                    for (int r = 0; r < o.reps; ++r) {
                        dirhelm::RunConfig c;
                        c.shape = make_shape(shape, o);
                        c.q = q;
                        c.p = o.p;
                        c.plan.m_leaf = o.ml;
                        c.plan.m_f = o.mf;
                        c.plan.m_c = mc;
                        c.op = dirhelm::parse_operator(op);
                        c.density = dirhelm::parse_density(o.density);
                        c.seed = o.seed + static_cast<std::uint64_t>(r);
                        c.verify = dirhelm::parse_verify(o.verify);
                        c.sample_size = o.sample;
                        c.dump_plan = o.dump_plan;
                        c.load_plan = o.load_plan;
                        configs.push_back(std::move(c));
                    }
                }
            }
        }
    }
    return configs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fast directional Helmholtz boundary summation: benchmark driver"};
    Options o;
    app.set_config("--config", "", "flat key=value file; command-line flags override it");
    app.add_option("--shape", o.shapes, "ellipse and/or bean")->delimiter(',');
    app.add_option("--a", o.a, "ellipse semi-axis along x");
    app.add_option("--b", o.b, "ellipse semi-axis along y");
    app.add_option("--c0", o.c0, "bean radius coefficient c0");
    app.add_option("--c1", o.c1, "bean coefficient of cos t");
    app.add_option("--c2", o.c2, "bean coefficient of sin 2t");
    app.add_option("--q", o.q, "size exponent(s): perimeter = 4^q wavelengths")->delimiter(',');
    app.add_option("--p", o.p, "points per wavelength");
    app.add_option("--ml", o.ml, "leaf length in wavelengths (power of two)");
    app.add_option("--mf", o.mf, "frequency grid refinement");
    app.add_option("--mc", o.mc, "Chebyshev grid size(s)")->delimiter(',');
    app.add_option("--op", o.ops, "operator(s): S, D, Dp, N")->delimiter(',');
    app.add_option("--density", o.density, "random, planewave or impulse");
    app.add_option("--seed", o.seed, "density and sample seed");
    app.add_option("--reps", o.reps, "repetitions per cell; repetition r uses seed + r");
    app.add_option("--out", o.out, "CSV output file (default: stdout)");
    app.add_option("--verify", o.verify, "sample (100 points), full, or off");
    app.add_option("--sample", o.sample, "number of sampled targets for --verify sample");
    app.add_option("--dump-plan", o.dump_plan, "write the plan of a single run to FILE");
    app.add_option("--load-plan", o.load_plan, "apply a plan from FILE instead of running setup");
    app.add_flag("-v,--verbose", o.verbose, "print tree and plan statistics");
    CLI11_PARSE(app, argc, argv);

    std::vector<dirhelm::RunConfig> configs;
    try {
        configs = expand(o);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        if (!file) {
            std::cerr << "error: cannot open " << o.out << "\n";
            return 2;
        }
    }
    std::ostream& csv = o.out.empty() ? std::cout : file;
    csv << dirhelm::csv_header << '\n';

    const auto rows = dirhelm::run_sweep(configs, [&](const dirhelm::ResultRow& row) {
        csv << dirhelm::csv_line(row) << '\n' << std::flush;
        if (!row.ok) std::cerr << "row failed (" << row.shape << " " << row.op << " q=" << row.q << " mc=" << row.mc
                               << "): " << row.error << "\n";
        if (o.verbose && row.ok) {
            std::cerr << row.shape << " " << row.op << " q=" << row.q << " mc=" << row.mc << ": |G|=" << row.cover_size
                      << " |F|=" << row.pair_count << " dense=" << row.dense_pairs << " low-rank=" << row.low_rank_pairs
                      << " geometry " << row.T_geometry << " s, threads " << dirhelm::thread_count() << "\n";
        }
    });
    if (!o.out.empty()) dirhelm::write_summary(std::cout, rows);

    for (const auto& row : rows) {
        if (!row.ok) return 1;
    }
    return 0;
}
