// Builds a plan for the single-layer operator on an ellipse 256 wavelengths
// around, applies it to a random density and checks 100 entries against the
// direct sum.

#include <cstdio>

#include "dirhelm/dirhelm.hpp"

int main() {
    using namespace dirhelm;

    const Discretization disc = discretize(build_geometry(BoundaryShape::ellipse(1.0, 0.5)), 4, 8);
    const LayerKernel kernel{OperatorKind::SingleLayer, disc.omega()};

    PlanOptions options;
    options.m_c = 10;
    const PairPlan plan = build_plan(disc, kernel, options);
    std::printf("n = %zu, omega = %.1f, cover %zu segments, %zu pairs (%zu dense)\n", disc.size(), disc.omega(),
                plan.tree.cover().size(), plan.pairs.size(), plan.dense_count());

    const DensityVector f = make_density(disc, DensityKind::Random, 7);
    const DensityVector u = evaluate(plan, f);

    const auto sample = sample_indices(disc.size(), 100, 7);
    const auto exact = dense_evaluate_at(disc, kernel, f, sample);
    std::printf("relative error at 100 points: %.2e\n", relative_error_sampled(exact, u, sample).relative_l2);
}
