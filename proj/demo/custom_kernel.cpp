// The setup and evaluation stages only call G(x, y). Any callable whose
// oscillation is exp(i omega |x - y|) times a smooth factor can be plugged in;
// here a damped single-layer kernel with a smooth amplitude.

#include <cmath>
#include <cstdio>

#include "dirhelm/dirhelm.hpp"

int main() {
    using namespace dirhelm;

    const Discretization disc = discretize(build_geometry(BoundaryShape::bean()), 3, 8);
    const double omega = disc.omega();
    const auto kernel = [omega](const KernelPoint& x, const KernelPoint& y) {
        const double r = (x.position - y.position).norm();
        return Complex(std::cos(omega * r), std::sin(omega * r)) / std::sqrt(1.0 + omega * r);
    };
    static_assert(BoundaryKernel<decltype(kernel)>);

    const PairPlan plan = build_plan(disc, kernel);
    const DensityVector f = make_density(disc, DensityKind::PlaneWave, 1);
    const DensityVector u = evaluate(plan, f);
    const auto exact = dense_evaluate(disc, kernel, f);

    std::vector<std::size_t> all(disc.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    std::printf("bean, n = %zu: relative error %.2e over all points\n", disc.size(),
                relative_error(exact, u, all).relative_l2);
}
