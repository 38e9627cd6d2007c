// Derive the experimental-point rates, then follow the spin population of
// |e,0,0> for a few vacuum Rabi periods with and without squeezing.

#include "tripartite/model/params.hpp"
#include "tripartite/sweep/figures.hpp"

#include <cstdio>

using namespace tripartite;

int main() {
    const auto dp = model::derive_params(model::trapped_diamond_preset());
    std::printf("lambda/2pi = %.4g Hz, lambda_eff/2pi = %.4g Hz, g0/lambda = %.3f, C = %.3g\n",
                dp.lambda / model::two_pi, dp.lambda_eff / model::two_pi, dp.g0 / dp.lambda, dp.C);

    const auto grid = model::uniform_grid(0.3, 31);
    for (double r : {0.0, 3.0}) {
        const auto tr = dynamics::converged_evolve(
            [&](const SpaceLayout& l) {
                return sweep::scenario_spec(model::entanglement_inputs(r), l, grid, true);
            },
            dynamics::CutoffPolicy{});
        std::printf("\nr = %.1f (phonon cutoff %zu)\n  t      spin    magnon  phonon\n", r, tr.phonon_cutoff);
        for (std::size_t i = 0; i < grid.size(); i += 3)
            std::printf("  %.3f  %.4f  %.4f  %.4f\n", tr.times[i], tr.spin[i], tr.magnon[i], tr.phonon[i]);
    }
}
