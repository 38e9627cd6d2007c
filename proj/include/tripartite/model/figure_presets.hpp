#pragma once

// Dimensionless (λ = 1) rate sets for the population-dynamics and
// entanglement scenarios. The squeezed-frame detuning is fixed through the
// sideband ratio kappa = Δ_m / λ_eff with the red-sideband condition
// δ_K = δ_NV − Δ_m.

#include "tripartite/model/params.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tripartite::model {

struct DynamicsScenario {
    ModelRates rates;
    Detunings detunings;
};

struct ScenarioInputs {
    double r = 0.0;
    double g0 = 30.0;
    double gamma_K = 0.0;
    double gamma_s = 0.0;
    double Gamma_m = 0.0;
    double kappa = 15.0;
    double delta_NV = 0.0;
};

inline DynamicsScenario make_scenario(const ScenarioInputs& in) {
    if (!(in.kappa > 0.0))
        throw parameter_error("sideband ratio kappa must be positive");
    if (in.r < 0.0 || in.r > 6.0)
        throw parameter_error("squeezing parameter r must lie in [0, 6]");
    DynamicsScenario s;
    s.rates.lambda = 1.0;
    s.rates.lambda_eff = std::exp(in.r);
    s.rates.g0 = in.g0;
    s.rates.r = in.r;
    s.rates.gamma_K = in.gamma_K;
    s.rates.gamma_s = in.gamma_s;
    s.rates.Gamma_m = in.Gamma_m;
    const double Delta_m = in.kappa * s.rates.lambda_eff;
    s.detunings = red_detuning(Delta_m, in.r, in.delta_NV);
    s.rates.Omega_p = s.detunings.delta_m * std::tanh(2.0 * in.r);
    s.rates.gamma_th = std::exp(-2.0 * in.r) * in.Gamma_m;
    return s;
}

inline constexpr double kPopulationKappa = 15.0;
inline constexpr double kEntanglementKappa = 30.0;

struct PopulationPanel {
    char id;
    double r;
    double gamma_K;
};

/// Panels (a)–(d): (r, γ_K) with γ_s = 0.05 and Γ_m = 1.1 held fixed.
inline const std::vector<PopulationPanel>& population_panels() {
    static const std::vector<PopulationPanel> p = {
        {'a', 0.0, 5.0}, {'b', 3.0, 5.0}, {'c', 3.0, 50.0}, {'d', 4.5, 50.0}};
    return p;
}

inline ScenarioInputs population_inputs(double r, double gamma_K) {
    return ScenarioInputs{r, 30.0, gamma_K, 0.05, 1.1, kPopulationKappa, 0.0};
}

inline const std::vector<double>& entanglement_squeezings() {
    static const std::vector<double> r = {0.0, 1.5, 3.0, 4.5};
    return r;
}

/// Decay-free scenario for the entanglement curves.
inline ScenarioInputs entanglement_inputs(double r) {
    return ScenarioInputs{r, 30.0, 0.0, 0.0, 0.0, kEntanglementKappa, 0.0};
}

inline std::vector<double> uniform_grid(double t_max, std::size_t samples) {
    if (samples < 2 || !(t_max > 0.0))
        throw std::invalid_argument("uniform_grid: need at least two samples over a positive span");
    std::vector<double> g(samples);
    for (std::size_t i = 0; i < samples; ++i)
        g[i] = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
    return g;
}

} // namespace tripartite::model
