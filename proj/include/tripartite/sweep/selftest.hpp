#pragma once

// Oracle and invariant checks runnable from the command line: integrator
// against the exponential of the full Liouvillian, frame equivalence,
// standard-state entanglement values and physicality of stored states.

#include "tripartite/core/hermitian_eigen.hpp"
#include "tripartite/core/matrix.hpp"
#include "tripartite/core/matrix_exp.hpp"
#include "tripartite/dynamics/lindblad.hpp"
#include "tripartite/entanglement/measures.hpp"
#include "tripartite/model/figure_presets.hpp"
#include "tripartite/model/hamiltonian.hpp"
#include "tripartite/sweep/figures.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace tripartite::sweep {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline constexpr double kOracleDiffLimit = 1e-6;
inline constexpr double kFrameRelLimit = 1e-4;
inline constexpr double kGhzContangleTol = 1e-6;
inline constexpr double kTangleTol = 1e-9;
inline constexpr double kStoredTraceTol = 1e-8;
inline constexpr double kStoredHermitianTol = 1e-12;
inline constexpr double kStoredPositivityTol = 1e-8;

namespace detail {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double normal() { return n_(eng_); }
    cplx cnormal() { return {normal(), normal()}; }

    ComplexMatrix matrix(Eigen::Index n) {
        ComplexMatrix m(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i)
                m(i, j) = cnormal();
        return m;
    }
    ComplexMatrix hermitian(Eigen::Index n) {
        const ComplexMatrix m = matrix(n);
        return 0.5 * (m + m.adjoint());
    }
    ComplexMatrix density(Eigen::Index n) {
        const ComplexMatrix m = matrix(n);
        ComplexMatrix rho = m * m.adjoint();
        return rho / rho.trace().real();
    }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> n_{0.0, 1.0};
};

inline std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

} // namespace detail

/// Evolve on dims (2,3,2) with random H and two random jump operators and
/// compare with exp(t·L)vec(ρ0) at t = 0.5, 1, 2.
inline Check check_liouvillian_oracle(std::uint64_t seed) {
    detail::Rng rng(seed);
    const SpaceLayout layout({2, 3, 2});
    const auto n = static_cast<Eigen::Index>(layout.total());
    dynamics::EvolutionSpec spec;
    spec.layout = layout;
    spec.hamiltonian = rng.hermitian(n);
    spec.collapse_ops = {0.4 * rng.matrix(n), 0.4 * rng.matrix(n)};
    spec.initial_state = rng.density(n);
    spec.time_grid = {0.0, 0.5, 1.0, 2.0};
    spec.store_states = true;
    const auto tr = dynamics::evolve(spec);
    const ComplexMatrix sup = dynamics::liouvillian_superoperator(spec.hamiltonian, spec.collapse_ops);
    const ComplexVector v0 = dynamics::vectorize(std::get<ComplexMatrix>(spec.initial_state));
    double worst = 0.0;
    for (std::size_t i = 1; i < spec.time_grid.size(); ++i) {
        const ComplexMatrix oracle = dynamics::unvectorize(matrix_exp(spec.time_grid[i] * sup) * v0, n);
        worst = std::max(worst, max_abs(tr.states[i] - oracle));
    }
    return {"liouvillian-exponential oracle (2,3,2)", worst < kOracleDiffLimit, "max diff " + detail::sci(worst)};
}

/// U_S H_lab U_S† against H_squeezed + offset on the block with at most
/// N_b/4 phonons, for several r ≤ 1.
inline Check check_frame_equivalence(std::size_t nb = 60) {
    double worst = 0.0;
    const auto l = SpaceLayout::tripartite(nb, 2);
    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < l.total(); ++i)
        if (l.digit(i, slot(Subsystem::phonon)) <= nb / 4)
            keep.push_back(static_cast<Eigen::Index>(i));
    const auto k = static_cast<Eigen::Index>(keep.size());
    for (double r : {0.25, 0.6, 1.0}) {
        model::ModelRates rates;
        rates.lambda = 1.0;
        rates.r = r;
        rates.lambda_eff = std::exp(r);
        rates.g0 = 3.0;
        const auto det = model::red_detuning(6.0, r, 0.4);
        rates.Omega_p = det.delta_m * std::tanh(2.0 * r);
        const ComplexMatrix rotated = model::rotated_lab_hamiltonian(rates, det, l);
        const ComplexMatrix sq = model::build_hamiltonian_squeezed(rates, det, l);
        const double off = model::squeeze_frame_offset(r, det.delta_m, rates.Omega_p);
        const ComplexMatrix diff = rotated(keep, keep) - off * ComplexMatrix::Identity(k, k) - sq(keep, keep);
        worst = std::max(worst, diff.norm() / sq(keep, keep).norm());
    }
    return {"frame equivalence on low-occupancy block (N_b=" + std::to_string(nb) + ")", worst < kFrameRelLimit,
            "max rel err " + detail::sci(worst)};
}

inline ComplexVector ghz_state() {
    ComplexVector v = ComplexVector::Zero(8);
    v(0) = v(7) = 1.0 / std::sqrt(2.0);
    return v;
}

inline ComplexVector w_state() {
    ComplexVector v = ComplexVector::Zero(8);
    v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
    return v;
}

inline entanglement::ThreeQubitAmplitudes to_amplitudes(const ComplexVector& v) {
    entanglement::ThreeQubitAmplitudes a{};
    for (Eigen::Index i = 0; i < 8; ++i)
        a[static_cast<std::size_t>(i)] = v(i);
    return a;
}

inline std::vector<Check> check_standard_states() {
    const SpaceLayout qubits({2, 2, 2});
    const double ghz_c = entanglement::min_residual_contangle(projector(ghz_state()), qubits);
    const double ghz_t = entanglement::three_tangle_pure(to_amplitudes(ghz_state()));
    const double w_t = entanglement::three_tangle_pure(to_amplitudes(w_state()));
    return {
        {"GHZ minimum residual contangle = 1", std::abs(ghz_c - 1.0) <= kGhzContangleTol,
         "value " + format_double(ghz_c)},
        {"GHZ three-tangle = 1", std::abs(ghz_t - 1.0) <= kTangleTol, "value " + format_double(ghz_t)},
        {"W three-tangle = 0", std::abs(w_t) <= kTangleTol, "value " + format_double(w_t)},
    };
}

/// Trace, Hermiticity and positivity of every stored state of a
/// dissipative scenario run and a random-generator run.
inline Check check_stored_states(std::uint64_t seed) {
    std::vector<dynamics::Trajectory> runs;
    {
        auto spec = scenario_spec(model::population_inputs(3.0, 5.0), SpaceLayout::tripartite(8, 2),
                                  model::uniform_grid(2.0, 41), false);
        spec.store_states = true;
        runs.push_back(dynamics::evolve(spec));
    }
    {
        detail::Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        const SpaceLayout layout({2, 3, 2});
        dynamics::EvolutionSpec spec;
        spec.layout = layout;
        spec.hamiltonian = rng.hermitian(12);
        spec.collapse_ops = {0.5 * rng.matrix(12)};
        spec.initial_state = rng.density(12);
        spec.time_grid = model::uniform_grid(3.0, 31);
        spec.store_states = true;
        runs.push_back(dynamics::evolve(spec));
    }
    double trace = 0.0, herm = 0.0, neg = 0.0;
    std::size_t count = 0;
    for (const auto& tr : runs)
        for (const auto& rho : tr.states) {
            trace = std::max(trace, std::abs(rho.trace() - cplx(1.0)));
            herm = std::max(herm, hermiticity_defect(rho));
            neg = std::max(neg, -hermitian_eigenvalues(0.5 * (rho + rho.adjoint())).minCoeff());
            ++count;
        }
    const bool ok = trace < kStoredTraceTol && herm < kStoredHermitianTol && neg < kStoredPositivityTol;
    return {"stored-state physicality (" + std::to_string(count) + " states)", ok,
            "trace dev " + detail::sci(trace) + ", hermiticity " + detail::sci(herm) + ", min eig " +
                detail::sci(-neg)};
}

inline std::vector<Check> run_selftest(std::uint64_t seed) {
    std::vector<Check> out;
    out.push_back(check_liouvillian_oracle(seed));
    out.push_back(check_frame_equivalence());
    for (auto& c : check_standard_states())
        out.push_back(std::move(c));
    out.push_back(check_stored_states(seed));
    return out;
}

} // namespace tripartite::sweep
