#pragma once

// Lindblad master-equation evolution with occupation read-out and phonon
// cutoff convergence control.
//
// Vectorization convention: column stacking, vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ).
// evolve integrates vec(ρ) with a sparse superoperator.

#include "tripartite/core/hermitian_eigen.hpp"
#include "tripartite/core/matrix.hpp"
#include "tripartite/dynamics/dormand_prince.hpp"
#include "tripartite/model/hamiltonian.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tripartite::dynamics {

using SparseMatrix = Eigen::SparseMatrix<cplx>;
using RowSparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

class evolution_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_generator(const ComplexMatrix& h, const std::vector<ComplexMatrix>& ls,
                            Eigen::Index n) {
    if (h.rows() != n || h.cols() != n)
        throw dimension_error("hamiltonian dimension does not match the state");
    for (const auto& l : ls)
        if (l.rows() != n || l.cols() != n)
            throw dimension_error("collapse operator dimension does not match the state");
}

} // namespace detail

/// −i[H,ρ] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ}), dense reference form.
inline ComplexMatrix liouvillian_apply(const ComplexMatrix& h, const std::vector<ComplexMatrix>& ls,
                                       const ComplexMatrix& rho) {
    require_square(rho, "liouvillian_apply: rho");
    detail::check_generator(h, ls, rho.rows());
    const cplx i(0.0, 1.0);
    ComplexMatrix out = -i * (h * rho - rho * h);
    for (const auto& l : ls) {
        const ComplexMatrix ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

/// Matrix of the Liouvillian acting on column-stacked vec(ρ).
inline ComplexMatrix liouvillian_superoperator(const ComplexMatrix& h,
                                               const std::vector<ComplexMatrix>& ls) {
    require_square(h, "liouvillian_superoperator: H");
    detail::check_generator(h, ls, h.rows());
    const Eigen::Index n = h.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const cplx i(0.0, 1.0);
    ComplexMatrix sup = -i * (kron(id, h) - kron(h.transpose(), id));
    for (const auto& l : ls) {
        const ComplexMatrix ldl = l.adjoint() * l;
        sup += kron(l.conjugate(), l) - 0.5 * (kron(id, ldl) + kron(ldl.transpose(), id));
    }
    return sup;
}

inline ComplexVector vectorize(const ComplexMatrix& rho) {
    return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

inline ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index n) {
    if (v.size() != n * n)
        throw dimension_error("unvectorize: length is not n^2");
    return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

/// The generator compiled to sparse form: ρ̇ = −i(H_eff ρ − ρ H_eff†) + Σ L ρ L†
/// with H_eff = H − (i/2) Σ L†L.
class LindbladGenerator {
public:
    LindbladGenerator(const ComplexMatrix& h, const std::vector<ComplexMatrix>& ls) {
        require_square(h, "LindbladGenerator: H");
        detail::check_generator(h, ls, h.rows());
        ComplexMatrix heff = h;
        for (const auto& l : ls)
            heff -= cplx(0.0, 0.5) * (l.adjoint() * l);
        minus_i_heff_ = (cplx(0.0, -1.0) * heff).sparseView();
        minus_i_heff_adj_ = ComplexMatrix(minus_i_heff_.adjoint()).sparseView();
        minus_i_h_ = (cplx(0.0, -1.0) * h).sparseView();
        for (const auto& l : ls) {
            jumps_.push_back(l.sparseView());
            jumps_adj_.push_back(ComplexMatrix(l.adjoint()).sparseView());
        }
        dim_ = h.rows();
        build_superoperator();
    }

    Eigen::Index dim() const noexcept { return dim_; }
    bool has_dissipation() const noexcept { return !jumps_.empty(); }

    ComplexMatrix apply(const ComplexMatrix& rho) const {
        ComplexMatrix out = minus_i_heff_ * rho;
        out += rho * minus_i_heff_adj_;
        for (std::size_t k = 0; k < jumps_.size(); ++k) {
            const ComplexMatrix lr = jumps_[k] * rho;
            out += lr * jumps_adj_[k];
        }
        return out;
    }

    /// The same generator acting on vec(ρ).
    ComplexVector apply_vec(const ComplexVector& v) const { return super_ * v; }

    const RowSparseMatrix& superoperator() const noexcept { return super_; }

    /// ψ̇ = −iHψ (coherent part only).
    ComplexVector apply_pure(const ComplexVector& psi) const { return minus_i_h_ * psi; }

private:
    // (I ⊗ A) + (conj(A) ⊗ I) + Σ conj(L) ⊗ L with A = −iH_eff.
    void build_superoperator() {
        const Eigen::Index n = dim_;
        std::vector<Eigen::Triplet<cplx>> t;
        t.reserve(static_cast<std::size_t>(2 * n * minus_i_heff_.nonZeros()));
        for (Eigen::Index k = 0; k < minus_i_heff_.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(minus_i_heff_, k); it; ++it)
                for (Eigen::Index c = 0; c < n; ++c) {
                    t.emplace_back(c * n + it.row(), c * n + it.col(), it.value());
                    t.emplace_back(it.row() * n + c, it.col() * n + c, std::conj(it.value()));
                }
        for (const auto& l : jumps_)
            for (Eigen::Index a = 0; a < l.outerSize(); ++a)
                for (SparseMatrix::InnerIterator outer(l, a); outer; ++outer)
                    for (Eigen::Index b = 0; b < l.outerSize(); ++b)
                        for (SparseMatrix::InnerIterator inner(l, b); inner; ++inner)
                            t.emplace_back(outer.row() * n + inner.row(), outer.col() * n + inner.col(),
                                           std::conj(outer.value()) * inner.value());
        super_.resize(n * n, n * n);
        super_.setFromTriplets(t.begin(), t.end());
        super_.prune(cplx(0.0));
    }

    SparseMatrix minus_i_heff_, minus_i_heff_adj_;
    RowSparseMatrix minus_i_h_;
    std::vector<SparseMatrix> jumps_, jumps_adj_;
    RowSparseMatrix super_;
    Eigen::Index dim_ = 0;
};

struct Expectation {
    double value = 0.0;
    double imag_residue = 0.0;
};

inline Expectation expectation_detail(const ComplexMatrix& rho, const ComplexMatrix& op) {
    require_square(rho, "expectation: rho");
    if (op.rows() != rho.rows() || op.cols() != rho.cols())
        throw dimension_error("expectation: operator and state dimensions differ");
    const cplx v = rho.cwiseProduct(op.transpose()).sum();
    return {v.real(), std::abs(v.imag())};
}

/// Re tr(ρ·op) for Hermitian op.
inline double expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
    if (!is_hermitian(op, 1e-10))
        throw std::invalid_argument("expectation: operator is not Hermitian");
    return expectation_detail(rho, op).value;
}

inline Expectation expectation_detail(const ComplexVector& psi, const ComplexMatrix& op) {
    if (op.rows() != psi.size() || op.cols() != psi.size())
        throw dimension_error("expectation: operator and state dimensions differ");
    const cplx v = psi.dot(op * psi);
    return {v.real(), std::abs(v.imag())};
}

using InitialState = std::variant<ComplexMatrix, ComplexVector>;

struct EvolutionSpec {
    ComplexMatrix hamiltonian;
    std::vector<ComplexMatrix> collapse_ops;
    InitialState initial_state = ComplexMatrix{};
    std::vector<double> time_grid;
    Tolerances tolerances;
    bool store_states = false;
    SpaceLayout layout = SpaceLayout::tripartite(4, 2);
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> spin, magnon, phonon;
    std::vector<ComplexMatrix> states;       // mixed-state runs with store_states
    std::vector<ComplexVector> pure_states;  // pure-state runs with store_states
    IntegrationStats stats;
    double max_trace_drift = 0.0;
    double max_imag_residue = 0.0;
    std::size_t phonon_cutoff = 0;
    std::size_t magnon_cutoff = 0;
    bool converged = true;
    double cutoff_difference = 0.0;  // last observable difference seen by converged_evolve

    std::size_t stored() const noexcept { return states.size() + pure_states.size(); }

    ComplexMatrix density(std::size_t i) const {
        if (!pure_states.empty())
            return projector(pure_states.at(i));
        return states.at(i);
    }

    /// Bound on the accumulated integration error of an occupation whose
    /// operator norm is at most op_norm.
    double error_estimate(double op_norm) const { return op_norm * stats.local_error_sum; }

    /// Largest absolute difference of the three occupations between two runs
    /// on the same grid.
    static double max_difference(const Trajectory& x, const Trajectory& y) {
        if (x.times.size() != y.times.size())
            throw std::invalid_argument("max_difference: trajectories have different grids");
        double d = 0.0;
        for (std::size_t i = 0; i < x.times.size(); ++i) {
            d = std::max(d, std::abs(x.spin[i] - y.spin[i]));
            d = std::max(d, std::abs(x.magnon[i] - y.magnon[i]));
            d = std::max(d, std::abs(x.phonon[i] - y.phonon[i]));
        }
        return d;
    }
};

inline constexpr double kInitialTraceTol = 1e-12;
inline constexpr double kInitialPsdTol = 1e-12;
inline constexpr double kTraceDriftAbort = 1e-6;

namespace detail {

inline void validate_spec(const EvolutionSpec& spec) {
    const auto& g = spec.time_grid;
    if (g.empty() || g.front() != 0.0)
        throw std::invalid_argument("time grid must start at 0");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (!(g[i] > g[i - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
    const auto n = static_cast<Eigen::Index>(spec.layout.total());
    if (spec.hamiltonian.rows() != n || spec.hamiltonian.cols() != n)
        throw dimension_error("hamiltonian does not match the layout");
    if (!is_hermitian(spec.hamiltonian, 1e-12))
        throw std::invalid_argument("hamiltonian is not Hermitian");
    check_generator(spec.hamiltonian, spec.collapse_ops, n);

    if (const auto* rho = std::get_if<ComplexMatrix>(&spec.initial_state)) {
        if (rho->rows() != n || rho->cols() != n)
            throw dimension_error("initial density matrix does not match the layout");
        if (!is_hermitian(*rho, 1e-12))
            throw std::invalid_argument("initial density matrix is not Hermitian");
        if (std::abs(rho->trace() - cplx(1.0)) >= kInitialTraceTol)
            throw std::invalid_argument("initial density matrix does not have unit trace");
        if (hermitian_eigenvalues(*rho).minCoeff() < -kInitialPsdTol)
            throw std::invalid_argument("initial density matrix is not positive semidefinite");
    } else {
        const auto& psi = std::get<ComplexVector>(spec.initial_state);
        if (psi.size() != n)
            throw dimension_error("initial state vector does not match the layout");
        if (std::abs(psi.squaredNorm() - 1.0) >= kInitialTraceTol)
            throw std::invalid_argument("initial state vector is not normalized");
    }
}

struct Observables {
    ComplexMatrix spin, magnon, phonon;
};

inline std::optional<Observables> occupation_operators(const SpaceLayout& layout) {
    if (layout.size() != 3 || layout.dim(0) != 2)
        return std::nullopt;
    const model::Occupations occ(layout);
    return Observables{occ.spin, occ.magnon, occ.phonon};
}

inline std::string drift_message(double t, double drift) {
    std::ostringstream os;
    os << "trace drift " << drift << " exceeds " << kTraceDriftAbort << " at t = " << t;
    return os.str();
}

} // namespace detail

/// Integrate the master equation over spec.time_grid. A pure initial state
/// with no collapse operators is propagated as a state vector and reported
/// normalized.
inline Trajectory evolve(const EvolutionSpec& spec) {
    detail::validate_spec(spec);
    const LindbladGenerator gen(spec.hamiltonian, spec.collapse_ops);
    const auto obs = detail::occupation_operators(spec.layout);

    Trajectory tr;
    const std::size_t n_t = spec.time_grid.size();
    tr.times = spec.time_grid;
    tr.spin.resize(n_t);
    tr.magnon.resize(n_t);
    tr.phonon.resize(n_t);
    if (spec.layout.size() == 3) {
        tr.phonon_cutoff = spec.layout.dim(slot(Subsystem::phonon));
        tr.magnon_cutoff = spec.layout.dim(slot(Subsystem::magnon));
    }

    auto record = [&](std::size_t i, const auto& state, double norm) {
        const double drift = std::abs(norm - 1.0);
        tr.max_trace_drift = std::max(tr.max_trace_drift, drift);
        if (drift > kTraceDriftAbort)
            throw evolution_error(detail::drift_message(spec.time_grid[i], drift));
        if (obs) {
            const auto s = expectation_detail(state, obs->spin);
            const auto a = expectation_detail(state, obs->magnon);
            const auto b = expectation_detail(state, obs->phonon);
            tr.spin[i] = s.value;
            tr.magnon[i] = a.value;
            tr.phonon[i] = b.value;
            tr.max_imag_residue =
                std::max({tr.max_imag_residue, s.imag_residue, a.imag_residue, b.imag_residue});
        }
    };

    const auto* psi0 = std::get_if<ComplexVector>(&spec.initial_state);
    if (psi0 && !gen.has_dissipation()) {
        if (spec.store_states)
            tr.pure_states.resize(n_t);
        tr.stats = integrate<ComplexVector>(
            [&](double, const ComplexVector& y) { return gen.apply_pure(y); }, *psi0,
            spec.time_grid, spec.tolerances, [&](std::size_t i, double, const ComplexVector& y) {
                // The ray is what is physical; the norm drift is still checked.
                const double n2 = y.squaredNorm();
                const ComplexVector unit = y / std::sqrt(n2);
                record(i, unit, n2);
                if (spec.store_states)
                    tr.pure_states[i] = unit;
            });
        return tr;
    }

    const ComplexMatrix rho0 = psi0 ? ComplexMatrix(projector(*psi0))
                                    : std::get<ComplexMatrix>(spec.initial_state);
    if (spec.store_states)
        tr.states.resize(n_t);
    const auto n = static_cast<Eigen::Index>(spec.layout.total());
    tr.stats = integrate<ComplexVector>(
        [&](double, const ComplexVector& v) { return gen.apply_vec(v); }, vectorize(rho0), spec.time_grid,
        spec.tolerances, [&](std::size_t i, double, const ComplexVector& v) {
            const ComplexMatrix y = unvectorize(v, n);
            record(i, y, y.trace().real());
            if (spec.store_states)
                tr.states[i] = y;
        });
    return tr;
}

struct CutoffPolicy {
    std::size_t phonon = 4;
    std::size_t magnon = 2;
    std::size_t growth = 2;
    int max_doublings = 4;
    double tolerance = 1e-3;
};

/// Builds the evolution problem on a given (spin, phonon, magnon) layout.
using SpecBuilder = std::function<EvolutionSpec(const SpaceLayout&)>;

/// Grow the phonon cutoff until the occupations change by less than
/// policy.tolerance. The finer of the last two runs is returned; if the
/// doubling budget runs out, converged is false.
inline Trajectory converged_evolve(const SpecBuilder& build, const CutoffPolicy& policy) {
    if (policy.phonon < 2 || policy.magnon < 2 || policy.growth < 2)
        throw std::invalid_argument("cutoff policy: cutoffs and growth must be at least 2");
    std::size_t nb = policy.phonon;
    Trajectory coarse = evolve(build(SpaceLayout::tripartite(nb, policy.magnon)));
    for (int k = 0; k < policy.max_doublings; ++k) {
        nb *= policy.growth;
        Trajectory fine = evolve(build(SpaceLayout::tripartite(nb, policy.magnon)));
        fine.cutoff_difference = Trajectory::max_difference(coarse, fine);
        fine.converged = fine.cutoff_difference < policy.tolerance;
        if (fine.converged)
            return fine;
        coarse = std::move(fine);
    }
    coarse.converged = false;
    return coarse;
}

} // namespace tripartite::dynamics
