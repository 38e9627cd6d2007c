#pragma once

// Logarithmic negativity, contangles and the pure-state three-tangle for a
// three-party layout. Logarithms are base 2.

#include "tripartite/core/hermitian_eigen.hpp"
#include "tripartite/core/matrix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripartite::entanglement {

class entanglement_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kTraceNormUnitTol = 1e-12;
inline constexpr double kResidualClamp = 1e-9;
inline constexpr double kLeakedWeightLimit = 0.05;

/// Focus subsystem A and its ordered complement (B, C), as layout slots.
struct PartitionLabel {
    std::size_t focus = 0;
    std::size_t first = 1;
    std::size_t second = 2;

    static PartitionLabel focus_on(std::size_t a) {
        if (a > 2)
            throw dimension_error("PartitionLabel: focus slot out of range");
        return PartitionLabel{a, (a + 1) % 3, (a + 2) % 3};
    }

    void validate() const {
        std::array<std::size_t, 3> s{focus, first, second};
        std::sort(s.begin(), s.end());
        if (s != std::array<std::size_t, 3>{0, 1, 2})
            throw dimension_error("PartitionLabel: labels must be a permutation of the three subsystems");
    }
};

/// log₂ ||ρ^{T_part}||₁, zero when the trace norm is 1 within 1e-12.
inline double log_negativity(const ComplexMatrix& rho, const SpaceLayout& layout,
                             const std::vector<std::size_t>& part) {
    ComplexMatrix pt = partial_transpose(rho, layout, part);
    pt = 0.5 * (pt + pt.adjoint());
    const double tn = hermitian_eigenvalues(pt).cwiseAbs().sum();
    if (std::abs(tn - 1.0) < kTraceNormUnitTol)
        return 0.0;
    return std::log2(tn);
}

/// Squared log-negativity of `focus` against the rest of the kept subsystems
/// after tracing out everything not in `keep`.
inline double contangle(const ComplexMatrix& rho, const SpaceLayout& layout,
                        std::vector<std::size_t> keep, std::size_t focus) {
    std::sort(keep.begin(), keep.end());
    const auto pos = std::find(keep.begin(), keep.end(), focus);
    if (pos == keep.end())
        throw dimension_error("contangle: focus subsystem is not kept");
    const ComplexMatrix reduced = partial_trace(rho, layout, keep);
    const SpaceLayout sub = layout.restrict_to(keep);
    const double en = log_negativity(reduced, sub, {static_cast<std::size_t>(pos - keep.begin())});
    return en * en;
}

struct ResidualTerms {
    double a_bc = 0.0;
    double a_b = 0.0;
    double a_c = 0.0;
    double residual() const { return a_bc - a_b - a_c; }
};

inline ResidualTerms residual_terms(const ComplexMatrix& rho, const SpaceLayout& layout,
                                   const PartitionLabel& p) {
    if (layout.size() != 3)
        throw dimension_error("residual contangle needs a three-party layout");
    p.validate();
    ResidualTerms t;
    const double en = log_negativity(rho, layout, {p.focus});
    t.a_bc = en * en;
    t.a_b = contangle(rho, layout, {p.focus, p.first}, p.focus);
    t.a_c = contangle(rho, layout, {p.focus, p.second}, p.focus);
    return t;
}

/// E^{A|BC} − E^{A|B} − E^{A|C} with E the squared log-negativity.
inline double residual_contangle(const ComplexMatrix& rho, const SpaceLayout& layout,
                                 const PartitionLabel& p) {
    return residual_terms(rho, layout, p).residual();
}

struct MinimumResidual {
    double value = 0.0;       // clamped minimum
    double raw = 0.0;         // unclamped minimum
    std::size_t focus = 0;    // slot attaining the minimum
};

inline MinimumResidual min_residual_contangle_detail(const ComplexMatrix& rho,
                                                     const SpaceLayout& layout) {
    MinimumResidual m;
    for (std::size_t a = 0; a < 3; ++a) {
        const double v = residual_contangle(rho, layout, PartitionLabel::focus_on(a));
        if (a == 0 || v < m.raw) {
            m.raw = v;
            m.focus = a;
        }
    }
    if (m.raw < -kResidualClamp)
        throw entanglement_error("residual contangle " + std::to_string(m.raw) +
                                 " is negative beyond tolerance");
    m.value = std::max(0.0, m.raw);
    return m;
}

inline double min_residual_contangle(const ComplexMatrix& rho, const SpaceLayout& layout) {
    return min_residual_contangle_detail(rho, layout).value;
}

/// a[4i + 2j + k] = amplitude of |i j k>.
using ThreeQubitAmplitudes = std::array<cplx, 8>;

struct ThreeQubitProjection {
    ThreeQubitAmplitudes amplitudes{};
    double leaked_weight = 1.0;
    bool reliable() const { return leaked_weight <= kLeakedWeightLimit; }
};

/// Restrict a pure state to levels {0, 1} of every subsystem and renormalize.
inline ThreeQubitProjection project_to_three_qubits(const ComplexVector& psi,
                                                    const SpaceLayout& layout) {
    if (layout.size() != 3)
        throw dimension_error("project_to_three_qubits: needs a three-party layout");
    if (static_cast<std::size_t>(psi.size()) != layout.total())
        throw dimension_error("project_to_three_qubits: state does not match the layout");
    ThreeQubitProjection out;
    double kept = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                const cplx v = psi(static_cast<Eigen::Index>(layout.index({i, j, k})));
                out.amplitudes[4 * i + 2 * j + k] = v;
                kept += std::norm(v);
            }
    const double total = psi.squaredNorm();
    out.leaked_weight = std::clamp(1.0 - kept / total, 0.0, 1.0);
    if (kept > 0.0)
        for (auto& a : out.amplitudes)
            a /= std::sqrt(kept);
    return out;
}

/// 4 |Cayley hyperdeterminant| of a normalized three-qubit pure state.
inline double three_tangle_pure(const ThreeQubitAmplitudes& a) {
    double norm = 0.0;
    for (const auto& x : a)
        norm += std::norm(x);
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("three_tangle_pure: amplitudes are not normalized");
    auto A = [&](int i, int j, int k) { return a[4 * i + 2 * j + k]; };
    const cplx d1 = A(0, 0, 0) * A(0, 0, 0) * A(1, 1, 1) * A(1, 1, 1) +
                    A(0, 0, 1) * A(0, 0, 1) * A(1, 1, 0) * A(1, 1, 0) +
                    A(0, 1, 0) * A(0, 1, 0) * A(1, 0, 1) * A(1, 0, 1) +
                    A(1, 0, 0) * A(1, 0, 0) * A(0, 1, 1) * A(0, 1, 1);
    const cplx d2 = A(0, 0, 0) * A(1, 1, 1) * A(0, 1, 1) * A(1, 0, 0) +
                    A(0, 0, 0) * A(1, 1, 1) * A(1, 0, 1) * A(0, 1, 0) +
                    A(0, 0, 0) * A(1, 1, 1) * A(1, 1, 0) * A(0, 0, 1) +
                    A(0, 1, 1) * A(1, 0, 0) * A(1, 0, 1) * A(0, 1, 0) +
                    A(0, 1, 1) * A(1, 0, 0) * A(1, 1, 0) * A(0, 0, 1) +
                    A(1, 0, 1) * A(0, 1, 0) * A(1, 1, 0) * A(0, 0, 1);
    const cplx d3 = A(0, 0, 0) * A(1, 1, 0) * A(1, 0, 1) * A(0, 1, 1) +
                    A(1, 1, 1) * A(0, 0, 1) * A(0, 1, 0) * A(1, 0, 0);
    return std::min(1.0, 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3));
}

} // namespace tripartite::entanglement
