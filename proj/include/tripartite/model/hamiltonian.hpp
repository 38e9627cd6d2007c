#pragma once

// Lab-frame and squeezed-frame Hamiltonians of the driven tripartite system
// on the (spin, phonon, magnon) layout, the squeeze unitary relating them,
// and the Lindblad collapse operators.

#include "tripartite/core/matrix.hpp"
#include "tripartite/core/matrix_exp.hpp"
#include "tripartite/model/params.hpp"

#include <cmath>
#include <vector>

namespace tripartite::model {

enum class Frame { lab, squeezed };

namespace detail {

inline void require_tripartite(const SpaceLayout& layout) {
    if (layout.size() != 3 || layout.dim(slot(Subsystem::spin)) != 2)
        throw dimension_error("expected a (spin, phonon, magnon) layout with a two-level spin");
}

struct LayoutOps {
    ComplexMatrix a, b, sigma_minus, sigma_z;

    explicit LayoutOps(const SpaceLayout& layout) {
        require_tripartite(layout);
        a = embed(annihilation(layout.dim(slot(Subsystem::magnon))), Subsystem::magnon, layout);
        b = embed(annihilation(layout.dim(slot(Subsystem::phonon))), Subsystem::phonon, layout);
        sigma_minus = embed(pauli::lowering(), Subsystem::spin, layout);
        sigma_z = embed(pauli::z(), Subsystem::spin, layout);
    }

    /// a† σ⁻ + a σ⁺
    ComplexMatrix exchange() const {
        return a.adjoint() * sigma_minus + a * sigma_minus.adjoint();
    }
};

inline ComplexMatrix symmetrize(const ComplexMatrix& h) { return 0.5 * (h + h.adjoint()); }

} // namespace detail

/// H = δ_K a†a + δ_m b†b + (δ_NV/2)σ_z − (Ω_p/2)(b†² + b²)
///     + λ(b + b†)(a†σ⁻ + aσ⁺) + g₀(a†σ⁻ + aσ⁺)
inline ComplexMatrix build_hamiltonian_lab(const ModelRates& rates, const Detunings& det,
                                           const SpaceLayout& layout) {
    const detail::LayoutOps ops(layout);
    const ComplexMatrix bd = ops.b.adjoint();
    const ComplexMatrix j = ops.exchange();
    ComplexMatrix h = det.delta_K * (ops.a.adjoint() * ops.a) + det.delta_m * (bd * ops.b) +
                      0.5 * det.delta_NV * ops.sigma_z -
                      0.5 * rates.Omega_p * (bd * bd + ops.b * ops.b) +
                      rates.lambda * ((ops.b + bd) * j) + rates.g0 * j;
    return detail::symmetrize(h);
}

/// H = δ_K a†a + Δ_m b†b + (δ_NV/2)σ_z + λ_eff(b + b†)(a†σ⁻ + aσ⁺) + g₀(a†σ⁻ + aσ⁺)
inline ComplexMatrix build_hamiltonian_squeezed(const ModelRates& rates, const Detunings& det,
                                                const SpaceLayout& layout) {
    const detail::LayoutOps ops(layout);
    const ComplexMatrix bd = ops.b.adjoint();
    const ComplexMatrix j = ops.exchange();
    ComplexMatrix h = det.delta_K * (ops.a.adjoint() * ops.a) + det.Delta_m * (bd * ops.b) +
                      0.5 * det.delta_NV * ops.sigma_z + rates.lambda_eff * ((ops.b + bd) * j) +
                      rates.g0 * j;
    return detail::symmetrize(h);
}

/// exp[r(b² − b†²)/2] on the phonon factor, identity elsewhere.
inline ComplexMatrix squeeze_unitary(double r, const SpaceLayout& layout) {
    detail::require_tripartite(layout);
    const std::size_t nb = layout.dim(slot(Subsystem::phonon));
    const ComplexMatrix b = annihilation(nb);
    const ComplexMatrix bd = b.adjoint();
    const ComplexMatrix gen = 0.5 * r * (b * b - bd * bd);
    return embed(matrix_exp(gen), Subsystem::phonon, layout);
}

/// c-number left over by U_S H_lab U_S†: δ_m sinh²r − (Ω_p/2) sinh 2r.
inline double squeeze_frame_offset(double r, double delta_m, double Omega_p) {
    return delta_m * std::sinh(r) * std::sinh(r) - 0.5 * Omega_p * std::sinh(2.0 * r);
}

/// U_S(r) H_lab U_S(r)† with the phonon factors rotated in a space of
/// `padded_phonons` levels and cut back to the layout, so the low-occupancy
/// block is free of truncation-edge error. Zero padding picks
/// N_b(1 + ⌈e^{2|r|}⌉).
inline ComplexMatrix rotated_lab_hamiltonian(const ModelRates& rates, const Detunings& det,
                                             const SpaceLayout& layout, std::size_t padded_phonons = 0) {
    const detail::LayoutOps ops(layout);
    const std::size_t nb = layout.dim(slot(Subsystem::phonon));
    if (padded_phonons == 0)
        padded_phonons = nb * (1 + static_cast<std::size_t>(std::ceil(std::exp(2.0 * std::abs(rates.r)))));
    if (padded_phonons < nb)
        throw dimension_error("rotated_lab_hamiltonian: padding below the phonon cutoff");
    const ComplexMatrix b = annihilation(padded_phonons);
    const ComplexMatrix bd = b.adjoint();
    const ComplexMatrix u = matrix_exp(0.5 * rates.r * (b * b - bd * bd));
    const ComplexMatrix mech = det.delta_m * (bd * b) - 0.5 * rates.Omega_p * (bd * bd + b * b);
    const Eigen::Index n = static_cast<Eigen::Index>(nb);
    const ComplexMatrix mech_rot = (u * mech * u.adjoint()).topLeftCorner(n, n);
    const ComplexMatrix x_rot = (u * (b + bd) * u.adjoint()).topLeftCorner(n, n);
    const ComplexMatrix j = ops.exchange();
    ComplexMatrix h = det.delta_K * (ops.a.adjoint() * ops.a) + 0.5 * det.delta_NV * ops.sigma_z +
                      embed(mech_rot, Subsystem::phonon, layout) +
                      rates.lambda * (embed(x_rot, Subsystem::phonon, layout) * j) + rates.g0 * j;
    return detail::symmetrize(h);
}

/// Collapse operators √γ_K a, √(γ_s/2) σ_z and √Γ_m b (squeezed frame) or
/// √γ_th b (lab frame). Channels with zero rate are omitted.
inline std::vector<ComplexMatrix> collapse_operators(const ModelRates& rates, Frame frame,
                                                     const SpaceLayout& layout) {
    const double mech = frame == Frame::squeezed ? rates.Gamma_m : rates.gamma_th;
    if (rates.gamma_K < 0.0 || rates.gamma_s < 0.0 || mech < 0.0)
        throw parameter_error("collapse_operators: negative decay rate");
    const detail::LayoutOps ops(layout);
    std::vector<ComplexMatrix> out;
    if (rates.gamma_K > 0.0)
        out.push_back(std::sqrt(rates.gamma_K) * ops.a);
    if (rates.gamma_s > 0.0)
        out.push_back(std::sqrt(rates.gamma_s / 2.0) * ops.sigma_z);
    if (mech > 0.0)
        out.push_back(std::sqrt(mech) * ops.b);
    return out;
}

/// σ⁺σ⁻, a†a and b†b on the full space.
struct Occupations {
    ComplexMatrix spin, magnon, phonon;

    explicit Occupations(const SpaceLayout& layout) {
        const detail::LayoutOps ops(layout);
        spin = ops.sigma_minus.adjoint() * ops.sigma_minus;
        magnon = ops.a.adjoint() * ops.a;
        phonon = ops.b.adjoint() * ops.b;
    }
};

/// |e, m, k> as a state vector.
inline ComplexVector fock_state(const SpaceLayout& layout, bool excited, std::size_t phonons,
                                std::size_t magnons) {
    detail::require_tripartite(layout);
    return basis_state(layout.index({excited ? 0u : 1u, phonons, magnons}), layout.total());
}

} // namespace tripartite::model
