#include "support/generators.hpp"
#include "tripartite/entanglement/measures.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace tripartite;
using namespace tripartite::entanglement;

namespace {

const SpaceLayout qubits({2, 2, 2});

ComplexVector ghz() {
    ComplexVector v = ComplexVector::Zero(8);
    v(0) = v(7) = 1.0 / std::sqrt(2.0);
    return v;
}

ComplexVector w_state() {
    ComplexVector v = ComplexVector::Zero(8);
    v(4) = v(2) = v(1) = 1.0 / std::sqrt(3.0);
    return v;
}

ThreeQubitAmplitudes amplitudes(const ComplexVector& v) {
    ThreeQubitAmplitudes a{};
    for (int i = 0; i < 8; ++i)
        a[i] = v(i);
    return a;
}

// Oracle: log₂ of the trace norm with Eigen's eigensolver on an explicitly
// built partial transpose (index swap written out for a two-party split).
double oracle_log_negativity_first(const ComplexMatrix& rho, Eigen::Index da, Eigen::Index db) {
    ComplexMatrix pt(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            for (Eigen::Index k = 0; k < db; ++k)
                for (Eigen::Index l = 0; l < db; ++l)
                    pt(i * db + k, j * db + l) = rho(j * db + k, i * db + l);
    return std::log2(testgen::oracle_trace_norm(pt));
}

// Wootters concurrence of a two-qubit state of rank at most two, as left by
// tracing one qubit out of a pure state. ρρ̃ then has two exact zero
// eigenvalues whose square roots would only add rounding noise.
double concurrence(const ComplexMatrix& rho) {
    const ComplexMatrix yy = kron(pauli::y(), pauli::y());
    const ComplexMatrix tilde = yy * rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(rho * tilde);
    std::vector<double> l;
    for (Eigen::Index i = 0; i < 4; ++i)
        l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
    std::sort(l.rbegin(), l.rend());
    return std::max(0.0, l[0] - l[1]);
}

// Three-tangle via the monogamy route C²_{A(BC)} − C²_{AB} − C²_{AC}.
double ckw_three_tangle(const ComplexVector& psi) {
    const ComplexMatrix rho = projector(psi);
    const ComplexMatrix ra = partial_trace(rho, qubits, {0});
    const double c_a_bc = 4.0 * std::abs(ra.determinant());
    const double cab = concurrence(partial_trace(rho, qubits, {0, 1}));
    const double cac = concurrence(partial_trace(rho, qubits, {0, 2}));
    return c_a_bc - cab * cab - cac * cac;
}

} // namespace

TEST(LogNegativity, BellPair) {
    ComplexVector v = ComplexVector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix rho = projector(v);
    const SpaceLayout l({2, 2});
    EXPECT_NEAR(log_negativity(rho, l, {0}), 1.0, 1e-12);
    EXPECT_NEAR(oracle_log_negativity_first(rho, 2, 2), 1.0, 1e-12);
}

TEST(LogNegativity, GhzSplit) {
    const ComplexMatrix rho = projector(ghz());
    for (std::size_t a = 0; a < 3; ++a)
        EXPECT_NEAR(log_negativity(rho, qubits, {a}), 1.0, 1e-12);
    EXPECT_NEAR(oracle_log_negativity_first(rho, 2, 4), 1.0, 1e-12);
}

TEST(LogNegativity, ProductStatesVanish) {
    testgen::Gen g(71);
    for (int trial = 0; trial < 20; ++trial) {
        const SpaceLayout l({2, 3, 2});
        const ComplexMatrix rho = kron(kron(g.density(2), g.density(3)), g.density(2));
        for (std::size_t a = 0; a < 3; ++a)
            EXPECT_NEAR(log_negativity(rho, l, {a}), 0.0, 1e-10);
    }
}

TEST(LogNegativity, MatchesOracleOnRandomStates) {
    testgen::Gen g(72);
    for (int trial = 0; trial < 20; ++trial) {
        const auto da = static_cast<Eigen::Index>(g.index(2, 3));
        const auto db = static_cast<Eigen::Index>(g.index(2, 4));
        const ComplexMatrix rho = g.density(da * db, static_cast<Eigen::Index>(g.index(1, 2)));
        const SpaceLayout l({static_cast<std::size_t>(da), static_cast<std::size_t>(db)});
        EXPECT_NEAR(log_negativity(rho, l, {0}), std::max(0.0, oracle_log_negativity_first(rho, da, db)), 1e-10);
    }
}

TEST(LogNegativity, LocalUnitaryInvariance) {
    testgen::Gen g(73);
    const SpaceLayout l({2, 3, 2});
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix rho = g.density(12, 2);
        const ComplexMatrix u = kron(kron(g.unitary(2), g.unitary(3)), g.unitary(2));
        const ComplexMatrix rotated = u * rho * u.adjoint();
        for (std::size_t a = 0; a < 3; ++a)
            EXPECT_NEAR(log_negativity(rho, l, {a}), log_negativity(rotated, l, {a}), 1e-9);
    }
}

TEST(LogNegativity, InvalidPartition) {
    const ComplexMatrix rho = projector(ghz());
    EXPECT_THROW(log_negativity(rho, qubits, {3}), dimension_error);
    EXPECT_THROW(log_negativity(rho, qubits, {}), dimension_error);
}

TEST(ResidualContangle, Ghz) {
    const ComplexMatrix rho = projector(ghz());
    for (std::size_t a = 0; a < 3; ++a) {
        const auto t = residual_terms(rho, qubits, PartitionLabel::focus_on(a));
        EXPECT_NEAR(t.a_bc, 1.0, 1e-12);
        EXPECT_NEAR(t.a_b, 0.0, 1e-12);
        EXPECT_NEAR(t.a_c, 0.0, 1e-12);
    }
    EXPECT_NEAR(min_residual_contangle(rho, qubits), 1.0, 1e-6);
}

TEST(ResidualContangle, ProductStatesVanish) {
    testgen::Gen g(74);
    const SpaceLayout l({2, 4, 2});
    const ComplexMatrix rho = kron(kron(projector(g.state(2)), projector(g.state(4))), projector(g.state(2)));
    for (std::size_t a = 0; a < 3; ++a)
        EXPECT_NEAR(residual_contangle(rho, l, PartitionLabel::focus_on(a)), 0.0, 1e-10);
    EXPECT_EQ(min_residual_contangle(projector(basis_state(0, 16)), l), 0.0);
}

TEST(ResidualContangle, WStateFixture) {
    // Oracle values from Eigen's solver on the explicit 8×8 and 4×4 transposes.
    const ComplexMatrix rho = projector(w_state());
    const double e_a_bc = std::pow(oracle_log_negativity_first(rho, 2, 4), 2);
    const ComplexMatrix rab = partial_trace(rho, qubits, {0, 1});
    const double e_a_b = std::pow(std::max(0.0, oracle_log_negativity_first(rab, 2, 2)), 2);
    const auto t = residual_terms(rho, qubits, PartitionLabel::focus_on(0));
    EXPECT_GT(t.a_bc, 0.0);
    EXPECT_NEAR(t.a_bc, e_a_bc, 1e-10);
    EXPECT_NEAR(t.a_b, e_a_b, 1e-10);
    EXPECT_NEAR(t.a_c, e_a_b, 1e-10);  // symmetric in B and C
    EXPECT_NEAR(t.residual(), e_a_bc - 2.0 * e_a_b, 1e-10);
    EXPECT_GT(t.residual(), 0.0);
    // Regression value for the W state.
    EXPECT_NEAR(t.residual(), 0.42250364057719203, 1e-9);
}

TEST(ResidualContangle, MinimumIsBelowEveryPartition) {
    testgen::Gen g(75);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix rho = projector(g.state(8));
        const double m = min_residual_contangle(rho, qubits);
        for (std::size_t a = 0; a < 3; ++a) {
            for (bool swap : {false, true}) {
                PartitionLabel p = PartitionLabel::focus_on(a);
                if (swap)
                    std::swap(p.first, p.second);
                EXPECT_LE(m, std::max(0.0, residual_contangle(rho, qubits, p)) + 1e-12);
            }
        }
    }
}

TEST(ResidualContangle, MonogamyOnRandomPureQubitStates) {
    testgen::Gen g(76);
    for (int trial = 0; trial < 200; ++trial) {
        const ComplexMatrix rho = projector(g.state(8));
        for (std::size_t a = 0; a < 3; ++a)
            EXPECT_GE(residual_contangle(rho, qubits, PartitionLabel::focus_on(a)), -1e-6);
    }
}

TEST(PartitionLabel, Validation) {
    EXPECT_NO_THROW((PartitionLabel{2, 0, 1}.validate()));
    EXPECT_THROW((PartitionLabel{0, 0, 1}.validate()), dimension_error);
    EXPECT_THROW((PartitionLabel{0, 1, 3}.validate()), dimension_error);
    EXPECT_THROW(PartitionLabel::focus_on(3), dimension_error);
    const ComplexMatrix rho = projector(ghz());
    EXPECT_THROW(residual_contangle(rho, qubits, PartitionLabel{1, 1, 2}), dimension_error);
    EXPECT_THROW(residual_contangle(ComplexMatrix::Identity(4, 4) / 4.0, SpaceLayout({2, 2}), PartitionLabel{}),
                 dimension_error);
}

TEST(ThreeTangle, StandardStates) {
    EXPECT_NEAR(three_tangle_pure(amplitudes(ghz())), 1.0, 1e-9);
    EXPECT_NEAR(three_tangle_pure(amplitudes(w_state())), 0.0, 1e-9);
    testgen::Gen g(77);
    const ComplexVector a = g.state(2), b = g.state(2), c = g.state(2);
    ComplexVector prod(8);
    for (int i = 0; i < 8; ++i)
        prod(i) = a(i >> 2) * b((i >> 1) & 1) * c(i & 1);
    EXPECT_NEAR(three_tangle_pure(amplitudes(prod)), 0.0, 1e-12);
}

TEST(ThreeTangle, MatchesMonogamyOracle) {
    testgen::Gen g(78);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexVector psi = g.state(8);
        EXPECT_NEAR(three_tangle_pure(amplitudes(psi)), ckw_three_tangle(psi), 1e-9);
    }
}

TEST(ThreeTangle, PhaseRedefinitionInvariance) {
    testgen::Gen g(79);
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexVector psi = g.state(8);
        const double tau = three_tangle_pure(amplitudes(psi));
        // Local phase on one qubit's |1> basis vector.
        const std::size_t q = g.index(0, 2);
        const cplx phase = std::polar(1.0, g.uniform(0.0, 6.3));
        ComplexVector rotated = psi;
        for (int i = 0; i < 8; ++i)
            if ((i >> (2 - q)) & 1)
                rotated(i) *= phase;
        EXPECT_NEAR(three_tangle_pure(amplitudes(rotated)), tau, 1e-12);
        EXPECT_NEAR(three_tangle_pure(amplitudes(std::polar(1.0, 0.7) * psi)), tau, 1e-12);
    }
}

TEST(ThreeTangle, RejectsUnnormalized) {
    ThreeQubitAmplitudes a{};
    a[0] = 2.0;
    EXPECT_THROW(three_tangle_pure(a), std::invalid_argument);
}

TEST(Projection, SupportedStateHasNoLeak) {
    const auto l = SpaceLayout::tripartite(5, 3);
    testgen::Gen g(80);
    ComplexVector psi = ComplexVector::Zero(30);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t m = 0; m < 2; ++m)
            for (std::size_t k = 0; k < 2; ++k)
                psi(l.index({s, m, k})) = cplx(g.normal(), g.normal());
    psi /= psi.norm();
    const auto p = project_to_three_qubits(psi, l);
    EXPECT_NEAR(p.leaked_weight, 0.0, 1e-15);
    EXPECT_TRUE(p.reliable());
    EXPECT_LT(std::abs(p.amplitudes[4 * 1 + 2 * 1 + 0] - psi(l.index({1, 1, 0}))), 1e-15);
}

TEST(Projection, FullyLeakedState) {
    const auto l = SpaceLayout::tripartite(4, 2);
    const auto p = project_to_three_qubits(basis_state(l.index({1, 2, 0}), l.total()), l);
    EXPECT_EQ(p.leaked_weight, 1.0);
    EXPECT_FALSE(p.reliable());
}

TEST(Projection, PartialLeakRenormalizes) {
    const auto l = SpaceLayout::tripartite(4, 2);
    ComplexVector psi = ComplexVector::Zero(16);
    psi(l.index({0, 0, 0})) = std::sqrt(0.9);
    psi(l.index({1, 3, 1})) = std::sqrt(0.1);
    const auto p = project_to_three_qubits(psi, l);
    EXPECT_NEAR(p.leaked_weight, 0.1, 1e-15);
    EXPECT_FALSE(p.reliable());
    EXPECT_NEAR(std::abs(p.amplitudes[0]), 1.0, 1e-15);
}
