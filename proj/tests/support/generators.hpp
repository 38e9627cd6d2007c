#pragma once

// Seeded random inputs for property tests.

#include "tripartite/core/matrix.hpp"
#include "tripartite/core/matrix_exp.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace testgen {

using tripartite::ComplexMatrix;
using tripartite::ComplexVector;
using tripartite::cplx;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    ComplexMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
        ComplexMatrix m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = cplx(normal(), normal());
        return m;
    }

    ComplexMatrix hermitian(Eigen::Index n) {
        const ComplexMatrix g = matrix(n, n);
        return 0.5 * (g + g.adjoint());
    }

    ComplexVector state(Eigen::Index n) {
        ComplexVector v = matrix(n, 1);
        return v / v.norm();
    }

    /// Mixed state G G† / tr with a rank-`rank` Ginibre factor.
    ComplexMatrix density(Eigen::Index n, Eigen::Index rank) {
        const ComplexMatrix g = matrix(n, rank);
        ComplexMatrix rho = g * g.adjoint();
        return rho / rho.trace();
    }

    ComplexMatrix density(Eigen::Index n) { return density(n, n); }

    ComplexMatrix unitary(Eigen::Index n) {
        return tripartite::matrix_exp(cplx(0.0, 1.0) * hermitian(n));
    }

private:
    std::mt19937_64 rng_;
};

/// Eigenvalues from Eigen's solver, used as the independent oracle.
inline Eigen::VectorXd oracle_eigenvalues(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline double oracle_trace_norm(const ComplexMatrix& h) { return oracle_eigenvalues(h).cwiseAbs().sum(); }

} // namespace testgen
